from enum import Enum

class GateKind(Enum):
        U1Q = "u"
        CNOT = "cx"
        CSWAP = "cswap"
        CCSWAP = "ccswap"
        PROJECT = "proj"

        @property
        def arity(self):
                return {"u": 1, "cx": 2, "cswap": 3, "ccswap": 4, "proj": 1}[self.value]
