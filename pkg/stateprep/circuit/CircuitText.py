"""
Line oriented text form of a Circuit.

    qubits <k>
    depth <d>
    # optional comment lines
    <gate line>
    ...
    ---
    <gate line>

Gate lines: `u qI <re00 im00 re01 im01 re10 im10 re11 im11>`, `cx qC qT`,
`cswap qC qA qB`, `ccswap qC1 qC2 qA qB P1P2`, `proj qK plus|minus|zero|one`.
Layers are separated by `---`. Floats are written with repr so parsing gives
back the same bits.
"""

# from the standard library
import logging

# our code
from stateprep.circuit.Circuit import Circuit, Gate
from stateprep.circuit.GateKind import GateKind

LAYER_SEPARATOR = "---"

_BAD_HEADER_MSG = "line {}: expected '{} <int>', got {!r}"
_BAD_GATE_MSG = "line {}: cannot read gate {!r}"
_BAD_DEPTH_MSG = "header declares depth {} but {} layers follow"


class CircuitParseError(ValueError):
    """
    Exception to raise when circuit text is malformed
    """

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


def _number(x):
    return repr(float(x) + 0.0)


def _qubit(q):
    return "q{}".format(q)


def emit_gate(gate):
    qubits = [_qubit(q) for q in gate.qubits]
    if gate.kind is GateKind.U1Q:
        floats = []
        for value in gate.matrix:
            floats.extend((_number(value.real), _number(value.imag)))
        return " ".join(["u"] + qubits + floats)
    if gate.kind is GateKind.CCSWAP:
        return " ".join(["ccswap"] + qubits + ["{}{}".format(*gate.polarity)])
    if gate.kind is GateKind.PROJECT:
        return " ".join(["proj"] + qubits + [gate.onto])
    return " ".join([gate.kind.value] + qubits)


def emit(circuit, comments=()):
    '''
    @return the text form, header first, gates of a layer ordered by qubit
    '''
    lines = ["qubits {}".format(circuit.num_qubits), "depth {}".format(circuit.depth)]
    lines.extend("# {}".format(comment) for comment in comments)
    for index, layer in enumerate(circuit.layers):
        if index:
            lines.append(LAYER_SEPARATOR)
        lines.extend(emit_gate(gate) for gate in sorted(layer, key=lambda g: g.sort_key()))
    return "\n".join(lines) + "\n"


def _parse_qubit(token, number):
    if not token.startswith("q") or not token[1:].isdigit():
        raise CircuitParseError(_BAD_GATE_MSG.format(number, token), number)
    return int(token[1:])


def parse_gate(line, number=None):
    tokens = line.split()
    kind = tokens[0]
    try:
        if kind == "u" and len(tokens) == 10:
            values = [float(t) for t in tokens[2:]]
            matrix = [complex(values[i], values[i + 1]) for i in range(0, 8, 2)]
            return Gate.u(_parse_qubit(tokens[1], number), [matrix[:2], matrix[2:]])
        if kind == "cx" and len(tokens) == 3:
            return Gate.cx(*(_parse_qubit(t, number) for t in tokens[1:]))
        if kind == "cswap" and len(tokens) == 4:
            return Gate.cswap(*(_parse_qubit(t, number) for t in tokens[1:]))
        if kind == "ccswap" and len(tokens) == 6 and len(tokens[5]) == 2:
            c1, c2, a, b = (_parse_qubit(t, number) for t in tokens[1:5])
            return Gate.ccswap(c1, c2, int(tokens[5][0]), int(tokens[5][1]), a, b)
        if kind == "proj" and len(tokens) == 3:
            return Gate.project(_parse_qubit(tokens[1], number), tokens[2])
    except CircuitParseError:
        raise
    except ValueError as error:
        raise CircuitParseError("line {}: {}".format(number, error), number) from error
    raise CircuitParseError(_BAD_GATE_MSG.format(number, line.strip()), number)


def _header(lines, name):
    number, line = next(lines, (None, ""))
    tokens = line.split()
    if len(tokens) != 2 or tokens[0] != name or not tokens[1].isdigit():
        raise CircuitParseError(_BAD_HEADER_MSG.format(number, name, line.strip()), number)
    return int(tokens[1])


def parse(text):
    '''
    Inverse of emit. Blank lines and # comments are ignored.

    @raise CircuitParseError (a ValueError) on malformed text, on overlapping
        gates in a layer and on a depth header that does not match
    '''
    lines = ((number, line) for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#"))
    circuit = Circuit(_header(lines, "qubits"))
    depth = _header(lines, "depth")

    layers = []
    current = []
    for number, line in lines:
        if line.strip() == LAYER_SEPARATOR:
            layers.append(current)
            current = []
        else:
            current.append(parse_gate(line, number))
    if current or layers:
        layers.append(current)

    if len(layers) != depth:
        raise CircuitParseError(_BAD_DEPTH_MSG.format(depth, len(layers)))
    for layer in layers:
        try:
            circuit.add_layer(layer)
        except ValueError as error:
            raise CircuitParseError(str(error)) from error
    logging.debug("Parsed circuit of %d qubits and depth %d", circuit.num_qubits, depth)
    return circuit


def write_circuit(path, circuit, comments=()):
    with open(path, "w", encoding="ascii") as handle:
        handle.write(emit(circuit, comments))
    logging.info("Wrote circuit of depth %d to %s", circuit.depth, path)


def read_circuit(path):
    with open(path, "r", encoding="ascii") as handle:
        return parse(handle.read())
