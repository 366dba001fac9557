from enum import Enum

class PrepMode(Enum):
        SEQUENTIAL = "seq"
        PARALLEL = "para"
        G_PARA = "gpara"
        TRADEOFF = "tradeoff"

class Engine(Enum):
        EXACT = "exact"
        CASCADE = "cascade"

class PPlusModel(Enum):
        WORST_CASE_HALF = "half"
        ANALYTIC = "analytic"
        FIXED = "fixed"

class SamplingCase(Enum):
        UNIFORM = 1
        GAUSSIAN = 2
