import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from stateprep import StateVector
from stateprep import LabelEncoding
from stateprep import ConcatProtocol
from stateprep import PrepMode
from stateprep import prep_fsm
from stateprep import SeededStreams
from stateprep import PrepAlgorithms
from stateprep import TrialPool
from stateprep import CascadeSim
from stateprep import BoundsLab
from stateprep.circuit import Builders
from stateprep.circuit import Circuit
from stateprep.circuit import CircuitText
from stateprep.circuit import Decompose
from stateprep.circuit import GateKind
from stateprep.circuit import LightCone
import ReportWriter
import qsprep
