"""memsim: comparative switching-dynamics simulation of memristor models."""

__version__ = "0.1.0"

from .analysis import (AnalysisOptions, AnalysisReport, analyze_trace,
                       build_summary_table, estimate_threshold,
                       extract_switching_times, linearity_metric,
                       pinched_check, symmetry_metric)
from .drive import DriveSignal, pulse_train, sine, triangle
from .errors import (ConfigError, InsufficientData, MemsimError,
                     NoConvergence, OutOfValidityRange, OverflowCap,
                     SolverDiverged, StateOutOfBounds)
from .models import (DeviceState, PickettModel, PickettParams, StrukovModel,
                     StrukovParams, YangModel, YangParams, pickett_aux,
                     pickett_current, pickett_dwdt, strukov_dwdt,
                     strukov_memristance, yang_current, yang_dwdt)
from .scenario import (Scenario, build_scenario, find_scenario, list_scenarios,
                       load_scenario, run_scenario, run_sweep)
from .solver import SolverConfig, integrate, port_solve, solve_gap_voltage
from .trace import Trace
