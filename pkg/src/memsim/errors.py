"""Exception hierarchy shared by all memsim modules."""


class MemsimError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(MemsimError):
    """Scenario or parameter file is missing, malformed, or inconsistent."""


class StateOutOfBounds(MemsimError):
    """Internal state left its admissible interval beyond tolerance."""


class OutOfValidityRange(MemsimError):
    """Tunnel-barrier auxiliaries left the region where the formulas hold."""


class OverflowCap(MemsimError):
    """An exp/sinh argument exceeded the configured cap (bad parameter set)."""


class NoConvergence(MemsimError):
    """An iterative solve exhausted its iteration budget or bracket."""


class SolverDiverged(MemsimError):
    """Adaptive integrator could not meet tolerance above the minimum step."""


class InsufficientData(MemsimError):
    """A trace does not contain the features required by an analysis."""
