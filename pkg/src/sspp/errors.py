"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: parse/config problems exit 2,
numeric/estimation problems exit 3, simulation stalls exit 4.
"""


class SSPPError(Exception):
    """Base class for all package errors."""

    code = "E_GENERIC"
    exit_code = 3


class ParseError(SSPPError):
    """Malformed input data or configuration."""

    code = "E_PARSE"
    exit_code = 2


class ConfigError(SSPPError):
    """Invalid run configuration (flags, grids, parameter ranges)."""

    code = "E_CONFIG"
    exit_code = 2


class InvalidParameterError(SSPPError):
    """Model or geometry parameter outside its admissible range."""

    code = "E_PARAM"
    exit_code = 3


class InvalidDiscretizationError(SSPPError):
    """Raster cell size non-positive or larger than the window."""

    code = "E_DISCRETIZATION"
    exit_code = 3


class DomainError(SSPPError):
    """A point lies outside the observation window."""

    code = "E_DOMAIN"
    exit_code = 3


class DegenerateInputError(SSPPError):
    """Too few or coincident points for the requested computation."""

    code = "E_DEGENERATE"
    exit_code = 3


class EstimationError(SSPPError):
    """Likelihood maximization or bootstrap could not complete."""

    code = "E_ESTIMATION"
    exit_code = 3


class SimulationStallError(SSPPError):
    """Accept-reject exceeded the per-point rejection budget."""

    code = "E_STALL"
    exit_code = 4
