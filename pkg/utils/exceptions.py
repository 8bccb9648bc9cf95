"""
Exception hierarchy for pnpvamp

Every error derives from PnpVampError and from the builtin a caller
would naturally catch (ValueError for bad inputs, RuntimeError for
numerical breakdowns).
"""

from typing import Any, Dict, Optional


class PnpVampError(Exception):
    """Base class for all pnpvamp errors"""


class InvalidDimensionError(PnpVampError, ValueError):
    """Vector, matrix or operator sizes do not fit together"""


class InvalidSpectrumError(PnpVampError, ValueError):
    """Singular values or condition numbers out of range"""


class InvalidDenoiserError(PnpVampError, ValueError):
    """Denoiser parameters, weights or requests are invalid"""


class ConfigError(PnpVampError, ValueError):
    """Experiment or settings configuration could not be parsed"""


class PgmFormatError(PnpVampError, ValueError):
    """Malformed or unsupported PGM image"""


class NonFiniteStateError(PnpVampError, RuntimeError):
    """An iterate became NaN or infinite"""

    def __init__(self, message: str, iteration: int):
        super().__init__(f"{message} (iteration {iteration})")
        self.iteration = iteration


class ScenarioError(PnpVampError, RuntimeError):
    """A scenario cell failed; carries the cell coordinates"""

    def __init__(
        self,
        message: str,
        scenario: str,
        coordinates: Optional[Dict[str, Any]] = None,
    ):
        self.scenario = scenario
        self.coordinates = dict(coordinates or {})
        coords = ", ".join(f"{k}={v}" for k, v in self.coordinates.items())
        super().__init__(f"[{scenario}] {message}" + (f" at {coords}" if coords else ""))
