"""
Domain core for the Bohr radius lab

The one-parameter family of disks
    Omega_gamma = { z : |z + gamma/(1-gamma)| < 1/(1-gamma) },  0 <= gamma < 1,
which always contains the unit disk, plus the error hierarchy and the
radius carrier shared by every other module.
"""

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


# --- Errors -----------------------------------------------------------------

class BohrLabError(Exception):
    """Base error; exit_code is what the command line reports."""
    exit_code = 1


class ParameterError(BohrLabError, ValueError):
    exit_code = 2


class DomainParameterError(ParameterError):
    pass


class InvalidRadiusError(ParameterError):
    pass


class InapplicableParameterError(ParameterError):
    pass


class PreconditionError(ParameterError):
    pass


class NonzeroConstantTermError(ParameterError):
    pass


class DivergentSeriesError(ParameterError):
    pass


class ConfigError(BohrLabError):
    exit_code = 2


class NumericalError(BohrLabError):
    exit_code = 3


class RootNotFoundError(NumericalError):
    pass


class NoSignChangeError(RootNotFoundError):
    pass


class SamplingError(NumericalError):
    pass


# --- Domain -----------------------------------------------------------------

@dataclass(frozen=True)
class GammaDomain:
    gamma: float
    center: float
    radius: float

    def to_unit_disk(self, w):
        """Affine map H(w) = (1-gamma) w + gamma sending Omega_gamma onto the unit disk."""
        return (1.0 - self.gamma) * w + self.gamma

    def from_unit_disk(self, z):
        return (z - self.gamma) / (1.0 - self.gamma)


def make_domain(gamma: float) -> GammaDomain:
    gamma = float(gamma)
    if not math.isfinite(gamma):
        raise DomainParameterError(f"gamma must be finite, got {gamma}")
    if not 0.0 <= gamma < 1.0:
        raise DomainParameterError(f"gamma must lie in [0,1), got {gamma}")
    return GammaDomain(gamma=gamma, center=-gamma / (1.0 - gamma), radius=1.0 / (1.0 - gamma))


def contains(domain: GammaDomain, z) -> bool:
    """True iff |z - center| < radius. Accepts a scalar or an array (all points must lie inside)."""
    return bool(np.all(np.abs(np.asarray(z, dtype=complex) - domain.center) < domain.radius))


# --- Radius carrier ---------------------------------------------------------

class RadiusMethod(enum.Enum):
    CLOSED_FORM = 'closed-form'
    BRACKETED_ROOT = 'bracketed-root'


@dataclass(frozen=True)
class RadiusResult:
    value: float
    method: RadiusMethod
    tolerance: float
    bracket: tuple[float, float] | None = None
    label: str = ''

    def __post_init__(self):
        if not 0.0 < self.value <= 1.0:
            raise NumericalError(f"radius {self.label or ''} outside (0,1]: {self.value}")
        if self.tolerance <= 0:
            raise NumericalError(f"tolerance must be positive, got {self.tolerance}")
        if self.method is RadiusMethod.BRACKETED_ROOT:
            if self.bracket is None:
                raise NumericalError("bracketed-root result without a bracket")
            lo, hi = self.bracket
            if not lo <= self.value <= hi or hi - lo > 2.0 * self.tolerance:
                raise NumericalError(f"bracket {self.bracket} does not certify {self.value} to {self.tolerance}")
