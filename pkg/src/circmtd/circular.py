"""Circular-angle primitives and binding density families.

Angles live on the half-open interval [-pi, pi). The two binding density
families used throughout (wrapped Cauchy and von Mises) are symmetric,
strictly positive densities on the circle with closed-form trigonometric
moments and exact samplers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ive

TWO_PI = 2.0 * np.pi

# Compact estimation space for the concentration parameters. Evaluation and
# sampling accept the full natural domain; these margins only bound the MLE.
RHO_MIN = 1e-4
RHO_MAX = 1.0 - 1e-4
KAPPA_MIN = 1e-4
KAPPA_MAX = 500.0


def wrap(x):
    """Reduce an angle (or array of angles) to [-pi, pi).

    Parameters
    ----------
    x : float or array_like
        Angle in radians. Must be finite.

    Returns
    -------
    float or ndarray
        ``x`` modulo 2*pi, mapped into [-pi, pi).
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("angle must be finite")
    out = np.mod(arr + np.pi, TWO_PI) - np.pi
    if np.ndim(x) == 0:
        return float(out)
    return out


def mean_resultant_length(angles) -> float:
    """Modulus of the sample first trigonometric moment."""
    angles = np.asarray(angles, dtype=float)
    return float(np.abs(np.mean(np.exp(1j * angles))))


def sample_trig_moment(angles, m: int) -> complex:
    """Sample m-th trigonometric moment (1/n) sum exp(i*m*theta)."""
    angles = np.asarray(angles, dtype=float)
    return complex(np.mean(np.exp(1j * m * angles)))


def rayleigh_test(angles) -> tuple[float, float]:
    """Rayleigh test of circular uniformity.

    Returns
    -------
    z, p : float
        Test statistic z = n*R**2 and approximate p-value
        (Wilkie's approximation, adequate for n >= 10).
    """
    angles = np.asarray(angles, dtype=float)
    n = len(angles)
    r = mean_resultant_length(angles)
    z = n * r**2
    p = np.exp(-z) * (
        1.0
        + (2.0 * z - z**2) / (4.0 * n)
        - (24.0 * z - 132.0 * z**2 + 76.0 * z**3 - 9.0 * z**4) / (288.0 * n**2)
    )
    return float(z), float(min(max(p, 0.0), 1.0))


@dataclass(frozen=True)
class AngleSeries:
    """An ordered sequence of angles in radians, wrapped to [-pi, pi).

    Parameters
    ----------
    values : array_like
        Angles; wrapped on construction.
    origin : float, optional
        Timestamp of the first observation (plumbing only).
    step : float, optional
        Sampling interval (plumbing only).
    """

    values: np.ndarray
    origin: float | None = None
    step: float | None = None

    def __post_init__(self):
        vals = wrap(np.atleast_1d(np.asarray(self.values, dtype=float)))
        if vals.size < 1:
            raise ValueError("series must contain at least one angle")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


class BindingDensity:
    """Common interface of the circular binding density families."""

    family: str = ""
    concentration: float = 0.0
    mean_direction: float = 0.0

    def density(self, theta):
        return np.exp(self.log_density(theta))

    def log_density(self, theta):  # pragma: no cover - abstract
        raise NotImplementedError

    def trig_moment(self, m: int) -> tuple[float, float]:
        """Return (rho_m, mu_m), modulus and argument of E[exp(i*m*Theta)]."""
        if m < 1:
            raise ValueError("moment order m must be >= 1")
        return self._moment_modulus(m), wrap(m * self.mean_direction)

    def _moment_modulus(self, m: int) -> float:  # pragma: no cover - abstract
        raise NotImplementedError

    def sample(self, n: int, rng) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def draw(self, n: int, rng_seed: int) -> AngleSeries:
        """n i.i.d. draws as an :class:`AngleSeries`, reproducible by seed."""
        if n < 1:
            raise ValueError("sample size must be >= 1")
        rng = np.random.default_rng(rng_seed)
        return AngleSeries(self.sample(n, rng))

    def to_dict(self) -> dict:
        d = {"family": self.family, "concentration": self.concentration}
        if self.mean_direction != 0.0:
            d["mean_direction"] = self.mean_direction
        return d


@dataclass(frozen=True)
class WrappedCauchy(BindingDensity):
    """Wrapped Cauchy density with mean resultant length ``concentration``.

    pdf(theta) = (1 - rho^2) / (2*pi*(1 + rho^2 - 2*rho*cos(theta - mu))),
    with m-th trigonometric moment rho^m * exp(i*m*mu).
    """

    concentration: float = 0.0
    mean_direction: float = 0.0
    family: str = field(default="wrapped_cauchy", init=False)

    def __post_init__(self):
        if not 0.0 <= self.concentration < 1.0:
            raise ValueError("wrapped Cauchy concentration must lie in [0, 1)")
        object.__setattr__(self, "mean_direction", wrap(self.mean_direction))

    def log_density(self, theta):
        rho = self.concentration
        d = np.asarray(theta, dtype=float) - self.mean_direction
        val = np.log1p(-rho**2) - np.log(TWO_PI) - np.log1p(rho**2 - 2.0 * rho * np.cos(d))
        return float(val) if np.ndim(theta) == 0 else val

    def _moment_modulus(self, m: int) -> float:
        return self.concentration**m

    def sample(self, n: int, rng) -> np.ndarray:
        # Closed-form quantile: theta = mu + 2*atan(((1-rho)/(1+rho)) * tan(pi*(u-1/2)))
        rho = self.concentration
        u = rng.random(n)
        core = 2.0 * np.arctan((1.0 - rho) / (1.0 + rho) * np.tan(np.pi * (u - 0.5)))
        return wrap(core + self.mean_direction)


@dataclass(frozen=True)
class VonMises(BindingDensity):
    """Von Mises density with concentration ``concentration`` (kappa).

    pdf(theta) = exp(kappa*cos(theta - mu)) / (2*pi*I0(kappa)), with m-th
    trigonometric moment (I_m(kappa)/I0(kappa)) * exp(i*m*mu).
    """

    concentration: float = 0.0
    mean_direction: float = 0.0
    family: str = field(default="von_mises", init=False)

    def __post_init__(self):
        if not (np.isfinite(self.concentration) and self.concentration >= 0.0):
            raise ValueError("von Mises concentration must be finite and >= 0")
        object.__setattr__(self, "mean_direction", wrap(self.mean_direction))

    def log_density(self, theta):
        kappa = self.concentration
        d = np.asarray(theta, dtype=float) - self.mean_direction
        # kappa*(cos d - 1) - log(2*pi*ive(0,kappa)) avoids exp overflow at large kappa
        val = kappa * (np.cos(d) - 1.0) - np.log(TWO_PI * ive(0, kappa))
        return float(val) if np.ndim(theta) == 0 else val

    def _moment_modulus(self, m: int) -> float:
        return float(ive(m, self.concentration) / ive(0, self.concentration))

    def sample(self, n: int, rng) -> np.ndarray:
        return wrap(rng.vonmises(self.mean_direction, self.concentration, n))


_FAMILIES = {"wrapped_cauchy": WrappedCauchy, "von_mises": VonMises}


def make_binding(family: str, concentration: float, mean_direction: float = 0.0) -> BindingDensity:
    """Construct a binding density by family name."""
    try:
        cls = _FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown binding density family {family!r}") from None
    return cls(concentration=concentration, mean_direction=mean_direction)


def binding_from_dict(d: dict) -> BindingDensity:
    return make_binding(d["family"], float(d["concentration"]), float(d.get("mean_direction", 0.0)))


def bessel_ratio(m: int, kappa: float) -> float:
    """I_m(kappa)/I0(kappa), overflow-free for large kappa."""
    return float(ive(m, kappa) / ive(0, kappa))
