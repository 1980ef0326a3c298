"""One-dimensional Levy machinery.

Characteristic triplets with the fixed truncation convention 1_{|b|<=1},
a closed parametric family of Levy measures, symbol evaluation (closed form
where available, checked quadrature otherwise), Laplace exponents of
subordinators, and exact-law increment samplers for every supported driver.

The symbol of a triplet (b, r, nu) is

    psi(t) = i b t - r t^2 / 2
             + int (exp(i x t) - 1 - i x t 1_{|x|<=1}(x)) nu(dx),

so that the driver's characteristic function at time h is exp(h psi(t)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._quad import QuadratureError, fourier_tail, quad_checked

__all__ = [
    "SymmetricStableMeasure", "PoissonAtomMeasure", "FiniteAtomsMeasure",
    "OneSidedStableMeasure", "LevyTriplet1D", "TimeGrid",
    "Brownian", "Poisson", "CompensatedPoisson", "SymmetricStable",
    "StableSubordinator", "DriftedSubordinator",
    "symbol_1d", "driver_symbol", "truncated_second_moment_integral",
    "drift_rescale", "laplace_exponent", "sample_increments",
    "draw_increments", "stable_cf_constant", "scale_triplet",
    "rescale_measure", "QuadratureError",
]

_ALPHA_MARGIN = 1e-6


# ---------------------------------------------------------------------------
# parametric Levy measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetricStableMeasure:
    """Measure with density (scale^alpha / 2) |x|^(-1-alpha) on the line."""

    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        if not (_ALPHA_MARGIN < self.alpha < 2.0 - _ALPHA_MARGIN):
            raise ValueError(
                f"stable index must lie in ({_ALPHA_MARGIN}, {2 - _ALPHA_MARGIN}), "
                f"got {self.alpha}")
        if self.scale < 0:
            raise ValueError("scale must be nonnegative")


@dataclass(frozen=True)
class PoissonAtomMeasure:
    """Single atom: intensity * delta_jump."""

    intensity: float
    jump: float

    def __post_init__(self):
        if self.intensity <= 0:
            raise ValueError("intensity must be positive")
        if self.jump == 0:
            raise ValueError("jump must be nonzero")


@dataclass(frozen=True)
class FiniteAtomsMeasure:
    """Finite measure sum_i intensity_i * delta_{jump_i}."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple((float(l), float(j))
                                                for l, j in self.atoms))
        for lam, jump in self.atoms:
            if lam <= 0:
                raise ValueError("atom intensities must be positive")
            if jump == 0:
                raise ValueError("atom jumps must be nonzero")


@dataclass(frozen=True)
class OneSidedStableMeasure:
    """Measure with density scale*index/Gamma(1-index) * s^(-1-index) on (0, inf).

    Normalised so that int (1 - exp(-b s)) d(measure) = scale * b^index,
    the Laplace exponent of the stable subordinator.
    """

    index: float
    scale: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.index < 1.0):
            raise ValueError("subordinator index must lie in (0, 1)")
        if self.scale < 0:
            raise ValueError("scale must be nonnegative")

    @property
    def density_const(self) -> float:
        return self.scale * self.index / math.gamma(1.0 - self.index)


LevyMeasure1D = (SymmetricStableMeasure | PoissonAtomMeasure
                 | FiniteAtomsMeasure | OneSidedStableMeasure)


def _atoms(measure) -> tuple[tuple[float, float], ...]:
    if isinstance(measure, PoissonAtomMeasure):
        return ((measure.intensity, measure.jump),)
    return measure.atoms


def _is_atomic(measure) -> bool:
    return isinstance(measure, (PoissonAtomMeasure, FiniteAtomsMeasure))


def rescale_measure(measure, c: float):
    """Pushforward of the measure under x -> c*x (None and c=0 give None)."""
    if measure is None or c == 0.0:
        return None
    if isinstance(measure, SymmetricStableMeasure):
        return SymmetricStableMeasure(measure.alpha, abs(c) * measure.scale)
    if _is_atomic(measure):
        return FiniteAtomsMeasure(tuple((lam, c * j) for lam, j in _atoms(measure)))
    if isinstance(measure, OneSidedStableMeasure):
        if c < 0:
            raise ValueError("one-sided measures cannot be mirrored by a "
                             "negative scale")
        return OneSidedStableMeasure(measure.index, c ** measure.index * measure.scale)
    raise TypeError(f"unknown measure {measure!r}")


# ---------------------------------------------------------------------------
# moment functionals of the measures
# ---------------------------------------------------------------------------

def trunc_moment_profile(measure, p: float = 2.0):
    """(exponent, const) with int(|c x|^p ^ 1) d(measure) = const * |c|^exponent.

    Available for the scale-free families (symmetric stable, one-sided
    stable); returns None for atomic measures.
    """
    if isinstance(measure, SymmetricStableMeasure):
        a = measure.alpha
        if p <= a:
            raise ValueError(f"moment order {p} not integrable for index {a}")
        return a, measure.scale ** a * p / (a * (p - a))
    if isinstance(measure, OneSidedStableMeasure):
        rho = measure.index
        k = measure.density_const
        return rho, k * p / (rho * (p - rho))
    return None


def small_jump_profile(measure):
    """(exponent, const) with int_{|c x|<=1} (c x)^2 d(measure) = const*|c|^exp."""
    if isinstance(measure, SymmetricStableMeasure):
        a = measure.alpha
        return a, measure.scale ** a / (2.0 - a)
    if isinstance(measure, OneSidedStableMeasure):
        rho = measure.index
        return rho, measure.density_const / (2.0 - rho)
    return None


def truncated_second_moment_integral(measure, c: float) -> float:
    """int (|c x|^2 ^ 1) d(measure).

    Closed form for the symmetric stable family, exact sums for atomic
    measures, checked quadrature for the one-sided stable family.
    """
    if measure is None or c == 0.0:
        return 0.0
    if isinstance(measure, SymmetricStableMeasure):
        exp_, const = trunc_moment_profile(measure, 2.0)
        return const * abs(c) ** exp_
    if _is_atomic(measure):
        return sum(lam * min((c * j) ** 2, 1.0) for lam, j in _atoms(measure))
    if isinstance(measure, OneSidedStableMeasure):
        k = measure.density_const
        if k == 0.0:
            return 0.0
        rho = measure.index
        s0 = 1.0 / abs(c)
        inner = quad_checked(lambda s: c * c * s * s * k * s ** (-1.0 - rho),
                             0.0, s0, what="one-sided small-jump moment")
        return inner + k * s0 ** (-rho) / rho
    raise TypeError(f"unknown measure {measure!r}")


def small_jump_second_moment(measure, c: float) -> float:
    """int_{|c x|<=1} (c x)^2 d(measure), the small-jump part only."""
    if measure is None or c == 0.0:
        return 0.0
    if _is_atomic(measure):
        return sum(lam * (c * j) ** 2 for lam, j in _atoms(measure)
                   if abs(c * j) <= 1.0)
    profile = small_jump_profile(measure)
    exp_, const = profile
    return const * abs(c) ** exp_


def truncated_p_moment(measure, c: float, p: float) -> float:
    """int (|c x|^p ^ 1) d(measure) for p >= 2."""
    if measure is None or c == 0.0:
        return 0.0
    if _is_atomic(measure):
        return sum(lam * min(abs(c * j) ** p, 1.0) for lam, j in _atoms(measure))
    exp_, const = trunc_moment_profile(measure, p)
    return const * abs(c) ** exp_


def compensator_correction(measure, c: float) -> float:
    """int c*x (1_{|c x|<=1} - 1_{|x|<=1}) d(measure).

    The drift shift picked up when a process is scaled by c while the
    truncation stays fixed.  Vanishes for symmetric measures.
    """
    if measure is None or c == 0.0 or c == 1.0:
        return 0.0
    if isinstance(measure, SymmetricStableMeasure):
        return 0.0  # odd integrand against a symmetric measure
    if _is_atomic(measure):
        total = 0.0
        for lam, j in _atoms(measure):
            ind = (1.0 if abs(c * j) <= 1.0 else 0.0) - (1.0 if abs(j) <= 1.0 else 0.0)
            total += lam * c * j * ind
        return total
    if isinstance(measure, OneSidedStableMeasure):
        k = measure.density_const
        rho = measure.index
        a = abs(c)
        return math.copysign(1.0, c) * k * (a ** rho - a) / (1.0 - rho)
    raise TypeError(f"unknown measure {measure!r}")


def tail_mass(measure) -> float:
    """measure({|x| > 1})."""
    if measure is None:
        return 0.0
    if isinstance(measure, SymmetricStableMeasure):
        return measure.scale ** measure.alpha / measure.alpha
    if _is_atomic(measure):
        return sum(lam for lam, j in _atoms(measure) if abs(j) > 1.0)
    if isinstance(measure, OneSidedStableMeasure):
        return measure.density_const / measure.index
    raise TypeError(f"unknown measure {measure!r}")


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def stable_cf_constant(alpha: float) -> float:
    """c_alpha = int_0^inf (1 - cos u) u^(-1-alpha) du, derived by quadrature.

    Links the standardised symmetric stable measure (density |x|^(-1-a)/2)
    to its symbol -c_alpha |t|^alpha; cached since it is scale free.
    """
    # 2 sin^2(u/2) = 1 - cos(u) without cancellation near zero
    inner = quad_checked(lambda u: 2.0 * math.sin(0.5 * u) ** 2 * u ** (-1.0 - alpha),
                         0.0, 1.0, what="stable constant, inner part")
    cos_tail = fourier_tail(lambda u: u ** (-1.0 - alpha), 1.0, "cos",
                            what="stable constant, tail")
    return inner + 1.0 / alpha - cos_tail


def _jump_symbol(measure, theta: float) -> complex:
    """int (e^{i x t} - 1 - i x t 1_{|x|<=1}) d(measure)."""
    if measure is None or theta == 0.0:
        return 0.0 + 0.0j
    if isinstance(measure, SymmetricStableMeasure):
        a = measure.alpha
        return complex(-stable_cf_constant(a) * (measure.scale * abs(theta)) ** a)
    if _is_atomic(measure):
        total = 0.0 + 0.0j
        for lam, j in _atoms(measure):
            comp = 1j * j * theta if abs(j) <= 1.0 else 0.0
            total += lam * (np.exp(1j * j * theta) - 1.0 - comp)
        return complex(total)
    if isinstance(measure, OneSidedStableMeasure):
        return _one_sided_jump_symbol(measure, theta)
    raise TypeError(f"unknown measure {measure!r}")


def _one_sided_jump_symbol(measure, theta: float) -> complex:
    """Quadrature evaluation for the one-sided stable measure.

    Splits at s = 1: the inner part is fully compensated and smooth after
    the x^2 cancellation; the oscillatory tail goes through Fourier-weighted
    quadrature.  theta < 0 uses psi(-t) = conj(psi(t)).
    """
    k = measure.density_const
    if k == 0.0:
        return 0.0 + 0.0j
    rho = measure.index
    t = abs(theta)
    dens = lambda s: k * s ** (-1.0 - rho)

    re_inner = quad_checked(lambda s: -2.0 * math.sin(0.5 * t * s) ** 2 * dens(s),
                            0.0, 1.0, what="one-sided symbol Re inner")
    im_inner = quad_checked(lambda s: (math.sin(t * s) - t * s) * dens(s),
                            0.0, 1.0, what="one-sided symbol Im inner")
    re_tail = fourier_tail(dens, t, "cos", what="one-sided symbol Re tail") \
        - tail_mass(measure)
    im_tail = fourier_tail(dens, t, "sin", what="one-sided symbol Im tail")
    value = complex(re_inner + re_tail, im_inner + im_tail)
    return value if theta > 0 else value.conjugate()


# ---------------------------------------------------------------------------
# triplets and drivers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevyTriplet1D:
    """Characteristics (b, r, nu) relative to the truncation 1_{|x|<=1}."""

    b: float
    r: float
    nu: LevyMeasure1D | None = None

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("Gaussian variance must be nonnegative")


def symbol_1d(triplet: LevyTriplet1D, theta: float) -> complex:
    """Levy-Khintchine exponent of the triplet at theta.

    Raises QuadratureError (never returns a silent value) if the jump
    integral cannot be evaluated to tolerance.
    """
    if theta == 0.0:
        return 0.0 + 0.0j
    value = 1j * triplet.b * theta - 0.5 * triplet.r * theta * theta
    return value + _jump_symbol(triplet.nu, theta)


def drift_rescale(triplet: LevyTriplet1D, c: float) -> float:
    """Drift of the process c * L relative to the fixed truncation."""
    return c * triplet.b + compensator_correction(triplet.nu, c)


def scale_triplet(triplet: LevyTriplet1D, c: float) -> LevyTriplet1D:
    """Characteristics of c * L; the symbol satisfies psi_c(t) = psi(c t)."""
    if c == 0.0:
        return LevyTriplet1D(0.0, 0.0, None)
    return LevyTriplet1D(drift_rescale(triplet, c), c * c * triplet.r,
                         rescale_measure(triplet.nu, c))


def _small_jump_mean(measure) -> float:
    """int_{0 < s <= 1} s d(measure) for one-sided measures."""
    if measure is None:
        return 0.0
    if _is_atomic(measure):
        return sum(lam * j for lam, j in _atoms(measure) if j <= 1.0)
    if isinstance(measure, OneSidedStableMeasure):
        return measure.density_const / (1.0 - measure.index)
    raise TypeError(f"not a one-sided measure: {measure!r}")


def _check_one_sided(measure):
    if measure is None:
        return
    if isinstance(measure, OneSidedStableMeasure):
        return
    if _is_atomic(measure):
        if all(j > 0 for _, j in _atoms(measure)):
            return
    raise ValueError("subordinator jump measure must be supported on (0, inf)")


@dataclass(frozen=True)
class Brownian:
    sigma: float = 1.0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")

    def triplet(self) -> LevyTriplet1D:
        return LevyTriplet1D(0.0, self.sigma ** 2, None)


@dataclass(frozen=True)
class Poisson:
    intensity: float
    jump: float = 1.0

    def triplet(self) -> LevyTriplet1D:
        nu = PoissonAtomMeasure(self.intensity, self.jump)
        b = self.intensity * self.jump if abs(self.jump) <= 1.0 else 0.0
        return LevyTriplet1D(b, 0.0, nu)


@dataclass(frozen=True)
class CompensatedPoisson:
    intensity: float
    jump: float = 1.0

    def triplet(self) -> LevyTriplet1D:
        nu = PoissonAtomMeasure(self.intensity, self.jump)
        b = -self.intensity * self.jump if abs(self.jump) > 1.0 else 0.0
        return LevyTriplet1D(b, 0.0, nu)


@dataclass(frozen=True)
class SymmetricStable:
    alpha: float
    scale: float = 1.0

    def triplet(self) -> LevyTriplet1D:
        return LevyTriplet1D(0.0, 0.0, SymmetricStableMeasure(self.alpha, self.scale))


@dataclass(frozen=True)
class StableSubordinator:
    """One-sided stable subordinator with E exp(-b l(t)) = exp(-t scale b^index)."""

    index: float
    scale: float = 1.0

    def triplet(self) -> LevyTriplet1D:
        nu = OneSidedStableMeasure(self.index, self.scale)
        return LevyTriplet1D(_small_jump_mean(nu), 0.0, nu)


@dataclass(frozen=True)
class DriftedSubordinator:
    """Nondecreasing driver: drift plus one-sided jumps (possibly none)."""

    drift: float = 0.0
    rho: LevyMeasure1D | None = None

    def __post_init__(self):
        if self.drift < 0:
            raise ValueError("subordinator drift must be nonnegative")
        _check_one_sided(self.rho)

    def triplet(self) -> LevyTriplet1D:
        return LevyTriplet1D(self.drift + _small_jump_mean(self.rho), 0.0, self.rho)


DriverSpec = (Brownian | Poisson | CompensatedPoisson | SymmetricStable
              | StableSubordinator | DriftedSubordinator)

_SUBORDINATORS = (StableSubordinator, DriftedSubordinator)


def driver_symbol(driver: DriverSpec, theta: float) -> complex:
    return symbol_1d(driver.triplet(), theta)


def laplace_exponent(driver: DriverSpec, beta: float) -> float:
    """tau(b) = drift*b + int (1 - exp(-b s)) rho(ds) for subordinators."""
    if not isinstance(driver, _SUBORDINATORS):
        raise TypeError("Laplace exponent is defined for subordinators only")
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    if beta == 0.0:
        return 0.0
    if isinstance(driver, StableSubordinator):
        return driver.scale * beta ** driver.index
    total = driver.drift * beta
    rho = driver.rho
    if rho is None:
        return total
    if isinstance(rho, OneSidedStableMeasure):
        return total + rho.scale * beta ** rho.index
    return total + sum(lam * (1.0 - math.exp(-beta * j)) for lam, j in _atoms(rho))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on [0, horizon] with n_steps steps."""

    horizon: float
    n_steps: int

    def __post_init__(self):
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.n_steps < 0:
            raise ValueError("n_steps must be nonnegative")

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps if self.n_steps else self.horizon

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.n_steps + 1)


def _sample_sas(alpha: float, size, rng) -> np.ndarray:
    """Standard symmetric alpha-stable draws, CF exp(-|t|^alpha) (CMS)."""
    v = rng.uniform(-math.pi / 2, math.pi / 2, size)
    np.clip(v, -math.pi / 2 + 1e-12, math.pi / 2 - 1e-12, out=v)
    if abs(alpha - 1.0) < 1e-12:
        return np.tan(v)
    e = rng.standard_exponential(size)
    np.maximum(e, 1e-300, out=e)
    return (np.sin(alpha * v) / np.cos(v) ** (1.0 / alpha)
            * (np.cos((1.0 - alpha) * v) / e) ** ((1.0 - alpha) / alpha))


def _sample_positive_stable(index: float, size, rng) -> np.ndarray:
    """Positive strictly stable draws with E exp(-b S) = exp(-b^index) (Kanter)."""
    u = rng.uniform(0.0, math.pi, size)
    np.clip(u, 1e-12, math.pi - 1e-12, out=u)
    e = rng.standard_exponential(size)
    np.maximum(e, 1e-300, out=e)
    sin_u = np.sin(u)
    a = ((np.sin(index * u) / sin_u) ** (index / (1.0 - index))
         * np.sin((1.0 - index) * u) / sin_u)
    return (a / e) ** ((1.0 - index) / index)


def draw_increments(driver: DriverSpec, dt: float, size, rng) -> np.ndarray:
    """i.i.d. draws with the exact law of the driver increment over dt."""
    if dt < 0:
        raise ValueError("dt must be nonnegative")
    if isinstance(driver, Brownian):
        return rng.normal(0.0, driver.sigma * math.sqrt(dt), size)
    if isinstance(driver, Poisson):
        return driver.jump * rng.poisson(driver.intensity * dt, size).astype(float)
    if isinstance(driver, CompensatedPoisson):
        counts = rng.poisson(driver.intensity * dt, size).astype(float)
        return driver.jump * (counts - driver.intensity * dt)
    if isinstance(driver, SymmetricStable):
        a = driver.alpha
        scale = (dt * stable_cf_constant(a)) ** (1.0 / a) * driver.scale
        return scale * _sample_sas(a, size, rng)
    if isinstance(driver, StableSubordinator):
        scale = (dt * driver.scale) ** (1.0 / driver.index)
        return scale * _sample_positive_stable(driver.index, size, rng)
    if isinstance(driver, DriftedSubordinator):
        out = np.full(size, driver.drift * dt, dtype=float)
        rho = driver.rho
        if isinstance(rho, OneSidedStableMeasure):
            out += ((dt * rho.scale) ** (1.0 / rho.index)
                    * _sample_positive_stable(rho.index, size, rng))
        elif rho is not None:
            for lam, j in _atoms(rho):
                out += j * rng.poisson(lam * dt, size)
        return out
    raise TypeError(f"unknown driver {driver!r}")


def sample_increments(driver: DriverSpec, grid: TimeGrid, rng) -> np.ndarray:
    """n_steps i.i.d. increments of the driver over the grid step."""
    if grid.n_steps == 0:
        return np.empty(0)
    return draw_increments(driver, grid.dt, grid.n_steps, rng)
