"""Assembly, evaluation, normalization and residual checks of the radial
wavefunction R(r) = r^((k-1)/2) e^(-br) u(r) built from a series solution.

Half-integer prefactor powers (even k) are evaluated through
exp(p * ln r) for r > 0 with the r -> 0 limit special-cased, which avoids
pow-of-negative pitfalls and keeps precision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import (
    DegenerateWavefunctionError,
    DomainError,
    ExtrapolationWarning,
    SingularPointError,
)
from .model import MassProfile, PotentialSpec, SeriesSolution

__all__ = [
    "RadialWavefunction",
    "trust_radius",
    "evaluate",
    "normalize",
    "ode_residual",
    "count_nodes",
    "coulomb_a0_reference",
]

# A series value is trusted while the last retained term stays below this
# fraction of the absolute-value envelope of the partial sum.
TRUST_RATIO = 1e-3


def trust_radius(solution: SeriesSolution, ratio: float = TRUST_RATIO) -> float:
    """Radius up to which the truncated series is considered reliable.

    Defined as the r where the last retained term reaches ``ratio`` times the
    absolute-value envelope sum_i |a_i| r^i (the envelope is used instead of
    the signed partial sum so interior nodes do not produce spurious cutoffs;
    the ratio |a_M| r^M / envelope is monotone in r, so the crossing is
    unique).  A series whose trailing coefficients vanish (a terminated
    polynomial) is trusted everywhere.
    """
    coeffs = solution.coeffs
    last = abs(float(coeffs[-1]))
    if last == 0.0 or coeffs.size == 1:
        return math.inf

    abs_coeffs = np.abs(coeffs)
    order = coeffs.size - 1

    def excess(r: float) -> float:
        env = 0.0
        for c in abs_coeffs[::-1]:
            env = env * r + c
        return last * r**order - ratio * env

    # overflow in either side of the comparison means the scan ran far past
    # any usable radius; treating it as "exceeded" keeps the result finite
    # and conservative
    lo = 1e-12
    hi = lo
    for _ in range(220):
        val = excess(hi)
        if val > 0 or not math.isfinite(val):
            break
        hi *= 2.0
    else:
        return math.inf
    lo = hi / 2.0
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        val = excess(mid)
        if val > 0 or not math.isfinite(val):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RadialWavefunction:
    """A series solution packaged with its evaluation trust cutoff."""

    solution: SeriesSolution
    eval_cutoff: float
    normalized: bool = False

    @classmethod
    def from_solution(cls, solution: SeriesSolution) -> "RadialWavefunction":
        return cls(solution, trust_radius(solution))

    @property
    def k(self) -> int:
        return self.solution.quantum.k

    @property
    def prefactor_power(self) -> float:
        return (self.k - 1) / 2.0


def _u_derivs(coeffs: np.ndarray, r: float) -> tuple[float, float, float]:
    """Horner evaluation of u, u', u'' at a scalar radius."""
    u = up = upp = 0.0
    for c in coeffs[::-1]:
        upp = upp * r + 2.0 * up
        up = up * r + u
        u = u * r + c
    return u, up, upp


def _eval_R(w: RadialWavefunction, r: float) -> float:
    p = w.prefactor_power
    if r == 0.0:
        if p > 0:
            return 0.0
        # k = 1: prefactor is r^0
        return float(w.solution.coeffs[0])
    b = w.solution.b
    u, _, _ = _u_derivs(w.solution.coeffs, r)
    return math.exp(p * math.log(r) - b * r) * u


def _eval_R_derivs(w: RadialWavefunction, r: float) -> tuple[float, float, float]:
    """R, R', R'' from analytically differentiated series (r > 0)."""
    p = w.prefactor_power
    b = w.solution.b
    u, up, upp = _u_derivs(w.solution.coeffs, r)
    g = p / r - b
    pref = math.exp(p * math.log(r) - b * r)
    R = pref * u
    Rp = pref * (up + g * u)
    Rpp = pref * (upp + 2.0 * g * up + (g * g - p / (r * r)) * u)
    return R, Rp, Rpp


def evaluate(w: RadialWavefunction, r) -> float | np.ndarray:
    """Truncated-series value of R at radius r >= 0 (scalar or array).

    Radii beyond the trust cutoff are evaluated anyway but flagged with an
    ExtrapolationWarning.
    """
    arr = np.asarray(r, float)
    if np.any(arr < 0):
        raise DomainError("radius must be >= 0")
    if np.any(arr > w.eval_cutoff):
        warnings.warn(
            f"evaluating beyond the series trust region (r > {w.eval_cutoff:.6g})",
            ExtrapolationWarning,
            stacklevel=2,
        )
    if arr.ndim == 0:
        return _eval_R(w, float(arr))
    return np.array([_eval_R(w, float(x)) for x in arr])


def normalize(w: RadialWavefunction, r_max: float) -> RadialWavefunction:
    """Rescale a0 so that the norm of R over (0, infinity) is one.

    The integral is adaptive quadrature of R^2 over (0, r_max) plus the
    exponential-envelope tail estimate R(r_max)^2 / (2b) for the remainder.
    """
    if r_max <= 0:
        raise DomainError("r_max must be positive")
    def integrand(x: float) -> float:
        v = float(_eval_R(w, x))
        return min(v * v, 1e300)  # cap instead of overflowing inside quad

    with np.errstate(over="ignore", invalid="ignore"):
        integral, _ = quad(
            integrand, 0.0, r_max, epsabs=1e-10, epsrel=1e-12, limit=400
        )
        integral += integrand(r_max) / (2.0 * w.solution.b)
    if integral >= 1e299:
        integral = math.inf
    if not math.isfinite(integral) or integral <= 0.0:
        raise DegenerateWavefunctionError(
            f"normalization integral is degenerate ({integral!r})"
        )
    scale = 1.0 / math.sqrt(integral)
    return replace(w, solution=w.solution.scaled(scale), normalized=True)


def ode_residual(
    w: RadialWavefunction,
    pot: PotentialSpec,
    mass: MassProfile,
    e: float,
    r: float,
) -> float:
    """Absolute residual of the radial equation applied to the truncated series.

    Evaluates |R'' + (m'/m) ((N-1)/(2r) - d/dr) R - (k-1)(k-3)/(4r^2) R
    + 2 m (E - V) R| with analytically differentiated series (no finite
    differences enter the residual itself).
    """
    if r <= 0:
        raise SingularPointError("residual is undefined at the r = 0 singular point")
    q = w.solution.quantum
    k = q.k
    R, Rp, Rpp = _eval_R_derivs(w, r)
    md = mass.logderiv_at(r)
    m = mass.mass_at(r)
    v = pot.value(r)
    res = (
        Rpp
        + md * ((q.dim_n - 1) / (2.0 * r) * R - Rp)
        - (k - 1) * (k - 3) / (4.0 * r * r) * R
        + 2.0 * m * (e - v) * R
    )
    return abs(res)


def count_nodes(w: RadialWavefunction, r_max: float, samples: int = 2048) -> int:
    """Count sign changes of R on (0, r_max).

    The prefactor r^((k-1)/2) e^(-br) is positive, so nodes of R are nodes of
    the series factor u.  Sign changes on a uniform grid are confirmed by
    bisection refinement; samples that are exactly zero are skipped so that
    near-zero touches without an actual crossing are not counted.
    """
    if samples < 100:
        raise DomainError("need at least 100 samples")
    if r_max <= 0:
        raise DomainError("r_max must be positive")
    coeffs = w.solution.coeffs

    def u_of(r: float) -> float:
        acc = 0.0
        for c in coeffs[::-1]:
            acc = acc * r + c
        return acc

    grid = np.linspace(0.0, r_max, samples + 1)[1:]
    values = [u_of(float(r)) for r in grid]
    count = 0
    prev_r = None
    prev_v = 0.0
    for r, v in zip(grid, values):
        if v == 0.0:
            continue
        if prev_r is not None and (prev_v < 0) != (v < 0):
            if _confirm_crossing(u_of, prev_r, r):
                count += 1
        prev_r, prev_v = float(r), v
    return count


def _confirm_crossing(f, lo: float, hi: float) -> bool:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0 or fhi == 0.0:
        return True
    if (flo < 0) == (fhi < 0):
        return False
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return True
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return True


def coulomb_a0_reference(a_coupling: float, m0: float, n: int, ell: int) -> float:
    """Closed-form reference scale for the leading 3-d Coulomb coefficient.

    The solver normalizes under the integral of R^2 dr; this reference value
    follows a different convention, so callers report the ratio of the two
    rather than asserting equality.
    """
    if a_coupling <= 0 or m0 <= 0:
        raise DomainError("requires positive coupling and mass")
    nlp = n + ell + 1
    base = 2.0 * a_coupling * m0 / nlp
    log_fact = 0.5 * (
        math.log(a_coupling * m0) + gammaln(n + 1) - gammaln(n + 2 * ell + 2)
    )
    return (base ** (ell + 1)) / nlp * math.exp(log_fact)
