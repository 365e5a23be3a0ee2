"""Domain types shared by every module: potentials, quantum numbers, mass
profiles, series solutions and solver results.

All types are immutable after construction and validate their invariants in
``__post_init__``, so instances can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import gammaln

from .errors import DomainError

__all__ = [
    "PotentialSpec",
    "QuantumNumbers",
    "MassProfile",
    "SeriesSolution",
    "EigenResult",
    "make_cornell",
    "make_coulomb",
    "make_oscillator",
    "make_linear",
    "b_from_energy",
]

# Absolute floor used by the mass-series consistency check (per coefficient,
# scaled by the largest retained coefficient).
_CONSISTENCY_TOL = 1e-12


@dataclass(frozen=True)
class PotentialSpec:
    """Central potential  V(r) = -v1 * r**(-alpha) + v2 * r**beta + v3.

    ``v1`` and ``v2`` are non-negative couplings (zero switches the term
    off), ``v3`` is an energy offset of either sign.  The exponents must be
    non-negative integers so the recurrence index shifts stay integral.
    """

    v1: float
    v2: float
    v3: float
    alpha: int
    beta: int
    allow_free: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if self.v1 < 0 or self.v2 < 0:
            raise DomainError("potential couplings v1, v2 must be >= 0")
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 0:
                raise DomainError(f"exponent {name} must be a non-negative integer")
        if self.v1 == 0 and self.v2 == 0 and not self.allow_free:
            raise DomainError(
                "both couplings vanish; use PotentialSpec.free() for the free particle"
            )

    @classmethod
    def free(cls, v3: float = 0.0) -> "PotentialSpec":
        """Explicit free-particle spec (both couplings zero)."""
        return cls(0.0, 0.0, v3, 1, 1, allow_free=True)

    def value(self, r):
        """Evaluate V at radius ``r`` (scalar or array, r > 0 when alpha > 0)."""
        r = np.asarray(r, dtype=float)
        out = np.full_like(r, self.v3)
        if self.v1 != 0.0:
            out = out - self.v1 * r ** (-float(self.alpha))
        if self.v2 != 0.0:
            out = out + self.v2 * r ** float(self.beta)
        return out if out.ndim else float(out)


def make_cornell(a: float, b_lin: float, c: float) -> PotentialSpec:
    """Coulomb-plus-linear confinement: V(r) = -a/r + b_lin*r + c."""
    if a < 0 or b_lin < 0:
        raise DomainError("cornell couplings must be non-negative")
    return PotentialSpec(v1=a, v2=b_lin, v3=c, alpha=1, beta=1)


def make_coulomb(z: float) -> PotentialSpec:
    """Attractive Coulomb potential V(r) = -z/r."""
    if z <= 0:
        raise DomainError("coulomb coupling z must be positive")
    return PotentialSpec(v1=z, v2=0.0, v3=0.0, alpha=1, beta=0)


def make_oscillator(omega: float) -> PotentialSpec:
    """Harmonic confinement V(r) = omega**2 * r**2."""
    if omega <= 0:
        raise DomainError("oscillator frequency must be positive")
    return PotentialSpec(v1=0.0, v2=omega * omega, v3=0.0, alpha=0, beta=2)


def make_linear(b_lin: float) -> PotentialSpec:
    """Linear confinement V(r) = b_lin * r."""
    if b_lin <= 0:
        raise DomainError("linear coupling must be positive")
    return PotentialSpec(v1=0.0, v2=b_lin, v3=0.0, alpha=0, beta=1)


@dataclass(frozen=True)
class QuantumNumbers:
    """Spatial dimension, orbital and radial quantum numbers.

    The spectrum depends on ``dim_n`` and ``ell`` only through
    ``k = dim_n + 2*ell`` when the mass is constant; ``radial_n`` counts the
    nodes of the radial wavefunction.
    """

    dim_n: int
    ell: int
    radial_n: int = 0

    def __post_init__(self):
        if not isinstance(self.dim_n, (int, np.integer)) or self.dim_n < 1:
            raise DomainError("dimension dim_n must be an integer >= 1")
        if not isinstance(self.ell, (int, np.integer)) or self.ell < 0:
            raise DomainError("angular momentum ell must be an integer >= 0")
        if not isinstance(self.radial_n, (int, np.integer)) or self.radial_n < 0:
            raise DomainError("radial_n must be an integer >= 0")
        assert self.k >= 1

    @property
    def k(self) -> int:
        return self.dim_n + 2 * self.ell


@dataclass(frozen=True)
class MassProfile:
    """Position-dependent mass as a power series about the origin.

    ``mass_series`` holds the coefficients of m(r) (leading entry m0 > 0) and
    ``logderiv_series`` the coefficients of m'(r)/m(r).  ``kind`` tags the
    closed forms ("constant", "exponential") so integrators can evaluate m
    exactly; "custom-series" profiles are exact only within their expansion.
    """

    m0: float
    mass_series: np.ndarray
    logderiv_series: np.ndarray
    kind: str
    lam: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mass_series", np.asarray(self.mass_series, float))
        object.__setattr__(
            self, "logderiv_series", np.asarray(self.logderiv_series, float)
        )
        if self.m0 <= 0:
            raise DomainError("m0 must be positive")
        if self.mass_series.ndim != 1 or self.mass_series.size == 0:
            raise DomainError("mass_series must be a non-empty 1-d coefficient vector")
        if self.mass_series[0] != self.m0:
            raise DomainError("mass_series[0] must equal m0")
        if self.kind not in ("constant", "exponential", "custom-series"):
            raise DomainError(f"unknown mass profile kind {self.kind!r}")
        if self.kind == "exponential" and self.lam <= 0:
            raise DomainError("exponential mass requires lam > 0")
        self._check_consistency()

    def _check_consistency(self):
        # Cauchy product of m'/m and m must reproduce the derivative series
        # of m, coefficient by coefficient, for every retained order.
        b = self.mass_series
        bp = self.logderiv_series
        order = b.size - 1
        if order == 0:
            return
        prod = np.convolve(bp, b)[:order]
        deriv = np.arange(1, order + 1) * b[1:]
        scale = max(1.0, float(np.max(np.abs(b))), float(np.max(np.abs(bp))))
        if np.max(np.abs(prod - deriv)) > _CONSISTENCY_TOL * scale:
            raise DomainError(
                "inconsistent mass profile: logderiv_series * mass_series "
                "does not match the derivative of mass_series"
            )

    @property
    def order(self) -> int:
        return self.mass_series.size - 1

    def mass_at(self, r):
        """m(r), using the closed form when one is known."""
        if self.kind == "constant":
            return self.m0 * np.ones_like(np.asarray(r, float)) if np.ndim(r) else self.m0
        if self.kind == "exponential":
            return self.m0 * np.exp(-self.lam * np.asarray(r, float)) if np.ndim(r) \
                else self.m0 * math.exp(-self.lam * r)
        return _horner(self.mass_series, r)

    def logderiv_at(self, r):
        """m'(r)/m(r), using the closed form when one is known."""
        if self.kind == "constant":
            return np.zeros_like(np.asarray(r, float)) if np.ndim(r) else 0.0
        if self.kind == "exponential":
            return -self.lam * np.ones_like(np.asarray(r, float)) if np.ndim(r) \
                else -self.lam
        return _horner(self.logderiv_series, r)

    def extended(self, order: int) -> "MassProfile":
        """Profile with the series carried to at least ``order``.

        Exact for the closed-form kinds; custom-series profiles cannot be
        extended beyond the coefficients they were built with.
        """
        if order <= self.order:
            return self
        if self.kind == "constant":
            series = np.zeros(order + 1)
            series[0] = self.m0
            return MassProfile(self.m0, series, np.zeros(order + 1), "constant")
        if self.kind == "exponential":
            # m0 (-lam)^nu / nu! via exp/log-gamma so large orders stay finite
            nu = np.arange(order + 1)
            signs = np.where(nu % 2 == 0, 1.0, -1.0)
            series = self.m0 * signs * np.exp(nu * math.log(self.lam) - gammaln(nu + 1))
            logd = np.zeros(order + 1)
            logd[0] = -self.lam
            return MassProfile(self.m0, series, logd, "exponential", self.lam)
        raise DomainError(
            f"custom-series mass profile of order {self.order} cannot be "
            f"extended to order {order}"
        )


def _horner(coeffs: np.ndarray, r):
    acc = np.zeros_like(np.asarray(r, float)) if np.ndim(r) else 0.0
    for c in coeffs[::-1]:
        acc = acc * r + c
    return acc


@dataclass(frozen=True)
class SeriesSolution:
    """Truncated power-series factor u(r) of the ansatz R = r^((k-1)/2) e^(-br) u(r).

    ``scale_log10`` records any overflow-guard rescaling applied during
    generation; the stored coefficients are the true ones times
    10**(-scale_log10).
    """

    energy: float
    b: float
    coeffs: np.ndarray
    a0: float
    truncation_order: int
    quantum: QuantumNumbers
    scale_log10: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, float))
        if self.energy >= 0:
            raise DomainError("series solutions exist for bound states only (E < 0)")
        if self.b <= 0:
            raise DomainError("decay rate b must be positive")
        if self.coeffs.size != self.truncation_order + 1:
            raise DomainError("coefficient vector length must be truncation_order + 1")
        if self.a0 == 0 or self.coeffs[0] != self.a0:
            raise DomainError("leading coefficient a0 must be nonzero and equal coeffs[0]")

    def scaled(self, factor: float) -> "SeriesSolution":
        """Homogeneous rescale of every coefficient (a0 included)."""
        if factor == 0:
            raise DomainError("scale factor must be nonzero")
        return replace(self, coeffs=self.coeffs * factor, a0=self.a0 * factor)


@dataclass(frozen=True)
class EigenResult:
    """Converged eigenvalue with its diagnostics."""

    energy: float
    nodes: int
    norm_const: float
    tail_residual: float
    oracle_gap: float | None = None

    def __post_init__(self):
        if self.norm_const <= 0:
            raise DomainError("norm_const must be positive")


def b_from_energy(e: float, m0: float) -> float:
    """Exponential decay rate b = sqrt(-2 m0 E) of a bound state."""
    if e >= 0:
        raise DomainError("bound-state decay rate requires E < 0")
    if m0 <= 0:
        raise DomainError("m0 must be positive")
    return math.sqrt(-2.0 * m0 * e)
