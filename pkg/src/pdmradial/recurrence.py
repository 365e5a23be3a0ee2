"""Series-coefficient generation for the radial ansatz R = r^((k-1)/2) e^(-br) u(r).

The master recurrence fixes a_{n+1} from the lower coefficients through three
running convolution tables,

    M_i  = sum_{j+nu=i} a_j b_nu          (wavefunction x mass),
    M'_i = sum_{j+nu=i} a_j b'_nu         (wavefunction x log-derivative),
    T_i  = sum_{j+nu=i} j a_j b'_nu       (T_0 = 0),

with every negative-index entry equal to zero.  Specialized steps for the
Coulomb, oscillator, linear and Cornell potentials and for the exponentially
decaying mass are kept as separate code paths so they can be cross-checked
against the general recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import gammaln

from .errors import DegenerateChannelError, DomainError, UnsupportedExponentError
from .model import (
    MassProfile,
    PotentialSpec,
    QuantumNumbers,
    SeriesSolution,
    b_from_energy,
)

__all__ = [
    "RecurrenceKind",
    "ConvolutionTables",
    "generate_coefficients",
    "coefficient_closed_forms_cornell",
    "coefficient_closed_forms_expmass",
    "coulomb_closed_form_coefficients",
    "coulomb_expmass_closed_forms",
]

# Per-step renormalization threshold for the coefficient overflow guard.
_RESCALE_LIMIT = 1e150


class RecurrenceKind(Enum):
    """Which recurrence drives coefficient generation."""

    GENERAL = "general"
    COULOMB = "coulomb"
    OSCILLATOR = "oscillator"
    LINEAR = "linear"
    CORNELL = "cornell"
    EXP_MASS_CORNELL = "exp_mass_cornell"


@dataclass
class ConvolutionTables:
    """Running convolutions of the coefficient prefix with the mass series."""

    m_table: list = field(default_factory=list)
    mprime_table: list = field(default_factory=list)
    t_table: list = field(default_factory=list)
    filled_to: int = -1

    def m_at(self, i: int) -> float:
        return self.m_table[i] if i >= 0 else 0.0

    def mprime_at(self, i: int) -> float:
        return self.mprime_table[i] if i >= 0 else 0.0

    def t_at(self, i: int) -> float:
        return self.t_table[i] if i >= 0 else 0.0

    def extend(self, a, bmass, blog) -> None:
        """Fill index filled_to + 1 from the coefficient prefix a_0..a_{filled_to+1}."""
        i = self.filled_to + 1
        m = mp = t = 0.0
        top = min(i, len(bmass) - 1)
        for nu in range(top + 1):
            aj = a[i - nu]
            m += aj * bmass[nu]
        top = min(i, len(blog) - 1)
        for nu in range(top + 1):
            j = i - nu
            ab = a[j] * blog[nu]
            mp += ab
            t += j * ab
        self.m_table.append(m)
        self.mprime_table.append(mp)
        self.t_table.append(t)
        self.filled_to = i

    def rescale(self, factor: float) -> None:
        inv = 1.0 / factor
        self.m_table = [v * inv for v in self.m_table]
        self.mprime_table = [v * inv for v in self.mprime_table]
        self.t_table = [v * inv for v in self.t_table]

    @classmethod
    def from_prefix(cls, a, bmass, blog) -> "ConvolutionTables":
        """Recompute every entry from scratch (reference for the incremental path)."""
        tables = cls()
        for _ in range(len(a)):
            tables.extend(a, bmass, blog)
        return tables


def _validate_kind(kind: RecurrenceKind, pot: PotentialSpec, mass: MassProfile) -> None:
    def need(cond: bool, what: str):
        if not cond:
            raise DomainError(f"potential does not match {kind.value} recurrence: {what}")

    if kind is RecurrenceKind.COULOMB:
        need(pot.alpha == 1 and pot.beta == 0, "requires alpha=1, beta=0")
        need(pot.v2 == 0 and pot.v3 == 0, "requires v2 = v3 = 0")
    elif kind is RecurrenceKind.OSCILLATOR:
        need(pot.alpha == 0 and pot.beta == 2, "requires alpha=0, beta=2")
        need(pot.v1 == 0 and pot.v3 == 0, "requires v1 = v3 = 0")
    elif kind is RecurrenceKind.LINEAR:
        need(pot.alpha == 0 and pot.beta == 1, "requires alpha=0, beta=1")
        need(pot.v1 == 0 and pot.v3 == 0, "requires v1 = v3 = 0")
    elif kind is RecurrenceKind.CORNELL:
        need(pot.alpha == 1 and pot.beta == 1, "requires alpha=1, beta=1")
    elif kind is RecurrenceKind.EXP_MASS_CORNELL:
        need(pot.alpha == 1 and pot.beta == 1, "requires alpha=1, beta=1")
        if mass.kind != "exponential":
            raise DomainError("exp-mass recurrence requires an exponential mass profile")


def generate_coefficients(
    kind: RecurrenceKind,
    pot: PotentialSpec,
    mass: MassProfile,
    q: QuantumNumbers,
    e: float,
    order: int,
) -> SeriesSolution:
    """Generate a_0 .. a_order (a_0 = 1) at trial energy e < 0.

    The coefficient of a_{n+1} in the recurrence is (n+1)(n+k-1); solving for
    a_{n+1} is explicit only while the singular-term convolution M_{n+alpha-1}
    involves no coefficient beyond a_n, which restricts alpha to {0, 1}.
    Coefficients exceeding the overflow guard trigger a homogeneous rescale of
    the whole prefix, recorded in ``scale_log10``.
    """
    if order < 1:
        raise DomainError("order must be >= 1")
    if e >= 0:
        raise DomainError("coefficient generation requires a bound-state energy E < 0")
    if pot.alpha >= 2:
        raise UnsupportedExponentError(
            "alpha >= 2 makes the recurrence implicit (a_{n+1} enters M_{n+alpha-1})"
        )
    _validate_kind(kind, pot, mass)
    k = q.k
    if k == 1:
        raise DegenerateChannelError(
            "k = N + 2l = 1: leading recurrence denominator vanishes at n = 0"
        )
    if mass.order < order and mass.kind != "custom-series":
        mass = mass.extended(order)

    b = b_from_energy(e, mass.m0)
    ell = q.ell
    lam = mass.lam

    a = [1.0] + [0.0] * order
    scale_log10 = 0.0

    if kind is RecurrenceKind.EXP_MASS_CORNELL:
        # Exponentially decaying mass: m'/m = -lam exactly, so the
        # log-derivative convolutions collapse to -lam a_n and -lam n a_n and
        # only the mass convolution survives as a table.
        mseries = mass.mass_series
        conv = [0.0] * (order + 1)  # running sum_{j+nu=i} m_nu a_j

        def fill_conv(i: int):
            top = min(i, mseries.size - 1)
            s = 0.0
            for nu in range(top + 1):
                s += a[i - nu] * mseries[nu]
            conv[i] = s

        A, B, C = pot.v1, pot.v2, pot.v3
        m0 = mass.m0
        fill_conv(0)
        for n in range(order):
            an = a[n]
            an1 = a[n - 1] if n >= 1 else 0.0
            cn = conv[n]
            cn1 = conv[n - 1] if n >= 1 else 0.0
            cn2 = conv[n - 2] if n >= 2 else 0.0
            num = (
                (b * (k - 1) + (2.0 * b - lam) * n - ell * lam) * an
                - b * (b - lam) * an1
                - 2.0 * e * cn1
                - 2.0 * A * cn
                + 2.0 * B * cn2
                + 2.0 * C * cn1
            )
            a[n + 1] = num / ((n + 1) * (n + k - 1))
            if abs(a[n + 1]) > _RESCALE_LIMIT:
                s = abs(a[n + 1])
                for j in range(n + 2):
                    a[j] /= s
                for j in range(n + 1):
                    conv[j] /= s
                scale_log10 += math.log10(s)
            if n + 1 <= order:
                fill_conv(n + 1)
        return SeriesSolution(e, b, np.array(a), a[0], order, q, scale_log10)

    bmass = mass.mass_series
    blog = mass.logderiv_series
    tables = ConvolutionTables()
    tables.extend(a, bmass, blog)

    v1, v2, v3 = pot.v1, pot.v2, pot.v3
    alpha, beta = pot.alpha, pot.beta
    b2 = b * b

    for n in range(order):
        an = a[n]
        an1 = a[n - 1] if n >= 1 else 0.0
        base = (
            ((k - 1) + 2.0 * n) * b * an
            + ell * tables.mprime_at(n)
            - b * tables.mprime_at(n - 1)
            + tables.t_at(n)
            - 2.0 * e * tables.m_at(n - 1)
            - b2 * an1
        )
        if kind is RecurrenceKind.GENERAL:
            num = (
                base
                - 2.0 * v1 * tables.m_at(n + alpha - 1)
                + 2.0 * v2 * tables.m_at(n - beta - 1)
                + 2.0 * v3 * tables.m_at(n - 1)
            )
        elif kind is RecurrenceKind.COULOMB:
            num = base - 2.0 * v1 * tables.m_at(n)
        elif kind is RecurrenceKind.OSCILLATOR:
            num = base + 2.0 * v2 * tables.m_at(n - 3)
        elif kind is RecurrenceKind.LINEAR:
            num = base + 2.0 * v2 * tables.m_at(n - 2)
        elif kind is RecurrenceKind.CORNELL:
            num = (
                base
                - 2.0 * v1 * tables.m_at(n)
                + 2.0 * v2 * tables.m_at(n - 2)
                + 2.0 * v3 * tables.m_at(n - 1)
            )
        else:  # pragma: no cover - exhaustive enum
            raise DomainError(f"unhandled recurrence kind {kind}")
        denom = (n + 1) * (n + k - 1)
        assert denom != 0, "recurrence denominator vanished (k < 2 should be rejected)"
        a[n + 1] = num / denom
        if abs(a[n + 1]) > _RESCALE_LIMIT:
            s = abs(a[n + 1])
            for j in range(n + 2):
                a[j] /= s
            tables.rescale(s)
            scale_log10 += math.log10(s)
        tables.extend(a, bmass, blog)

    return SeriesSolution(e, b, np.array(a), a[0], order, q, scale_log10)


def _series_at(arr: np.ndarray, i: int) -> float:
    return float(arr[i]) if i < arr.size else 0.0


def coefficient_closed_forms_cornell(
    pot: PotentialSpec,
    mass: MassProfile,
    q: QuantumNumbers,
    e: float,
    a0: float = 1.0,
) -> tuple[float, float, float]:
    """Closed forms for a_1, a_2, a_3 of the Cornell recurrence, general mass.

    Independent evaluation path from :func:`generate_coefficients`, used for
    cross-checking.
    """
    if pot.alpha != 1 or pot.beta != 1:
        raise DomainError("cornell closed forms require alpha = beta = 1")
    k = q.k
    if k == 1:
        raise DegenerateChannelError("closed forms undefined for k = 1")
    if mass.kind != "custom-series":
        mass = mass.extended(2)
    b = b_from_energy(e, mass.m0)
    ell = q.ell
    A, B, C = pot.v1, pot.v2, pot.v3
    m0 = mass.m0
    b1 = _series_at(mass.mass_series, 1)
    b2 = _series_at(mass.mass_series, 2)
    bp0 = _series_at(mass.logderiv_series, 0)
    bp1 = _series_at(mass.logderiv_series, 1)
    bp2 = _series_at(mass.logderiv_series, 2)

    a1 = (b + (ell * bp0 - 2.0 * A * m0) / (k - 1)) * a0
    a2 = ((k + 1) * b + (ell + 1) * bp0 - 2.0 * A * m0) / (2.0 * k) * a1 + (
        ell * bp1 - b * bp0 - 2.0 * A * b1 + 2.0 * C * m0
    ) / (2.0 * k) * a0
    a3 = (
        ((k + 3) * b + (ell + 2) * bp0 - 2.0 * A * m0) / (3.0 * (k + 1)) * a2
        + ((ell + 1) * bp1 - b * bp0 - 2.0 * A * b1 + 2.0 * C * m0)
        / (3.0 * (k + 1))
        * a1
        + (ell * bp2 - b * bp1 + 2.0 * (C - e) * b1 - 2.0 * A * b2 + 2.0 * B * m0)
        / (3.0 * (k + 1))
        * a0
    )
    return a1, a2, a3


def coefficient_closed_forms_expmass(
    pot: PotentialSpec,
    m0: float,
    lam: float,
    q: QuantumNumbers,
    e: float,
    a0: float = 1.0,
) -> tuple[float, float, float]:
    """Closed forms for a_1, a_2, a_3 with the exponentially decaying mass.

    Evaluates the specialization m'/m = -lam, m_nu = m0 (-lam)^nu / nu!
    literally; reduces continuously to the constant-mass Cornell forms as
    lam -> 0+.
    """
    if pot.alpha != 1 or pot.beta != 1:
        raise DomainError("exp-mass closed forms require alpha = beta = 1")
    if lam <= 0:
        raise DomainError("exp-mass closed forms require lam > 0")
    k = q.k
    if k == 1:
        raise DegenerateChannelError("closed forms undefined for k = 1")
    b = b_from_energy(e, m0)
    ell = q.ell
    A, B, C = pot.v1, pot.v2, pot.v3
    m1 = -m0 * lam
    m2 = m0 * lam * lam / 2.0

    a1 = (b - (ell * lam + 2.0 * A * m0) / (k - 1)) * a0
    a2 = ((k + 1) * b - lam * (ell + 1) - 2.0 * A * m0) / (2.0 * k) * a1 + (
        2.0 * C * m0 + lam * b - 2.0 * A * m1
    ) / (2.0 * k) * a0
    a3 = (
        ((k + 3) * b - (ell + 2) * lam - 2.0 * A * m0) / (3.0 * (k + 1)) * a2
        + (lam * b + 2.0 * C * m0 - 2.0 * A * m1) / (3.0 * (k + 1)) * a1
        + (2.0 * B * m0 + 2.0 * (C - e) * m1 - 2.0 * A * m2) / (3.0 * (k + 1)) * a0
    )
    return a1, a2, a3


def coulomb_closed_form_coefficients(
    a_coupling: float,
    m0: float,
    q: QuantumNumbers,
    i: int,
    a0: float = 1.0,
) -> float:
    """Exact coefficient a_i of the constant-mass 3-d Coulomb bound state.

    At the eigenvalue with decay rate b = A m0 / (n + l + 1) the series
    terminates:

        a_i = (-2 A m0 / (n+l+1))^i (2l+1)! n! / ((2l+1+i)! (n-i)! i!) a_0

    and a_i = 0 for i > n.  Factorials are evaluated through log-gamma so
    large n, l stay finite.
    """
    if q.dim_n != 3:
        raise DomainError("closed-form Coulomb coefficients are for N = 3")
    if i < 0:
        raise DomainError("coefficient index must be >= 0")
    n, ell = q.radial_n, q.ell
    if i > n:
        return 0.0
    if i == 0:
        return a0
    if a_coupling <= 0 or m0 <= 0:
        raise DomainError("requires positive coupling and mass")
    ratio = 2.0 * a_coupling * m0 / (n + ell + 1)
    sign = -1.0 if i % 2 else 1.0
    log_mag = (
        i * math.log(ratio)
        + gammaln(2 * ell + 2)
        + gammaln(n + 1)
        - gammaln(2 * ell + 2 + i)
        - gammaln(n - i + 1)
        - gammaln(i + 1)
    )
    return sign * math.exp(log_mag) * a0


def coulomb_expmass_closed_forms(
    a_coupling: float,
    m0: float,
    lam: float,
    q: QuantumNumbers,
    a0: float = 1.0,
) -> tuple[float, float, float]:
    """First three Coulomb coefficients with the exponentially decaying mass.

    Specializes the exp-mass closed forms to N = 3, B = C = 0 with the
    constant-mass Coulomb decay rate b = A m0 / (n + l + 1) substituted.  The
    a_3 form is evaluated from the same substitution applied to the general
    third coefficient (its a_0 bracket is + [A m1 / (2 (n+l+1)^2) - m2/m0]).
    """
    if q.dim_n != 3:
        raise DomainError("these closed forms are for N = 3")
    if lam <= 0:
        raise DomainError("requires lam > 0")
    A = a_coupling
    n, ell = q.radial_n, q.ell
    nlp = n + ell + 1
    m1 = -m0 * lam
    m2 = m0 * lam * lam / 2.0

    a1 = (A * m0 / (ell + 1)) * (
        (ell + 1) / nlp - ell * lam / (2.0 * m0 * A) - 1.0
    ) * a0
    a2 = (A * m0 / (2 * ell + 3)) * (
        ((ell + 2) / nlp - (ell + 1) * lam / (2.0 * A * m0) - 1.0) * a1
        + (lam / (2.0 * nlp) - m1 / m0) * a0
    )
    a3 = (A * m0 / (3.0 * (ell + 2))) * (
        ((ell + 3) / nlp - (ell + 2) * lam / (2.0 * A * m0) - 1.0) * a2
        + (lam / (2.0 * nlp) - m1 / m0) * a1
        + (A * m1 / (2.0 * nlp * nlp) - m2 / m0) * a0
    )
    return a1, a2, a3
