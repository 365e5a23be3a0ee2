"""Direct numerical integration of the radial equation, independent of the
series machinery, used as ground truth for eigenvalues and wavefunctions.

The radial operator contains a first-derivative term (m'/m) R' whenever the
mass varies, so the classic three-point Numerov scheme only applies to
constant mass; position-dependent profiles are integrated as a first-order
system with a fixed-step fourth-order Runge-Kutta scheme.  Both paths start
outward integration from a short origin expansion derived directly from the
indicial balance of the equation (this module shares no code with the
recurrence or wavefunction modules beyond the domain types).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, DomainError, ResolutionError
from .model import MassProfile, PotentialSpec, QuantumNumbers, b_from_energy

__all__ = [
    "GridSpec",
    "integrate_radial",
    "numerov_eigenvalue",
    "outer_turning_radius",
]

_RENORM_LIMIT = 1e250


@dataclass(frozen=True)
class GridSpec:
    """Uniform radial grid for direct integration."""

    r_min: float
    r_max: float
    points: int

    def __post_init__(self):
        if self.r_min <= 0:
            raise DomainError("r_min must be positive (the origin is singular)")
        if self.r_max <= self.r_min:
            raise DomainError("r_max must exceed r_min")
        if self.points < 1000:
            raise DomainError("need at least 1000 grid points")

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.points - 1)

    def array(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.points)

    def coarsened(self) -> "GridSpec":
        """Every second point (for resolution self-checks)."""
        if (self.points - 1) % 2:
            raise DomainError("coarsening requires an odd point count")
        return GridSpec(self.r_min, self.r_max, (self.points - 1) // 2 + 1)


def default_grid(
    pot: PotentialSpec, mass: MassProfile, e_ref: float, points: int = 20001
) -> GridSpec:
    """Grid reaching 20 decay lengths and past the outer turning point.

    For confining potentials the local decay rate keeps growing beyond the
    turning point, so the end of the grid is additionally pushed until the
    accumulated WKB exponent suppresses the wrong tail branch to ~e^-14.
    """
    b = b_from_energy(e_ref, mass.m0)
    r_turn = outer_turning_radius(pot, mass, e_ref)
    r_max = max(20.0 / b, 2.2 * r_turn, tail_radius(pot, mass, e_ref))
    return GridSpec(1e-6, r_max, points)


def tail_radius(
    pot: PotentialSpec,
    mass: MassProfile,
    e: float,
    target_exponent: float = 14.0,
) -> float:
    """Radius where the integral of sqrt(2 m (V - e)) past the turning point
    reaches ``target_exponent`` (capped for slowly decaying tails)."""
    b = b_from_energy(e, mass.m0)
    r_turn = outer_turning_radius(pot, mass, e)
    r = max(r_turn, 1e-3)
    cap = max(6.0 * r_turn, 40.0 / b)
    total = 0.0
    while total < target_exponent and r < cap:
        dr = 0.01 * max(r, 0.1)
        q2 = 2.0 * float(mass.mass_at(r)) * (float(pot.value(r)) - e)
        if q2 > 0:
            total += math.sqrt(q2) * dr
        r += dr
    return r


def outer_turning_radius(pot: PotentialSpec, mass: MassProfile, e: float) -> float:
    """Largest radius where V(r) = e, or 0.0 if V - e never changes sign.

    Found by scanning a geometric grid outward and bisecting the last sign
    change; used to place matching radii and grid ends in the classically
    forbidden tail.
    """
    probes = np.geomspace(1e-4, 1e7, 500)
    diff = pot.value(probes) - e
    neg = np.nonzero(diff <= 0)[0]
    if neg.size == 0:
        return 0.0
    last = int(neg[-1])
    if last == probes.size - 1:
        # still classically allowed at the largest probe: no outer turning
        return float(probes[-1])
    lo, hi = float(probes[last]), float(probes[last + 1])
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if pot.value(mid) - e <= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _origin_series(
    pot: PotentialSpec,
    mass: MassProfile,
    q: QuantumNumbers,
    e: float,
    n_terms: int = 7,
) -> np.ndarray:
    """Taylor coefficients c_0..c_{n_terms-1} of the regular origin behavior
    R = r^p sum_j c_j r^j with p = (k-1)/2 and c_0 = 1.

    Obtained by balancing powers of the radial equation directly (no
    exponential ansatz): with beta_nu the log-derivative series and b_nu the
    mass series,

        m (m+k-2) c_m = sum_{j+nu=m-1} (l+j) beta_nu c_j
                        - 2 e <b,c>_{m-2}
                        - 2 V1 <b,c>_{m-1 if alpha=1 else m-2}
                        + 2 V2 <b,c>_{m-2-beta} + 2 V3 <b,c>_{m-2},

    where <b,c>_i is the Cauchy coefficient and negative indices vanish.
    Requires k >= 3 so the m = 1 denominator is safe.
    """
    k = q.k
    ell = q.ell
    bmass = mass.mass_series
    blog = mass.logderiv_series
    c = np.zeros(n_terms)
    c[0] = 1.0

    def conv(i):
        if i < 0:
            return 0.0
        top = min(i, bmass.size - 1)
        return sum(bmass[nu] * c[i - nu] for nu in range(top + 1))

    for m in range(1, n_terms):
        acc = 0.0
        top = min(m - 1, blog.size - 1)
        for nu in range(top + 1):
            j = m - 1 - nu
            acc += (ell + j) * blog[nu] * c[j]
        acc -= 2.0 * e * conv(m - 2)
        if pot.v1 != 0.0:
            acc -= 2.0 * pot.v1 * conv(m - 1 if pot.alpha == 1 else m - 2)
        if pot.v2 != 0.0:
            acc += 2.0 * pot.v2 * conv(m - 2 - pot.beta)
        if pot.v3 != 0.0:
            acc += 2.0 * pot.v3 * conv(m - 2)
        c[m] = acc / (m * (m + k - 2))
    return c


def _potential_arrays(pot: PotentialSpec, mass: MassProfile, q: QuantumNumbers, r: np.ndarray):
    """G = m'/m and the energy-independent parts of F with R'' = G R' + F R,
    F(r) = -G (N-1)/(2r) + (k-1)(k-3)/(4 r^2) + 2 m (V - e) = F0 - 2 m e."""
    k = q.k
    g = np.asarray(mass.logderiv_at(r), float)
    m = np.asarray(mass.mass_at(r), float)
    v = np.asarray(pot.value(r), float)
    f0 = -g * (q.dim_n - 1) / (2.0 * r) + (k - 1) * (k - 3) / (4.0 * r * r) + 2.0 * m * v
    return g, f0, 2.0 * m


def _derivative_from_grid(R: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order finite-difference derivative on a uniform grid (>= 9 points)."""
    n = R.size
    assert n >= 9
    Rp = np.empty_like(R)
    Rp[2:-2] = (R[:-4] - 8 * R[1:-3] + 8 * R[3:-1] - R[4:]) / (12 * h)
    # one-sided 4th-order stencils at the edges
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12 * h)
    for i in (0, 1):
        Rp[i] = np.dot(c, R[i : i + 5])
    for i in (n - 2, n - 1):
        Rp[i] = -np.dot(c, R[i : i - 5 : -1])
    return Rp


def _central_derivative(window5: np.ndarray, h: float) -> float:
    """4th-order central derivative at the middle of a 5-point window."""
    return float(
        (window5[0] - 8 * window5[1] + 8 * window5[3] - window5[4]) / (12 * h)
    )


def _numerov(
    w_arr: np.ndarray, h: float, start: tuple[float, float], outward: bool
) -> np.ndarray:
    """Numerov integration of R'' = w(r) R along a uniform grid.

    ``start`` holds the first two values in the direction of travel; the
    stored array is always aligned with the ascending grid.  The recurrence
    runs in extended precision: rounding noise seeded before the turning
    point is amplified exponentially beyond it, and 80-bit arithmetic keeps
    that floor around 1e-10 instead of 1e-6.  The running solution is
    renormalized when it exceeds the overflow guard (earlier samples are
    rescaled retroactively so one overall scale applies).
    """
    n = w_arr.size
    h12 = np.longdouble(h) * np.longdouble(h) / 12.0
    w = w_arr.astype(np.longdouble)
    c = 1.0 - h12 * w
    d = 2.0 + 10.0 * h12 * w
    R = np.zeros(n, dtype=np.longdouble)
    if outward:
        idx = range(2, n)
        R[0], R[1] = start
        prev2, prev = R[0], R[1]
    else:
        idx = range(n - 3, -1, -1)
        R[n - 1], R[n - 2] = start
        prev2, prev = R[n - 1], R[n - 2]
    j2 = 0 if outward else n - 1
    j1 = 1 if outward else n - 2
    for i in idx:
        cur = (d[j1] * prev - c[j2] * prev2) / c[i]
        R[i] = cur
        if abs(cur) > _RENORM_LIMIT:
            if outward:
                R[: i + 1] /= _RENORM_LIMIT
            else:
                R[i:] /= _RENORM_LIMIT
            cur = R[i]
            prev = R[j1]
        prev2, prev = prev, cur
        j2, j1 = j1, i
    return R.astype(float)


def _rk4(
    g_full: list,
    f_full: list,
    g_half: list,
    f_half: list,
    h: float,
    start: tuple[float, float],
    outward: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """RK4 on the system (R, R')' = (R', G R' + F R) with precomputed
    coefficients at the full and half grid points."""
    n = len(g_full)
    R = np.empty(n)
    P = np.empty(n)
    if outward:
        order = range(n - 1)
        sh = h
    else:
        order = range(n - 1, 0, -1)
        sh = -h
    i0 = 0 if outward else n - 1
    R[i0], P[i0] = start
    r_cur, p_cur = start
    for i in order:
        j = i + 1 if outward else i - 1
        ih = i if outward else i - 1  # half-point between i and j
        g0, f0 = g_full[i], f_full[i]
        gh, fh = g_half[ih], f_half[ih]
        g1, f1 = g_full[j], f_full[j]
        k1r = p_cur
        k1p = g0 * p_cur + f0 * r_cur
        r2 = r_cur + 0.5 * sh * k1r
        p2 = p_cur + 0.5 * sh * k1p
        k2r = p2
        k2p = gh * p2 + fh * r2
        r3 = r_cur + 0.5 * sh * k2r
        p3 = p_cur + 0.5 * sh * k2p
        k3r = p3
        k3p = gh * p3 + fh * r3
        r4 = r_cur + sh * k3r
        p4 = p_cur + sh * k3p
        k4r = p4
        k4p = g1 * p4 + f1 * r4
        r_cur = r_cur + sh / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
        p_cur = p_cur + sh / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        if abs(r_cur) > _RENORM_LIMIT:
            if outward:
                R[: i + 1] /= _RENORM_LIMIT
                P[: i + 1] /= _RENORM_LIMIT
            else:
                R[i:] /= _RENORM_LIMIT
                P[i:] /= _RENORM_LIMIT
            r_cur /= _RENORM_LIMIT
            p_cur /= _RENORM_LIMIT
        R[j] = r_cur
        P[j] = p_cur
    return R, P


def integrate_radial(
    pot: PotentialSpec,
    mass: MassProfile,
    q: QuantumNumbers,
    e: float,
    grid: GridSpec,
    direction: str = "outward",
    check_resolution: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate the radial equation over ``grid``; returns R and R' arrays.

    Outward runs start from the origin expansion
    R ~ r^((k-1)/2) (1 + c1 r + ... ) evaluated at the first grid points;
    inward runs start from the local decay R'/R = -sqrt(-2 m(r_max) e).  The
    overall scale of the solution is arbitrary.  With ``check_resolution``
    the integration is repeated on the doubled step and a log-derivative
    disagreement above 1e-8 raises ResolutionError.
    """
    if e >= 0:
        raise DomainError("direct integration expects a bound-state energy E < 0")
    if direction not in ("outward", "inward"):
        raise DomainError("direction must be 'outward' or 'inward'")
    outward = direction == "outward"
    if outward and q.k < 3:
        raise DomainError(
            "outward integration on a uniform grid needs k >= 3 "
            "(the origin branch separation is too weak below that)"
        )

    r = grid.array()
    h = grid.h
    R, Rp = _integrate_on(pot, mass, q, e, r, h, outward)

    if check_resolution:
        # Step-doubling comparison of the log-derivative at an interior,
        # well-conditioned point: near the turning point for outward runs
        # (beyond it the growing branch dominates and the comparison is
        # meaningless), near the start of travel for inward runs.
        coarse = grid.coarsened()
        Rc, _ = _integrate_on(pot, mass, q, e, coarse.array(), coarse.h, outward)
        if outward:
            i_cmp = _match_index(pot, mass, q, e, grid)
            i_cmp -= i_cmp % 2
            i_cmp = min(max(i_cmp, 4), grid.points - 5)
        else:
            i_cmp = 4
        ld_f = _central_derivative(R[i_cmp - 2 : i_cmp + 3], h) / R[i_cmp]
        j = i_cmp // 2
        ld_c = _central_derivative(Rc[j - 2 : j + 3], coarse.h) / Rc[j]
        scale = max(1.0, abs(ld_f))
        if abs(ld_f - ld_c) > 1e-8 * scale:
            raise ResolutionError(
                f"step-doubling log-derivative check failed at r="
                f"{r[i_cmp]:.6g}: |{ld_f:.12g} - {ld_c:.12g}| exceeds "
                f"1e-8 (relative)"
            )
    return R, Rp


def _integrate_on(pot, mass, q, e, r, h, outward):
    g_full, f0_full, m2_full = _potential_arrays(pot, mass, q, r)
    f_full = f0_full - m2_full * e

    if outward:
        p = (q.k - 1) / 2.0
        c = _origin_series(pot, mass, q, e)
        r0, r1 = float(r[0]), float(r[1])

        def series_val(x: float) -> float:
            acc = 0.0
            for cj in c[::-1]:
                acc = acc * x + cj
            return x**p * acc

        if mass.kind == "constant":
            start = (series_val(r0), series_val(r1))
        else:
            acc = dacc = 0.0
            for cj in c[::-1]:
                dacc = dacc * r0 + acc
                acc = acc * r0 + cj
            P0 = p * r0 ** (p - 1.0) * acc + r0**p * dacc
            start = (series_val(r0), P0)
    else:
        kappa = math.sqrt(-2.0 * float(mass.mass_at(r[-1])) * e)
        if mass.kind == "constant":
            start = (1.0, math.exp(kappa * h))
        else:
            start = (1.0, -kappa)

    if mass.kind == "constant":
        R = _numerov(f_full, h, start, outward)
        Rp = _derivative_from_grid(R, h)
        return R, Rp

    r_half = r[:-1] + 0.5 * h
    g_half, f0_half, m2_half = _potential_arrays(pot, mass, q, r_half)
    f_half = f0_half - m2_half * e
    R, Rp = _rk4(
        g_full.tolist(),
        f_full.tolist(),
        g_half.tolist(),
        f_half.tolist(),
        h,
        start,
        outward,
    )
    return R, Rp


def _match_index(pot, mass, q, e, grid: GridSpec) -> int:
    """Grid index of the outermost classical turning point (clamped inside)."""
    r = grid.array()
    _, f0, m2 = _potential_arrays(pot, mass, q, r)
    w = f0 - m2 * e
    sign_change = np.nonzero(np.diff(np.signbit(w)))[0]
    idx = int(sign_change[-1]) if sign_change.size else grid.points // 2
    return min(max(idx, 8), grid.points - 9)


def _oracle_mismatch(pot, mass, q, e, grid, i_match) -> float:
    """Normalized Wronskian of the outward and inward solutions at i_match."""
    r = grid.array()
    h = grid.h
    # integrate on slices of the full grid so both sides overlap i_match by
    # four points, enough for a central 4th-order derivative stencil there
    R_out, _ = _integrate_on(pot, mass, q, e, r[: i_match + 5], h, True)
    R_in, Pin = _integrate_on(pot, mass, q, e, r[i_match - 4 :], h, False)
    Po = _central_derivative(R_out[i_match - 2 : i_match + 3], h)
    Ro = R_out[i_match]
    if mass.kind == "constant":
        Pi = _central_derivative(R_in[2:7], h)
    else:
        Pi = Pin[4]
    Ri = R_in[4]
    w = Po * Ri - Ro * Pi
    norm = math.hypot(Ro, Po) * math.hypot(Ri, Pi)
    return w / norm if norm > 0 else 0.0


def numerov_eigenvalue(
    pot: PotentialSpec,
    mass: MassProfile,
    q: QuantumNumbers,
    bracket: tuple[float, float],
    grid: GridSpec | None = None,
    rtol: float = 1e-12,
    verify_resolution: bool = True,
) -> float:
    """Matching-based eigenvalue from direct integration.

    The bracket must enclose exactly one sign change of the outward/inward
    log-derivative mismatch.  Despite the name this dispatches to the
    RK-style integrator whenever the mass varies, since Numerov cannot carry
    the first-derivative term.
    """
    e_lo, e_hi = bracket
    if not (e_lo < e_hi < 0):
        raise DomainError("bracket must satisfy e_lo < e_hi < 0")
    if grid is None:
        grid = default_grid(pot, mass, 0.5 * (e_lo + e_hi))
    i_match = _match_index(pot, mass, q, 0.5 * (e_lo + e_hi), grid)

    def f(e):
        return _oracle_mismatch(pot, mass, q, e, grid, i_match)

    f_lo, f_hi = f(e_lo), f(e_hi)
    if f_lo == 0.0:
        return e_lo
    if f_hi == 0.0:
        return e_hi
    if (f_lo < 0) == (f_hi < 0):
        raise BracketError(
            f"no mismatch sign change in bracket ({e_lo}, {e_hi}): "
            f"f = ({f_lo:.3e}, {f_hi:.3e})"
        )
    root = brentq(f, e_lo, e_hi, xtol=abs(e_hi) * 1e-14, rtol=rtol, maxiter=200)
    if verify_resolution:
        # Richardson-style estimate: re-solve on the doubled step; for a
        # fourth-order scheme the coarse error is ~16x the fine one, so
        # |fine - coarse| / 15 estimates the fine-grid error.
        coarse = grid.coarsened()
        j_match = min(max(i_match // 2, 8), coarse.points - 9)

        def fc(e):
            return _oracle_mismatch(pot, mass, q, e, coarse, j_match)

        fc_lo, fc_hi = fc(e_lo), fc(e_hi)
        if (fc_lo < 0) != (fc_hi < 0):
            root_c = brentq(
                fc, e_lo, e_hi, xtol=abs(e_hi) * 1e-14, rtol=rtol, maxiter=200
            )
            err_est = abs(root - root_c) / 15.0
            if err_est > 1e-8 * abs(root):
                raise ResolutionError(
                    f"eigenvalue error estimate {err_est:.3e} exceeds "
                    f"1e-8 relative at E={root!r}; refine the grid"
                )
    return float(root)
