"""Bound-state energies from the series solution by tail matching.

At a trial energy the origin side is represented by the generated power
series and the infinity side by a direct inward integration started from the
local decay rate.  The two are compared at a match radius through the
normalized Wronskian

    w(E) = (R_s' R_i - R_s R_i') / (|(R_s, R_s')| |(R_i, R_i')|),

which has the same zeros as the log-derivative difference but no poles:
it vanishes exactly when the two directions align, changes sign across every
eigenvalue and stays bounded in between.  Roots are located by bracketed
bisection/secant (Brent) iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from . import oracle
from .errors import BracketError, ConfigurationError, DomainError, WrongStateError
from .model import (
    EigenResult,
    MassProfile,
    PotentialSpec,
    QuantumNumbers,
    b_from_energy,
)
from .recurrence import RecurrenceKind, generate_coefficients
from .wavefunction import RadialWavefunction, count_nodes, normalize, trust_radius

__all__ = [
    "SolverConfig",
    "find_eigenvalue",
    "scan_spectrum",
    "coulomb_reference_energy",
]

# The ansatz b = sqrt(-2 m0 E) degenerates as E -> 0-.
_E_FLOOR = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the matching eigensolver.

    ``match_radius`` defaults to 1.5/b at the bracket midpoint, clamped to
    the series trust region.  The inward integration starts at
    ``match + tail_lengths/b`` or past the outer turning point, whichever is
    farther.
    """

    e_bracket: tuple[float, float]
    match_radius: float | None = None
    truncation_order: int = 64
    tol_e: float = 1e-10
    max_iter: int = 200
    tail_lengths: float = 10.0
    leg_step: float = 0.01
    run_oracle: bool = False
    oracle_points: int = 20001

    def __post_init__(self):
        e_lo, e_hi = self.e_bracket
        if not (e_lo < e_hi < 0):
            raise DomainError("energy bracket must satisfy e_lo < e_hi < 0")
        if abs(e_hi) < _E_FLOOR:
            raise DomainError(
                f"|E| < {_E_FLOOR}: the decay-rate ansatz breaks down near E = 0"
            )
        if self.truncation_order < 4:
            raise DomainError("truncation_order must be at least 4")
        if self.tol_e <= 0 or self.max_iter < 10:
            raise DomainError("need tol_e > 0 and max_iter >= 10")


@dataclass(frozen=True)
class _Geometry:
    """Fixed matching geometry for one root solve (keeps the mismatch
    continuous in E; its zeros do not depend on these choices)."""

    r_match: float
    grid: oracle.GridSpec
    i_match: int  # grid index of r_match


def _build_geometry(
    pot: PotentialSpec,
    mass: MassProfile,
    q: QuantumNumbers,
    cfg: SolverConfig,
) -> _Geometry:
    e_lo, e_hi = cfg.e_bracket
    e_mid = 0.5 * (e_lo + e_hi)
    b_mid = b_from_energy(e_mid, mass.m0)

    # trust radii at the bracket endpoints bound the admissible match radius
    trusts = []
    for e in (e_lo, e_hi):
        sol = generate_coefficients(
            RecurrenceKind.GENERAL, pot, mass, q, e, cfg.truncation_order
        )
        trusts.append(trust_radius(sol))
    trust = min(trusts)

    if cfg.match_radius is not None:
        r_match = cfg.match_radius
        if r_match > trust:
            raise ConfigurationError(
                f"match_radius {r_match:.6g} exceeds the series trust region "
                f"{trust:.6g} at the bracket endpoints; raise truncation_order"
            )
    else:
        r_match = 1.5 / b_mid
        if math.isfinite(trust):
            r_match = min(r_match, 0.9 * trust)
    if r_match <= 0:
        raise ConfigurationError("match radius collapsed to zero")

    # the inward start must sit in the forbidden tail: tail_lengths decay
    # lengths out and past the outer turning point of the shallowest bracket
    # energy
    r_turn = oracle.outer_turning_radius(pot, mass, e_hi)
    r_tail = oracle.tail_radius(pot, mass, e_hi)
    r_far = max(r_match + cfg.tail_lengths / b_mid, 1.2 * r_turn, r_tail)

    h_target = cfg.leg_step / b_mid
    n_right = max(int(math.ceil((r_far - r_match) / h_target)), 995)
    h = (r_far - r_match) / n_right
    r_lo = r_match - 4.0 * h
    if r_lo <= 0:
        # match radius sits very close to the origin; shrink the stencil
        # margin by using a finer step
        h = r_match / 8.0
        n_right = int(math.ceil((r_far - r_match) / h))
        r_lo = r_match - 4.0 * h
    if n_right > 400_000:
        raise ConfigurationError(
            f"inward leg needs {n_right} points (match {r_match:.3g}, "
            f"far {r_far:.3g}); the bracket or match radius is pathological"
        )
    grid = oracle.GridSpec(r_lo, r_lo + (n_right + 4) * h, n_right + 5)
    return _Geometry(r_match, grid, 4)


def _series_direction(
    sol, q: QuantumNumbers, r: float
) -> tuple[float, float]:
    """(R, R') direction of the series solution at r, up to a positive factor."""
    u = up = 0.0
    for c in sol.coeffs[::-1]:
        up = up * r + u
        u = u * r + c
    p = (q.k - 1) / 2.0
    g = p / r - sol.b
    return u, up + g * u


def _mismatch(
    pot: PotentialSpec,
    mass: MassProfile,
    q: QuantumNumbers,
    e: float,
    cfg: SolverConfig,
    geom: _Geometry,
    want_solution: bool = False,
):
    sol = generate_coefficients(
        RecurrenceKind.GENERAL, pot, mass, q, e, cfg.truncation_order
    )
    vs = _series_direction(sol, q, geom.r_match)
    R_in, Rp_in = oracle.integrate_radial(pot, mass, q, e, geom.grid, "inward")
    vi = (float(R_in[geom.i_match]), float(Rp_in[geom.i_match]))
    w = vs[1] * vi[0] - vs[0] * vi[1]
    norm = math.hypot(*vs) * math.hypot(*vi)
    value = w / norm if norm > 0 else 0.0
    if want_solution:
        return value, sol, R_in
    return value


def _combined_node_count(sol, q, geom: _Geometry, R_in: np.ndarray) -> int:
    """Nodes of the matched eigenfunction: series side on (0, r_match) plus
    the inward solution beyond, sign-aligned at the match radius."""
    wave = RadialWavefunction.from_solution(sol)
    n_series = count_nodes(wave, geom.r_match, samples=2048)

    u_match, _ = _series_direction(sol, q, geom.r_match)
    align = math.copysign(1.0, u_match) * math.copysign(1.0, R_in[geom.i_match])
    tail = R_in[geom.i_match :] * align
    n_tail = 0
    prev = 0.0
    for v in tail:
        if v == 0.0:
            continue
        if prev != 0.0 and (prev < 0) != (v < 0):
            n_tail += 1
        prev = v
    return n_series + n_tail


def find_eigenvalue(
    pot: PotentialSpec,
    mass: MassProfile,
    q: QuantumNumbers,
    cfg: SolverConfig,
) -> EigenResult:
    """Locate the bound state inside cfg.e_bracket and verify its node count.

    The bracket must contain exactly one sign change of the mismatch (use
    scan_spectrum to build such brackets).  The converged state is rejected
    with WrongStateError when its node count differs from q.radial_n.
    """
    if mass.kind != "custom-series":
        mass = mass.extended(cfg.truncation_order)
    geom = _build_geometry(pot, mass, q, cfg)
    e_lo, e_hi = cfg.e_bracket

    def f(e: float) -> float:
        return _mismatch(pot, mass, q, e, cfg, geom)

    f_lo, f_hi = f(e_lo), f(e_hi)
    if f_lo == 0.0 or f_hi == 0.0:
        e_star = e_lo if f_lo == 0.0 else e_hi
    elif (f_lo < 0) == (f_hi < 0):
        raise BracketError(
            f"mismatch does not change sign on ({e_lo}, {e_hi}): "
            f"({f_lo:.3e}, {f_hi:.3e}); use scan_spectrum to bracket"
        )
    else:
        e_star = brentq(
            f,
            e_lo,
            e_hi,
            xtol=abs(e_hi) * 1e-14,
            rtol=max(cfg.tol_e, 1e-15),
            maxiter=cfg.max_iter,
        )

    residual, sol, R_in = _mismatch(
        pot, mass, q, e_star, cfg, geom, want_solution=True
    )
    nodes = _combined_node_count(sol, q, geom, R_in)
    if nodes != q.radial_n:
        raise WrongStateError(q.radial_n, nodes, e_star)

    # Normalize over the physical decay region only: r_far is stretched for
    # boundary-condition suppression, and at the (finitely converged) energy
    # the non-terminating residual coefficients pollute the series out there.
    wave = RadialWavefunction.from_solution(sol)
    b_mid = b_from_energy(0.5 * (e_lo + e_hi), mass.m0)
    r_norm = max(
        geom.r_match + cfg.tail_lengths / b_mid,
        oracle.tail_radius(pot, mass, e_star, target_exponent=12.0),
    )
    if math.isfinite(wave.eval_cutoff):
        r_norm = min(r_norm, 0.9 * wave.eval_cutoff)
    r_norm = max(r_norm, 1.05 * geom.r_match)
    normalized = normalize(wave, r_norm)
    norm_const = normalized.solution.a0 / sol.a0

    oracle_gap = None
    if cfg.run_oracle:
        grid = oracle.default_grid(
            pot, mass, 0.5 * (e_lo + e_hi), cfg.oracle_points
        )
        e_oracle = oracle.numerov_eigenvalue(pot, mass, q, cfg.e_bracket, grid)
        oracle_gap = abs(e_star - e_oracle)

    return EigenResult(
        energy=float(e_star),
        nodes=nodes,
        norm_const=float(norm_const),
        tail_residual=abs(residual),
        oracle_gap=oracle_gap,
    )


def scan_spectrum(
    pot: PotentialSpec,
    mass: MassProfile,
    q_family: QuantumNumbers,
    e_range: tuple[float, float],
    steps: int,
    cfg: SolverConfig | None = None,
) -> list[tuple[tuple[float, float], int]]:
    """Sign-change brackets of the mismatch over a uniform-in-sqrt(-E) grid.

    Returns [( (e_a, e_b), node_count_at_midpoint ), ...] in ascending energy
    order; the node count labels which radial state the bracket contains.
    The range is processed in factor-4 energy octaves so a single matching
    geometry per octave stays well-conditioned across the whole sweep.
    """
    e_lo, e_hi = e_range
    if not (e_lo < e_hi < 0):
        raise DomainError("scan range must satisfy e_lo < e_hi < 0")
    if steps < 10:
        raise DomainError("need at least 10 scan steps")
    if mass.kind != "custom-series":
        order = (cfg.truncation_order if cfg is not None else 64)
        mass = mass.extended(order)

    s_hi = math.sqrt(-e_lo)
    s_lo = math.sqrt(-e_hi)
    energies = -np.linspace(s_hi, s_lo, steps + 1) ** 2  # ascending in E

    # octave edges at |E| ratios of 4
    edges = [e_lo]
    while edges[-1] / 4.0 < e_hi:
        edges.append(edges[-1] / 4.0)
    edges.append(e_hi)

    found: list[tuple[tuple[float, float], int]] = []
    for a, bnd in zip(edges[:-1], edges[1:]):
        if a >= bnd:
            continue
        sub_cfg = replace(
            cfg if cfg is not None else SolverConfig(e_bracket=(a, bnd)),
            e_bracket=(a, bnd),
        )
        try:
            geom = _build_geometry(pot, mass, q_family, sub_cfg)
        except ConfigurationError:
            continue
        mask = (energies >= a) & (energies <= bnd)
        pts = energies[mask]
        if pts.size < 2:
            pts = np.array([a, bnd])
        vals = [
            _mismatch(pot, mass, q_family, float(e), sub_cfg, geom) for e in pts
        ]
        for i in range(len(pts) - 1):
            va, vb = vals[i], vals[i + 1]
            if va == 0.0 or (va < 0) != (vb < 0):
                ea, eb = float(pts[i]), float(pts[i + 1])
                mid = 0.5 * (ea + eb)
                _, sol, R_in = _mismatch(
                    pot, mass, q_family, mid, sub_cfg, geom, want_solution=True
                )
                nodes = _combined_node_count(sol, q_family, geom, R_in)
                found.append(((ea, eb), nodes))

    # drop duplicates from octave-boundary overlap
    found.sort(key=lambda item: item[0][0])
    deduped: list[tuple[tuple[float, float], int]] = []
    for item in found:
        if deduped and item[0][0] < deduped[-1][0][1]:
            continue
        deduped.append(item)
    return deduped


def coulomb_reference_energy(a_coupling: float, m0: float, q: QuantumNumbers) -> float:
    """Constant-mass Coulomb eigenvalue -A^2 m0 / (2 (n + (k-1)/2)^2).

    The decay rate at the terminating series is b = A m0 / (n + (k-1)/2),
    which reduces to the familiar A m0/(n + l + 1) in three dimensions.
    """
    if a_coupling <= 0 or m0 <= 0:
        raise DomainError("requires positive coupling and mass")
    nu = q.radial_n + (q.k - 1) / 2.0
    return -(a_coupling**2) * m0 / (2.0 * nu * nu)
