"""Config-driven command-line front end.

Subcommands:

* ``solve <config>``         energies table (+ optional dumps per config)
* ``verify [--seed S]``      randomized closed-form identity report
* ``coefficients <config>``  series-coefficient dump for every solved state
* ``sample <config>``        wavefunction samples on the configured grid

Configs are JSON files with ``potential``, ``mass``, ``quantum``, ``solver``
and ``output`` blocks; see configs/coulomb_demo.json.  Exit codes: 0 success,
1 solver failure (partial results are still written), 2 config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .eigensolver import SolverConfig, find_eigenvalue, scan_spectrum
from .errors import (
    BracketError,
    ConfigurationError,
    DomainError,
    ResolutionError,
    WrongStateError,
)
from .identities import DEFAULT_SEED, run_identity_suite
from .mass_expansion import constant_mass, expand_exponential, mass_from_series
from .model import (
    MassProfile,
    PotentialSpec,
    QuantumNumbers,
    make_cornell,
    make_coulomb,
    make_linear,
    make_oscillator,
)
from .recurrence import RecurrenceKind, generate_coefficients
from .wavefunction import RadialWavefunction, evaluate, normalize

__all__ = ["RunConfig", "load_config", "run_solve", "run_verify", "main"]


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass(frozen=True)
class PotentialBlock:
    kind: str
    params: dict

    def build(self) -> PotentialSpec:
        p = dict(self.params)
        offset = float(p.pop("v3_offset", 0.0))
        try:
            if self.kind == "coulomb":
                pot = make_coulomb(float(p.pop("z")))
            elif self.kind == "oscillator":
                pot = make_oscillator(float(p.pop("omega")))
            elif self.kind == "linear":
                pot = make_linear(float(p.pop("b_lin")))
            elif self.kind == "cornell":
                pot = make_cornell(
                    float(p.pop("a")), float(p.pop("b_lin")), float(p.pop("c"))
                )
            elif self.kind == "general":
                pot = PotentialSpec(
                    float(p.pop("v1")),
                    float(p.pop("v2")),
                    float(p.pop("v3")),
                    int(p.pop("alpha")),
                    int(p.pop("beta")),
                )
            else:
                raise ConfigError(f"potential.kind: unknown kind {self.kind!r}")
        except KeyError as exc:
            raise ConfigError(f"potential: missing parameter {exc.args[0]!r}") from None
        if p:
            raise ConfigError(
                f"potential: unknown parameter(s) {sorted(p)} for kind {self.kind!r}"
            )
        if offset:
            pot = replace(pot, v3=pot.v3 + offset)
        return pot


@dataclass(frozen=True)
class MassBlock:
    kind: str
    m0: float = 1.0
    lam: float | None = None
    coeffs: tuple = ()

    def build(self, order: int) -> MassProfile:
        if self.kind == "constant":
            return constant_mass(self.m0, order)
        if self.kind == "exponential":
            if self.lam is None:
                raise ConfigError("mass.lambda: required for exponential mass")
            return expand_exponential(self.m0, self.lam, order)
        if self.kind == "series":
            if not self.coeffs:
                raise ConfigError("mass.coeffs: required for series mass")
            return mass_from_series(list(self.coeffs))
        raise ConfigError(f"mass.kind: unknown kind {self.kind!r}")


@dataclass(frozen=True)
class QuantumBlock:
    dim: int
    ell: tuple
    n: tuple


@dataclass(frozen=True)
class SolverBlock:
    e_lo: float
    e_hi: float
    truncation_order: int = 64
    tol_e: float = 1e-10
    max_iter: int = 200
    match_radius: float | None = None
    scan_steps: int = 120
    oracle: bool = True
    oracle_points: int = 20001


@dataclass(frozen=True)
class OutputBlock:
    directory: str = "out"
    formats: tuple = ("csv", "json")
    coefficients: bool = False
    wavefunction_grid: dict | None = None


@dataclass(frozen=True)
class RunConfig:
    potential: PotentialBlock
    mass: MassBlock
    quantum: QuantumBlock
    solver: SolverBlock
    output: OutputBlock

    def to_dict(self) -> dict:
        d = asdict(self)
        d["potential"] = {"kind": self.potential.kind, **self.potential.params}
        mass = {"kind": self.mass.kind, "m0": self.mass.m0}
        if self.mass.lam is not None:
            mass["lambda"] = self.mass.lam
        if self.mass.coeffs:
            mass["coeffs"] = list(self.mass.coeffs)
        d["mass"] = mass
        d["quantum"] = {
            "dim": self.quantum.dim,
            "ell": list(self.quantum.ell),
            "n": list(self.quantum.n),
        }
        d["output"] = {
            "directory": self.output.directory,
            "formats": list(self.output.formats),
            "coefficients": self.output.coefficients,
        }
        if self.output.wavefunction_grid is not None:
            d["output"]["wavefunction_grid"] = dict(self.output.wavefunction_grid)
        return d


def _require(block: dict, key: str, where: str):
    if key not in block:
        raise ConfigError(f"{where}.{key}: required field is missing")
    return block[key]


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("top level: config must be a JSON object")
    for name in ("potential", "mass", "quantum", "solver"):
        if name not in data:
            raise ConfigError(f"{name}: required block is missing")

    pot_raw = dict(data["potential"])
    kind = pot_raw.pop("kind", None)
    if kind is None:
        raise ConfigError("potential.kind: required field is missing")
    potential = PotentialBlock(kind=str(kind), params=pot_raw)
    potential.build()  # validate eagerly

    mass_raw = dict(data["mass"])
    mkind = str(mass_raw.pop("kind", "constant"))
    mass = MassBlock(
        kind=mkind,
        m0=float(mass_raw.pop("m0", 1.0)),
        lam=(float(mass_raw.pop("lambda")) if "lambda" in mass_raw else None),
        coeffs=tuple(mass_raw.pop("coeffs", ())),
    )
    if mass_raw:
        raise ConfigError(f"mass: unknown parameter(s) {sorted(mass_raw)}")
    mass.build(order=8)  # validate eagerly

    q_raw = dict(data["quantum"])
    quantum = QuantumBlock(
        dim=int(_require(q_raw, "dim", "quantum")),
        ell=tuple(int(x) for x in _require(q_raw, "ell", "quantum")),
        n=tuple(int(x) for x in _require(q_raw, "n", "quantum")),
    )
    if quantum.dim < 1:
        raise ConfigError("quantum.dim: must be >= 1")
    if any(l < 0 for l in quantum.ell) or any(n < 0 for n in quantum.n):
        raise ConfigError("quantum.ell / quantum.n: entries must be >= 0")

    s_raw = dict(data["solver"])
    solver = SolverBlock(
        e_lo=float(_require(s_raw, "e_lo", "solver")),
        e_hi=float(_require(s_raw, "e_hi", "solver")),
        truncation_order=int(s_raw.get("truncation_order", 64)),
        tol_e=float(s_raw.get("tol_e", 1e-10)),
        max_iter=int(s_raw.get("max_iter", 200)),
        match_radius=(
            float(s_raw["match_radius"])
            if s_raw.get("match_radius") is not None
            else None
        ),
        scan_steps=int(s_raw.get("scan_steps", 120)),
        oracle=bool(s_raw.get("oracle", True)),
        oracle_points=int(s_raw.get("oracle_points", 20001)),
    )
    if not solver.e_lo < solver.e_hi < 0:
        raise ConfigError("solver.e_lo/e_hi: need e_lo < e_hi < 0")

    o_raw = dict(data.get("output", {}))
    formats = tuple(o_raw.get("formats", ("csv", "json")))
    for fmt in formats:
        if fmt not in ("csv", "json"):
            raise ConfigError(f"output.formats: unknown format {fmt!r}")
    output = OutputBlock(
        directory=str(o_raw.get("directory", "out")),
        formats=formats,
        coefficients=bool(o_raw.get("coefficients", False)),
        wavefunction_grid=o_raw.get("wavefunction_grid"),
    )
    if output.wavefunction_grid is not None:
        g = output.wavefunction_grid
        if "r_max" not in g or "points" not in g:
            raise ConfigError("output.wavefunction_grid: needs r_max and points")

    return RunConfig(potential, mass, quantum, solver, output)


def load_config(path: str | Path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON (line {exc.lineno}): {exc.msg}")
    return parse_config(data)


@dataclass
class StateRow:
    dim: int
    ell: int
    radial_n: int
    k: int
    energy: float | None = None
    nodes: int | None = None
    norm_const: float | None = None
    tail_residual: float | None = None
    oracle_gap: float | None = None
    status: str = "ok"
    message: str = ""
    solution: object = None
    wave: object = None


def _solve_channel(pot, mass, cfg: RunConfig, ell: int) -> dict[int, StateRow]:
    """Solve every requested radial state of one angular channel."""
    sb = cfg.solver
    q_scan = QuantumNumbers(cfg.quantum.dim, ell, 0)
    base = SolverConfig(
        e_bracket=(sb.e_lo, sb.e_hi),
        match_radius=sb.match_radius,
        truncation_order=sb.truncation_order,
        tol_e=sb.tol_e,
        max_iter=sb.max_iter,
        run_oracle=sb.oracle,
        oracle_points=sb.oracle_points,
    )
    brackets = scan_spectrum(
        pot, mass, q_scan, (sb.e_lo, sb.e_hi), sb.scan_steps, base
    )
    wanted = set(cfg.quantum.n)
    states: dict[int, StateRow] = {}
    for (ea, eb), label in brackets:
        if label > max(wanted, default=-1) + 1:
            continue
        sub = replace(base, e_bracket=(ea, eb))
        # the midpoint label is approximate; a WrongStateError reports the
        # converged node count, so retry once with that
        q = QuantumNumbers(cfg.quantum.dim, ell, max(label, 0))
        try:
            try:
                result = find_eigenvalue(pot, mass, q, sub)
            except WrongStateError as exc:
                if exc.found < 0 or exc.found in states:
                    continue
                q = QuantumNumbers(cfg.quantum.dim, ell, exc.found)
                result = find_eigenvalue(pot, mass, q, sub)
        except (BracketError, WrongStateError, ConfigurationError,
                ResolutionError, DomainError):
            continue
        if q.radial_n in states:
            continue
        sol = generate_coefficients(
            RecurrenceKind.GENERAL, pot, mass, q, result.energy,
            sb.truncation_order,
        )
        states[q.radial_n] = StateRow(
            dim=cfg.quantum.dim,
            ell=ell,
            radial_n=q.radial_n,
            k=q.k,
            energy=result.energy,
            nodes=result.nodes,
            norm_const=result.norm_const,
            tail_residual=result.tail_residual,
            oracle_gap=result.oracle_gap,
            solution=sol,
        )
    return states


def solve_states(cfg: RunConfig) -> list[StateRow]:
    """Solve all (ell, n) rows requested by the config, in config order."""
    pot = cfg.potential.build()
    mass = cfg.mass.build(order=cfg.solver.truncation_order)
    rows: list[StateRow] = []
    for ell in cfg.quantum.ell:
        try:
            channel = _solve_channel(pot, mass, cfg, ell)
        except (BracketError, ConfigurationError, DomainError, ResolutionError) as exc:
            channel = {}
            err = f"channel failed: {exc}"
        else:
            err = "state not found in scan range"
        for n in cfg.quantum.n:
            if n in channel:
                rows.append(channel[n])
            else:
                rows.append(
                    StateRow(
                        dim=cfg.quantum.dim,
                        ell=ell,
                        radial_n=n,
                        k=cfg.quantum.dim + 2 * ell,
                        status="error",
                        message=err,
                    )
                )
    return rows


def _fmt_csv(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


_ENERGY_COLUMNS = (
    "dim,ell,radial_n,k,energy,nodes,norm_const,tail_residual,oracle_gap,status"
)


def write_energies(rows: list[StateRow], outdir: Path, formats) -> None:
    if "csv" in formats:
        lines = [_ENERGY_COLUMNS]
        for r in rows:
            lines.append(
                ",".join(
                    _fmt_csv(v)
                    for v in (
                        r.dim, r.ell, r.radial_n, r.k, r.energy, r.nodes,
                        r.norm_const, r.tail_residual, r.oracle_gap, r.status,
                    )
                )
            )
        (outdir / "energies.csv").write_text("\n".join(lines) + "\n")
    if "json" in formats:
        payload = [
            {
                "dim": r.dim,
                "ell": r.ell,
                "radial_n": r.radial_n,
                "k": r.k,
                "energy": r.energy,
                "nodes": r.nodes,
                "norm_const": r.norm_const,
                "tail_residual": r.tail_residual,
                "oracle_gap": r.oracle_gap,
                "status": r.status,
                "message": r.message,
            }
            for r in rows
        ]
        (outdir / "energies.json").write_text(json.dumps(payload, indent=2) + "\n")


def write_coefficients(rows: list[StateRow], outdir: Path, formats) -> None:
    ok = [r for r in rows if r.status == "ok"]
    if "csv" in formats:
        lines = ["dim,ell,radial_n,i,a_i"]
        for r in ok:
            for i, a in enumerate(r.solution.coeffs):
                lines.append(f"{r.dim},{r.ell},{r.radial_n},{i},{a:.12g}")
        (outdir / "coefficients.csv").write_text("\n".join(lines) + "\n")
    if "json" in formats:
        payload = [
            {
                "dim": r.dim,
                "ell": r.ell,
                "radial_n": r.radial_n,
                "coefficients": list(r.solution.coeffs),
            }
            for r in ok
        ]
        (outdir / "coefficients.json").write_text(json.dumps(payload, indent=2) + "\n")


def write_wavefunctions(
    rows: list[StateRow], grid: dict, outdir: Path, formats
) -> None:
    r_max = float(grid["r_max"])
    points = int(grid["points"])
    radii = np.linspace(0.0, r_max, points)
    ok = [r for r in rows if r.status == "ok"]
    samples = []
    for row in ok:
        wave = RadialWavefunction.from_solution(row.solution)
        r_norm = min(r_max * 2.0, 0.9 * wave.eval_cutoff)
        wave = normalize(wave, r_norm)
        vals = [
            evaluate(wave, float(x)) if x <= wave.eval_cutoff else None
            for x in radii
        ]
        samples.append((row, vals))
    if "csv" in formats:
        lines = ["dim,ell,radial_n,r,R"]
        for row, vals in samples:
            for x, v in zip(radii, vals):
                if v is None:
                    continue
                lines.append(
                    f"{row.dim},{row.ell},{row.radial_n},{x:.12g},{v:.12g}"
                )
        (outdir / "wavefunctions.csv").write_text("\n".join(lines) + "\n")
    if "json" in formats:
        payload = [
            {
                "dim": row.dim,
                "ell": row.ell,
                "radial_n": row.radial_n,
                "r": [float(x) for x in radii],
                "R": vals,
            }
            for row, vals in samples
        ]
        (outdir / "wavefunctions.json").write_text(
            json.dumps(payload, indent=2) + "\n"
        )


def run_solve(config_path: str, artifacts: tuple = ("energies",)) -> int:
    """Solve per config and write the requested artifact files."""
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    outdir = Path(cfg.output.directory)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = solve_states(cfg)

    wanted = set(artifacts)
    if "energies" in wanted:
        write_energies(rows, outdir, cfg.output.formats)
    if "coefficients" in wanted or (
        "energies" in wanted and cfg.output.coefficients
    ):
        write_coefficients(rows, outdir, cfg.output.formats)
    if "wavefunctions" in wanted or (
        "energies" in wanted and cfg.output.wavefunction_grid is not None
    ):
        grid = cfg.output.wavefunction_grid or {"r_max": 10.0, "points": 201}
        write_wavefunctions(rows, grid, outdir, cfg.output.formats)

    failures = [r for r in rows if r.status != "ok"]
    for r in failures:
        print(
            f"state dim={r.dim} ell={r.ell} n={r.radial_n} failed: {r.message}",
            file=sys.stderr,
        )
    return 1 if failures else 0


def run_verify(seed: int = DEFAULT_SEED) -> int:
    """Randomized closed-form identity report; nonzero exit on any failure."""
    results = run_identity_suite(seed)
    print(f"identity verification (seed={seed})")
    ok = True
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        print(
            f"  {verdict}  {r.name:40s} max deviation {r.max_deviation:.3e} "
            f"(tolerance {r.tolerance:g}, {r.trials} trials)"
        )
        ok = ok and r.passed
    print("all identities passed" if ok else "IDENTITY FAILURE")
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pdmradial",
        description="Bound states of the N-dimensional position-dependent-mass "
        "radial Schrodinger equation via series recurrences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve energies per config")
    p_solve.add_argument("config")

    p_verify = sub.add_parser("verify", help="run the closed-form identity suite")
    p_verify.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p_coeff = sub.add_parser("coefficients", help="dump series coefficients")
    p_coeff.add_argument("config")

    p_sample = sub.add_parser("sample", help="dump wavefunction samples")
    p_sample.add_argument("config")

    args = parser.parse_args(argv)
    if args.command == "solve":
        return run_solve(args.config)
    if args.command == "verify":
        return run_verify(args.seed)
    if args.command == "coefficients":
        return run_solve(args.config, artifacts=("coefficients",))
    if args.command == "sample":
        return run_solve(args.config, artifacts=("wavefunctions",))
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
