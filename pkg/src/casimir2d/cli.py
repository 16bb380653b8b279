"""Command-line front end.

Subcommands:

* ``run``      -- execute a scenario from an INI config, write CSV + manifest
* ``sweep``    -- like run, but requires an explicit [sweep] section
* ``diagrams`` -- list canonical diagram words with symmetry data
* ``verify``   -- run the oracle suite, nonzero exit on any failure

Exit codes: 0 success, 1 verify failure, 2 validation error (bad input),
3 numerical-domain error.

Config schema (INI)::

    [scenario]
    id = two_halfplates          ; one of the scenario ids
    bc = EM                      ; D | N | EM
    n_max = 4
    threads = 1
    allow_continuation = false

    [geometry]                   ; any numeric ScenarioConfig field
    D = 1.0
    phi1 = 0.3
    phi2 = 0.2
    needle = vertical            ; gap_repulsion only

    [sweep]
    param = phi1
    start = 0.0
    stop = 1.1
    steps = 12

    [grid]
    n_alpha = 128
    n_p = 48

Environment overrides (only these two): CASIMIR2D_THREADS and
CASIMIR2D_OUT.  Identical config + tool version yields bit-identical
CSV output (deterministic formatting and ordered reductions).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, closedforms, scenarios
from .assembly import Scene, SceneObject, diagram_energy, reflection_series
from .diagrams import BlockSystem, canonicalize, enumerate_diagrams, \
    lndet_oracle, word_to_str
from .errors import NumericalDomainError, ValidationError
from .quadrature import build_grid
from .scattering import BoundaryCondition, HalfPlate, InfinitePlate
from .translation import FramePose

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

_GEOM_FLOAT = ("D", "L", "phi1", "phi2", "h", "d", "d1", "d2", "theta0",
               "t00", "txx", "tyy")
_GEOM_STR = ("needle",)


def _fmt(x) -> str:
    """Deterministic scalar formatting for CSV cells."""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def load_config(path: Path, overrides: dict) -> scenarios.ScenarioConfig:
    """Parse the INI config into a ScenarioConfig; CLI flags override."""
    if not path.exists():
        raise ValidationError(f"config file not found: {path}")
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ValidationError(f"config parse error in {path}: {exc}")
    if "scenario" not in cp or "id" not in cp["scenario"]:
        raise ValidationError("config needs [scenario] with an 'id' field")
    kw: dict = {"scenario_id": cp["scenario"]["id"].strip()}
    sc = cp["scenario"]
    if "bc" in sc:
        kw["bc"] = sc["bc"].strip()
    for name, getter in (("n_max", sc.getint), ("threads", sc.getint),
                         ("d_dim", sc.getint)):
        if name in sc:
            try:
                kw[name] = getter(name)
            except ValueError:
                raise ValidationError(f"scenario.{name} must be an integer")
    if "allow_continuation" in sc:
        try:
            kw["allow_continuation"] = sc.getboolean("allow_continuation")
        except ValueError:
            raise ValidationError("scenario.allow_continuation must be "
                                  "a boolean")
    geom = cp["geometry"] if "geometry" in cp else {}
    for name in _GEOM_FLOAT:
        if name in geom:
            try:
                kw[name] = float(geom[name])
            except ValueError:
                raise ValidationError(f"geometry.{name} must be a number")
    for name in _GEOM_STR:
        if name in geom:
            kw[name] = geom[name].strip()
    if "sweep" in cp:
        sw = cp["sweep"]
        for f in ("param", "start", "stop", "steps"):
            if f not in sw:
                raise ValidationError(f"sweep.{f} is required")
        try:
            kw["sweep"] = scenarios.SweepSpec(
                sw["param"].strip(), float(sw["start"]), float(sw["stop"]),
                int(sw["steps"]))
        except ValueError:
            raise ValidationError("sweep.start/stop must be numbers and "
                                  "sweep.steps an integer")
    if "grid" in cp:
        gr = cp["grid"]
        for name in ("n_alpha", "n_p"):
            if name in gr:
                try:
                    kw[name] = gr.getint(name)
                except ValueError:
                    raise ValidationError(f"grid.{name} must be an integer")
    kw.update(overrides)
    return scenarios.ScenarioConfig(**kw)


def _collect_overrides(args) -> dict:
    out: dict = {}
    if args.grid_alpha is not None:
        out["n_alpha"] = args.grid_alpha
    if args.grid_p is not None:
        out["n_p"] = args.grid_p
    if args.nmax is not None:
        out["n_max"] = args.nmax
    if args.threads is not None:
        out["threads"] = args.threads
    elif os.environ.get("CASIMIR2D_THREADS"):
        try:
            out["threads"] = int(os.environ["CASIMIR2D_THREADS"])
        except ValueError:
            raise ValidationError("CASIMIR2D_THREADS must be an integer")
    if args.allow_continuation:
        out["allow_continuation"] = True
    return out


def _out_dir(args) -> Path:
    if args.out is not None:
        return Path(args.out)
    env = os.environ.get("CASIMIR2D_OUT")
    return Path(env) if env else Path(".")


def _csv_text(out: scenarios.CurveOutput) -> str:
    """RFC-4180 CSV with a units-annotated header row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow([f"{c} ({u})" for c, u in zip(out.columns, out.units)])
    for row in out.rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _per_diagram_table(out: scenarios.CurveOutput) -> dict:
    table = {}
    for j, name in enumerate(out.columns):
        for prefix in ("F_[", "I12_[", "E_["):
            if name.startswith(prefix):
                table[name] = [float(r[j]) for r in out.rows]
    return table


def write_outputs(config: scenarios.ScenarioConfig, config_path: Path,
                  out: scenarios.CurveOutput, out_dir: Path,
                  wall_time: float) -> tuple[Path, Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = config.scenario_id
    csv_path = out_dir / f"{stem}.csv"
    man_path = out_dir / f"{stem}.manifest.json"
    text = _csv_text(out)
    csv_path.write_text(text, newline="")
    warnings = []
    if config.allow_continuation:
        warnings.append("analytic continuation beyond |phi| = pi/2 "
                        "enabled; closed forms are outside their "
                        "derivation's range of validity there")
    manifest = {
        "tool": "casimir2d",
        "version": __version__,
        "config_path": str(config_path),
        "config_sha256": hashlib.sha256(
            config_path.read_bytes()).hexdigest(),
        "scenario_id": config.scenario_id,
        "bc": config.bc,
        "grid": {"n_alpha": config.n_alpha, "n_p": config.n_p,
                 "n_max": config.n_max},
        "wall_time_s": wall_time,
        "data_file": csv_path.name,
        "data_sha256": hashlib.sha256(text.encode()).hexdigest(),
        "columns": out.columns,
        "units": out.units,
        "n_rows": len(out.rows),
        "per_diagram": _per_diagram_table(out),
        "notes": list(out.notes),
        "warnings": warnings,
    }
    man_path.write_text(json.dumps(manifest, indent=2, sort_keys=True)
                        + "\n")
    return csv_path, man_path


def cmd_run(args, require_sweep: bool = False) -> int:
    config = load_config(Path(args.config), _collect_overrides(args))
    if require_sweep and config.sweep is None:
        raise ValidationError("the sweep subcommand needs a [sweep] "
                              "section in the config")
    t0 = time.perf_counter()
    out = scenarios.run(config)
    wall = time.perf_counter() - t0
    csv_path, man_path = write_outputs(config, Path(args.config), out,
                                       _out_dir(args), wall)
    print(f"wrote {csv_path} and {man_path} "
          f"({len(out.rows)} rows, {wall:.2f}s)")
    return EXIT_OK


def cmd_diagrams(args) -> int:
    if args.M < 2:
        raise ValidationError("M must be >= 2")
    n_max = args.nmax if args.nmax is not None else 4
    for diag in enumerate_diagrams(args.M, n_max):
        s = diag.symmetry_factor
        s_str = f"S={s.numerator}" if s.denominator == 1 \
            else f"S={s.numerator}/{s.denominator}"
        if diag.direction_symmetric:
            tag = "sym"
        else:
            mirror = canonicalize(diag.word[::-1])
            tag = f"-> mirror {word_to_str(mirror.word)}"
        print(f"{word_to_str(diag.word)} {s_str} {tag}")
    return EXIT_OK


# --- verify ------------------------------------------------------------

def _check(name, value, tol, lines, extra=""):
    ok = value < tol
    lines.append((name, value, tol, ok, extra))
    return ok


def random_block_system(rng, m: int, dim: int,
                        rho_target: float) -> BlockSystem:
    """Random dense BlockSystem rescaled to the given spectral radius."""
    sysb = BlockSystem(M=m)
    for i in range(1, m + 1):
        sysb.t_blocks[i] = (rng.standard_normal((dim, dim))
                            + 1j * rng.standard_normal((dim, dim)))
    for a in range(1, m + 1):
        for b in range(1, m + 1):
            if a != b:
                sysb.u_blocks[(a, b)] = (
                    rng.standard_normal((dim, dim))
                    + 1j * rng.standard_normal((dim, dim)))
    K = sysb.coupling_matrix()
    rho = float(np.max(np.abs(np.linalg.eigvals(K))))
    for i in range(1, m + 1):
        sysb.t_blocks[i] = sysb.t_blocks[i] * (rho_target / max(rho, 1e-12))
    return sysb


def truncated_lndet(sys: BlockSystem, n_max: int) -> complex:
    """-sum_{n<=n_max} tr(K^n)/n: the power-trace form of the diagram sum.

    Independent oracle for the diagram combinatorics (Rules 1-3 and
    symmetry factors): both sides truncate the log series at the same
    order, so they must agree to roundoff.
    """
    K = sys.coupling_matrix()
    acc = 0.0 + 0.0j
    Kn = np.eye(K.shape[0], dtype=complex)
    for n in range(1, n_max + 1):
        Kn = Kn @ K
        acc += np.trace(Kn) / n
    return acc


def _verify_lndet(lines) -> bool:
    rng = np.random.default_rng(20240817)
    worst_comb = 0.0
    bound_ok = True
    for _ in range(30):
        m = int(rng.integers(2, 5))
        dim = int(rng.integers(2, 5))
        rho = float(rng.uniform(0.05, 0.5))
        sysb = random_block_system(rng, m, dim, rho)
        n_max = 8
        series, exact = lndet_oracle(sysb, n_max)
        trunc = truncated_lndet(sysb, n_max)
        worst_comb = max(worst_comb, abs(series - trunc)
                         / max(abs(trunc), 1e-300))
        # remainder of -tr ln(I-K) past order n_max, by eigenvalue bound
        dim_total = m * dim
        bound = dim_total * rho ** (n_max + 1) / ((n_max + 1) * (1.0 - rho))
        bound_ok = bound_ok and abs(series - exact) <= bound
    ok1 = _check("lndet diagram sum vs power traces (30 systems)",
                 worst_comb, 1e-8, lines)
    ok2 = _check("lndet truncation within analytic next-term bound",
                 0.0 if bound_ok else 1.0, 0.5, lines)
    return ok1 and ok2


def _verify_closedform(lines) -> bool:
    grid = build_grid(96, 40, p_scale=0.5)
    worst = 0.0
    for phi1, phi2 in ((0.4, 0.3), (math.pi / 8, 3 * math.pi / 8)):
        cf = (closedforms.two_halfplates_energy(phi1, phi2, 1.0, 1.0,
                                                "D").value
              + closedforms.two_halfplates_energy(phi1, phi2, 1.0, 1.0,
                                                  "N").value)
        num = 0.0
        for bc in (BoundaryCondition.DIRICHLET, BoundaryCondition.NEUMANN):
            scene = Scene(
                (SceneObject(HalfPlate(phi1), FramePose((0.0, 0.0), phi1)),
                 SceneObject(HalfPlate(phi2), FramePose((1.0, 0.0), phi2))),
                bc, mode="edge")
            num += reflection_series(scene, 2, grid).total
        worst = max(worst, abs(num - cf) / abs(cf))
    return _check("two-half-plate closed form vs quadrature", worst,
                  1e-4, lines)


def _verify_cancellation(lines) -> bool:
    grid = build_grid(96, 40, p_scale=0.5)
    scene = Scene(
        (SceneObject(HalfPlate(0.0), FramePose((-1.0, 0.0))),
         SceneObject(HalfPlate(0.0), FramePose((+1.0, 0.0))),
         SceneObject(InfinitePlate(), FramePose((0.0, 0.0)))),
        BoundaryCondition.DIRICHLET, mode="edge")
    e12 = diagram_energy(scene, canonicalize((1, 2)), grid)
    e123 = diagram_energy(scene, canonicalize((1, 2, 3)), grid)
    res = abs(e12 + e123) / abs(e12)
    return _check("wall cancellation |[21]+[321]| / |[21]|", res, 1e-8,
                  lines)


def _verify_zeta(lines) -> bool:
    ok = True
    rows = []
    for n in range(1, 6):
        per = closedforms.parallel_plate_per_order(3, 1.0, 1.0, "D",
                                                   n).value
        first = closedforms.parallel_plate_per_order(3, 1.0, 1.0, "D",
                                                     1).value
        ratio = per / first
        rows.append(f"    n={n}: per-order ratio {ratio:.12f} "
                    f"(exact {1.0 / n**4:.12f})")
        ok = ok and abs(ratio - 1.0 / n**4) < 1e-14
    total = closedforms.parallel_plate_energy(3, 1.0, 1.0, "D").value
    # remainder past n=20000 is ~1/(3*20000^3) ~ 4e-14 of the n=1 term
    series = sum(closedforms.parallel_plate_per_order(3, 1.0, 1.0, "D",
                                                      n).value
                 for n in range(1, 20001))
    rel = abs(series - total) / abs(total)
    ok1 = _check("parallel-plate per-order 1/n^4 ratios", 0.0 if ok
                 else 1.0, 0.5, lines, extra="\n".join(rows))
    ok2 = _check("parallel-plate zeta(4) resummation (20000 terms)", rel,
                 1e-12, lines)
    return ok1 and ok2


def cmd_verify(args) -> int:
    lines: list = []
    ok = True
    ok &= _verify_lndet(lines)
    ok &= _verify_zeta(lines)
    ok &= _verify_closedform(lines)
    ok &= _verify_cancellation(lines)
    width = max(len(n) for n, *_ in lines)
    for name, value, tol, passed, extra in lines:
        status = "PASS" if passed else "FAIL"
        print(f"{status}  {name:<{width}}  measured {value:.3e}  "
              f"tol {tol:.1e}")
        if extra:
            print(extra)
    print("verify:", "all checks passed" if ok else "FAILURES above")
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="casimir2d",
        description="Casimir interaction energies for 2D/2.5D multibody "
                    "geometries (multiple-reflection expansion)")
    ap.add_argument("--version", action="version",
                    version=f"casimir2d {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--config", required=True, metavar="PATH",
                       help="INI config file")
        p.add_argument("--out", metavar="DIR", default=None,
                       help="output directory (default: ., or "
                            "CASIMIR2D_OUT)")
        p.add_argument("--threads", type=int, default=None, metavar="N")
        p.add_argument("--grid-alpha", type=int, default=None, metavar="N",
                       help="override n_alpha")
        p.add_argument("--grid-p", type=int, default=None, metavar="N",
                       help="override n_p")
        p.add_argument("--nmax", type=int, default=None, metavar="N",
                       help="override max reflection order")
        p.add_argument("--allow-continuation", action="store_true",
                       help="evaluate closed forms beyond |phi| = pi/2")

    p_run = sub.add_parser("run", help="execute a scenario from a config")
    add_run_flags(p_run)
    p_sweep = sub.add_parser("sweep",
                             help="run a scenario sweep (requires [sweep])")
    add_run_flags(p_sweep)
    p_diag = sub.add_parser("diagrams", help="list canonical diagrams")
    p_diag.add_argument("M", type=int, help="number of objects")
    p_diag.add_argument("--nmax", type=int, default=None, metavar="N",
                        help="max reflection order (default 4)")
    sub.add_parser("verify", help="run the oracle suite")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_run(args, require_sweep=True)
        if args.command == "diagrams":
            return cmd_diagrams(args)
        return cmd_verify(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalDomainError as exc:
        print(f"numerical-domain error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
