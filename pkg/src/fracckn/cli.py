"""Command-line front end.

Usage::

    fracckn [--config FILE] COMMAND [options]

Commands: constants, symbol, roots, solve, spectrum, sweep, continuation,
hardy-check, validate.  Options given on the command line override the
config file, which overrides the built-in defaults.  Outputs go to
``--output-dir`` (else ``$CKN_OUTPUT_DIR``, else the working directory)
and are written atomically.

Exit status: 0 success, 1 computational failure (JSON report on stderr),
2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np
import yaml

from .constants import Parameters, problem_constants
from .errors import CKNError, ComputationError, ConfigError, IoError, ParseError, ValidationError

__all__ = ["RunConfig", "parse_config", "dispatch", "emit_json", "emit_csv", "main",
           "COMMANDS"]

COMMANDS = ("constants", "symbol", "roots", "solve", "spectrum", "sweep",
            "continuation", "hardy-check", "validate")

DEFAULT_GRID = {"T": 20.0, "N": 2048}
DEFAULT_TOL = {"newton": 1e-10, "quadrature": 1e-9, "eig": 1e-9}
BLOCK_DEFAULTS = {
    "symbol": {"modes": [0, 1, 2], "xi_max": 50.0, "points": 501},
    "roots": {"count": 3},
    "solve": {"init": "preset"},
    "spectrum": {"modes": [0, 1], "k": 4},
    "sweep": {"alpha": [], "beta_fractions": None, "beta_offsets": None,
              "beta_values": None, "jobs": 1},
    "continuation": {"c0": 1.0, "p0": 4.0, "gamma0": 0.9, "gamma1": 1.0, "steps": 10,
                     "n": None},
    "hardy": {"radii": [5.0, 10.0, 20.0, 40.0]},
    "validate": {"only": None},
}
TOP_KEYS = ("n", "gamma", "alpha", "beta", "grid", "tolerances", "output_dir") + tuple(BLOCK_DEFAULTS)
NEEDS_PARAMS = ("constants", "symbol", "roots", "solve", "spectrum", "hardy-check")


@dataclass
class RunConfig:
    """Validated run configuration."""

    params: Parameters | None
    T: float
    N: int
    tolerances: dict
    output_dir: Path
    blocks: dict = dc_field(default_factory=dict)
    raw: dict = dc_field(default_factory=dict)

    @property
    def grid(self):
        from .spectral import Grid
        return Grid(self.T, self.N)


# --------------------------------------------------------------------------
# parsing

def _load_text(text: str) -> dict:
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark else None
        col = mark.column + 1 if mark else None
        raise ParseError(f"malformed config: {exc.problem or exc}", line, col) from None
    except yaml.YAMLError as exc:
        raise ParseError(f"malformed config: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ParseError("config must be a mapping of keys to values", 1, 1)
    return data


def _number(name, value, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    if kind is int:
        if int(value) != value:
            raise ValidationError(f"{name} must be an integer, got {value!r}")
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite")
    return value


def _check_keys(name, given, allowed):
    extra = sorted(set(given) - set(allowed))
    if extra:
        raise ValidationError(f"unknown key(s) in {name}: {', '.join(map(str, extra))}")


def _float_list(name, value):
    if isinstance(value, dict):
        _check_keys(name, value, ("start", "stop", "num"))
        try:
            start, stop = _number(name + ".start", value["start"]), _number(name + ".stop", value["stop"])
            num = _number(name + ".num", value["num"], int)
        except KeyError as exc:
            raise ValidationError(f"{name} range needs start, stop and num") from exc
        if num < 0:
            raise ValidationError(f"{name}.num must be >= 0")
        return [float(x) for x in np.linspace(start, stop, num)]
    if not isinstance(value, (list, tuple)):
        raise ValidationError(f"{name} must be a list or a start/stop/num range")
    return [_number(f"{name}[{i}]", x) for i, x in enumerate(value)]


def parse_config(source, command: str | None = None) -> RunConfig:
    """Build a validated :class:`RunConfig` from YAML text, a path or a dict.

    Raises
    ------
    ParseError
        For malformed YAML (with line and column).
    ValidationError
        For unknown keys, bad types and inadmissible parameters.
    """
    if isinstance(source, dict):
        data = dict(source)
    elif isinstance(source, Path):
        try:
            data = _load_text(source.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ValidationError(f"cannot read config {source}: {exc}") from None
    else:
        data = _load_text(str(source))
    _check_keys("config", data, TOP_KEYS)

    grid = dict(DEFAULT_GRID)
    g_in = data.get("grid") or {}
    if not isinstance(g_in, dict):
        raise ValidationError("grid must be a mapping with T and N")
    _check_keys("grid", g_in, DEFAULT_GRID)
    grid.update(g_in)
    T = _number("grid.T", grid["T"])
    N = _number("grid.N", grid["N"], int)
    if not T > 0.0:
        raise ValidationError("grid.T must be positive")
    if N < 64 or N & (N - 1):
        raise ValidationError(f"grid.N must be a power of two >= 64, got {N}")

    tol = dict(DEFAULT_TOL)
    t_in = data.get("tolerances") or {}
    if not isinstance(t_in, dict):
        raise ValidationError("tolerances must be a mapping")
    _check_keys("tolerances", t_in, DEFAULT_TOL)
    for k, v in t_in.items():
        tol[k] = _number(f"tolerances.{k}", v)
    for k, v in tol.items():
        if not v > 0.0:
            raise ValidationError(f"tolerances.{k} must be > 0")

    blocks = {}
    for name, defaults in BLOCK_DEFAULTS.items():
        b_in = data.get(name) or {}
        if not isinstance(b_in, dict):
            raise ValidationError(f"{name} must be a mapping")
        _check_keys(name, b_in, defaults)
        blk = dict(defaults)
        blk.update(b_in)
        blocks[name] = blk

    pkeys = ("n", "gamma", "alpha", "beta")
    have = [k for k in pkeys if data.get(k) is not None]
    params = None
    if have:
        missing = [k for k in pkeys if data.get(k) is None]
        if missing:
            raise ValidationError(f"parameters incomplete: missing {', '.join(missing)}")
        params = Parameters(_number("n", data["n"], int), _number("gamma", data["gamma"]),
                            _number("alpha", data["alpha"]), _number("beta", data["beta"]))

    out_dir = data.get("output_dir") or os.environ.get("CKN_OUTPUT_DIR") or "."
    cfg = RunConfig(params=params, T=T, N=N, tolerances=tol, output_dir=Path(str(out_dir)),
                    blocks=blocks, raw=data)
    _normalise_blocks(cfg)
    if command is not None:
        _check_command(cfg, command)
    return cfg


def _normalise_blocks(cfg):
    b = cfg.blocks
    sym = b["symbol"]
    sym["modes"] = [_number("symbol.modes", m, int) for m in sym["modes"]]
    if any(m < 0 for m in sym["modes"]):
        raise ValidationError("symbol.modes must be >= 0")
    sym["xi_max"] = _number("symbol.xi_max", sym["xi_max"])
    sym["points"] = _number("symbol.points", sym["points"], int)
    if sym["points"] < 1 or sym["xi_max"] < 0.0:
        raise ValidationError("symbol needs points >= 1 and xi_max >= 0")
    b["roots"]["count"] = _number("roots.count", b["roots"]["count"], int)
    if not 1 <= b["roots"]["count"] <= 50:
        raise ValidationError("roots.count must lie in 1..50")
    if b["solve"]["init"] != "preset":
        raise ValidationError("solve.init must be 'preset'")
    sp = b["spectrum"]
    sp["modes"] = [_number("spectrum.modes", m, int) for m in sp["modes"]]
    if any(m < 0 for m in sp["modes"]):
        raise ValidationError("spectrum.modes must be >= 0")
    sp["k"] = _number("spectrum.k", sp["k"], int)
    if not 1 <= sp["k"] <= 10:
        raise ValidationError("spectrum.k must lie in 1..10")
    sw = b["sweep"]
    sw["alpha"] = _float_list("sweep.alpha", sw["alpha"])
    rules = [k for k in ("beta_fractions", "beta_offsets", "beta_values") if sw[k] is not None]
    if len(rules) > 1:
        raise ValidationError("give only one of beta_fractions, beta_offsets, beta_values")
    for k in rules:
        sw[k] = _float_list(f"sweep.{k}", sw[k])
    if not rules:
        sw["beta_fractions"] = []
    sw["jobs"] = _number("sweep.jobs", sw["jobs"], int)
    if sw["jobs"] < 1:
        raise ValidationError("sweep.jobs must be >= 1")
    co = b["continuation"]
    for k in ("c0", "p0", "gamma0", "gamma1"):
        co[k] = _number(f"continuation.{k}", co[k])
    co["steps"] = _number("continuation.steps", co["steps"], int)
    if co["n"] is not None:
        co["n"] = _number("continuation.n", co["n"], int)
    b["hardy"]["radii"] = _float_list("hardy.radii", b["hardy"]["radii"])
    only = b["validate"]["only"]
    if only is not None:
        b["validate"]["only"] = [_number("validate.only", k, int) for k in only]


def sweep_betas(cfg, alpha):
    sw = cfg.blocks["sweep"]
    g = cfg.params.gamma
    if sw["beta_values"] is not None:
        return list(sw["beta_values"])
    if sw["beta_offsets"] is not None:
        return [alpha + d for d in sw["beta_offsets"]]
    return [alpha + f * g for f in sw["beta_fractions"]]


def _check_command(cfg, command):
    if command not in COMMANDS:
        raise ValidationError(f"unknown command {command!r}")
    p = cfg.params
    if command in NEEDS_PARAMS + ("sweep",) and p is None:
        raise ValidationError(f"command {command!r} needs n, gamma, alpha and beta")
    if command in ("solve", "spectrum") and p.is_hardy_endpoint:
        raise ValidationError(
            "beta = alpha + gamma: the best constant is not achieved there "
            "(p = 2); use the hardy-check command")
    if command == "hardy-check" and not p.is_hardy_endpoint:
        raise ValidationError("hardy-check needs beta = alpha + gamma")
    if command == "sweep":
        # every sample must be admissible and away from the endpoint
        for a in cfg.blocks["sweep"]["alpha"]:
            for bta in sweep_betas(cfg, a):
                q = p.replace(alpha=a, beta=bta)
                if q.is_hardy_endpoint:
                    raise ValidationError(f"sweep sample ({a!r}, {bta!r}) lies on beta = alpha + gamma")


# --------------------------------------------------------------------------
# emission

def _clean(obj):
    """Recursively convert to JSON-ready values; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _read_umask():
    mask = os.umask(0)
    os.umask(mask)
    return mask


_UMASK = _read_umask()


def _atomic_write(path: Path, text: str):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
        try:
            os.chmod(tmp, 0o666 & ~_UMASK)
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from None
    return path


def emit_json(obj, path) -> Path:
    """Write ``obj`` as JSON with keys in insertion order and shortest round-trip floats."""
    text = json.dumps(_clean(obj), indent=2, allow_nan=False, ensure_ascii=False) + "\n"
    return _atomic_write(path, text)


def emit_csv(header, rows, path) -> Path:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return _atomic_write(path, buf.getvalue())


def _params_dict(p):
    return {"n": p.n, "gamma": p.gamma, "alpha": p.alpha, "beta": p.beta, "p": p.p}


def _grid_dict(cfg):
    return {"T": cfg.T, "N": cfg.N}


# --------------------------------------------------------------------------
# commands

def cmd_constants(cfg):
    from .spectral import indicial_roots
    p = cfg.params
    pc = problem_constants(p, cfg.tolerances["quadrature"])
    out = {"params": _params_dict(p), "sigma_ng": pc.sigma_ng, "c_ng": pc.c_ng,
           "kappa": pc.kappa, "C_alpha": pc.C_alpha, "kappa_gamma": pc.kappa_gamma,
           "nu": p.nu, "critical_p": p.critical_p}
    if not p.is_hardy_endpoint:
        out["sigma0"] = indicial_roots(p, 1, C=pc.C_alpha)[0].sigma
    return [emit_json(out, cfg.output_dir / "constants.json")]


def cmd_symbol(cfg):
    from .spectral import theta_symbol
    blk = cfg.blocks["symbol"]
    xi = np.linspace(0.0, blk["xi_max"], blk["points"])
    cols = [theta_symbol(m, cfg.params, xi) for m in blk["modes"]]
    header = ["xi"] + [f"theta_m{m}" for m in blk["modes"]]
    rows = [[xi[i]] + [c[i] for c in cols] for i in range(len(xi))]
    return [emit_csv(header, rows, cfg.output_dir / "symbol.csv")]


def cmd_roots(cfg):
    from .spectral import indicial_roots
    pc = problem_constants(cfg.params, cfg.tolerances["quadrature"])
    roots = indicial_roots(cfg.params, cfg.blocks["roots"]["count"], C=pc.C_alpha)
    rows = [[r.index, r.tau, r.sigma, r.residual] for r in roots]
    return [emit_csv(["j", "tau", "sigma", "residual"], rows, cfg.output_dir / "roots.csv")]


def _solve(cfg):
    from .solver import solve_ground_state
    return solve_ground_state(cfg.params, cfg.grid, tol=cfg.tolerances["newton"],
                              quad_tol=cfg.tolerances["quadrature"])


def cmd_solve(cfg):
    from .solver import bubble_amplitude, bubble_profile
    p = cfg.params
    res = _solve(cfg)
    grid = cfg.grid
    summary = {"params": _params_dict(p), "grid": _grid_dict(cfg), "residual": res.residual,
               "energy": res.energy, "normalization": res.normalization,
               "C_alpha": res.C_alpha, "iterations": res.iterations,
               "recentering_shift": res.recentering_shift, "flags": list(res.flags),
               "max": float(np.max(res.field.values))}
    if p.alpha == 0.0 and p.beta == 0.0:
        ref = bubble_amplitude(p.n, p.gamma) * bubble_profile(grid.t, p.n, p.gamma)
        err = float(np.max(np.abs(res.field.values - ref)) / np.max(ref))
        summary["bubble_check"] = {"sup_relative_error": err, "passed": err <= 1e-5}
    rows = zip(grid.t, res.field.values)
    return [emit_csv(["t", "v"], rows, cfg.output_dir / "solve.csv"),
            emit_json(summary, cfg.output_dir / "solve.json")]


def cmd_spectrum(cfg):
    from .stability import (assemble_linearized, higher_mode_certificate, lambda1_sign,
                            lowest_eigs)
    p = cfg.params
    res = _solve(cfg)
    blk = cfg.blocks["spectrum"]
    reps = [lowest_eigs(assemble_linearized(m, res, p), blk["k"]) for m in blk["modes"]]
    reports = [r.as_dict() for r in reps]
    eig_ok = all(r.variational_defect <= cfg.tolerances["eig"] for r in reps)
    lam1, bound, verdict = lambda1_sign(res, p)
    cert = higher_mode_certificate(res, p)
    by_mode = {r["mode"]: r for r in reports}
    morse = None
    if 0 in by_mode and 1 in by_mode:
        morse = by_mode[0]["morse_index"] + by_mode[1]["morse_index"]
    out = {"params": _params_dict(p), "grid": _grid_dict(cfg), "reports": reports,
           "lambda1": lam1, "rayleigh_bound": bound, "verdict": verdict,
           "higher_mode_certificate": cert, "morse_index_modes_0_1": morse,
           "variational_check_passed": eig_ok, "solve_flags": list(res.flags)}
    return [emit_json(out, cfg.output_dir / "spectrum.json")]


SWEEP_HEADER = ["alpha", "beta", "p", "R", "lambda0", "lambda1", "verdict", "sigma0",
                "decay_fit", "converged"]


def cmd_sweep(cfg):
    from .stability import region_sweep
    blk = cfg.blocks["sweep"]
    alphas = blk["alpha"]
    samples = []
    if alphas:
        samples = region_sweep(alphas, [sweep_betas(cfg, a) for a in alphas], cfg.params,
                               cfg.grid, jobs=blk["jobs"], tol=cfg.tolerances["newton"],
                               quad_tol=cfg.tolerances["quadrature"])
    rows = [[getattr(s, k) for k in SWEEP_HEADER] for s in samples]
    return [emit_csv(SWEEP_HEADER, rows, cfg.output_dir / "sweep.csv")]


def cmd_continuation(cfg):
    from .solver import branch_bounds, continuation_gamma, soliton_gamma1
    blk = cfg.blocks["continuation"]
    n = blk["n"] if blk["n"] is not None else (cfg.params.n if cfg.params else 3)
    grid = cfg.grid
    pts = continuation_gamma(blk["c0"], blk["p0"], blk["gamma0"], blk["gamma1"],
                             blk["steps"], grid, n=n, tol=cfg.tolerances["newton"])
    rows = []
    for bp in pts:
        v = bp.field.values
        rows.append([bp.gamma, bp.residual, bp.iterations, float(np.max(v)),
                     float(np.sum(v * v) * grid.spacing),
                     float(np.sum(np.abs(v) ** blk["p0"]) * grid.spacing)])
    summary = {"n": n, "c0": blk["c0"], "p0": blk["p0"], "points": len(pts),
               "bounds": branch_bounds(pts, blk["c0"], blk["p0"], n)}
    if pts[-1].gamma == 1.0:
        ref = soliton_gamma1(grid.t, n, blk["c0"], blk["p0"])
        summary["soliton_sup_relative_error"] = float(
            np.max(np.abs(pts[-1].field.values - ref)) / np.max(ref))
    return [emit_csv(["gamma", "residual", "iterations", "max", "l2", "lp"], rows,
                     cfg.output_dir / "continuation.csv"),
            emit_json(summary, cfg.output_dir / "continuation.json")]


def cmd_hardy(cfg):
    from .solver import hardy_limit_check, richardson_limit
    p = cfg.params
    vals = hardy_limit_check(p, cfg.grid, cfg.blocks["hardy"]["radii"],
                             quad_tol=cfg.tolerances["quadrature"])
    target = 2.0 * problem_constants(p, cfg.tolerances["quadrature"]).kappa
    F = [f for _, f in vals]
    summary = {"params": _params_dict(p), "two_kappa": target,
               "values": [{"R": r, "F": f} for r, f in vals],
               "monotone_decreasing": all(a > b for a, b in zip(F, F[1:])),
               "above_limit": all(f >= target * (1.0 - 1e-10) for f in F)}
    if len(vals) >= 2:
        summary["extrapolated"] = richardson_limit(vals, min(2, len(vals) - 1))
    return [emit_csv(["R", "F"], vals, cfg.output_dir / "hardy.csv"),
            emit_json(summary, cfg.output_dir / "hardy.json")]


def cmd_validate(cfg):
    from .validation import run_check, CHECKS
    only = cfg.blocks["validate"]["only"]
    nums = [c[0] for c in CHECKS] if only is None else only
    known = {c[0] for c in CHECKS}
    bad = [k for k in nums if k not in known]
    if bad:
        raise ValidationError(f"unknown check number(s): {bad}")
    results = []
    for k in nums:
        r = run_check(k)
        print(r.line(), flush=True)
        results.append(r)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed")
    out = {"checks": [{"number": r.number, "title": r.title, "passed": r.passed}
                      for r in results]}
    emit_json(out, cfg.output_dir / "validate.json")
    return passed == len(results)


HANDLERS = {
    "constants": cmd_constants,
    "symbol": cmd_symbol,
    "roots": cmd_roots,
    "solve": cmd_solve,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "continuation": cmd_continuation,
    "hardy-check": cmd_hardy,
    "validate": cmd_validate,
}


def dispatch(command: str, cfg: RunConfig) -> int:
    """Run ``command``; returns the process exit status."""
    try:
        _check_command(cfg, command)
        out = HANDLERS[command](cfg)
    except ConfigError as exc:
        print(json.dumps(_clean(exc.report())), file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(json.dumps(_clean(exc.report())), file=sys.stderr)
        return 1
    if out is False:
        return 1
    return 0


# --------------------------------------------------------------------------
# argument parsing

def _csv_floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _csv_ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser():
    # SUPPRESS keeps a subcommand's unset options from clobbering values
    # given before the subcommand name
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = common.add_argument_group("problem")
    g.add_argument("--config", type=Path, help="YAML configuration file")
    g.add_argument("--n", type=int)
    g.add_argument("--gamma", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--T", type=float, dest="T", help="grid half-length")
    g.add_argument("--N", type=int, dest="N", help="grid points (power of two)")
    g.add_argument("--newton-tol", type=float)
    g.add_argument("--quad-tol", type=float)
    g.add_argument("--eig-tol", type=float)
    g.add_argument("--output-dir", type=Path)

    ap = argparse.ArgumentParser(prog="fracckn", description=__doc__.split("\n\n")[0],
                                 parents=[common])
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub.add_parser("constants", parents=[common], help="structural constants, kappa, C(alpha)")
    s = sub.add_parser("symbol", parents=[common], help="tabulate Theta^(m)")
    s.add_argument("--modes", type=_csv_ints)
    s.add_argument("--xi-max", type=float)
    s.add_argument("--points", type=int)
    s = sub.add_parser("roots", parents=[common], help="indicial roots")
    s.add_argument("--count", type=int)
    sub.add_parser("solve", parents=[common], help="ground state")
    s = sub.add_parser("spectrum", parents=[common], help="linearised spectrum")
    s.add_argument("--modes", type=_csv_ints)
    s.add_argument("--k", type=int)
    s = sub.add_parser("sweep", parents=[common], help="(alpha, beta) region sweep")
    s.add_argument("--alphas", type=_csv_floats)
    s.add_argument("--beta-fractions", type=_csv_floats)
    s.add_argument("--beta-offsets", type=_csv_floats)
    s.add_argument("--beta-values", type=_csv_floats)
    s.add_argument("--jobs", type=int)
    s = sub.add_parser("continuation", parents=[common], help="branch in gamma")
    for name in ("c0", "p0", "gamma0", "gamma1"):
        s.add_argument(f"--{name}", type=float)
    s.add_argument("--steps", type=int)
    s = sub.add_parser("hardy-check", parents=[common], help="cutoff family at beta = alpha + gamma")
    s.add_argument("--radii", type=_csv_floats)
    s = sub.add_parser("validate", parents=[common], help="run the acceptance checks")
    s.add_argument("--only", type=_csv_ints)
    return ap


def _merge(ns, data):
    data = dict(data)
    v = vars(ns)
    for key in ("config", "n", "gamma", "alpha", "beta", "T", "N", "newton_tol", "quad_tol",
                "eig_tol", "output_dir"):
        v.setdefault(key, None)

    def put(block, key, value):
        if value is not None:
            if block is None:
                data[key] = value
            else:
                blk = dict(data.get(block) or {})
                blk[key] = value
                data[block] = blk

    for key in ("n", "gamma", "alpha", "beta"):
        put(None, key, getattr(ns, key))
    put("grid", "T", ns.T)
    put("grid", "N", ns.N)
    put("tolerances", "newton", ns.newton_tol)
    put("tolerances", "quadrature", ns.quad_tol)
    put("tolerances", "eig", ns.eig_tol)
    if ns.output_dir is not None:
        data["output_dir"] = str(ns.output_dir)
    c = ns.command
    if c == "symbol":
        put("symbol", "modes", v["modes"])
        put("symbol", "xi_max", v["xi_max"])
        put("symbol", "points", v["points"])
    elif c == "roots":
        put("roots", "count", v["count"])
    elif c == "spectrum":
        put("spectrum", "modes", v["modes"])
        put("spectrum", "k", v["k"])
    elif c == "sweep":
        put("sweep", "alpha", v["alphas"])
        for key in ("beta_fractions", "beta_offsets", "beta_values"):
            if v[key] is not None:
                blk = dict(data.get("sweep") or {})
                for other in ("beta_fractions", "beta_offsets", "beta_values"):
                    blk.pop(other, None)
                blk[key] = v[key]
                data["sweep"] = blk
        put("sweep", "jobs", v["jobs"])
    elif c == "continuation":
        for key in ("c0", "p0", "gamma0", "gamma1", "steps"):
            put("continuation", key, v[key])
    elif c == "hardy-check":
        put("hardy", "radii", v["radii"])
    elif c == "validate":
        put("validate", "only", v["only"])
    return data


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    config = getattr(ns, "config", None)
    try:
        data = {}
        if config is not None:
            try:
                text = config.read_text(encoding="utf-8")
            except OSError as exc:
                raise ValidationError(f"cannot read config {config}: {exc}") from None
            data = _load_text(text)
        cfg = parse_config(_merge(ns, data), ns.command)
    except ConfigError as exc:
        print(json.dumps(_clean(exc.report())), file=sys.stderr)
        return 2
    except CKNError as exc:
        print(json.dumps(_clean(exc.report())), file=sys.stderr)
        return 1
    return dispatch(ns.command, cfg)


if __name__ == "__main__":
    sys.exit(main())
