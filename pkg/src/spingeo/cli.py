"""Command-line front end.

Subcommands: ``evolve``, ``crossing``, ``equivalence``, ``asymptote``,
``verify``. Exit codes: 0 success, 1 usage error, 2 domain error,
3 numeric or verification failure.
"""
import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .closed_form import AnalyticSolution, asymptotic, evolve_analytic
from .decoherence import DecoherenceConfig, Mode, build_projectors, integrate
from .equivalence import (
    EquivalenceSeed,
    angle_grid,
    check_conditions,
    max_singular_value_gap,
    seed_to_matrix,
    verify_equivalence,
)
from .errors import DomainError, NumericError
from .geometry import membership, separability_crossing, svd3
from .pauli import PauliDecomposition, decompose, reconstruct
from .states import bell_state, maximally_mixed, metrics, validate, werner_state
from .verify import DEFAULT_SEED, fault_injected, run_suite

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2, 3

COLUMNS = (
    ["t"]
    + [f"m_{a}" for a in "xyz"]
    + [f"n_{a}" for a in "xyz"]
    + [f"c_{a}{b}" for a in "xyz" for b in "xyz"]
    + ["sv1", "sv2", "sv3", "purity", "concurrence", "in_octahedron"]
)

PRESETS = {
    "bell-psi-minus": lambda: bell_state("psi-"),
    "bell-psi-plus": lambda: bell_state("psi+"),
    "bell-phi-minus": lambda: bell_state("phi-"),
    "bell-phi-plus": lambda: bell_state("phi+"),
    "maximally-mixed": maximally_mixed,
}

_ANGLE_RE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?$")


class UsageError(Exception):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_angle(text, field="angle"):
    """Radians from a float literal or a ``pi`` expression like ``3pi/4``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().lower().replace(" ", "")
    match = _ANGLE_RE.match(s)
    if match:
        coef, denom = match.groups()
        k = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
        return k * math.pi / (float(denom) if denom else 1.0)
    try:
        value = float(s)
    except ValueError:
        raise UsageError(field, f"cannot parse angle {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(field, "angle must be finite")
    return value


def _floats(text, field, count):
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    if len(parts) != count:
        raise UsageError(field, f"expected {count} numbers, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise UsageError(field, f"cannot parse numbers in {text!r}") from None


def resolve_state(spec):
    """Density matrix for a preset name, ``werner:x``, ``seed:k1,k2,k3`` or 16 complex entries."""
    spec = str(spec).strip()
    if spec in PRESETS:
        return PRESETS[spec]()
    if spec.startswith("werner:"):
        (x,) = _floats(spec[len("werner:"):], "state", 1)
        return werner_state(x)
    if spec.startswith("seed:"):
        k = _floats(spec[len("seed:"):], "state", 3)
        seed = EquivalenceSeed(*k)
        if not seed.is_physical():
            raise DomainError(f"seed {tuple(k)} is outside the tetrahedron of states")
        d = PauliDecomposition(np.zeros(3), np.zeros(3), seed_to_matrix(seed))
        return validate(reconstruct(d))
    parts = [p for p in re.split(r"[,\s]+", spec) if p]
    if len(parts) == 16:
        try:
            entries = [complex(p.replace("i", "j")) for p in parts]
        except ValueError:
            raise UsageError("state", f"cannot parse matrix entries in {spec!r}") from None
        return validate(np.array(entries).reshape(4, 4))
    raise UsageError("state", f"unknown state {spec!r}")


@dataclass
class RunConfig:
    mode: str = "A"
    alpha: float = 0.0
    beta: float = 0.0
    lam: float = 1.0
    state: str = "bell-psi-minus"
    t_max: float = 1.0
    samples: int = 11
    output_format: str = "csv"
    output: str | None = None
    oracle: bool = False
    dt: float | None = None

    def check(self):
        try:
            Mode(self.mode)
        except ValueError:
            raise UsageError("mode", f"must be A, B or C, got {self.mode!r}") from None
        if not math.isfinite(self.lam) or self.lam <= 0:
            raise UsageError("lambda", f"must be a positive number, got {self.lam!r}")
        if not math.isfinite(self.t_max) or self.t_max < 0:
            raise UsageError("t_max", f"must be >= 0, got {self.t_max!r}")
        if self.samples < 1 or (self.t_max > 0 and self.samples < 2):
            raise UsageError("samples", "need at least 2 samples when t_max > 0")
        if self.output_format not in ("csv", "json"):
            raise UsageError("format", f"must be csv or json, got {self.output_format!r}")
        if self.dt is not None and (not math.isfinite(self.dt) or self.dt <= 0):
            raise UsageError("dt", "must be positive")
        return self

    def times(self):
        if self.t_max == 0:
            return [0.0]
        n = self.samples - 1
        return [self.t_max * i / n for i in range(self.samples)]


# config-file keys -> RunConfig attributes
_FILE_KEYS = {
    "mode": "mode",
    "alpha": "alpha",
    "beta": "beta",
    "lambda": "lam",
    "state": "state",
    "initial_state": "state",
    "t_max": "t_max",
    "samples": "samples",
    "format": "output_format",
    "output_format": "output_format",
    "output": "output",
    "oracle": "oracle",
    "dt": "dt",
}


def load_config(args):
    values = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise UsageError("config", str(exc)) from None
        except tomllib.TOMLDecodeError as exc:
            raise UsageError("config", f"invalid TOML: {exc}") from None
        for key, value in data.items():
            if key not in _FILE_KEYS:
                raise UsageError(key, "unknown config field")
            values[_FILE_KEYS[key]] = value
    for key, attr in _FILE_KEYS.items():
        flag = getattr(args, attr, None)
        if flag is not None and flag is not False:
            values[attr] = flag
    cfg = RunConfig()
    try:
        for attr, value in values.items():
            if attr in ("alpha", "beta"):
                value = parse_angle(value, attr)
            elif attr in ("lam", "t_max") or (attr == "dt" and value is not None):
                value = float(value)
            elif attr == "samples":
                value = int(value)
            elif attr == "oracle":
                value = bool(value)
            elif attr in ("mode", "state", "output_format", "output"):
                value = str(value)
            setattr(cfg, attr, value)
    except (TypeError, ValueError) as exc:
        raise UsageError(attr, str(exc)) from None
    return cfg.check()


def _row(t, d, rho):
    cv = svd3(d.c)
    met = metrics(rho)
    values = [t, *d.m, *d.n, *d.c.ravel(), *cv.values, met.purity, met.concurrence]
    # + 0.0 folds negative zero so output does not depend on its sign
    return [float(x) + 0.0 for x in values] + [membership(cv).in_octahedron]


def evolve_rows(cfg):
    rho0 = resolve_state(cfg.state)
    d0 = decompose(rho0)
    rows = []
    if cfg.oracle:
        dcfg = DecoherenceConfig(cfg.lam, build_projectors(cfg.mode, cfg.alpha, cfg.beta))
        rho, t_prev = rho0, 0.0
        for t in cfg.times():
            rho = integrate(rho, dcfg, t - t_prev, cfg.dt)
            t_prev = t
            rows.append(_row(t, decompose(rho), rho))
    else:
        sol = AnalyticSolution(cfg.mode, cfg.alpha, cfg.beta, cfg.lam, d0)
        for t in cfg.times():
            d = evolve_analytic(sol, t)
            rows.append(_row(t, d, reconstruct(d)))
    return rows


def format_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([format(float(x), ".17g") for x in row[:-1]] + [int(row[-1])])
    return buf.getvalue()


def format_json(rows):
    records = [dict(zip(COLUMNS, [float(x) for x in row[:-1]] + [bool(row[-1])])) for row in rows]
    return json.dumps(records, indent=2) + "\n"


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_evolve(args):
    cfg = load_config(args)
    rows = evolve_rows(cfg)
    text = format_csv(rows) if cfg.output_format == "csv" else format_json(rows)
    _emit(text, cfg.output)
    return EXIT_OK


def _fmt_vec(v):
    return " ".join(format(float(x) + 0.0, ".17g") for x in v)


def _initial_decomposition(cfg):
    return decompose(resolve_state(cfg.state))


def cmd_crossing(args):
    cfg = load_config(args)
    d0 = _initial_decomposition(cfg)
    if d0.has_local_parameters():
        raise DomainError("crossing needs a state with vanishing local parameters (m = n = 0)")
    res = separability_crossing(AnalyticSolution(cfg.mode, cfg.alpha, cfg.beta, cfg.lam, d0))
    report = {
        "status": res.status,
        "lambda_t": res.lambda_t,
        "asymptotic_boundary": res.asymptotic_boundary,
        "correlation_vector": None if res.vector is None else [float(x) for x in res.vector.values],
    }
    if cfg.output_format == "json":
        _emit(json.dumps(report, indent=2) + "\n", cfg.output)
        return EXIT_OK
    lines = [
        f"status: {res.status}",
        f"lambda_t: {'none' if res.lambda_t is None else format(res.lambda_t, '.17g')}",
        f"asymptotic_boundary: {str(res.asymptotic_boundary).lower()}",
        f"correlation_vector: {'none' if res.vector is None else _fmt_vec(res.vector.values)}",
    ]
    _emit("\n".join(lines) + "\n", cfg.output)
    return EXIT_OK


def _read_matrix(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError("matrix", str(exc)) from None
    return np.array(_floats(text, "matrix", 9)).reshape(3, 3)


def cmd_equivalence(args):
    grid = angle_grid(args.grid)
    if args.matrix:
        if args.k:
            raise UsageError("k", "give either k1 k2 k3 or --matrix, not both")
        c0 = _read_matrix(args.matrix)
        seed = None
    else:
        if len(args.k) != 3:
            raise UsageError("k", "expected three numbers k1 k2 k3")
        try:
            seed = EquivalenceSeed(*(float(k) for k in args.k))
        except ValueError:
            raise UsageError("k", f"cannot parse {args.k!r}") from None
        c0 = seed_to_matrix(seed)
    rep = check_conditions(c0)
    physical = membership(svd3(c0)).in_tetrahedron
    if seed is not None and physical:
        equivalent = verify_equivalence(seed, args.lam, args.t, grid)
    else:
        equivalent = max_singular_value_gap(c0, args.lam, args.t, grid) <= 1e-9
    lines = [
        f"trace_condition: {'ok' if rep.trace_condition_ok else 'fail'}",
        f"det_condition: {'ok' if rep.det_condition_ok else 'fail'}",
        f"trace_residual: {rep.trace_residual:.3e}",
        f"det_residual: {rep.det_residual:.3e}",
        f"singular_value_residual: {rep.singular_value_residual:.3e}",
        f"physical: {'yes' if physical else 'no'}",
        f"equivalent: {'yes' if equivalent else 'no'}",
    ]
    print("\n".join(lines))
    return EXIT_OK


def cmd_asymptote(args):
    cfg = load_config(args)
    res = asymptotic(AnalyticSolution(cfg.mode, cfg.alpha, cfg.beta, cfg.lam, _initial_decomposition(cfg)))
    if cfg.output_format == "json":
        report = {
            "w": res.w,
            "c_infinity": (res.c_infinity + 0.0).tolist(),
            "correlation_vector": list(res.correlation_vector),
        }
        _emit(json.dumps(report, indent=2) + "\n", cfg.output)
        return EXIT_OK
    lines = [f"w: {res.w:.17g}", "c_infinity:"]
    lines += ["  " + _fmt_vec(row) for row in res.c_infinity]
    lines.append(f"correlation_vector: {_fmt_vec(res.correlation_vector)}")
    _emit("\n".join(lines) + "\n", cfg.output)
    return EXIT_OK


def _paint(text, ok):
    if os.environ.get("NO_COLOR") is not None or not sys.stdout.isatty():
        return text
    return f"\033[{32 if ok else 31}m{text}\033[0m"


def cmd_verify(args):
    if args.inject_fault:
        with fault_injected():
            results = run_suite(args.seed, args.quick)
    else:
        results = run_suite(args.seed, args.quick)
    width = max(len(f"{r.module}.{r.name}") for r in results)
    for r in results:
        status = _paint("PASS" if r.passed else "FAIL", r.passed)
        print(f"{status}  {f'{r.module}.{r.name}':<{width}}  {r.seconds:6.2f}s  {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed (seed {args.seed})")
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


def _run_options(p, with_output=True):
    p.add_argument("--config", help="TOML file with the same field names as the flags")
    p.add_argument("--mode", choices=["A", "B", "C"])
    p.add_argument("--alpha", help="first-qubit rotation angle in radians (accepts pi/2 etc.)")
    p.add_argument("--beta", help="second-qubit rotation angle (mode C)")
    p.add_argument("--lambda", dest="lam", type=float, help="decoherence rate (default 1)")
    p.add_argument(
        "--state",
        help="bell-psi-minus|bell-psi-plus|bell-phi-minus|bell-phi-plus|maximally-mixed|"
        "werner:x|seed:k1,k2,k3|16 comma-separated complex entries",
    )
    if with_output:
        p.add_argument("--format", dest="output_format", choices=["csv", "json"])
        p.add_argument("--output", "-o", help="output path (default: standard output)")


def build_parser():
    parser = _Parser(prog="spingeo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("evolve", help="tabulate a trajectory (closed form, or RK4 with --oracle)")
    _run_options(p)
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--oracle", action="store_true", help="integrate numerically instead of the closed form")
    p.add_argument("--dt", type=float, help="RK4 step (default 1e-3/lambda)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("crossing", help="lambda*t at which the state becomes separable")
    _run_options(p)
    p.set_defaults(func=cmd_crossing)

    p = sub.add_parser("equivalence", help="check the mode-B/mode-C equivalence conditions")
    p.add_argument("k", nargs="*", help="k1 k2 k3 of the seed matrix")
    p.add_argument("--matrix", help="file with a 3x3 correlation matrix (9 numbers)")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=12, help="angle grid size per axis")
    p.set_defaults(func=cmd_equivalence)

    p = sub.add_parser("asymptote", help="infinite-time correlation matrix")
    _run_options(p)
    p.set_defaults(func=cmd_asymptote)

    p = sub.add_parser("verify", help="run the property self-check suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--quick", action="store_true", help="reduced sample counts")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"spingeo: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"spingeo: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericError as exc:
        print(f"spingeo: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"spingeo: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
