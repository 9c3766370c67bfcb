"""The ``epd`` command: special functions, kernels, solvers and verification.

Every invocation is described by a ``RunConfig``, built either from flags or
from a JSON document (``epd --config run.json``).  ``--dump-config`` prints
the config that flags would produce, so a run can be saved and replayed.

Exit codes: 0 success, 1 domain or input error, 2 convergence failure,
3 verification FAIL.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Sequence

import numpy as np

from . import __version__
from . import kernels as K
from . import specfun as S
from .data import CauchyData, SeriesCoefficients, parse_coefficients, parse_data
from .errors import DomainError, NoConvergence
from .kernels import EPDParameters
from .quadrature import QuadratureSpec
from .solver import Grid, Method, SolutionSample, solve_grid

log = logging.getLogger("epd")

EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 1, 2, 3

COMMANDS = ("eval", "kernel", "solve", "verify")
EVAL_TARGETS = ("2f1", "f4", "bessel", "legendre", "gamma")
KERNEL_TARGETS = ("w", "n", "k", "h")
SOLVE_TARGETS = {
    "classical": Method.CLASSICAL_QUAD,
    "classical-modified": Method.MODIFIED_QUAD,
    "radial": Method.RADIAL_QUAD,
    "radial-series": Method.RADIAL_SERIES,
    "radial-modified": Method.MODIFIED_RADIAL_QUAD,
}
CSV_COLUMNS = ("t", "x", "value", "phase_re", "phase_im", "est_error", "method", "region")


class ConfigError(DomainError):
    """Malformed configuration; reported with the offending key."""


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

@dataclass
class RunConfig:
    """One CLI run.

    ``a`` and ``b`` are numbers for ``eval`` and coefficient lists for
    ``solve radial-series``.  ``kind`` picks J/Y or P/Q for ``eval``.
    """

    command: str
    target: str
    mu: float | None = None
    nu: float | None = None
    n: int | None = None
    q: float | None = None
    a: Any = None
    b: Any = None
    c: float | None = None
    d: float | None = None
    z: float | None = None
    y: float | None = None
    order: float | None = None
    kind: str | None = None
    series_tol: float = 1e-15
    t: float | None = None
    x: float | None = None
    xp: float | None = None
    f: str = "zero"
    g: str = "zero"
    grid: str | None = None
    quadrature: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"key 'command': expected one of {COMMANDS}, got {self.command!r}")
        allowed = {"eval": EVAL_TARGETS, "kernel": KERNEL_TARGETS,
                   "solve": tuple(SOLVE_TARGETS)}.get(self.command)
        if allowed is not None and self.target not in allowed:
            raise ConfigError(f"key 'target': {self.command} expects one of {allowed}, "
                              f"got {self.target!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"key 'format': expected 'csv' or 'json', got {self.format!r}")
        bad = set(self.quadrature) - {f.name for f in fields(QuadratureSpec)}
        if bad:
            raise ConfigError(f"key 'quadrature': unknown field(s) {sorted(bad)}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        for key in ("command", "target"):
            if key not in doc:
                raise ConfigError(f"missing required key {key!r}")
        return cls(**doc)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(doc)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    # derived objects ---------------------------------------------------------
    def params(self) -> EPDParameters:
        if self.mu is None:
            raise ConfigError("key 'mu' is required")
        return EPDParameters(self.mu, self.nu, self.n, self.q)

    def quad(self) -> QuadratureSpec:
        return QuadratureSpec(**self.quadrature)

    def need(self, *keys: str) -> list:
        out = []
        for k in keys:
            v = getattr(self, k)
            if v is None:
                raise ConfigError(f"key {k!r} is required for {self.command} {self.target}")
            out.append(v)
        return out


def parse_grid(text: str) -> Grid:
    """``t=start:stop:step;x=start:stop:step`` (stop included); ``x=1`` is one point."""
    axes: dict[str, tuple[float, ...]] = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        name, sep, spec = part.partition("=")
        name = name.strip()
        if not sep or name not in ("t", "x"):
            raise ConfigError(f"grid: expected 't=...' or 'x=...', got {part!r}")
        try:
            nums = [float(v) for v in spec.split(":")]
        except ValueError:
            raise ConfigError(f"grid: bad number in {part!r}") from None
        if len(nums) == 1:
            axes[name] = (nums[0],)
        elif len(nums) == 3:
            start, stop, step = nums
            if step <= 0 or stop < start:
                raise ConfigError(f"grid: need step > 0 and stop >= start in {part!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            axes[name] = tuple(float(v) for v in start + step * np.arange(count))
        else:
            raise ConfigError(f"grid: use start:stop:step or a single value in {part!r}")
    missing = {"t", "x"} - set(axes)
    if missing:
        raise ConfigError(f"grid: missing axis {sorted(missing)}")
    return Grid(axes["t"], axes["x"])


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def _num(v: float) -> str:
    return "%.17g" % v


def samples_to_csv(samples: Sequence[SolutionSample]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in samples:
        x = s.x if np.ndim(s.x) == 0 else s.x[0]
        ph = complex(s.phase)
        w.writerow([_num(s.t), _num(float(x)), _num(s.value), _num(ph.real), _num(ph.imag),
                    _num(s.est_error), Method(s.method).value, s.region])
    return buf.getvalue()


def _finite(v):
    return v if isinstance(v, float) and math.isfinite(v) else (None if isinstance(v, float) else v)


def sample_to_dict(s: SolutionSample) -> dict:
    ph = complex(s.phase)
    x = list(s.x) if np.ndim(s.x) > 0 else float(s.x)
    return {"t": s.t, "x": x, "value": _finite(float(s.value)), "phase_re": ph.real,
            "phase_im": ph.imag, "est_error": _finite(float(s.est_error)),
            "method": Method(s.method).value, "region": s.region, "skipped": s.skipped,
            "note": s.note}


def _failures(report: dict, path: str = "") -> list[dict]:
    here = f"{path}/{report['name']}" if path else report["name"]
    if report["pass"]:
        return []
    below = [f for p in report["parts"] for f in _failures(p, here)]
    return below or [{"check": here, "max_residual": report["max_residual"],
                      "tolerance": report["tolerance"]}]


def _write(text: str, path: str | None, cfg: RunConfig, started: float):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    meta = {"epd_version": __version__, "config": cfg.to_dict(),
            "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "elapsed_s": time.perf_counter() - started}
    with open(path + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    log.info("wrote %s", path)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _eval(cfg: RunConfig):
    tgt = cfg.target
    ctl = S.SeriesControl(tol=cfg.series_tol)
    if tgt == "2f1":
        a, b, c, z = cfg.need("a", "b", "c", "z")
        return S.gauss_2f1(float(a), float(b), c, z, ctl).value
    if tgt == "f4":
        a, b, c, d, x, y = cfg.need("a", "b", "c", "d", "x", "y")
        return S.appell_f4(float(a), float(b), c, d, x, y, ctl).value
    if tgt == "bessel":
        order, z = cfg.need("order", "z")
        kind = (cfg.kind or "j").lower()
        if kind not in ("j", "y"):
            raise ConfigError("key 'kind': bessel expects 'j' or 'y'")
        return S.bessel_j(order, z) if kind == "j" else S.bessel_y(order, z)
    if tgt == "legendre":
        mu, nu, z = cfg.need("mu", "nu", "z")
        kind = (cfg.kind or "p").lower()
        if kind not in ("p", "q"):
            raise ConfigError("key 'kind': legendre expects 'p' or 'q'")
        return S.legendre_p(mu, nu, z, ctl) if kind == "p" else S.legendre_q(mu, nu, z, ctl)
    (x,) = cfg.need("x")
    return S.gamma_fn(x)


def _format_scalar(v) -> str:
    if isinstance(v, complex):
        return f"{v.real!r} {v.imag!r}"
    return repr(float(v))


def _kernel(cfg: RunConfig) -> K.KernelValue:
    p = cfg.params()
    t, x, xp = cfg.need("t", "x", "xp")
    if cfg.target == "w":
        return K.w_kernel(p, t, x, xp)
    if cfg.target == "n":
        return K.n_kernel(p, t, x, xp)
    if cfg.target == "k":
        return K.k_kernel(p, t, x, xp)
    return K.h_kernel(p, t, x, xp)


def _solve(cfg: RunConfig) -> list[SolutionSample]:
    method = SOLVE_TARGETS[cfg.target]
    p = cfg.params()
    (grid_text,) = cfg.need("grid")
    grid = parse_grid(grid_text)
    if method is Method.RADIAL_SERIES:
        a = parse_coefficients(cfg.a if cfg.a is not None else "0")
        b = parse_coefficients(cfg.b if cfg.b is not None else "0")
        return solve_grid(method, p, grid, coeffs=SeriesCoefficients(a or (0.0,), b or (0.0,)))
    data = CauchyData(parse_data(cfg.f), parse_data(cfg.g))
    return solve_grid(method, p, grid, data=data, quad=cfg.quad(), workers=cfg.workers)


def run(cfg: RunConfig) -> int:
    """Execute a config; returns the process exit code."""
    started = time.perf_counter()
    log.info("running %s %s", cfg.command, cfg.target)
    if cfg.command == "eval":
        value = _eval(cfg)
        text = (_format_scalar(value) + "\n" if cfg.format == "csv"
                else json.dumps({"target": cfg.target, "value": _json_value(value)}) + "\n")
        _write(text, cfg.output, cfg, started)
        return EXIT_OK
    if cfg.command == "kernel":
        kv = _kernel(cfg)
        ph = complex(kv.phase)
        doc = {"kernel": cfg.target, "profile": kv.profile, "phase_re": ph.real,
               "phase_im": ph.imag, "region": kv.region.value}
        _write(json.dumps(doc) + "\n", cfg.output, cfg, started)
        return EXIT_OK
    if cfg.command == "solve":
        samples = _solve(cfg)
        for s in samples:
            if s.skipped:
                log.info("t=%g x=%s %s", s.t, s.x, s.note)
        if cfg.format == "csv":
            text = samples_to_csv(samples)
        else:
            text = json.dumps([sample_to_dict(s) for s in samples], indent=1) + "\n"
        _write(text, cfg.output, cfg, started)
        return EXIT_OK
    from .verify import run_suite
    report = run_suite(cfg.target)
    doc = report.to_dict()
    if not report.passed:
        doc["notes"]["failures"] = _failures(doc)
    _write(json.dumps(doc, indent=1) + "\n", cfg.output, cfg, started)
    log.info(report.summary())
    return EXIT_OK if report.passed else EXIT_VERIFY


def _json_value(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    return float(v)


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def _common(sp: argparse.ArgumentParser):
    sp.add_argument("--output", "-o", help="write to this path (plus a .meta.json sidecar)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--dump-config", action="store_true",
                    help="print the RunConfig JSON instead of running")


def _params(sp: argparse.ArgumentParser):
    sp.add_argument("--mu", type=float)
    sp.add_argument("--nu", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--q", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="epd", description=__doc__.split("\n\n")[0],
                 epilog="Verbosity: set EPD_LOG to error, info or debug.")
    ap.add_argument("--config", help="run from a JSON RunConfig document")
    ap.add_argument("--output", "-o", dest="config_output", metavar="OUTPUT",
                    help="with --config: override the config's output path")
    ap.add_argument("--version", action="version", version=f"epd {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    ev = sub.add_parser("eval", help="special functions")
    ev.add_argument("target", choices=EVAL_TARGETS)
    for k in ("a", "b", "c", "d", "z", "x", "y", "order", "mu", "nu"):
        ev.add_argument(f"--{k}", type=float)
    ev.add_argument("--kind", help="j or y for bessel, p or q for legendre")
    ev.add_argument("--series-tol", type=float, default=1e-15,
                    help="relative truncation tolerance of the series")
    _common(ev)

    kn = sub.add_parser("kernel", help="kernel values at one (t, x, x')")
    kn.add_argument("target", choices=KERNEL_TARGETS)
    _params(kn)
    for k in ("t", "x", "xp"):
        kn.add_argument(f"--{k}", type=float)
    _common(kn)

    sv = sub.add_parser("solve", help="solve over a grid",
                        epilog="Grid syntax: 't=start:stop:step;x=start:stop:step', stop "
                               "included; a single value such as 'x=1' gives one point. "
                               "Data literals: poly:c0,c1,..  gauss:amp,center,width  "
                               "bump:center,radius  zero.  For classical solvers x is "
                               "placed on the first axis.")
    sv.add_argument("target", choices=tuple(SOLVE_TARGETS))
    _params(sv)
    sv.add_argument("--f", default="zero", help="initial value literal")
    sv.add_argument("--g", default="zero", help="initial velocity literal")
    sv.add_argument("--a", help="series coefficients of f, e.g. '1,0,2'")
    sv.add_argument("--b", help="series coefficients of g")
    sv.add_argument("--grid", required=False)
    sv.add_argument("--scheme", choices=("GaussKronrod", "TanhSinh"))
    sv.add_argument("--rel-tol", type=float)
    sv.add_argument("--abs-tol", type=float)
    sv.add_argument("--max-subdivisions", type=int)
    sv.add_argument("--workers", type=int, default=1)
    _common(sv)

    vf = sub.add_parser("verify", help="run a verification suite")
    vf.add_argument("target", help="suite name or 'all'")
    _common(vf)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = {k: v for k, v in vars(ns).items()
         if k not in ("config", "config_output", "dump_config", "scheme", "rel_tol", "abs_tol", "max_subdivisions")}
    quad = {name: getattr(ns, key) for name, key in
            (("scheme", "scheme"), ("rel_tol", "rel_tol"), ("abs_tol", "abs_tol"),
             ("max_subdivisions", "max_subdivisions")) if getattr(ns, key, None) is not None}
    known = {f.name for f in fields(RunConfig)}
    d = {k: v for k, v in d.items() if k in known}
    d["quadrature"] = quad
    return RunConfig(**d)


def _setup_logging():
    level = os.environ.get("EPD_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    if level not in levels:
        level = "error"
    logging.basicConfig(level=levels[level], stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.config:
            try:
                with open(ns.config, encoding="utf-8") as fh:
                    cfg = RunConfig.from_json(fh.read())
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from None
            if ns.config_output is not None:
                cfg = replace(cfg, output=ns.config_output)
        elif ns.command is None:
            parser.print_help(sys.stderr)
            return EXIT_DOMAIN
        else:
            cfg = config_from_args(ns)
            if ns.dump_config:
                sys.stdout.write(cfg.to_json() + "\n")
                return EXIT_OK
        return run(cfg)
    except ConfigError as exc:
        print(f"epd: config error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (DomainError, ValueError, TypeError) as exc:
        print(f"epd: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NoConvergence as exc:
        print(f"epd: no convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"epd: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
