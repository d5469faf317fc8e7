"""Command-line front end.

Usage::

    stripembed pi --p 3
    stripembed sinp-table --p 1.5 --points 129 --csv table.csv --svg sinp.svg
    stripembed norm --p 2 --free 1 --interval 0:3.141592653589793
    stripembed rayleigh --p 2 --free 1 --interval 0:3.141592653589793 --l 12.566
    stripembed verify-ul --p 3 --free 1 --interval 0:3.141592653589793 --l 3.14159
    stripembed eigen --p 2 --rect 0:1 --grid 255 --tol 1e-10
    stripembed certify --p 2 --free 1 --interval 0:3.141592653589793 --m 4
    stripembed refute --p 2 --free 1 --interval 0:3.141592653589793 --centers 4

JSON goes to ``--output`` (or stdout) with top-level keys ``input``,
``result``, ``error_estimates`` and ``meta``. Exit codes: 0 success,
1 invalid input, 2 no convergence, 3 certificate or refutation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .domain import StripDomain, embedding_norm, lambda_closed_form
from .eigensolve import eigenfunction_error, first_eigenpair
from .errors import (
    CertificationError,
    ConvergenceError,
    DomainError,
    RefutationError,
    StripEmbedError,
)
from .extremal import rayleigh, rectangle_maximizer, strip_gap, strip_trial, verify_ul_norms
from .noncompact import build_translates, certify_isomorphism_bound, random_net, refute_net
from .ptrig import as_exponent, pi_p_closed_form, pi_p_quadrature_with_error, sin_cos_p
from .quad import Rectangle

__all__ = ["COMMANDS", "RunConfig", "main", "run", "to_json"]

COMMANDS = ("pi", "sinp-table", "norm", "rayleigh", "verify-ul", "eigen", "certify", "refute")

EXIT_OK, EXIT_INPUT, EXIT_CONVERGENCE, EXIT_CERTIFICATE = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    """Everything a single command needs; equal configs give identical output."""

    command: str
    p: float = 2.0
    free: int = 1
    intervals: tuple = ()
    rect: tuple = ()
    grid: tuple = (63,)
    l: float | None = None
    m: int = 4
    resolution: int = 32
    tol: float | None = None
    seed: int = 42
    trials: int = 100
    points: int = 65
    radius: float = 0.6
    rtilde: float = 0.65
    centers: int = 4
    extent: float = 100.0
    output: str | None = None
    csv: str | None = None
    svg: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.csv and self.command not in ("sinp-table", "eigen"):
            raise DomainError("--csv is only available for sinp-table and eigen")
        if self.svg and self.command not in ("sinp-table", "eigen"):
            raise DomainError("--svg is only available for sinp-table and eigen")
        for name in ("m", "resolution", "trials", "points", "centers"):
            if getattr(self, name) < 1:
                raise DomainError(f"--{name} must be positive")

    def domain(self) -> StripDomain:
        if not self.intervals:
            raise DomainError("give at least one bounded axis with --interval a:b")
        return StripDomain(self.free, self.intervals)


# -- serialisation -----------------------------------------------------------

def _clean(obj):
    """Convert numpy scalars/arrays and tuples to plain JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"non-finite number {x!r} in output")
        return x
    return obj


def _emit(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(k)}: ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        if all(not isinstance(v, (dict, list)) for v in obj):
            parts = []
            for v in obj:
                sub = []
                _emit(v, indent, level, sub)
                parts.append("".join(sub))
            out.append("[" + ", ".join(parts) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    elif isinstance(obj, float):
        text = format(obj, ".17g")
        # keep floats recognisable as floats after a round trip
        if not any(c in text for c in ".e"):
            text += ".0"
        out.append(text)
    else:
        out.append(json.dumps(obj))


def to_json(payload: dict, indent: int = 2) -> str:
    """JSON text with every float printed to 17 significant digits."""
    out: list = []
    _emit(_clean(payload), indent, 0, out)
    return "".join(out) + "\n"


def _write_csv(path: str, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(float(v), ".17g") for v in row])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def _write_svg(path: str, x, y, title: str, width=640, height=360, margin=40):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = float(y.min()), float(y.max())
    if y1 == y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    sx = (width - 2 * margin) / (x1 - x0 if x1 > x0 else 1.0)
    sy = (height - 2 * margin) / (y1 - y0)
    pts = " ".join(f"{margin + (a - x0) * sx:.3f},{height - margin - (b - y0) * sy:.3f}"
                   for a, b in zip(x, y))
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'  <title>{title}</title>\n'
        f'  <rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
        f'height="{height - 2 * margin}" fill="none" stroke="#999"/>\n'
        f'  <polyline fill="none" stroke="#1f4e99" stroke-width="1.5" points="{pts}"/>\n'
        f'  <text x="{margin}" y="{margin - 12}" font-family="sans-serif" '
        f'font-size="13">{title}</text>\n'
        f'  <text x="{margin}" y="{height - 12}" font-family="sans-serif" font-size="11">'
        f'x: [{x0:.6g}, {x1:.6g}]  y: [{y0:.6g}, {y1:.6g}]</text>\n'
        "</svg>\n"
    )
    Path(path).write_text(svg, encoding="utf-8")


# -- commands ------------------------------------------------------------------

def _cmd_pi(cfg: RunConfig):
    tol = cfg.tol or 1e-12
    closed = pi_p_closed_form(cfg.p)
    quad, est = pi_p_quadrature_with_error(cfg.p, tol)
    return ({"pi_p": closed, "pi_p_quadrature": quad},
            {"abs_diff_closed_vs_quadrature": abs(quad - closed), "quadrature_estimate": est})


def _cmd_sinp_table(cfg: RunConfig):
    pe = as_exponent(cfg.p)
    x = np.linspace(0.0, 2.0 * pe.pi_p, cfg.points)
    s, c = sin_cos_p(pe, x)
    identity = float(np.max(np.abs(np.abs(s) ** pe.p + np.abs(c) ** pe.p - 1.0)))
    if cfg.csv:
        _write_csv(cfg.csv, ["x", "sin_p", "cos_p"], zip(x, s, c))
    if cfg.svg:
        _write_svg(cfg.svg, x, s, f"sin_p on [0, 2 pi_p], p = {pe.p:g}")
    result = {"pi_p": pe.pi_p, "x": x, "sin_p": s, "cos_p": c}
    return result, {"max_pythagorean_defect": identity}


def _cmd_norm(cfg: RunConfig):
    d = cfg.domain()
    pe = as_exponent(cfg.p)
    const = embedding_norm(pe, d, verify=True)
    return ({"lambda": const.lambda_, "norm": const.norm, "pi_p": pe.pi_p},
            {"pi_p_closed_vs_quadrature": pe.verify()})


def _default_l(d: StripDomain) -> float:
    return 16.0 * max(d.widths)


def _cmd_rayleigh(cfg: RunConfig):
    d = cfg.domain()
    lam = lambda_closed_form(cfg.p, d)
    if d.k == 0:
        box = d.bounded_part
        rep = rayleigh(rectangle_maximizer(cfg.p, box), box, cfg.p, cfg.resolution)
        gap = 0.0
        l = None
    else:
        l = cfg.l or _default_l(d)
        rep = rayleigh(strip_trial(cfg.p, d, l), d.truncated(l), cfg.p, cfg.resolution)
        gap = strip_gap(cfg.p, d, l)
    result = {
        "l": l,
        "quotient": rep.quotient,
        "lambda": lam,
        "gap": rep.quotient - lam,
        "gap_closed_form": gap,
        "grad_norm_p": rep.grad_norm_p,
        "func_norm_p": rep.func_norm_p,
    }
    return result, {"quadrature_refinement": rep.quad_error,
                    "gap_abs_diff": abs(rep.quotient - lam - gap)}


def _cmd_verify_ul(cfg: RunConfig):
    d = cfg.domain()
    l = cfg.l or _default_l(d)
    rep = verify_ul_norms(cfg.p, d, l, cfg.resolution)
    result = {"l": l, **{k: v for k, v in asdict(rep).items()
                         if k not in ("func_diff", "grad_diff", "quad_error")}}
    errs = {
        "func_rel_diff": rep.func_diff / rep.closed_func,
        "grad_rel_diff": rep.grad_diff / rep.closed_grad,
        "quadrature_refinement": rep.quad_error,
    }
    return result, errs


def _cmd_eigen(cfg: RunConfig):
    if not cfg.rect:
        raise DomainError("give the rectangle with one --rect a:b per axis")
    box = Rectangle(cfg.rect)
    if len(cfg.grid) not in (1, box.ndim):
        raise DomainError(f"--grid needs 1 or {box.ndim} counts, got {len(cfg.grid)}")
    grid = cfg.grid * box.ndim if len(cfg.grid) == 1 else cfg.grid
    tol = cfg.tol or 1e-10
    res = first_eigenpair(cfg.p, box, grid, tol=tol)
    exact = lambda_closed_form(cfg.p, StripDomain(0, box.intervals))
    ef_err = eigenfunction_error(res, cfg.p)
    if cfg.csv:
        _write_csv(cfg.csv, ["iteration", "quotient"], enumerate(res.history))
    if cfg.svg:
        _write_svg(cfg.svg, np.arange(res.history.size), np.log10(res.history - res.history[-1] + 1e-300),
                   "log10(R_k - R_final) during descent")
    result = {
        "lambda_h": res.lambda_h,
        "lambda_closed_form": exact,
        "iterations": res.iterations,
        "grid": list(grid),
    }
    errs = {
        "abs_diff": abs(res.lambda_h - exact),
        "rel_diff": abs(res.lambda_h - exact) / exact,
        "final_relative_change": res.residual,
        "eigenfunction_max_dev": ef_err,
    }
    return result, errs


def _cmd_certify(cfg: RunConfig):
    d = cfg.domain()
    l = cfg.l or _default_l(d)
    ts = build_translates(cfg.p, d, l, cfg.m)
    cert = certify_isomorphism_bound(ts, trials=cfg.trials, tol=cfg.tol or 1e-6, seed=cfg.seed)
    norm = embedding_norm(cfg.p, d).norm
    result = {"l": l, "m": cfg.m, "lower_bound": cert.lower_bound, "embedding_norm": norm,
              "gap": norm - cert.lower_bound, "valid": cert.valid}
    errs = {k: getattr(cert, k) for k in
            ("b_isometry_dev", "a_bound_dev", "aib_identity_dev", "disjointness_dev")}
    return result, errs


def _cmd_refute(cfg: RunConfig):
    d = cfg.domain()
    l = cfg.l or _default_l(d)
    rng = np.random.default_rng(cfg.seed)
    net = random_net(d, rng, cfg.centers, cfg.extent, cfg.radius)
    ref = refute_net(cfg.p, d, l, net, cfg.rtilde, verify=True)
    result = {
        "l": l,
        "translation": ref.translation,
        "witness_lp_norm": ref.witness_norm,
        "radius": ref.radius,
        "rtilde": cfg.rtilde,
        "margins": list(ref.margins),
        "centers": [c.box.intervals for c in net.centers],
    }
    errs = {"max_margin_change_at_double_resolution":
            max(abs(a - b) for a, b in zip(ref.margins, ref.verified_margins))}
    return result, errs


_DISPATCH = {
    "pi": _cmd_pi,
    "sinp-table": _cmd_sinp_table,
    "norm": _cmd_norm,
    "rayleigh": _cmd_rayleigh,
    "verify-ul": _cmd_verify_ul,
    "eigen": _cmd_eigen,
    "certify": _cmd_certify,
    "refute": _cmd_refute,
}


def _meta() -> dict:
    return {
        "stripembed": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def _echo(cfg: RunConfig) -> dict:
    out = asdict(cfg)
    for k in ("output", "csv", "svg"):
        out.pop(k)
    return out


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        result, errs = _DISPATCH[cfg.command](cfg)
        text = to_json({"input": _echo(cfg), "result": result,
                        "error_estimates": errs, "meta": _meta()})
    except DomainError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"no convergence: {exc}", file=stderr)
        return EXIT_CONVERGENCE
    except (CertificationError, RefutationError) as exc:
        print(f"failed: {exc}", file=stderr)
        return EXIT_CERTIFICATE
    except StripEmbedError as exc:  # pragma: no cover - every subclass is handled above
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1), not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _interval(text: str):
    try:
        a, b = text.split(":")
        return float(a), float(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from None


def _counts(text: str):
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected n or n1,n2,..., got {text!r}") from None


_HELP = {
    "pi": "pi_p by closed form and by quadrature",
    "sinp-table": "tabulate sin_p and cos_p over one period",
    "norm": "lambda and the embedding norm of a strip",
    "rayleigh": "Rayleigh quotient of the truncated extremal u_l",
    "verify-ul": "quadrature vs closed-form norms of u_l",
    "eigen": "first discrete eigenpair on a rectangle (--rect)",
    "certify": "random-trial check of the translate operators",
    "refute": "show a random finite net misses a unit-ball element",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=float, default=2.0, help="exponent p > 1")
    common.add_argument("--free", type=int, default=1, help="number of unbounded axes k")
    common.add_argument("--interval", type=_interval, action="append", default=[],
                        metavar="A:B", help="bounded axis; repeat for more axes")
    common.add_argument("--rect", type=_interval, action="append", default=[],
                        metavar="A:B", help="eigen: rectangle side; repeat per axis")
    common.add_argument("--grid", type=_counts, default=(63,), help="eigen: interior nodes per axis")
    common.add_argument("--l", type=float, default=None,
                        help="half-width of the trial support (default 16 x widest interval)")
    common.add_argument("--m", type=int, default=4, help="certify: number of translates")
    common.add_argument("--resolution", type=int, default=32, help="quadrature cells per half-period")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--points", type=int, default=65, help="sinp-table: samples")
    common.add_argument("--radius", type=float, default=0.6, help="refute: net radius r")
    common.add_argument("--rtilde", type=float, default=0.65, help="refute: r~ with r < r~")
    common.add_argument("--centers", type=int, default=4, help="refute: random net size")
    common.add_argument("--extent", type=float, default=100.0,
                        help="refute: centres live in |x_free| <= extent")
    common.add_argument("--output", "-o", default=None, help="JSON output path (default stdout)")
    common.add_argument("--csv", default=None, help="table output (sinp-table, eigen)")
    common.add_argument("--svg", default=None, help="single-curve plot (sinp-table, eigen)")

    parser = _Parser(prog="stripembed", description="Embedding constants, extremals and "
                     "noncompactness witnesses on strip-like domains. Results go out as JSON.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=_HELP[name])
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command, p=ns.p, free=ns.free, intervals=tuple(ns.interval),
        rect=tuple(ns.rect), grid=tuple(ns.grid), l=ns.l, m=ns.m,
        resolution=ns.resolution, tol=ns.tol, seed=ns.seed, trials=ns.trials,
        points=ns.points, radius=ns.radius, rtilde=ns.rtilde, centers=ns.centers,
        extent=ns.extent, output=ns.output, csv=ns.csv, svg=ns.svg,
    )


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
