"""Line-oriented job configuration.

A job file is a list of ``key = value`` lines.  ``[piece i]`` opens the
section for piece ``i`` (1-based); ``#`` starts a comment.  Lists are
whitespace- or comma-separated.  Example::

    mode = solve
    partition = binary
    N = 2
    [piece 1]
    lambda = 0 0.5        # coefficients in x, low to high
    S = 0.5
    [piece 2]
    lambda = 0.5 0.5
    S = bspline(4, 0.5)

:func:`parse_config` fills every default, and :func:`format_config`
prints a config back in a form that parses to an equal object.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .geometry import AffineMap2D, Interval, Rect
from .piecewise import PiecewisePoly, bspline, sup_norm_bracket
from .rb import (
    InterpolationData,
    RBSystem,
    build_affine_fif,
    build_property_S_system,
    default_grid_size,
    grid_size_for,
    make_binary_partition,
    make_partition,
)

__all__ = [
    "MODES",
    "ConfigError",
    "BSplineSpec",
    "PieceConfig",
    "JobConfig",
    "parse_config",
    "format_config",
    "load_config",
    "build_system",
    "build_local_ifs",
]

MODES = ("solve", "attract", "global-attract", "check", "interp", "tensor", "graph-ifs")
CONTRACTIVE_MODES = ("solve", "interp", "tensor", "graph-ifs")
SET_MODES = ("attract", "global-attract")
TOP_KEYS = (
    "mode", "partition", "N", "knots", "lambda", "S", "y", "s", "midpoints", "checks",
    "bounds", "resolution", "grid", "tol", "max_iter", "seed", "second",
)
PIECE_KEYS = ("subset", "lambda", "S", "domain", "map")
CHECK_TAGS = ("Lp", "holder", "Cn", "sobolev")


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class BSplineSpec:
    order: int
    amplitude: float

    def __str__(self):
        return f"bspline({self.order}, {self.amplitude!r})"


@dataclass
class PieceConfig:
    subset: tuple | None = None
    lam: object = None  # tuple of coefficients or "random"
    S: object = None  # tuple of coefficients, BSplineSpec or "random"
    domain: tuple | None = None
    map: tuple | None = None


@dataclass
class JobConfig:
    mode: str
    partition: str = "binary"
    N: int | None = None
    knots: tuple | None = None
    lam: object = None
    S: object = None
    y: tuple | None = None
    s: tuple | None = None
    midpoints: tuple | None = None
    checks: tuple = ()
    bounds: tuple = (0.0, 1.0, 0.0, 1.0)
    resolution: float = 2.0 ** -9
    grid: int | None = None
    tol: float | None = None
    max_iter: int | None = None
    seed: int = 0
    second: str | None = None
    pieces: tuple = ()
    lines: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def uses_builder(self) -> bool:
        return self.y is not None


# ----------------------------------------------------------------------
# value parsers

_SPLIT = re.compile(r"[\s,]+")
_BSPLINE = re.compile(r"^bspline\(\s*([^,]+)\s*,\s*([^)]+)\s*\)$")


def _floats(text, line, key, arity=None):
    parts = [p for p in _SPLIT.split(text.strip()) if p]
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"{key}: expected numbers, got {text!r}", line) from None
    if not vals:
        raise ConfigError(f"{key}: empty list", line)
    if not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{key}: values must be finite", line)
    if arity is not None and len(vals) != arity:
        raise ConfigError(f"{key}: expected {arity} values, got {len(vals)}", line)
    return vals


def _float(text, line, key, positive=False):
    v = _floats(text, line, key, 1)[0]
    if positive and not v > 0:
        raise ConfigError(f"{key}: must be positive", line)
    return v


def _int(text, line, key, minimum=None):
    try:
        v = int(text.strip())
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}", line) from None
    if minimum is not None and v < minimum:
        raise ConfigError(f"{key}: must be >= {minimum}", line)
    return v


def _lambda_spec(text, line):
    if text.strip() == "random":
        return "random"
    return _floats(text, line, "lambda")


def _scale_spec(text, line):
    t = text.strip()
    if t == "random":
        return "random"
    m = _BSPLINE.match(t)
    if m:
        order = _int(m.group(1), line, "bspline order", 3)
        return BSplineSpec(order, _float(m.group(2), line, "bspline amplitude"))
    return _floats(text, line, "S")


def _check_spec(item, line):
    parts = item.split(":")
    tag = parts[0]
    if tag in ("Linf", "sup"):
        return ("Lp", (math.inf,))
    if tag not in CHECK_TAGS:
        raise ConfigError(f"checks: unknown criterion {tag!r}", line)
    arity = {"Lp": 1, "holder": 1, "Cn": 1, "sobolev": 2}[tag]
    if len(parts) - 1 != arity:
        raise ConfigError(f"checks: {tag} takes {arity} parameter(s)", line)
    try:
        if tag == "Cn":
            params = (int(parts[1]),)
        elif tag == "sobolev":
            params = (int(parts[1]), float(parts[2]))
        else:
            params = (float(parts[1]),)
    except ValueError:
        raise ConfigError(f"checks: bad parameter in {item!r}", line) from None
    return (tag, params)


def _checks(text, line):
    return tuple(_check_spec(item, line) for item in text.split() if item)


# ----------------------------------------------------------------------
# parse


def parse_config(text: str, mode: str | None = None) -> JobConfig:
    """Parse and validate a job description.

    ``mode`` (from the command line) must agree with a ``mode`` key if the
    file has one.  Errors carry the offending line number.
    """
    top: dict = {}
    lines: dict = {}
    pieces: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        m = re.fullmatch(r"\[\s*piece\s+(\d+)\s*\]", body)
        if m:
            current = int(m.group(1))
            if current < 1:
                raise ConfigError("piece numbers start at 1", lineno)
            if current in pieces:
                raise ConfigError(f"duplicate section [piece {current}]", lineno)
            pieces[current] = {}
            lines[("piece", current)] = lineno
            continue
        if body.startswith("["):
            raise ConfigError(f"unknown section {body!r}", lineno)
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", lineno)
        key, value = (p.strip() for p in body.split("=", 1))
        if current is None:
            if key not in TOP_KEYS:
                raise ConfigError(f"unknown key {key!r}", lineno)
            if key in top:
                raise ConfigError(f"duplicate key {key!r}", lineno)
            top[key] = value
            lines[key] = lineno
        else:
            if key not in PIECE_KEYS:
                raise ConfigError(f"unknown key {key!r} in [piece {current}]", lineno)
            if key in pieces[current]:
                raise ConfigError(f"duplicate key {key!r} in [piece {current}]", lineno)
            pieces[current][key] = value
            lines[(current, key)] = lineno

    file_mode = top.get("mode")
    if file_mode is not None and mode is not None and file_mode != mode:
        raise ConfigError(f"mode {file_mode!r} in file contradicts requested mode {mode!r}", lines["mode"])
    mode = mode or file_mode
    if mode is None:
        raise ConfigError("no mode given")
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}", lines.get("mode"))

    L = lines.get
    cfg = JobConfig(mode=mode, lines=lines)
    if "partition" in top:
        if top["partition"] not in ("binary", "general"):
            raise ConfigError("partition must be 'binary' or 'general'", L("partition"))
        cfg.partition = top["partition"]
    if "N" in top:
        cfg.N = _int(top["N"], L("N"), "N", 1)
    if "knots" in top:
        cfg.knots = _floats(top["knots"], L("knots"), "knots")
    if "lambda" in top:
        cfg.lam = _lambda_spec(top["lambda"], L("lambda"))
    if "S" in top:
        cfg.S = _scale_spec(top["S"], L("S"))
    for key in ("y", "s", "midpoints"):
        if key in top:
            setattr(cfg, key, _floats(top[key], L(key), key))
    if "checks" in top:
        cfg.checks = _checks(top["checks"], L("checks"))
    if "bounds" in top:
        cfg.bounds = _floats(top["bounds"], L("bounds"), "bounds", 4)
    if "resolution" in top:
        cfg.resolution = _float(top["resolution"], L("resolution"), "resolution", positive=True)
    if "grid" in top:
        cfg.grid = _int(top["grid"], L("grid"), "grid", 1)
    if "tol" in top:
        tol = _float(top["tol"], L("tol"), "tol")
        if tol < 0:
            raise ConfigError("tol: must be nonnegative", L("tol"))
        cfg.tol = tol
    if "max_iter" in top:
        cfg.max_iter = _int(top["max_iter"], L("max_iter"), "max_iter", 1)
    if "seed" in top:
        cfg.seed = _int(top["seed"], L("seed"), "seed", 0)
    if "second" in top:
        cfg.second = top["second"]

    parsed = []
    for idx in sorted(pieces):
        raw = pieces[idx]
        pc = PieceConfig()
        if "subset" in raw:
            pc.subset = _floats(raw["subset"], L((idx, "subset")), "subset", 2)
        if "lambda" in raw:
            pc.lam = _lambda_spec(raw["lambda"], L((idx, "lambda")))
        if "S" in raw:
            pc.S = _scale_spec(raw["S"], L((idx, "S")))
        if "domain" in raw:
            pc.domain = _floats(raw["domain"], L((idx, "domain")), "domain", 4)
        if "map" in raw:
            pc.map = _floats(raw["map"], L((idx, "map")), "map", 6)
        parsed.append((idx, pc))
    if parsed and [i for i, _ in parsed] != list(range(1, len(parsed) + 1)):
        raise ConfigError("piece sections must be numbered 1..N without gaps", L(("piece", parsed[-1][0])))
    cfg.pieces = tuple(pc for _, pc in parsed)
    return _validate(cfg)


def _validate(cfg: JobConfig) -> JobConfig:
    L = cfg.lines.get
    if cfg.mode in SET_MODES:
        if not cfg.pieces:
            raise ConfigError(f"mode {cfg.mode} needs [piece i] sections with domain and map")
        for i, pc in enumerate(cfg.pieces, start=1):
            for key in ("domain", "map"):
                if getattr(pc, key) is None:
                    raise ConfigError(f"piece {i}: missing {key}", L(("piece", i)))
        if cfg.N is not None and cfg.N != len(cfg.pieces):
            raise ConfigError(f"N = {cfg.N} but {len(cfg.pieces)} pieces given", L("N"))
        cfg.N = len(cfg.pieces)
        if cfg.tol is None:
            cfg.tol = cfg.resolution
        if cfg.max_iter is None:
            cfg.max_iter = 256
        try:
            build_local_ifs(cfg)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return cfg

    if cfg.mode == "interp" and cfg.y is None:
        raise ConfigError("mode interp needs interpolation values y")
    cfg.N = _infer_N(cfg)
    N = cfg.N
    if cfg.pieces and len(cfg.pieces) != N:
        raise ConfigError(f"N = {N} but {len(cfg.pieces)} piece sections given", L(("piece", len(cfg.pieces))))
    if cfg.partition == "binary" and N % 2:
        raise ConfigError(f"binary partition needs an even N, got {N}", L("N"))
    if cfg.s is not None and len(cfg.s) != N:
        raise ConfigError(f"s: expected {N} values, got {len(cfg.s)}", L("s"))
    if cfg.midpoints is not None and len(cfg.midpoints) != N // 2:
        raise ConfigError(f"midpoints: expected {N // 2} values, got {len(cfg.midpoints)}", L("midpoints"))
    if cfg.y is not None:
        want = N // 2 + 1 if cfg.partition == "binary" else N + 1
        if len(cfg.y) != want:
            raise ConfigError(f"y: expected {want} values for N = {N}, got {len(cfg.y)}", L("y"))
        if cfg.partition == "binary" and cfg.s is None:
            raise ConfigError("binary interpolation needs scaling values s", L("y"))
    if cfg.partition == "general":
        if cfg.knots is None:
            raise ConfigError("general partition needs knots")
        for i, pc in enumerate(cfg.pieces or (), start=1):
            if pc.subset is None:
                raise ConfigError(f"piece {i}: missing subset", L(("piece", i)))
        if len(cfg.pieces) != N:
            raise ConfigError("general partition needs one [piece i] section per piece with a subset")
    elif cfg.knots is not None:
        raise ConfigError("knots are fixed by the binary partition", L("knots"))
    if not (cfg.partition == "binary" and cfg.y is not None):
        for i in range(1, N + 1):
            pc = cfg.pieces[i - 1] if cfg.pieces else PieceConfig()
            if (pc.S if pc.S is not None else cfg.S) is None:
                raise ConfigError(f"piece {i}: no S given", L(("piece", i)))
            if cfg.y is None and (pc.lam if pc.lam is not None else cfg.lam) is None:
                raise ConfigError(f"piece {i}: no lambda given", L(("piece", i)))
    if cfg.mode in CONTRACTIVE_MODES:
        _check_contractive(cfg)
    if cfg.mode == "tensor" and cfg.second is None:
        cfg.second = ""
    if cfg.grid is None:
        cfg.grid = _default_grid(cfg)
    if cfg.tol is None:
        cfg.tol = 1e-10
    if cfg.max_iter is None:
        cfg.max_iter = 200
    return cfg


def _default_grid(cfg: JobConfig) -> int:
    if cfg.partition == "binary":
        return default_grid_size(cfg.N)
    subsets = [Interval(*pc.subset) for pc in cfg.pieces]
    try:
        return grid_size_for(make_partition(cfg.knots, subsets))
    except ValueError as exc:
        raise ConfigError(str(exc), cfg.lines.get("knots")) from None


def _infer_N(cfg: JobConfig) -> int:
    candidates = []
    if cfg.N is not None:
        candidates.append(("N", cfg.N))
    if cfg.partition == "general" and cfg.knots is not None:
        candidates.append(("knots", len(cfg.knots) - 1))
    if cfg.partition == "binary" and cfg.y is not None:
        candidates.append(("y", 2 * (len(cfg.y) - 1)))
    if cfg.pieces:
        candidates.append(("piece", len(cfg.pieces)))
    if cfg.s is not None:
        candidates.append(("s", len(cfg.s)))
    if not candidates:
        raise ConfigError("cannot determine the number of pieces N")
    key, N = candidates[0]
    for other, M in candidates[1:]:
        if M != N:
            line = cfg.lines.get(other) or cfg.lines.get(("piece", len(cfg.pieces)))
            raise ConfigError(f"{other} implies N = {M}, but {key} implies N = {N}", line)
    if N < 1:
        raise ConfigError("N must be positive", cfg.lines.get(key))
    return N


def _check_contractive(cfg: JobConfig):
    L = cfg.lines.get
    if cfg.s is not None:
        for i, v in enumerate(cfg.s, start=1):
            if abs(v) >= 1:
                raise ConfigError(f"piece {i}: |s| = {abs(v)!r} >= 1 but mode {cfg.mode} needs a contraction", L("s"))
    for i in range(1, cfg.N + 1):
        pc = cfg.pieces[i - 1] if cfg.pieces else PieceConfig()
        spec, line = (pc.S, L((i, "S"))) if pc.S is not None else (cfg.S, L("S"))
        if spec is None or spec == "random":
            continue
        if isinstance(spec, BSplineSpec):
            size = abs(spec.amplitude)
        elif len(spec) == 1:
            size = abs(spec[0])
        else:
            lo, hi = _piece_interval(cfg, i - 1)
            size = sup_norm_bracket(PiecewisePoly.from_global(spec, Interval(lo, hi)))[0]
        if size >= 1:
            raise ConfigError(f"piece {i}: sup |S| = {size!r} >= 1 but mode {cfg.mode} needs a contraction", line)


def _piece_interval(cfg: JobConfig, i: int):
    if cfg.partition == "general":
        return cfg.pieces[i].subset
    j = i // 2 + 1
    return 2 * (j - 1) / cfg.N, 2 * j / cfg.N


# ----------------------------------------------------------------------
# format


def _fmt_list(vals):
    return " ".join(repr(float(v)) for v in vals)


def _fmt_lambda(spec):
    return spec if spec == "random" else _fmt_list(spec)


def _fmt_scale(spec):
    if spec == "random" or isinstance(spec, BSplineSpec):
        return str(spec)
    return _fmt_list(spec)


def _fmt_check(tag, params):
    return ":".join([tag] + ["inf" if isinstance(p, float) and math.isinf(p) else repr(p) for p in params])


def format_config(cfg: JobConfig) -> str:
    """Canonical text form with every default written out."""
    out = [f"mode = {cfg.mode}", f"partition = {cfg.partition}"]
    if cfg.N is not None:
        out.append(f"N = {cfg.N}")
    if cfg.knots is not None:
        out.append(f"knots = {_fmt_list(cfg.knots)}")
    if cfg.lam is not None:
        out.append(f"lambda = {_fmt_lambda(cfg.lam)}")
    if cfg.S is not None:
        out.append(f"S = {_fmt_scale(cfg.S)}")
    for key in ("y", "s", "midpoints"):
        v = getattr(cfg, key)
        if v is not None:
            out.append(f"{key} = {_fmt_list(v)}")
    if cfg.checks:
        out.append("checks = " + " ".join(_fmt_check(t, p) for t, p in cfg.checks))
    out.append(f"bounds = {_fmt_list(cfg.bounds)}")
    out.append(f"resolution = {cfg.resolution!r}")
    if cfg.grid is not None:
        out.append(f"grid = {cfg.grid}")
    if cfg.tol is not None:
        out.append(f"tol = {cfg.tol!r}")
    if cfg.max_iter is not None:
        out.append(f"max_iter = {cfg.max_iter}")
    out.append(f"seed = {cfg.seed}")
    if cfg.second:
        out.append(f"second = {cfg.second}")
    for i, pc in enumerate(cfg.pieces, start=1):
        out.append(f"[piece {i}]")
        if pc.subset is not None:
            out.append(f"subset = {_fmt_list(pc.subset)}")
        if pc.lam is not None:
            out.append(f"lambda = {_fmt_lambda(pc.lam)}")
        if pc.S is not None:
            out.append(f"S = {_fmt_scale(pc.S)}")
        if pc.domain is not None:
            out.append(f"domain = {_fmt_list(pc.domain)}")
        if pc.map is not None:
            out.append(f"map = {_fmt_list(pc.map)}")
    return "\n".join(out) + "\n"


def load_config(path, mode: str | None = None) -> JobConfig:
    with open(path) as fh:
        return parse_config(fh.read(), mode)


# ----------------------------------------------------------------------
# construction


def _make_lambda(spec, X: Interval, rng):
    if spec == "random":
        lo, hi = rng.uniform(-1.0, 1.0, 2)
        return PiecewisePoly.linear(X.lo, lo, X.hi, hi)
    return PiecewisePoly.from_global(spec, X)


def _make_scale(spec, X: Interval, rng):
    if spec == "random":
        return PiecewisePoly.constant(rng.uniform(-0.5, 0.5), X)
    if isinstance(spec, BSplineSpec):
        return bspline(spec.order, X, spec.amplitude)
    return PiecewisePoly.from_global(spec, X)


def build_system(cfg: JobConfig) -> RBSystem:
    """Assemble the RB system a (non set-valued) job describes.

    ``random`` entries are drawn from ``numpy.random.default_rng(seed)``
    in piece order, lambda before S.
    """
    rng = np.random.default_rng(cfg.seed)
    N = cfg.N
    if cfg.partition == "binary" and cfg.y is not None:
        sites = np.arange(N // 2 + 1) * 2.0 / N
        return build_affine_fif(InterpolationData(sites, cfg.y), cfg.s, cfg.midpoints)
    pieces = cfg.pieces or tuple(PieceConfig() for _ in range(N))
    part = (
        make_binary_partition(N)
        if cfg.partition == "binary"
        else make_partition(cfg.knots, [Interval(*pc.subset) for pc in pieces])
    )
    lam, scale = [], []
    for X, pc in zip(part.subsets, pieces):
        lspec = pc.lam if pc.lam is not None else cfg.lam
        lam.append(None if lspec is None else _make_lambda(lspec, X, rng))
        scale.append(_make_scale(pc.S if pc.S is not None else cfg.S, X, rng))
    if cfg.y is not None:
        data = InterpolationData(part.knots, cfg.y)
        return build_property_S_system(part.knots, part.subsets, data, scale, None if None in lam else lam)
    return RBSystem(part, lam, scale)


def build_local_ifs(cfg: JobConfig):
    from .local_ifs import LocalIFS

    pieces = []
    for pc in cfg.pieces:
        x0, x1, y0, y1 = pc.domain
        a, b, c, d, e, f = pc.map
        pieces.append((Rect(x0, x1, y0, y1), AffineMap2D([[a, b], [c, d]], (e, f))))
    return LocalIFS(Rect(*cfg.bounds), pieces)


def with_overrides(cfg: JobConfig, **changes) -> JobConfig:
    """Copy with command-line overrides applied (``None`` values ignored)."""
    changes = {k: v for k, v in changes.items() if v is not None}
    known = {f.name for f in fields(JobConfig)}
    unknown = set(changes) - known
    if unknown:
        raise ValueError(f"unknown override(s): {sorted(unknown)}")
    return replace(cfg, **changes)
