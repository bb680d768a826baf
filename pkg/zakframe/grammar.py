# zakframe/grammar.py
"""
Textual window specs.

    window  = family [ ":" params ] ;
    params  = param { "," param } ;
    param   = [ key "=" ] value ;

    indicator
    gaussian[:a]                       default a = 1
    hermite:n   bspline:n
    tp:g=γ,v=ν,f=ν1,ν2,…[,c=c]         bare values after f= extend the factor list
    sampled:file=path[,step=h][,start=t0][,A=..,order=..][,fA=..,forder=..]

A/order declare the time envelope A/(1+|t|^order); fA/forder the frequency one.
A sample file holds one value per line, or two columns t,value (step and
start are then read off the t column).
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .errors import GrammarError, SpecValidationError
from .state import read_columns
from .types import KEY_TO_LABEL
from .windows import DecayEnvelope, WindowSpec


_TP_KEYS = {"g": "gamma", "gamma": "gamma", "v": "nu", "nu": "nu", "f": "factors", "factors": "factors", "c": "c"}
_SAMPLED_KEYS = ("file", "step", "start", "A", "order", "fA", "forder")

# relative spread tolerated between consecutive t values of a two-column file
_STEP_RTOL = 1e-6


def parse_window(text: str) -> WindowSpec:
    """WindowSpec from its textual form; any malformed input raises GrammarError."""
    if not isinstance(text, str) or not text.strip():
        raise GrammarError("empty window spec")
    family, _, rest = text.strip().partition(":")
    family = family.strip().lower()
    if family not in KEY_TO_LABEL:
        raise GrammarError(f"unknown window family {family!r}; expected one of {sorted(KEY_TO_LABEL)}")
    params = _split_params(rest) if rest.strip() else []
    try:
        return _BUILDERS[family](params)
    except GrammarError:
        raise
    except SpecValidationError as e:
        raise GrammarError(f"{text!r}: {e}") from e


# ------------------------------------------------------------------------------
# Families
# ------------------------------------------------------------------------------
def _build_indicator(params: List[Tuple[Optional[str], str]]) -> WindowSpec:
    if params:
        raise GrammarError("indicator takes no parameters")
    return WindowSpec.indicator()


def _build_gaussian(params: List[Tuple[Optional[str], str]]) -> WindowSpec:
    if not params:
        return WindowSpec.gaussian()
    (key, val), = _exactly_one(params, "gaussian")
    if key not in (None, "a"):
        raise GrammarError(f"gaussian takes a scale 'a', got key {key!r}")
    return WindowSpec.gaussian(_number(val, "a"))


def _build_order(family: str):
    def build(params: List[Tuple[Optional[str], str]]) -> WindowSpec:
        if not params:
            raise GrammarError(f"{family} needs an order, e.g. {family}:2")
        (key, val), = _exactly_one(params, family)
        if key not in (None, "n"):
            raise GrammarError(f"{family} takes an order 'n', got key {key!r}")
        n = _integer(val, "n")
        return WindowSpec.hermite(n) if family == "hermite" else WindowSpec.bspline(n)
    return build


def _build_tp(params: List[Tuple[Optional[str], str]]) -> WindowSpec:
    vals: Dict[str, object] = {"gamma": 0.0, "nu": 0.0, "c": 1.0}
    factors: List[float] = []
    current: Optional[str] = None
    seen = set()
    for key, raw in params:
        if key is None:
            if current != "factors":
                raise GrammarError(f"bare value {raw!r} outside the f= factor list")
            factors.append(_number(raw, "f"))
            continue
        name = _TP_KEYS.get(key)
        if name is None:
            raise GrammarError(f"unknown tp key {key!r}; expected g, v, f, c")
        if name in seen:
            raise GrammarError(f"tp key {key!r} given twice")
        seen.add(name)
        current = name
        if name == "factors":
            factors.append(_number(raw, "f"))
        else:
            vals[name] = _number(raw, key)
    if not factors:
        raise GrammarError("tp needs at least one factor (f=...)")
    return WindowSpec.totally_positive(factors, gamma=vals["gamma"], nu=vals["nu"], c=vals["c"])


def _build_sampled(params: List[Tuple[Optional[str], str]]) -> WindowSpec:
    opts: Dict[str, str] = {}
    for key, raw in params:
        if key is None or key not in _SAMPLED_KEYS:
            raise GrammarError(f"sampled takes keyed parameters {_SAMPLED_KEYS}, got {key or raw!r}")
        if key in opts:
            raise GrammarError(f"sampled key {key!r} given twice")
        opts[key] = raw
    if "file" not in opts:
        raise GrammarError("sampled needs file=path")

    values, t_col = _read_samples(Path(opts["file"]))
    step = _number(opts["step"], "step") if "step" in opts else None
    start = _number(opts["start"], "start") if "start" in opts else None
    if t_col is not None:
        step_t, start_t = _uniform_step(t_col)
        if step is not None and not math.isclose(step, step_t, rel_tol=1e-9):
            raise GrammarError(f"step={step:g} disagrees with the file's t column (step {step_t:g})")
        if start is not None and not math.isclose(start, start_t, rel_tol=1e-9, abs_tol=1e-12):
            raise GrammarError(f"start={start:g} disagrees with the file's t column (start {start_t:g})")
        step, start = step_t, start_t
    if step is None:
        raise GrammarError("sampled with a one-column file needs step=h")

    envelopes = []
    for amp, order, side in (("A", "order", "time"), ("fA", "forder", "frequency")):
        if (amp in opts) != (order in opts):
            raise GrammarError(f"declare both {amp}= and {order}= or neither")
        if amp in opts:
            envelopes.append(DecayEnvelope.declared(_number(opts[amp], amp), _number(opts[order], order), side))
    return WindowSpec.sampled(values, step, start=start or 0.0, envelopes=envelopes)


_BUILDERS = {
    "indicator": _build_indicator,
    "gaussian": _build_gaussian,
    "hermite": _build_order("hermite"),
    "bspline": _build_order("bspline"),
    "tp": _build_tp,
    "sampled": _build_sampled,
}


# ------------------------------------------------------------------------------
# Internals
# ------------------------------------------------------------------------------
def _split_params(rest: str) -> List[Tuple[Optional[str], str]]:
    out: List[Tuple[Optional[str], str]] = []
    for piece in rest.split(","):
        piece = piece.strip()
        if not piece:
            raise GrammarError(f"empty parameter in {rest!r}")
        key, eq, val = piece.partition("=")
        if eq:
            key, val = key.strip(), val.strip()
            if not key or not val:
                raise GrammarError(f"malformed parameter {piece!r}")
            out.append((key, val))
        else:
            out.append((None, piece))
    return out


def _exactly_one(params, family: str):
    if len(params) != 1:
        raise GrammarError(f"{family} takes exactly one parameter, got {len(params)}")
    return params


def _number(raw: str, name: str) -> float:
    try:
        val = float(raw)
    except ValueError as e:
        raise GrammarError(f"{name}={raw!r} is not a number") from e
    if not math.isfinite(val):
        raise GrammarError(f"{name}={raw!r} must be finite")
    return val


def _integer(raw: str, name: str) -> int:
    val = _number(raw, name)
    if val != int(val):
        raise GrammarError(f"{name}={raw!r} must be an integer")
    return int(val)


def _sample_value(raw: str) -> complex | float:
    try:
        return float(raw)
    except ValueError:
        pass
    try:
        return complex(raw.replace("i", "j"))
    except ValueError as e:
        raise GrammarError(f"sample value {raw!r} is not a number") from e


def _read_samples(path: Path) -> Tuple[List[complex | float], Optional[List[float]]]:
    try:
        rows = read_columns(path)
    except OSError as e:
        raise GrammarError(f"cannot read sample file {path}: {e}") from e
    if not rows:
        raise GrammarError(f"sample file {path} holds no values")
    widths = {len(r) for r in rows}
    if widths == {1}:
        return [_sample_value(r[0]) for r in rows], None
    if widths == {2}:
        return [_sample_value(r[1]) for r in rows], [_number(r[0], "t") for r in rows]
    raise GrammarError(f"sample file {path} must have one or two columns per line")


def _uniform_step(t: List[float]) -> Tuple[float, float]:
    if len(t) < 2:
        raise GrammarError("a two-column sample file needs at least two rows")
    steps = [b - a for a, b in zip(t, t[1:])]
    step = (t[-1] - t[0]) / (len(t) - 1)
    if step <= 0 or any(abs(s - step) > _STEP_RTOL * step for s in steps):
        raise GrammarError("t column must be increasing with a uniform step")
    return step, t[0]
