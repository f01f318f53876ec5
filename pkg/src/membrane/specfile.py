"""Domain specification files: JSON in, validated MapSpecs out.

Errors name the offending field and its line in the source text. The accepted
layout is::

    {"domains": [
        {"name": "cardioid",
         "map": {"family": "Polynomial", "coeffs": [1, 2, 1]},
         "runs": {"alphas": [3, 4], "optimize": true, "oracle_resolution": 96}}
    ]}

A bare top-level array of domain objects is accepted too. Rectangle sides may be
numbers or strings such as ``"2pi"``.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

from .errors import SpecError
from .maps import BaseDomain, BaseKind, Family, MapSpec

_WS = " \t\r\n"
_PI_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*\*?\s*pi\s*$")

# extra family names accepted as shorthands for polynomial maps
ALIASES = {"Identity": (0, 1), "Cardioid": (1, 2, 1)}

DOMAIN_KEYS = {"name", "map", "runs"}
MAP_KEYS = {"family", "coeffs", "n", "alpha", "m", "a", "base"}
BASE_KEYS = {"kind", "a", "b"}
RUN_KEYS = {"alphas", "optimize", "alpha_max", "oracle_resolution", "plane_covering",
            "diameter_lower_bound"}


@dataclass(frozen=True)
class RunOptions:
    alphas: tuple = ()
    optimize: bool = False
    alpha_max: float | None = None
    oracle_resolution: int | None = None
    plane_covering: bool = False
    diameter_lower_bound: float | None = None


@dataclass(frozen=True)
class DomainEntry:
    name: str
    map: MapSpec
    runs: RunOptions = field(default_factory=RunOptions)
    line: int = 0


# -- JSON with positions -------------------------------------------------------------

def _skip(text, i):
    while i < len(text) and text[i] in _WS:
        i += 1
    return i


def _walk(text, i, path, lines, decoder):
    """Decode the value at text[i:], recording the line of every path into ``lines``."""
    i = _skip(text, i)
    lines[path] = text.count("\n", 0, i) + 1
    ch = text[i]
    if ch == "{":
        out = {}
        i = _skip(text, i + 1)
        if text[i] == "}":
            return out, i + 1
        while True:
            key, i = decoder.raw_decode(text, _skip(text, i))
            i = _skip(text, i) + 1            # the colon
            val, i = _walk(text, i, path + (key,), lines, decoder)
            if key in out:
                raise SpecError(f"{lines[path + (key,)]}: duplicate key {key!r}")
            out[key] = val
            i = _skip(text, i)
            if text[i] == "}":
                return out, i + 1
            i += 1                            # the comma
    if ch == "[":
        out = []
        i = _skip(text, i + 1)
        if text[i] == "]":
            return out, i + 1
        while True:
            val, i = _walk(text, i, path + (len(out),), lines, decoder)
            out.append(val)
            i = _skip(text, i)
            if text[i] == "]":
                return out, i + 1
            i += 1
    return decoder.raw_decode(text, i)


def load_json_with_lines(text, source="<spec>"):
    """(value, {path: line}) for a JSON document."""
    try:
        json.loads(text)                      # syntax errors with json's own positions
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    lines = {}
    try:
        value, _ = _walk(text, 0, (), lines, json.JSONDecoder())
    except SpecError as exc:
        raise SpecError(f"{source}:{exc}") from None
    return value, lines


# -- validation ----------------------------------------------------------------------------

class _Ctx:
    def __init__(self, lines, source):
        self.lines = lines
        self.source = source

    def fail(self, path, message):
        line = self.lines.get(path)
        while line is None and path:
            path = path[:-1]
            line = self.lines.get(path)
        where = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path).lstrip(".")
        raise SpecError(f"{self.source}:{line or 1}: {where or '<root>'}: {message}")


def parse_length(value):
    if isinstance(value, bool):
        raise ValueError("expected a number")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _PI_RE.match(value)
        if m:
            return float(m.group(1) or 1.0) * math.pi
    raise ValueError(f"expected a number or a multiple of pi such as '2pi', got {value!r}")


def _number(ctx, obj, key, path, *, integer=False, positive=True):
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        ctx.fail(path + (key,), f"expected a number, got {val!r}")
    if integer and int(val) != val:
        ctx.fail(path + (key,), f"expected an integer, got {val!r}")
    if not math.isfinite(val) or (positive and not val > 0):
        ctx.fail(path + (key,), f"expected a positive finite number, got {val!r}")
    return int(val) if integer else float(val)


def _check_keys(ctx, obj, allowed, path):
    if not isinstance(obj, dict):
        ctx.fail(path, f"expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in allowed:
            ctx.fail(path + (key,), f"unknown field {key!r} (allowed: {', '.join(sorted(allowed))})")


def _coeff(ctx, c, path):
    try:
        if isinstance(c, bool):
            raise ValueError
        if isinstance(c, (int, float)):
            return complex(c)
        if isinstance(c, list) and len(c) == 2 and all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in c):
            return complex(c[0], c[1])
        if isinstance(c, str):
            return complex(c.replace(" ", ""))
    except ValueError:
        pass
    ctx.fail(path, f"coefficient must be a number, [re, im] or a string like '1+2j', got {c!r}")


def _parse_base(ctx, obj, path):
    _check_keys(ctx, obj, BASE_KEYS, path)
    kind = obj.get("kind", "UnitDisc")
    try:
        kind = BaseKind(kind)
    except ValueError:
        ctx.fail(path + ("kind",), f"unknown base kind {kind!r} (UnitDisc or Rectangle)")
    if kind is BaseKind.UNIT_DISC:
        if "a" in obj or "b" in obj:
            ctx.fail(path, "UnitDisc takes no parameters")
        return BaseDomain.disc()
    sides = []
    for key in ("a", "b"):
        if key not in obj:
            ctx.fail(path, f"Rectangle requires field {key!r}")
        try:
            val = parse_length(obj[key])
        except ValueError as exc:
            ctx.fail(path + (key,), str(exc))
        if not (val > 0 and math.isfinite(val)):
            ctx.fail(path + (key,), f"rectangle side must be positive, got {obj[key]!r}")
        sides.append(val)
    return BaseDomain.rectangle(*sides)


def _require(ctx, obj, key, path, family):
    if key not in obj:
        ctx.fail(path, f"family {family} requires field {key!r}")


def parse_map(ctx, obj, path):
    _check_keys(ctx, obj, MAP_KEYS, path)
    if "family" not in obj:
        ctx.fail(path, "missing field 'family'")
    fam = obj["family"]
    fpath = path + ("family",)
    names = [f.value for f in Family] + list(ALIASES) + ["ScaledDisc"]
    if fam not in names:
        ctx.fail(fpath, f"unknown family {fam!r} (one of {', '.join(names)})")
    used = {"family"}
    base = None
    if "base" in obj:
        base = _parse_base(ctx, obj["base"], path + ("base",))
        used.add("base")
    try:
        if fam in ALIASES:
            spec = MapSpec.polynomial(ALIASES[fam])
        elif fam == "ScaledDisc":
            _require(ctx, obj, "a", path, fam)
            spec = MapSpec.scaled_disc(_number(ctx, obj, "a", path))
            used.add("a")
        elif fam == Family.POLYNOMIAL.value:
            _require(ctx, obj, "coeffs", path, fam)
            raw = obj["coeffs"]
            if not isinstance(raw, list):
                ctx.fail(path + ("coeffs",), "coeffs must be a list, ascending degree")
            coeffs = [_coeff(ctx, c, path + ("coeffs", k)) for k, c in enumerate(raw)]
            spec = MapSpec.polynomial(coeffs)
            used.add("coeffs")
        elif fam == Family.POWER_SHIFT.value:
            _require(ctx, obj, "n", path, fam)
            spec = MapSpec.power_shift(_number(ctx, obj, "n", path, integer=True))
            used.add("n")
        elif fam == Family.EXPONENTIAL.value:
            _require(ctx, obj, "alpha", path, fam)
            val = _number(ctx, obj, "alpha", path)
            if val > math.pi:
                ctx.fail(path + ("alpha",), f"alpha must lie in (0, pi] for an injective map, got {val}")
            spec = MapSpec.exponential(val)
            used.add("alpha")
        elif fam == Family.SCHWARZ_CHRISTOFFEL.value:
            _require(ctx, obj, "m", path, fam)
            m = _number(ctx, obj, "m", path, integer=True)
            if m < 3:
                ctx.fail(path + ("m",), f"m must be at least 3, got {m}")
            spec = MapSpec.schwarz_christoffel(m)
            used.add("m")
        else:
            base = base or BaseDomain.rectangle(1.0, 2 * math.pi)
            spec = MapSpec(Family.EXP_STRIP, base=base)
        if base is not None and base != spec.base:
            spec = MapSpec(spec.family, spec.coeffs, spec.n, spec.alpha_param, spec.m, base)
    except SpecError as exc:
        if str(exc).startswith(ctx.source):
            raise
        ctx.fail(path, str(exc))
    for key in obj:
        if key not in used:
            ctx.fail(path + (key,), f"field {key!r} does not apply to family {fam}")
    return spec


def parse_runs(ctx, obj, path):
    _check_keys(ctx, obj, RUN_KEYS, path)
    kw = {}
    if "alphas" in obj:
        raw = obj["alphas"]
        if not isinstance(raw, list):
            ctx.fail(path + ("alphas",), "alphas must be a list of numbers")
        vals = []
        for k, a in enumerate(raw):
            if isinstance(a, str) and a.strip().lower() in ("inf", "infinity"):
                vals.append(math.inf)
                continue
            if isinstance(a, bool) or not isinstance(a, (int, float)) or not a > 0:
                ctx.fail(path + ("alphas", k), f"alpha must be a positive number or 'inf', got {a!r}")
            vals.append(float(a))
        kw["alphas"] = tuple(vals)
    for key in ("optimize", "plane_covering"):
        if key in obj:
            if not isinstance(obj[key], bool):
                ctx.fail(path + (key,), f"{key} must be true or false")
            kw[key] = obj[key]
    if obj.get("alpha_max") is not None:
        kw["alpha_max"] = _number(ctx, obj, "alpha_max", path)
        if not kw["alpha_max"] > 2:
            ctx.fail(path + ("alpha_max",), "alpha_max must exceed 2")
    if obj.get("oracle_resolution") is not None:
        kw["oracle_resolution"] = _number(ctx, obj, "oracle_resolution", path, integer=True)
        if kw["oracle_resolution"] < 16:
            ctx.fail(path + ("oracle_resolution",), "oracle_resolution must be at least 16")
    if obj.get("diameter_lower_bound") is not None:
        kw["diameter_lower_bound"] = _number(ctx, obj, "diameter_lower_bound", path)
    return RunOptions(**kw)


def parse_spec_text(text, source="<spec>"):
    value, lines = load_json_with_lines(text, source)
    ctx = _Ctx(lines, source)
    if isinstance(value, dict):
        _check_keys(ctx, value, {"domains", "version"}, ())
        if "domains" not in value:
            ctx.fail((), "missing field 'domains'")
        items, root = value["domains"], ("domains",)
        if not isinstance(items, list):
            ctx.fail(root, "domains must be a list")
    elif isinstance(value, list):
        items, root = value, ()
    else:
        ctx.fail((), "expected an object with 'domains' or a list of domains")
    entries, seen = [], {}
    for k, item in enumerate(items):
        path = root + (k,)
        _check_keys(ctx, item, DOMAIN_KEYS, path)
        for key in ("name", "map"):
            if key not in item:
                ctx.fail(path, f"missing field {key!r}")
        name = item["name"]
        if not isinstance(name, str) or not name:
            ctx.fail(path + ("name",), "name must be a non-empty string")
        if name in seen:
            ctx.fail(path + ("name",), f"duplicate domain name {name!r} (first at line {seen[name]})")
        seen[name] = lines[path + ("name",)]
        spec = parse_map(ctx, item["map"], path + ("map",))
        runs = parse_runs(ctx, item.get("runs", {}), path + ("runs",))
        if not spec.bounded_derivative and not runs.alphas and not runs.optimize:
            ctx.fail(path + ("runs",) if "runs" in item else path,
                     "psi' is unbounded for this family: give runs.alphas or set runs.optimize")
        if runs.optimize and not spec.base.is_disc:
            ctx.fail(path + ("runs", "optimize"), "alpha optimisation applies to disc-based maps only")
        entries.append(DomainEntry(name, spec, runs, lines[path]))
    return entries


def load_spec(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_spec_text(text, str(path))
