"""Flat ``key = value`` job configuration.

Example::

    # Gr(2,6)
    name = gr26
    group = gl2
    gl2_summands = [6*(1,0)]
    ell = anticanonical
    theta = auto

Values are exact: integers, ``p/q`` rationals and pairs ``(p,q)``.  Lists
are bracketed and accept ``k*item`` for repetition.  Blank lines and text
after ``#`` are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from barrelwin.errors import ConfigError, HypothesisError
from barrelwin.group import RepSpec, anticanonical, group_from_name
from barrelwin.lattice import Vec2
from barrelwin.stability import PerturbedPolarization, Polarization

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_PAIR = re.compile(r"^\(\s*([^,()]+)\s*,\s*([^,()]+)\s*\)$")
_EPS = re.compile(r"^anticanonical\s*\+\s*eps\s*(\(.*\))$")

KNOWN_KEYS = {
    "name", "group", "weights", "gl2_summands", "lambda0", "lambda_prime", "ell", "theta",
    "degree_budget", "seed_box", "t_grid", "scan_box",
    "quiver_ranks", "quiver_framings", "quiver_arrows", "quiver_det_powers",
    "quiver_collections", "quiver_trusted",
}


def parse_rational(text: str) -> Fraction:
    t = text.strip()
    if not _RATIONAL.match(t):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(t)


def parse_vec(text: str) -> Vec2:
    m = _PAIR.match(text.strip())
    if not m:
        raise ValueError(f"not a pair (p,q): {text!r}")
    return Vec2(parse_rational(m.group(1)), parse_rational(m.group(2)))


def split_list(text: str) -> list[str]:
    """Top-level comma-separated items of a bracketed list."""
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise ValueError(f"expected a bracketed list: {text!r}")
    body, items, depth, cur = t[1:-1], [], 0, ""
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced brackets")
        if ch == "," and depth == 0:
            items.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if depth:
        raise ValueError("unbalanced brackets")
    if cur.strip():
        items.append(cur.strip())
    out = []
    for item in items:
        m = re.match(r"^(\d+)\s*\*\s*(.+)$", item)
        if m:
            out.extend([m.group(2).strip()] * int(m.group(1)))
        else:
            out.append(item)
    return out


@dataclass
class QuiverConfig:
    ranks: list[int]
    framings: list[int]
    arrows: list[tuple[int, int]]
    det_powers: list[Fraction]
    collections: list[str]
    trusted: dict[int, list[Vec2]] = field(default_factory=dict)


@dataclass
class JobConfig:
    name: str
    group: str
    weights: list[Vec2] | None = None
    gl2_summands: list[tuple[int, int]] | None = None
    lambda0: Vec2 | None = None
    lambda_prime: Vec2 | None = None
    ell: str = "anticanonical"
    ell_value: Vec2 | None = None
    ell_direction: Vec2 | None = None
    theta: Vec2 | None = None
    degree_budget: int = 16
    seed_box: int = 3
    t_grid: list[Fraction] = field(default_factory=list)
    scan_box: int | None = None
    quiver: QuiverConfig | None = None
    source: str = ""

    def rep(self) -> RepSpec:
        if self.weights is None and self.gl2_summands is None:
            raise ConfigError("this command needs 'weights' or 'gl2_summands'")
        g = group_from_name(self.group)
        if self.gl2_summands is not None:
            if g.is_torus:
                raise ConfigError("gl2_summands requires group = gl2", field="gl2_summands")
            return RepSpec.gl2(self.gl2_summands)
        return RepSpec(g, tuple(self.weights))

    def polarization(self, rep: RepSpec) -> Polarization:
        if self.ell == "explicit":
            return self.ell_value
        base = anticanonical(rep)
        if self.ell == "perturbed":
            return PerturbedPolarization(base, self.ell_direction)
        return base

    @property
    def is_perturbed(self) -> bool:
        return self.ell == "perturbed"


def _int(value: str, key: str, line: int) -> int:
    try:
        f = parse_rational(value)
    except ValueError as e:
        raise ConfigError(str(e), line, key) from None
    if f.denominator != 1:
        raise ConfigError("expected an integer", line, key)
    return int(f)


def parse_config(text: str, source: str = "<string>") -> JobConfig:
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError("expected 'key = value'", lineno)
        key, value = (s.strip() for s in body.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError("unknown key", lineno, key)
        if key in raw:
            raise ConfigError("duplicate key", lineno, key)
        raw[key] = (value, lineno)

    def get(key, default=None):
        return raw[key] if key in raw else (default, None)

    def guarded(key, fn):
        value, line = raw[key]
        try:
            return fn(value)
        except ConfigError:
            raise
        except (ValueError, HypothesisError) as e:
            raise ConfigError(str(e), line, key) from None

    if "group" not in raw:
        raise ConfigError("missing required key", field="group")
    group = raw["group"][0].lower()
    guarded("group", group_from_name)
    cfg = JobConfig(name=get("name", Path(source).stem)[0], group=group, source=source)

    has_w, has_s = "weights" in raw, "gl2_summands" in raw
    if has_w and has_s or not (has_w or has_s or "quiver_ranks" in raw):
        raise ConfigError("exactly one of 'weights' and 'gl2_summands' is required")
    if has_w:
        cfg.weights = guarded("weights", lambda v: [parse_vec(x) for x in split_list(v)])
        for w in cfg.weights:
            if not w.is_integral:
                raise ConfigError("weights must be integral", raw["weights"][1], "weights")
    elif has_s:
        def summands(v):
            out = []
            for x in split_list(v):
                p = parse_vec(x)
                if not p.is_integral:
                    raise ValueError("summand (n,m) must be integral")
                out.append((int(p.a), int(p.b)))
            return out

        cfg.gl2_summands = guarded("gl2_summands", summands)

    for key in ("lambda0", "lambda_prime"):
        if key in raw:
            setattr(cfg, key, guarded(key, parse_vec))

    if "ell" in raw:
        value, line = raw["ell"]
        m = _EPS.match(value)
        if value == "anticanonical":
            cfg.ell = "anticanonical"
        elif m:
            cfg.ell = "perturbed"
            cfg.ell_direction = guarded("ell", lambda _: parse_vec(m.group(1)))
        else:
            cfg.ell = "explicit"
            cfg.ell_value = guarded("ell", parse_vec)

    if "theta" in raw and raw["theta"][0] != "auto":
        cfg.theta = guarded("theta", parse_vec)
    for key in ("degree_budget", "seed_box", "scan_box"):
        if key in raw:
            value, line = raw[key]
            setattr(cfg, key, _int(value, key, line))
    if "t_grid" in raw:
        cfg.t_grid = guarded("t_grid", lambda v: [parse_rational(x) for x in split_list(v)])

    if "quiver_ranks" in raw:
        cfg.quiver = _parse_quiver(raw, guarded)
    return cfg


def _parse_quiver(raw, guarded) -> QuiverConfig:
    def ints(v):
        out = []
        for x in split_list(v):
            f = parse_rational(x)
            if f.denominator != 1:
                raise ValueError("expected integers")
            out.append(int(f))
        return out

    ranks = guarded("quiver_ranks", ints)
    n = len(ranks)
    framings = guarded("quiver_framings", ints) if "quiver_framings" in raw else [0] * n
    arrows = []
    if "quiver_arrows" in raw:
        for p in guarded("quiver_arrows", lambda v: [parse_vec(x) for x in split_list(v)]):
            arrows.append((int(p.a), int(p.b)))
    det_powers = (
        guarded("quiver_det_powers", lambda v: [parse_rational(x) for x in split_list(v)])
        if "quiver_det_powers" in raw
        else [Fraction(1)] * n
    )
    collections = guarded("quiver_collections", split_list) if "quiver_collections" in raw else ["auto"] * n
    trusted: dict[int, list[Vec2]] = {}
    if "quiver_trusted" in raw:
        # [[(..),(..)], [..]]: one list per vertex marked trusted, in vertex order.
        lists = guarded("quiver_trusted", split_list)
        marked = [i for i, c in enumerate(collections) if c == "trusted"]
        if len(lists) != len(marked):
            raise ConfigError("one trusted list per trusted vertex is required", raw["quiver_trusted"][1], "quiver_trusted")
        for i, item in zip(marked, lists):
            trusted[i] = guarded("quiver_trusted", lambda _: [parse_vec(x) for x in split_list(item)])
    for key, seq in (("quiver_framings", framings), ("quiver_det_powers", det_powers), ("quiver_collections", collections)):
        if len(seq) != n:
            raise ConfigError(f"expected {n} entries", raw.get(key, (None, None))[1], key)
    for c in collections:
        if c not in ("auto", "trusted"):
            raise ConfigError(f"collection source must be auto or trusted, not {c!r}", raw["quiver_collections"][1], "quiver_collections")
    return QuiverConfig(ranks, framings, arrows, det_powers, collections, trusted)


def load_config(path: str | Path) -> JobConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {p}: {e.strerror}") from None
    return parse_config(text, source=str(p))
