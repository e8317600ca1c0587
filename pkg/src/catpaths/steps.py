"""Step sets, right boundaries and the slope condition.

A step set is a union of *families*, several of which are infinite (all
horizontal steps, all bishop steps, all spider steps).  Families are kept
intensional and are only expanded to a finite list of steps on demand, for a
given grid.

Step-set DSL (comma separated tokens, each with an optional ``@label``)::

    H*        all horizontal steps (a, 0), a > 0
    H<M       horizontal steps (a, 0), 0 < a < M
    V*  V<M   the vertical analogues
    B*        all bishop steps (a, a), a > 0
    B{1,3}    bishop steps (1, 1) and (3, 3)
    SP*       all spider steps (a, b), b > a > 0
    (a,b)     a single explicit step

Boundary DSL: ``affine:SIGMA:DELTA`` for s_i = SIGMA*i + DELTA, or
``explicit:1,2,4,...`` for an explicit prefix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from collections import namedtuple
from typing import Iterator, Optional

from .series import TruncSeries


class DSLParseError(ValueError):
    """Malformed DSL string; ``position`` is the 0-based offset of the error."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")


class PreconditionFailed(ValueError):
    """A hypothesis required by one of the counting theorems does not hold."""


class Step(namedtuple("Step", "dx dy")):
    """A step (dx, dy); compares equal to the plain tuple."""

    __slots__ = ()

    def __new__(cls, dx: int, dy: int):
        if dx < 0 or dy < 0:
            raise ValueError(f"steps may not decrease a coordinate: ({dx}, {dy})")
        if dx == 0 and dy == 0:
            raise ValueError("the null step (0, 0) is not allowed")
        return super().__new__(cls, dx, dy)

    def __str__(self):
        return f"({self.dx},{self.dy})"


class Kind(Enum):
    ALL_HORIZONTAL = "H*"
    HORIZONTAL_UP_TO = "H<"
    ALL_VERTICAL = "V*"
    VERTICAL_UP_TO = "V<"
    BISHOPS = "B"
    ALL_SPIDERS = "SP*"
    EXPLICIT = "explicit"


_INFINITE = {Kind.ALL_HORIZONTAL, Kind.ALL_VERTICAL, Kind.ALL_SPIDERS}


@dataclass(frozen=True)
class StepFamily:
    """One family of steps sharing a weight label.

    ``bound`` is M for the bounded rook families (lengths 1..M-1).  ``items``
    holds the bishop lengths (None meaning all of them) or the explicit steps.
    ``weight`` is a variable name, or None for the constant weight 1.
    """

    kind: Kind
    bound: Optional[int] = None
    items: Optional[frozenset] = None
    weight: Optional[str] = None

    def __post_init__(self):
        if self.kind in (Kind.HORIZONTAL_UP_TO, Kind.VERTICAL_UP_TO):
            if self.bound is None or self.bound < 1:
                raise ValueError("bounded rook families need M >= 1")
        if self.kind is Kind.BISHOPS and self.items is not None:
            if any(a < 1 for a in self.items):
                raise ValueError("bishop lengths must be positive")
        if self.kind is Kind.EXPLICIT:
            if not self.items:
                raise ValueError("explicit family needs at least one step")
            object.__setattr__(self, "items", frozenset(Step(*s) for s in self.items))

    @property
    def infinite(self) -> bool:
        return self.kind in _INFINITE or (self.kind is Kind.BISHOPS and self.items is None)

    def contains(self, step) -> bool:
        dx, dy = step
        k = self.kind
        if k is Kind.ALL_HORIZONTAL:
            return dy == 0 and dx > 0
        if k is Kind.HORIZONTAL_UP_TO:
            return dy == 0 and 0 < dx < self.bound
        if k is Kind.ALL_VERTICAL:
            return dx == 0 and dy > 0
        if k is Kind.VERTICAL_UP_TO:
            return dx == 0 and 0 < dy < self.bound
        if k is Kind.BISHOPS:
            return dx == dy > 0 and (self.items is None or dx in self.items)
        if k is Kind.ALL_SPIDERS:
            return dy > dx > 0
        return (dx, dy) in self.items

    def steps(self, max_x: int, max_y: int) -> Iterator[Step]:
        """The family's steps inside [0, max_x] x [0, max_y], in a fixed order."""
        k = self.kind
        if k is Kind.ALL_HORIZONTAL:
            yield from (Step(a, 0) for a in range(1, max_x + 1))
        elif k is Kind.HORIZONTAL_UP_TO:
            yield from (Step(a, 0) for a in range(1, min(max_x, self.bound - 1) + 1))
        elif k is Kind.ALL_VERTICAL:
            yield from (Step(0, a) for a in range(1, max_y + 1))
        elif k is Kind.VERTICAL_UP_TO:
            yield from (Step(0, a) for a in range(1, min(max_y, self.bound - 1) + 1))
        elif k is Kind.BISHOPS:
            top = min(max_x, max_y)
            lengths = range(1, top + 1) if self.items is None else sorted(self.items)
            yield from (Step(a, a) for a in lengths if a <= top)
        elif k is Kind.ALL_SPIDERS:
            for a in range(1, max_x + 1):
                for b in range(a + 1, max_y + 1):
                    yield Step(a, b)
        else:
            yield from sorted(s for s in self.items if s.dx <= max_x and s.dy <= max_y)

    def token(self) -> str:
        k = self.kind
        if k in (Kind.HORIZONTAL_UP_TO, Kind.VERTICAL_UP_TO):
            text = f"{k.value}{self.bound}"
        elif k is Kind.BISHOPS:
            text = "B*" if self.items is None else "B{" + ",".join(map(str, sorted(self.items))) + "}"
        elif k is Kind.EXPLICIT:
            return ",".join(
                str(s) + (f"@{self.weight}" if self.weight else "") for s in sorted(self.items)
            )
        else:
            text = k.value
        return text + (f"@{self.weight}" if self.weight else "")


def _overlaps(f: StepFamily, g: StepFamily) -> bool:
    if f.infinite and g.infinite:
        return f.kind is g.kind
    finite, other = (g, f) if f.infinite else (f, g)
    if finite.kind is Kind.BISHOPS:
        members = [(a, a) for a in finite.items]
    elif finite.kind is Kind.EXPLICIT:
        members = list(finite.items)
    else:
        members = list(finite.steps(finite.bound, finite.bound))
    return any(other.contains(s) for s in members)


@dataclass(frozen=True)
class StepSet:
    families: tuple

    def __post_init__(self):
        fams = tuple(self.families)
        object.__setattr__(self, "families", fams)
        for i, f in enumerate(fams):
            for g in fams[i + 1:]:
                if _overlaps(f, g):
                    raise ValueError(
                        f"families {f.token()} and {g.token()} share a step; "
                        "each step must belong to exactly one family"
                    )

    @classmethod
    def parse(cls, text: str) -> "StepSet":
        return parse_stepset(text)

    def __str__(self):
        return ",".join(f.token() for f in self.families)

    def __contains__(self, step) -> bool:
        return contains(self, step)

    @property
    def labels(self) -> tuple:
        """Weight labels in order of first appearance."""
        return tuple(dict.fromkeys(f.weight for f in self.families if f.weight))

    def with_weights(self, weights) -> "StepSet":
        """Copy with every family relabelled by ``weights(family)``."""
        return StepSet(tuple(
            StepFamily(f.kind, f.bound, f.items, weights(f)) for f in self.families
        ))

    def unweighted(self) -> "StepSet":
        return self.with_weights(lambda f: None)

    def horizontal_families(self):
        out = []
        for f in self.families:
            if f.kind in (Kind.ALL_HORIZONTAL, Kind.HORIZONTAL_UP_TO):
                out.append(f)
            elif f.kind is Kind.EXPLICIT and any(s.dy == 0 for s in f.items):
                out.append(f)
        return out

    def has_all_horizontal(self) -> bool:
        return any(f.kind is Kind.ALL_HORIZONTAL for f in self.families)

    def horizontal_lengths(self) -> Optional[frozenset]:
        """Lengths of the horizontal steps, or None if there are infinitely many."""
        if self.has_all_horizontal():
            return None
        out = set()
        for f in self.horizontal_families():
            if f.kind is Kind.HORIZONTAL_UP_TO:
                out.update(range(1, f.bound))
            else:
                out.update(s.dx for s in f.items if s.dy == 0)
        return frozenset(out)

    def weight_of(self, step) -> Optional[str]:
        for f in self.families:
            if f.contains(step):
                return f.weight
        raise KeyError(f"{step} is not in the step set")


# ---------------------------------------------------------------------------
# DSL

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<hstar>H\*) | (?P<hlt>H<(?P<hm>\d+)) |
        (?P<vstar>V\*) | (?P<vlt>V<(?P<vm>\d+)) |
        (?P<bstar>B\*) | (?P<bset>B\{(?P<bitems>[\d\s,]*)\}) |
        (?P<sp>SP\*) |
        (?P<exp>\(\s*(?P<ex>\d+)\s*,\s*(?P<ey>\d+)\s*\))
    )(?:@(?P<label>[A-Za-z_][A-Za-z0-9_]*))?\s*""",
    re.VERBOSE,
)


def parse_stepset(text: str) -> StepSet:
    families: list = []
    explicit: dict = {}
    pos = 0
    if not text.strip():
        raise DSLParseError("empty step set", text, 0)
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DSLParseError("unrecognised step token", text, pos)
        label = m.group("label")
        try:
            if m.group("hstar"):
                families.append(StepFamily(Kind.ALL_HORIZONTAL, weight=label))
            elif m.group("hlt"):
                families.append(StepFamily(Kind.HORIZONTAL_UP_TO, bound=int(m.group("hm")), weight=label))
            elif m.group("vstar"):
                families.append(StepFamily(Kind.ALL_VERTICAL, weight=label))
            elif m.group("vlt"):
                families.append(StepFamily(Kind.VERTICAL_UP_TO, bound=int(m.group("vm")), weight=label))
            elif m.group("bstar"):
                families.append(StepFamily(Kind.BISHOPS, weight=label))
            elif m.group("bset") is not None:
                raw = [x for x in m.group("bitems").replace(" ", "").split(",") if x]
                if not raw:
                    raise ValueError("empty bishop set")
                families.append(StepFamily(Kind.BISHOPS, items=frozenset(map(int, raw)), weight=label))
            elif m.group("sp"):
                families.append(StepFamily(Kind.ALL_SPIDERS, weight=label))
            else:
                step = Step(int(m.group("ex")), int(m.group("ey")))
                explicit.setdefault(label, []).append(step)
        except ValueError as exc:
            raise DSLParseError(str(exc), text, m.start()) from None
        pos = m.end()
        if pos == len(text):
            break
        if text[pos] != ",":
            raise DSLParseError("expected ','", text, pos)
        pos += 1
    for label, steps in explicit.items():
        families.append(StepFamily(Kind.EXPLICIT, items=frozenset(steps), weight=label))
    try:
        return StepSet(tuple(families))
    except ValueError as exc:
        raise DSLParseError(str(exc), text, 0) from None


@dataclass(frozen=True)
class Boundary:
    """Right boundary s_0 <= s_1 <= ... of positive integers."""

    sigma: Optional[int] = None
    delta: Optional[int] = None
    prefix: Optional[tuple] = None

    def __post_init__(self):
        if self.prefix is None:
            if self.sigma is None or self.delta is None:
                raise ValueError("affine boundary needs sigma and delta")
            if self.sigma < 0 or self.delta < 1:
                raise ValueError("affine boundary needs sigma >= 0 and delta >= 1")
        else:
            p = tuple(self.prefix)
            object.__setattr__(self, "prefix", p)
            if not p or p[0] < 1 or any(b < a for a, b in zip(p, p[1:])):
                raise ValueError("explicit boundary must be a nondecreasing list of positive integers")

    @classmethod
    def affine(cls, sigma: int, delta: int) -> "Boundary":
        return cls(sigma=sigma, delta=delta)

    @classmethod
    def catalan(cls) -> "Boundary":
        return cls(sigma=1, delta=1)

    @classmethod
    def explicit(cls, prefix) -> "Boundary":
        return cls(prefix=tuple(prefix))

    @classmethod
    def parse(cls, text: str) -> "Boundary":
        return parse_boundary(text)

    @property
    def is_affine(self) -> bool:
        return self.prefix is None

    def __len__(self):
        if self.prefix is None:
            raise TypeError("affine boundaries are infinite")
        return len(self.prefix)

    def __call__(self, i: int) -> int:
        if self.prefix is None:
            return self.sigma * i + self.delta
        return self.prefix[i]

    def __str__(self):
        if self.prefix is None:
            return f"affine:{self.sigma}:{self.delta}"
        return "explicit:" + ",".join(map(str, self.prefix))


def parse_boundary(text: str) -> Boundary:
    m = re.fullmatch(r"\s*affine:(\d+):(\d+)\s*", text)
    if m:
        try:
            return Boundary.affine(int(m.group(1)), int(m.group(2)))
        except ValueError as exc:
            raise DSLParseError(str(exc), text, m.start(1)) from None
    m = re.fullmatch(r"\s*explicit:([\d,\s]+)", text)
    if m:
        try:
            return Boundary.explicit(int(x) for x in m.group(1).split(",") if x.strip())
        except ValueError as exc:
            raise DSLParseError(str(exc), text, m.start(1)) from None
    bad = 0 if not text.startswith(("affine", "explicit")) else text.find(":") + 1
    raise DSLParseError("expected 'affine:SIGMA:DELTA' or 'explicit:s0,s1,...'", text, bad)


# ---------------------------------------------------------------------------
# operations

def contains(S: StepSet, step) -> bool:
    return any(f.contains(step) for f in S.families)


def materialize(S: StepSet, max_x: int, max_y: int) -> list:
    """All (step, weight label) pairs of S inside the grid, family by family."""
    if max_x < 0 or max_y < 0:
        raise ValueError("grid bounds must be nonnegative")
    return [(s, f.weight) for f in S.families for s in f.steps(max_x, max_y)]


def _family_passes_affine(f: StepFamily, sigma: int) -> bool:
    k = f.kind
    if k in (Kind.ALL_HORIZONTAL, Kind.HORIZONTAL_UP_TO, Kind.ALL_VERTICAL, Kind.VERTICAL_UP_TO):
        return True
    if k is Kind.BISHOPS or k is Kind.ALL_SPIDERS:
        # a <= b for every member, so a <= sigma*b iff sigma >= 1
        return sigma >= 1 or (k is Kind.BISHOPS and f.items == frozenset())
    return all(s.dy == 0 or s.dx <= sigma * s.dy for s in f.items)


def slope_condition(S: StepSet, b: Boundary) -> bool:
    """Can an S-path touch or cross the boundary only with a horizontal step?

    Affine boundaries are decided in closed form (a <= sigma*b for every
    non-horizontal step (a, b)); explicit prefixes are checked inequality by
    inequality over the prefix.
    """
    if b.is_affine:
        return all(_family_passes_affine(f, b.sigma) for f in S.families)
    s = b.prefix
    L = len(s)
    widest = max([L] + [st.dx for f in S.families if f.kind is Kind.EXPLICIT for st in f.items])
    for step, _ in materialize(S, widest, L - 1):
        a, bb = step
        if bb == 0:
            continue
        for i in range(L - bb):
            for j in range(1, bb + 1):
                # s_{i+j} > s_i - 1 + j*a/b
                if bb * (s[i + j] - s[i] + 1) <= j * a:
                    return False
    return True


def bishop_series(S: StepSet, b: Boundary, N: int, weights=None) -> TruncSeries:
    """Sum of t^a over the boundary-parallel steps (sigma*a, a) of S.

    ``weights`` maps labels to ring elements; without it every step counts 1.
    """
    if not b.is_affine:
        raise PreconditionFailed("bishop_series needs an affine boundary")
    coeffs = [0] * (N + 1)
    for a in range(1, N + 1):
        step = (b.sigma * a, a)
        for f in S.families:
            if f.contains(step):
                coeffs[a] = 1 if weights is None or f.weight is None else weights[f.weight]
                break
    if weights is not None:
        zero = next(iter(weights.values())) * 0
        coeffs = [c + zero for c in coeffs]
    else:
        coeffs = [Fraction(c) for c in coeffs]
    return TruncSeries(coeffs)
