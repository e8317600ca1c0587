"""Exact path counts, explicit path enumeration and bijection checks.

Counts are computed with a family-aware recurrence: each infinite family
contributes through a running prefix sum (row, column, diagonal or the
spider "column-then-diagonal" sum), so a table of size W x H costs
O(W*H*#families) ring operations regardless of how many steps the families
contain.  :func:`naive_count_table` is the direct convolution over
materialised steps and is kept as an independent oracle.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional

from .steps import Boundary, Kind, PreconditionFailed, StepSet, bishop_series, materialize, slope_condition

DEFAULT_CAP = 10**6


class CapExceeded(RuntimeError):
    pass


def weight_map(S: StepSet, weighted: bool = False, weights=None):
    """Resolve the label -> ring element map used by the weighted counts.

    ``weights`` may be given explicitly; ``weighted=True`` alone uses one
    fresh variable per label.  Returns None for unweighted counting.
    """
    if weights is not None:
        return dict(weights)
    if not weighted:
        return None
    from .rings import WeightRing

    labels = S.labels
    if not labels:
        raise ValueError("step set has no weight labels")
    R = WeightRing(labels)
    return {name: R[name] for name in labels}


def _family_weight(f, weights):
    if weights is None or f.weight is None:
        return 1
    return weights[f.weight]


@dataclass
class CountTable:
    """a[x][y] = (weighted) number of S-paths from the origin to (x, y)."""

    entries: list
    width: int
    height: int
    weights: Optional[dict] = None

    @property
    def N(self) -> int:
        return min(self.width, self.height)

    def __getitem__(self, xy):
        x, y = xy
        return self.entries[x][y]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "m", "count"])
        for x in range(self.width + 1):
            for y in range(self.height + 1):
                w.writerow([x, y, str(self.entries[x][y])])
        return buf.getvalue()


def _fill(S: StepSet, width: int, height: int, weights=None, admissible=None):
    """Shared recurrence for unrestricted and boundary-constrained counts.

    ``admissible(x, y)`` forces a[x][y] = 0 for forbidden nodes; prefix sums
    then automatically exclude paths through them.
    """
    W, H = width + 1, height + 1
    a = [[0] * H for _ in range(W)]
    row = [[0] * H for _ in range(W)]    # sum_{k<x} a[k][y]
    col = [[0] * H for _ in range(W)]    # sum_{k<y} a[x][k]
    diag = [[0] * H for _ in range(W)]   # sum_{k>=1} a[x-k][y-k]
    spid = [[0] * H for _ in range(W)]   # sum_{i>=1} col[x-i][y-i]

    fams = [(f, _family_weight(f, weights)) for f in S.families]
    finite = []
    for f, w in fams:
        if f.kind is Kind.EXPLICIT:
            finite.append((w, sorted(f.items)))
        elif f.kind is Kind.BISHOPS and f.items is not None:
            finite.append((w, [(b, b) for b in sorted(f.items)]))

    for x in range(W):
        for y in range(H):
            if x:
                row[x][y] = row[x - 1][y] + a[x - 1][y]
            if y:
                col[x][y] = col[x][y - 1] + a[x][y - 1]
            if x and y:
                diag[x][y] = diag[x - 1][y - 1] + a[x - 1][y - 1]
                spid[x][y] = spid[x - 1][y - 1] + col[x - 1][y - 1]
            if x == 0 and y == 0:
                a[0][0] = 1
                continue
            if admissible is not None and not admissible(x, y):
                continue
            total = 0
            for f, w in fams:
                k = f.kind
                if k is Kind.ALL_HORIZONTAL:
                    part = row[x][y]
                elif k is Kind.HORIZONTAL_UP_TO:
                    lo = x - f.bound + 1
                    part = row[x][y] - (row[lo][y] if lo > 0 else 0)
                elif k is Kind.ALL_VERTICAL:
                    part = col[x][y]
                elif k is Kind.VERTICAL_UP_TO:
                    lo = y - f.bound + 1
                    part = col[x][y] - (col[x][lo] if lo > 0 else 0)
                elif k is Kind.BISHOPS and f.items is None:
                    part = diag[x][y]
                elif k is Kind.ALL_SPIDERS:
                    part = spid[x][y]
                else:
                    continue
                if part != 0:
                    total = total + (part if w == 1 else w * part)
            for w, steps in finite:
                part = 0
                for dx, dy in steps:
                    if dx <= x and dy <= y:
                        part = part + a[x - dx][y - dy]
                if part != 0:
                    total = total + (part if w == 1 else w * part)
            a[x][y] = total
    return a


def count_unrestricted(S: StepSet, N: int, weighted: bool = False, *, width=None, weights=None) -> CountTable:
    """Table of a_{x,y} for 0 <= x <= width (default N), 0 <= y <= N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    width = N if width is None else width
    wm = weight_map(S, weighted, weights)
    return CountTable(_fill(S, width, N, wm), width, N, wm)


def naive_count_table(S: StepSet, width: int, height: int, weights=None) -> list:
    """Direct convolution over every materialised step (slow oracle)."""
    steps = [(s, 1 if weights is None or lab is None else weights[lab])
             for s, lab in materialize(S, width, height)]
    a = [[0] * (height + 1) for _ in range(width + 1)]
    a[0][0] = 1
    for x in range(width + 1):
        for y in range(height + 1):
            if x == 0 and y == 0:
                continue
            total = 0
            for (dx, dy), w in steps:
                if dx <= x and dy <= y:
                    total = total + w * a[x - dx][y - dy]
            a[x][y] = total
    return a


@dataclass
class BoundedCounts:
    """Counts of Path(n): paths to (s_n - 1, n) with every node (x, i) left of s_i.

    ``d[n]`` counts those ending with a non-horizontal step and
    ``lhp[(n, a)]`` those ending with the horizontal step (a, 0).
    """

    N: int
    boundary: Boundary
    p: list
    d: list
    lhp: dict
    table: list = field(repr=False)

    def lhp_total(self, m: int):
        return sum((v for (k, _), v in self.lhp.items() if k == m), 0)


def count_bounded(S: StepSet, b: Boundary, N: int, weighted: bool = False, *, weights=None) -> BoundedCounts:
    if N < 0:
        raise ValueError("N must be nonnegative")
    if not b.is_affine and len(b) <= N:
        raise ValueError(f"explicit boundary prefix too short for N={N}")
    wm = weight_map(S, weighted, weights)
    width = b(N) - 1
    table = _fill(S, width, N, wm, admissible=lambda x, y: x < b(y))
    p, d, lhp = [], [], {}
    for n in range(N + 1):
        x = b(n) - 1
        p.append(table[x][n])
        dn = 0
        for (dx, dy), lab in materialize(S, x, n):
            w = 1 if wm is None or lab is None else wm[lab]
            val = table[x - dx][n - dy]
            if val == 0:
                continue
            if dy:
                dn = dn + w * val
            else:
                lhp[(n, dx)] = w * val
        d.append(dn)
    return BoundedCounts(N, b, p, d, lhp, table)


# ---------------------------------------------------------------------------
# explicit paths

@dataclass
class PathList:
    """Paths as tuples of (dx, dy) steps, each listed once."""

    target: tuple
    paths: list

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    @staticmethod
    def nodes(path, start=(0, 0)) -> list:
        x, y = start
        out = [(x, y)]
        for dx, dy in path:
            x, y = x + dx, y + dy
            out.append((x, y))
        return out


def enumerate_paths(S: StepSet, target, b: Optional[Boundary] = None, cap: int = DEFAULT_CAP) -> PathList:
    """Every S-path from the origin to ``target`` (respecting ``b`` if given)."""
    tx, ty = target
    if b is None:
        table = _fill(S, tx, ty)
    else:
        if not b.is_affine and len(b) <= ty:
            raise ValueError("explicit boundary prefix too short")
        table = _fill(S, tx, ty, admissible=lambda x, y: x < b(y))
    total = table[tx][ty]
    if total > cap:
        raise CapExceeded(f"{total} paths to {target} exceed cap {cap}")
    steps = [s for s, _ in materialize(S, tx, ty)]
    out: list = []

    def back(x, y, suffix):
        if x == 0 and y == 0:
            out.append(tuple(reversed(suffix)))
            return
        for dx, dy in steps:
            if dx <= x and dy <= y and table[x - dx][y - dy]:
                suffix.append((dx, dy))
                back(x - dx, y - dy, suffix)
                suffix.pop()

    if total:
        back(tx, ty, [])
    out.sort()
    return PathList((tx, ty), out)


def respects(path, b: Boundary) -> bool:
    return all(x < b(y) for x, y in PathList.nodes(path))


def step_enumerator(paths, S: StepSet, weights: dict):
    """Sum over the paths of the product of their step weights."""
    total = 0
    for path in paths:
        term = 1
        for step in path:
            lab = S.weight_of(step)
            if lab is not None:
                term = term * weights[lab]
        total = total + term
    return total


# ---------------------------------------------------------------------------
# bijections

@dataclass
class BijectionReport:
    """Outcome of checking a three-part decomposition of AP(s_n - 1, n).

    ``rhs_counts`` are the part sizes computed from independent counts,
    ``image_counts`` the part sizes actually hit by the forward map.
    """

    n: int
    lhs_count: int
    rhs_counts: dict
    image_counts: dict = field(default_factory=dict)
    roundtrip_failures: list = field(default_factory=list)
    reading: Optional[str] = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (
            self.lhs_count == sum(self.rhs_counts.values())
            and self.image_counts == self.rhs_counts
            and not self.roundtrip_failures
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "lhs_count": self.lhs_count,
            "rhs_counts": dict(self.rhs_counts),
            "image_counts": dict(self.image_counts),
            "roundtrip_failures": [repr(f) for f in self.roundtrip_failures[:10]],
            "reading": self.reading,
            "notes": self.notes,
            "passed": self.passed,
        }


def _first_crossing(path, b: Boundary):
    """Index k such that node k is the first node (d, m) with d >= s_m, or None."""
    x = y = 0
    for k, (dx, dy) in enumerate(path, start=1):
        x, y = x + dx, y + dy
        if x >= b(y):
            return k
    return None


def decompose(path, b: Boundary, n: int):
    """Forward map of the decomposition of AP(s_n - 1, n).

    Returns ``("path", path)`` for boundary-respecting paths, otherwise
    ``(part, m, initial, final)`` where part is ``"path"`` (Case 1: the
    crossing step starts at (s_m - 1, m)) or ``"lhp"`` (Case 2: a long
    horizontal step is split at (s_m - 1, m)); ``final`` is the translated
    remainder, a path to (j, n - m).
    """
    k = _first_crossing(path, b)
    if k is None:
        return ("full", path)
    head = path[:k]
    cx = sum(s[0] for s in head[:-1])
    m = sum(s[1] for s in head)
    dx, dy = head[-1]
    if dy != 0:
        raise PreconditionFailed("boundary crossed by a non-horizontal step; slope condition fails")
    edge = b(m) - 1
    if cx == edge:
        return ("path", m, tuple(head[:-1]), tuple(path[k:]))
    return ("lhp", m, tuple(head[:-1]) + ((edge - cx, 0),), tuple(path[k:]))


def recompose(piece, b: Boundary, n: int):
    """Inverse of :func:`decompose`."""
    if piece[0] == "full":
        return piece[1]
    part, m, initial, final = piece
    j = sum(s[0] for s in final)
    jump = b(n) - b(m) - j     # length of the horizontal step reaching (d, m)
    if part == "path":
        return tuple(initial) + ((jump, 0),) + tuple(final)
    last = initial[-1][0]
    return tuple(initial[:-1]) + ((last + jump, 0),) + tuple(final)


def _require(S: StepSet, b: Boundary, *, all_horizontal: bool):
    if all_horizontal and not S.has_all_horizontal():
        raise PreconditionFailed("S must contain every proper horizontal step (a, 0), a > 0")
    if not slope_condition(S, b):
        raise PreconditionFailed(f"S fails the slope condition for boundary {b}")


def _column_sums(table, lo: int, hi: int, y: int):
    return sum((table[j][y] for j in range(max(lo, 0), hi + 1)), 0)


def _check_piece(piece, S, b, n, M=None):
    """Is the forward image inside its claimed part?"""
    if piece[0] == "full":
        return respects(piece[1], b)
    part, m, initial, final = piece
    ends = PathList.nodes(initial)[-1]
    if ends != (b(m) - 1, m) or not respects(initial, b):
        return False
    if not all(S.__contains__(s) for s in initial) or not all(S.__contains__(s) for s in final):
        return False
    if part == "lhp" and (not initial or initial[-1][1] != 0):
        return False
    j, h = PathList.nodes(final)[-1]
    if h != n - m or not 0 <= j <= b(n) - b(m) - 1:
        return False
    return True


def verify_lemma_2_1(S: StepSet, b: Boundary, n: int, cap: int = DEFAULT_CAP) -> BijectionReport:
    """Check the decomposition of AP(s_n - 1, n) into Path(m) x AP(j, n - m),
    LHP(m) x AP(j, n - m) and Path(n), for S with all horizontal steps.
    """
    _require(S, b, all_horizontal=True)
    target = (b(n) - 1, n)
    lhs = enumerate_paths(S, target, cap=cap)
    bounded = count_bounded(S, b, n)
    table = _fill(S, target[0], n)
    part1 = part2 = 0
    for m in range(n):
        tail = _column_sums(table, 0, b(n) - b(m) - 1, n - m)
        part1 += bounded.p[m] * tail
        part2 += bounded.lhp_total(m) * tail
    report = BijectionReport(n, len(lhs), {"path": part1, "lhp": part2, "full": bounded.p[n]})
    _run_bijection(report, lhs, S, b, n)
    return report


def _run_bijection(report, lhs, S, b, n, M=None):
    images = {"path": 0, "lhp": 0, "full": 0}
    seen = set()
    for path in lhs:
        try:
            piece = decompose(path, b, n)
        except PreconditionFailed as exc:
            report.roundtrip_failures.append((path, str(exc)))
            continue
        if M is not None and piece[0] != "full":
            bad = _lemma_2_5_range_violation(piece, b, n, M)
            if bad:
                report.roundtrip_failures.append((path, bad))
        if not _check_piece(piece, S, b, n):
            report.roundtrip_failures.append((path, "image outside its part"))
        key = (piece[0],) + tuple(piece[1:])
        if key in seen:
            report.roundtrip_failures.append((path, "forward map not injective"))
        seen.add(key)
        images[piece[0]] += 1
        if recompose(piece, b, n) != path:
            report.roundtrip_failures.append((path, "round trip changed the path"))
    report.image_counts = images


def _lemma_2_5_range_violation(piece, b, n, M):
    part, m, initial, final = piece
    j = sum(s[0] for s in final)
    hi = b(n) - b(m) - 1
    lo = hi - (M - 1) + 1
    if part == "lhp":
        lo += initial[-1][0]
    if not lo <= j <= hi:
        return f"j={j} outside [{lo}, {hi}]"
    return None


def lemma_2_5_rhs(S: StepSet, b: Boundary, n: int, M: int, reading: str) -> dict:
    """Part sizes of the bounded-horizontal decomposition under a reading of
    the merge constraint.

    ``"strict"``: a merged horizontal step must itself be a step, length < M.
    ``"literal"``: merged length may equal M (j ranges start one lower).
    """
    slack = {"strict": 1, "literal": 0}[reading]
    bounded = count_bounded(S, b, n)
    table = _fill(S, b(n) - 1, n)
    part1 = part2 = 0
    for m in range(n):
        hi = b(n) - b(m) - 1
        lo = b(n) - b(m) - M + slack
        part1 += bounded.p[m] * _column_sums(table, lo, hi, n - m)
        for a in range(1, M):
            count = bounded.lhp.get((m, a), 0)
            if count:
                part2 += count * _column_sums(table, lo + a, hi, n - m)
    return {"path": part1, "lhp": part2, "full": bounded.p[n]}


def verify_lemma_2_5(S: StepSet, b: Boundary, n: int, M: int, cap: int = DEFAULT_CAP) -> BijectionReport:
    """Bounded-horizontal analogue: S has exactly the horizontal steps (a, 0), 0 < a < M.

    Both readings of the merge constraint are counted; ``report.reading``
    records which one makes the decomposition exact ("strict", "literal",
    "both" or "neither") and the report passes under the strict reading.
    """
    if M < 2:
        raise PreconditionFailed("M must be at least 2")
    if S.horizontal_lengths() != frozenset(range(1, M)):
        raise PreconditionFailed(f"horizontal steps must be exactly (a, 0) for 0 < a < {M}")
    _require(S, b, all_horizontal=False)
    target = (b(n) - 1, n)
    lhs = enumerate_paths(S, target, cap=cap)
    strict = lemma_2_5_rhs(S, b, n, M, "strict")
    literal = lemma_2_5_rhs(S, b, n, M, "literal")
    ok_s = sum(strict.values()) == len(lhs)
    ok_l = sum(literal.values()) == len(lhs)
    reading = {(True, True): "both", (True, False): "strict",
               (False, True): "literal", (False, False): "neither"}[(ok_s, ok_l)]
    report = BijectionReport(n, len(lhs), strict, reading=reading,
                             notes={"literal_rhs_counts": literal})
    _run_bijection(report, lhs, S, b, n, M=M)
    return report


# ---------------------------------------------------------------------------
# recursions

def corollary_2_2_sides(S: StepSet, N: int, b: Optional[Boundary] = None):
    """Both sides of the summed recursion for n = 0..N, as two lists."""
    b = Boundary.catalan() if b is None else b
    if b(0) != 1:
        raise PreconditionFailed("the recursion needs s_0 = 1")
    _require(S, b, all_horizontal=True)
    bounded = count_bounded(S, b, N)
    table = _fill(S, b(N) - 1, N)
    lhs, rhs = [], []
    for n in range(N + 1):
        lhs.append(_column_sums(table, 0, b(n) - 1, n))
        total = bounded.p[n]
        for m in range(n):
            total += (2 * bounded.p[m] - bounded.d[m]) * _column_sums(table, 0, b(n) - b(m) - 1, n - m)
        rhs.append(total)
    return lhs, rhs


def verify_corollary_2_2(S: StepSet, N: int, b: Optional[Boundary] = None) -> bool:
    lhs, rhs = corollary_2_2_sides(S, N, b)
    return lhs == rhs


def verify_d_identity(S: StepSet, N: int) -> bool:
    """d_m equals sum over bishop lengths a of p_{m-a} (Catalan boundary)."""
    b = Boundary.catalan()
    if not slope_condition(S, b):
        raise PreconditionFailed("S fails the slope condition for the Catalan boundary")
    bounded = count_bounded(S, b, N)
    T = bishop_series(S, b, N)
    for m in range(N + 1):
        conv = sum(int(T[a]) * bounded.p[m - a] for a in range(1, m + 1))
        if bounded.d[m] != conv:
            return False
    return True
