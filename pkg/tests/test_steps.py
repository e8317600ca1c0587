import itertools

import pytest
from hypothesis import given, strategies as st

from catpaths.steps import (
    Boundary,
    DSLParseError,
    Step,
    StepSet,
    bishop_series,
    contains,
    materialize,
    slope_condition,
)
from catpaths.enumerate import count_bounded, enumerate_paths

ROOK = StepSet.parse("H*,V*")
QUEEN = StepSet.parse("H*,V*,B*")
MSET = StepSet.parse("H*,V*,B*,SP*")
TUGGER = StepSet.parse("(1,0),(0,1),(1,2)")
CATALAN = Boundary.catalan()


def test_null_step_rejected():
    with pytest.raises(ValueError):
        Step(0, 0)
    with pytest.raises(ValueError):
        Step(-1, 2)


def test_contains_examples():
    assert contains(QUEEN, (3, 3))
    assert not contains(ROOK, (1, 1))
    assert contains(MSET, (2, 5))
    assert not contains(MSET, (5, 2))


def test_materialize_examples():
    assert {s for s, _ in materialize(ROOK, 2, 1)} == {(1, 0), (2, 0), (0, 1)}
    assert {s for s, _ in materialize(TUGGER, 3, 3)} == {(1, 0), (0, 1), (1, 2)}
    assert [s for s, _ in materialize(StepSet.parse("B{1,2}"), 1, 2)] == [(1, 1)]


def test_materialize_labels():
    S = StepSet.parse("H*@rho,V*@nu,B{2}@omega")
    got = dict(materialize(S, 2, 2))
    assert got[(1, 0)] == "rho" and got[(0, 2)] == "nu" and got[(2, 2)] == "omega"


@given(st.sampled_from(["H*,V*", "H*,V*,B*", "H*,V*,B*,SP*", "H<3,V<2,B{1,3}", "(1,0),(0,1),(1,2)"]),
       st.integers(0, 6), st.integers(0, 6), st.integers(0, 3), st.integers(0, 3))
def test_materialize_monotone_and_complete(text, x, y, ex, ey):
    S = StepSet.parse(text)
    small = set(materialize(S, x, y))
    big = set(materialize(S, x + ex, y + ey))
    assert small <= big
    assert small == set(materialize(S, x, y))
    brute = {(a, b) for a in range(x + 1) for b in range(y + 1) if (a, b) != (0, 0) and contains(S, (a, b))}
    assert {s for s, _ in small} == brute


@pytest.mark.parametrize("text", ["H*,V*", "H<4@a,V*@b,B{1,2}", "(1,0),(0,1),(1,2)@s", "H*,V*,B*,SP*"])
def test_dsl_round_trip(text):
    S = StepSet.parse(text)
    assert StepSet.parse(str(S)) == S


@pytest.mark.parametrize("text,pos", [("H*,Q", 3), ("(1,2", 0), ("", 0), ("H*@1x", 2)])
def test_dsl_errors_carry_position(text, pos):
    with pytest.raises(DSLParseError) as err:
        StepSet.parse(text)
    assert err.value.position == pos


def test_overlapping_families_rejected():
    with pytest.raises(DSLParseError):
        StepSet.parse("H*,(2,0)")
    with pytest.raises(DSLParseError):
        StepSet.parse("B*,B{2}")


def test_boundary_parse_and_values():
    b = Boundary.parse("affine:2:1")
    assert [b(i) for i in range(4)] == [1, 3, 5, 7]
    e = Boundary.parse("explicit:1,2,2,4")
    assert [e(i) for i in range(4)] == [1, 2, 2, 4]
    with pytest.raises(DSLParseError):
        Boundary.parse("affine:1:0")
    with pytest.raises(DSLParseError):
        Boundary.parse("explicit:3,2")
    with pytest.raises(DSLParseError):
        Boundary.parse("linear:1")


def test_slope_condition_examples():
    assert slope_condition(QUEEN, CATALAN)
    assert slope_condition(MSET, CATALAN)
    assert not slope_condition(StepSet.parse("(1,0),(0,1),(2,1)"), CATALAN)
    assert slope_condition(StepSet.parse("(1,0),(0,1),(4,2)"), Boundary.affine(2, 1))


def _first_crossing_steps(S, target, b):
    """Last steps of the first node at or right of the boundary, over all paths to target."""
    out = set()
    paths = enumerate_paths(S, target)
    for path in paths:
        nodes = paths.nodes(path)
        for k, (x, y) in enumerate(nodes):
            if x >= b(y):
                out.add(path[k - 1])
                break
    return out


def test_slope_failure_shows_as_boundary_crossing():
    # the slope condition guarantees a path first meets the boundary on a horizontal step
    good = _first_crossing_steps(StepSet.parse("(1,0),(0,1),(1,2)"), (2, 2), CATALAN)
    assert good and all(dy == 0 for _, dy in good)
    bad = _first_crossing_steps(StepSet.parse("(1,0),(0,1),(2,1)"), (2, 2), CATALAN)
    assert (2, 1) in bad


def _direct_slope(S, sigma, delta, reach=50):
    s = lambda i: sigma * i + delta  # noqa: E731
    for (a, bb), _ in materialize(S, reach, reach):
        if bb == 0:
            continue
        for i, j in itertools.product(range(reach), range(1, bb + 1)):
            if not s(i + j) > s(i) - 1 + j * a / bb:
                return False
    return True


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(1, 4)), min_size=1, max_size=4, unique=True))
def test_slope_condition_matches_direct_inequalities(extra):
    S = StepSet.parse(",".join(f"({a},{b})" for a, b in extra) + ",(1,0)" * ((1, 0) not in extra))
    assert slope_condition(S, CATALAN) == _direct_slope(S, 1, 1, reach=12)
    assert slope_condition(S, CATALAN) == all(a <= b for a, b in extra)


def test_slope_condition_explicit_prefix():
    assert slope_condition(QUEEN, Boundary.explicit([1, 2, 3, 4, 5]))
    assert not slope_condition(StepSet.parse("H*,(0,1),(2,1)"), Boundary.explicit([1, 2, 3, 4]))


def test_bishop_series_examples():
    assert bishop_series(ROOK, CATALAN, 10).is_zero()
    assert list(bishop_series(QUEEN, CATALAN, 4)) == [0, 1, 1, 1, 1]
    assert list(bishop_series(StepSet.parse("(1,0),(0,1),B{2}"), CATALAN, 5)) == [0, 0, 1, 0, 0, 0]
    S = StepSet.parse("H*,V*,(2,1),(6,3)")
    assert list(bishop_series(S, Boundary.affine(2, 1), 4)) == [0, 1, 0, 1, 0]
    with pytest.raises(ValueError):
        bishop_series(QUEEN, Boundary.explicit([1, 2]), 3)


@given(st.sets(st.integers(1, 8), max_size=4), st.integers(0, 10))
def test_bishop_series_matches_materialized_diagonals(I, N):
    text = "H*,V*" + (",B{" + ",".join(map(str, sorted(I))) + "}" if I else "")
    S = StepSet.parse(text)
    T = bishop_series(S, CATALAN, N)
    direct = [0] * (N + 1)
    for (a, b), _ in materialize(S, N, N):
        if a == b:
            direct[a] += 1
    assert list(T) == direct
