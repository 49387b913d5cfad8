import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from presym import cohomology as co
from presym.errors import InputError
from presym.families import model_T3, model_T4

fractions = st.fractions(min_value=-3, max_value=3, max_denominator=5)


def brute_resonant(v, cutoff):
    n = len(v)
    rng = range(-cutoff, cutoff + 1)
    return sum(1 for m in itertools.product(rng, repeat=n) if sum(a * b for a, b in zip(m, v)) == 0)


@settings(max_examples=30, deadline=None)
@given(st.lists(fractions, min_size=2, max_size=3).filter(any), st.integers(0, 4))
def test_rational_h1_matches_brute_force(v, cutoff):
    got = co.foliated_h1_dim([str(x) for x in v], cutoff)
    assert got == brute_resonant(v, cutoff)
    assert co.foliated_h1_dim([float(x) for x in v], cutoff, "float") == got


@pytest.mark.parametrize("v", [["1", "sqrt(2)"], ["1", "sqrt(2)", "sqrt(3)"], ["2", "1 + sqrt(5)"]])
def test_irrational_directions_have_only_the_zero_mode(v):
    for c in (1, 4, 16):
        assert co.foliated_h1_dim(v, c) == 1
        assert co.foliated_h1_dim(v, c, "float") == 1


def test_exact_entry_decomposition():
    assert co.exact_entry("1/2 + 3*sqrt(8)") == {1: Fraction(1, 2), 2: Fraction(6)}
    assert co.exact_entry("pi") is None
    assert co.exact_entry(0.25) == {1: Fraction(1, 4)}
    assert co.exact_entry(math.sqrt(2)) is None
    with pytest.raises(InputError):
        co.exact_entry("1 +* 2")


def test_relation_matrix_detects_hidden_resonance():
    # sqrt(8) = 2 sqrt(2), so m = (2, -1) is resonant for v = (sqrt(2), sqrt(8))
    vf, C = co.parse_vector(["sqrt(2)", "sqrt(8)"])
    assert C is not None
    assert np.all(np.array([2, -1]) @ C == 0)
    assert co.foliated_h1_dim(["sqrt(2)", "sqrt(8)"], 2) == 3


def test_diophantine_minimum_matches_brute_force():
    v = ["1", "sqrt(2)"]
    rep = co.diophantine_scan(v, 1.0, 6)
    r2 = math.sqrt(2)
    raw = min(abs(a + b * r2) for a in range(-6, 7) for b in range(-6, 7) if (a, b) != (0, 0))
    wtd = min(abs(a + b * r2) * math.hypot(a, b) for a in range(-6, 7) for b in range(-6, 7) if (a, b) != (0, 0))
    assert math.isclose(rep.min_raw, raw, rel_tol=1e-12)
    assert math.isclose(rep.min_weighted, wtd, rel_tol=1e-12)
    assert rep.resonant_modes == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5))
def test_exact_rank_matches_sympy(seed, r, c):
    rng = np.random.default_rng(seed)
    low = rng.integers(-4, 5, size=(r, 2))
    mat = low @ rng.integers(-4, 5, size=(2, c)) if rng.random() < 0.5 else rng.integers(-9, 10, size=(r, c))
    got = int(co.exact_rank(mat[None].astype(np.int64))[0])
    assert got == sympy.Matrix(mat.tolist()).rank()


def test_float_rank_agrees_on_well_conditioned_integers():
    rng = np.random.default_rng(0)
    mats = rng.integers(-3, 4, size=(50, 4, 5)).astype(np.int64)
    assert np.array_equal(co.exact_rank(mats), co.float_rank(mats.astype(float)))


@pytest.mark.parametrize("obj", [model_T3(8), model_T4(8), ["1", "sqrt(2)"], ["1", "1/2", "1/3"], ["1", "sqrt(2)", "sqrt(3)"]])
def test_truncated_de_rham_cohomology_is_binomial(obj):
    cx = co._as_complex(obj)
    sweep = co.mode_sweep(cx, [0, 2])
    for c in (0, 2):
        for p in range(cx.n + 1):
            assert sweep.total(f"hM{p}", c) == math.comb(cx.n, p)


@pytest.mark.parametrize("v", [["1", "0"], ["1", "sqrt(2)"], ["1", "1/2", "1/3"], ["1", "sqrt(2)", "sqrt(3)"], [1.0, math.pi]])
def test_leafwise_h1_equals_resonant_count(v):
    cx = co.ModeComplex.from_direction(v)
    sweep = co.mode_sweep(cx, [3])
    arith = "exact" if cx.exact else "float"
    assert sweep.total("hK1", 3) == co.foliated_h1_dim(v, 3, arith)
    assert sweep.total("hK0", 3) == sweep.total("hK1", 3)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 1), (3, 1), (3, 2), (4, 2)]))
def test_long_exact_sequence_for_random_integer_splittings(seed, dims):
    n, k = dims
    rng = np.random.default_rng(seed)
    while True:
        B = rng.integers(-2, 3, size=(n, n))
        if round(np.linalg.det(B)) != 0:
            break
    cx = co.ModeComplex(B[:, :k], B[:, k:])
    assert cx.exact
    data = cx.mode_data(co.mode_grid(n, 2))
    assert int(np.sum(cx.discrepancies(data))) == 0
    assert cx.check_invariants(co.mode_grid(n, 1)) == 0


def test_les_report_rows_and_growth():
    out = co.les_consistency(["1", "0"], [1, 2, 4])
    assert out["total_discrepancies"] == 0
    assert [r["dim_H1K"] for r in out["rows"]] == [3, 5, 9]
    assert out["h1k_growth"] == "growth-consistent-with-infinite"
    irr = co.les_consistency(["1", "sqrt(2)"], [1, 2, 4])
    assert irr["h1k_growth"] == "saturated"
    assert [r["dim_H1M"] for r in irr["rows"]] == [2, 2, 2]


def test_non_complementary_frames_are_rejected():
    with pytest.raises(InputError):
        co.ModeComplex(np.array([[1], [1]]), np.array([[2], [2]]))
    with pytest.raises(InputError):
        co.ModeComplex.from_direction(["0", "0"])
