import pytest
from hypothesis import given, settings, strategies as st

from qkw.gkm import (
    OrthogonalSum,
    ch_highest_weight,
    ch_uq_minus,
    epsilon_weight,
    euler_function_coefficient,
    kac_constant_term_check,
    necklace,
    root_multiplicities,
    sigma_enum,
    weyl_denominator_series,
)
from qkw.hua import partitions_of
from qkw.quiver import NAMED_QUIVERS, Quiver, a2_quiver, jordan_quiver, kronecker_quiver, loop_quiver
from qkw.symcore import mobius

SINGLE = Quiver(("0",), ())


def test_sigma_loop_quiver():
    sums = list(sigma_enum(loop_quiver(2), (0,), (3,)))
    assert [s.totals for s in sums] == [(), ((0, 1),), ((0, 2),), ((0, 3),)]


def test_sigma_loop_free_and_perpendicularity():
    assert [s.totals for s in sigma_enum(kronecker_quiver(), (0, 0), (3, 3))] == [()]
    assert [s.totals for s in sigma_enum(jordan_quiver(), (1,), (3,))] == [()]


def test_sigma_orthogonality():
    # two isotropic vertices joined by an edge are not orthogonal
    Q = Quiver(("0", "1"), (("0", "0"), ("1", "1"), ("0", "1")))
    assert all(len(s.totals) <= 1 for s in sigma_enum(Q, (0, 0), (2, 2)))
    R = Quiver(("0", "1"), (("0", "0"), ("1", "1")))
    assert any(len(s.totals) == 2 for s in sigma_enum(R, (0, 0), (2, 2)))


def test_epsilon():
    assert epsilon_weight(loop_quiver(2), OrthogonalSum(())) == 1
    assert epsilon_weight(loop_quiver(2), OrthogonalSum(((0, 3),))) == -1
    assert epsilon_weight(jordan_quiver(), OrthogonalSum(((0, 2),))) == -1
    assert epsilon_weight(jordan_quiver(), OrthogonalSum(((0, 5),))) == 1


def _partition_count_inverse(n):
    # coefficients of prod (1 - q^k) by direct expansion
    coeffs = [1] + [0] * n
    for k in range(1, n + 1):
        coeffs = [c - (coeffs[i - k] if i >= k else 0) for i, c in enumerate(coeffs)]
    return coeffs


def test_euler_function_coefficients():
    assert [euler_function_coefficient(l) for l in range(30)] == _partition_count_inverse(29)


def test_denominators():
    d = weyl_denominator_series(loop_quiver(3), (0,), (4,))
    assert [d[(a,)] for a in range(5)] == [1, -1, -1, -1, -1]
    assert weyl_denominator_series(SINGLE, (0,), (3,)).terms == {(0,): 1, (1,): -1}
    dj = weyl_denominator_series(jordan_quiver(), (0,), (6,))
    assert [dj[(a,)] for a in range(7)] == _partition_count_inverse(6)


def test_dominance_required():
    with pytest.raises(ValueError):
        weyl_denominator_series(SINGLE, (-1,), (2,))


def test_characters():
    for g in (2, 3, 4):
        ch = ch_uq_minus(loop_quiver(g), (7,))
        assert [ch[(a,)] for a in range(8)] == [1] + [2 ** (a - 1) for a in range(1, 8)]
    heis = ch_uq_minus(jordan_quiver(), (8,))
    assert [heis[(a,)] for a in range(9)] == [len(partitions_of(a)) for a in range(9)]
    a2 = ch_uq_minus(a2_quiver(), (2, 2))
    expected = {(0, 0): 1, (0, 1): 1, (1, 0): 1, (0, 2): 1, (1, 1): 2, (2, 0): 1, (1, 2): 2, (2, 1): 2, (2, 2): 3}
    assert a2.terms == expected


def test_highest_weight_modules():
    assert ch_highest_weight(kronecker_quiver(), (0, 0), (3, 3)).terms == {(0, 0): 1}
    assert ch_highest_weight(SINGLE, (1,), (4,)).terms == {(0,): 1, (1,): 1}
    # sl_2 module of highest weight 3 has dimension 4
    assert ch_highest_weight(SINGLE, (3,), (6,)).terms == {(k,): 1 for k in range(4)}
    # A_2 adjoint-like module with pairings (1, 1): dimension 8
    assert sum(ch_highest_weight(a2_quiver(), (1, 1), (4, 4)).terms.values()) == 8


def test_multiplicities():
    assert set(root_multiplicities(jordan_quiver(), (6,)).values()) == {1}
    lm = root_multiplicities(loop_quiver(2), (6,))
    assert [lm[(a,)] for a in range(1, 7)] == [1, 1, 2, 3, 6, 9]
    am = root_multiplicities(a2_quiver(), (3, 3))
    assert {v for v, m in am.items() if m} == {(1, 0), (0, 1), (1, 1)}
    assert all(m in (0, 1) for m in am.values())


@pytest.mark.parametrize("g", [2, 3, 4])
def test_free_lie_multiplicities(g):
    # (1 - z) prod (1 - z^a)^{-m(2,a)} = Ch(U^-) gives multiplicity m(2,a) - m(1,a)
    mult = root_multiplicities(loop_quiver(g), (8,))
    assert [mult[(a,)] for a in range(1, 9)] == [necklace(2, a) - necklace(1, a) for a in range(1, 9)]


def test_kronecker_imaginary_root():
    m = root_multiplicities(kronecker_quiver(), (3, 3))
    assert m[(1, 1)] == m[(2, 2)] == m[(3, 3)] == 1
    assert m[(1, 2)] == m[(2, 1)] == 1


@pytest.mark.parametrize("name, box", [("jordan", (6,)), ("2-loop", (6,)), ("a2", (2, 2)), ("kronecker", (3, 3)),
                                        ("loop-edge", (3, 3)), ("cyclic2", (3, 3)), ("3-loop", (4,))])
def test_constant_terms(name, box):
    assert kac_constant_term_check(NAMED_QUIVERS[name](), box).ok


@pytest.mark.parametrize("k, n, m", [(2, 1, 2), (2, 3, 2), (2, 6, 9), (3, 2, 3), (1, 5, 0)])
def test_necklace(k, n, m):
    assert necklace(k, n) == m


def test_necklace_domain():
    with pytest.raises(ValueError):
        necklace(0, 3)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(1, 12))
def test_necklace_counts_words(k, n):
    # words of length n factor uniquely through primitive necklaces: k^n = sum_{d|n} d m(k,d)
    assert sum(d * necklace(k, d) for d in range(1, n + 1) if n % d == 0) == k ** n
