import pytest
from hypothesis import given, settings, strategies as st

from qkw.quiver import (
    NAMED_QUIVERS,
    Quiver,
    QuiverError,
    a2_quiver,
    euler_form,
    jordan_quiver,
    kronecker_quiver,
    load_quiver,
    loop_quiver,
    parse_quiver,
    reverse_all_arrows,
    reverse_arrow,
    subquiver,
    sym_form,
)


@pytest.mark.parametrize("v", [0, 1, 2, 5])
def test_jordan_euler_vanishes(v):
    assert euler_form(jordan_quiver(), (v,), (v,)) == 0


@pytest.mark.parametrize("g, v", [(0, 3), (2, 2), (3, 4)])
def test_loop_euler(g, v):
    assert euler_form(loop_quiver(g), (v,), (v,)) == (1 - g) * v * v


def test_a2_euler_is_asymmetric():
    Q = a2_quiver()
    assert euler_form(Q, (1, 0), (0, 1)) == -1
    assert euler_form(Q, (0, 1), (1, 0)) == 0


@pytest.mark.parametrize("g, expected", [(0, 2), (1, 0), (2, -2)])
def test_sym_form_diagonal(g, expected):
    assert sym_form(loop_quiver(g), (1,), (1,)) == expected


def test_form_length_mismatch():
    with pytest.raises(QuiverError):
        euler_form(a2_quiver(), (1,), (1, 0))


def test_vertex_kinds():
    Q = Quiver(("a", "b", "c"), (("b", "b"), ("c", "c"), ("c", "c")))
    assert Q.is_real(0) and Q.is_isotropic(1) and Q.is_imaginary(2) and not Q.is_isotropic(2)


def test_parse_examples():
    assert parse_quiver('{"vertices":["0"],"arrows":[["0","0"]]}') == jordan_quiver()
    assert parse_quiver('{"vertices":["0","1"],"arrows":[["0","1"],["0","1"]]}') == kronecker_quiver()


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('{"vertices":["0"],"arrows":[["0","9"]]}', "unknown vertex '9'"),
        ('{"vertices":["0","0"],"arrows":[]}', "duplicate vertex"),
        ('{"vertices":["0"],', "line 1, column"),
        ('{"vertices":["0"],"arrows":[["0"]]}', "arrow #0"),
        ('[1, 2]', "JSON object"),
        ('{"vertices":["0"],"edges":[]}', "unexpected fields"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(QuiverError, match=fragment):
        parse_quiver(text)


def test_roundtrip_through_file(tmp_path):
    Q = NAMED_QUIVERS["loop-edge"]()
    path = tmp_path / "q.json"
    path.write_text(str(Q))
    assert load_quiver(str(path)) == Q


def test_subquiver():
    K = kronecker_quiver()
    assert subquiver(K, ["0"]) == Quiver(("0",), ())
    assert subquiver(K, K.vertices) == K
    assert subquiver(jordan_quiver(), []).n == 0
    with pytest.raises(QuiverError):
        subquiver(K, ["7"])


def test_reversal():
    assert reverse_all_arrows(a2_quiver()) == Quiver(("0", "1"), (("1", "0"),))
    assert reverse_all_arrows(jordan_quiver()) == jordan_quiver()
    K = kronecker_quiver()
    assert reverse_arrow(K, 1).arrows == (("0", "1"), ("1", "0"))


def test_cycles_besides_loops():
    assert not NAMED_QUIVERS["loop-edge"]().has_cycles_besides_loops()
    assert NAMED_QUIVERS["cyclic2"]().has_cycles_besides_loops()


def test_dim_normalization():
    K = kronecker_quiver()
    assert K.dim({"1": 2}) == (0, 2)
    assert jordan_quiver().dim(3) == (3,)
    with pytest.raises(QuiverError):
        K.dim((1, 2, 3))


@st.composite
def quiver_and_vectors(draw):
    n = draw(st.integers(1, 3))
    verts = tuple(str(k) for k in range(n))
    arrows = draw(st.lists(st.tuples(st.sampled_from(verts), st.sampled_from(verts)), max_size=5))
    vec = st.tuples(*[st.integers(0, 4)] * n)
    return Quiver(verts, tuple(arrows)), draw(vec), draw(vec)


@settings(max_examples=100, deadline=None)
@given(quiver_and_vectors())
def test_symmetric_form_properties(data):
    Q, v, w = data
    assert sym_form(Q, v, w) == sym_form(Q, w, v)
    assert sym_form(Q, v, v) == 2 * euler_form(Q, v, v)
    assert sym_form(reverse_all_arrows(Q), v, w) == sym_form(Q, v, w)
    assert euler_form(reverse_all_arrows(Q), v, w) == euler_form(Q, w, v)
