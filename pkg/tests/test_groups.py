import itertools

import pytest
from hypothesis import given, settings, strategies as st

from autostruct.alphabet import GeneratorAlphabet
from autostruct.errors import GroupError
from autostruct.groups import (FiniteTableBackend, FreeAbelianBackend,
                               FreeGroupBackend, free_reduce,
                               standard_free_abelian, standard_free_group)


@pytest.fixture(scope="module")
def z2():
    return standard_free_abelian([("x", "X"), ("y", "Y")])


@pytest.fixture(scope="module")
def f2():
    return standard_free_group([("x", "X"), ("y", "Y")])


@pytest.fixture(scope="module")
def z6():
    # cyclic group of order 6, generator 1, inverse 5
    table = [[(a + b) % 6 for b in range(6)] for a in range(6)]
    alphabet = GeneratorAlphabet.from_pairs([("x", "X")])
    return FiniteTableBackend(table, 0, alphabet, {"x": 1, "X": 5})


def test_evaluate_examples(z2, f2):
    # [TRIVIAL] commutator vanishes in the abelian group
    assert z2.evaluate("xyXY") == (0, 0)
    assert z2.evaluate("xxy") == (2, 1)
    # [TRIVIAL] free cancellation
    assert f2.canon(f2.evaluate("xXy")) == "y"


def test_word_metric_examples(z2, f2):
    # [TRIVIAL] L1 norm
    assert z2.word_metric((0, 0), (3, -2)) == 5
    assert z2.word_metric((1, 1), (1, 1)) == 0
    # [TRIVIAL] reduced length
    assert f2.norm(f2.evaluate("xyX")) == 3


def test_ball_sizes(z2, f2, z6):
    # [TRIVIAL] center + 4 unit vectors; 1+4+8
    assert len(z2.ball(1)) == 5
    assert len(z2.ball(2)) == 13
    # [DERIVED] reduced words of length <= 2: 1 + 4 + 12
    assert len(f2.ball(2)) == 17
    assert len(z6.ball(3)) == 6


def test_ball_closed_form(z2):
    for k in range(7):
        assert len(z2.ball(k)) == 2 * k * (k + 1) + 1


def test_ball_invariants(z2):
    ball = z2.ball(3)
    for g in ball:
        assert z2.norm(g) <= 3
    assert set(z2.ball(2)) <= set(ball)


def test_ball_membership_boundary(z2):
    ball = z2.ball(2)
    assert (1, 1) in ball and (2, 0) in ball
    assert (2, 1) not in ball


def test_free_reduce():
    alphabet = GeneratorAlphabet.from_pairs([("x", "X"), ("y", "Y")])
    # [TRIVIAL]
    assert free_reduce("xX", alphabet) == ""
    assert free_reduce("xyYX", alphabet) == ""
    assert free_reduce("xxY", alphabet) == "xxY"


def test_inverse_image_pairing_enforced():
    alphabet = GeneratorAlphabet.from_pairs([("x", "X")])
    with pytest.raises(GroupError):
        FreeAbelianBackend(1, alphabet, {"x": (1,), "X": (1,)})


def test_self_inverse_generator_must_be_involution():
    alphabet = GeneratorAlphabet.from_pairs([("a", "a")])
    with pytest.raises(GroupError):
        FreeAbelianBackend(1, alphabet, {"a": (1,)})
    table = [[(a + b) % 2 for b in range(2)] for a in range(2)]
    backend = FiniteTableBackend(table, 0, alphabet, {"a": 1})
    assert backend.evaluate("aa") == 0


def test_finite_table_validation():
    alphabet = GeneratorAlphabet.from_pairs([("x", "X")])
    # element 1 has no inverse
    bad = [[0, 1], [1, 1]]
    with pytest.raises(GroupError):
        FiniteTableBackend(bad, 0, alphabet, {"x": 1, "X": 1})
    # wrong identity
    table = [[(a + b) % 3 for b in range(3)] for a in range(3)]
    with pytest.raises(GroupError):
        FiniteTableBackend(table, 1, alphabet, {"x": 1, "X": 2})


def test_finite_table_metric_by_bfs(z6):
    # distances in the 6-cycle with generators +1/-1
    assert [z6.norm(g) for g in range(6)] == [0, 1, 2, 3, 2, 1]


def test_triangle_inequality_exhaustive(z2, f2, z6):
    for backend in (z2, f2, z6):
        elems = list(backend.ball(2 if backend is f2 else 3))
        for g, h, k in itertools.product(elems[:13], repeat=3):
            assert (backend.word_metric(g, k)
                    <= backend.word_metric(g, h) + backend.word_metric(h, k))


def test_metric_left_invariance(z2, f2):
    for backend in (z2, f2):
        elems = list(backend.ball(2))
        for a, g, h in itertools.product(elems[:9], repeat=3):
            assert backend.word_metric(backend.multiply(a, g),
                                       backend.multiply(a, h)) \
                == backend.word_metric(g, h)


def test_nonstandard_abelian_images_use_bfs_metric():
    alphabet = GeneratorAlphabet.from_pairs([("x", "X")])
    backend = FreeAbelianBackend(1, alphabet, {"x": (2,), "X": (-2,)})
    assert backend.norm((4,)) == 2
    with pytest.raises(GroupError):
        backend.norm((1,))  # odd elements unreachable


word_st = st.text(alphabet="xXyY", max_size=20)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(word_st, word_st)
def test_evaluate_is_monoid_homomorphism(u, v):
    for backend in (standard_free_abelian([("x", "X"), ("y", "Y")]),
                    standard_free_group([("x", "X"), ("y", "Y")])):
        assert backend.evaluate(u + v) == backend.multiply(
            backend.evaluate(u), backend.evaluate(v))


@settings(max_examples=60, deadline=None, derandomize=True)
@given(word_st)
def test_reverse_invert_word_evaluates_to_inverse(w):
    backend = standard_free_group([("x", "X"), ("y", "Y")])
    inv_word = backend.alphabet.reverse_invert_word(w)
    assert backend.evaluate(inv_word) == backend.inverse(backend.evaluate(w))


@settings(max_examples=40, deadline=None, derandomize=True)
@given(word_st)
def test_abelian_metric_closed_form_matches_definition(w):
    backend = standard_free_abelian([("x", "X"), ("y", "Y")])
    g = backend.evaluate(w)
    assert backend.norm(g) == abs(g[0]) + abs(g[1])
