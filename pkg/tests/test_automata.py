import itertools

import pytest
from hypothesis import given, settings, strategies as st

from autostruct.alphabet import GeneratorAlphabet
from autostruct.automata import (FiniteAutomaton, compile_regex, equivalent,
                                 loop_language, parse_regex, product,
                                 reverse_invert, reverse_invert_word)
from autostruct.errors import AutomatonError, RegexError


@pytest.fixture(scope="module")
def ab():
    return GeneratorAlphabet.from_pairs([("x", "X"), ("y", "Y")])


@pytest.fixture(scope="module")
def z2_lang(ab):
    return compile_regex("(x*|X*)(y*|Y*)(xyXY)*", ab)


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        for tup in itertools.product(alphabet.symbols, repeat=n):
            yield "".join(tup)


def test_regex_membership_examples(z2_lang):
    # [DERIVED] x^2 y^1 then one loop
    assert z2_lang.member("xxyxyXY")
    # [DERIVED] no parse: y before the x block
    assert not z2_lang.member("yx")
    assert z2_lang.member("")
    assert z2_lang.member("Xy")


def test_empty_regex_accepts_only_epsilon(ab):
    # [TRIVIAL]
    empty = compile_regex("", ab)
    assert empty.member("")
    assert not empty.member("x")


def test_equivalence_example(ab):
    # [TRIVIAL] both are x+
    assert equivalent(compile_regex("x*x", ab), compile_regex("xx*", ab))
    assert not equivalent(compile_regex("x*", ab), compile_regex("xx*", ab))


def test_member_rejects_odd_repeat(ab):
    # [TRIVIAL] odd length
    assert not compile_regex("(xx)*", ab).member("xxx")


def test_enumerate_words_order(ab):
    lang = compile_regex("(x|y)*", ab)
    assert lang.enumerate_words(1) == ["", "x", "y"]
    words = lang.enumerate_words(3)
    assert words == sorted(set(words), key=lambda w: (len(w), [ab.index(c) for c in w]))


def test_enumerate_words_matches_membership(ab, z2_lang):
    listed = set(z2_lang.enumerate_words(5))
    for w in all_words(ab, 5):
        assert (w in listed) == z2_lang.member(w)


def test_determinize_preserves_language(ab, z2_lang):
    dfa = z2_lang.determinize()
    assert dfa.deterministic
    for w in z2_lang.enumerate_words(6):
        assert dfa.member(w)
    assert equivalent(dfa, z2_lang)


def test_trim_keeps_language(ab, z2_lang):
    trimmed = z2_lang.trim_dfa()
    assert equivalent(trimmed, z2_lang)
    assert trimmed.deterministic


def test_complement(ab):
    lang = compile_regex("x*", ab)
    comp = lang.complement()
    for w in all_words(ab, 3):
        assert comp.member(w) != lang.member(w)


def test_product_intersection(ab):
    a = compile_regex("x*y*", ab)
    b = compile_regex("(xy)*|x*", ab)
    both = product(a.determinize(), b.determinize())
    for w in all_words(ab, 4):
        assert both.member(w) == (a.member(w) and b.member(w))


def test_reverse_invert_simple(ab):
    # [TRIVIAL] (x^n y)^-1 = Y X^n
    lang = compile_regex("x*y", ab)
    inv = reverse_invert(lang)
    assert equivalent(inv, compile_regex("YX*", ab))


def test_reverse_invert_epsilon(ab):
    # [TRIVIAL] identity case
    eps = compile_regex("", ab)
    assert equivalent(reverse_invert(eps), eps)


def test_reverse_invert_round_trip(ab, z2_lang):
    assert equivalent(reverse_invert(reverse_invert(z2_lang)), z2_lang)


def test_reverse_invert_membership_consistency(ab, z2_lang):
    inv = reverse_invert(z2_lang)
    for w in all_words(ab, 5):
        assert z2_lang.member(w) == inv.member(reverse_invert_word(w, ab))


def test_z2_inverse_language_closed_form(ab, z2_lang):
    # [DERIVED] hand-built expression for the reversed-inverted language
    hand = compile_regex("(yxYX)*(y*|Y*)(x*|X*)", ab)
    assert equivalent(reverse_invert(z2_lang), hand)


def test_loop_language(ab, z2_lang):
    dfa = z2_lang.trim_dfa()
    # find the state reached by "xyXY" from the start; its loop language
    # accepts the loop word
    state = dfa.initial[0]
    for ch in "xyXY":
        state = dfa.targets(state, ch)[0]
    loops = loop_language(dfa, state)
    assert loops.member("xyXY")
    assert not loops.member("")


def test_loop_language_self_loop(ab):
    auto = FiniteAutomaton(ab, 1, [0], [0], [(0, "x", 0)])
    loops = loop_language(auto, 0)
    assert loops.member("x") and loops.member("xxx")
    assert not loops.member("")


def test_regex_syntax_errors(ab):
    for bad in ("(", "x**y(", "*x", "x|)", "z"):
        with pytest.raises(RegexError):
            parse_regex(bad, ab)


def test_trailing_alternation_is_epsilon(ab):
    # an empty alternand is the empty word, not a syntax error
    lang = compile_regex("x|", ab)
    assert lang.member("") and lang.member("x") and not lang.member("y")


def test_automaton_validation(ab):
    with pytest.raises(AutomatonError):
        FiniteAutomaton(ab, 1, [0], [2], [])
    with pytest.raises(AutomatonError):
        FiniteAutomaton(ab, 1, [0], [0], [(0, "q", 0)])


word_st = st.text(alphabet="xXyY", max_size=8)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(word_st)
def test_reverse_invert_word_involution_property(w):
    ab = GeneratorAlphabet.from_pairs([("x", "X"), ("y", "Y")])
    assert reverse_invert_word(reverse_invert_word(w, ab), ab) == w


@settings(max_examples=40, deadline=None, derandomize=True)
@given(word_st)
def test_reverse_invert_automaton_agrees_with_word_level(w):
    ab = GeneratorAlphabet.from_pairs([("x", "X"), ("y", "Y")])
    lang = compile_regex("(x*|X*)(y*|Y*)(xyXY)*", ab)
    assert lang.member(w) == reverse_invert(lang).member(reverse_invert_word(w, ab))
