import itertools
import random
import zlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GOOD_PRESETS, check_degree_drop, random_wordpoly, triangular
from opfield import GF, QQ, SymExpr, WordPoly, compare_words, degree, expand_scale, parse_word, parse_wordpoly
from opfield.errors import InputError, UnknownLetter, ZeroCombination
from opfield.symbolic import engine_for
from opfield.words import (
    FROBENIUS,
    EndoWord,
    Letter,
    format_word,
    normalize_word,
    scale,
    sigma_letters,
    sigma_of_word,
)

F1, F2 = Letter.op(1), Letter.op(2)


def test_parse_and_format():
    assert parse_word("F2F1") == (F2, F1)
    assert parse_word("s1^-1 F2") == (Letter.inv(1), F2)
    assert parse_word("Frob") == (FROBENIUS,)
    assert parse_word("") == parse_word("Id") == ()
    assert format_word((F2, F1)) == "F2F1"
    assert format_word(()) == "Id"
    with pytest.raises(InputError):
        parse_word("G3")


def test_frobenius_is_dropped_in_characteristic_zero():
    w = (FROBENIUS, F1)
    assert normalize_word(w, 0) == (F1,)
    assert normalize_word(w, 5) == w


def test_letter_order():
    assert Letter.inv(2) < F1 < F2 < FROBENIUS


ALPHABET = (Letter.inv(1), F1, F2, FROBENIUS)
SMALL_WORDS = [w for r in range(4) for w in itertools.product(ALPHABET, repeat=r)]


def test_compare_words_is_a_total_order():
    ws = SMALL_WORDS
    for u in ws:
        assert compare_words(u, u) == 0
        for v in ws:
            c = compare_words(u, v)
            assert c == -compare_words(v, u)
            assert (c == 0) == (u == v)
    # transitivity, exhaustively on the words of length <= 2 and sampled on all
    short = [w for w in ws if len(w) <= 2]
    for u, v, w in itertools.product(short, repeat=3):
        if compare_words(u, v) < 0 and compare_words(v, w) < 0:
            assert compare_words(u, w) < 0
    rng = random.Random(7)
    for _ in range(20000):
        u, v, w = rng.choice(ws), rng.choice(ws), rng.choice(ws)
        if compare_words(u, v) <= 0 and compare_words(v, w) <= 0:
            assert compare_words(u, w) <= 0


def test_graded_order():
    assert compare_words((F2,), (F1, F1)) == -1
    assert compare_words((F1, F2), (F2, F1)) == -1
    assert compare_words((), (F1,)) == -1


def test_wordpoly_and_degree():
    p = parse_wordpoly("3*F1 + 2 - F2F1 + F2F1", QQ)
    assert p.terms == {(F1,): 3, (): 2}
    assert degree(p) == ((F1,), 3)
    q = parse_wordpoly("F2F1 - 1/2*F1F2", QQ)
    assert degree(q) == ((F2, F1), 1)
    assert degree(q - q + WordPoly({(): 1})) == ((), 1)
    with pytest.raises(ZeroCombination):
        degree(q - q)
    assert str(parse_wordpoly("2*F1 + 1", QQ)) == "2*F1(x) + 1*x"


def test_endo_word_composition():
    s = EndoWord(0, ((1, 1),))
    sinv = EndoWord(0, ((1, -1),))
    assert s.compose(sinv).is_identity
    assert str(s.compose(s)) == "s1^2"
    assert str(EndoWord(1, ((2, -1),))) == "Frobs2^-1"


def test_sigma_of_word_examples():
    t = triangular("nderiv:3")
    assert sigma_of_word((F1,), t).is_identity
    t = triangular("dsigma")
    assert str(sigma_of_word((F2, F2), t)) == "s1^2"
    assert sigma_of_word((), t).is_identity
    assert sigma_of_word((F2, Letter.inv(1)), t).is_identity
    with pytest.raises(UnknownLetter):
        sigma_of_word((Letter.op(3),), t)
    with pytest.raises(UnknownLetter):
        sigma_of_word((Letter.inv(2),), t)


def test_frobenius_in_characteristic_p():
    t = triangular("dsigma", GF(5))
    assert str(sigma_of_word((FROBENIUS, F2), t)) == "Frobs1"
    assert sigma_of_word((FROBENIUS,), triangular("dsigma")).is_identity


def dsigma_words():
    return st.lists(st.sampled_from([F1, F2, Letter.inv(1)]), max_size=4).map(tuple)


@given(dsigma_words(), dsigma_words())
def test_sigma_is_compositional(u, v):
    t = triangular("dsigma")
    assert sigma_of_word(u + v, t) == sigma_of_word(u, t).compose(sigma_of_word(v, t))


# -- expand_scale ----------------------------------------------------------------------


def _sym(poly):
    return {format_word(w): str(c) for w, c in poly.items()}


def test_expand_leibniz():
    e = expand_scale(parse_wordpoly("F1", QQ), "g", triangular("nderiv:3"))
    assert str(e.leading) == "g"
    assert _sym(e.remainder) == {"Id": "F1(g)"}


def test_expand_multiplicative():
    e = expand_scale(parse_wordpoly("F2", QQ), "g", triangular("dsigma"))
    assert str(e.leading) == "F2(g)" and not e.remainder
    assert str(e.sigma) == "s1"


def test_expand_trunc3():
    e = expand_scale(parse_wordpoly("F2", QQ), "g", triangular("trunc3"))
    assert e.degree == (F2,)
    assert str(e.leading) == "g"
    assert _sym(e.remainder) == {"Id": "F2(g)", "F1": "F1(g)"}


def test_expand_zero_combination():
    with pytest.raises(ZeroCombination):
        expand_scale(WordPoly(), "g", triangular("dsigma"))


def test_scale_symbol_clash():
    with pytest.raises(InputError):
        scale(parse_wordpoly("F1", QQ), "x", triangular("dsigma"))


@pytest.mark.parametrize("field", [QQ, GF(5)], ids=["Q", "F5"])
@pytest.mark.parametrize("name", GOOD_PRESETS)
def test_degree_drop(name, field):
    t = triangular(name, field)
    rng = random.Random(zlib.crc32(name.encode()))
    for _ in range(15):
        check_degree_drop(t, random_wordpoly(t, rng))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["dsigma", "trunc3", "nderiv:2"]))
def test_scaling_is_multiplicative_in_g(seed, name):
    t = triangular(name)
    rng = random.Random(seed)
    poly = random_wordpoly(t, rng, max_len=2, terms=3)
    f = t.field
    g1, g2 = SymExpr.gen(f, "g"), SymExpr.gen(f, "h")
    direct = scale(poly, g1 * g2, t)
    nested = WordPoly()
    for w, c in scale(poly, g1, t).items():
        nested = nested + scale(WordPoly({w: f.one}), g2, t).scale(c)
    assert direct == nested
    e = expand_scale(poly, g1 * g2, t)
    theta = e.degree
    eng = engine_for(t)
    sl = sigma_letters(theta, t)
    assert e.leading == eng.apply_word(sl, g1) * eng.apply_word(sl, g2) * e.dominant
