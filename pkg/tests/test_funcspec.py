import numpy as np
import pytest
from hypothesis import given, strategies as st

from sdlab.errors import DomainError
from sdlab.funcspec import (
    Affine,
    AffineCombo,
    AtPower,
    Compose,
    FuncSpecSyntaxError,
    Log,
    Log1pPow,
    Pow,
    Sqrt,
    check_membership,
    evaluate,
    parse,
)

GRID = 2.0 ** np.linspace(-10, 10, 81)

exponents = st.sampled_from([0.25, 0.5, 1.0, 1.5, 2.0, 3.0])
primitives = st.one_of(
    st.builds(Pow, exponents),
    st.builds(Log1pPow, exponents),
    st.just(Sqrt()),
    st.builds(lambda s, c: Affine(s, c), st.sampled_from([0.5, 1.0, 2.0]), st.sampled_from([0.0, 1.0])),
)


def _extend(children):
    outers = st.one_of(st.builds(Pow, st.sampled_from([1.0, 1.5, 2.0, 3.0])), st.builds(Affine, st.sampled_from([0.0, 1.0, 2.0])))
    return st.one_of(
        st.builds(Compose, outers, children),
        st.builds(AtPower, children, st.sampled_from([0.5, 1.0, 2.0, 3.0])),
        st.builds(
            lambda cs, ps: AffineCombo(tuple(cs[: len(ps)]), tuple(ps)),
            st.lists(st.sampled_from([0.25, 0.5, 1.0, 2.0]), min_size=3, max_size=3),
            st.lists(children, min_size=1, max_size=3),
        ),
    )


specs = st.recursive(primitives, _extend, max_leaves=4)


def test_eval_fixtures():
    assert evaluate(Pow(2), 3) == 9
    assert evaluate(Log1pPow(1), 0) == 0
    assert evaluate(Compose(Pow(2), Pow(1)), 3) == 9
    assert evaluate(Sqrt(), 9) == 3
    assert evaluate(AtPower(Log1pPow(1), 2), 1) == pytest.approx(np.log(2))
    np.testing.assert_allclose(Pow(2)(np.array([1.0, 2.0])), [1, 4])


def test_domain_errors():
    with pytest.raises(DomainError):
        Pow(2)(-1.0)
    with pytest.raises(DomainError):
        Log()(0.0)
    with pytest.raises(DomainError):
        Pow(1)(np.nan)
    for bad in (lambda: Pow(0), lambda: Log1pPow(-1), lambda: AtPower(Pow(1), 0),
                lambda: AffineCombo((0.0,), (Pow(1),)), lambda: AffineCombo((-1.0, 2.0), (Pow(1), Log())),
                lambda: Compose(Log1pPow(1), Pow(1)), lambda: Compose(Pow(0.5), Pow(1)),
                lambda: Compose(Affine(-1), Pow(1))):
        with pytest.raises(ValueError):
            bad()


def test_membership_fixtures():
    assert check_membership(Pow(0.5))
    m = check_membership(Affine(-1.0))
    assert not m and "decreasing" in m.witness
    assert check_membership(Log())
    assert not Log().strictly_convex_after_exp
    assert Pow(0.5).strictly_convex_after_exp and Log1pPow(2).strictly_convex_after_exp


def test_membership_catches_non_convex_after_exp():
    # log(log(1 + t)) is increasing, but after exp it is concave
    class LogLog1p(Log1pPow):
        def _eval(self, t):
            return np.log(np.log1p(t))

    m = check_membership(LogLog1p(1.0))
    assert not m and "convex" in m.witness


def test_strictness_rules():
    assert not AffineCombo((1.0, 0.0), (Log(), Pow(2))).strictly_convex_after_exp
    assert AffineCombo((1.0, 0.5), (Log(), Pow(2))).strictly_convex_after_exp
    # affine outer with positive slope preserves the inner strictness
    assert Compose(Affine(2.0, 1.0), Pow(1)).strictly_convex_after_exp
    assert not Compose(Affine(2.0), Log()).strictly_convex_after_exp
    # strictly convex outer, strictly increasing inner
    assert Compose(Pow(2), Log()).strictly_convex_after_exp
    assert not Compose(Affine(0.0, 1.0), Pow(2)).strictly_convex_after_exp
    assert not AtPower(Log(), 2).strictly_convex_after_exp


@given(specs)
def test_round_trip_through_text(f):
    g = parse(str(f))
    assert g == f
    assert str(g) == str(f)


@given(specs)
def test_class_closure(f):
    assert check_membership(f, GRID), str(f)
    for p in (0.5, 1.0, 2.0, 3.0):
        assert check_membership(AtPower(f, p), GRID), f"atpow({f},{p})"
    for q in (1.0, 2.0, 3.0):
        assert check_membership(Compose(Pow(q), f), GRID), f"compose(pow:{q},{f})"


@given(specs, st.lists(st.floats(0, 1e3), min_size=1, max_size=20))
def test_monotone_evaluation(f, ts):
    t = np.sort(np.asarray(ts))[::-1]
    v = f(t)
    assert np.all(np.diff(v) <= 1e-12 * np.maximum(1, np.abs(v[1:])))


def test_parse_examples():
    assert parse("pow:2") == Pow(2)
    assert parse("log1p_pow:1.5") == Log1pPow(1.5)
    assert parse("log") == Log()
    assert parse("sum:0.5*pow:1+0.5*log1p_pow:2") == AffineCombo((0.5, 0.5), (Pow(1), Log1pPow(2)))
    assert parse(" compose(pow:2,sqrt) ") == Compose(Pow(2), Sqrt())
    assert parse("atpow(log1p_pow:1,3)") == AtPower(Log1pPow(1), 3)
    assert parse("affine:2:-1") == Affine(2, -1)


@pytest.mark.parametrize("text, offset", [
    ("pow:", 4),
    ("pow:2x", 5),
    ("exp", 0),
    ("sum:0.5*pow:1+", 14),
    ("compose(pow:2;sqrt)", 13),
    ("pow:-1", 0),
    ("sum:-1*pow:1", 4),
])
def test_parse_errors_cite_offset(text, offset):
    with pytest.raises(FuncSpecSyntaxError) as exc:
        parse(text)
    assert exc.value.offset == offset
    assert f"at byte {offset}" in str(exc.value)
