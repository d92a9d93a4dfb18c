import json

import pytest
from hypothesis import given, strategies as st

from strategies import laurent
from torusgw.hermitian import (
    PRESETS,
    CoefficientTheory,
    GWElement,
    TheoryError,
    cindex,
    cindices,
    weight_zero_twist,
    weight_zero_untwist,
    equivariant_class,
    forgetful,
    g0_section,
    gw_mul,
    hermitian_augmentation,
    hyperbolic,
    in_io,
    io_generators,
    is_cindex,
    preset,
    witt_class,
)
from torusgw.ideal_engine import symmetric_basis
from torusgw.torus_ring import LaurentElement, augmentation, involution, to_presented

NAMES = sorted(PRESETS)
theories = st.sampled_from(NAMES).map(preset)


@st.composite
def gw(draw, t, theory, shift=0):
    G = theory.group(shift)
    g = [draw(st.integers(-3, 3)) for _ in range(G.ngens)]
    h = {}
    for _ in range(draw(st.integers(0, 3))):
        lam = tuple(draw(st.integers(-2, 2)) for _ in range(t))
        if is_cindex(lam):
            h[lam] = draw(st.integers(-3, 3))
    return GWElement(theory, t, g, h, shift)


@st.composite
def gw_pair(draw, shift=0):
    T = draw(theories)
    t = draw(st.integers(1, 2))
    return draw(gw(t, T)), draw(gw(t, T, shift))


@given(gw_pair())
def test_forgetful_is_multiplicative(pair):
    a, b = pair
    assert forgetful(a * b) == forgetful(a) * forgetful(b)
    assert forgetful(a + b) == forgetful(a) + forgetful(b)


@given(st.integers(1, 3).flatmap(lambda n: gw_pair(n)))
def test_shifted_action_is_compatible_with_forgetful(pair):
    a, m = pair
    assert forgetful(gw_mul(a, m)) == forgetful(a) * forgetful(m)


@given(theories, laurent())
def test_forget_after_hyperbolic(T, b):
    assert forgetful(hyperbolic(b, T)) == b + involution(b)
    assert hyperbolic(involution(b), T) == hyperbolic(b, T)
    assert T.equal(0, hermitian_augmentation(hyperbolic(b, T)), T.H(0, augmentation(b)))


@given(gw_pair())
def test_witt_class_kills_hyperbolic_ideal(pair):
    a, b = pair
    T = a.theory
    h = hyperbolic(forgetful(a) + LaurentElement.u((1,) * a.rank), T)
    assert not any(witt_class(gw_mul(h, b)))


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("t", [1, 2])
def test_g0_inverts_f0(name, t):
    T = preset(name)
    for p in symmetric_basis(t, 4):
        s = p.element()
        g = g0_section(s, T)
        assert in_io(g)
        assert to_presented(forgetful(g)) == s
        assert g0_section(to_presented(forgetful(g)), T) == g


def test_io_generators_lie_in_io():
    for name in NAMES:
        for g in io_generators(2, preset(name)):
            assert in_io(g)


@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any))
def test_exactly_one_of_pm_weight_is_representative(lam):
    neg = tuple(-x for x in lam)
    assert is_cindex(lam) != is_cindex(neg)
    rep, sign = cindex(lam)
    assert rep in (lam, neg)


def test_cindices_count():
    assert len(cindices(2, 1)) == 4


def test_complex_square():
    C = preset("complex")
    a = hyperbolic(LaurentElement.u((1,)), C)
    assert gw_mul(a, a) == GWElement(C, 1, [2], {(2,): 1})


def test_witt_groups():
    assert preset("complex").witt_factors(0) == (0, (2,))
    assert preset("real").witt_factors(0) == (1, ())
    assert preset("finite-odd").witt_factors(0) == (0, (2, 2))
    for name in NAMES:
        for n in (1, 2, 3):
            assert preset(name).witt_factors(n) == (0, ())


def test_real_rank_signature():
    R = preset("real")
    v = R.from_rank_signature(3, 1)
    assert R.F(0, v) == 3
    assert witt_class(GWElement(R, 1, v)) != (0,)


@pytest.mark.parametrize("name", NAMES)
def test_config_round_trip(name, tmp_path):
    T = preset(name)
    path = tmp_path / "theory.json"
    path.write_text(T.to_json())
    U = CoefficientTheory.load(str(path))
    assert U.to_json() == T.to_json()


def test_broken_theory_rejected():
    cfg = json.loads(json.dumps(PRESETS["complex"]))
    cfg["shifts"]["0"]["hyperbolic"] = [3]
    with pytest.raises(TheoryError):
        CoefficientTheory(cfg)
    cfg = json.loads(json.dumps(PRESETS["complex"]))
    cfg["witt"]["0"] = []
    with pytest.raises(TheoryError):
        CoefficientTheory(cfg)


def test_equivariant_class_and_twist():
    C = preset("complex")
    a = equivariant_class({(1,): 2, (-1,): 2, (0,): 1}, [1], C)
    assert forgetful(a) == LaurentElement(1, {(1,): 2, (-1,): 2, (0,): 1})
    assert weight_zero_untwist(weight_zero_twist(a)) == a
