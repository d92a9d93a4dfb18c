import pytest
from hypothesis import given, settings, strategies as st

from torusgw.ideal_engine import (
    IdealSpec,
    Inconclusive,
    MembershipWitness,
    augmentation_ideal,
    find_power_inclusion,
    hermitian_generators,
    hermitian_ideal,
    is_hermitian,
    lemma27_decompose,
    member,
    power_generators,
    symmetric_basis,
)
from torusgw.torus_ring import PresentedElement, augmentation, involution, parse_element


def P(s, t=1):
    return parse_element(s, t)


def test_simple_membership():
    w = member(P("x1 + y1"), hermitian_ideal(1), 2)
    assert isinstance(w, MembershipWitness)
    assert w.recombine() == P("x1 + y1")


def test_augmentation_obstruction_refutes():
    res = member(P("1"), augmentation_ideal(1), 4)
    assert isinstance(res, Inconclusive) and res.refuted
    assert not res


def test_bound_below_required_degree():
    with pytest.raises(ValueError):
        member(P("x1^5"), augmentation_ideal(1), 2)


def test_bad_witness_is_a_defect():
    with pytest.raises(AssertionError):
        MembershipWitness(P("x1"), (P("x1 + y1"),), [P("1")])


def test_generator_count():
    for t in (1, 2, 3):
        assert len(hermitian_generators(t)) == 2 ** t - 1


@given(st.integers(1, 3).flatmap(lambda t: st.tuples(st.tuples(*[st.integers(0, 4)] * t),
                                                    st.tuples(*[st.integers(0, 4)] * t))))
@settings(max_examples=60)
def test_lemma27_sound(pair):
    lam, mu = pair
    mu = tuple(0 if a else b for a, b in zip(lam, mu))
    if not any(lam + mu):
        return
    w = lemma27_decompose(lam, mu)
    t = len(lam)
    target = PresentedElement(t, {(lam, mu): 1}) + PresentedElement(t, {(mu, lam): 1})
    assert w.recombine() == target


def test_lemma27_rejects_overlapping_support():
    with pytest.raises(ValueError):
        lemma27_decompose((1,), (1,))


@pytest.mark.parametrize("t", [1, 2])
def test_symmetric_basis_members(t):
    I = hermitian_ideal(t)
    for p in symmetric_basis(t, 4 if t == 2 else 6):
        s = p.element()
        assert is_hermitian(s)
        assert member(s, I, 10)


def test_symmetric_basis_orientation():
    assert symmetric_basis(1, 1)[0].element() == P("x1 + y1")


def test_monotone_in_bound():
    I = hermitian_ideal(1)
    f = P("x1^2 + y1^2")
    for D in (4, 6, 8):
        assert member(f, I, D)


def test_power_generators_in_augmentation_ideal():
    for g in power_generators(augmentation_ideal(2), 3).generators:
        assert augmentation(g) == 0


def test_filtration_t1():
    res = find_power_inclusion(augmentation_ideal(1), hermitian_ideal(1), 4, 6)
    assert res and res.c == 2
    got = {w.target: w.coefficients[0] for w in res.witnesses}
    assert got[P("x1^2")] == P("x1 + 1")
    assert got[P("y1^2")] == P("y1 + 1")
    assert got[P("x1*y1")] == P("-1")


def test_involution_fixes_hermitian_generators():
    for g in hermitian_generators(2):
        assert involution(g) == g and augmentation(g) == 0


def test_ideal_spec_round_trip():
    I = IdealSpec.from_literals(["x1 + y1", "x1^2"])
    assert IdealSpec.from_literals(I.to_json()) == I
