import random

import pytest

from strategies import random_laurent
from torusgw.abelian import lim_lim1, mittag_leffler
from torusgw.completion import (
    Schedule,
    _power_box,
    adic_tower,
    borel_tower,
    cofinality_report,
    hermitian_adic_tower,
    involution_map,
    karoubi_stage,
    quotient_by_power,
    shift0_comparison,
    theorem36_pi0_report,
    transported_quotient,
)
from torusgw.hermitian import PRESETS, preset
from torusgw.ideal_engine import augmentation_ideal


@pytest.mark.parametrize("n", range(1, 7))
def test_t1_closed_form(n):
    q = quotient_by_power("laurent", augmentation_ideal(1), n)
    assert q.stabilized and q.canonical() == (n, ())


@pytest.mark.parametrize("n", range(1, 5))
def test_models_agree_t2(n):
    I = augmentation_ideal(2)
    a = quotient_by_power("laurent", I, n)
    b = quotient_by_power("presented", I, n)
    assert a.canonical() == b.canonical() == (n * (n + 1) // 2, ())


def test_stabilization_spot_check():
    I = augmentation_ideal(2)
    q = quotient_by_power("laurent", I, 3)
    assert _power_box("laurent", I, 3, q.degree_bound + 2).canonical() == q.canonical()


def test_schedule_ceiling_is_extended():
    assert Schedule(start=20).sizes(0) == [20, 22]
    assert Schedule().sizes(3)[0] == 3


@pytest.mark.parametrize("model", ["laurent", "presented"])
def test_adic_tower_hygiene(model):
    tw = adic_tower(model, augmentation_ideal(1), 4)
    assert repr(mittag_leffler(tw.tower, 3)) == "stable_at(0)"
    assert lim_lim1(tw.tower).lim1_vanishes is True


def test_involution_on_quotient_is_an_involution():
    q = quotient_by_power("laurent", augmentation_ideal(1), 3).quotient
    f = involution_map(q, "laurent")
    assert f.compose(f).equals(type(f).identity(f.source))


def test_borel_tower_compatible():
    rng = random.Random(3)
    for t in (1, 2):
        bt = borel_tower(t, 3)
        assert bt.check_compatibility([random_laurent(rng, t, 3) for _ in range(20)])
        assert repr(mittag_leffler(bt.tower, len(bt.tower) - 1)) == "stable_at(0)"


@pytest.mark.parametrize("r", range(0, 4))
def test_cofinality_t1(r):
    c = cofinality_report(1, r)
    assert c.iso and abs(c.determinant) == 1
    assert c.borel_rank == 2 * r + 1


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_transported_filtration_agrees(name):
    T = preset(name)
    adic = hermitian_adic_tower(T, 1, 3).ranks()
    assert adic == [transported_quotient(T, 1, n, 12) for n in range(1, 4)]


def test_shift0_comparison_certificate():
    cmp = shift0_comparison(preset("complex"), 1, 2)
    assert cmp["verdict"] == "iso" and cmp["stable"]
    assert cmp["certificate"] is not None


def test_karoubi_stage_requires_positive_r():
    with pytest.raises(ValueError):
        karoubi_stage(preset("complex"), 1, 0)


def test_karoubi_stage_filtration_indices():
    st = karoubi_stage(preset("complex"), 1, 2)
    assert st.m == {0: 3, 1: 2, 2: 3, 3: 2}


def test_theorem36_small():
    rep = theorem36_pi0_report("finite-odd", 1, 2, 1)
    assert rep.verdict == "iso"
    assert rep.karoubi_reaches() == 0


def test_theorem36_bad_theory_fails_with_certificate():
    cfg = dict(PRESETS["complex"], witt={"0": [3], "1": [], "2": [], "3": []})
    rep = theorem36_pi0_report(cfg, 1, 1, 1)
    assert rep.verdict == "fail" and "axiom" in rep.certificate
