"""Hermitian side: the forgetful/hyperbolic maps, then the full pi_0 comparison."""

import json

from torusgw import preset, theorem36_pi0_report
from torusgw.hermitian import forgetful, g0_section, gw_mul, hyperbolic, witt_class
from torusgw.ideal_engine import find_power_inclusion, hermitian_ideal, augmentation_ideal
from torusgw.torus_ring import LaurentElement, format_element, parse_element

C = preset("complex")
a = hyperbolic(LaurentElement.u((1,)), C)
print("H(u)      =", a)
print("H(u)^2    =", gw_mul(a, a))
print("F(H(u)^2) =", format_element(forgetful(gw_mul(a, a))))
print("Witt class of H(u)*H(u):", witt_class(gw_mul(a, a)))

s = parse_element("x1^2 + y1^2")
print("G0(x^2 + y^2) =", g0_section(s, C))

inc = find_power_inclusion(augmentation_ideal(1), hermitian_ideal(1), 4, 8)
print(f"I^{inc.c} lies in the ideal generated by x + y:")
for w in inc.witnesses:
    print("   ", format_element(w.target), "=", f"({format_element(w.coefficients[0])}) * (x1 + y1)")

for name in ("complex", "real", "finite-odd"):
    rep = theorem36_pi0_report(name, 1, 4, 4)
    stages = [(s["n"], s["top"], s["verdict"]) for s in rep.stages]
    print(f"{name:>10}: verdict={rep.verdict}  stages={stages}  karoubi through i={rep.karoubi_reaches()}")
    print("            filtration indices per shift:", json.dumps(rep.karoubi[-1]["io_powers"]))
