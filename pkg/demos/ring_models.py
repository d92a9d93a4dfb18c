"""Walk through the two models of the representation ring and the Borel truncation."""

from torusgw import (
    PresentedElement,
    borel_project,
    nilpotency_index,
    parse_element,
    to_laurent,
    to_presented,
)
from torusgw.torus_ring import TruncatedElement, format_element

x = PresentedElement.x(1, 0)
y = PresentedElement.y(1, 0)

# the defining relation forces xy = -(x + y)
print("x*y          =", format_element(x * y))
print("x  in Laurent =", format_element(to_laurent(x)))
print("y  in Laurent =", format_element(to_laurent(y)))

a = parse_element("3*x1^2*y2 - 2")
b = parse_element("x2 + y1^3", 2)
print("a*b          =", format_element(a * b))
assert to_laurent(a * b) == to_laurent(a) * to_laurent(b)
print("u1^-1 - 1    ->", format_element(to_presented(parse_element("u1^-1 - 1"))))

for r in range(4):
    print(f"theta_{r}(x) =", format_element(borel_project(x, r)))

z = TruncatedElement.z(1, 1, 0)
print("nilpotency index of z in B_1:", nilpotency_index(z))
