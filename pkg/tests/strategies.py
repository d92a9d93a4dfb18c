import random

from hypothesis import strategies as st

from torusgw.torus_ring import LaurentElement, PresentedElement, TruncatedElement

coeffs = st.integers(-5, 5)


def vec(t, lo, hi):
    return st.tuples(*[st.integers(lo, hi)] * t)


@st.composite
def presented(draw, t=None, max_deg=4, max_terms=4):
    t = t or draw(st.integers(1, 2))
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        lam = draw(vec(t, 0, max_deg))
        mu = tuple(0 if a else draw(st.integers(0, max_deg)) for a in lam)
        terms[(lam, mu)] = draw(coeffs)
    return PresentedElement(t, terms)


@st.composite
def laurent(draw, t=None, box=3, max_terms=4):
    t = t or draw(st.integers(1, 2))
    terms = {draw(vec(t, -box, box)): draw(coeffs) for _ in range(draw(st.integers(0, max_terms)))}
    return LaurentElement(t, terms)


@st.composite
def presented_pair(draw, max_deg=4):
    t = draw(st.integers(1, 2))
    return draw(presented(t, max_deg)), draw(presented(t, max_deg))


def random_presented(rng: random.Random, t: int, max_deg: int, n_terms: int = 3) -> PresentedElement:
    terms = {}
    for _ in range(n_terms):
        lam = tuple(rng.randint(0, max_deg) for _ in range(t))
        mu = tuple(0 if a else rng.randint(0, max_deg) for a in lam)
        terms[(lam, mu)] = rng.randint(-5, 5)
    return PresentedElement(t, terms)


def random_laurent(rng: random.Random, t: int, box: int, n_terms: int = 3) -> LaurentElement:
    return LaurentElement(t, {tuple(rng.randint(-box, box) for _ in range(t)): rng.randint(-5, 5)
                              for _ in range(n_terms)})


def random_nilpotent(rng: random.Random, t: int, r: int) -> TruncatedElement:
    terms = {}
    for _ in range(rng.randint(1, 4)):
        e = tuple(rng.randint(0, 2 * r) for _ in range(t))
        if any(e):
            terms[e] = rng.randint(-5, 5)
    return TruncatedElement(t, r, terms)
