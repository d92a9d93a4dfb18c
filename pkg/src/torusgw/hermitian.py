"""Equivariant Grothendieck-Witt groups of a split torus over a point.

An element of ``GW^[n]`` of the torus is a pair ``(g, h)``: ``g`` lives in the
base group ``GW^[n]_0(k)`` and ``h`` assigns a K-theory class (an integer) to
each weight ``lam`` whose first nonzero entry is positive; ``h[lam]`` stands
for the hyperbolic class of that class placed in weight ``lam``.

The base data (``GW^[n]_0(k)`` for n mod 4, forgetful and hyperbolic maps,
Witt groups) is supplied by a :class:`CoefficientTheory`.  Three presets ship
with the package: ``complex``, ``real`` and ``finite-odd``.  Their values are
standard literature input, encoded as configuration and checked against the
axioms when loaded.

>>> C = preset("complex")
>>> a = hyperbolic(LaurentElement.u((1,)), C)
>>> a
GWElement(shift=0, g=[0], h={(1,): 1})
>>> gw_mul(a, a)
GWElement(shift=0, g=[2], h={(2,): 1})
"""

from __future__ import annotations

import json
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .abelian import FGAbelianGroup, Homomorphism
from .linalg import solve_integer
from .torus_ring import (
    LaurentElement,
    PresentedElement,
    RankMismatch,
    augmentation,
    involution,
    to_laurent,
)

__all__ = [
    "TheoryError",
    "CoefficientTheory",
    "preset",
    "PRESETS",
    "is_cindex",
    "cindex",
    "cindices",
    "GWElement",
    "gw_mul",
    "hermitian_augmentation",
    "hyperbolic",
    "forgetful",
    "g0_section",
    "witt_class",
    "equivariant_class",
    "weight_zero_twist",
    "weight_zero_untwist",
    "io_generators",
    "in_io",
]

Weight = Tuple[int, ...]


class TheoryError(ValueError):
    pass


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


class _Shift:
    def __init__(self, n: int, spec: Mapping, gw0: Optional["_Shift"]):
        self.n = n
        gens = list(spec.get("generators", []))
        self.names = gens
        self.group = FGAbelianGroup(len(gens), spec.get("relations", []), names=gens)
        self.forgetful = list(spec.get("forgetful", [0] * len(gens)))
        self.hyperbolic = list(spec.get("hyperbolic", [0] * len(gens)))
        if len(self.forgetful) != len(gens) or len(self.hyperbolic) != len(gens):
            raise TheoryError(f"shift {n}: forgetful/hyperbolic length must match the generators")
        self.unit = list(spec["unit"]) if "unit" in spec else None
        self.mult = spec.get("mult")
        self.action = spec.get("action")


class CoefficientTheory:
    """Base-field input: ``GW^[n]_0(k)`` for n mod 4 with ``F``, ``H`` and Witt groups.

    ``K_0(k) = Z`` throughout; ``duality`` is the sign by which the duality acts
    on it.  Configuration keys::

        name, duality,
        shifts: {"0": {generators, relations, forgetful, hyperbolic, unit, mult},
                 "1".."3": {generators, relations, forgetful, hyperbolic[, action]}},
        witt:   {"0".."3": invariant factors, 0 meaning Z}
    """

    def __init__(self, config: Mapping):
        self.config = json.loads(json.dumps(config))
        self.name = config.get("name", "custom")
        self.source = config.get("source", "configuration")
        self.duality = int(config.get("duality", 1))
        if self.duality not in (1, -1):
            raise TheoryError("duality on K_0 = Z must be +1 or -1")
        shifts = config.get("shifts", {})
        if "0" not in shifts and 0 not in shifts:
            raise TheoryError("shift 0 is required")
        get = lambda n: shifts.get(str(n), shifts.get(n, {}))
        self.shifts = {0: _Shift(0, get(0), None)}
        for n in (1, 2, 3):
            self.shifts[n] = _Shift(n, get(n), self.shifts[0])
        s0 = self.shifts[0]
        if s0.unit is None or s0.mult is None:
            raise TheoryError("shift 0 needs a unit and a multiplication table")
        witt = config.get("witt", {})
        self.witt_table = {n: list(witt.get(str(n), witt.get(n, []))) for n in range(4)}
        self._derive_actions()
        self.validate()

    # -- basic maps ----------------------------------------------------------
    def group(self, n: int = 0) -> FGAbelianGroup:
        return self.shifts[n % 4].group

    @property
    def gw0(self) -> FGAbelianGroup:
        return self.group(0)

    def normalize(self, n: int, v: Sequence[int]) -> List[int]:
        G = self.group(n)
        if G.ngens == 0:
            return []
        return G.lift(G.coords(list(v)))

    def zero(self, n: int = 0) -> List[int]:
        return [0] * self.group(n).ngens

    def one(self) -> List[int]:
        return self.normalize(0, self.shifts[0].unit)

    def F(self, n: int, v: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.shifts[n % 4].forgetful, v))

    def H(self, n: int, k: int) -> List[int]:
        return self.normalize(n, [k * a for a in self.shifts[n % 4].hyperbolic])

    def add(self, n: int, a: Sequence[int], b: Sequence[int]) -> List[int]:
        return self.normalize(n, [x + y for x, y in zip(a, b)])

    def equal(self, n: int, a: Sequence[int], b: Sequence[int]) -> bool:
        return self.group(n).equal(list(a), list(b))

    def mul(self, a: Sequence[int], b: Sequence[int]) -> List[int]:
        return self.act(0, a, b)

    def act(self, n: int, g: Sequence[int], m: Sequence[int]) -> List[int]:
        """Action of ``g`` in GW^[0]_0 on ``m`` in GW^[n]_0."""
        table = self.shifts[0].mult if n % 4 == 0 else self.shifts[n % 4].action
        size = self.group(n).ngens
        out = [0] * size
        for i, a in enumerate(g):
            if a:
                for j, b in enumerate(m):
                    if b:
                        for k, c in enumerate(table[i][j]):
                            out[k] += a * b * c
        return self.normalize(n, out)

    def basis(self, n: int) -> List[List[int]]:
        size = self.group(n).ngens
        return [[int(i == j) for j in range(size)] for i in range(size)]

    def _derive_actions(self):
        for n in (1, 2, 3):
            s = self.shifts[n]
            if s.action is not None or s.group.ngens == 0:
                if s.action is None:
                    s.action = [[] for _ in range(self.gw0.ngens)]
                continue
            # g * H(a) = H(F(g) a); needs H onto, which is checked here
            G = s.group
            hc = G.coords(s.hyperbolic)
            mods = G.mods
            A = [[hc[r]] + [m if r == c else 0 for c, m in enumerate(mods)] for r in range(len(mods))]
            pre = []
            for j in range(G.ngens):
                e = [int(i == j) for i in range(G.ngens)]
                sol = solve_integer(A, list(G.coords(e)), 1 + len(mods)) if mods else [0]
                if sol is None:
                    raise TheoryError(f"shift {n}: hyperbolic map is not onto; give an explicit action table")
                pre.append(sol[0])
            s.action = [[[self.F(0, gi) * pre[j] * a for a in s.hyperbolic]
                         for j in range(G.ngens)] for gi in self.basis(0)]

    def witt_group(self, n: int) -> Tuple[FGAbelianGroup, Homomorphism]:
        """Cokernel of the hyperbolic map into GW^[n]_0 and the projection."""
        n %= 4
        Z = FGAbelianGroup(1)
        Hm = Homomorphism(Z, self.group(n), [self.shifts[n].hyperbolic])
        return Hm.cokernel()

    def witt_class(self, n: int, v: Sequence[int]) -> Tuple[int, ...]:
        W, proj = self.witt_group(n)
        return W.coords(proj.apply(list(v)))

    # -- axioms --------------------------------------------------------------
    def validate(self) -> None:
        d = self.duality
        for n in range(4):
            s = self.shifts[n]
            G = s.group
            for r in G.relations:
                if self.F(n, [r.get(i, 0) for i in range(G.ngens)]):
                    raise TheoryError(f"shift {n}: forgetful map does not kill relation {r}")
            if self.F(n, self.H(n, 1)) != 1 + _sign(n) * d:
                raise TheoryError(f"shift {n}: F o H differs from 1 + (-1)^n d")
            if not self.equal(n, self.H(n, _sign(n) * d), self.H(n, 1)):
                raise TheoryError(f"shift {n}: H is not invariant under the shifted duality")
            for g in self.basis(0):
                for k in (1,):
                    if not self.equal(n, self.act(n, g, self.H(n, k)), self.H(n, self.F(0, g) * k)):
                        raise TheoryError(f"shift {n}: projection formula fails for generator {g}")
                for m in self.basis(n):
                    if self.F(n, self.act(n, g, m)) != self.F(0, g) * self.F(n, m):
                        raise TheoryError(f"shift {n}: forgetful map is not linear over GW^[0]")
                    for g2 in self.basis(0):
                        lhs = self.act(n, self.mul(g, g2), m)
                        rhs = self.act(n, g, self.act(n, g2, m))
                        if not self.equal(n, lhs, rhs):
                            raise TheoryError(f"shift {n}: action is not associative")
            for m in self.basis(n):
                if not self.equal(n, self.act(n, self.one(), m), m):
                    raise TheoryError(f"shift {n}: unit does not act trivially")
            for r in G.relations:
                rv = [r.get(i, 0) for i in range(G.ngens)]
                for g in self.basis(0):
                    if not G.is_zero(self.act(n, g, rv)):
                        raise TheoryError(f"shift {n}: action does not respect relations")
            expected = FGAbelianGroup.from_factor_list(self.witt_table[n]).canonical()
            if self.witt_group(n)[0].canonical() != expected:
                raise TheoryError(f"W^[{n}] table {self.witt_table[n]} differs from the cokernel of H")
        R0 = self.gw0
        one = self.one()
        if self.F(0, one) != 1:
            raise TheoryError("forgetful map does not preserve the unit")
        for a in self.basis(0):
            for b in self.basis(0):
                if not self.equal(0, self.mul(a, b), self.mul(b, a)):
                    raise TheoryError("GW_0 multiplication is not commutative")
                if self.F(0, self.mul(a, b)) != self.F(0, a) * self.F(0, b):
                    raise TheoryError("forgetful map is not multiplicative")
            for r in R0.relations:
                rv = [r.get(i, 0) for i in range(R0.ngens)]
                if not R0.is_zero(self.mul(a, rv)):
                    raise TheoryError("GW_0 multiplication does not respect relations")

    # -- serialization -------------------------------------------------------
    def to_json(self) -> str:
        return json.dumps(self.config, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CoefficientTheory":
        return cls(json.loads(text))

    @classmethod
    def load(cls, path: str) -> "CoefficientTheory":
        with open(path) as fh:
            return cls(json.load(fh))

    def witt_factors(self, n: int) -> Tuple[int, Tuple[int, ...]]:
        return FGAbelianGroup.from_factor_list(self.witt_table[n % 4]).canonical()

    def from_rank_signature(self, rank: int, signature: int) -> List[int]:
        """GW_0 element of the real preset given by rank and signature."""
        if self.name != "real":
            raise TheoryError("rank/signature coordinates exist only for the real preset")
        if (rank + signature) % 2:
            raise ValueError("rank and signature must have the same parity")
        return [(rank + signature) // 2, (rank - signature) // 2]

    def __repr__(self):
        return f"CoefficientTheory({self.name!r})"


_SHIFTED = {
    "1": {"generators": [], "forgetful": [], "hyperbolic": []},
    "2": {"generators": ["h"], "forgetful": [2], "hyperbolic": [1]},
    "3": {"generators": ["e"], "relations": [[2]], "forgetful": [0], "hyperbolic": [1]},
}

PRESETS: Dict[str, Dict] = {
    "complex": {
        "name": "complex",
        "source": "literature",
        "duality": 1,
        "shifts": dict(_SHIFTED, **{"0": {
            "generators": ["<1>"], "forgetful": [1], "hyperbolic": [2],
            "unit": [1], "mult": [[[1]]]}}),
        "witt": {"0": [2], "1": [], "2": [], "3": []},
    },
    "real": {
        "name": "real",
        "source": "literature",
        "duality": 1,
        "shifts": dict(_SHIFTED, **{"0": {
            "generators": ["<1>", "<-1>"], "forgetful": [1, 1], "hyperbolic": [1, 1],
            "unit": [1, 0], "mult": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]}}),
        "witt": {"0": [0], "1": [], "2": [], "3": []},
    },
    "finite-odd": {
        "name": "finite-odd",
        "source": "literature (q = 1 mod 4)",
        "duality": 1,
        "shifts": dict(_SHIFTED, **{"0": {
            "generators": ["<1>", "<a>"], "relations": [[2, -2]],
            "forgetful": [1, 1], "hyperbolic": [2, 0],
            "unit": [1, 0], "mult": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]}}),
        "witt": {"0": [2, 2], "1": [], "2": [], "3": []},
    },
}

_preset_cache: Dict[str, CoefficientTheory] = {}


def preset(name: str) -> CoefficientTheory:
    if name not in PRESETS:
        raise KeyError(f"unknown coefficient theory {name!r}; choose from {sorted(PRESETS)}")
    if name not in _preset_cache:
        _preset_cache[name] = CoefficientTheory(PRESETS[name])
    return _preset_cache[name]


# ---------------------------------------------------------------------------
# weights

def is_cindex(lam: Sequence[int]) -> bool:
    for a in lam:
        if a:
            return a > 0
    return False


def cindex(lam: Sequence[int]) -> Tuple[Weight, int]:
    """Representative of ``{lam, -lam}`` and +1/-1 recording whether it was negated."""
    lam = tuple(lam)
    if not any(lam):
        raise ValueError("the zero weight has no representative")
    return (lam, 1) if is_cindex(lam) else (tuple(-a for a in lam), -1)


def cindices(t: int, box: int) -> List[Weight]:
    """Representatives with entries in ``[-box, box]``."""
    return [lam for lam in product(range(-box, box + 1), repeat=t) if is_cindex(lam)]


# ---------------------------------------------------------------------------
# elements

class GWElement:
    """``g + sum_lam H_n(h[lam] at weight lam)`` in shift ``n``."""

    __slots__ = ("theory", "rank", "shift", "g", "h")

    def __init__(self, theory: CoefficientTheory, rank: int, g: Optional[Sequence[int]] = None,
                 h: Optional[Mapping[Weight, int]] = None, shift: int = 0):
        self.theory = theory
        self.rank = rank
        self.shift = shift % 4
        self.g = theory.normalize(self.shift, g if g is not None else theory.zero(self.shift))
        hh = {}
        for lam, c in (h or {}).items():
            lam = tuple(lam)
            if len(lam) != rank:
                raise RankMismatch("weight length differs from rank")
            if not is_cindex(lam):
                raise ValueError(f"{lam} is not a representative weight")
            if c:
                hh[lam] = int(c)
        self.h = dict(sorted(hh.items()))

    @classmethod
    def _collect(cls, theory, rank, shift, g, pieces: Iterable[Tuple[Weight, int]]) -> "GWElement":
        n = shift % 4
        eps = _sign(n) * theory.duality
        g = list(g)
        h: Dict[Weight, int] = {}
        for nu, c in pieces:
            if not c:
                continue
            if not any(nu):
                g = [a + b for a, b in zip(g, theory.H(n, c))]
            elif is_cindex(nu):
                h[nu] = h.get(nu, 0) + c
            else:
                nu = tuple(-a for a in nu)
                h[nu] = h.get(nu, 0) + eps * c
        return cls(theory, rank, g, h, n)

    def _same(self, other: "GWElement"):
        if self.theory is not other.theory:
            raise TheoryError("elements come from different coefficient theories")
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")

    def __add__(self, other):
        self._same(other)
        if self.shift != other.shift:
            raise ValueError("cannot add elements of different shifts")
        h = dict(self.h)
        for k, v in other.h.items():
            h[k] = h.get(k, 0) + v
        return GWElement(self.theory, self.rank, [a + b for a, b in zip(self.g, other.g)], h, self.shift)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "GWElement":
        return GWElement(self.theory, self.rank, [c * a for a in self.g], {k: c * v for k, v in self.h.items()}, self.shift)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return gw_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GWElement):
            return NotImplemented
        return (self.theory is other.theory and self.rank == other.rank and self.shift == other.shift
                and self.g == other.g and self.h == other.h)

    def __hash__(self):
        return hash((self.rank, self.shift, tuple(self.g), tuple(self.h.items())))

    def is_zero(self) -> bool:
        return not any(self.g) and not self.h

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"GWElement(shift={self.shift}, g={self.g}, h={self.h})"

    def to_json(self) -> Dict:
        return {"shift": self.shift, "g": self.g, "h": [[list(k), v] for k, v in self.h.items()]}

    @classmethod
    def unit(cls, theory: CoefficientTheory, rank: int) -> "GWElement":
        return cls(theory, rank, theory.one())

    @classmethod
    def zero(cls, theory: CoefficientTheory, rank: int, shift: int = 0) -> "GWElement":
        return cls(theory, rank, None, None, shift)


def gw_mul(a: GWElement, b: GWElement, theory: Optional[CoefficientTheory] = None) -> GWElement:
    """Product in RO, or the action of ``a`` in RO on ``b`` in a shifted group."""
    a._same(b)
    if theory is not None and theory is not a.theory:
        raise TheoryError("theory mismatch")
    if a.shift and not b.shift:
        a, b = b, a
    if a.shift:
        raise ValueError("at least one factor must have shift 0")
    T, n = a.theory, b.shift
    eps = _sign(n) * T.duality
    fg = T.F(0, a.g)
    fm = T.F(n, b.g)
    pieces: List[Tuple[Weight, int]] = []
    for mu, k in b.h.items():
        pieces.append((mu, fg * k))
    for lam, c in a.h.items():
        pieces.append((lam, c * fm))
        for mu, k in b.h.items():
            pieces.append((tuple(x + y for x, y in zip(lam, mu)), c * k))
            pieces.append((tuple(x - y for x, y in zip(lam, mu)), c * eps * k))
    return GWElement._collect(T, a.rank, n, T.act(n, a.g, b.g), pieces)


def hermitian_augmentation(a: GWElement) -> List[int]:
    """Forget the torus action: ``g + sum H(h_lam)`` in GW^[n]_0."""
    T, n = a.theory, a.shift
    out = list(a.g)
    for c in a.h.values():
        out = [x + y for x, y in zip(out, T.H(n, c))]
    return T.normalize(n, out)


def in_io(a: GWElement) -> bool:
    return a.theory.group(a.shift).is_zero(hermitian_augmentation(a))


def hyperbolic(a: Union[PresentedElement, LaurentElement], theory: CoefficientTheory, shift: int = 0) -> GWElement:
    if isinstance(a, PresentedElement):
        a = to_laurent(a)
    return GWElement._collect(theory, a.rank, shift, theory.zero(shift), list(a.items()))


def forgetful(a: GWElement) -> LaurentElement:
    T, n = a.theory, a.shift
    eps = _sign(n) * T.duality
    terms: Dict[Weight, int] = {}
    z = (0,) * a.rank
    c0 = T.F(n, a.g)
    if c0:
        terms[z] = c0
    for lam, c in a.h.items():
        neg = tuple(-x for x in lam)
        terms[lam] = terms.get(lam, 0) + c
        terms[neg] = terms.get(neg, 0) + eps * c
    return LaurentElement(a.rank, {k: v for k, v in terms.items() if v})


def g0_section(s: Union[PresentedElement, Mapping], theory: CoefficientTheory) -> GWElement:
    """Inverse of the forgetful map on the hermitian augmentation ideal.

    ``s`` is an involution-fixed element of augmentation zero, either as a
    presented element or as a map from basis pairs ``(lam, mu)`` to coefficients.
    """
    if isinstance(s, PresentedElement):
        if involution(s) != s:
            raise ValueError("input is not fixed by the involution")
        if augmentation(s):
            raise ValueError("input has nonzero augmentation")
        pairs = {(lam, mu): c for (lam, mu), c in s.items() if (lam, mu) > (mu, lam)}
        t = s.rank
    else:
        pairs = {}
        for key, c in s.items():
            lam, mu = getattr(key, "lam", None), getattr(key, "mu", None)
            if lam is None:
                lam, mu = key
            pairs[(tuple(lam), tuple(mu))] = pairs.get((tuple(lam), tuple(mu)), 0) + c
        t = len(next(iter(pairs))[0]) if pairs else 0
        for lam, mu in pairs:
            if not any(lam) and not any(mu):
                raise ValueError("input has nonzero augmentation")
    total = GWElement.zero(theory, t)
    for (lam, mu), c in pairs.items():
        total = total + hyperbolic(PresentedElement.monomial(lam, mu, c), theory)
    return total


def witt_class(a: GWElement) -> Tuple[int, ...]:
    """Class of the weight-zero part in ``W^[n] = coker H``."""
    return a.theory.witt_class(a.shift, a.g)


def equivariant_class(m: Mapping[Sequence[int], int], form0: Sequence[int], theory: CoefficientTheory) -> GWElement:
    """Class of a graded symmetric space with weight-zero form ``form0``."""
    mm = {tuple(k): int(v) for k, v in m.items() if v}
    if not mm:
        raise ValueError("empty module; give the rank explicitly via a zero weight")
    t = len(next(iter(mm)))
    d = theory.duality
    for lam, v in mm.items():
        if any(lam) and mm.get(tuple(-x for x in lam), 0) != d * v:
            raise ValueError(f"support is not self-dual at weight {lam}")
    if theory.F(0, form0) != mm.get((0,) * t, 0):
        raise ValueError("form0 does not lift the weight-zero component")
    return GWElement(theory, t, form0, {lam: v for lam, v in mm.items() if is_cindex(lam)})


def weight_zero_twist(a: GWElement) -> GWElement:
    """Replace each ``H(b at lam)`` by ``H(b at lam) - H(b at 0)``."""
    T = a.theory
    g = list(a.g)
    for c in a.h.values():
        g = [x - y for x, y in zip(g, T.H(a.shift, c))]
    return GWElement(T, a.rank, g, a.h, a.shift)


def weight_zero_untwist(a: GWElement) -> GWElement:
    T = a.theory
    g = list(a.g)
    for c in a.h.values():
        g = [x + y for x, y in zip(g, T.H(a.shift, c))]
    return GWElement(T, a.rank, g, a.h, a.shift)


def io_generators(t: int, theory: CoefficientTheory) -> List[GWElement]:
    """``H_0(u^lam - 1)`` for representative weights with entries in {-1, 0, 1}."""
    out = []
    for lam in cindices(t, 1):
        out.append(hyperbolic(LaurentElement.u(lam) - LaurentElement.constant(t), theory))
    return out
