"""Ideals of the torus representation ring and a degree-bounded membership oracle.

Membership over Z is decided inside a finite box: the unknown coefficient of
generator ``g`` ranges over reduced monomials of degree at most
``degree_bound - deg(g)``, and the resulting integer system is put in echelon
form with tracked combinations.  A hit yields an exact witness; a miss is only
:class:`Inconclusive` unless the augmentation map separates ``f`` from the ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .linalg import Lattice
from .torus_ring import (
    PresentedElement,
    RankMismatch,
    augmentation,
    format_element,
    involution,
    parse_element,
    reduced_monomials,
)

__all__ = [
    "IdealSpec",
    "MembershipWitness",
    "Inconclusive",
    "SymmetricPair",
    "PowerInclusion",
    "NoneFound",
    "member",
    "augmentation_ideal",
    "hermitian_ideal",
    "hermitian_generators",
    "lemma27_decompose",
    "power_generators",
    "find_power_inclusion",
    "symmetric_basis",
    "DEFAULT_CEILING",
]

DEFAULT_CEILING = 24


@dataclass(frozen=True)
class IdealSpec:
    generators: Tuple[PresentedElement, ...]
    rank: int

    def __init__(self, generators: Sequence[PresentedElement], rank: Optional[int] = None):
        gens = tuple(generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        rank = gens[0].rank if rank is None else rank
        for g in gens:
            if g.rank != rank:
                raise RankMismatch(f"generator of rank {g.rank} in a rank-{rank} ideal")
            if not g:
                raise ValueError("generators must be nonzero")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "rank", rank)

    @classmethod
    def from_literals(cls, literals: Sequence[str], rank: Optional[int] = None) -> "IdealSpec":
        return cls([parse_element(s, rank) for s in literals], rank)

    def max_degree(self) -> int:
        return max(g.degree() for g in self.generators)

    def to_json(self) -> List[str]:
        return [format_element(g) for g in self.generators]

    def __len__(self):
        return len(self.generators)


def augmentation_ideal(t: int) -> IdealSpec:
    return IdealSpec([PresentedElement.x(t, i) for i in range(t)] + [PresentedElement.y(t, i) for i in range(t)])


@dataclass
class MembershipWitness:
    """``target == sum(coefficients[j] * generators[j])``, checked on construction."""

    target: PresentedElement
    generators: Tuple[PresentedElement, ...]
    coefficients: List[PresentedElement]
    degree_bound: Optional[int] = None

    def __post_init__(self):
        if len(self.coefficients) != len(self.generators):
            raise ValueError("one coefficient per generator is required")
        if self.recombine() != self.target:
            raise AssertionError("membership witness does not recombine to its target")

    def recombine(self) -> PresentedElement:
        total = PresentedElement(self.target.rank)
        for c, g in zip(self.coefficients, self.generators):
            if c:
                total = total + c * g
        return total

    def to_json(self) -> Dict:
        return {
            "target": format_element(self.target),
            "coefficients": [format_element(c) for c in self.coefficients],
            "degree_bound": self.degree_bound,
        }


@dataclass
class Inconclusive:
    """No witness inside the searched box.

    ``refuted`` is set when the augmentation obstruction proves non-membership.
    """

    degree_bound: int
    refuted: bool = False
    reason: str = ""

    def __bool__(self):
        return False

    def to_json(self) -> Dict:
        return {"status": "refuted" if self.refuted else "inconclusive",
                "degree_bound": self.degree_bound, "reason": self.reason}


# ---------------------------------------------------------------------------
# solver

_monomial_index: Dict[int, Dict] = {}
_solver_cache: Dict[Tuple, Lattice] = {}
_CACHE_LIMIT = 64


def _index(rank: int, key) -> int:
    table = _monomial_index.setdefault(rank, {})
    i = table.get(key)
    if i is None:
        i = table[key] = len(table)
    return i


def _vector(a: PresentedElement) -> Dict[int, int]:
    return {_index(a.rank, k): c for k, c in a.items()}


def _box_lattice(ideal: IdealSpec, bound: int) -> Lattice:
    key = (ideal.rank, ideal.generators, bound)
    lat = _solver_cache.get(key)
    if lat is not None:
        return lat
    lat = Lattice(track=True)
    t = ideal.rank
    monos = reduced_monomials(t, bound)
    for mono in monos:
        _index(t, mono)
    # low-degree multipliers first, so the simplest witnesses win
    cols = []
    for j, g in enumerate(ideal.generators):
        room = bound - g.degree()
        cols += [(sum(lam) + sum(mu), j, k, lam, mu) for k, (lam, mu) in enumerate(monos) if sum(lam) + sum(mu) <= room]
    cols.sort()
    for _, j, _, lam, mu in cols:
        lat.add(_vector(PresentedElement(t, {(lam, mu): 1}) * ideal.generators[j]), (j, lam, mu))
    if len(_solver_cache) >= _CACHE_LIMIT:
        _solver_cache.pop(next(iter(_solver_cache)))
    _solver_cache[key] = lat
    return lat


def clear_cache() -> None:
    _solver_cache.clear()


def _solve(f: PresentedElement, ideal: IdealSpec, bound: int) -> Optional[MembershipWitness]:
    combo = _box_lattice(ideal, bound).express(_vector(f))
    if combo is None:
        return None
    t = ideal.rank
    coeffs: List[Dict] = [{} for _ in ideal.generators]
    for (j, lam, mu), c in combo.items():
        if c:
            coeffs[j][(lam, mu)] = coeffs[j].get((lam, mu), 0) + c
    elems = [PresentedElement(t, {k: v for k, v in c.items() if v}) for c in coeffs]
    return MembershipWitness(f, ideal.generators, elems, bound)


def member(
    f: PresentedElement,
    ideal: IdealSpec,
    degree_bound: Optional[int] = None,
    ceiling: int = DEFAULT_CEILING,
) -> Union[MembershipWitness, Inconclusive]:
    """Search for ``f = sum c_j g_j`` with coefficient degrees bounded by the box.

    With an explicit ``degree_bound`` one box is searched.  Otherwise the
    search starts at ``deg f + 2 * max deg g + 2`` and doubles up to ``ceiling``.
    """
    if f.rank != ideal.rank:
        raise RankMismatch(f"element of rank {f.rank} against a rank-{ideal.rank} ideal")
    need = max(f.degree(), ideal.max_degree())
    if degree_bound is not None:
        if degree_bound < need:
            raise ValueError(f"degree_bound {degree_bound} is below the required {need}")
        bounds = [degree_bound]
    else:
        b = f.degree() + 2 * ideal.max_degree() + 2
        bounds = []
        while True:
            bounds.append(min(b, max(ceiling, need)))
            if b >= ceiling:
                break
            b *= 2
    if not f:
        return MembershipWitness(f, ideal.generators, [PresentedElement(f.rank)] * len(ideal), bounds[0])
    if augmentation(f) and all(augmentation(g) == 0 for g in ideal.generators):
        return Inconclusive(bounds[-1], True, "augmentation vanishes on the ideal but not on the element")
    for b in bounds:
        w = _solve(f, ideal, b)
        if w is not None:
            return w
    return Inconclusive(bounds[-1])


# ---------------------------------------------------------------------------
# the hermitian generating set

def _gammas(t: int) -> List[Tuple[int, ...]]:
    gs = [g for g in product((0, 1), repeat=t) if any(g)]
    gs.sort(key=lambda g: (sum(g), tuple(-x for x in g)))
    return gs


def _sym(lam, mu) -> PresentedElement:
    return PresentedElement.monomial(lam, mu) + PresentedElement.monomial(mu, lam)


def hermitian_generators(t: int) -> List[PresentedElement]:
    """``x^g + y^g`` for the nonzero 0/1 vectors ``g``; singletons first."""
    if t < 1:
        raise ValueError("rank must be at least 1")
    z = (0,) * t
    return [_sym(g, z) for g in _gammas(t)]


def hermitian_ideal(t: int) -> IdealSpec:
    return IdealSpec(hermitian_generators(t))


def _pure(lam: Tuple[int, ...], slot: Dict[Tuple[int, ...], int]) -> List[PresentedElement]:
    """Coefficients expressing x^lam + y^lam over the hermitian generators."""
    t = len(lam)
    zero = PresentedElement(t)
    out = [zero] * len(slot)
    m = max(lam)
    gamma = tuple(int(v == m) for v in lam)
    rest = tuple(a - b for a, b in zip(lam, gamma))
    if not any(rest):
        out[slot[gamma]] = PresentedElement.constant(t)
        return out
    z = (0,) * t
    out[slot[gamma]] = _sym(rest, z)
    idx = [i for i in range(t) if gamma[i]]
    sign = PresentedElement.constant(t, (-1) ** len(idx))
    low = tuple(a - b for a, b in zip(rest, gamma))
    if any(low):
        corr = sign
        for i in idx:
            corr = corr * (PresentedElement.x(t, i) + PresentedElement.y(t, i))
        for j, c in enumerate(_pure(low, slot)):
            if c:
                out[j] = out[j] - c * corr
    else:
        # x^0 + y^0 = 2: absorb the product into the first singleton generator
        corr = sign.scale(2)
        for i in idx[1:]:
            corr = corr * (PresentedElement.x(t, i) + PresentedElement.y(t, i))
        e = tuple(int(i == idx[0]) for i in range(t))
        out[slot[e]] = out[slot[e]] - corr
    return out


def lemma27_decompose(lam: Sequence[int], mu: Sequence[int]) -> MembershipWitness:
    """Express ``x^lam y^mu + x^mu y^lam`` over :func:`hermitian_generators`."""
    lam, mu = tuple(lam), tuple(mu)
    t = len(lam)
    if len(mu) != t:
        raise RankMismatch("exponent vectors of different length")
    if not any(lam) and not any(mu):
        raise ValueError("both exponent vectors are zero")
    if any(a and b for a, b in zip(lam, mu)) or min(lam + mu) < 0:
        raise ValueError("exponent vectors must be nonnegative with disjoint support")
    gens = hermitian_generators(t)
    slot = {g: i for i, g in enumerate(_gammas(t))}
    if not any(mu) or not any(lam):
        coeffs = _pure(lam if any(lam) else mu, slot)
    else:
        z = (0,) * t
        p_mu = _sym(mu, z)
        coeffs = [c * p_mu for c in _pure(lam, slot)]
        for j, c in enumerate(_pure(tuple(a + b for a, b in zip(lam, mu)), slot)):
            coeffs[j] = coeffs[j] - c
    return MembershipWitness(_sym(lam, mu), tuple(gens), coeffs)


# ---------------------------------------------------------------------------
# powers and filtrations

def power_generators(ideal: IdealSpec, n: int) -> IdealSpec:
    """All n-fold products of generators, reduced and deduplicated."""
    if n < 1:
        raise ValueError("n must be at least 1")
    seen = {}
    for combo in combinations_with_replacement(range(len(ideal)), n):
        p = ideal.generators[combo[0]]
        for j in combo[1:]:
            p = p * ideal.generators[j]
        if p and p not in seen:
            seen[p] = None
    return IdealSpec(list(seen), ideal.rank)


@dataclass
class PowerInclusion:
    c: int
    witnesses: List[MembershipWitness] = field(default_factory=list)

    def to_json(self):
        return {"c": self.c, "witnesses": [w.to_json() for w in self.witnesses]}


@dataclass
class NoneFound:
    c_max: int
    degree_bound: int

    def __bool__(self):
        return False

    def to_json(self):
        return {"status": "none_found", "c_max": self.c_max, "degree_bound": self.degree_bound}


def find_power_inclusion(A: IdealSpec, B: IdealSpec, c_max: int, degree_bound: int) -> Union[PowerInclusion, NoneFound]:
    """Smallest ``c <= c_max`` with every generator of ``A^c`` found in ``B``."""
    if c_max < 1:
        raise ValueError("c_max must be at least 1")
    for c in range(1, c_max + 1):
        witnesses = []
        for g in power_generators(A, c).generators:
            if degree_bound < max(g.degree(), B.max_degree()):
                break
            w = member(g, B, degree_bound)
            if not w:
                break
            witnesses.append(w)
        else:
            return PowerInclusion(c, witnesses)
    return NoneFound(c_max, degree_bound)


@dataclass(frozen=True)
class SymmetricPair:
    """``x^lam y^mu + x^mu y^lam``; oriented so that ``(lam, mu) > (mu, lam)``."""

    lam: Tuple[int, ...]
    mu: Tuple[int, ...]

    def element(self) -> PresentedElement:
        return _sym(self.lam, self.mu)

    def degree(self) -> int:
        return sum(self.lam) + sum(self.mu)


def symmetric_basis(t: int, degree_bound: int) -> List[SymmetricPair]:
    """Free Z-basis of the involution-fixed augmentation ideal, up to total degree."""
    out = []
    for lam, mu in reduced_monomials(t, degree_bound):
        if (lam, mu) > (mu, lam):
            out.append(SymmetricPair(lam, mu))
    return out


def is_hermitian(a: PresentedElement) -> bool:
    """True when ``a`` is involution-fixed with augmentation zero."""
    return involution(a) == a and augmentation(a) == 0
