"""Adic quotients, the finite Borel tower and the stagewise comparison.

Every quotient here is computed in a finite box: the ambient free group on
the basis elements of bounded size, modulo those generators of the ideal power
whose products stay inside the box.  The box is enlarged until two
consecutive sizes give the same canonical form; the final size and the
stabilisation flag travel with the result.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .abelian import (
    FGAbelianGroup,
    Homomorphism,
    KaroubiData,
    KaroubiHalt,
    Tower,
    VerticalNode,
    karoubi_replay,
)
from .hermitian import (
    CoefficientTheory,
    GWElement,
    TheoryError,
    cindices,
    forgetful,
    gw_mul,
    hyperbolic,
    io_generators,
    preset,
)
from .ideal_engine import IdealSpec, MembershipWitness, augmentation_ideal, power_generators
from .linalg import Lattice
from .torus_ring import (
    LaurentElement,
    PresentedElement,
    TruncatedElement,
    borel_project,
    reduced_monomials,
    to_laurent,
    truncated_involution,
)

__all__ = [
    "Schedule",
    "BoxQuotient",
    "QuotientResult",
    "AdicTower",
    "BorelTower",
    "CofinalityReport",
    "ComparisonReport",
    "quotient_by_power",
    "adic_tower",
    "borel_tower",
    "cofinality_report",
    "module_quotient",
    "hermitian_adic_tower",
    "transported_quotient",
    "borel_target",
    "karoubi_stage",
    "theorem36_pi0_report",
]


@dataclass(frozen=True)
class Schedule:
    """Box sizes ``start, start + step, ...`` up to ``ceiling``; ``start=None`` picks the default."""

    start: Optional[int] = None
    step: int = 2
    ceiling: int = 16

    def sizes(self, default_start: int) -> List[int]:
        start = self.start if self.start is not None else default_start
        ceiling = max(self.ceiling, start + self.step)
        return list(range(start, ceiling + 1, self.step))


class OutsideBox(ValueError):
    pass


class BoxQuotient:
    """Free group on ``keys`` modulo ``relations`` (sparse dicts over keys)."""

    def __init__(self, keys: Sequence, relations: Sequence[Mapping], bound: int):
        self.keys = list(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.bound = bound
        seen, rels = set(), []
        for r in relations:
            v = {self.index[k]: c for k, c in r.items() if c}
            sig = tuple(sorted(v.items()))
            if v and sig not in seen:
                seen.add(sig)
                rels.append(v)
        self.group = FGAbelianGroup(len(self.keys), rels)

    def vector(self, terms: Mapping) -> List[int]:
        out = [0] * len(self.keys)
        for k, c in terms.items():
            if c:
                i = self.index.get(k)
                if i is None:
                    raise OutsideBox(f"{k} lies outside the box of size {self.bound}")
                out[i] += c
        return out

    def canonical(self):
        return self.group.canonical()


@dataclass
class QuotientResult:
    quotient: BoxQuotient
    n: int
    degree_bound: int
    stabilized: bool
    history: List[Tuple[int, Tuple]] = field(default_factory=list)

    @property
    def group(self) -> FGAbelianGroup:
        return self.quotient.group

    def canonical(self):
        return self.quotient.canonical()

    def to_json(self) -> Dict:
        rank, tors = self.canonical()
        return {"n": self.n, "rank": rank, "invariant_factors": list(tors),
                "degree_bound": self.degree_bound, "stabilized": self.stabilized}


def _stabilize(build: Callable[[int], BoxQuotient], sizes: Sequence[int], n: int) -> QuotientResult:
    history, prev = [], None
    for D in sizes:
        q = build(D)
        canon = q.canonical()
        history.append((D, canon))
        if prev is not None and prev[1] == canon:
            return QuotientResult(q, n, D, True, history)
        prev = (q, canon)
    return QuotientResult(prev[0], n, sizes[-1], False, history)


# ---------------------------------------------------------------------------
# R / I^n

def _l1(lam) -> int:
    return sum(abs(a) for a in lam)


def laurent_box(t: int, D: int) -> List[Tuple[int, ...]]:
    keys = [lam for lam in product(range(-D, D + 1), repeat=t) if _l1(lam) <= D]
    # outermost weights first: their coefficients are units, which keeps the echelon small
    keys.sort(key=lambda lam: (-_l1(lam), lam))
    return keys


def _power_box(model: str, ideal: IdealSpec, n: int, D: int) -> BoxQuotient:
    t = ideal.rank
    gens = power_generators(ideal, n).generators
    rels = []
    if model == "presented":
        keys = reduced_monomials(t, D)
        for g in gens:
            for lam, mu in reduced_monomials(t, D - g.degree()):
                rels.append((PresentedElement(t, {(lam, mu): 1}) * g).terms)
        return BoxQuotient(keys, rels, D)
    if model != "laurent":
        raise ValueError("model must be 'presented' or 'laurent'")
    keys = laurent_box(t, D)
    for g in gens:
        gl = to_laurent(g)
        for mu in keys:
            shifted = {tuple(a + b for a, b in zip(lam, mu)): c for lam, c in gl.items()}
            if all(_l1(k) <= D for k in shifted):
                rels.append(shifted)
    return BoxQuotient(keys, rels, D)


def _ideal_spread(model: str, ideal: IdealSpec) -> int:
    if model == "presented":
        return ideal.max_degree()
    return max(max(_l1(k) for k in to_laurent(g).terms) for g in ideal.generators)


def quotient_by_power(model: str, ideal: IdealSpec, n: int, schedule: Optional[Schedule] = None) -> QuotientResult:
    """``R / ideal^n`` in the presented (degree box) or Laurent (L1 box) model."""
    if n < 1:
        raise ValueError("n must be at least 1")
    schedule = schedule or Schedule()
    sizes = schedule.sizes(n + 2 * _ideal_spread(model, ideal))
    return _stabilize(lambda D: _power_box(model, ideal, n, D), sizes, n)


@dataclass
class AdicTower:
    stages: List[QuotientResult]
    tower: Tower
    degree_bound: int
    stabilized: bool
    label: str = ""

    def ranks(self) -> List[Tuple]:
        return [s.canonical() for s in self.stages]

    def to_json(self) -> Dict:
        return {"label": self.label, "degree_bound": self.degree_bound, "stabilized": self.stabilized,
                "stages": [s.to_json() for s in self.stages]}


def _assemble(results: List[QuotientResult], rebuild: Callable[[int, int], BoxQuotient], label: str) -> AdicTower:
    D = max(r.degree_bound for r in results)
    stages, ok = [], all(r.stabilized for r in results)
    for r in results:
        q = r.quotient if r.degree_bound == D else rebuild(r.n, D)
        if q.canonical() != r.canonical():
            ok = False
        stages.append(QuotientResult(q, r.n, D, r.stabilized, r.history))
    maps = []
    for lo, hi in zip(stages, stages[1:]):
        ident = [[int(i == j) for j in range(len(lo.quotient.keys))] for i in range(len(hi.quotient.keys))]
        f = Homomorphism(hi.group, lo.group, ident, name=f"stage {hi.n} -> {lo.n}")
        if not f.is_surjective():
            raise AssertionError("adic tower transition is not surjective")
        maps.append(f)
    return AdicTower(stages, Tower([s.group for s in stages], maps), D, ok, label)


def adic_tower(model: str, ideal: IdealSpec, n_max: int, schedule: Optional[Schedule] = None) -> AdicTower:
    """``R/I^1 <- R/I^2 <- ... <- R/I^n_max`` on a common box."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    results = [quotient_by_power(model, ideal, n, schedule) for n in range(1, n_max + 1)]
    return _assemble(results, lambda n, D: _power_box(model, ideal, n, D), f"R/I^n ({model})")


def involution_map(q: BoxQuotient, model: str) -> Homomorphism:
    """The involution on a stage of the adic tower (checked to be well defined)."""
    imgs = []
    for k in q.keys:
        if model == "laurent":
            imgs.append(q.vector({tuple(-a for a in k): 1}))
        else:
            lam, mu = k
            imgs.append(q.vector({(mu, lam): 1}))
    return Homomorphism(q.group, q.group, imgs, name="involution")


# ---------------------------------------------------------------------------
# the Borel side

def borel_keys(t: int, r: int) -> List[Tuple[int, ...]]:
    return list(product(range(2 * r + 1), repeat=t))


def truncated_vector(b: TruncatedElement) -> List[int]:
    keys = borel_keys(b.rank, b.stage)
    idx = {k: i for i, k in enumerate(keys)}
    out = [0] * len(keys)
    for e, c in b.items():
        out[idx[e]] += c
    return out


@dataclass
class BorelTower:
    t: int
    stages: List[int]
    groups: List[FGAbelianGroup]
    tower: Tower

    def theta(self, a: Union[PresentedElement, LaurentElement], r: int) -> List[int]:
        return truncated_vector(borel_project(a, r))

    def ranks(self) -> List[int]:
        return [g.rank for g in self.groups]

    def check_compatibility(self, samples: Sequence[Union[PresentedElement, LaurentElement]]) -> bool:
        """``truncate o theta_{r+1} == theta_r`` on the given samples."""
        for k, r in enumerate(self.stages[:-1]):
            f = self.tower.maps[k]
            for a in samples:
                if f.apply(self.theta(a, r + 1)) != self.theta(a, r):
                    return False
        return True


def _truncation(t: int, r: int, G_hi: FGAbelianGroup, G_lo: FGAbelianGroup) -> Homomorphism:
    lo = {k: i for i, k in enumerate(borel_keys(t, r))}
    imgs = []
    for e in borel_keys(t, r + 1):
        v = [0] * len(lo)
        if e in lo:
            v[lo[e]] = 1
        imgs.append(v)
    return Homomorphism(G_hi, G_lo, imgs, name=f"truncate B_{r + 1} -> B_{r}")


def borel_tower(t: int, r_max: int, r_min: int = 1) -> BorelTower:
    """Additive groups of ``B_r`` for ``r_min <= r <= r_max`` with truncations."""
    if r_max < max(r_min, 0) or r_min < 0:
        raise ValueError("need 0 <= r_min <= r_max")
    stages = list(range(r_min, r_max + 1))
    groups = [FGAbelianGroup((2 * r + 1) ** t) for r in stages]
    maps = [_truncation(t, r, groups[k + 1], groups[k]) for k, r in enumerate(stages[:-1])]
    return BorelTower(t, stages, groups, Tower(groups, maps))


@dataclass
class CofinalityReport:
    t: int
    r: int
    power: int
    inclusion_witnesses: List[MembershipWitness]
    surjective: bool
    iso: Optional[bool]
    determinant: Optional[int]
    quotient: Dict
    borel_rank: int

    @property
    def ok(self) -> bool:
        return self.surjective and (self.iso is not False)

    def to_json(self) -> Dict:
        return {"t": self.t, "r": self.r, "power": self.power,
                "inclusion_witness_count": len(self.inclusion_witnesses),
                "surjective": self.surjective, "iso": self.iso, "determinant": self.determinant,
                "quotient": self.quotient, "borel_rank": self.borel_rank}


def _pigeonhole_witness(factors: Sequence[Tuple[str, int]], t: int, r: int) -> MembershipWitness:
    """Write a product of x's and y's as a multiple of some ``x_i^(2r+1)``."""
    cap = 2 * r + 1
    counts = [[0, 0] for _ in range(t)]
    for kind, i in factors:
        counts[i][kind == "y"] += 1
    i = next(i for i, (a, b) in enumerate(counts) if a + b >= cap)
    a, b = counts[i]
    one = PresentedElement.constant(t)
    coeff = PresentedElement.x(t, i, a + b - cap) if a + b > cap else one
    # y^b = (-1)^b x^b (1 + y)^b
    coeff = coeff * ((one + PresentedElement.y(t, i)) ** b).scale((-1) ** b)
    for j, (aj, bj) in enumerate(counts):
        if j != i:
            if aj:
                coeff = coeff * PresentedElement.x(t, j, aj)
            if bj:
                coeff = coeff * PresentedElement.y(t, j, bj)
    gens = tuple(PresentedElement.x(t, j, cap) for j in range(t))
    target = one
    for kind, j in factors:
        target = target * (PresentedElement.x(t, j) if kind == "x" else PresentedElement.y(t, j))
    coeffs = [coeff if j == i else PresentedElement(t) for j in range(t)]
    return MembershipWitness(target, gens, coeffs)


def cofinality_report(t: int, r: int, power: Optional[int] = None, schedule: Optional[Schedule] = None) -> CofinalityReport:
    """Certify ``I^power`` in ``ker theta_r`` and the induced surjection ``R/I^power -> B_r``.

    ``power`` defaults to ``2rt + 1``.  For ``t = 1`` the surjection is also
    checked to be an isomorphism, which identifies ``ker theta_r`` with ``I^(2r+1)``.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    power = power if power is not None else 2 * r * t + 1
    letters = [("x", i) for i in range(t)] + [("y", i) for i in range(t)]
    witnesses = []
    for combo in combinations_with_replacement(letters, power):
        w = _pigeonhole_witness(combo, t, r)
        for g in w.generators:
            if borel_project(g, r):
                raise AssertionError("theta_r does not kill x_i^(2r+1)")
        witnesses.append(w)
    q = quotient_by_power("laurent", augmentation_ideal(t), power, schedule)
    B = FGAbelianGroup((2 * r + 1) ** t)
    theta = Homomorphism(q.group, B, [truncated_vector(borel_project(LaurentElement.u(k), r)) for k in q.quotient.keys],
                         name=f"theta_{r}")
    surj = theta.is_surjective()
    iso = det = None
    if t == 1 or q.group.canonical() == B.canonical():
        iso = theta.is_iso()
        det = theta.determinant() if q.group.is_free() else None
    return CofinalityReport(t, r, power, witnesses, surj, iso, det, q.to_json(), B.rank)


# ---------------------------------------------------------------------------
# RO and its shifted modules

def _m_keys(theory: CoefficientTheory, n: int, t: int, W: int) -> List:
    keys = [("g", j) for j in range(theory.group(n).ngens)]
    keys += [("h", lam) for lam in sorted(cindices(t, W), key=lambda l: (_l1(l), l)) if _l1(lam) <= W]
    return keys


def _m_terms(a: GWElement) -> Dict:
    terms = {("g", j): c for j, c in enumerate(a.g) if c}
    terms.update({("h", lam): c for lam, c in a.h.items()})
    return terms


def _m_element(theory: CoefficientTheory, t: int, n: int, key) -> GWElement:
    kind, v = key
    if kind == "g":
        return GWElement(theory, t, [int(j == v) for j in range(theory.group(n).ngens)], None, n)
    return GWElement(theory, t, None, {v: 1}, n)


def _io_products(theory: CoefficientTheory, t: int, m: int) -> List[GWElement]:
    gens = io_generators(t, theory)
    out = []
    for combo in combinations_with_replacement(range(len(gens)), m):
        p = GWElement.unit(theory, t)
        for j in combo:
            p = gw_mul(p, gens[j])
        out.append(p)
    return out


def _io_span(theory: CoefficientTheory, t: int, n: int, m: int, W: int) -> List[GWElement]:
    keys = _m_keys(theory, n, t, W)
    basis = [_m_element(theory, t, n, k) for k in keys]
    if m == 0:
        return basis
    out = []
    for p in _io_products(theory, t, m):
        for b in basis:
            pb = gw_mul(p, b)
            if all(_l1(lam) <= W for lam in pb.h):
                out.append(pb)
    return out


def _module_box(theory: CoefficientTheory, t: int, n: int, m: int, W: int) -> BoxQuotient:
    G = theory.group(n)
    rels = [{("g", j): c for j, c in r.items()} for r in G.relations]
    rels += [_m_terms(a) for a in _io_span(theory, t, n, m, W)]
    return BoxQuotient(_m_keys(theory, n, t, W), rels, W)


def module_quotient(theory: CoefficientTheory, t: int, n: int, m: int, schedule: Optional[Schedule] = None) -> QuotientResult:
    """``GW^[n] / IO^m GW^[n]`` for the torus; ``n = 0`` gives ``RO / IO^m``."""
    schedule = schedule or Schedule()
    spread = max(_l1(lam) for lam in cindices(t, 1))
    sizes = schedule.sizes(m + 2 * spread)
    return _stabilize(lambda W: _module_box(theory, t, n, m, W), sizes, m)


def hermitian_adic_tower(theory: CoefficientTheory, t: int, n_max: int,
                         schedule: Optional[Schedule] = None, shift: int = 0) -> AdicTower:
    """``RO/IO <- RO/IO^2 <- ...`` (or the same for a shifted module)."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    results = [module_quotient(theory, t, shift, m, schedule) for m in range(1, n_max + 1)]
    return _assemble(results, lambda m, W: _module_box(theory, t, shift, m, W), f"GW^[{shift}]/IO^n ({theory.name})")


def transported_quotient(theory: CoefficientTheory, t: int, n: int, W: int) -> Tuple[int, Tuple[int, ...]]:
    """Canonical form of ``GW_0 + I_+/I_+^n`` computed on the Laurent side.

    ``I_+`` has the basis ``u^lam + u^-lam - 2``; its n-th power is spanned
    by products of basis elements.  The result is an independent route to
    ``RO/IO^n`` through the forgetful isomorphism.
    """
    keys = [lam for lam in cindices(t, W) if _l1(lam) <= W]
    idx = {lam: i for i, lam in enumerate(keys)}
    z = (0,) * t

    def s(lam):
        return LaurentElement(t, {lam: 1, tuple(-a for a in lam): 1, z: -2})

    def coords(f: LaurentElement) -> Optional[Dict[int, int]]:
        out = {}
        for lam, c in f.items():
            if any(lam) and lam in idx:
                out[idx[lam]] = c
            elif any(lam) and _l1(lam) > W:
                return None
        return out

    basis_elems = [s(lam) for lam in keys]
    layer = list(basis_elems)
    for _ in range(n - 1):
        lat = Lattice()
        new = []
        for v in layer:
            for b in basis_elems:
                p = v * b
                c = coords(p)
                if c is not None and lat.add(c):
                    new.append(p)
        layer = new
    rels = [coords(p) for p in layer] if n > 1 else [{i: 1} for i in range(len(keys))]
    I_quot = FGAbelianGroup(len(keys), rels)
    total, _ = _direct_sum_canon(theory.gw0, I_quot)
    return total


def _direct_sum_canon(a: FGAbelianGroup, b: FGAbelianGroup):
    from .abelian import direct_sum
    s, _ = direct_sum([a, b])
    return s.canonical(), s


# ---------------------------------------------------------------------------
# Borel-side hermitian targets

class BorelTarget:
    """``GW^[n]_0(k) + (1 + (-1)^n iota)(B_r^red)`` as an abelian group."""

    def __init__(self, theory: CoefficientTheory, t: int, n: int, r: int):
        self.theory, self.t, self.n, self.r = theory, t, n % 4, r
        self.eps = (-1 if self.n % 2 else 1) * theory.duality
        keys = borel_keys(t, r)
        self.red = {k: i for i, k in enumerate(keys[1:])}
        lat = Lattice()
        for e in keys[1:]:
            lat.add(self._sym_vec(TruncatedElement(t, r, {e: 1})))
        self.lattice_basis = lat.basis()
        self._coords = Lattice(track=True)
        for i, v in enumerate(self.lattice_basis):
            self._coords.add(v, i)
        G = theory.group(self.n)
        self.g_size = G.ngens
        self.group = FGAbelianGroup(G.ngens + len(self.lattice_basis),
                                    [dict(r_) for r_ in G.relations])

    def _sym_vec(self, b: TruncatedElement) -> Dict[int, int]:
        s = b + truncated_involution(b).scale(self.eps)
        out = {}
        for e, c in s.items():
            if not any(e):
                raise AssertionError("symmetrized reduced element has a constant term")
            out[self.red[e]] = c
        return out

    def reduced_coords(self, b: TruncatedElement) -> List[int]:
        """Coordinates of an element of the symmetric lattice."""
        v = {}
        for e, c in b.items():
            if not any(e):
                if c:
                    raise ValueError("element has a constant term")
                continue
            v[self.red[e]] = c
        combo = self._coords.express(v)
        if combo is None:
            raise ValueError("element is not in the symmetric lattice")
        return [combo.get(i, 0) for i in range(len(self.lattice_basis))]

    def vector(self, g: Sequence[int], b: Optional[TruncatedElement] = None) -> List[int]:
        tail = self.reduced_coords(b) if b is not None else [0] * len(self.lattice_basis)
        return list(g) + tail

    def lattice_element(self, i: int) -> TruncatedElement:
        inv = {j: e for e, j in self.red.items()}
        return TruncatedElement(self.t, self.r, {inv[j]: c for j, c in self.lattice_basis[i].items()})


def borel_target(theory: CoefficientTheory, t: int, n: int, r: int) -> BorelTarget:
    return BorelTarget(theory, t, n, r)


def _vertical_gw(theory, t, n, r, q: BoxQuotient, T: BorelTarget) -> Homomorphism:
    eps = T.eps
    z = (0,) * t
    imgs = []
    for kind, v in q.keys:
        if kind == "g":
            imgs.append(T.vector([int(j == v) for j in range(T.g_size)]))
        else:
            lam = v
            f = LaurentElement(t, {lam: 1})
            f = f + LaurentElement(t, {tuple(-a for a in lam): eps}) - LaurentElement(t, {z: 1 + eps})
            imgs.append(T.vector(theory.H(n, 1), borel_project(f, r)))
    return Homomorphism(q.group, T.group, imgs, name=f"vertical GW^[{n}] stage {r}")


def _stage_index(theory, t, n, r, W) -> int:
    """Smallest m >= 1 with theta_r o F killing IO^m GW^[n] inside the box."""
    m = 1
    while True:
        ok = True
        for a in _io_span(theory, t, n, m, W):
            if borel_project(forgetful(a), r):
                ok = False
                break
        if ok:
            return m
        m += 1
        if m > 4 * r * t + 4:
            raise AssertionError("no stage index found")


def shift0_comparison(theory: CoefficientTheory, t: int, r: int, schedule: Optional[Schedule] = None) -> Dict:
    """Compare ``RO/IO^m`` with the Borel-side target at stage ``r``.

    ``m`` is the least power whose image under ``theta_r o F`` vanishes.
    """
    schedule = schedule or Schedule()
    sizes = schedule.sizes(2 * r + 1 + 2 * max(_l1(l) for l in cindices(t, 1)))
    m = _stage_index(theory, t, 0, r, sizes[0])
    q = _stabilize(lambda W: _module_box(theory, t, 0, m, W), sizes, m)
    T = BorelTarget(theory, t, 0, r)
    v = _vertical_gw(theory, t, 0, r, q.quotient, T)
    verdict, cert = _verdict(v)
    top, bottom = q.canonical(), T.group.canonical()
    return {"r": r, "verdict": verdict, "io_power": m, "box": q.degree_bound, "stable": q.stabilized,
            "top": {"rank": top[0], "invariant_factors": list(top[1])},
            "bottom": {"rank": bottom[0], "invariant_factors": list(bottom[1])},
            "certificate": cert}


def _saturate(q: BoxQuotient, v: Homomorphism) -> Tuple[BoxQuotient, bool]:
    """Quotient of ``q`` by the kernel of ``v``; the flag says whether that kernel was already zero."""
    ker, inc = v.kernel()
    rels = [{q.keys[i]: c for i, c in r.items()} for r in q.group.relations]
    rels += [{q.keys[i]: c for i, c in enumerate(img) if c} for img in inc.images]
    if ker.is_trivial():
        return q, True
    return BoxQuotient(q.keys, rels, q.bound), False


@dataclass
class StageData:
    r: int
    box: int
    stable: bool
    m: Dict[int, int]
    adic_exact: Dict[str, bool]
    karoubi: KaroubiData
    verticals: Dict[str, Homomorphism]
    canonical: Dict[str, Tuple]


def _stage_boxes(theory, t, r, W, ms):
    K = _power_box("laurent", augmentation_ideal(t), 2 * r * t + 1 if t > 1 else 2 * r + 1, W)
    M = {n: _module_box(theory, t, n, ms[n], W) for n in range(4)}
    return K, M


def karoubi_stage(theory: CoefficientTheory, t: int, r: int, schedule: Optional[Schedule] = None,
                  lo: int = -3) -> StageData:
    """Both rows of the Bott sequences at finite stage ``r`` with comparison maps.

    Top nodes start from the adic stages (``R/I^(2r+1)`` and
    ``GW^[n]/IO^m GW^[n]``) and are then cut down to the filtration transported
    from the Borel side, i.e. divided by the kernel of the comparison map.
    ``adic_exact`` records the nodes where that kernel was already zero.
    """
    schedule = schedule or Schedule()
    if r < 1:
        raise ValueError("the Bott rows are assembled for stages r >= 1")
    N = 2 * r + 1
    sizes = schedule.sizes(N + 2 * max(_l1(l) for l in cindices(t, 1)))
    ms = {n: _stage_index(theory, t, n, r, sizes[0]) for n in range(4)}
    Bgroup = FGAbelianGroup((2 * r + 1) ** t)
    T = {n: BorelTarget(theory, t, n, r) for n in range(4)}
    witt = {n: theory.witt_group(n) for n in range(4)}
    zero = FGAbelianGroup(0)

    def theta_map(q):
        return Homomorphism(q.group, Bgroup, [truncated_vector(borel_project(LaurentElement.u(k), r)) for k in q.keys],
                            name=f"theta_{r}")

    prev, stable = None, False
    for W in sizes:
        K_io, M_io = _stage_boxes(theory, t, r, W, ms)
        K, k_exact = _saturate(K_io, theta_map(K_io))
        M, m_exact = {}, {}
        for n in range(4):
            M[n], m_exact[n] = _saturate(M_io[n], _vertical_gw(theory, t, n, r, M_io[n], T[n]))
        canon = (K.canonical(), tuple(M[n].canonical() for n in range(4)))
        if prev is not None and canon == prev:
            stable = True
            break
        prev = canon
    vK = theta_map(K)
    data = KaroubiData(gw={}, k={}, F={}, H={}, eta={},
                       witt={n: theory.witt_factors(n) for n in range(4)}, base=-2)
    data.k[0] = VerticalNode(K.group, Bgroup, vK)
    verticals = {"K_0": vK}
    for n in range(4):
        v = _vertical_gw(theory, t, n, r, M[n], T[n])
        data.gw[(n, 0)] = VerticalNode(M[n].group, T[n].group, v)
        verticals[f"GW^[{n}]_0"] = v
    for n in range(4):
        m = (n + 1) % 4
        eps = T[n].eps
        z = (0,) * t
        # forgetful maps
        top_F = []
        for kind, v in M[n].keys:
            if kind == "g":
                top_F.append(K.vector({z: theory.F(n, [int(j == v) for j in range(T[n].g_size)])}))
            else:
                lam = v
                terms = {lam: 1}
                neg = tuple(-a for a in lam)
                terms[neg] = terms.get(neg, 0) + eps
                top_F.append(K.vector(terms))
        bot_F = []
        for j in range(T[n].g_size):
            bot_F.append(truncated_vector(TruncatedElement.constant(t, theory.F(n, [int(i == j) for i in range(T[n].g_size)]), r)))
        for i in range(len(T[n].lattice_basis)):
            bot_F.append(truncated_vector(T[n].lattice_element(i)))
        data.F[(n, 0)] = (Homomorphism(M[n].group, K.group, top_F, name=f"F^[{n}]"),
                          Homomorphism(T[n].group, Bgroup, bot_F, name=f"F^[{n}] Borel"))
        # hyperbolic maps into shift n+1
        top_H = [M[m].vector(_m_terms(hyperbolic(LaurentElement.u(k), theory, m))) for k in K.keys]
        bot_H = []
        for e in borel_keys(t, r):
            aug = 0 if any(e) else 1
            c = TruncatedElement(t, r, {e: 1}) - TruncatedElement.constant(t, aug, r)
            sym = c + truncated_involution(c).scale(T[m].eps)
            bot_H.append(T[m].vector(theory.H(m, aug), sym))
        data.H[(n, 0)] = (Homomorphism(K.group, M[m].group, top_H, name=f"H^[{m}]"),
                          Homomorphism(Bgroup, T[m].group, bot_H, name=f"H^[{m}] Borel"))
        # boundary into the Witt group
        W_m, proj = witt[m]
        top_eta = []
        for kind, v in M[m].keys:
            top_eta.append(proj.apply([int(kind == "g" and j == v) for j in range(T[m].g_size)]))
        bot_eta = [proj.apply([int(j == i) for j in range(T[m].g_size)]) for i in range(T[m].g_size)]
        bot_eta += [[0] * W_m.ngens for _ in T[m].lattice_basis]
        data.eta[(n, 0)] = (Homomorphism(M[m].group, W_m, top_eta, name=f"eta^[{m}]"),
                            Homomorphism(T[m].group, W_m, bot_eta, name=f"eta^[{m}] Borel"))
    # negative degrees: Witt groups and vanishing K-theory
    for i in range(lo, 0):
        data.k[i] = VerticalNode(zero, zero, Homomorphism.identity(zero))
        for n in range(4):
            Wg = witt[(n - i) % 4][0]
            data.gw[(n, i)] = VerticalNode(Wg, Wg, Homomorphism.identity(Wg))
    for i in range(lo, 0):
        for n in range(4):
            m = (n + 1) % 4
            src = witt[(n - i) % 4][0]
            tgt = witt[(m - i) % 4][0]
            f = Homomorphism.zero(src, zero)
            data.F[(n, i)] = (f, f)
            h = Homomorphism.zero(zero, tgt)
            data.H[(n, i)] = (h, h)
            e = Homomorphism.identity(tgt)
            data.eta[(n, i)] = (e, e)
    canonical = {"K_0": (K.canonical(), Bgroup.canonical())}
    for n in range(4):
        canonical[f"GW^[{n}]_0"] = (M[n].canonical(), T[n].group.canonical())
    adic = {"K_0": k_exact}
    adic.update({f"GW^[{n}]_0": m_exact[n] for n in range(4)})
    return StageData(r, W, stable, ms, adic, data, verticals, canonical)


def _verdict(f: Homomorphism) -> Tuple[str, Dict]:
    ker = f.kernel()[0]
    cok = f.cokernel()[0]
    inj, surj = ker.is_trivial(), cok.is_trivial()
    verdict = "iso" if inj and surj else "epi-only" if surj else "mono-only" if inj else "fail"
    return verdict, {"kernel": ker.to_json(), "cokernel": cok.to_json()}


@dataclass
class ComparisonReport:
    theory: str
    t: int
    stages: List[Dict] = field(default_factory=list)
    karoubi: List[Dict] = field(default_factory=list)
    verdict: str = "pending"
    certificate: Optional[Dict] = None

    @property
    def all_iso(self) -> bool:
        return bool(self.stages) and all(s["verdict"] == "iso" for s in self.stages)

    def karoubi_reaches(self) -> Optional[int]:
        reached = [k.get("iso_through") for k in self.karoubi]
        if not reached or any(x is None for x in reached):
            return None
        return min(reached)

    def to_json(self) -> Dict:
        return {"theory": self.theory, "t": self.t, "verdict": self.verdict, "stages": self.stages,
                "karoubi": self.karoubi, "certificate": self.certificate}


def theorem36_pi0_report(theory: Union[CoefficientTheory, str, Mapping], t: int, n_max: int, r_max: int,
                         schedule: Optional[Schedule] = None, karoubi: bool = True) -> ComparisonReport:
    """Compare ``RO/IO^n`` with the Borel-side target and replay the Karoubi induction.

    Stage ``n`` of the hermitian adic tower is compared with Borel stage
    ``r = n - 1``; for every ``1 <= r <= r_max`` both Bott rows are assembled and
    the induction is run from the Witt-group range up to degree 0.
    """
    try:
        if isinstance(theory, str):
            theory = preset(theory)
        elif not isinstance(theory, CoefficientTheory):
            theory = CoefficientTheory(theory)
    except TheoryError as e:
        name = theory if isinstance(theory, str) else dict(theory).get("name", "custom")
        return ComparisonReport(str(name), t, verdict="fail", certificate={"axiom": str(e)})
    if n_max < 1 or r_max < 0:
        raise ValueError("bounds must be positive")
    report = ComparisonReport(theory.name, t)
    schedule = schedule or Schedule()
    inconclusive = None
    for n in range(1, n_max + 1):
        start = time.perf_counter()
        cmp = shift0_comparison(theory, t, n - 1, schedule)
        if not cmp["stable"]:
            inconclusive = n
            cmp["verdict"] = "inconclusive"
        cmp["n"] = n
        cmp["seconds"] = round(time.perf_counter() - start, 3)
        report.stages.append(cmp)
    if karoubi:
        for r in range(1, r_max + 1):
            start = time.perf_counter()
            stage = karoubi_stage(theory, t, r, schedule)
            entry = {"r": r, "io_powers": {str(k): v for k, v in stage.m.items()}, "box": stage.box,
                     "stable": stage.stable, "adic_stage_exact": stage.adic_exact}
            try:
                kr = karoubi_replay(stage.karoubi, i_to=0)
                entry.update(iso_through=kr.iso_through, deductions=len(kr.deductions))
            except KaroubiHalt as e:
                entry.update(iso_through=None, halted_at=e.node, certificate=e.certificate)
            entry["seconds"] = round(time.perf_counter() - start, 3)
            report.karoubi.append(entry)
    if inconclusive is not None:
        report.verdict = f"inconclusive at stage {inconclusive}"
    elif report.all_iso and (not karoubi or report.karoubi_reaches() == 0):
        report.verdict = "iso"
    else:
        report.verdict = "fail"
    return report
