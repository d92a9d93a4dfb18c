"""Exact arithmetic in the representation ring of a split torus of rank t.

Two models of the same ring are provided:

* :class:`PresentedElement` -- integer combinations of reduced monomials
  ``x^lam * y^mu`` in ``Z[x_1..x_t, y_1..y_t] / (x_i*y_i + x_i + y_i)``,
  where reduced means ``min(lam_i, mu_i) == 0`` for every index.
* :class:`LaurentElement` -- the group ring ``Z[Z^t]`` with basis ``u^lam``.

The isomorphism ``x_i -> u_i - 1``, ``y_i -> u_i^-1 - 1`` connects them and is
used throughout the test-suite as a differential oracle.

:class:`TruncatedElement` models ``Z[z_1..z_t] / (z_i^(2r+1))``, the K_0 of the
finite Borel stage ``(P^{2r})^t``; :func:`borel_project` is the comparison map.

Elements print and parse with a small literal grammar::

    3*x1^2*y2 - 2        u1^-1 - 1
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import product
from math import comb
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

__all__ = [
    "ReducedMonomial",
    "PresentedElement",
    "LaurentElement",
    "TruncatedElement",
    "NOT_NILPOTENT",
    "RankMismatch",
    "ParseError",
    "mul_presented",
    "involution",
    "augmentation",
    "class_of_weight",
    "to_laurent",
    "to_presented",
    "borel_project",
    "truncated_involution",
    "nilpotency_index",
    "reduced_monomials",
    "parse_element",
    "format_element",
]

Vec = Tuple[int, ...]
ReducedMonomial = Tuple[Vec, Vec]   # (lam, mu) with disjoint support


class RankMismatch(ValueError):
    pass


class ParseError(ValueError):
    """Syntax error in an element literal; ``pos`` is the offending offset."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


def _clean(terms: Mapping) -> Dict:
    return {k: v for k, v in terms.items() if v}


def _add_into(acc: Dict, key, c: int) -> None:
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class _Element:
    __slots__ = ("rank", "_terms", "_hash")

    def __init__(self, rank: int, terms: Optional[Mapping] = None):
        if rank < 1:
            raise ValueError("torus rank must be >= 1")
        self.rank = rank
        self._terms = _clean(terms or {})
        self._hash = None

    @property
    def terms(self) -> Dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if type(other) is not type(self):
            if isinstance(other, int):
                return self == type(self).constant(self.rank, other)
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.rank, frozenset(self._terms.items())))
        return self._hash

    def _check(self, other):
        if isinstance(other, int):
            return type(self).constant(self.rank, other)
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.rank != self.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")
        return other

    def __add__(self, other):
        other = self._check(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            _add_into(acc, k, c)
        return type(self)(self.rank, acc)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.rank, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int):
        return type(self)(self.rank, {k: c * v for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return self._mul(self._check(other))

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported here")
        result = type(self).constant(self.rank, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        return f"{type(self).__name__}({format_element(self)!r}, rank={self.rank})"

    def __str__(self):
        return format_element(self)


# ---------------------------------------------------------------------------
# presented model

@lru_cache(maxsize=None)
def _reduce_xy(a: int, b: int) -> Tuple[Tuple[Tuple[int, int], int], ...]:
    """x^a y^b in one variable pair, as reduced (a', b') -> coefficient."""
    if a == 0 or b == 0:
        return (((a, b), 1),)
    # x^a y^b = x^(a-1) y^(b-1) * xy = -x^a y^(b-1) - x^(a-1) y^b
    acc: Dict[Tuple[int, int], int] = {}
    for key, c in _reduce_xy(a, b - 1):
        _add_into(acc, key, -c)
    for key, c in _reduce_xy(a - 1, b):
        _add_into(acc, key, -c)
    return tuple(sorted(acc.items()))


def _reduce_monomial(lam: Iterable[int], mu: Iterable[int]) -> Dict[ReducedMonomial, int]:
    factors = [_reduce_xy(a, b) for a, b in zip(lam, mu)]
    out: Dict[ReducedMonomial, int] = {}
    for combo in product(*factors):
        c = 1
        for _, ci in combo:
            c *= ci
        key = (tuple(k[0] for k, _ in combo), tuple(k[1] for k, _ in combo))
        _add_into(out, key, c)
    return out


class PresentedElement(_Element):
    """Element of ``Z[x, y] / (x_i y_i + x_i + y_i)`` in reduced normal form.

    ``terms`` maps ``(lam, mu)`` to a nonzero integer.  Non-reduced keys are
    accepted by :meth:`from_monomials` and rewritten on construction.
    """

    __slots__ = ()

    def __init__(self, rank: int, terms: Optional[Mapping[ReducedMonomial, int]] = None):
        super().__init__(rank, terms)
        for lam, mu in self._terms:
            if len(lam) != rank or len(mu) != rank:
                raise RankMismatch("exponent vector length differs from rank")
            if any(a and b for a, b in zip(lam, mu)) or min(lam + mu, default=0) < 0:
                raise ValueError(f"monomial {(lam, mu)} is not reduced; use from_monomials")

    @classmethod
    def from_monomials(cls, rank: int, terms: Mapping[ReducedMonomial, int]) -> "PresentedElement":
        acc: Dict[ReducedMonomial, int] = {}
        for (lam, mu), c in terms.items():
            if not c:
                continue
            for key, ci in _reduce_monomial(lam, mu).items():
                _add_into(acc, key, c * ci)
        return cls(rank, acc)

    @classmethod
    def constant(cls, rank: int, c: int = 1) -> "PresentedElement":
        z = (0,) * rank
        return cls(rank, {(z, z): c})

    @classmethod
    def x(cls, rank: int, i: int, e: int = 1) -> "PresentedElement":
        lam = tuple(e if j == i else 0 for j in range(rank))
        return cls(rank, {(lam, (0,) * rank): 1})

    @classmethod
    def y(cls, rank: int, i: int, e: int = 1) -> "PresentedElement":
        mu = tuple(e if j == i else 0 for j in range(rank))
        return cls(rank, {((0,) * rank, mu): 1})

    @classmethod
    def monomial(cls, lam: Vec, mu: Vec, c: int = 1) -> "PresentedElement":
        return cls.from_monomials(len(lam), {(tuple(lam), tuple(mu)): c})

    def degree(self) -> int:
        return max((sum(l) + sum(m) for l, m in self._terms), default=0)

    def coefficient(self, lam: Vec, mu: Vec) -> int:
        return self._terms.get((tuple(lam), tuple(mu)), 0)

    def _mul(self, other: "PresentedElement") -> "PresentedElement":
        acc: Dict[ReducedMonomial, int] = {}
        for (l1, m1), c1 in self._terms.items():
            for (l2, m2), c2 in other._terms.items():
                lam = tuple(a + b for a, b in zip(l1, l2))
                mu = tuple(a + b for a, b in zip(m1, m2))
                for key, c in _reduce_monomial(lam, mu).items():
                    _add_into(acc, key, c1 * c2 * c)
        return PresentedElement(self.rank, acc)


def mul_presented(a: PresentedElement, b: PresentedElement) -> PresentedElement:
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} vs {b.rank}")
    return a * b


# ---------------------------------------------------------------------------
# Laurent model

class LaurentElement(_Element):
    """Element of the group ring ``Z[Z^t]``; ``terms`` maps exponent vectors to coefficients."""

    __slots__ = ()

    def __init__(self, rank: int, terms: Optional[Mapping[Vec, int]] = None):
        super().__init__(rank, terms)
        for lam in self._terms:
            if len(lam) != rank:
                raise RankMismatch("exponent vector length differs from rank")

    @classmethod
    def constant(cls, rank: int, c: int = 1) -> "LaurentElement":
        return cls(rank, {(0,) * rank: c})

    @classmethod
    def u(cls, lam: Iterable[int], c: int = 1) -> "LaurentElement":
        lam = tuple(lam)
        return cls(len(lam), {lam: c})

    def coefficient(self, lam: Vec) -> int:
        return self._terms.get(tuple(lam), 0)

    def l1_degree(self) -> int:
        return max((sum(abs(a) for a in lam) for lam in self._terms), default=0)

    def _mul(self, other: "LaurentElement") -> "LaurentElement":
        acc: Dict[Vec, int] = {}
        for l1, c1 in self._terms.items():
            for l2, c2 in other._terms.items():
                _add_into(acc, tuple(a + b for a, b in zip(l1, l2)), c1 * c2)
        return LaurentElement(self.rank, acc)


AnyRingElement = Union[PresentedElement, LaurentElement]


def involution(a):
    """Duality involution: swaps x_i and y_i, or sends u^lam to u^-lam."""
    if isinstance(a, PresentedElement):
        return PresentedElement(a.rank, {(mu, lam): c for (lam, mu), c in a.items()})
    if isinstance(a, LaurentElement):
        return LaurentElement(a.rank, {tuple(-e for e in lam): c for lam, c in a.items()})
    raise TypeError(type(a).__name__)


def augmentation(a) -> int:
    if isinstance(a, PresentedElement):
        z = (0,) * a.rank
        return a.coefficient(z, z)
    if isinstance(a, LaurentElement):
        return sum(c for _, c in a.items())
    if isinstance(a, TruncatedElement):
        return a.coefficient((0,) * a.rank)
    raise TypeError(type(a).__name__)


@lru_cache(maxsize=None)
def _laurent_of_xy(a: int, b: int) -> Tuple[Tuple[int, int], ...]:
    # (u - 1)^a (u^-1 - 1)^b as exponent -> coefficient
    acc: Dict[int, int] = {}
    for i in range(a + 1):
        for j in range(b + 1):
            _add_into(acc, i - j, comb(a, i) * (-1) ** (a - i) * comb(b, j) * (-1) ** (b - j))
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=None)
def _presented_of_u(k: int) -> Tuple[Tuple[Tuple[int, int], int], ...]:
    # u^k = (x + 1)^k, or (y + 1)^-k for negative k
    if k >= 0:
        return tuple(((i, 0), comb(k, i)) for i in range(k + 1))
    return tuple(((0, j), comb(-k, j)) for j in range(-k + 1))


def to_laurent(a: PresentedElement) -> LaurentElement:
    acc: Dict[Vec, int] = {}
    for (lam, mu), c in a.items():
        for combo in product(*(_laurent_of_xy(l, m) for l, m in zip(lam, mu))):
            ci = c
            for _, v in combo:
                ci *= v
            _add_into(acc, tuple(e for e, _ in combo), ci)
    return LaurentElement(a.rank, acc)


def to_presented(b: LaurentElement) -> PresentedElement:
    acc: Dict[ReducedMonomial, int] = {}
    for lam, c in b.items():
        for combo in product(*(_presented_of_u(k) for k in lam)):
            ci = c
            for _, v in combo:
                ci *= v
            key = (tuple(k[0] for k, _ in combo), tuple(k[1] for k, _ in combo))
            _add_into(acc, key, ci)
    return PresentedElement(b.rank, acc)


def class_of_weight(lam: Iterable[int]) -> PresentedElement:
    """Class of the rank-one representation of weight ``lam``: prod (x_i + 1)^lam_i."""
    return to_presented(LaurentElement.u(lam))


def reduced_monomials(rank: int, max_degree: int):
    """All reduced monomials (lam, mu) of total degree <= max_degree, in a fixed order."""
    per_index = [(0, 0)] + [(d, 0) for d in range(1, max_degree + 1)] + [(0, d) for d in range(1, max_degree + 1)]
    out = []
    for combo in product(per_index, repeat=rank):
        if sum(a + b for a, b in combo) <= max_degree:
            out.append((tuple(a for a, _ in combo), tuple(b for _, b in combo)))
    out.sort(key=lambda m: (sum(m[0]) + sum(m[1]), m))
    return out


# ---------------------------------------------------------------------------
# truncated Borel rings

class TruncatedElement(_Element):
    """Element of ``B_r = Z[z_1..z_t] / (z_i^(2r+1))``.

    ``stage`` r = 0 is allowed and gives ``B_0 = Z`` (the point).
    """

    __slots__ = ("stage",)

    def __init__(self, rank: int, stage: int, terms: Optional[Mapping[Vec, int]] = None):
        if stage < 0:
            raise ValueError("stage must be >= 0")
        self.stage = stage
        cap = 2 * stage
        super().__init__(rank, {e: c for e, c in (terms or {}).items() if max(e, default=0) <= cap})
        for e in self._terms:
            if len(e) != rank or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {e}")

    @classmethod
    def constant(cls, rank: int, c: int = 1, stage: int = 1) -> "TruncatedElement":
        return cls(rank, stage, {(0,) * rank: c})

    @classmethod
    def z(cls, rank: int, stage: int, i: int, e: int = 1) -> "TruncatedElement":
        return cls(rank, stage, {tuple(e if j == i else 0 for j in range(rank)): 1})

    def coefficient(self, e: Vec) -> int:
        return self._terms.get(tuple(e), 0)

    def __eq__(self, other):
        if isinstance(other, TruncatedElement):
            return self.rank == other.rank and self.stage == other.stage and self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({(0,) * self.rank: other} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(("T", self.rank, self.stage, frozenset(self._terms.items())))

    def _check(self, other):
        if isinstance(other, int):
            return TruncatedElement(self.rank, self.stage, {(0,) * self.rank: other})
        if not isinstance(other, TruncatedElement):
            raise TypeError(type(other).__name__)
        if (other.rank, other.stage) != (self.rank, self.stage):
            raise RankMismatch("rank or stage mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            _add_into(acc, k, c)
        return TruncatedElement(self.rank, self.stage, acc)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedElement(self.rank, self.stage, {k: -c for k, c in self._terms.items()})

    def scale(self, c: int):
        return TruncatedElement(self.rank, self.stage, {k: c * v for k, v in self._terms.items()})

    def __pow__(self, n: int):
        result = TruncatedElement.constant(self.rank, 1, self.stage)
        for _ in range(n):
            result = result * self
        return result

    def _mul(self, other):
        cap = 2 * self.stage
        acc: Dict[Vec, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if max(e) <= cap:
                    _add_into(acc, e, c1 * c2)
        return TruncatedElement(self.rank, self.stage, acc)

    def __repr__(self):
        return f"TruncatedElement({format_element(self)!r}, rank={self.rank}, stage={self.stage})"


def _binomial_series(k: int, cap: int) -> Dict[int, int]:
    """(1 + z)^k truncated at z^cap, for any integer k."""
    if k >= 0:
        return {j: comb(k, j) for j in range(min(k, cap) + 1)}
    n = -k
    return {j: (-1) ** j * comb(n + j - 1, j) for j in range(cap + 1)}


def borel_project(a, r: int) -> TruncatedElement:
    """The ring map R -> B_r with u_i -> 1 + z_i (so x_i -> z_i)."""
    if isinstance(a, PresentedElement):
        a = to_laurent(a)
    if not isinstance(a, LaurentElement):
        raise TypeError(type(a).__name__)
    cap = 2 * r
    acc: Dict[Vec, int] = {}
    for lam, c in a.items():
        series = [sorted(_binomial_series(k, cap).items()) for k in lam]
        for combo in product(*series):
            ci = c
            for _, v in combo:
                ci *= v
            _add_into(acc, tuple(j for j, _ in combo), ci)
    return TruncatedElement(a.rank, r, acc)


def truncated_involution(b: TruncatedElement) -> TruncatedElement:
    """Duality on B_r: z_i -> (1 + z_i)^-1 - 1."""
    cap = 2 * b.stage
    images = []
    for i in range(b.rank):
        s = _binomial_series(-1, cap)
        s[0] -= 1
        images.append(TruncatedElement(b.rank, b.stage,
                                       {tuple(j if k == i else 0 for k in range(b.rank)): c for j, c in s.items()}))
    out = TruncatedElement(b.rank, b.stage)
    for e, c in b.items():
        term = TruncatedElement.constant(b.rank, c, b.stage)
        for i, k in enumerate(e):
            term = term * images[i] ** k
        out = out + term
    return out


class _NotNilpotent:
    def __repr__(self):
        return "NOT_NILPOTENT"

    def __bool__(self):
        return False


NOT_NILPOTENT = _NotNilpotent()


def nilpotency_index(a: TruncatedElement):
    """Smallest m >= 1 with a^m = 0, or ``NOT_NILPOTENT`` when the constant term is nonzero."""
    if augmentation(a) != 0:
        return NOT_NILPOTENT
    bound = a.rank * 2 * a.stage + 1
    power = a
    for m in range(1, bound + 1):
        if not power:
            return m
        power = power * a
    raise AssertionError(f"zero-constant element not nilpotent within a-priori bound {bound}")


# ---------------------------------------------------------------------------
# element literals

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[xyu])(?P<idx>\d+)(?:\^(?P<exp>-?\d+))?|(?P<op>[+\-*]))")


def parse_element(text: str, rank: Optional[int] = None):
    """Parse an element literal into a PresentedElement or LaurentElement.

    ``u`` factors select the Laurent model; ``x``/``y`` factors the presented
    model.  Mixing the two in one literal is a syntax error.
    """
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r}", pos)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        tokens.append((m, start))
        pos = m.end()
    if not tokens:
        raise ParseError("empty expression", 0)

    kinds = {m.group("var") for m, _ in tokens if m.group("var")}
    laurent = "u" in kinds
    if laurent and kinds & {"x", "y"}:
        raise ParseError("cannot mix u factors with x/y factors", 0)
    max_idx = max((int(m.group("idx")) for m, _ in tokens if m.group("var")), default=1)
    if rank is None:
        rank = max(max_idx, 1)

    # term := [sign] factor ('*' factor)* ; factor := num | var
    terms = []
    i = 0
    sign = 1
    expect_factor = True
    current = None
    while i < len(tokens):
        m, at = tokens[i]
        op = m.group("op")
        if expect_factor:
            if op in ("+", "-") and current is None:
                sign = -sign if op == "-" else sign
                i += 1
                continue
            if op is not None:
                raise ParseError(f"expected a factor, found {op!r}", at)
            factor = _factor(m, at, rank, laurent)
            current = factor if current is None else current * factor
            expect_factor = False
        else:
            if op == "*":
                expect_factor = True
            elif op in ("+", "-"):
                terms.append(current.scale(sign))
                current = None
                sign = -1 if op == "-" else 1
                expect_factor = True
            else:
                raise ParseError("expected an operator", at)
        i += 1
    if expect_factor:
        raise ParseError("expression ends with an operator", len(text))
    terms.append(current.scale(sign))
    cls = LaurentElement if laurent else PresentedElement
    total = cls.constant(rank, 0)
    for t in terms:
        total = total + t
    return total


def _factor(m, at, rank, laurent):
    cls = LaurentElement if laurent else PresentedElement
    if m.group("num") is not None:
        return cls.constant(rank, int(m.group("num")))
    var, idx = m.group("var"), int(m.group("idx"))
    if idx < 1 or idx > rank:
        raise ParseError(f"index {idx} out of range 1..{rank}", at)
    e = 1 if m.group("exp") is None else int(m.group("exp"))
    if var == "u":
        if e == 0:
            raise ParseError("u exponent must be nonzero", at)
        return LaurentElement.u(tuple(e if j == idx - 1 else 0 for j in range(rank)))
    if e < 1:
        raise ParseError(f"{var} exponent must be >= 1", at)
    return (PresentedElement.x if var == "x" else PresentedElement.y)(rank, idx - 1, e)


def _power(name: str, i: int, e: int) -> str:
    return f"{name}{i + 1}" if e == 1 else f"{name}{i + 1}^{e}"


def format_element(a) -> str:
    if isinstance(a, PresentedElement):
        def factors(key):
            lam, mu = key
            return [_power("x", i, e) for i, e in enumerate(lam) if e] + \
                   [_power("y", i, e) for i, e in enumerate(mu) if e]
        order = sorted(a.items(), key=lambda kv: (-(sum(kv[0][0]) + sum(kv[0][1])),
                                                 tuple(-e for e in kv[0][0]), tuple(-e for e in kv[0][1])))
    elif isinstance(a, LaurentElement):
        def factors(key):
            return [_power("u", i, e) for i, e in enumerate(key) if e]
        order = sorted(a.items(), key=lambda kv: (-sum(abs(e) for e in kv[0]), tuple(-e for e in kv[0])))
    elif isinstance(a, TruncatedElement):
        def factors(key):
            return [_power("z", i, e) for i, e in enumerate(key) if e]
        order = sorted(a.items(), key=lambda kv: (-sum(kv[0]), kv[0]))
    else:
        raise TypeError(type(a).__name__)
    if not order:
        return "0"
    parts = []
    for n, (key, c) in enumerate(order):
        fs = factors(key)
        mag = abs(c)
        body = "*".join(([str(mag)] if mag != 1 or not fs else []) + fs)
        if n == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)
