"""Exact integer linear algebra: Smith normal form, lattices, integer solving.

Matrices are plain lists of lists of Python ints (arbitrary precision).
Sparse vectors are dicts ``index -> nonzero int``.
"""

from __future__ import annotations

from typing import Dict, Hashable, List, Optional, Sequence, Tuple

Matrix = List[List[int]]
SparseVec = Dict[int, int]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        o = out[i]
        for k in range(inner):
            r = row[k]
            if r:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        o[j] += r * bk[j]
    return out


def matvec(a: Matrix, v: Sequence[int]) -> List[int]:
    return [sum(r * x for r, x in zip(row, v) if r and x) for row in a]


def transpose(a: Matrix, ncols: Optional[int] = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with g = s*a + t*b = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def determinant(a: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(M: Matrix, ncols: Optional[int] = None, with_inverse: bool = False):
    """Smith normal form ``U * M * V = D``.

    Pivot rule: smallest nonzero absolute value in the active block, ties
    broken row-major.  Diagonal entries are nonnegative and each divides the
    next.  Returns ``(U, D, V)``, or ``(U, D, V, U_inv)`` when ``with_inverse``.
    """
    m = len(M)
    n = len(M[0]) if M else (ncols or 0)
    A = [row[:] for row in M]
    U = identity(m)
    Ui = identity(m) if with_inverse else None
    V = identity(n)

    def row_add(dst, src, q):       # row_dst += q * row_src
        if not q:
            return
        ad, asrc = A[dst], A[src]
        for j in range(n):
            if asrc[j]:
                ad[j] += q * asrc[j]
        ud, us = U[dst], U[src]
        for j in range(m):
            if us[j]:
                ud[j] += q * us[j]
        if Ui is not None:          # inverse: col_src -= q * col_dst
            for row in Ui:
                if row[dst]:
                    row[src] -= q * row[dst]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        if Ui is not None:
            for row in Ui:
                row[i] = -row[i]

    def col_add(dst, src, q):       # col_dst += q * col_src
        if not q:
            return
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]

    def col_swap(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    for k in range(min(m, n)):
        while True:
            best = None
            for i in range(k, m):
                row = A[i]
                for j in range(k, n):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, pi, pj = best
            if pi != k:
                row_swap(pi, k)
            if pj != k:
                col_swap(pj, k)
            p = A[k][k]
            clean = True
            for i in range(k + 1, m):
                if A[i][k]:
                    row_add(i, k, -(A[i][k] // p))
                    if A[i][k]:
                        clean = False
            for j in range(k + 1, n):
                if A[k][j]:
                    col_add(j, k, -(A[k][j] // p))
                    if A[k][j]:
                        clean = False
            if not clean:
                continue
            bad = None
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(k, bad, 1)
        if best is None:
            break
        if A[k][k] < 0:
            row_neg(k)
    if with_inverse:
        return U, A, V, Ui
    return U, A, V


def diagonal(D: Matrix) -> List[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def integer_kernel(M: Matrix, ncols: int) -> Matrix:
    """Basis of {x in Z^ncols : M x = 0}, as a list of vectors."""
    if not M:
        return identity(ncols)
    _, D, V = smith_normal_form(M)
    r = sum(1 for d in diagonal(D) if d)
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]


def solve_integer(M: Matrix, b: Sequence[int], ncols: int) -> Optional[List[int]]:
    """Some integer x with M x = b, or None."""
    if not M:
        return [0] * ncols if not any(b) else None
    U, D, V = smith_normal_form(M)
    c = matvec(U, b)
    y = [0] * ncols
    for i, ci in enumerate(c):
        d = D[i][i] if i < ncols else 0
        if d:
            if ci % d:
                return None
            y[i] = ci // d
        elif ci:
            return None
    return matvec(V, y)


class Lattice:
    """Incrementally maintained echelon basis of a sublattice of Z^n.

    Each basis vector has a distinct pivot (its smallest nonzero index) with a
    positive pivot entry.  When ``track`` is set, every basis vector carries
    the integer combination of inserted tags that produced it, so membership
    answers come with explicit witnesses.  Insertion order fixes the result.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self._basis: Dict[int, Tuple[SparseVec, Dict[Hashable, int]]] = {}

    def __len__(self):
        return len(self._basis)

    @staticmethod
    def _axpy(v: SparseVec, q: int, w: SparseVec) -> None:
        for k, x in w.items():
            y = v.get(k, 0) + q * x
            if y:
                v[k] = y
            else:
                v.pop(k, None)

    def add(self, vec, tag: Hashable = None) -> bool:
        """Insert a vector; returns False when it was already in the span."""
        v = _sparse(vec)
        c: Dict[Hashable, int] = {tag: 1} if self.track else {}
        basis = self._basis
        while v:
            p = min(v)
            if p not in basis:
                if v[p] < 0:
                    v = {k: -x for k, x in v.items()}
                    c = {k: -x for k, x in c.items()}
                basis[p] = (v, c)
                return True
            w, cw = basis[p]
            a, b = v[p], w[p]
            if a % b == 0:
                q = -(a // b)
                self._axpy(v, q, w)
                if self.track:
                    self._axpy(c, q, cw)
                continue
            g, s, t = xgcd(a, b)
            new = {}
            self._axpy(new, s, v)
            self._axpy(new, t, w)
            rest = {}
            self._axpy(rest, b // g, v)
            self._axpy(rest, -(a // g), w)
            if self.track:
                cnew, crest = {}, {}
                self._axpy(cnew, s, c)
                self._axpy(cnew, t, cw)
                self._axpy(crest, b // g, c)
                self._axpy(crest, -(a // g), cw)
                c = crest
                basis[p] = (new, cnew)
            else:
                basis[p] = (new, {})
            v = rest
        return False

    def express(self, vec) -> Optional[Dict[Hashable, int]]:
        """Combination of inserted tags equal to ``vec``, or None if not in the lattice."""
        v = _sparse(vec)
        c: Dict[Hashable, int] = {}
        basis = self._basis
        while v:
            p = min(v)
            if p not in basis:
                return None
            w, cw = basis[p]
            q, r = divmod(v[p], w[p])
            if r:
                return None
            self._axpy(v, -q, w)
            if self.track:
                self._axpy(c, q, cw)
        return c

    def __contains__(self, vec) -> bool:
        return self.express(vec) is not None

    def basis(self) -> List[SparseVec]:
        return [dict(self._basis[p][0]) for p in sorted(self._basis)]

    def pivots(self) -> List[int]:
        return sorted(self._basis)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(v in self for v in other.basis())

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return len(self) == len(other) and self.contains_lattice(other) and other.contains_lattice(self)


def _sparse(vec) -> SparseVec:
    if isinstance(vec, dict):
        return {k: x for k, x in vec.items() if x}
    return {i: x for i, x in enumerate(vec) if x}


def dense(v: SparseVec, n: int) -> List[int]:
    out = [0] * n
    for k, x in v.items():
        out[k] = x
    return out
