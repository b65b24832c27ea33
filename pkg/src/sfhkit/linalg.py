"""Exact linear algebra.

Homology over the two-element field, integer lattices (Hermite and Smith
normal forms, integral solving) and a small exact rational simplex used for
admissibility and enumeration bounds.  Pivoting always picks the smallest
admissible index so every basis produced here is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import NotAChainComplex


# ---------------------------------------------------------------------------
# Matrices over F2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SparseMatrixF2:
    rows: int
    cols: int
    entries: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for r, c in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry {(r, c)} outside {self.rows}x{self.cols}")

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrixF2":
        return cls(rows, cols, frozenset())

    @classmethod
    def identity(cls, n: int) -> "SparseMatrixF2":
        return cls(n, n, frozenset((i, i) for i in range(n)))

    @classmethod
    def from_pairs(cls, rows: int, cols: int, pairs: Iterable) -> "SparseMatrixF2":
        """Build from (row, col) pairs, cancelling repeated pairs mod 2."""
        acc = set()
        for p in pairs:
            acc ^= {tuple(p)}
        return cls(rows, cols, frozenset(acc))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[int]) -> "SparseMatrixF2":
        """Columns given as integer bitsets over the row index."""
        ent = []
        for c, bits in enumerate(columns):
            r = 0
            while bits:
                if bits & 1:
                    ent.append((r, c))
                bits >>= 1
                r += 1
        return cls(rows, len(columns), frozenset(ent))

    def column_bits(self) -> list[int]:
        cols = [0] * self.cols
        for r, c in self.entries:
            cols[c] |= 1 << r
        return cols

    def row_bits(self) -> list[int]:
        rows = [0] * self.rows
        for r, c in self.entries:
            rows[r] |= 1 << c
        return rows

    def __getitem__(self, rc) -> int:
        return 1 if tuple(rc) in self.entries else 0

    def __matmul__(self, other: "SparseMatrixF2") -> "SparseMatrixF2":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        mine = self.column_bits()
        out = []
        for bits in other.column_bits():
            acc = 0
            k = 0
            while bits:
                if bits & 1:
                    acc ^= mine[k]
                bits >>= 1
                k += 1
            out.append(acc)
        return SparseMatrixF2.from_columns(self.rows, out)

    def __add__(self, other: "SparseMatrixF2") -> "SparseMatrixF2":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return SparseMatrixF2(self.rows, self.cols, self.entries ^ other.entries)

    def transpose(self) -> "SparseMatrixF2":
        return SparseMatrixF2(self.cols, self.rows, frozenset((c, r) for r, c in self.entries))

    def is_zero(self) -> bool:
        return not self.entries

    def apply(self, vec: int) -> int:
        """Multiply by a column vector given as a bitset."""
        cols = self.column_bits()
        acc = 0
        k = 0
        while vec:
            if vec & 1:
                acc ^= cols[k]
            vec >>= 1
            k += 1
        return acc

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c in self.entries:
            out[r][c] = 1
        return out

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "SparseMatrixF2":
        nr = len(rows)
        nc = ncols if ncols is not None else (len(rows[0]) if rows else 0)
        return cls(nr, nc, frozenset((i, j) for i, row in enumerate(rows)
                                     for j, v in enumerate(row) if v % 2))

    def rank(self) -> int:
        return len(_Echelon(self.column_bits()).pivots)


def _low(v: int) -> int:
    return (v & -v).bit_length() - 1


class _Echelon:
    """Incremental F2 echelon basis keyed by lowest set bit."""

    def __init__(self, vectors: Iterable[int] = (), tags: Iterable[int] | None = None):
        self.pivots: dict[int, tuple[int, int]] = {}
        tags = list(tags) if tags is not None else None
        for i, v in enumerate(vectors):
            self.add(v, tags[i] if tags is not None else 0)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        while v:
            p = _low(v)
            hit = self.pivots.get(p)
            if hit is None:
                break
            v ^= hit[0]
            tag ^= hit[1]
        return v, tag

    def full_reduce(self, v: int) -> tuple[int, int]:
        """Reduce every pivot position (not just the leading one)."""
        tag = 0
        rest = 0
        while v:
            p = _low(v)
            hit = self.pivots.get(p)
            if hit is None:
                rest |= 1 << p
                v &= ~(1 << p)
            else:
                v ^= hit[0]
                tag ^= hit[1]
        return rest, tag

    def add(self, v: int, tag: int = 0) -> bool:
        v, tag = self.reduce(v, tag)
        if not v:
            return False
        self.pivots[_low(v)] = (v, tag)
        return True


def f2_kernel(m: SparseMatrixF2) -> list[int]:
    """Kernel basis as bitsets over the column index, smallest-index pivoting."""
    piv: dict[int, tuple[int, int]] = {}
    kernel = []
    for j, col in enumerate(m.column_bits()):
        v, combo = col, 1 << j
        while v:
            p = _low(v)
            hit = piv.get(p)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        if v:
            piv[_low(v)] = (v, combo)
        else:
            kernel.append(combo)
    return kernel


@dataclass(frozen=True)
class F2Homology:
    """ker(boundary) / im(next_boundary) with representatives and projection."""
    dim: int
    rank: int
    basis: tuple[int, ...]
    _image_and_basis: tuple = field(repr=False, compare=False, default=())

    def project(self, cycle: int) -> int:
        """Coordinates (bitset over basis indices) of the class of a cycle."""
        ech = _Echelon()
        for v, t in self._image_and_basis:
            ech.pivots[_low(v)] = (v, t)
        rest, tag = ech.full_reduce(cycle)
        if rest:
            raise ValueError("vector is not a cycle of this complex")
        return tag

    def basis_vectors(self) -> list[list[int]]:
        return [[(b >> i) & 1 for i in range(self.dim)] for b in self.basis]


def f2_homology(boundary: SparseMatrixF2, next_boundary: SparseMatrixF2,
                cycles: Iterable[int] | None = None) -> F2Homology:
    """Homology at the middle term of  C' --next--> C --boundary--> C''.

    ``cycles`` optionally spans ker(boundary) in a preferred order; the basis
    is then picked greedily from it.
    """
    if boundary.cols != next_boundary.rows:
        raise NotAChainComplex(
            f"dimension mismatch: boundary has {boundary.cols} columns, "
            f"next boundary has {next_boundary.rows} rows")
    if not (boundary @ next_boundary).is_zero():
        raise NotAChainComplex("boundary composed with next boundary is nonzero")
    n = boundary.cols
    ech = _Echelon()
    for col in next_boundary.column_bits():
        ech.add(col, 0)
    basis = []
    for z in (f2_kernel(boundary) if cycles is None else cycles):
        if boundary.apply(z):
            raise ValueError("candidate vector is not a cycle")
        if ech.add(z, 1 << len(basis)):
            basis.append(z)
    stored = tuple(ech.pivots.values())
    return F2Homology(n, len(basis), tuple(basis), stored)


# ---------------------------------------------------------------------------
# Integer lattices
# ---------------------------------------------------------------------------

def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf_rows(vectors: Iterable[Sequence[int]], width: int | None = None) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by the given rows.

    Zero rows are dropped.  Pivots are positive and entries above a pivot lie
    in [0, pivot).  The result is a canonical basis of the lattice.
    """
    rows = [list(v) for v in vectors]
    if width is None:
        width = len(rows[0]) if rows else 0
    out: list[list[int]] = []
    col = 0
    while rows and col < width:
        rows = [r for r in rows if any(r)]
        live = [r for r in rows if r[col] != 0]
        if not live:
            col += 1
            continue
        rest = [r for r in rows if r[col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            head = live[0]
            nxt = [head]
            for r in live[1:]:
                q = r[col] // head[col]
                r2 = [a - q * b for a, b in zip(r, head)]
                if r2[col] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        for i, prev in enumerate(out):
            q = prev[col] // piv[col]
            if q:
                out[i] = [a - q * b for a, b in zip(prev, piv)]
        out.append(piv)
        rows = rest
        col += 1
    return out


def hnf_pivot(row: Sequence[int]) -> int:
    for i, a in enumerate(row):
        if a:
            return i
    return -1


def lattice_residue(vec: Sequence[int], hnf: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Canonical representative of vec modulo the lattice with basis hnf."""
    v = list(vec)
    for row in hnf:
        p = hnf_pivot(row)
        q = v[p] // row[p]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def lattice_contains(vec: Sequence[int], hnf: Sequence[Sequence[int]]) -> bool:
    return not any(lattice_residue(vec, hnf))


def column_hnf(A: Sequence[Sequence[int]], ncols: int | None = None):
    """Column echelon form H = A V with V unimodular.

    Returns (H, V, pivots) where pivots lists (row, col) of the echelon
    pivots; the columns of V past the last pivot span the integer kernel.
    """
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    H = [list(r) for r in A]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(M, rows, k, j, a, b, c, d):
        # (col k, col j) <- (a*k + b*j, c*k + d*j)
        for i in range(rows):
            x, y = M[i][k], M[i][j]
            M[i][k], M[i][j] = a * x + b * y, c * x + d * y

    pivots = []
    k = 0
    for i in range(m):
        if k == n:
            break
        for j in range(k + 1, n):
            if H[i][j]:
                a, b = H[i][k], H[i][j]
                g, s, t = _egcd(a, b)
                colop(H, m, k, j, s, t, -b // g, a // g)
                colop(V, n, k, j, s, t, -b // g, a // g)
        if H[i][k]:
            if H[i][k] < 0:
                for M, rows in ((H, m), (V, n)):
                    for r in range(rows):
                        M[r][k] = -M[r][k]
            for j in range(k):
                q = H[i][j] // H[i][k]
                if q:
                    colop(H, m, j, k, 1, -q, 0, 1)
                    colop(V, n, j, k, 1, -q, 0, 1)
            pivots.append((i, k))
            k += 1
    return H, V, pivots


@dataclass(frozen=True)
class SolveResult:
    solution: tuple[int, ...] | None
    kernel: tuple[tuple[int, ...], ...]
    rational_solvable: bool

    @property
    def solvable(self) -> bool:
        return self.solution is not None

    @property
    def status(self) -> str:
        if self.solution is not None:
            return "solvable"
        return "integral-obstruction" if self.rational_solvable else "unsolvable"


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Canonical (row HNF) basis of the integer kernel of A."""
    _, V, piv = column_hnf(A, ncols)
    r = len(piv)
    raw = [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]
    return hnf_rows(raw, ncols)


def integer_solve(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None) -> SolveResult:
    """Integral solution of A x = b plus a canonical kernel basis."""
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if len(b) != m:
        raise ValueError("right-hand side length mismatch")
    H, V, piv = column_hnf(A, n)
    r = len(piv)
    kernel = hnf_rows([[V[i][j] for i in range(n)] for j in range(r, n)], n)
    y = [0] * n
    ok = True
    for i, k in piv:
        s = b[i] - sum(H[i][j] * y[j] for j in range(k))
        if s % H[i][k]:
            ok = False
            break
        y[k] = s // H[i][k]
    if ok:
        for i in range(m):
            if sum(H[i][j] * y[j] for j in range(r)) != b[i]:
                ok = False
                break
    if ok:
        x = tuple(sum(V[i][j] * y[j] for j in range(n)) for i in range(n))
        # shorten the particular solution against the kernel
        x = lattice_residue(x, kernel) if kernel else x
        return SolveResult(tuple(x), tuple(map(tuple, kernel)), True)
    rat = rational_rank([list(row) + [bi] for row, bi in zip(A, b)]) == rational_rank(A)
    return SolveResult(None, tuple(map(tuple, kernel)), rat)


def rational_rank(A: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in r] for r in A if len(r)]
    if not rows:
        return 0
    n = len(rows[0])
    rank = 0
    for c in range(n):
        p = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        pv = rows[rank][c]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / pv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def rational_solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Some rational solution of A x = b, or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    rows = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(m)]
    piv_cols = []
    rank = 0
    for c in range(n):
        p = next((i for i in range(rank, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        pv = rows[rank][c]
        rows[rank] = [a / pv for a in rows[rank]]
        for i in range(m):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * bb for a, bb in zip(rows[i], rows[rank])]
        piv_cols.append(c)
        rank += 1
    if any(rows[i][n] != 0 for i in range(rank, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][n]
    return x


@dataclass(frozen=True)
class SmithForm:
    D: tuple[tuple[int, ...], ...]
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        k = min(len(self.D), len(self.D[0]) if self.D else 0)
        return tuple(self.D[i][i] for i in range(k))

    def cokernel(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, torsion coefficients > 1) of Z^rows / image."""
        m = len(self.D)
        f = [d for d in self.invariant_factors if d]
        free = m - len(f)
        return free, tuple(d for d in f if d > 1)


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    """U A V = D with U, V unimodular and d1 | d2 | ... on the diagonal."""
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    D = [list(r) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst += q*row src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for M in (D, V):
            for r in M:
                r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return SmithForm(tuple(map(tuple, D)), tuple(map(tuple, U)), tuple(map(tuple, V)))


def determinant(M: Sequence[Sequence[int]]) -> Fraction:
    n = len(M)
    rows = [[Fraction(x) for x in r] for r in M]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det *= rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] / rows[c][c]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def int_matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


# ---------------------------------------------------------------------------
# Exact linear programming
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LPResult:
    status: str            # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None
    x: tuple[Fraction, ...] | None


def _run_simplex(T, basis, obj, ncols):
    """Minimise over the tableau with Bland's rule.  Returns False if unbounded."""
    m = len(T)
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return True
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        _pivot(T, basis, obj, best[1], enter)


def _pivot(T, basis, obj, r, c):
    pv = T[r][c]
    T[r] = [a / pv for a in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [a - f * b for a, b in zip(obj, T[r])]
    basis[r] = c


def lp_maximize(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
                lower: Sequence | None = None) -> LPResult:
    """Maximise c.x subject to A_ub x <= b_ub, A_eq x = b_eq.

    Variables are free unless ``lower`` gives per-variable lower bounds
    (None entries stay free).  Exact arithmetic throughout.
    """
    n = len(c)
    c = [Fraction(v) for v in c]
    lower = list(lower) if lower is not None else [None] * n
    # x_j = l_j + p_j  (bounded)   or   x_j = p_j - q_j  (free)
    cols = []  # (var index, sign)
    shift = [Fraction(l) if l is not None else Fraction(0) for l in lower]
    for j in range(n):
        cols.append((j, 1))
        if lower[j] is None:
            cols.append((j, -1))

    def expand(row):
        return [Fraction(row[j]) * s for j, s in cols]

    def offset(row):
        return sum(Fraction(row[j]) * shift[j] for j in range(n))

    rows, rhs = [], []
    n_ub = len(A_ub)
    nvar = len(cols)
    for i, row in enumerate(A_ub):
        base = expand(row) + [Fraction(int(k == i)) for k in range(n_ub)]
        rows.append(base)
        rhs.append(Fraction(b_ub[i]) - offset(row))
    for i, row in enumerate(A_eq):
        rows.append(expand(row) + [Fraction(0)] * n_ub)
        rhs.append(Fraction(b_eq[i]) - offset(row))
    total = nvar + n_ub
    cost = [-Fraction(c[j]) * s for j, s in cols] + [Fraction(0)] * n_ub
    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-a for a in rows[i]]
            rhs[i] = -rhs[i]
    # phase one
    T = [rows[i] + [Fraction(int(k == i)) for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = [total + i for i in range(m)]
    width = total + m
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for k in range(total):
            obj[k] -= T[i][k]
        obj[-1] -= T[i][-1]
    _run_simplex(T, basis, obj, width)
    if -obj[-1] != 0:
        return LPResult("infeasible", None, None)
    keep = []
    for i in range(m):
        if basis[i] >= total:
            j = next((k for k in range(total) if T[i][k] != 0), None)
            if j is None:
                continue
            _pivot(T, basis, obj, i, j)
        keep.append(i)
    T = [T[i][:total] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    obj = cost + [Fraction(0)]
    for i, bv in enumerate(basis):
        if obj[bv] != 0:
            f = obj[bv]
            obj = [a - f * b for a, b in zip(obj, T[i])]
    if not _run_simplex(T, basis, obj, total):
        return LPResult("unbounded", None, None)
    vals = [Fraction(0)] * total
    for i, bv in enumerate(basis):
        vals[bv] = T[i][-1]
    x = list(shift)
    for k, (j, s) in enumerate(cols):
        x[j] += s * vals[k]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return LPResult("optimal", value, tuple(x))


def lcm_of_denominators(vals: Iterable[Fraction]) -> int:
    out = 1
    for v in vals:
        d = Fraction(v).denominator
        out = out * d // gcd(out, d)
    return out
