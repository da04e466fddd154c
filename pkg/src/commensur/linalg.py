"""Exact integer and rational linear algebra.

Everything here works on Python integers, so no value ever overflows or
rounds.  Matrices act on column vectors; the composite ``g o f`` of two maps
is the matrix product ``G @ F``.  Empty matrices (zero rows or zero columns)
are legal and describe maps to or from the zero group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import MalformedInput, NotASublattice, RankMismatch


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence[int]], rows: int | None = None) -> "IntMatrix":
        cols = [list(c) for c in cols]
        if rows is None:
            rows = len(cols[0]) if cols else 0
        return cls.from_rows([[c[i] for c in cols] for i in range(rows)], len(cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def to_cols(self) -> list:
        return [self.col(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows([self.col(j) for j in range(self.cols)], self.rows)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return IntMatrix.from_rows(_mul(self.to_rows(), other.to_rows(), other.cols), other.cols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def apply(self, v: Sequence[int]) -> list:
        return [sum(self.entries[i * self.cols + j] * v[j] for j in range(self.cols))
                for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "IntMatrix":
        rows, cols = list(rows), list(cols)
        return IntMatrix.from_rows([[self[i, j] for j in cols] for i in rows], len(cols))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return IntMatrix.from_rows(
            [self.row(i) + other.row(i) for i in range(self.rows)], self.cols + other.cols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("vstack needs equal column counts")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": [str(x) for x in self.entries]}

    @classmethod
    def from_json(cls, obj) -> "IntMatrix":
        if isinstance(obj, list):
            return cls.from_rows([[int(x) for x in r] for r in obj])
        try:
            return cls(int(obj["rows"]), int(obj["cols"]), tuple(int(x) for x in obj["entries"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad matrix encoding: {exc}") from exc

    def __repr__(self):
        return f"IntMatrix({self.to_rows()!r})"


def _mul(a, b, bcols):
    out = []
    for row in a:
        acc = [0] * bcols
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(bcols):
                    acc[j] += x * bk[j]
        out.append(acc)
    return out


def xgcd(a: int, b: int):
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)


def rat_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rat(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad rational {s!r}") from exc


# --- Hermite and Smith forms ---------------------------------------------------


@dataclass(frozen=True)
class HnfResult:
    h: IntMatrix
    u: IntMatrix
    rank: int


@dataclass(frozen=True)
class SnfResult:
    d: tuple
    u: IntMatrix
    v: IntMatrix


def _row_combine(rows, i, k, a, b, c, d):
    # rows i, k <- (a*ri + b*rk, c*ri + d*rk)
    ri, rk = rows[i], rows[k]
    rows[i] = [a * x + b * y for x, y in zip(ri, rk)]
    rows[k] = [c * x + d * y for x, y in zip(ri, rk)]


def _hnf_rows(a, ncols, track):
    """Row HNF in place on list-of-lists ``a``; ``track`` is updated alike."""
    m = len(a)
    r = 0
    for j in range(ncols):
        if r == m:
            break
        for i in range(r + 1, m):
            if a[i][j] == 0:
                continue
            if a[r][j] == 0:
                a[r], a[i] = a[i], a[r]
                track[r], track[i] = track[i], track[r]
                continue
            x, y = a[r][j], a[i][j]
            g, s, t = xgcd(x, y)
            p, q = x // g, y // g
            _row_combine(a, r, i, s, t, -q, p)
            _row_combine(track, r, i, s, t, -q, p)
        if a[r][j] == 0:
            continue
        if a[r][j] < 0:
            a[r] = [-x for x in a[r]]
            track[r] = [-x for x in track[r]]
        p = a[r][j]
        for k in range(r):
            f = a[k][j] // p
            if f:
                a[k] = [x - f * y for x, y in zip(a[k], a[r])]
                track[k] = [x - f * y for x, y in zip(track[k], track[r])]
        r += 1
    return r


def hnf(a: IntMatrix) -> HnfResult:
    """Row Hermite normal form ``h = u @ a`` with ``u`` unimodular.

    Pivots are positive and the entries above each pivot lie in
    ``[0, pivot)``, so the form is canonical for the row space of ``a``.
    """
    rows = a.to_rows()
    u = IntMatrix.identity(a.rows).to_rows()
    rank = _hnf_rows(rows, a.cols, u)
    return HnfResult(IntMatrix.from_rows(rows, a.cols), IntMatrix.from_rows(u, a.rows), rank)


def snf(a: IntMatrix) -> SnfResult:
    """Smith normal form: ``u @ a @ v == diag(d)`` padded with zeros.

    ``d`` lists only the nonzero invariant factors, each positive, with
    ``d[0] | d[1] | ...``.
    """
    m, n = a.rows, a.cols
    s = a.to_rows()
    u = IntMatrix.identity(m).to_rows()
    # columns of v are tracked as rows of vt
    vt = IntMatrix.identity(n).to_rows()
    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j] and (piv is None or abs(s[i][j]) < abs(s[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        if i != t:
            s[t], s[i] = s[i], s[t]
            u[t], u[i] = u[i], u[t]
        if j != t:
            for row in s:
                row[t], row[j] = row[j], row[t]
            vt[t], vt[j] = vt[j], vt[t]
        while True:
            for i in range(t + 1, m):
                if s[i][t]:
                    x, y = s[t][t], s[i][t]
                    if y % x == 0:
                        f = y // x
                        s[i] = [b - f * a for a, b in zip(s[t], s[i])]
                        u[i] = [b - f * a for a, b in zip(u[t], u[i])]
                        continue
                    g, p, q = xgcd(x, y)
                    _row_combine(s, t, i, p, q, -(y // g), x // g)
                    _row_combine(u, t, i, p, q, -(y // g), x // g)
            for j in range(t + 1, n):
                if s[t][j]:
                    x, y = s[t][t], s[t][j]
                    if y % x == 0:
                        f = y // x
                        for row in s:
                            row[j] -= f * row[t]
                        vt[j] = [b - f * a for a, b in zip(vt[t], vt[j])]
                        continue
                    g, p, q = xgcd(x, y)
                    a0, b0, c0, d0 = p, q, -(y // g), x // g
                    for row in s:
                        row[t], row[j] = a0 * row[t] + b0 * row[j], c0 * row[t] + d0 * row[j]
                    _row_combine(vt, t, j, a0, b0, c0, d0)
            if any(s[i][t] for i in range(t + 1, m)):
                continue
            pv = s[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if s[i][j] % pv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            s[t] = [x + y for x, y in zip(s[t], s[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    d = tuple(s[i][i] for i in range(t))
    v = IntMatrix.from_rows(vt, n).T if n else IntMatrix.zeros(0, 0)
    return SnfResult(d, IntMatrix.from_rows(u, m), v)


def det(a: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = a.to_rows()
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


def rank(a: IntMatrix) -> int:
    return hnf(a).rank


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a saturated basis of ``{x in Z^cols : a @ x == 0}``.

    The basis is returned in canonical (Hermite-reduced) form.
    """
    res = hnf(a.T)
    k = [res.u.row(i) for i in range(res.rank, a.cols)]
    if not k:
        return IntMatrix.zeros(a.cols, 0)
    reduced = hnf(IntMatrix.from_rows(k, a.cols))
    return IntMatrix.from_rows(reduced.h.to_rows()[:reduced.rank], a.cols).T


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """Canonical basis (as columns) of the lattice spanned by the columns of ``gens``."""
    res = hnf(gens.T)
    if res.rank == 0:
        return IntMatrix.zeros(gens.rows, 0)
    return IntMatrix.from_rows(res.h.to_rows()[:res.rank], gens.rows).T


def solve_int(a: IntMatrix, b: IntMatrix):
    """Some integer ``x`` with ``a @ x == b``, or ``None`` if there is none."""
    if a.rows != b.rows:
        raise ValueError("row count mismatch")
    res = snf(a)
    c = (res.u @ b).to_rows()
    r = len(res.d)
    y = []
    for i in range(a.cols):
        if i < r:
            row = []
            for x in c[i]:
                q, rem = divmod(x, res.d[i])
                if rem:
                    return None
                row.append(q)
            y.append(row)
        else:
            y.append([0] * b.cols)
    for i in range(r, a.rows):
        if any(c[i]):
            return None
    return res.v @ IntMatrix.from_rows(y, b.cols)


def solve_mod(a: IntMatrix, b: IntMatrix, moduli: Sequence[int]):
    """Integer ``x`` with ``a @ x == b`` where row ``i`` is read modulo ``moduli[i]``.

    A modulus of 0 means the row must hold exactly.  Returns ``None`` when no
    solution exists.
    """
    extra = [i for i, m in enumerate(moduli) if m]
    rel = IntMatrix.from_rows(
        [[moduli[i] if i == e else 0 for e in extra] for i in range(a.rows)], len(extra))
    sol = solve_int(a.hstack(rel), b)
    if sol is None:
        return None
    return sol.submatrix(range(a.cols), range(sol.cols))


def lattice_index(sup: IntMatrix, sub: IntMatrix) -> Fraction:
    """Index of the lattice spanned by ``sub`` in the one spanned by ``sup``."""
    if sup.rows != sub.rows:
        raise ValueError("lattices live in different ambient spaces")
    bsup, bsub = lattice_basis(sup), lattice_basis(sub)
    if bsup.cols != bsub.cols:
        raise RankMismatch(f"ranks {bsup.cols} and {bsub.cols} differ")
    x = solve_int(bsup, bsub)
    if x is None:
        raise NotASublattice("second lattice is not contained in the first")
    return Fraction(abs(det(x)))


def lattice_intersect(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Basis of the intersection of the lattices spanned by ``a`` and ``b``."""
    a, b = lattice_basis(a), lattice_basis(b)
    if a.cols == 0 or b.cols == 0:
        return IntMatrix.zeros(a.rows, 0)
    k = kernel_basis(a.hstack(-b))
    if k.cols == 0:
        return IntMatrix.zeros(a.rows, 0)
    return lattice_basis(a @ k.submatrix(range(a.cols), range(k.cols)))


def is_unimodular(u: IntMatrix) -> bool:
    return u.rows == u.cols and abs(det(u)) == 1


# --- rational helpers ----------------------------------------------------------
# Rational matrices are plain lists of rows of Fractions.


def to_q(a) -> list:
    if isinstance(a, IntMatrix):
        return [[Fraction(x) for x in r] for r in a.to_rows()]
    return [[Fraction(x) for x in r] for r in a]


def q_mul(a, b) -> list:
    n = len(b[0]) if b else 0
    return [[sum((x * b[k][j] for k, x in enumerate(row) if x), Fraction(0)) for j in range(n)]
            for row in a]


def q_identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def q_inverse(a) -> list | None:
    """Inverse of a square rational matrix, or ``None`` when singular."""
    n = len(a)
    m = [list(r) + q_identity(n)[i] for i, r in enumerate(to_q(a))]
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return None
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [r[n:] for r in m]


def q_rank(a) -> int:
    m = to_q(a)
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(r + 1, rows):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def clear_denominators(a) -> tuple:
    """Return ``(int_matrix, den)`` with ``a == int_matrix / den``, ``den > 0`` minimal."""
    rows = to_q(a)
    den = 1
    for r in rows:
        for x in r:
            den = lcm(den, x.denominator)
    cols = len(rows[0]) if rows else 0
    return IntMatrix.from_rows([[int(x * den) for x in r] for r in rows], cols), den


def q_is_integral(a) -> bool:
    return all(Fraction(x).denominator == 1 for r in a for x in r)
