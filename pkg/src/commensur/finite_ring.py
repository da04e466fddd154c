"""Finite rings, their unit groups and Jacobson radicals.

A ring is stored by its additive group (invariant-factor form) and the
products of pairs of additive generators.  Elements are coordinate tuples;
the element with index ``i`` is ``ring.add.element_at(i)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Callable, Sequence

import numpy as np
from sympy import factorint

from . import kernels
from .abelian import (
    AbHom,
    FgAbGroup,
    hom_certify,
    image,
    kernel,
    preimage_of_zero,
    present,
    relation_matrix,
    subgroup_of_moduli,
)
from .correspondence import Context
from .errors import CapExceeded, MalformedInput, NotPrimePower
from .linalg import IntMatrix, lcm, solve_mod

DEFAULT_CAP = 65536
# multiplication tables are N x N int32
TABLE_CAP = 2048


@dataclass(frozen=True)
class FiniteRing:
    add: FgAbGroup
    mult: tuple
    unity: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.add.is_finite:
            raise ValueError("finite rings need a finite additive group")
        k = self.add.ngens
        mult = tuple(tuple(self.add.reduce(self.mult[i][j]) for j in range(k)) for i in range(k))
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "unity", self.add.reduce(self.unity))
        d = self.add.torsion
        for i in range(k):
            for j in range(k):
                g = gcd(d[i], d[j])
                if any(x * g % m for x, m in zip(mult[i][j], d)):
                    raise ValueError("structure constants do not respect additive orders")
        basis = [tuple(int(a == b) for b in range(k)) for a in range(k)]
        for a in basis:
            if self.mul(self.unity, a) != a or self.mul(a, self.unity) != a:
                raise ValueError("unity is not a two-sided identity")
        for a, b, c in itertools.product(basis, repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise ValueError("multiplication is not associative")

    @property
    def size(self) -> int:
        return self.add.order

    @property
    def zero(self) -> tuple:
        return (0,) * self.add.ngens

    def mul(self, a: Sequence[int], b: Sequence[int]) -> tuple:
        k = self.add.ngens
        acc = [0] * k
        for i in range(k):
            if a[i]:
                for j in range(k):
                    if b[j]:
                        c = a[i] * b[j]
                        for t, x in enumerate(self.mult[i][j]):
                            acc[t] += c * x
        return self.add.reduce(acc)

    def plus(self, a, b) -> tuple:
        return self.add.reduce([x + y for x, y in zip(a, b)])

    def neg(self, a) -> tuple:
        return self.add.reduce([-x for x in a])

    def minus(self, a, b) -> tuple:
        return self.add.reduce([x - y for x, y in zip(a, b)])

    def index(self, a) -> int:
        return self.add.index_of(a)

    def element(self, i: int) -> tuple:
        return self.add.element_at(i)

    def elements(self) -> list:
        return list(self.add.elements())

    def left_mult(self, a) -> IntMatrix:
        """Additive endomorphism ``x -> a x`` as a matrix."""
        k = self.add.ngens
        cols = [self.mul(a, tuple(int(i == j) for i in range(k))) for j in range(k)]
        return IntMatrix.from_cols(cols, k)

    def right_mult(self, a) -> IntMatrix:
        k = self.add.ngens
        cols = [self.mul(tuple(int(i == j) for i in range(k)), a) for j in range(k)]
        return IntMatrix.from_cols(cols, k)

    @cached_property
    def _coords(self) -> np.ndarray:
        return np.array(self.elements(), dtype=np.int64).reshape(self.size, self.add.ngens)

    def _radix(self) -> np.ndarray:
        d = self.add.torsion
        r = [1] * len(d)
        for i in range(len(d) - 2, -1, -1):
            r[i] = r[i + 1] * d[i + 1]
        return np.array(r, dtype=np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        n = self.size
        if n > TABLE_CAP:
            raise CapExceeded(n, TABLE_CAP, "multiplication table rows")
        e = self._coords
        k = self.add.ngens
        idx = np.zeros((n, n), dtype=np.int64)
        radix = self._radix()
        for t, d in enumerate(self.add.torsion):
            c = np.array([[self.mult[i][j][t] for j in range(k)] for i in range(k)], dtype=np.int64)
            idx += ((e @ c @ e.T) % d) * radix[t]
        return np.ascontiguousarray(idx.astype(np.int32))

    @cached_property
    def one_minus(self) -> np.ndarray:
        """Index of ``1 - x`` for every element index ``x``."""
        e = self._coords
        d = np.array(self.add.torsion, dtype=np.int64)
        vals = (np.array(self.unity, dtype=np.int64) - e) % d
        return np.ascontiguousarray((vals @ self._radix()).astype(np.int32))

    def to_json(self) -> dict:
        return {
            "add": self.add.to_json(),
            "mult": [[[str(x) for x in self.mult[i][j]] for j in range(self.add.ngens)]
                     for i in range(self.add.ngens)],
            "unity": [str(x) for x in self.unity],
        }

    @classmethod
    def from_json(cls, obj) -> "FiniteRing":
        try:
            add = FgAbGroup.from_json(obj["add"])
            mult = tuple(tuple(tuple(int(x) for x in v) for v in row) for row in obj["mult"])
            return cls(add, mult, tuple(int(x) for x in obj["unity"]), obj.get("name", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad finite ring encoding: {exc}") from exc

    def __str__(self):
        return self.name or f"ring({self.add})"


@dataclass(frozen=True)
class FiniteRingHom:
    src: FiniteRing
    dst: FiniteRing
    map: IntMatrix

    def __post_init__(self):
        h = AbHom(self.src.add, self.dst.add, self.map)
        object.__setattr__(self, "map", h.mat)
        k = self.src.add.ngens
        basis = [tuple(int(a == b) for b in range(k)) for a in range(k)]
        for a, b in itertools.product(basis, repeat=2):
            if self(self.src.mul(a, b)) != self.dst.mul(self(a), self(b)):
                raise ValueError("map does not preserve products")
        if self(self.src.unity) != self.dst.unity:
            raise ValueError("map does not preserve unity")

    def __call__(self, a) -> tuple:
        return self.dst.add.reduce(self.map.apply(a))

    @property
    def additive(self) -> AbHom:
        return AbHom(self.src.add, self.dst.add, self.map)

    def __matmul__(self, other: "FiniteRingHom") -> "FiniteRingHom":
        return FiniteRingHom(other.src, self.dst, self.map @ other.map)

    @classmethod
    def identity(cls, r: FiniteRing) -> "FiniteRingHom":
        return cls(r, r, IntMatrix.identity(r.add.ngens))


# --- constructors ----------------------------------------------------------------


def from_cyclic_product(moduli: Sequence[int], basis_mul: Callable, unity: Sequence[int],
                        name: str = "") -> tuple:
    """Build a ring on ``Z/m1 + Z/m2 + ...`` from products of basis vectors.

    ``basis_mul(i, j)`` returns the product of basis vectors ``i`` and ``j``
    in the same coordinates.  Returns ``(ring, proj, sect)`` where ``proj``
    converts old coordinates to the ring's canonical ones and ``sect`` goes
    back.
    """
    pres = present(relation_matrix(moduli))
    k = len(moduli)
    table = [[list(basis_mul(i, j)) for j in range(k)] for i in range(k)]

    def old_mul(a, b):
        acc = [0] * k
        for i in range(k):
            if a[i]:
                for j in range(k):
                    if b[j]:
                        for t in range(k):
                            acc[t] += a[i] * b[j] * table[i][j][t]
        return acc

    g = pres.group
    sect_cols = pres.sect.to_cols()
    mult = tuple(
        tuple(tuple(pres.proj.apply(old_mul(sect_cols[a], sect_cols[b]))) for b in range(g.ngens))
        for a in range(g.ngens))
    ring = FiniteRing(g, mult, tuple(pres.proj.apply(list(unity))), name)
    return ring, pres.proj, pres.sect


def zmod(n: int) -> FiniteRing:
    if n < 2:
        raise ValueError("Z/n needs n >= 2")
    return FiniteRing(FgAbGroup(0, (n,)), (((1,),),), (1,), f"Z/{n}")


def product(*rings: FiniteRing) -> tuple:
    """Direct product; returns ``(ring, proj, sect)`` relative to concatenated coordinates."""
    mods, offsets = [], []
    for r in rings:
        offsets.append(len(mods))
        mods.extend(r.add.torsion)
    k = len(mods)

    def basis_mul(i, j):
        out = [0] * k
        for r, off in zip(rings, offsets):
            n = r.add.ngens
            if off <= i < off + n and off <= j < off + n:
                out[off:off + n] = r.mult[i - off][j - off]
        return out

    unity = [x for r in rings for x in r.unity]
    name = " x ".join(str(r) for r in rings)
    return from_cyclic_product(mods, basis_mul, unity, name)


def product_projection(prod_data, rings, which: int) -> FiniteRingHom:
    ring, proj, sect = prod_data
    off = sum(r.add.ngens for r in rings[:which])
    tgt = rings[which]
    rows = sect.submatrix(range(off, off + tgt.add.ngens), range(sect.cols))
    return FiniteRingHom(ring, tgt, rows)


def into_product(prod_data, maps: Sequence[FiniteRingHom]) -> FiniteRingHom:
    """The map ``x -> (f1(x), f2(x), ...)`` into a product built by :func:`product`."""
    ring, proj, sect = prod_data
    stacked = maps[0].map
    for m in maps[1:]:
        stacked = stacked.vstack(m.map)
    return FiniteRingHom(maps[0].src, ring, proj @ stacked)


def _is_prime(p: int) -> bool:
    return p >= 2 and factorint(p) == {p: 1}


def _irreducible(p: int, r: int) -> list:
    """First monic irreducible polynomial of degree ``r`` over F_p (coefficients low to high)."""
    for tail in itertools.product(range(p), repeat=r):
        poly = list(tail) + [1]
        if poly[0] == 0 and r > 1:
            continue
        if r == 1 or not _has_factor(poly, p):
            return poly
    raise ValueError("no irreducible polynomial found")


def _poly_mod(a, m, p):
    a = [x % p for x in a]
    while len(a) >= len(m):
        if a[-1]:
            c = a[-1]
            shift = len(a) - len(m)
            for i, x in enumerate(m):
                a[shift + i] = (a[shift + i] - c * x) % p
        a.pop()
    return a


def _has_factor(poly, p):
    r = len(poly) - 1
    for deg in range(1, r // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            m = list(tail) + [1]
            if not any(_poly_mod(poly, m, p)):
                return True
    return False


def galois_field(q: int) -> FiniteRing:
    fac = factorint(q)
    if len(fac) != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    (p, r), = fac.items()
    if r == 1:
        ring = zmod(p)
        return FiniteRing(ring.add, ring.mult, ring.unity, f"F_{q}")
    poly = _irreducible(p, r)

    def basis_mul(i, j):
        prod_ = [0] * (i + j + 1)
        prod_[i + j] = 1
        red = _poly_mod(prod_, poly, p)
        return red + [0] * (r - len(red))

    ring, _, _ = from_cyclic_product([p] * r, basis_mul, [1] + [0] * (r - 1), f"F_{q}")
    return ring


def matrix_ring_over(base: FiniteRing, n: int, name: str = "") -> FiniteRing:
    """``M(n, base)`` with coordinates ordered by (row, column, base generator)."""
    k = base.add.ngens
    mods = list(base.add.torsion) * (n * n)

    def pos(i, j, a):
        return (i * n + j) * k + a

    def basis_mul(x, y):
        i, j, a = x // (n * k), (x // k) % n, x % k
        l, m, b = y // (n * k), (y // k) % n, y % k
        out = [0] * len(mods)
        if j == l:
            for t, c in enumerate(base.mult[a][b]):
                out[pos(i, m, t)] = c
        return out

    unity = [0] * len(mods)
    for i in range(n):
        for t, c in enumerate(base.unity):
            unity[pos(i, i, t)] = c
    ring, _, _ = from_cyclic_product(mods, basis_mul, unity, name or f"M_{n}({base})")
    return ring


def matrix_ring(q: int, n: int, cap: int = DEFAULT_CAP) -> FiniteRing:
    """``M(n, F_q)``; limited to ``q <= 9`` and ``n <= 3``."""
    if q > 9 or n > 3 or n < 1:
        raise CapExceeded(max(q, n), 9 if q > 9 else 3, "matrix ring parameters")
    fac = factorint(q)
    if len(fac) != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    size = q ** (n * n)
    if size > cap:
        raise CapExceeded(size, cap)
    field_ = galois_field(q)
    if n == 1:
        return field_
    return matrix_ring_over(field_, n, f"M_{n}(F_{q})")


def subring(ring: FiniteRing, gens: Sequence[Sequence[int]], name: str = "") -> FiniteRingHom:
    """Smallest subring containing ``gens``; returned as its inclusion map."""
    k = ring.add.ngens
    vecs = [tuple(ring.unity)] + [tuple(g) for g in gens]
    # close the additive span under multiplication
    while True:
        sub = subgroup_of_moduli(IntMatrix.from_cols(vecs, k), ring.add.moduli)
        basis = [tuple(c) for c in sub.incl.to_cols()]
        new = []
        for a, b in itertools.product(basis, repeat=2):
            c = ring.mul(a, b)
            if solve_mod(sub.incl, IntMatrix.from_cols([c], k), ring.add.moduli) is None:
                new.append(c)
        if not new:
            break
        vecs = basis + new
    return _ring_on_embedding(sub.group, [sub.incl], [ring], name)


def _ring_on_embedding(group: FgAbGroup, embs: Sequence[IntMatrix], rings: Sequence[FiniteRing],
                       name: str = "") -> FiniteRingHom:
    """Ring structure on ``group`` embedded componentwise into ``prod(rings)``.

    Returns the map to ``rings[0]``; callers needing the other components use
    the same matrices.
    """
    emb = embs[0]
    for e in embs[1:]:
        emb = emb.vstack(e)
    mods = [m for r in rings for m in r.add.moduli]
    cols = [[e.col(j) for j in range(group.ngens)] for e in embs]

    def lift(parts):
        rhs = IntMatrix.from_cols([[x for p in parts for x in p]], len(mods))
        sol = solve_mod(emb, rhs, mods)
        if sol is None:
            raise ValueError("product leaves the subring")
        return tuple(sol.col(0))

    k = group.ngens
    mult = tuple(
        tuple(lift([r.mul(cols[t][a], cols[t][b]) for t, r in enumerate(rings)]) for b in range(k))
        for a in range(k))
    unity = lift([r.unity for r in rings])
    sub = FiniteRing(group, mult, unity, name)
    return FiniteRingHom(sub, rings[0], embs[0])


def quotient(ring: FiniteRing, ideal_gens: Sequence[Sequence[int]], name: str = "") -> FiniteRingHom:
    """Quotient by the two-sided ideal generated by ``ideal_gens``; returns the projection."""
    k = ring.add.ngens
    elems_basis = [tuple(int(i == j) for i in range(k)) for j in range(k)]
    vecs = [tuple(g) for g in ideal_gens]
    while True:
        sub = subgroup_of_moduli(IntMatrix.from_cols(vecs, k) if vecs else IntMatrix.zeros(k, 0),
                                 ring.add.moduli)
        basis = [tuple(c) for c in sub.incl.to_cols()]
        new = []
        for a in basis:
            for e in elems_basis:
                for c in (ring.mul(a, e), ring.mul(e, a)):
                    if solve_mod(sub.incl, IntMatrix.from_cols([c], k), ring.add.moduli) is None:
                        new.append(c)
        if not new:
            break
        vecs = basis + new
    rel = sub.incl.hstack(ring.add.relations())
    pres = present(rel)
    g = pres.group
    sect_cols = pres.sect.to_cols()
    mult = tuple(tuple(tuple(pres.proj.apply(ring.mul(sect_cols[a], sect_cols[b])))
                       for b in range(g.ngens)) for a in range(g.ngens))
    q = FiniteRing(g, mult, tuple(pres.proj.apply(list(ring.unity))), name)
    return FiniteRingHom(ring, q, pres.proj)


def upper_triangular(base: FiniteRing, n: int) -> FiniteRingHom:
    """Upper triangular matrices as a subring of ``M(n, base)``."""
    big = matrix_ring_over(base, n)
    k = base.add.ngens
    # generators: e_ij (i <= j) times each base generator, in old coordinates
    mods = list(base.add.torsion) * (n * n)
    pres = present(relation_matrix(mods))
    gens = []
    for i in range(n):
        for j in range(i, n):
            for a in range(k):
                v = [0] * len(mods)
                v[(i * n + j) * k + a] = 1
                gens.append(tuple(pres.proj.apply(v)))
    return subring(big, gens, f"T_{n}({base})")


# --- units and radicals ------------------------------------------------------------


def _check_cap(ring: FiniteRing, cap: int):
    if ring.size > cap:
        raise CapExceeded(ring.size, cap)


def _is_bijective(ring: FiniteRing, m: IntMatrix) -> bool:
    return kernel(AbHom(ring.add, ring.add, m)).group.order == 1


def unit_inverse_indices(ring: FiniteRing) -> np.ndarray:
    """Index of the two-sided inverse of each element, -1 for non-units."""
    return kernels.unit_inverse(ring.mul_table, ring.index(ring.unity))


def unit_indices(ring: FiniteRing, cap: int = DEFAULT_CAP) -> list:
    _check_cap(ring, cap)
    if ring.size <= TABLE_CAP:
        inv = unit_inverse_indices(ring)
        return [int(i) for i in np.nonzero(inv >= 0)[0]]
    # x is a unit iff x* and *x are both bijective: xy = 1 = zx forces y = z
    return [i for i, x in enumerate(ring.elements())
            if _is_bijective(ring, ring.left_mult(x)) and _is_bijective(ring, ring.right_mult(x))]


def unit_group(ring: FiniteRing, cap: int = DEFAULT_CAP) -> list:
    """All two-sided units, as coordinate tuples."""
    return [ring.element(i) for i in unit_indices(ring, cap)]


def is_unit(ring: FiniteRing, x) -> bool:
    return _is_bijective(ring, ring.left_mult(x)) and _is_bijective(ring, ring.right_mult(x))


def jacobson_radical(ring: FiniteRing, cap: int = DEFAULT_CAP) -> list:
    """Elements ``y`` with ``1 - x y z`` a unit for all ``x``, ``z``."""
    _check_cap(ring, min(cap, TABLE_CAP))
    inv = unit_inverse_indices(ring)
    mask = kernels.radical_mask(ring.mul_table, ring.one_minus, (inv >= 0).astype(np.uint8))
    return [ring.element(int(i)) for i in np.nonzero(mask)[0]]


def centre(ring: FiniteRing):
    """Centre as a subgroup of the additive group (solved linearly, not enumerated)."""
    k = ring.add.ngens
    basis = [tuple(int(i == j) for i in range(k)) for j in range(k)]
    blocks = None
    for b in basis:
        d = ring.right_mult(b) - ring.left_mult(b)
        blocks = d if blocks is None else blocks.vstack(d)
    return preimage_of_zero(blocks, ring.add.moduli, ring.add.moduli * k)


@dataclass(frozen=True)
class UnitIsogenyReport:
    ring_ker: int
    ring_coker: int
    ring_index: Fraction
    unit_ker: int
    unit_coker: int
    unit_index: Fraction
    ring_surjective: bool
    unit_surjective: bool
    units_onto_image: bool

    @property
    def unit_map_is_isogeny(self) -> bool:
        return self.unit_ker >= 1 and self.unit_coker >= 1

    @property
    def surjectivity_preserved(self) -> bool:
        return self.unit_surjective or not self.ring_surjective

    @property
    def ok(self) -> bool:
        return self.unit_map_is_isogeny and self.surjectivity_preserved and self.units_onto_image

    def to_json(self) -> dict:
        return {
            "ring_ker": self.ring_ker, "ring_coker": self.ring_coker,
            "ring_index": str(self.ring_index), "unit_ker": self.unit_ker,
            "unit_coker": self.unit_coker, "unit_index": str(self.unit_index),
            "unit_map_is_isogeny": self.unit_map_is_isogeny,
            "ring_surjective": self.ring_surjective, "unit_surjective": self.unit_surjective,
            "surjectivity_preserved": self.surjectivity_preserved,
            "units_onto_image": self.units_onto_image,
        }


def check_unit_isogeny(h: FiniteRingHom, cap: int = DEFAULT_CAP) -> UnitIsogenyReport:
    """Measure the induced map on unit groups by enumeration."""
    cert = hom_certify(h.additive)
    src_units = unit_group(h.src, cap)
    dst_units = set(unit_group(h.dst, cap))
    images = [h(u) for u in src_units]
    if not set(images) <= dst_units:
        raise AssertionError("a unit mapped to a non-unit")
    one = h.dst.unity
    ker = sum(1 for v in images if v == one)
    img = set(images)
    coker = len(dst_units) // len(img)
    ring_image = {h(x) for x in h.src.elements()}
    image_units = {v for v in dst_units if v in ring_image}
    return UnitIsogenyReport(
        ring_ker=cert.ker_order, ring_coker=cert.coker_order, ring_index=cert.index,
        unit_ker=ker, unit_coker=coker, unit_index=Fraction(coker, ker),
        ring_surjective=cert.coker_order == 1, unit_surjective=img == dst_units,
        units_onto_image=img == image_units,
    )


def unit_quotient_exponent(ring: FiniteRing, cap: int = DEFAULT_CAP) -> int:
    """Exponent of ``B^x / (Z(B)^x [B^x, B^x])``."""
    _check_cap(ring, min(cap, TABLE_CAP))
    mul = ring.mul_table
    inv = unit_inverse_indices(ring)
    units = np.nonzero(inv >= 0)[0].astype(np.int32)
    u, v = np.meshgrid(units, units, indexing="ij")
    comm = mul[mul[u, v], mul[inv[u], inv[v]]]
    gens = set(np.unique(comm).tolist())
    z = centre(ring)
    for vec in itertools.product(*(range(d) for d in z.group.torsion)):
        x = ring.add.reduce(z.incl.apply(list(vec)))
        i = ring.index(x)
        if inv[i] >= 0:
            gens.add(i)
    member = kernels.closure(mul, sorted(gens), ring.index(ring.unity))
    return int(kernels.quotient_exponent(mul, member, units))


# --- catalogue ---------------------------------------------------------------------


def _reduction(src: FiniteRing, dst: FiniteRing) -> FiniteRingHom:
    return FiniteRingHom(src, dst, IntMatrix.identity(1))


def unit_isogeny_catalog() -> list:
    """Named ring homomorphisms used to exercise unit isogenies."""
    out = []
    for n, m in [(4, 2), (8, 4), (8, 2), (16, 4), (9, 3), (27, 9), (25, 5), (12, 6), (12, 4)]:
        out.append((f"Z/{n} -> Z/{m}", _reduction(zmod(n), zmod(m))))
    z2 = zmod(2)
    out.append(("id Z/2", FiniteRingHom.identity(z2)))

    for n, (a, b) in [(6, (2, 3)), (12, (4, 3)), (10, (2, 5))]:
        ra, rb = zmod(a), zmod(b)
        pdata = product(ra, rb)
        out.append((f"Z/{n} -> Z/{a} x Z/{b}",
                    into_product(pdata, [_reduction(zmod(n), ra), _reduction(zmod(n), rb)])))
    for rs, which in [((zmod(2), zmod(3)), 0), ((zmod(4), zmod(9)), 1), ((galois_field(4), zmod(2)), 0)]:
        pdata = product(*rs)
        out.append((f"{pdata[0]} -> {rs[which]}", product_projection(pdata, rs, which)))
    for r in (zmod(4), galois_field(2), zmod(3)):
        pdata = product(r, r)
        ident = FiniteRingHom.identity(r)
        out.append((f"diag {r} -> {r} x {r}", into_product(pdata, [ident, ident])))

    m2z4 = matrix_ring_over(zmod(4), 2)
    m2z2 = matrix_ring_over(zmod(2), 2)
    out.append(("scalars Z/4 -> M_2(Z/4)", subring(m2z4, [], "Z/4 scalars")))
    tri = upper_triangular(zmod(4), 2)
    out.append(("T_2(Z/4) -> M_2(Z/4)", tri))
    e11 = [0] * 4
    e11[0] = 1
    out.append(("diagonal -> M_2(Z/4)", subring(m2z4, [tuple(e11)], "diag(Z/4)")))
    # reduction mod 2 acts coordinatewise on matrix entries
    out.append(("M_2(Z/4) -> M_2(Z/2)", FiniteRingHom(m2z4, m2z2, IntMatrix.identity(4))))
    red = quotient(tri.src, [tuple(2 * x for x in tri.src.unity)], "T_2(Z/4)/2")
    out.append(("T_2(Z/4) -> T_2(Z/4)/2", red))

    f4 = galois_field(4)
    out.append(("F_2 -> F_4", subring(f4, [], "F_2")))
    m2f2 = matrix_ring(2, 2)
    out.append(("F_2 -> M_2(F_2)", subring(m2f2, [], "F_2 scalars")))
    # companion matrix of x^2 + x + 1 generates a copy of F_4
    comp = _matrix_vec(m2f2, [[0, 1], [1, 1]], 2)
    out.append(("F_4 -> M_2(F_2)", subring(m2f2, [comp], "F_4 in M_2(F_2)")))
    dual = _dual_numbers(2)
    out.append(("F_2[e] -> F_2", quotient(dual, [(0, 1)], "F_2")))
    dual4 = _dual_numbers(4)
    out.append(("Z/4[e] -> Z/4", quotient(dual4, [(0, 1)], "Z/4")))
    out.append(("Z/4[e] -> Z/4[e]/(2)", quotient(dual4, [(2, 0)], "F_2[e]")))
    return out


def _matrix_vec(ring: FiniteRing, rows, n: int) -> tuple:
    # only valid for rings built by matrix_ring_over over a prime field
    flat = [x for r in rows for x in r]
    return ring.add.reduce(flat)


def _dual_numbers(n: int) -> FiniteRing:
    def basis_mul(i, j):
        if i == 0:
            return [1, 0] if j == 0 else [0, 1]
        return [0, 1] if j == 0 else [0, 0]

    ring, _, _ = from_cyclic_product([n, n], basis_mul, [1, 0], f"Z/{n}[e]")
    return ring


class FiniteRingContext(Context):
    """Finite rings with ring homomorphisms; indices measured on additive groups."""

    name = "finite-ring"

    def source(self, f):
        return f.src

    def target(self, f):
        return f.dst

    def identity(self, obj):
        return FiniteRingHom.identity(obj)

    def compose(self, g, f):
        return g @ f

    def certify(self, f):
        return hom_certify(f.additive)

    def fibre_product(self, f: FiniteRingHom, h: FiniteRingHom):
        x, y = f.src, h.src
        mods = x.add.moduli + y.add.moduli
        sub = preimage_of_zero(f.map.hstack(-h.map), mods, f.dst.add.moduli)
        top = sub.incl.submatrix(range(x.add.ngens), range(sub.group.ngens))
        bot = sub.incl.submatrix(range(x.add.ngens, len(mods)), range(sub.group.ngens))
        p0 = _ring_on_embedding(sub.group, [top, bot], [x, y], f"{x} x_{f.dst} {y}")
        p1 = FiniteRingHom(p0.src, y, bot)
        return p0.src, p0, p1

    def lift(self, fp, a, b):
        w, p0, p1 = fp
        emb = p0.map.vstack(p1.map)
        mods = p0.dst.add.moduli + p1.dst.add.moduli
        sol = solve_mod(emb, a.map.vstack(b.map), mods)
        if sol is None:
            raise ValueError("legs do not factor through the fibre product")
        return FiniteRingHom(a.src, w, sol)

    def encode_object(self, obj):
        return obj.to_json()

    def encode_map(self, f):
        return {"src": f.src.to_json(), "dst": f.dst.to_json(), "map": f.map.to_json()}

    def decode_object(self, data):
        return FiniteRing.from_json(data)

    def decode_map(self, data):
        return FiniteRingHom(FiniteRing.from_json(data["src"]), FiniteRing.from_json(data["dst"]),
                             IntMatrix.from_json(data["map"]))


FINITE_RINGS = FiniteRingContext()


def unit_map_image(h: FiniteRingHom, cap: int = DEFAULT_CAP) -> list:
    return sorted({h(u) for u in unit_group(h.src, cap)})


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, v)
    return out
