"""Finitely generated abelian groups in invariant-factor form.

A group ``Z/d1 + ... + Z/dk + Z^n`` is stored as its torsion chain
``(d1, ..., dk)`` with ``d1 | d2 | ...`` and every ``di >= 2``, followed by
the free rank ``n``.  Generators are ordered torsion first, then free, which
is the order the Smith form produces them in.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, prod
from typing import Iterator, Sequence

from sympy import factorint

from .correspondence import Context, Correspondence
from .errors import MalformedInput, NotFinite, NotIsogeny, RankMismatch
from .linalg import IntMatrix, kernel_basis, lattice_basis, rat_str, snf, solve_int, solve_mod


@dataclass(frozen=True)
class FgAbGroup:
    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.rank < 0 or any(d < 2 for d in t):
            raise ValueError(f"invalid invariants rank={self.rank} torsion={t}")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a divisibility chain")

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.rank

    @property
    def moduli(self) -> tuple:
        """Order of each generator, with 0 for the free ones."""
        return self.torsion + (0,) * self.rank

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def order(self):
        return prod(self.torsion) if self.rank == 0 else None

    @property
    def exponent(self) -> int:
        return self.torsion[-1] if self.torsion else 1

    def relations(self) -> IntMatrix:
        return relation_matrix(self.moduli)

    def reduce(self, v: Sequence[int]) -> tuple:
        return tuple(x % m if m else x for x, m in zip(v, self.moduli))

    def elements(self) -> Iterator[tuple]:
        if self.rank:
            raise NotFinite("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.torsion))

    def index_of(self, v: Sequence[int]) -> int:
        i = 0
        for x, d in zip(v, self.torsion):
            i = i * d + x % d
        return i

    def element_at(self, i: int) -> tuple:
        out = []
        for d in reversed(self.torsion):
            i, r = divmod(i, d)
            out.append(r)
        return tuple(reversed(out))

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": [str(d) for d in self.torsion]}

    @classmethod
    def from_json(cls, obj) -> "FgAbGroup":
        try:
            return cls(int(obj.get("rank", 0)), tuple(int(d) for d in obj.get("torsion", [])))
        except (AttributeError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad abelian group encoding: {exc}") from exc

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        return cls(1, ()) if n == 0 else from_moduli([n])

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.rank
        return " + ".join(parts) or "0"


def relation_matrix(moduli: Sequence[int]) -> IntMatrix:
    """Columns ``m_i e_i`` for every nonzero modulus."""
    nz = [i for i, m in enumerate(moduli) if m]
    return IntMatrix.from_rows(
        [[moduli[i] if i == j else 0 for j in nz] for i in range(len(moduli))], len(nz))


def unimodular_inverse(u: IntMatrix) -> IntMatrix:
    inv = solve_int(u, IntMatrix.identity(u.rows))
    if inv is None:
        raise ValueError("matrix is not unimodular")
    return inv


@dataclass(frozen=True)
class Presentation:
    """Result of reducing ``Z^g / im(rel)`` to invariant-factor form.

    ``proj`` maps old coordinates to canonical ones; ``sect`` sends each
    canonical generator back to an old-coordinate representative.
    """

    group: FgAbGroup
    proj: IntMatrix
    sect: IntMatrix


def present(rel: IntMatrix) -> Presentation:
    g = rel.rows
    res = snf(rel)
    d = res.d
    keep = [i for i, x in enumerate(d) if x != 1] + list(range(len(d), g))
    torsion = tuple(x for x in d if x != 1)
    grp = FgAbGroup(g - len(d), torsion)
    uinv = unimodular_inverse(res.u) if g else IntMatrix.zeros(0, 0)
    proj = res.u.submatrix(keep, range(g))
    sect = uinv.submatrix(range(g), keep)
    mods = grp.moduli
    proj = IntMatrix.from_rows(
        [[x % mods[i] if mods[i] else x for x in proj.row(i)] for i in range(proj.rows)], g)
    return Presentation(grp, proj, sect)


def from_presentation(rel: IntMatrix) -> FgAbGroup:
    """Cokernel of ``rel`` (relations as columns) in invariant-factor form."""
    return present(rel).group


def from_moduli(moduli: Sequence[int]) -> FgAbGroup:
    """``Z/m1 + Z/m2 + ...`` with ``0`` standing for a copy of ``Z``."""
    return from_presentation(relation_matrix(moduli))


def direct_sum(*groups: FgAbGroup) -> Presentation:
    """Canonical form of a direct sum; coordinates are the concatenated ones."""
    mods = [m for g in groups for m in g.moduli]
    return present(relation_matrix(mods))


def _reduce_mat(mat: IntMatrix, moduli) -> IntMatrix:
    return IntMatrix.from_rows(
        [[x % moduli[i] if moduli[i] else x for x in mat.row(i)] for i in range(mat.rows)],
        mat.cols)


@dataclass(frozen=True)
class AbHom:
    """Homomorphism given by the images of the standard generators of ``src``."""

    src: FgAbGroup
    dst: FgAbGroup
    mat: IntMatrix

    def __post_init__(self):
        if self.mat.shape != (self.dst.ngens, self.src.ngens):
            raise ValueError(f"matrix shape {self.mat.shape} does not fit {self.src} -> {self.dst}")
        mat = _reduce_mat(self.mat, self.dst.moduli)
        object.__setattr__(self, "mat", mat)
        dm = self.dst.moduli
        for j, d in enumerate(self.src.torsion):
            for i in range(self.dst.ngens):
                x = d * mat[i, j]
                if (x % dm[i] if dm[i] else x) != 0:
                    raise ValueError(
                        f"generator {j} of order {d} cannot map to an element of other order")

    def __call__(self, v: Sequence[int]) -> tuple:
        return self.dst.reduce(self.mat.apply(v))

    def __matmul__(self, other: "AbHom") -> "AbHom":
        if other.dst != self.src:
            raise ValueError("maps are not composable")
        return AbHom(other.src, self.dst, self.mat @ other.mat)

    def __neg__(self):
        return AbHom(self.src, self.dst, -self.mat)

    def __add__(self, other: "AbHom"):
        return AbHom(self.src, self.dst, self.mat + other.mat)

    @classmethod
    def identity(cls, g: FgAbGroup) -> "AbHom":
        return cls(g, g, IntMatrix.identity(g.ngens))

    @classmethod
    def zero(cls, src: FgAbGroup, dst: FgAbGroup) -> "AbHom":
        return cls(src, dst, IntMatrix.zeros(dst.ngens, src.ngens))

    @classmethod
    def scalar(cls, g: FgAbGroup, k: int) -> "AbHom":
        return cls(g, g, IntMatrix.identity(g.ngens).scale(k))

    def to_json(self) -> dict:
        return {"src": self.src.to_json(), "dst": self.dst.to_json(), "mat": self.mat.to_json()}

    @classmethod
    def from_json(cls, obj) -> "AbHom":
        try:
            return cls(FgAbGroup.from_json(obj["src"]), FgAbGroup.from_json(obj["dst"]),
                       IntMatrix.from_json(obj["mat"]))
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad hom encoding: {exc}") from exc


@dataclass(frozen=True)
class IsogenyCertificate:
    ker_order: int
    coker_order: int
    index: Fraction


@dataclass(frozen=True)
class Subgroup:
    """A subgroup in canonical form together with its inclusion map."""

    group: FgAbGroup
    incl: IntMatrix


def subgroup_of_moduli(gens: IntMatrix, moduli: Sequence[int]) -> Subgroup:
    """Subgroup of ``Z^g / (moduli)`` generated by the columns of ``gens``."""
    rel = relation_matrix(moduli)
    lat = lattice_basis(gens.hstack(rel))
    rel_in_lat = solve_int(lat, rel)
    pres = present(rel_in_lat)
    incl = _reduce_mat(lat @ pres.sect, moduli)
    return Subgroup(pres.group, incl)


def preimage_of_zero(mat: IntMatrix, src_moduli, dst_moduli) -> Subgroup:
    """Kernel of the map ``mat`` between presented groups, as a subgroup of the source."""
    drel = relation_matrix(dst_moduli)
    k = kernel_basis(mat.hstack(drel))
    top = k.submatrix(range(mat.cols), range(k.cols))
    return subgroup_of_moduli(top, src_moduli)


def subgroup(g: FgAbGroup, gens: IntMatrix) -> Subgroup:
    return subgroup_of_moduli(gens, g.moduli)


def kernel(h: AbHom) -> Subgroup:
    return preimage_of_zero(h.mat, h.src.moduli, h.dst.moduli)


def image(h: AbHom) -> Subgroup:
    return subgroup(h.dst, h.mat)


def cokernel(h: AbHom) -> Presentation:
    return present(h.mat.hstack(h.dst.relations()))


def hom_certify(h: AbHom) -> IsogenyCertificate:
    """Kernel order, cokernel order and index of an isogeny; raises NotIsogeny."""
    ker = kernel(h).group
    cok = cokernel(h).group
    bad = [side for side, grp in (("kernel", ker), ("cokernel", cok)) if grp.rank]
    if bad:
        raise NotIsogeny("both" if len(bad) == 2 else bad[0])
    return IsogenyCertificate(ker.order, cok.order, Fraction(cok.order, ker.order))


def is_isogeny(h: AbHom) -> bool:
    try:
        hom_certify(h)
    except NotIsogeny:
        return False
    return True


def torsion_split(g: FgAbGroup):
    return g.rank, FgAbGroup(0, g.torsion)


def _primary_exponents(torsion: Sequence[int]) -> dict:
    parts: dict = {}
    for d in torsion:
        for p, e in factorint(d).items():
            parts.setdefault(p, []).append(e)
    return {p: sorted(es) for p, es in parts.items()}


def _aut_order_p(p: int, e: Sequence[int]) -> int:
    # e sorted ascending; count of invertible endomorphisms of a p-group
    n = len(e)
    total = 1
    for k in range(n):
        dk = max(l for l in range(n) if e[l] == e[k]) + 1
        ck = min(l for l in range(n) if e[l] == e[k]) + 1
        total *= p ** dk - p ** k
        total *= p ** (e[k] * (n - dk))
        total *= p ** ((e[k] - 1) * (n - ck + 1))
    return total


def aut_order(t: FgAbGroup) -> int:
    """Order of ``Aut(t)`` for a finite abelian group.

    Multiplies the automorphism counts of the primary components.
    """
    if t.rank:
        raise NotFinite("automorphism group of a group with free part is infinite")
    return prod(_aut_order_p(p, e) for p, e in _primary_exponents(t.torsion).items())


def ia_abelian(l: FgAbGroup, m: FgAbGroup) -> Fraction:
    """Automorphism index ``((#M0)^n #Aut M0) / ((#L0)^n #Aut L0)`` for equal rank ``n``."""
    if l.rank != m.rank:
        raise RankMismatch(f"ranks {l.rank} and {m.rank} differ; no commensurability exists")
    n = l.rank
    l0, m0 = FgAbGroup(0, l.torsion), FgAbGroup(0, m.torsion)
    return Fraction(m0.order ** n * aut_order(m0), l0.order ** n * aut_order(l0))


def _unit_group_generators(d: int) -> list:
    units = [u for u in range(1, d) if gcd(u, d) == 1]
    gens, span = [], {1 % d}
    for u in units:
        if u in span:
            continue
        gens.append(u)
        frontier = list(span)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = x * g % d
                if y not in span:
                    span.add(y)
                    frontier.append(y)
    return gens


def aut_generators(t: FgAbGroup) -> list:
    """Elementary automorphisms of a finite group: unit scalings and transvections."""
    if t.rank:
        raise NotFinite("only finite groups are supported")
    k = len(t.torsion)
    gens = []
    for i, d in enumerate(t.torsion):
        for u in _unit_group_generators(d):
            m = [[int(a == b) for b in range(k)] for a in range(k)]
            m[i][i] = u
            gens.append(IntMatrix.from_rows(m, k))
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            di, dj = t.torsion[i], t.torsion[j]
            step = di // gcd(di, dj)
            if step % di == 0:
                continue
            m = [[int(a == b) for b in range(k)] for a in range(k)]
            m[i][j] = step
            gens.append(IntMatrix.from_rows(m, k))
    return gens


def random_group(rng, max_rank=2, max_order=16) -> FgAbGroup:
    n = rng.randint(0, max_rank)
    target = rng.randint(1, max_order)
    mods = []
    while target > 1:
        d = rng.choice([x for x in range(2, target + 1) if target % x == 0])
        mods.append(d)
        target //= d
    return from_moduli(mods + [0] * n)


def random_hom(rng, src: FgAbGroup, dst: FgAbGroup, bound: int = 5) -> AbHom:
    """Uniform-ish random homomorphism; free generators get entries in ``[-bound, bound]``."""
    rows = []
    for dm in dst.moduli:
        row = []
        for sm in src.moduli:
            if dm == 0:
                row.append(0 if sm else rng.randint(-bound, bound))
            elif sm == 0:
                row.append(rng.randrange(dm))
            else:
                step = dm // gcd(dm, sm)
                row.append(step * rng.randrange(dm // step))
        rows.append(row)
    return AbHom(src, dst, IntMatrix.from_rows(rows, src.ngens))


def random_finite_commensurability(rng, left: FgAbGroup | None = None, max_order: int = 16):
    """Random correspondence between finite groups; every hom of finite groups is an isogeny."""
    left = left if left is not None else random_group(rng, 0, max_order)
    w = random_group(rng, 0, max_order)
    right = random_group(rng, 0, max_order)
    return Correspondence(w, random_hom(rng, w, left), random_hom(rng, w, right), ABELIAN)


def groups_of_order(n: int) -> list:
    """All abelian groups of order ``n`` in invariant-factor form."""
    parts_per_prime = []
    for p, e in factorint(n).items():
        parts_per_prime.append([(p, part) for part in _partitions(e)])
    out = []
    for combo in itertools.product(*parts_per_prime):
        length = max((len(part) for _, part in combo), default=0)
        torsion = []
        for i in range(length):
            d = 1
            for p, part in combo:
                # largest parts go to the last invariant factors
                idx = len(part) - length + i
                if idx >= 0:
                    d *= p ** part[idx]
            torsion.append(d)
        out.append(FgAbGroup(0, tuple(torsion)))
    return out


def _partitions(n: int, maxpart: int | None = None) -> list:
    if maxpart is None:
        maxpart = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - first, first):
            out.append(rest + (first,))
    return [tuple(sorted(p)) for p in out]


class AbelianContext(Context):
    """Finitely generated abelian groups and their homomorphisms."""

    name = "abelian"

    def source(self, f: AbHom):
        return f.src

    def target(self, f: AbHom):
        return f.dst

    def identity(self, obj):
        return AbHom.identity(obj)

    def compose(self, g, f):
        return g @ f

    def certify(self, f):
        return hom_certify(f)

    def fibre_product(self, f: AbHom, h: AbHom):
        if f.dst != h.dst:
            raise ValueError("fibre product needs a common target")
        x, y = f.src, h.src
        mods = x.moduli + y.moduli
        sub = preimage_of_zero(f.mat.hstack(-h.mat), mods, f.dst.moduli)
        w = sub.group
        p0 = AbHom(w, x, sub.incl.submatrix(range(x.ngens), range(w.ngens)))
        p1 = AbHom(w, y, sub.incl.submatrix(range(x.ngens, x.ngens + y.ngens), range(w.ngens)))
        return w, p0, p1

    def lift(self, fp, a: AbHom, b: AbHom) -> AbHom:
        w, p0, p1 = fp
        emb = p0.mat.vstack(p1.mat)
        rhs = a.mat.vstack(b.mat)
        mods = p0.dst.moduli + p1.dst.moduli
        sol = solve_mod(emb, rhs, mods)
        if sol is None:
            raise ValueError("legs do not factor through the fibre product")
        return AbHom(a.src, w, sol)

    def encode_object(self, obj):
        return obj.to_json()

    def encode_map(self, f):
        return {"mat": f.mat.to_json()} | {"src": f.src.to_json(), "dst": f.dst.to_json()}

    def decode_object(self, data):
        return FgAbGroup.from_json(data)

    def decode_map(self, data):
        return AbHom.from_json(data)


ABELIAN = AbelianContext()


def commensurability(w: FgAbGroup, f: AbHom, g: AbHom) -> Correspondence:
    return Correspondence(w, f, g, ABELIAN)


def format_index(q: Fraction) -> str:
    return rat_str(q)


def element_order(g: FgAbGroup, v: Sequence[int]) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b),
                  (d // gcd(d, x) for d, x in zip(g.torsion, v)), 1)
