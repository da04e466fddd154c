"""Brute-force reference computations.

Nothing here calls the kernel, image, presentation or stabilizer code used by
the fast paths: homomorphisms are enumerated by assigning images to
generators, indices come from counting elements, and the large automorphism
path builds its own permutation group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy.combinatorics import Permutation, PermutationGroup

from .errors import CapExceeded, NotFinite
from .linalg import IntMatrix, kernel_basis, lattice_index, solve_int

DEFAULT_CAP = 200_000


@dataclass(frozen=True)
class OracleReport:
    computed: object
    method: str
    element_count: int

    def to_json(self) -> dict:
        return {"computed": str(self.computed), "method": self.method,
                "element_count": self.element_count}


# --- raw finite abelian arithmetic ---------------------------------------------------


class _Group:
    """Elements of ``Z/d1 + ... + Z/dk`` as tuples, listed in lexicographic order."""

    def __init__(self, torsion: Sequence[int]):
        self.d = tuple(int(x) for x in torsion)
        self.elems = list(itertools.product(*(range(x) for x in self.d)))
        self.pos = {e: i for i, e in enumerate(self.elems)}

    @property
    def order(self) -> int:
        return len(self.elems)

    def add(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.d))

    def scale(self, a, c):
        return tuple((x * c) % m for x, m in zip(a, self.d))

    def zero(self):
        return (0,) * len(self.d)

    def gen(self, i):
        return tuple(int(i == j) % m for j, m in enumerate(self.d))

    def order_of(self, a) -> int:
        o = 1
        for x, m in zip(a, self.d):
            o = o * (m // gcd(m, x)) // gcd(o, m // gcd(m, x))
        return o

    def combine(self, coeffs, vecs):
        out = self.zero()
        for c, v in zip(coeffs, vecs):
            if c:
                out = self.add(out, self.scale(v, c))
        return out


def _apply(mat: IntMatrix, v, dst: _Group):
    return tuple(sum(mat[i, j] * v[j] for j in range(len(v))) % dst.d[i] for i in range(mat.rows))


def _module_data(m):
    """``(group, action matrices)`` from a FiniteModule or a bare FgAbGroup."""
    grp = m.grp if hasattr(m, "action") else m
    if grp.rank:
        raise NotFinite("oracle enumeration needs finite groups")
    return _Group(grp.torsion), list(getattr(m, "action", ()))


# --- homomorphism enumeration -------------------------------------------------------


def enumerate_homs(a, b, cap: int = DEFAULT_CAP) -> list:
    """Every module homomorphism ``a -> b`` as a tuple of generator images."""
    ga, acts_a = _module_data(a)
    gb, acts_b = _module_data(b)
    k = len(ga.d)
    choices = []
    for i in range(k):
        choices.append([e for e in gb.elems if ga.d[i] % gb.order_of(e) == 0])
    total = 1
    for c in choices:
        total *= len(c)
    if total > cap:
        raise CapExceeded(total, cap, "hom candidates")
    out = []
    for imgs in itertools.product(*choices):
        if all(_commutes(ga, gb, imgs, x, y) for x, y in zip(acts_a, acts_b)):
            out.append(tuple(imgs))
    return out


def _commutes(ga, gb, imgs, act_a, act_b) -> bool:
    for j in range(len(ga.d)):
        lhs = gb.combine([act_a[i, j] for i in range(len(ga.d))], imgs)
        rhs = _apply(act_b, imgs[j], gb)
        if lhs != rhs:
            return False
    return True


def _eval(imgs, v, gb):
    return gb.combine(v, imgs)


def _element_map(imgs, ga, gb) -> tuple:
    return tuple(gb.pos[_eval(imgs, v, gb)] for v in ga.elems)


def enumerate_auts(a, cap: int = DEFAULT_CAP) -> list:
    """Automorphisms as element-index permutations."""
    ga, _ = _module_data(a)
    out = []
    for imgs in enumerate_homs(a, a, cap):
        perm = _element_map(imgs, ga, ga)
        if len(set(perm)) == ga.order:
            out.append(perm)
    return out


# --- indices by counting -------------------------------------------------------------


def _leg_index(mat: IntMatrix, src: _Group, dst: _Group) -> Fraction:
    images = [_apply(mat, v, dst) for v in src.elems]
    ker = sum(1 for x in images if x == dst.zero())
    return Fraction(dst.order, len(set(images)) * ker)


def correspondence_index_bruteforce(c, cap: int = DEFAULT_CAP) -> OracleReport:
    """``i(g)/i(f)`` for a correspondence of finite abelian groups, by counting elements."""
    base = getattr(c, "base", c)
    w = _Group(base.w.torsion if hasattr(base.w, "torsion") else base.w.grp.torsion)
    if base.w.rank if hasattr(base.w, "rank") else 0:
        raise ValueError("apex must be finite")
    x = _Group(base.left.torsion)
    y = _Group(base.right.torsion)
    n = w.order + x.order + y.order
    if w.order > cap:
        raise CapExceeded(w.order, cap)
    fm = base.f.mat if hasattr(base.f, "mat") else base.f.map
    gm = base.g.mat if hasattr(base.g, "mat") else base.g.map
    val = _leg_index(gm, w, y) / _leg_index(fm, w, x)
    return OracleReport(val, "element counting", n)


def _triple_auts(aut_l, aut_w, aut_m, f_map, g_map):
    """Triples ``(lam, nu, mu)`` with ``lam f = f nu`` and ``mu g = g nu`` (element-index maps)."""
    triples = []
    for nu in aut_w:
        f_nu = tuple(f_map[nu[i]] for i in range(len(nu)))
        g_nu = tuple(g_map[nu[i]] for i in range(len(nu)))
        lams = [lam for lam in aut_l if all(lam[f_map[i]] == f_nu[i] for i in range(len(nu)))]
        mus = [mu for mu in aut_m if all(mu[g_map[i]] == g_nu[i] for i in range(len(nu)))]
        for lam in lams:
            for mu in mus:
                triples.append((lam, nu, mu))
    return triples


def _leg_from_triples(triples, k, aut_order):
    ident = tuple(range(len(triples[0][k])))
    image = {t[k] for t in triples}
    ker = sum(1 for t in triples if t[k] == ident)
    return Fraction(aut_order, len(image) * ker)


def aut_correspondence_index(l, w, m, f: IntMatrix, g: IntMatrix, cap: int = DEFAULT_CAP) -> OracleReport:
    """``i(a(c))`` for ``c = (W, f, g)`` between finite modules, by triple enumeration."""
    gl, _ = _module_data(l)
    gw, _ = _module_data(w)
    gm, _ = _module_data(m)
    aut_l = enumerate_auts(l, cap)
    aut_w = enumerate_auts(w, cap)
    aut_m = enumerate_auts(m, cap)
    work = len(aut_w) * (len(aut_l) + len(aut_m))
    if work > cap * 10:
        raise CapExceeded(work, cap * 10, "triple checks")
    f_map = tuple(gl.pos[_apply(f, v, gl)] for v in gw.elems)
    g_map = tuple(gm.pos[_apply(g, v, gm)] for v in gw.elems)
    triples = _triple_auts(aut_l, aut_w, aut_m, f_map, g_map)
    left = _leg_from_triples(triples, 0, len(aut_l))
    right = _leg_from_triples(triples, 2, len(aut_m))
    return OracleReport(right / left, "triple enumeration", len(triples))


# --- large path: permutation groups for trivial actions -----------------------------


def _elementary_generators(grp: _Group) -> list:
    """All unit scalings of one coordinate and all order-respecting shears ``e_j += c e_i``."""
    k = len(grp.d)
    gens = []
    for i, d in enumerate(grp.d):
        for u in range(2, d):
            if gcd(u, d) == 1:
                images = [grp.scale(grp.gen(j), u if j == i else 1) for j in range(k)]
                gens.append(images)
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            # e_j has order d_j; c e_i needs order dividing d_j
            step = grp.d[i] // gcd(grp.d[i], grp.d[j])
            if step % grp.d[i]:
                images = [grp.gen(t) for t in range(k)]
                images[j] = grp.add(grp.gen(j), grp.scale(grp.gen(i), step))
                gens.append(images)
    return [_element_map(imgs, grp, grp) for imgs in gens]


def _perm_group(perms, n) -> PermutationGroup:
    perms = [list(p) for p in perms if list(p) != list(range(n))]
    if not perms:
        return PermutationGroup([Permutation(list(range(max(n, 1))))])
    return PermutationGroup([Permutation(p) for p in perms])


def aut_order_perm(torsion: Sequence[int]) -> int:
    """``#Aut`` of a finite abelian group as the order of the group its elementary maps generate."""
    grp = _Group(torsion)
    return int(_perm_group(_elementary_generators(grp), grp.order).order())


def _subgroup_points(grp: _Group, gens) -> tuple:
    pts = {grp.zero()}
    frontier = [grp.zero()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = grp.add(x, g)
            if y not in pts:
                pts.add(y)
                frontier.append(y)
    return tuple(sorted(grp.pos[p] for p in pts))


def inclusion_aut_index(m_torsion: Sequence[int], l_gens: Sequence[Sequence[int]],
                        l_torsion: Sequence[int]) -> OracleReport:
    """``i(a(c))`` for the inclusion correspondence ``(L, id, incl)`` with trivial action.

    ``Aut c`` is the set stabilizer ``H`` of ``L``; ``(Aut M : H)`` is an orbit
    size, ``ker rho`` is the pointwise stabilizer of ``L`` and ``rho H`` has
    order ``#H / #ker rho``.
    """
    grp = _Group(m_torsion)
    pts = _subgroup_points(grp, [tuple(v) for v in l_gens])
    gens = _elementary_generators(grp)
    big = _perm_group(gens, grp.order)
    aut_m = int(big.order())
    orbit = {pts}
    frontier = [pts]
    while frontier:
        s = frontier.pop()
        for g in gens:
            t = tuple(sorted(g[i] for i in s))
            if t not in orbit:
                orbit.add(t)
                frontier.append(t)
    h = aut_m // len(orbit)
    ker = int(big.pointwise_stabilizer(list(pts)).order()) if len(pts) > 1 else aut_m
    rho = h // ker
    aut_l = aut_order_perm(l_torsion)
    val = Fraction(len(orbit) * ker * rho, aut_l)
    return OracleReport(val, "permutation group", aut_m)


# --- endomorphism correspondences of lattices ----------------------------------------


def _commuting_rows(acts_src, acts_dst, n_src, n_dst, offset, width):
    rows = []
    for a, b in zip(acts_src, acts_dst):
        for r in range(n_dst):
            for c in range(n_src):
                row = [0] * width
                for q in range(n_src):
                    row[offset + r * n_src + q] += a[q, c]
                for p in range(n_dst):
                    row[offset + p * n_src + c] -= b[r, p]
                rows.append(row)
    return rows


def endomorphism_correspondence_index(l, w, m, f: IntMatrix, g: IntMatrix) -> OracleReport:
    """``i(e(c))`` for a lattice commensurability, with ``End c`` solved as one integer kernel.

    Unknowns are ``(lam, nu, mu)`` in ``End L x End W x End M`` subject to
    ``lam f = f nu`` and ``mu g = g nu``.
    """
    nl, nw, nm = l.zrank, w.zrank, m.zrank
    ol, ow, om = 0, nl * nl, nl * nl + nw * nw
    width = om + nm * nm
    rows = []
    rows += _commuting_rows(l.action, l.action, nl, nl, ol, width)
    rows += _commuting_rows(w.action, w.action, nw, nw, ow, width)
    rows += _commuting_rows(m.action, m.action, nm, nm, om, width)
    for (x, fx, nx, ox) in ((l, f, nl, ol), (m, g, nm, om)):
        # (x-map) fx - fx nu = 0, entry (r, c) with r < nx, c < nw
        for r in range(nx):
            for c in range(nw):
                row = [0] * width
                for p in range(nx):
                    row[ox + r * nx + p] += fx[p, c]
                for q in range(nw):
                    row[ow + q * nw + c] -= fx[r, q]
                rows.append(row)
    k = kernel_basis(IntMatrix.from_rows(rows, width))

    def proj(off, n):
        return k.submatrix(range(off, off + n * n), range(k.cols))

    def end_basis(x, n):
        sub = _commuting_rows(x.action, x.action, n, n, 0, n * n)
        return kernel_basis(IntMatrix.from_rows(sub, n * n))

    def leg(off, x, n):
        img = proj(off, n)
        full = end_basis(x, n)
        # projection is injective on End c since both legs are rational isomorphisms
        if solve_int(full, img) is None:
            raise AssertionError("projection leaves End")
        return lattice_index(full, img)

    left = leg(ol, l, nl)
    right = leg(om, m, nm)
    return OracleReport(right / left, "integer kernel", k.cols)
