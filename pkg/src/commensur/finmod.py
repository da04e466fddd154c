"""Finite modules over orders: automorphisms, submodules and stabilizers.

Automorphisms are found either by listing the endomorphism group (an
abelian group computed as a kernel) or, for larger modules, through a
permutation group on the module's elements.
"""

from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from .abelian import FgAbGroup, aut_generators, aut_order, preimage_of_zero, subgroup_of_moduli
from .errors import CapExceeded, MalformedInput, NotFinite, NotSubmodule
from .linalg import IntMatrix, solve_mod
from .orders import FiniteGroup, OrderLattice, ZOrder, group_ring, integers

DEFAULT_CAP = 4096


def _reduce(mat: IntMatrix, moduli) -> IntMatrix:
    return IntMatrix.from_rows(
        [[x % moduli[i] if moduli[i] else x for x in mat.row(i)] for i in range(mat.rows)], mat.cols)


@dataclass(frozen=True)
class AbModule:
    """A finitely generated abelian group with an action of an order."""

    grp: FgAbGroup
    order: ZOrder
    action: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        mods = self.grp.moduli
        k = self.grp.ngens
        acts = tuple(_reduce(a, mods) for a in self.action)
        object.__setattr__(self, "action", acts)
        if len(acts) != self.order.zrank or any(a.shape != (k, k) for a in acts):
            raise ValueError("need one ngens x ngens matrix per order basis element")
        rel = self.grp.relations()
        for a in acts:
            if rel.cols and not _kills(a @ rel, mods):
                raise ValueError("action is not well defined modulo the relations")
        ident = _combine(acts, self.order.unity, k)
        if _reduce(ident, mods) != IntMatrix.identity(k) and k:
            raise ValueError("unity must act as the identity")
        for i in range(self.order.zrank):
            for j in range(self.order.zrank):
                lhs = _reduce(acts[i] @ acts[j], mods)
                rhs = _reduce(_combine(acts, self.order.structure[i][j], k), mods)
                if lhs != rhs:
                    raise ValueError("action does not respect the structure constants")

    @property
    def is_trivial_action(self) -> bool:
        """Whether every basis element acts as a multiple of the identity."""
        k = self.grp.ngens
        for a in self.action:
            # read the scalar modulo the exponent, which every modulus divides
            c = a[k - 1, k - 1] if k else 0
            if _reduce(a, self.grp.moduli) != _reduce(IntMatrix.identity(k).scale(c), self.grp.moduli):
                return False
        return True

    def to_json(self) -> dict:
        return {"order": self.order.to_json(), "grp": self.grp.to_json(),
                "action": [a.to_json() for a in self.action]}

    def __str__(self):
        return self.name or str(self.grp)


def _kills(m: IntMatrix, mods) -> bool:
    return all((x % mods[i] if mods[i] else x) == 0 for i in range(m.rows) for x in m.row(i))


def _combine(mats, coeffs, n) -> IntMatrix:
    out = IntMatrix.zeros(n, n)
    for c, m in zip(coeffs, mats):
        if c:
            out = out + m.scale(c)
    return out


@dataclass(frozen=True)
class FiniteModule(AbModule):
    def __post_init__(self):
        if self.grp.rank:
            raise NotFinite("finite modules need a finite group")
        super().__post_init__()

    @property
    def size(self) -> int:
        return self.grp.order

    def elements(self) -> list:
        return list(self.grp.elements())

    @classmethod
    def from_json(cls, obj) -> "FiniteModule":
        try:
            order = ZOrder.from_json(obj["order"]) if "order" in obj else integers()
            grp = FgAbGroup.from_json(obj["grp"])
            if "action" in obj:
                acts = tuple(IntMatrix.from_json(a) for a in obj["action"])
            else:
                acts = tuple(_trivial_action(order, grp.ngens))
            return cls(grp, order, acts)
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad module encoding: {exc}") from exc


def _trivial_action(order: ZOrder, k: int) -> list:
    """Action of an order through the augmentation ``sum of coordinates`` (group rings) or unity."""
    if order.group is not None or order.zrank == 1:
        return [IntMatrix.identity(k)] * order.zrank
    raise ValueError("no default action for this order")


def trivial_module(grp: FgAbGroup, order: ZOrder | None = None) -> FiniteModule:
    order = order or integers()
    return FiniteModule(grp, order, tuple(_trivial_action(order, grp.ngens)), str(grp))


def group_module(g: FiniteGroup, grp: FgAbGroup, mats: Sequence[IntMatrix], name: str = "") -> FiniteModule:
    return FiniteModule(grp, group_ring(g), tuple(mats), name)


def swap_module(g: FiniteGroup, base: FgAbGroup) -> FiniteModule:
    """``base + base`` with the non-identity element of C2 swapping the summands."""
    k = base.ngens
    mods = list(base.torsion) * 2
    grp, proj, sect = _canon(mods)
    swap = IntMatrix.from_rows([[int(j == (i + k) % (2 * k)) for j in range(2 * k)] for i in range(2 * k)], 2 * k)
    s = proj @ swap @ sect
    mats = [IntMatrix.identity(grp.ngens) if a == g.identity else s for a in range(2)]
    return group_module(g, grp, mats, f"{base}^2 swap")


def sign_module(g: FiniteGroup, base: FgAbGroup) -> FiniteModule:
    """``base`` with the non-identity element of C2 acting by ``-1``."""
    k = base.ngens
    mats = [IntMatrix.identity(k) if a == g.identity else IntMatrix.identity(k).scale(-1) for a in range(2)]
    return group_module(g, base, mats, f"{base} sign")


def _canon(mods):
    from .abelian import present, relation_matrix

    pres = present(relation_matrix(mods))
    return pres.group, pres.proj, pres.sect


def module_direct_sum(*ms: AbModule) -> FiniteModule:
    order = ms[0].order
    mods = [m for x in ms for m in x.grp.moduli]
    grp, proj, sect = _canon(mods)
    n = len(mods)
    acts = []
    for i in range(order.zrank):
        rows = [[0] * n for _ in range(n)]
        off = 0
        for x in ms:
            k = x.grp.ngens
            for r in range(k):
                for c in range(k):
                    rows[off + r][off + c] = x.action[i][r, c]
            off += k
        acts.append(proj @ IntMatrix.from_rows(rows, n) @ sect)
    cls = FiniteModule if grp.rank == 0 else AbModule
    return cls(grp, order, tuple(acts), " + ".join(str(x) for x in ms))


def torsion_submodule(m) -> FiniteModule:
    """The finite submodule of Z-torsion elements (torsion generators come first)."""
    if isinstance(m, OrderLattice):
        return FiniteModule(FgAbGroup(0, ()), m.order, tuple(IntMatrix.zeros(0, 0) for _ in m.action), "0")
    if isinstance(m, FiniteModule):
        return m
    t = len(m.grp.torsion)
    acts = tuple(a.submatrix(range(t), range(t)) for a in m.action)
    return FiniteModule(FgAbGroup(0, m.grp.torsion), m.order, acts, f"torsion of {m}")


# --- endomorphisms and automorphisms -------------------------------------------------


@dataclass(frozen=True)
class EndGroup:
    """``End_R(M)`` as a subgroup of the coordinate group of matrices."""

    module: FiniteModule
    group: FgAbGroup
    incl: IntMatrix
    scale: tuple  # entry (r, c) of X is coordinate (r, c) times scale[r*k + c]

    @property
    def size(self) -> int:
        return self.group.order

    def matrices_array(self) -> np.ndarray:
        """All endomorphisms as an ``S x k x k`` integer array."""
        k = self.module.grp.ngens
        d = np.array(self.group.torsion, dtype=np.int64)
        s = self.size
        idx = np.arange(s, dtype=np.int64)
        coords = np.zeros((s, len(d)), dtype=np.int64)
        for j in range(len(d) - 1, -1, -1):
            coords[:, j] = idx % d[j]
            idx //= d[j]
        incl = np.array(self.incl.to_rows(), dtype=np.int64).reshape(k * k, len(d))
        x = coords @ incl.T
        mods = np.array(self.module.grp.torsion, dtype=np.int64)
        entry_mod = np.repeat(mods, k)
        x = (x * np.array(self.scale, dtype=np.int64)) % entry_mod
        return x.reshape(s, k, k)


@lru_cache(maxsize=4096)
def end_group(m: FiniteModule) -> EndGroup:
    """Solve the commuting equations over the group of all additive endomorphisms."""
    d = m.grp.torsion
    k = len(d)
    gmods, scale = [], []
    for r in range(k):
        for c in range(k):
            g = gcd(d[r], d[c])
            gmods.append(g)
            scale.append(d[r] // g)
    rows = []
    dst_mods = []
    for a in m.action:
        for r in range(k):
            for c in range(k):
                row = [0] * (k * k)
                for cp in range(k):
                    row[r * k + cp] += scale[r * k + cp] * a[cp, c]
                for rp in range(k):
                    row[rp * k + c] -= a[r, rp] * scale[rp * k + c]
                rows.append(row)
                dst_mods.append(d[r])
    if not rows or k == 0:
        sub = subgroup_of_moduli(IntMatrix.identity(k * k), gmods)
    else:
        sub = preimage_of_zero(IntMatrix.from_rows(rows, k * k), gmods, dst_mods)
    return EndGroup(m, sub.group, sub.incl, tuple(scale))


def _element_array(grp: FgAbGroup) -> np.ndarray:
    return np.array(list(grp.elements()), dtype=np.int64).reshape(grp.order, grp.ngens)


def _radix(grp: FgAbGroup) -> np.ndarray:
    d = grp.torsion
    r = [1] * len(d)
    for i in range(len(d) - 2, -1, -1):
        r[i] = r[i + 1] * d[i + 1]
    return np.array(r, dtype=np.int64)


def _automorphism_mask(m: FiniteModule, mats: np.ndarray) -> np.ndarray:
    e = _element_array(m.grp)
    mods = np.array(m.grp.torsion, dtype=np.int64)
    radix = _radix(m.grp)
    n = m.size
    out = np.zeros(len(mats), dtype=bool)
    step = max(1, 2_000_000 // max(1, n * m.grp.ngens))
    for s in range(0, len(mats), step):
        chunk = mats[s:s + step]
        imgs = (np.einsum("sij,nj->sni", chunk, e) % mods) @ radix
        srt = np.sort(imgs, axis=1)
        out[s:s + step] = np.all(srt[:, 1:] != srt[:, :-1], axis=1) if n > 1 else True
    return out


def aut_enumerate(m: FiniteModule, cap: int = DEFAULT_CAP) -> list:
    """All module automorphisms, by testing every endomorphism for bijectivity."""
    eg = end_group(m)
    if eg.size > cap:
        raise CapExceeded(eg.size, cap, "endomorphism candidates")
    k = m.grp.ngens
    if k == 0:
        return [IntMatrix.identity(0)]
    mats = eg.matrices_array()
    mask = _automorphism_mask(m, mats)
    return [IntMatrix.from_rows(x.tolist(), k) for x in mats[mask]]


@lru_cache(maxsize=4096)
def aut_count(m: FiniteModule, cap: int = DEFAULT_CAP) -> int:
    """``#Aut M``: enumeration within the cap, else the closed formula for trivial actions."""
    eg = end_group(m)
    if eg.size <= cap:
        if m.grp.ngens == 0:
            return 1
        return int(_automorphism_mask(m, eg.matrices_array()).sum())
    if m.is_trivial_action:
        # scalars commute with everything, so module maps are group maps
        return aut_order(m.grp)
    raise CapExceeded(eg.size, cap, "endomorphism candidates")


def ia_finite(l: FiniteModule, m: FiniteModule, cap: int = DEFAULT_CAP) -> Fraction:
    """``#Aut M / #Aut L``."""
    return Fraction(aut_count(m, cap), aut_count(l, cap))


# --- element permutations ------------------------------------------------------------


def element_permutation(m: FiniteModule, x: IntMatrix) -> np.ndarray:
    e = _element_array(m.grp)
    mods = np.array(m.grp.torsion, dtype=np.int64)
    xm = np.array(x.to_rows(), dtype=np.int64).reshape(m.grp.ngens, m.grp.ngens)
    return ((e @ xm.T) % mods) @ _radix(m.grp)


def addition_table(grp: FgAbGroup) -> np.ndarray:
    e = _element_array(grp)
    mods = np.array(grp.torsion, dtype=np.int64)
    s = (e[:, None, :] + e[None, :, :]) % mods
    return s @ _radix(grp)


def enumerate_subgroups(grp: FgAbGroup) -> list:
    """Every subgroup as a sorted tuple of element indices."""
    n = grp.order
    add = addition_table(grp)
    zero = (0,)
    seen = {zero}
    out = [zero]
    frontier = [zero]
    while frontier:
        nxt = []
        for s in frontier:
            sset = set(s)
            covered = set(s)
            for x in range(n):
                if x in covered:
                    continue
                t = set(sset)
                cur = x
                while cur not in sset:
                    t.update(int(add[cur, y]) for y in s)
                    cur = int(add[cur, x])
                key = tuple(sorted(t))
                covered.update(t)
                if key not in seen:
                    seen.add(key)
                    out.append(key)
                    nxt.append(key)
        frontier = nxt
    return sorted(out, key=lambda s: (len(s), s))


def submodules(m: FiniteModule) -> list:
    """Subgroups stable under the action, as sorted element-index tuples."""
    perms = [element_permutation(m, a) for a in m.action]
    out = []
    for s in enumerate_subgroups(m.grp):
        sset = set(s)
        if all(set(int(p[i]) for i in s) <= sset for p in perms):
            out.append(s)
    return out


def submodule_from_indices(m: FiniteModule, idx: Sequence[int]) -> tuple:
    """``(L, incl)`` for a submodule given by element indices."""
    gens = IntMatrix.from_cols([m.grp.element_at(i) for i in idx], m.grp.ngens) if idx else \
        IntMatrix.zeros(m.grp.ngens, 0)
    return submodule(m, gens)


def submodule(m: FiniteModule, gens: IntMatrix) -> tuple:
    """Submodule generated (as a group) by the columns of ``gens``; must be stable."""
    sub = subgroup_of_moduli(gens, m.grp.moduli)
    acts = []
    for a in m.action:
        img = a @ sub.incl
        x = solve_mod(sub.incl, img, m.grp.moduli) if sub.incl.cols else IntMatrix.zeros(0, 0)
        if x is None:
            raise NotSubmodule("subgroup is not stable under the action")
        acts.append(x)
    lmod = FiniteModule(sub.group, m.order, tuple(acts), f"sub of {m}")
    return lmod, sub.incl


def subgroup_indices(m: FiniteModule, incl: IntMatrix) -> tuple:
    sub = subgroup_of_moduli(incl, m.grp.moduli)
    pts = set()
    for v in sub.group.elements():
        pts.add(m.grp.index_of(m.grp.reduce(sub.incl.apply(list(v)))))
    return tuple(sorted(pts))


# --- stabilizer decomposition ---------------------------------------------------------


@dataclass(frozen=True)
class StabilizerDecomposition:
    aut_m_order: int
    h_index: int
    ker_rho_order: int
    rho_image_index: int
    method: str = field(default="enumerate", compare=False)

    @property
    def value(self) -> Fraction:
        return Fraction(self.h_index * self.ker_rho_order, self.rho_image_index)

    def to_json(self) -> dict:
        return {"aut_m_order": self.aut_m_order, "h_index": self.h_index,
                "ker_rho_order": self.ker_rho_order, "rho_image_index": self.rho_image_index,
                "value": str(self.value), "method": self.method}


def stabilizer_data(m: FiniteModule, l_points: Sequence[int], method: str = "auto",
                    cap: int = DEFAULT_CAP) -> StabilizerDecomposition:
    """``(Aut M : H)``, ``#ker rho`` and ``(Aut L : rho H)`` for ``L <= M``.

    ``L`` is given by the indices of its elements in ``M``.  ``method`` is
    ``"enumerate"`` (list Aut M), ``"orbit"`` (permutation group) or ``"auto"``.
    """
    pts = tuple(sorted(set(int(i) for i in l_points)))
    if 0 not in pts:
        raise NotSubmodule("L must contain zero")
    lmod, _ = submodule_from_indices(m, pts)
    if len(subgroup_indices(m, IntMatrix.from_cols([m.grp.element_at(i) for i in pts], m.grp.ngens))) \
            != len(pts):
        raise NotSubmodule("points do not form a subgroup")
    if method == "auto":
        method = "enumerate" if end_group(m).size <= cap else "orbit"
    if method == "enumerate":
        return _stabilizer_enumerate(m, lmod, pts, cap)
    if method == "orbit":
        return PermAutGroup(m, cap).stabilizer(pts, lmod)
    raise ValueError(f"unknown method {method!r}")


def _stabilizer_enumerate(m, lmod, pts, cap) -> StabilizerDecomposition:
    auts = aut_enumerate(m, cap)
    lset = set(pts)
    h = 0
    images = set()
    ker = 0
    for a in auts:
        p = element_permutation(m, a)
        img = tuple(int(p[i]) for i in pts)
        if set(img) != lset:
            continue
        h += 1
        images.add(img)
        if img == pts:
            ker += 1
    aut_l = len(aut_enumerate(lmod, cap))
    return StabilizerDecomposition(len(auts), len(auts) // h, ker, aut_l // len(images), "enumerate")


class PermAutGroup:
    """``Aut M`` as a permutation group on the elements of ``M``."""

    def __init__(self, m: FiniteModule, cap: int = DEFAULT_CAP, seed: int = 0):
        self.module = m
        self.n = m.size
        if m.is_trivial_action:
            mats = aut_generators(m.grp)
        else:
            mats = aut_enumerate(m, cap)
        gens = [element_permutation(m, x) for x in mats]
        gens = [g for g in gens if not np.array_equal(g, np.arange(self.n))]
        self.gens = gens
        self.group = PermutationGroup([Permutation(g.tolist()) for g in gens]) if gens else \
            PermutationGroup([Permutation(list(range(self.n)))])
        self.order = int(self.group.order())
        self.rng = random.Random(seed)

    def orbit(self, pts: tuple) -> dict:
        """Orbit of a point set with transversal permutations (numpy arrays)."""
        ident = np.arange(self.n)
        trans = {pts: ident}
        frontier = [pts]
        while frontier:
            nxt = []
            for s in frontier:
                u = trans[s]
                for g in self.gens:
                    t = tuple(sorted(int(g[i]) for i in s))
                    if t not in trans:
                        trans[t] = g[u]
                        nxt.append(t)
            frontier = nxt
        return trans

    def set_stabilizer(self, pts: tuple, trans: dict | None = None) -> PermutationGroup:
        """Stabilizer of a point set, from Schreier generators checked against the orbit size."""
        trans = trans or self.orbit(pts)
        target = self.order // len(trans)
        ident = list(range(self.n))
        keys = list(trans)
        gens = []
        group = PermutationGroup([Permutation(ident)])
        pairs = [(s, j) for s in keys for j in range(len(self.gens))]
        self.rng.shuffle(pairs)
        batch = 4
        pos = 0
        while group.order() != target:
            if pos >= len(pairs):
                raise AssertionError("Schreier generators did not reach the stabilizer order")
            for s, j in pairs[pos:pos + batch]:
                g = self.gens[j]
                u = trans[s]
                t = tuple(sorted(int(g[i]) for i in s))
                v = trans[t]
                inv_v = np.empty_like(v)
                inv_v[v] = np.arange(self.n)
                h = inv_v[g[u]]
                if not np.array_equal(h, np.arange(self.n)):
                    gens.append(Permutation(h.tolist()))
            pos += batch
            batch *= 2
            if gens:
                group = PermutationGroup(gens)
        return group

    def stabilizer(self, pts: tuple, lmod: FiniteModule | None = None) -> StabilizerDecomposition:
        trans = self.orbit(pts)
        h = self.set_stabilizer(pts, trans)
        pos = {p: i for i, p in enumerate(pts)}
        restricted = []
        for g in h.generators:
            arr = g.array_form + list(range(len(g.array_form), self.n))
            restricted.append(Permutation([pos[arr[p]] for p in pts]))
        rho = PermutationGroup(restricted) if restricted else PermutationGroup([Permutation(list(range(len(pts))))])
        rho_order = int(rho.order())
        h_order = int(h.order())
        if lmod is None:
            lmod, _ = submodule_from_indices(self.module, pts)
        aut_l = PermAutGroup(lmod).order if lmod.is_trivial_action else len(aut_enumerate(lmod))
        return StabilizerDecomposition(self.order, len(trans), h_order // rho_order,
                                       aut_l // rho_order, "orbit")


def inclusion_pairs(m: FiniteModule, cap: int = DEFAULT_CAP, method: str = "auto"):
    """``(points, decomposition)`` for every submodule ``L <= M``.

    Decompositions are computed once per ``Aut M``-orbit and shared by its
    members, since conjugating by an automorphism preserves all three factors.
    """
    subs = submodules(m)
    if method == "auto":
        method = "enumerate" if end_group(m).size <= cap else "orbit"
    out = []
    if method == "enumerate":
        for s in subs:
            out.append((s, stabilizer_data(m, s, "enumerate", cap)))
        return out
    pg = PermAutGroup(m, cap)
    done = {}
    for s in subs:
        if s in done:
            out.append((s, done[s]))
            continue
        trans = pg.orbit(s)
        lmod, _ = submodule_from_indices(m, s)
        dec = pg.stabilizer(s, lmod)
        for t in trans:
            done[t] = dec
        out.append((s, dec))
    return out


def orbit_representatives(m: FiniteModule, cap: int = DEFAULT_CAP) -> list:
    """One submodule per ``Aut M``-orbit, with the orbit size."""
    pg = PermAutGroup(m, cap)
    seen = set()
    reps = []
    for s in submodules(m):
        if s in seen:
            continue
        orb = pg.orbit(s)
        seen.update(orb)
        reps.append((s, len(orb)))
    return reps
