"""Lattices over orders in finite-dimensional rational algebras.

An order is stored through structure constants on a Z-basis; a lattice is
``Z^n`` with one integer action matrix per basis element of the order.  The
endomorphism index lives inside the rational commutant, where lattices of
endomorphisms are compared through fixed integer coordinates.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .abelian import AbHom, FgAbGroup, from_presentation, hom_certify
from .correspondence import Commensurability, Context, Correspondence, certify
from .errors import (
    MalformedInput,
    NotCommensurable,
    NotInCommutant,
    ObjectMismatch,
    OrderNotSemisimple,
    Singular,
)
from .linalg import (
    IntMatrix,
    clear_denominators,
    det,
    kernel_basis,
    lattice_basis,
    lattice_index,
    lattice_intersect,
    lcm,
    q_inverse,
    q_mul,
    snf,
    solve_int,
    to_q,
)

SAMPLE_RETRIES = 1000


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: tuple
    identity: int = 0
    generators: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.order
        t = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", t)
        if len(t) != n or any(len(r) != n for r in t):
            raise ValueError("table must be order x order")
        if any(not 0 <= x < n for r in t for x in r):
            raise ValueError("table entries out of range")
        e = self.identity
        if any(t[e][a] != a or t[a][e] != a for a in range(n)):
            raise ValueError("identity is not neutral")
        for a in range(n):
            if not any(t[a][b] == e for b in range(n)):
                raise ValueError("element without inverse")
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise ValueError("table is not associative")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return next(b for b in range(self.order) if self.table[a][b] == self.identity)

    def to_json(self) -> dict:
        return {"order": self.order, "table": [list(r) for r in self.table],
                "generators": list(self.generators)}

    @classmethod
    def from_json(cls, obj) -> "FiniteGroup":
        try:
            return cls(int(obj["order"]), obj["table"], int(obj.get("identity", 0)),
                       tuple(obj.get("generators", ())))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad group encoding: {exc}") from exc

    @classmethod
    def from_permutations(cls, perms: Sequence[Sequence[int]], name: str = "") -> "FiniteGroup":
        """Group whose elements are the given permutations (must be closed); element 0 is the identity."""
        perms = [tuple(p) for p in perms]
        pos = {p: i for i, p in enumerate(perms)}
        table = [[pos[tuple(p[q[x]] for x in range(len(q)))] for q in perms] for p in perms]
        return cls(len(perms), table, 0, tuple(range(1, len(perms))), name)


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(n, [[(a + b) % n for b in range(n)] for a in range(n)], 0,
                       (1,) if n > 1 else (), f"C{n}")


def symmetric_group_3() -> FiniteGroup:
    perms = list(itertools.permutations(range(3)))
    return FiniteGroup.from_permutations(perms, "S3")


# element i of S3 above is the i-th permutation of (0, 1, 2)
S3_PERMS = tuple(itertools.permutations(range(3)))

GROUPS = {"C2": lambda: cyclic_group(2), "C3": lambda: cyclic_group(3), "S3": symmetric_group_3}


def named_group(name: str) -> FiniteGroup:
    try:
        return GROUPS[name]()
    except KeyError:
        raise MalformedInput(f"unknown group {name!r}; choose from {sorted(GROUPS)}") from None


@dataclass(frozen=True)
class ZOrder:
    zrank: int
    structure: tuple
    unity: tuple
    group: FiniteGroup | None = field(default=None, compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.zrank
        s = tuple(tuple(tuple(int(x) for x in self.structure[i][j]) for j in range(n)) for i in range(n))
        object.__setattr__(self, "structure", s)
        object.__setattr__(self, "unity", tuple(int(x) for x in self.unity))
        basis = [tuple(int(a == b) for b in range(n)) for a in range(n)]
        for a in basis:
            if self.mul(self.unity, a) != a or self.mul(a, self.unity) != a:
                raise ValueError("unity is not a two-sided identity")
        for i, j, k in itertools.product(range(n), repeat=3):
            if self.mul(s[i][j], basis[k]) != self.mul(basis[i], s[j][k]):
                raise ValueError("structure constants are not associative")

    def mul(self, a, b) -> tuple:
        n = self.zrank
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        for k, c in enumerate(self.structure[i][j]):
                            out[k] += x * y * c
        return tuple(out)

    def left_regular(self, i: int) -> IntMatrix:
        """Matrix of ``x -> e_i x``."""
        return IntMatrix.from_cols([self.structure[i][j] for j in range(self.zrank)], self.zrank)

    def is_semisimple(self) -> bool:
        """Nondegeneracy of the trace form ``tr(L_x L_y)`` on the rational algebra."""
        mats = [self.left_regular(i) for i in range(self.zrank)]
        gram = [[_trace(a @ b) for b in mats] for a in mats]
        return det(IntMatrix.from_rows(gram, self.zrank)) != 0

    def to_json(self) -> dict:
        if self.group is not None:
            return {"group_ring": self.group.to_json()}
        return {"zrank": self.zrank,
                "structure": [[[str(x) for x in v] for v in row] for row in self.structure],
                "unity": [str(x) for x in self.unity]}

    @classmethod
    def from_json(cls, obj) -> "ZOrder":
        try:
            if "group_ring" in obj:
                g = obj["group_ring"]
                return group_ring(named_group(g) if isinstance(g, str) else FiniteGroup.from_json(g))
            if "upper_triangular" in obj:
                return upper_triangular_order(int(obj["upper_triangular"]))
            return cls(int(obj["zrank"]), obj["structure"], obj["unity"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad order encoding: {exc}") from exc


def _trace(m: IntMatrix) -> int:
    return sum(m[i, i] for i in range(m.rows))


def group_ring(g: FiniteGroup) -> ZOrder:
    n = g.order
    s = [[tuple(int(k == g.mul(a, b)) for k in range(n)) for b in range(n)] for a in range(n)]
    unity = tuple(int(k == g.identity) for k in range(n))
    return ZOrder(n, s, unity, g, f"Z[{g.name or n}]")


def integers() -> ZOrder:
    return ZOrder(1, (((1,),),), (1,), None, "Z")


def upper_triangular_order(n: int) -> ZOrder:
    """Upper triangular integer matrices on the basis ``e_ij`` (``i <= j``, row-major)."""
    if n < 1:
        raise ValueError("n must be positive")
    units = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {u: k for k, u in enumerate(units)}
    r = len(units)
    s = [[tuple(int(b[0] == a[1] and k == pos[(a[0], b[1])]) for k in range(r)) for b in units]
         for a in units]
    unity = tuple(int(a == b) for a, b in units)
    return ZOrder(r, s, unity, None, f"T_{n}(Z)")


@dataclass(frozen=True)
class OrderLattice:
    order: ZOrder
    zrank: int
    action: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        acts = tuple(self.action)
        object.__setattr__(self, "action", acts)
        r = self.order
        if len(acts) != r.zrank or any(a.shape != (self.zrank, self.zrank) for a in acts):
            raise ValueError("need one zrank x zrank matrix per order basis element")
        if _combine(acts, r.unity, self.zrank) != IntMatrix.identity(self.zrank):
            raise ValueError("unity must act as the identity")
        for i, j in itertools.product(range(r.zrank), repeat=2):
            if acts[i] @ acts[j] != _combine(acts, r.structure[i][j], self.zrank):
                raise ValueError("action does not respect the structure constants")

    def act(self, x: Sequence[int]) -> IntMatrix:
        """Matrix of an order element given in basis coordinates."""
        return _combine(self.action, x, self.zrank)

    def to_json(self) -> dict:
        return {"order": self.order.to_json(), "zrank": self.zrank,
                "action": [a.to_json() for a in self.action]}

    @classmethod
    def from_json(cls, obj) -> "OrderLattice":
        try:
            order = ZOrder.from_json(obj["order"])
            acts = [IntMatrix.from_json(a) for a in obj["action"]]
            return cls(order, int(obj["zrank"]), tuple(acts))
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad lattice encoding: {exc}") from exc

    def __str__(self):
        return self.name or f"lattice of rank {self.zrank}"


def _combine(mats, coeffs, n) -> IntMatrix:
    out = IntMatrix.zeros(n, n)
    for c, m in zip(coeffs, mats):
        if c:
            out = out + m.scale(c)
    return out


def regular_lattice(order: ZOrder) -> OrderLattice:
    acts = tuple(order.left_regular(i) for i in range(order.zrank))
    return OrderLattice(order, order.zrank, acts, f"{order.name} regular")


def group_lattice(g: FiniteGroup, mats: Sequence[IntMatrix], name: str = "") -> OrderLattice:
    """Lattice over ``Z[g]`` from one integer matrix per group element."""
    return OrderLattice(group_ring(g), mats[0].rows, tuple(mats), name)


def permutation_lattice(g: FiniteGroup, perms: Sequence[Sequence[int]], name: str = "") -> OrderLattice:
    """``Z^k`` with group element ``i`` sending ``e_x`` to ``e_{perms[i][x]}``."""
    k = len(perms[0])
    mats = [IntMatrix.from_cols([[int(r == p[x]) for r in range(k)] for x in range(k)], k)
            for p in perms]
    return group_lattice(g, mats, name or f"Z[{g.name}] permutation")


def character_lattice(g: FiniteGroup, chi: Sequence[int], name: str = "") -> OrderLattice:
    return group_lattice(g, [IntMatrix.from_rows([[c]], 1) for c in chi], name)


def trivial_lattice(g: FiniteGroup) -> OrderLattice:
    return character_lattice(g, [1] * g.order, "trivial")


def sign_lattice(g: FiniteGroup) -> OrderLattice:
    """Sign character; defined for C2 and for permutation groups built by :func:`symmetric_group_3`."""
    if g.order == 2:
        chi = [1 if a == g.identity else -1 for a in range(2)]
    elif g.order == 6 and g.name == "S3":
        chi = [_perm_sign(p) for p in S3_PERMS]
    else:
        raise ValueError("sign character only available for C2 and S3")
    return character_lattice(g, chi, "sign")


def _perm_sign(p) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def natural_permutation_lattice(g: FiniteGroup) -> OrderLattice:
    """``Z^3`` for S3, the regular permutation lattice for cyclic groups."""
    if g.name == "S3":
        return permutation_lattice(g, S3_PERMS, "Z^3 permutation")
    n = g.order
    return permutation_lattice(g, [[g.mul(a, x) for x in range(n)] for a in range(n)])


def direct_sum(*lats: OrderLattice) -> OrderLattice:
    order = lats[0].order
    if any(l.order != order for l in lats):
        raise ObjectMismatch("lattices over different orders")
    n = sum(l.zrank for l in lats)
    acts = []
    for i in range(order.zrank):
        rows = [[0] * n for _ in range(n)]
        off = 0
        for l in lats:
            for r in range(l.zrank):
                for c in range(l.zrank):
                    rows[off + r][off + c] = l.action[i][r, c]
            off += l.zrank
        acts.append(IntMatrix.from_rows(rows, n))
    return OrderLattice(order, n, tuple(acts), " + ".join(str(l) for l in lats))


def sublattice(l: OrderLattice, basis: IntMatrix, name: str = "") -> OrderLattice:
    """The sublattice spanned by the columns of ``basis`` (full rank, stable), in its own coordinates."""
    acts = []
    for a in l.action:
        x = solve_int(basis, a @ basis)
        if x is None:
            raise ValueError("span is not stable under the order")
        acts.append(x)
    return OrderLattice(l.order, basis.cols, tuple(acts), name)


def generated_sublattice(l: OrderLattice, gens: IntMatrix) -> IntMatrix:
    """Basis of the smallest stable sublattice containing the columns of ``gens``."""
    vecs = lattice_basis(gens)
    for _ in range(l.zrank + 1):
        if vecs.cols == 0:
            return vecs
        cols = vecs
        for a in l.action:
            cols = cols.hstack(a @ vecs)
        new = lattice_basis(cols)
        if new.cols == vecs.cols and lattice_index(new, vecs) == 1:
            return new
        vecs = new
    return vecs


def random_sublattice(l: OrderLattice, rng: random.Random, bound: int = 3) -> OrderLattice:
    """Full-rank stable sublattice generated by random vectors."""
    n = l.zrank
    while True:
        k = rng.randint(1, n)
        gens = IntMatrix.from_cols([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(k)], n)
        basis = generated_sublattice(l, gens)
        if basis.cols == n:
            return sublattice(l, basis, f"sublattice of {l}")


# --- Hom spaces and commutants -----------------------------------------------------


def hom_basis(v: OrderLattice, w: OrderLattice) -> list:
    """Integer basis of ``{X : X a_i(v) = a_i(w) X}`` (saturated), as IntMatrices ``w x v``."""
    if v.order != w.order:
        raise ObjectMismatch("lattices over different orders")
    m, n = w.zrank, v.zrank
    rows = []
    for av, aw in zip(v.action, w.action):
        # entry (r, c) of X av - aw X in terms of vec(X)[p*n + q]
        for r in range(m):
            for c in range(n):
                row = [0] * (m * n)
                for q in range(n):
                    row[r * n + q] += av[q, c]
                for p in range(m):
                    row[p * n + c] -= aw[r, p]
                rows.append(row)
    if not rows:
        rows = [[0] * (m * n)]
    k = kernel_basis(IntMatrix.from_rows(rows, m * n))
    return [IntMatrix.from_rows([k.col(j)[r * n:(r + 1) * n] for r in range(m)], n)
            for j in range(k.cols)]


@dataclass(frozen=True)
class CommutantLattice:
    """A lattice of endomorphisms given in coordinates of a fixed commutant basis.

    ``coords`` columns are rational coordinate vectors (lists of Fractions).
    """

    ambient_dim: int
    qbasis: tuple
    coords: tuple

    def matrices(self) -> list:
        return [_q_combine(self.qbasis, c) for c in self.coords]


def _q_combine(basis, coeffs):
    n = basis[0].rows
    out = [[Fraction(0)] * basis[0].cols for _ in range(n)]
    for c, b in zip(coeffs, basis):
        if c:
            for i in range(n):
                for j in range(b.cols):
                    out[i][j] += c * b[i, j]
    return out


def end_lattice(l: OrderLattice) -> CommutantLattice:
    basis = hom_basis(l, l)
    d = len(basis)
    coords = tuple(tuple(Fraction(int(i == j)) for i in range(d)) for j in range(d))
    return CommutantLattice(d, tuple(basis), coords)


def stabilizer_lattice(qbasis: Sequence[IntMatrix], p) -> list:
    """Coordinates of ``{phi in span(qbasis) : phi U <= U}`` where ``U`` has basis ``p`` (columns).

    Solves ``p^-1 phi p`` integral: with ``T x = vec(p^-1 B(x) p)`` and
    ``T = T'/D``, Smith form ``u T' v = diag(s)`` gives the basis
    ``v diag(D / s_i)``.
    """
    pinv = q_inverse(p)
    if pinv is None:
        raise Singular("basis matrix is singular")
    cols = []
    for b in qbasis:
        m = q_mul(q_mul(pinv, to_q(b)), p)
        cols.append([x for row in m for x in row])
    t = [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))]
    tint, den = clear_denominators(t)
    res = snf(tint)
    d = len(qbasis)
    if len(res.d) != d:
        raise ValueError("commutant basis is not linearly independent")
    return [[Fraction(res.v[i, j] * den, res.d[j]) for i in range(d)] for j in range(d)]


def _scale_common(*lats) -> list:
    den = 1
    for lat in lats:
        for c in lat:
            for x in c:
                den = lcm(den, x.denominator)
    return [IntMatrix.from_cols([[int(x * den) for x in c] for c in lat], len(lat[0])) for lat in lats]


def q_lattice_index(sup, sub) -> Fraction:
    """Generalised index ``(sup : sup cap sub) / (sub : sup cap sub)`` of two full rational lattices."""
    a, b = _scale_common(sup, sub)
    inter = lattice_intersect(a, b)
    return lattice_index(a, inter) / lattice_index(b, inter)


def q_intersect_index(sup, sub) -> Fraction:
    """``(sup : sup cap sub)``."""
    a, b = _scale_common(sup, sub)
    return lattice_index(a, lattice_intersect(a, b))


def _check_in_commutant(l: OrderLattice, alpha):
    n = l.zrank
    if len(alpha) != n or any(len(r) != n for r in alpha):
        raise ValueError("alpha has the wrong shape")
    for a in l.action:
        aq = to_q(a)
        if q_mul(aq, alpha) != q_mul(alpha, aq):
            raise NotInCommutant("alpha does not commute with the action")
    inv = q_inverse(alpha)
    if inv is None:
        raise Singular("alpha is not invertible")
    return inv


def ie_self(l: OrderLattice, alpha) -> Fraction:
    """Endomorphism index of the self-commensurability defined by ``alpha``.

    ``(E_L : E_{aL} cap E_L) / (E_L : E_L cap E_{a^-1 L})``.
    """
    alpha = to_q(alpha)
    inv = _check_in_commutant(l, alpha)
    e = end_lattice(l)
    el = [list(c) for c in e.coords]
    e_a = stabilizer_lattice(e.qbasis, alpha)
    e_ainv = stabilizer_lattice(e.qbasis, inv)
    return q_intersect_index(el, e_a) / q_intersect_index(el, e_ainv)


def _coords_in(qbasis, mats) -> list:
    """Coordinates of commuting matrices in ``qbasis``."""
    n = qbasis[0].rows * qbasis[0].cols
    a = [[Fraction(b.entries[i]) for b in qbasis] for i in range(n)]
    out = []
    aint, den = clear_denominators(a)
    for m in mats:
        rhs = [[Fraction(x) * den] for row in m for x in row]
        sol = _q_solve(to_q(aint), rhs)
        out.append(sol)
    return out


def _q_solve(a, b) -> list:
    """Solve ``a x = b`` for a full-column-rank rational ``a``."""
    rows, cols = len(a), len(a[0])
    m = [list(a[i]) + [b[i][0]] for i in range(rows)]
    r = 0
    piv = []
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    if any(m[i][cols] != 0 for i in range(r, rows)):
        raise ValueError("matrix not in span")
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv):
        x[c] = m[i][cols]
    return x


def ie_via_phi(l: OrderLattice, m: OrderLattice, phi, extra=None) -> Fraction:
    """Endomorphism index of a commensurability ``L <-> M`` whose rational map is ``phi``.

    ``phi: Q L -> Q M`` is an A-isomorphism; ``M' = phi^-1 M``.  When the apex
    image ``extra`` (a basis in ``L`` coordinates) is given it is intersected in
    as well, which leaves the ratio unchanged.
    """
    phi = to_q(phi)
    pinv = q_inverse(phi)
    if pinv is None:
        raise Singular("phi is not invertible")
    e = end_lattice(l)
    el = [list(c) for c in e.coords]
    e_mp = stabilizer_lattice(e.qbasis, pinv)
    common = [el, e_mp]
    if extra is not None:
        common.append(stabilizer_lattice(e.qbasis, to_q(extra)))
    scaled = _scale_common(*common)
    inter = scaled[0]
    for s in scaled[1:]:
        inter = lattice_intersect(inter, s)
    return lattice_index(scaled[1], inter) / lattice_index(scaled[0], inter)


def commensurable(l: OrderLattice, m: OrderLattice) -> bool:
    """Whether ``Q L`` and ``Q M`` are isomorphic (semisimple orders only)."""
    if l.order != m.order:
        raise ObjectMismatch("lattices over different orders")
    if not l.order.is_semisimple():
        raise OrderNotSemisimple("isomorphism test needs a semisimple algebra")
    if l.zrank != m.zrank:
        return False
    h = len(hom_basis(l, m))
    return h == len(hom_basis(l, l)) == len(hom_basis(m, m))


def phi_candidates(l: OrderLattice, m: OrderLattice, count: int = 2, max_height: int = 4) -> list:
    """First ``count`` invertible elements of ``Hom(QL, QM)`` by coefficient height.

    Later picks are never rational multiples of earlier ones.
    """
    basis = hom_basis(l, m)
    d = len(basis)
    out = []
    for h in range(1, max_height + 1):
        for coeffs in itertools.product(range(-h, h + 1), repeat=d):
            if max(abs(c) for c in coeffs) != h:
                continue
            x = _int_combine(basis, coeffs)
            if det(x) == 0:
                continue
            if any(_proportional(x, y) for y in out):
                continue
            out.append(x)
            if len(out) == count:
                return out
    raise NotCommensurable("no invertible homomorphism found within the search height")


def _int_combine(basis, coeffs) -> IntMatrix:
    out = IntMatrix.zeros(basis[0].rows, basis[0].cols)
    for c, b in zip(coeffs, basis):
        if c:
            out = out + b.scale(c)
    return out


def _proportional(a: IntMatrix, b: IntMatrix) -> bool:
    pairs = [(x, y) for x, y in zip(a.entries, b.entries) if x or y]
    x0, y0 = pairs[0]
    return all(x * y0 == y * x0 for x, y in pairs)


def ie_pair(l: OrderLattice, m: OrderLattice, which: int = 0) -> Fraction:
    """Endomorphism index ``ie(L, M)`` computed with the ``which``-th deterministic choice of phi."""
    if not commensurable(l, m):
        raise NotCommensurable("Q L and Q M are not isomorphic")
    phi = phi_candidates(l, m, which + 1)[which]
    return ie_via_phi(l, m, to_q(phi))


def lemma_p_check(l: OrderLattice, m: int) -> bool:
    """``#(L / mL) == |m|^rank``, with the quotient computed from its presentation."""
    if m == 0:
        raise ValueError("m must be nonzero")
    quotient = from_presentation(IntMatrix.identity(l.zrank).scale(m))
    return quotient.order == abs(m) ** l.zrank


def quotient_order(l: OrderLattice, m: int) -> int:
    return from_presentation(IntMatrix.identity(l.zrank).scale(m)).order


# --- lattice category ------------------------------------------------------------


@dataclass(frozen=True)
class LatticeMap:
    src: OrderLattice
    dst: OrderLattice
    mat: IntMatrix

    def __post_init__(self):
        if self.mat.shape != (self.dst.zrank, self.src.zrank):
            raise ValueError("matrix shape does not fit")
        for a, b in zip(self.src.action, self.dst.action):
            if self.mat @ a != b @ self.mat:
                raise ValueError("map is not linear over the order")

    @property
    def additive(self) -> AbHom:
        return AbHom(FgAbGroup(self.src.zrank), FgAbGroup(self.dst.zrank), self.mat)


class LatticeContext(Context):
    name = "lattice"

    def source(self, f):
        return f.src

    def target(self, f):
        return f.dst

    def identity(self, obj):
        return LatticeMap(obj, obj, IntMatrix.identity(obj.zrank))

    def compose(self, g, f):
        return LatticeMap(f.src, g.dst, g.mat @ f.mat)

    def certify(self, f):
        return hom_certify(f.additive)

    def fibre_product(self, f: LatticeMap, h: LatticeMap):
        x, y = f.src, h.src
        k = kernel_basis(f.mat.hstack(-h.mat))
        both = direct_sum(x, y) if x.order == y.order else None
        w = sublattice(both, k, "fibre product")
        p0 = LatticeMap(w, x, k.submatrix(range(x.zrank), range(k.cols)))
        p1 = LatticeMap(w, y, k.submatrix(range(x.zrank, x.zrank + y.zrank), range(k.cols)))
        return w, p0, p1

    def lift(self, fp, a, b):
        w, p0, p1 = fp
        sol = solve_int(p0.mat.vstack(p1.mat), a.mat.vstack(b.mat))
        if sol is None:
            raise ValueError("legs do not factor through the fibre product")
        return LatticeMap(a.src, w, sol)

    def encode_object(self, obj):
        return obj.to_json()

    def encode_map(self, f):
        return {"src": f.src.to_json(), "dst": f.dst.to_json(), "mat": f.mat.to_json()}

    def decode_object(self, data):
        return OrderLattice.from_json(data)

    def decode_map(self, data):
        return LatticeMap(OrderLattice.from_json(data["src"]), OrderLattice.from_json(data["dst"]),
                          IntMatrix.from_json(data["mat"]))


LATTICES = LatticeContext()


def ie_correspondence(c) -> Fraction:
    """Endomorphism index of a lattice commensurability ``(W, f, g)``.

    ``End c`` embeds in ``End_A(Q L)`` as ``E_L cap E_{fW} cap E_{phi^-1 M}``
    with ``phi = g f^-1``.
    """
    base = c.base if isinstance(c, Commensurability) else c
    if not isinstance(c, Commensurability):
        certify(base)
    f, g = base.f, base.g
    fq = to_q(f.mat)
    finv = q_inverse(fq)
    if finv is None:
        raise Singular("left leg is not a rational isomorphism")
    phi = q_mul(to_q(g.mat), finv)
    return ie_via_phi(base.left, base.right, phi, extra=fq)


def from_lattice_isogeny(f: LatticeMap) -> Commensurability:
    return certify(Correspondence(f.src, LATTICES.identity(f.src), f, LATTICES))


def random_commutant_element(l: OrderLattice, rng: random.Random, bound: int = 3) -> IntMatrix:
    """Random invertible integer endomorphism with small coordinates in the E_L basis."""
    basis = hom_basis(l, l)
    for _ in range(SAMPLE_RETRIES):
        coeffs = [rng.randint(-bound, bound) for _ in basis]
        x = _int_combine(basis, coeffs)
        if det(x) != 0:
            return x
    raise RuntimeError(f"no invertible element after {SAMPLE_RETRIES} draws")


def sample_self_commensurability(l: OrderLattice, seed: int) -> Commensurability:
    """Commensurability ``(L cap a^-1 L, incl, a)`` for a seeded random ``a`` in ``E_L``.

    Since ``a L <= L`` the apex is ``L`` itself.
    """
    rng = random.Random(seed)
    alpha = random_commutant_element(l, rng)
    g = LatticeMap(l, l, alpha)
    return certify(Correspondence(l, LATTICES.identity(l), g, LATTICES))


def alpha_of(c) -> list:
    """Rational automorphism ``g f^-1`` of a self-commensurability."""
    base = c.base if isinstance(c, Commensurability) else c
    return q_mul(to_q(base.g.mat), q_inverse(to_q(base.f.mat)))


def standard_suite(name: str) -> list:
    """Permutation and regular lattices for a named group."""
    g = named_group(name)
    reg = regular_lattice(group_ring(g))
    perm = natural_permutation_lattice(g)
    return [perm, reg]
