import json
import random
from math import gcd

import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from commensur.correspondence import Correspondence, compose, index
from commensur.errors import CapExceeded, NotPrimePower
from commensur.finite_ring import (
    FINITE_RINGS,
    FiniteRing,
    FiniteRingHom,
    centre,
    check_unit_isogeny,
    galois_field,
    is_unit,
    jacobson_radical,
    matrix_ring,
    matrix_ring_over,
    product,
    quotient,
    unit_isogeny_catalog,
    unit_group,
    unit_map_image,
    unit_quotient_exponent,
    upper_triangular,
    zmod,
)
from commensur.linalg import IntMatrix


def brute_units(ring):
    """Two-sided units by a double loop over all pairs."""
    els = ring.elements()
    one = ring.unity
    return {x for x in els if any(ring.mul(x, y) == one and ring.mul(y, x) == one for y in els)}


def dual_numbers(n):
    from commensur.finite_ring import from_cyclic_product

    def basis_mul(i, j):
        return [1, 0] if i == j == 0 else ([0, 0] if i == j == 1 else [0, 1])

    return from_cyclic_product([n, n], basis_mul, [1, 0], f"Z/{n}[e]")[0]


RADICAL_RINGS = [
    zmod(4), zmod(8), zmod(12), zmod(9), dual_numbers(2), dual_numbers(4),
    upper_triangular(zmod(2), 2).src, upper_triangular(zmod(4), 2).src,
    product(zmod(2), zmod(4))[0], galois_field(4), matrix_ring(2, 2),
]


class TestConstruction:
    def test_matrix_rings(self):
        assert matrix_ring(2, 1).size == 2
        assert matrix_ring(2, 2).size == 16
        assert matrix_ring(3, 2).size == 81

    def test_matrix_ring_errors(self):
        with pytest.raises(NotPrimePower):
            matrix_ring(6, 2)
        with pytest.raises(CapExceeded):
            matrix_ring(11, 2)
        with pytest.raises(CapExceeded):
            matrix_ring(2, 4)

    def test_galois_fields(self):
        for q in (2, 3, 4, 5, 7, 8, 9):
            f = galois_field(q)
            assert len(unit_group(f)) == q - 1
            assert jacobson_radical(f) == [f.zero]

    def test_bad_associativity(self):
        with pytest.raises(ValueError):
            zr = zmod(3)
            FiniteRing(zr.add, (((2,),),), (1,))

    def test_hom_validation(self):
        with pytest.raises(ValueError):
            FiniteRingHom(zmod(4), zmod(2), IntMatrix.from_rows([[0]]))

    def test_json(self):
        r = matrix_ring(2, 2)
        assert FiniteRing.from_json(json.loads(json.dumps(r.to_json()))) == r

    def test_centre(self):
        assert centre(matrix_ring(2, 2)).group.order == 2
        assert centre(matrix_ring(3, 2)).group.order == 3
        assert centre(zmod(12)).group.order == 12
        assert centre(upper_triangular(zmod(4), 2).src).group.order == 4


class TestUnits:
    def test_examples(self):
        z8 = zmod(8)
        assert sorted(unit_group(z8)) == [(1,), (3,), (5,), (7,)]
        assert len(unit_group(matrix_ring(2, 2))) == 6
        assert unit_group(zmod(2)) == [(1,)]
        assert len(unit_group(matrix_ring(3, 2))) == 48
        assert len(unit_group(matrix_ring(2, 3))) == 168

    def test_against_brute_force(self):
        for r in RADICAL_RINGS + [matrix_ring(3, 2)]:
            assert set(unit_group(r)) == brute_units(r)
            assert all(is_unit(r, x) == (x in brute_units(r)) for x in r.elements())

    def test_cap(self):
        with pytest.raises(CapExceeded):
            unit_group(matrix_ring(2, 2), cap=8)


class TestRadical:
    def test_examples(self):
        assert sorted(jacobson_radical(zmod(4))) == [(0,), (2,)]
        m = matrix_ring(2, 2)
        assert jacobson_radical(m) == [m.zero]
        f2f2 = product(zmod(2), zmod(2))[0]
        assert jacobson_radical(f2f2) == [f2f2.zero]

    def test_criterion_directly(self):
        for r in RADICAL_RINGS[:8]:
            units = brute_units(r)
            one = r.unity
            expected = {y for y in r.elements()
                        if all(r.minus(one, r.mul(r.mul(x, y), z)) in units
                               for x in r.elements() for z in r.elements())}
            assert set(jacobson_radical(r)) == expected

    def test_two_sided_ideal(self):
        for r in RADICAL_RINGS:
            j = set(jacobson_radical(r))
            for a in j:
                for b in j:
                    assert r.plus(a, b) in j
                for x in r.elements():
                    assert r.mul(x, a) in j and r.mul(a, x) in j

    def test_quotient_is_semisimple(self):
        for r in RADICAL_RINGS:
            j = jacobson_radical(r)
            q = quotient(r, j).dst
            assert q.size * len(j) == r.size
            assert jacobson_radical(q) == [q.zero]


class TestUnitIsogeny:
    def test_examples(self):
        rep = check_unit_isogeny(FiniteRingHom(zmod(4), zmod(2), IntMatrix.identity(1)))
        assert rep.ring_surjective and rep.unit_surjective and rep.unit_ker == 2
        rep = check_unit_isogeny(FiniteRingHom.identity(zmod(2)))
        assert rep.ok and rep.unit_index == 1
        z6 = zmod(6)
        pdata = product(zmod(2), zmod(3))
        from commensur.finite_ring import into_product

        diag = into_product(pdata, [FiniteRingHom(z6, zmod(2), IntMatrix.identity(1)),
                                    FiniteRingHom(z6, zmod(3), IntMatrix.identity(1))])
        rep = check_unit_isogeny(diag)
        assert (rep.ring_ker, rep.ring_coker, rep.unit_ker, rep.unit_coker) == (1, 1, 1, 1)

    def test_catalog(self):
        cat = unit_isogeny_catalog()
        assert len(cat) >= 20
        kinds = " ".join(name for name, _ in cat)
        for word in ("M_2(Z/4)", "x", "diag", "Z/8 -> Z/4"):
            assert word in kinds
        for name, h in cat:
            rep = check_unit_isogeny(h)
            assert rep.ok, name
            # recount the unit map from scratch
            su, du = brute_units(h.src), brute_units(h.dst)
            img = {h(u) for u in su}
            assert img <= du
            assert rep.unit_ker == sum(1 for u in su if h(u) == h.dst.unity)
            assert rep.unit_coker == len(du) // len(img)
            if rep.ring_surjective:
                assert img == du, name

    def test_radical_ideals_lift_units(self):
        rng = random.Random(5)
        for r in RADICAL_RINGS:
            j = jacobson_radical(r)
            ideals = [j, [r.zero]] + [[rng.choice(j)] for _ in range(3)]
            for gens in ideals:
                h = quotient(r, gens)
                assert set(unit_map_image(h)) == set(unit_group(h.dst))


def _unit_perm_group(ring):
    units = sorted(brute_units(ring))
    pos = {u: i for i, u in enumerate(units)}
    perms = {u: Permutation([pos[ring.mul(u, v)] for v in units]) for u in units}
    return units, perms


def _quotient_exponent_oracle(ring):
    """Exponent of B^x / (Z(B)^x [B^x, B^x]) with sympy permutation groups."""
    units, perms = _unit_perm_group(ring)
    g = PermutationGroup(list(perms.values()))
    central = [perms[u] for u in units if all(ring.mul(u, v) == ring.mul(v, u) for v in ring.elements())]
    n = PermutationGroup(list(g.derived_subgroup().generators) + central)
    exp = 1
    for p in perms.values():
        k, q = 1, p
        while not n.contains(q):
            q, k = q * p, k + 1
        exp = exp * k // gcd(exp, k)
    return exp


class TestUnitQuotientExponent:
    @pytest.mark.parametrize("q,n,expected", [(5, 1, 1), (2, 2, 2), (3, 2, 2), (2, 3, 1), (4, 2, 1)])
    def test_values(self, q, n, expected):
        ring = matrix_ring(q, n)
        assert unit_quotient_exponent(ring) == expected
        assert n % expected == 0

    @pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3), (5, 1), (4, 2)])
    def test_oracle(self, q, n):
        ring = matrix_ring(q, n)
        assert unit_quotient_exponent(ring) == _quotient_exponent_oracle(ring)

    def test_fields(self):
        for q in range(2, 10):
            if q == 6:
                continue
            assert unit_quotient_exponent(matrix_ring(q, 1)) == 1

    def test_over_nonfield_base(self):
        ring = matrix_ring_over(zmod(4), 2)
        assert unit_quotient_exponent(ring) == _quotient_exponent_oracle(ring)


class TestRingCorrespondences:
    def test_compose_multiplicative(self):
        cat = [h for _, h in unit_isogeny_catalog() if h.src.size <= 64 and h.dst.size <= 64]
        pairs = 0
        for f in cat:
            for g in cat:
                if g.src != f.dst:
                    continue
                c = Correspondence(f.src, FiniteRingHom.identity(f.src), f, FINITE_RINGS)
                d = Correspondence(g.src, FiniteRingHom.identity(g.src), g, FINITE_RINGS)
                assert index(compose(c, d)) == index(c) * index(d)
                pairs += 1
        assert pairs > 0
