import random
from fractions import Fraction
from math import gcd, prod

import pytest

from commensur import oracle
from commensur.abelian import (
    AbHom,
    FgAbGroup,
    aut_order,
    commensurability,
    from_moduli,
    groups_of_order,
    ia_abelian,
    random_finite_commensurability,
)
from commensur.correspondence import compose, index, inverse
from commensur.errors import CapExceeded, NotFinite
from commensur.finmod import ia_finite, stabilizer_data, submodule_from_indices, submodules, trivial_module
from commensur.linalg import IntMatrix


def G(*torsion):
    return FgAbGroup(0, tuple(torsion))


class TestHoms:
    def test_examples(self):
        assert len(oracle.enumerate_homs(G(2), G(3))) == 1
        assert len(oracle.enumerate_homs(G(2), G(4))) == 2

    def test_free_stand_in_counts(self):
        # Hom((Z/m)^n, L0) is (L0[m])^n, with L0[m] the m-torsion
        for m in (2, 3, 4, 6):
            for n in (1, 2):
                for l0 in (G(2), G(4), G(2, 4), G(3, 6), G(12)):
                    tors = prod(gcd(m, d) for d in l0.torsion)
                    src = from_moduli([m] * n)
                    assert len(oracle.enumerate_homs(src, l0)) == tors ** n

    def test_infinite_rejected(self):
        with pytest.raises(NotFinite):
            oracle.enumerate_homs(FgAbGroup(1), G(2))

    def test_cap(self):
        with pytest.raises(CapExceeded):
            oracle.enumerate_homs(G(2, 2, 2, 2), G(2, 2, 2, 2), cap=100)


class TestCorrespondenceIndex:
    def test_examples(self):
        z4 = G(4)
        c = commensurability(z4, AbHom.scalar(z4, 2), AbHom.identity(z4))
        rep = oracle.correspondence_index_bruteforce(c)
        assert rep.computed == 1 and rep.element_count == 12
        ident = commensurability(G(2, 6), AbHom.identity(G(2, 6)), AbHom.identity(G(2, 6)))
        assert oracle.correspondence_index_bruteforce(ident).computed == 1

    def test_random_agreement(self):
        rng = random.Random(21)
        for _ in range(800):
            c = random_finite_commensurability(rng, max_order=40)
            assert oracle.correspondence_index_bruteforce(c).computed == index(c)
            assert oracle.correspondence_index_bruteforce(inverse(c)).computed == 1 / index(c)

    def test_random_composites(self):
        rng = random.Random(22)
        for _ in range(300):
            c = random_finite_commensurability(rng)
            d = random_finite_commensurability(rng, left=c.right)
            dc = compose(c, d)
            assert oracle.correspondence_index_bruteforce(dc).computed == index(dc)


class TestAutIndex:
    def test_identity(self):
        g = trivial_module(G(2, 4))
        i = IntMatrix.identity(2)
        assert oracle.aut_correspondence_index(g, g, g, i, i).computed == 1

    def test_z2_in_z4(self):
        l, m = trivial_module(G(2)), trivial_module(G(4))
        incl = IntMatrix.from_rows([[2]])
        assert oracle.aut_correspondence_index(l, l, m, IntMatrix.identity(1), incl).computed == 2
        assert oracle.inclusion_aut_index((4,), [(2,)], (2,)).computed == 2

    def test_random_commensurabilities(self):
        # for finite modules every commensurability has i(a(c)) = #Aut M / #Aut L
        rng = random.Random(23)
        for _ in range(150):
            c = random_finite_commensurability(rng, max_order=12)
            l, w, m = (trivial_module(x) for x in (c.left, c.w, c.right))
            ref = oracle.aut_correspondence_index(l, w, m, c.f.mat, c.g.mat)
            assert ref.computed == ia_finite(l, m) == ia_abelian(c.left, c.right)

    def test_inclusions_against_stabilizer(self):
        for n in (8, 12, 16, 27):
            for g in groups_of_order(n):
                m = trivial_module(g)
                for pts in submodules(m):
                    lmod, incl = submodule_from_indices(m, pts)
                    gens = [tuple(incl.col(j)) for j in range(incl.cols)]
                    ref = oracle.inclusion_aut_index(g.torsion, gens, lmod.grp.torsion)
                    assert ref.computed == stabilizer_data(m, pts).value

    def test_aut_order_perm(self):
        for n in (16, 36):
            for g in groups_of_order(n):
                assert oracle.aut_order_perm(g.torsion) == len(oracle.enumerate_auts(g, 10 ** 6))
        for g in groups_of_order(64):
            assert oracle.aut_order_perm(g.torsion) == aut_order(g)


class TestEndIndex:
    def test_upper_triangular(self):
        from commensur.orders import regular_lattice, upper_triangular_order

        lat = regular_lattice(upper_triangular_order(2))
        alpha = IntMatrix.diag([1, 5, 5])
        ref = oracle.endomorphism_correspondence_index(lat, lat, lat, IntMatrix.identity(3), alpha)
        assert ref.computed == 5

    def test_c2_pair(self):
        from commensur.orders import cyclic_group, direct_sum, group_ring, regular_lattice, \
            sign_lattice, trivial_lattice, ie_pair

        c2 = cyclic_group(2)
        reg = regular_lattice(group_ring(c2))
        split = direct_sum(trivial_lattice(c2), sign_lattice(c2))
        # x -> (sum, difference) maps the regular lattice onto an index-2 sublattice
        phi = IntMatrix.from_rows([[1, 1], [1, -1]])
        ref = oracle.endomorphism_correspondence_index(reg, reg, split, IntMatrix.identity(2), phi)
        assert ref.computed == ie_pair(reg, split) == 2


def test_report_json():
    rep = oracle.OracleReport(Fraction(3, 2), "element counting", 10)
    assert rep.to_json() == {"computed": "3/2", "method": "element counting", "element_count": 10}
