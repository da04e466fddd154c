import random
from fractions import Fraction

import pytest

from commensur import oracle
from commensur.abelian import (
    ABELIAN,
    AbHom,
    FgAbGroup,
    commensurability,
    hom_certify,
    random_finite_commensurability,
    random_group,
    random_hom,
)
from commensur.correspondence import (
    Correspondence,
    EquivalenceWitness,
    certify,
    compose,
    from_isogeny,
    index,
    inverse,
    inverse_law_witness,
    reflexive_witness,
    verify_equivalence,
)
from commensur.errors import EndpointMismatch, NotIsogeny, ObjectMismatch
from commensur.linalg import IntMatrix, det

Z = FgAbGroup(1)
Z4 = FgAbGroup(0, (4,))
Z2 = FgAbGroup(0, (2,))


def times(g, k):
    return AbHom.scalar(g, k)


def ident(g):
    return AbHom.identity(g)


def M(rows):
    return IntMatrix.from_rows(rows)


class TestFromIsogeny:
    def test_examples(self):
        assert from_isogeny(ident(Z), ABELIAN).index == 1
        assert from_isogeny(times(Z, 3), ABELIAN).index == 3
        assert from_isogeny(times(Z4, 2), ABELIAN).index == 1

    def test_rejects_non_isogeny(self):
        with pytest.raises(NotIsogeny):
            from_isogeny(AbHom.zero(Z, Z), ABELIAN)


class TestIndex:
    def test_examples(self):
        assert index(commensurability(Z, times(Z, 2), times(Z, 3))) == Fraction(3, 2)
        assert index(commensurability(Z, ident(Z), ident(Z))) == 1
        assert index(commensurability(Z4, times(Z4, 2), ident(Z4))) == 1

    def test_json_roundtrip(self):
        c = commensurability(Z, times(Z, 2), times(Z, 3))
        assert Correspondence.from_json(c.to_json(), ABELIAN) == c

    def test_apex_mismatch(self):
        with pytest.raises(ObjectMismatch):
            Correspondence(Z, ident(Z), ident(Z4), ABELIAN)


class TestCompose:
    def test_two_then_three(self):
        c = certify(commensurability(Z, ident(Z), times(Z, 2)))
        d = certify(commensurability(Z, ident(Z), times(Z, 3)))
        dc = compose(c, d)
        assert dc.base.w == Z
        assert dc.index == 6

    def test_identity(self):
        c = certify(commensurability(Z2, ident(Z2), ident(Z2)))
        dc = compose(c, c)
        assert dc.base.w == Z2 and dc.index == 1
        assert verify_equivalence(dc, c, EquivalenceWitness(Z2, ident(Z2), ident(Z2)))

    def test_mismatch(self):
        c = commensurability(Z, ident(Z), ident(Z))
        d = commensurability(Z2, ident(Z2), ident(Z2))
        with pytest.raises(ObjectMismatch):
            compose(c, d)

    def test_multiplicative_finite(self):
        rng = random.Random(7)
        for _ in range(500):
            c = certify(random_finite_commensurability(rng))
            d = certify(random_finite_commensurability(rng, left=c.base.right))
            dc = compose(c, d)
            assert dc.index == c.index * d.index
            assert oracle.correspondence_index_bruteforce(dc).computed == dc.index

    def test_multiplicative_mixed(self):
        rng = random.Random(8)
        done = 0
        while done < 200:
            rank = rng.randint(1, 2)
            objs = [FgAbGroup(rank, random_group(rng, 0, 12).torsion) for _ in range(5)]
            l, w1, m, w2, n = objs
            legs = [random_hom(rng, w1, l), random_hom(rng, w1, m),
                    random_hom(rng, w2, m), random_hom(rng, w2, n)]
            try:
                for h in legs:
                    hom_certify(h)
            except NotIsogeny:
                continue
            c = certify(commensurability(w1, legs[0], legs[1]))
            d = certify(commensurability(w2, legs[2], legs[3]))
            assert compose(c, d).index == c.index * d.index
            done += 1


class TestInverse:
    def test_example(self):
        c = commensurability(Z, ident(Z), times(Z, 2))
        ci = inverse(c)
        assert ci.f == times(Z, 2) and ci.g == ident(Z)
        assert index(ci) == Fraction(1, 2)
        assert inverse(ci) == c

    def test_inverse_law(self):
        rng = random.Random(9)
        for _ in range(200):
            c = certify(random_finite_commensurability(rng))
            assert index(inverse(c)) == 1 / c.index
            assert compose(c, inverse(c)).index == 1
            composite, ident_corr, wit = inverse_law_witness(c)
            assert verify_equivalence(composite, ident_corr, wit)
            assert index(composite) == index(ident_corr) == 1


class TestEquivalence:
    def test_reflexive(self):
        c = commensurability(Z, times(Z, 2), times(Z, 3))
        assert verify_equivalence(c, c, reflexive_witness(c))

    def test_inclusion_witness(self):
        c = commensurability(Z, ident(Z), times(Z, 2))
        # apex of d is 2Z, written in its own generator
        d = commensurability(Z, times(Z, 2), times(Z, 4))
        w = EquivalenceWitness(Z, times(Z, 2), ident(Z))
        assert verify_equivalence(c, d, w)
        assert index(c) == index(d)

    def test_non_isogeny_leg(self):
        c = commensurability(Z, ident(Z), ident(Z))
        assert not verify_equivalence(c, c, EquivalenceWitness(Z, AbHom.zero(Z, Z), AbHom.zero(Z, Z)))

    def test_endpoint_mismatch(self):
        c = commensurability(Z, ident(Z), ident(Z))
        d = commensurability(Z2, ident(Z2), ident(Z2))
        with pytest.raises(EndpointMismatch):
            verify_equivalence(c, d, reflexive_witness(c))

    def test_scaled_apex_equivalent(self):
        rng = random.Random(10)
        for _ in range(100):
            k = rng.randint(1, 6)
            a, b = rng.randint(1, 9), rng.randint(1, 9)
            c = commensurability(Z, times(Z, a), times(Z, b))
            d = commensurability(Z, times(Z, a * k), times(Z, b * k))
            assert verify_equivalence(c, d, EquivalenceWitness(Z, times(Z, k), ident(Z)))
            assert index(c) == index(d)


class TestFibreProduct:
    def test_mod_two(self):
        red = AbHom(Z, Z2, M([[1]]))
        w, p0, p1 = ABELIAN.fibre_product(red, red)
        assert w == FgAbGroup(2)
        emb = p0.mat.vstack(p1.mat)
        assert abs(det(emb)) == 2

    def test_identity_leg(self):
        h = random_hom(random.Random(0), Z4, Z4)
        w, p0, _ = ABELIAN.fibre_product(h, ident(Z4))
        assert w == Z4
        assert hom_certify(p0).index == 1 and hom_certify(p0).ker_order == 1

    def test_z4_over_z2(self):
        w, _, _ = ABELIAN.fibre_product(AbHom(Z4, Z2, M([[1]])), ident(Z2))
        assert w.order == 4

    def test_kernel_orders(self):
        rng = random.Random(11)
        for _ in range(300):
            x, y, m = (random_group(rng, 0, 24) for _ in range(3))
            f, h = random_hom(rng, x, m), random_hom(rng, y, m)
            w, p0, p1 = ABELIAN.fibre_product(f, h)
            ker = lambda g: sum(1 for e in g.src.elements() if not any(g(e)))
            assert ker(p0) == ker(h)
            assert ker(p1) == ker(f)
            assert w.order == sum(1 for a in x.elements() for b in y.elements() if f(a) == h(b))
