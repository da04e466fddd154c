import random
from fractions import Fraction

import pytest

from commensur import oracle
from commensur.abelian import (
    AbHom,
    FgAbGroup,
    aut_order,
    from_presentation,
    groups_of_order,
    hom_certify,
    ia_abelian,
    random_group,
    random_hom,
    torsion_split,
)
from commensur.errors import CapExceeded, NotFinite, NotIsogeny, RankMismatch
from commensur.linalg import IntMatrix


def G(rank=0, *torsion):
    return FgAbGroup(rank, tuple(torsion))


class TestPresentation:
    def test_free(self):
        assert from_presentation(IntMatrix.zeros(2, 0)) == G(2)

    def test_mixed(self):
        assert from_presentation(IntMatrix.from_rows([[2, 0], [0, 0]])) == G(1, 2)

    def test_finite(self):
        assert from_presentation(IntMatrix.from_rows([[2, 4], [6, 8]])) == G(0, 2, 4)

    def test_canonical(self):
        with pytest.raises(ValueError):
            FgAbGroup(0, (4, 2))
        assert FgAbGroup.from_json({"rank": 1, "torsion": ["2"]}) == G(1, 2)
        assert G(1, 2).to_json() == {"rank": 1, "torsion": ["2"]}

    def test_torsion_split(self):
        assert torsion_split(G(3)) == (3, G())
        assert torsion_split(G(0, 6)) == (0, G(0, 6))
        assert torsion_split(G(1, 2, 4)) == (1, G(0, 2, 4))


class TestHomCertify:
    def test_times_three(self):
        c = hom_certify(AbHom.scalar(G(1), 3))
        assert (c.ker_order, c.coker_order, c.index) == (1, 3, 3)

    def test_times_two_on_z4(self):
        c = hom_certify(AbHom.scalar(G(0, 4), 2))
        assert (c.ker_order, c.coker_order, c.index) == (2, 2, 1)

    def test_zero_map(self):
        with pytest.raises(NotIsogeny):
            hom_certify(AbHom.zero(G(1), G(1)))

    def test_bad_torsion_image(self):
        with pytest.raises(ValueError):
            AbHom(G(0, 2), G(0, 3), IntMatrix.from_rows([[1]]))

    def test_agrees_with_counting(self):
        rng = random.Random(1)
        for _ in range(200):
            a, b = random_group(rng, 0, 30), random_group(rng, 0, 30)
            h = random_hom(rng, a, b)
            c = hom_certify(h)
            rep = oracle.correspondence_index_bruteforce(
                _corr(AbHom.identity(a), h))
            assert c.index == rep.computed

    def test_multiplicative(self):
        rng = random.Random(2)
        done = 0
        while done < 500:
            rank = rng.randint(0, 3)
            x = _random_mixed(rng, rank)
            y = _random_mixed(rng, rank)
            z = _random_mixed(rng, rank)
            f, g = random_hom(rng, x, y), random_hom(rng, y, z)
            try:
                cf, cg = hom_certify(f), hom_certify(g)
            except NotIsogeny:
                continue
            assert hom_certify(g @ f).index == cf.index * cg.index
            done += 1


def _random_mixed(rng, rank):
    g = random_group(rng, 0, 10_000)
    return FgAbGroup(rank, g.torsion)


def _corr(f, g):
    from commensur.abelian import commensurability

    return commensurability(f.src, f, g)


class TestAutOrder:
    @pytest.mark.parametrize("grp,expected", [
        (G(0, 5), 4), (G(0, 2, 2), 6), (G(0, 2, 4), 8), (G(), 1), (G(0, 8), 4),
    ])
    def test_examples(self, grp, expected):
        assert aut_order(grp) == expected
        assert len(oracle.enumerate_auts(grp)) == expected

    def test_infinite(self):
        with pytest.raises(NotFinite):
            aut_order(G(1, 2))

    def test_groups_of_order(self):
        assert [len(groups_of_order(n)) for n in (1, 8, 16, 64, 72, 256)] == [1, 3, 5, 11, 6, 22]

    @pytest.mark.slow
    def test_against_oracle_up_to_256(self):
        # enumeration where cheap, the independent permutation-group count otherwise
        for n in range(1, 257):
            for grp in groups_of_order(n):
                try:
                    v = len(oracle.enumerate_auts(grp, 2000))
                except CapExceeded:
                    v = oracle.aut_order_perm(grp.torsion)
                assert v == aut_order(grp), grp


class TestIa:
    def test_examples(self):
        assert ia_abelian(G(1), G(1)) == 1
        assert ia_abelian(G(1), G(1, 2)) == 2
        assert ia_abelian(G(2, 2), G(2, 3)) == Fraction(9, 2)

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatch):
            ia_abelian(G(1), G(2))

    def test_finite_is_aut_ratio(self):
        pool = [g for n in range(1, 33) for g in groups_of_order(n)]
        for a in pool[::3]:
            for b in pool[::4]:
                assert ia_abelian(a, b) == Fraction(aut_order(b), aut_order(a))

    def test_cocycle_and_inverse(self):
        rng = random.Random(3)
        for _ in range(300):
            rank = rng.randint(0, 3)
            l, m, n = (FgAbGroup(rank, random_group(rng, 0, 48).torsion) for _ in range(3))
            assert ia_abelian(l, m) * ia_abelian(m, n) == ia_abelian(l, n)
            assert ia_abelian(l, m) * ia_abelian(m, l) == 1
