import os
import random
import subprocess
import sys

import numpy as np
import pytest

from commensur import _pykernels, kernels
from commensur.finite_ring import galois_field, matrix_ring, matrix_ring_over, product, zmod

ck = pytest.importorskip("commensur._ckernels")

RINGS = [zmod(12), zmod(16), galois_field(9), matrix_ring(2, 2), matrix_ring(3, 2),
         matrix_ring_over(zmod(4), 2), product(zmod(4), galois_field(4))[0]]


def _inputs(ring):
    mul = ring.mul_table
    one = ring.index(ring.unity)
    return mul, one, ring.one_minus


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_backends_agree(ring):
    mul, one, om = _inputs(ring)
    inv_c = ck.unit_inverse(mul, one)
    inv_p = _pykernels.unit_inverse(mul, one)
    assert np.array_equal(inv_c, inv_p)
    units = (inv_p >= 0).astype(np.uint8)
    assert np.array_equal(np.asarray(ck.radical_mask(mul, om, units)),
                          _pykernels.radical_mask(mul, om, units))
    rng = random.Random(ring.size)
    unit_idx = np.nonzero(units)[0]
    gens = sorted(rng.sample(list(unit_idx), min(3, len(unit_idx))))
    mem_c = np.asarray(ck.closure(mul, gens, one))
    mem_p = _pykernels.closure(mul, gens, one)
    assert np.array_equal(mem_c, mem_p)
    assert ck.quotient_exponent(mul, mem_p, unit_idx) == _pykernels.quotient_exponent(mul, mem_p, unit_idx)


def test_selected_backend():
    assert kernels.BACKEND == ("python" if os.environ.get("COMMENSUR_PURE") == "1" else "cython")


def test_pure_switch():
    env = dict(os.environ, COMMENSUR_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from commensur import BACKEND; print(BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
