"""Compare the compiled ring kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends get identical multiplication tables; outputs are checked to
agree before any timing is reported.
"""

import argparse
import time

import numpy as np

from commensur import _pykernels
from commensur.finite_ring import galois_field, matrix_ring, matrix_ring_over, zmod

try:
    from commensur import _ckernels
except ImportError:
    _ckernels = None


def _rings():
    return [zmod(64), galois_field(9), matrix_ring(2, 2), matrix_ring(2, 3),
            matrix_ring(3, 2), matrix_ring_over(zmod(4), 2)]


def _run(mod, ring):
    mul, om = ring.mul_table, ring.one_minus
    one = ring.index(ring.unity)
    inv = np.asarray(mod.unit_inverse(mul, one))
    units = (inv >= 0).astype(np.uint8)
    rad = np.asarray(mod.radical_mask(mul, om, units))
    unit_idx = np.nonzero(units)[0]
    mem = np.asarray(mod.closure(mul, list(unit_idx[:2]), one))
    exp = mod.quotient_exponent(mul, mem, unit_idx)
    return inv, rad, mem, exp


def _time(mod, ring, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        _run(mod, ring)
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; reinstall without COMMENSUR_NO_EXT")
        return 1
    print(f"{'ring':<16}{'size':>6}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for ring in _rings():
        ref, got = _run(_pykernels, ring), _run(_ckernels, ring)
        assert all(np.array_equal(a, b) for a, b in zip(ref[:3], got[:3])) and ref[3] == got[3]
        tp = _time(_pykernels, ring, args.repeat)
        tc = _time(_ckernels, ring, args.repeat)
        print(f"{str(ring):<16}{ring.size:>6}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
