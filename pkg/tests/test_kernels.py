import os
import subprocess
import sys

import numpy as np
import pytest

from rendezvous import kernels
from rendezvous.blocks import outcome_tables

BACKENDS = sorted(kernels.available_backends())


def random_case(rng, n_i, n_ii, blocks, n_cls):
    acts_i = rng.integers(0, 7, size=(n_i, blocks))
    acts_ii = rng.integers(0, 7, size=(n_ii, blocks))
    return acts_i, rng.integers(0, n_cls, n_i), acts_ii, rng.integers(0, n_cls, n_ii)


def naive_counts(acts_i, cls_i, acts_ii, cls_ii, tables, n_cls, block_len):
    blocks = acts_i.shape[1]
    out = np.zeros((blocks * block_len + 1, n_cls, n_cls), dtype=np.int64)
    for a, ca in zip(acts_i, cls_i):
        for b, cb in zip(acts_ii, cls_ii):
            for tab in tables:
                step = 0
                for k in range(blocks):
                    code = tab[a[k], b[k]]
                    if code:
                        step = k * block_len + int(code)
                        break
                out[step, ca, cb] += 1
    return out


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_backend_matches_naive_loop(backend, seed):
    rng = np.random.default_rng(seed)
    tables = outcome_tables(reduced=True)
    acts_i, cls_i, acts_ii, cls_ii = random_case(rng, 25, 30, 3, 4)
    got = kernels.first_meet_counts(acts_i, cls_i, acts_ii, cls_ii, tables, 4, 4, 3, backend=backend)
    np.testing.assert_array_equal(got, naive_counts(acts_i, cls_i, acts_ii, cls_ii, tables, 4, 3))


def test_backends_agree_on_larger_input():
    if len(BACKENDS) < 2:
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(7)
    tables = outcome_tables()
    case = random_case(rng, 300, 200, 4, 6)
    a = kernels.first_meet_counts(*case, tables, 6, 6, 3, backend="cython")
    b = kernels.first_meet_counts(*case, tables, 6, 6, 3, backend="python")
    np.testing.assert_array_equal(a, b)
    assert a.sum() == 300 * 200 * len(tables)


def test_environment_forces_fallback():
    env = dict(os.environ, RENDEZVOUS_KERNEL="python")
    out = subprocess.run(
        [sys.executable, "-c", "import rendezvous.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_default_backend_is_known():
    assert kernels.BACKEND in BACKENDS
