import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uurel import _accel, kernels
from uurel.quantum import gram_matrix, haar_random_basis, random_density

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")
PATHS = [pytest.param(True, marks=needs_numba, id="numba"), pytest.param(False, id="numpy")]


def reference_block_max(g, r, s):
    d = g.shape[0]
    best = -1.0
    for rows in itertools.combinations(range(d), r):
        for cols in itertools.combinations(range(d), s):
            blk = g[np.ix_(rows, cols)]
            best = max(best, np.linalg.svd(blk, compute_uv=False)[0] ** 2)
    return best


def random_gram(seed, d):
    rng = np.random.default_rng(seed)
    return gram_matrix(haar_random_basis(d, rng), haar_random_basis(d, rng))


class TestCombinationTable:
    def test_lexicographic(self):
        np.testing.assert_array_equal(kernels.combination_table(4, 2),
                                      [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]])

    def test_empty_shape(self):
        assert kernels.combination_table(3, 0).shape == (1, 0)


@pytest.mark.parametrize("use_numba", PATHS)
class TestPairBlockMax:
    @pytest.mark.parametrize("d,r,s", [(3, 1, 1), (4, 1, 3), (4, 2, 2), (5, 2, 3), (5, 3, 1), (6, 3, 3), (6, 4, 2)])
    def test_matches_svd_reference(self, use_numba, d, r, s):
        g = random_gram(d * 10 + r, d)
        val, rows, cols = kernels.pair_block_max(g, r, s, use_numba)
        assert val == pytest.approx(reference_block_max(g, r, s), abs=1e-12)
        assert len(rows) == r and len(cols) == s
        blk = g[np.ix_(rows, cols)]
        assert np.linalg.svd(blk, compute_uv=False)[0] ** 2 == pytest.approx(val, abs=1e-12)

    def test_full_block_is_one(self, use_numba):
        g = random_gram(0, 4)
        val, _, _ = kernels.pair_block_max(g, 4, 1, use_numba)
        assert val == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("use_numba", PATHS)
class TestMultiTupleMax:
    def test_matches_reference(self, use_numba):
        rng = np.random.default_rng(3)
        stacks = [np.array([random_density(3, 2, rng).entries for _ in range(n)]) for n in (3, 2, 4)]
        val, choice = kernels.multi_tuple_max(stacks, use_numba)
        ref = max(np.linalg.eigvalsh(sum(s[i] for s, i in zip(stacks, ix)))[-1]
                  for ix in itertools.product(*[range(len(s)) for s in stacks]))
        assert val == pytest.approx(ref, abs=1e-12)
        top = np.linalg.eigvalsh(sum(s[i] for s, i in zip(stacks, choice)))[-1]
        assert top == pytest.approx(val, abs=1e-12)


@needs_numba
class TestPathsAgree:
    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 6), r=st.integers(1, 5), s=st.integers(1, 5))
    def test_pair(self, seed, d, r, s):
        r, s = min(r, d), min(s, d)
        g = random_gram(seed, d)
        v1 = kernels.pair_block_max(g, r, s, True)[0]
        v2 = kernels.pair_block_max(g, r, s, False)[0]
        assert v1 == pytest.approx(v2, abs=1e-12)


def test_environment_flag_disables_numba():
    env = dict(os.environ, UUREL_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from uurel import _accel; print(_accel.USE_NUMBA)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
