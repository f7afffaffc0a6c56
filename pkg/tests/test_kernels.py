import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from groupoid_galois import _kernels, catalog
from groupoid_galois.groupoid import coarse_groupoid, cyclic_group, product_with_group

needs_numba = pytest.mark.skipif(_kernels.numba_impl is None, reason="numba not importable")


@needs_numba
@given(st.integers(0, 2**16 - 1))
def test_closure_parity(bits):
    G = catalog.s8_groupoid()
    mask = np.array([(bits >> g) & 1 for g in range(16)], dtype=bool)
    a = _kernels.numpy_impl["closure"](G.comp, G.inv, mask)
    b = _kernels.numba_impl["closure"](G.comp, G.inv, mask)
    assert np.array_equal(a, b)


@needs_numba
@pytest.mark.parametrize("G", [catalog.s8_groupoid(), product_with_group(coarse_groupoid(2), cyclic_group(3)),
                               catalog.two_z2_groupoid()])
def test_closed_subsets_parity(G):
    base = np.array(G.objects, dtype=np.int64)
    free = np.array([g for g in range(len(G)) if g not in set(G.objects)], dtype=np.int64)
    a = _kernels.numpy_impl["closed_subsets"](G.comp, G.inv, base, free)
    b = _kernels.numba_impl["closed_subsets"](G.comp, G.inv, base, free)
    assert sorted(np.asarray(a).tolist()) == sorted(np.asarray(b).tolist())


@needs_numba
@given(st.integers(1, 30).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=40))))
def test_orbit_labels_parity(data):
    n, edges = data
    src = np.array([a for a, _ in edges], dtype=np.int64)
    dst = np.array([b for _, b in edges], dtype=np.int64)
    a = _kernels.numpy_impl["orbit_labels"](n, src, dst)
    b = _kernels.numba_impl["orbit_labels"](n, src, dst)
    assert np.array_equal(a, b)
    # labels are class minima
    assert all(a[i] <= i and a[a[i]] == a[i] for i in range(n))


def test_subset_filter_limit():
    G = coarse_groupoid(2)
    with pytest.raises(ValueError):
        _kernels.closed_subsets(G.comp, G.inv, np.array(G.objects), np.arange(_kernels.MAX_FREE_BITS + 1))


def test_env_flag_selects_numpy():
    env = dict(os.environ, GROUPOID_GALOIS_BACKEND="numpy")
    code = "from groupoid_galois import _kernels; print(_kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_numpy_backend_reproduces_golden():
    env = dict(os.environ, GROUPOID_GALOIS_BACKEND="numpy")
    code = ("from groupoid_galois import catalog, run_strong_correspondence, render_table;"
            "print(render_table(run_strong_correspondence(catalog.s8_example())), end='')")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    from conftest import GOLDEN
    assert out.stdout == (GOLDEN / "s8_strong.txt").read_text(encoding="utf-8")
