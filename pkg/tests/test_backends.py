"""Both kernel implementations must agree, bit for bit."""

import os
import subprocess
import sys

import numpy as np
import pytest

import oracle
from sepchk import BACKEND, gf2
from sepchk._backend import available_backends

BACKENDS = available_backends()
compiled = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")


def packed(dense):
    return gf2.Gf2Matrix.from_dense(dense).words


def test_python_always_available():
    assert "python" in BACKENDS and BACKEND in BACKENDS


def test_env_forces_fallback():
    code = "import sepchk; print(sepchk.BACKEND)"
    env = dict(os.environ, SEPCHK_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_rref_against_oracle(name):
    k = BACKENDS[name]
    rng = np.random.default_rng(41)
    for _ in range(40):
        rows, cols = rng.integers(1, 30), rng.integers(1, 150)
        dense = (rng.random((rows, cols)) < rng.uniform(0.05, 0.6)).astype(np.uint8)
        words, pivots = k.rref(packed(dense), int(cols))
        assert len(pivots) == oracle.rank(dense.tolist())
        top = gf2.Gf2Matrix(rows, cols, words).to_dense()[: len(pivots)]
        for i, p in enumerate(pivots):
            assert top[i, p] == 1 and top[:, p].sum() == 1
            assert not top[i, :p].any()


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_sparse_rank_against_oracle(name):
    k = BACKENDS[name]
    rng = np.random.default_rng(42)
    for _ in range(40):
        rows, cols = int(rng.integers(1, 90)), int(rng.integers(1, 60))
        dense = (rng.random((rows, cols)) < 0.08).astype(np.uint8)
        columns = [np.flatnonzero(dense[:, j]).tolist() for j in range(cols)]
        assert k.sparse_rank(columns, rows) == oracle.rank(dense.tolist())


@compiled
def test_rref_parity():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = np.random.default_rng(43)
    for _ in range(60):
        rows, cols = rng.integers(1, 40), rng.integers(1, 200)
        words = packed((rng.random((rows, cols)) < 0.3).astype(np.uint8))
        limit = int(rng.integers(-1, cols + 1))
        a, pa = py.rref(words, int(cols), limit)
        b, pb = cy.rref(words, int(cols), limit)
        r = len(pa)
        assert pa == list(pb)
        if limit < 0 or limit >= cols:
            assert np.array_equal(a, b)  # full reduction is canonical
            continue
        # with a pivot limit, later rows are fixed only up to their span, and
        # pivot rows only up to adding members of it
        rest_a = gf2.Gf2Matrix(len(a) - r, cols, a[r:]).to_dense()
        rest_b = gf2.Gf2Matrix(len(b) - r, cols, b[r:]).to_dense()
        span = oracle.rank(rest_a.tolist())
        assert span == oracle.rank(rest_b.tolist()) == oracle.rank(np.vstack([rest_a, rest_b]).tolist())
        diff = gf2.Gf2Matrix(r, cols, a[:r] ^ b[:r]).to_dense()
        assert oracle.rank(np.vstack([rest_a, diff]).tolist()) == span
        assert not rest_a[:, :limit].any() and not rest_b[:, :limit].any()


@compiled
def test_sparse_rank_parity():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = np.random.default_rng(44)
    for _ in range(60):
        rows = int(rng.integers(1, 300))
        columns = [sorted(set(rng.integers(0, rows, size=rng.integers(0, 5)).tolist())) for _ in range(80)]
        assert py.sparse_rank(columns, rows) == cy.sparse_rank(columns, rows)


@compiled
@pytest.mark.parametrize("shape", [(23, 19), (9, 8, 7), (1, 5), (2, 2)])
def test_label_parity(shape):
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = np.random.default_rng(45)
    for _ in range(20):
        occ = rng.random(shape) < rng.uniform(0.1, 0.7)
        la, na = py.label_components(occ)
        lb, nb = cy.label_components(occ)
        assert na == nb == oracle.flood_fill_count(occ)
        assert np.array_equal(la, lb)
