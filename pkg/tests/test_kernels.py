import itertools

import numpy as np
import pytest

from covo import _pykernels, kernels

from .reference import REFERENCE


def test_backend_selected():
    assert kernels.BACKEND in kernels.backends()


@pytest.mark.parametrize("fid", range(1, 14))
def test_backends_match_reference(backend, fid):
    rng = np.random.default_rng(fid)
    X = rng.uniform(-3, 3, (40, 6))
    noise = np.zeros(40)
    got = backend.evaluate_batch(fid, X, noise)
    want = [REFERENCE[f"F{fid}"](list(x)) for x in X]
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)


def test_backends_agree_on_noise():
    backends = kernels.backends()
    if len(backends) < 2:
        pytest.skip("compiled kernels not built")
    X = np.random.default_rng(0).uniform(-1.28, 1.28, (25, 30))
    noise = np.linspace(0, 1, 25)
    a, b = (m.evaluate_batch(7, X, noise) for m in backends.values())
    np.testing.assert_allclose(a, b, rtol=1e-14)


def test_unknown_benchmark(backend):
    with pytest.raises(ValueError):
        backend.evaluate_batch(14, np.zeros((1, 2)), None)


def _enumerate(ranks2):
    counts = {}
    for signs in itertools.product((0, 1), repeat=len(ranks2)):
        s = sum(r for r, g in zip(ranks2, signs) if g)
        counts[s] = counts.get(s, 0) + 1
    return counts


@pytest.mark.parametrize("ranks2", [[2, 4, 6, 8, 10], [3, 3, 6, 9, 9, 12], [2], [5, 5, 5, 5]])
def test_signed_rank_null_matches_enumeration(backend, ranks2):
    got = backend.signed_rank_null(ranks2)
    want = _enumerate(ranks2)
    assert got.sum() == 2 ** len(ranks2)
    for s, c in enumerate(got):
        assert c == want.get(s, 0)


def test_dedupe_mask(backend):
    X = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0 + 2e-9], [1.0, 1.0 + 5e-10]])
    np.testing.assert_array_equal(backend.dedupe_mask(X, 1e-9), [True, False, True, True, False])
    assert backend.dedupe_mask(np.zeros((0, 3)), 1e-9).shape == (0,)


def test_dedupe_mask_chain_keeps_against_survivors_only(backend):
    # B is a duplicate of A and removed; C is near B only, so it survives
    X = np.array([[0.0], [0.6], [1.2]])
    np.testing.assert_array_equal(backend.dedupe_mask(X, 1.0), [True, False, True])
    np.testing.assert_array_equal(_pykernels.dedupe_mask(X, 1.0), [True, False, True])
