import pytest

from covo import kernels


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    """Each importable kernel implementation in turn."""
    return kernels.backends()[request.param]


class FixedRng:
    """Stand-in for RngState with scripted draws."""

    def __init__(self, random=0.5, signs=None, bernoulli=False):
        self._random = random
        self._signs = signs
        self._bernoulli = bernoulli

    def random(self, size=None):
        import numpy as np

        return self._random if size is None else np.full(size, self._random)

    def uniform(self, lo=0.0, hi=1.0, size=None):
        import numpy as np

        v = lo + (hi - lo) * self._random
        return v if size is None else np.full(size, v)

    def signs(self, size):
        import numpy as np

        return np.broadcast_to(np.asarray(self._signs, dtype=float), size).copy()

    def bernoulli(self, p):
        return self._bernoulli
