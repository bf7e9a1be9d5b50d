"""Shared seeded input generators for the test-suite."""
import numpy as np

from gerstenhaber.hochschild import random_cochain


def draw_degrees(rng, n, lo, hi, cap=None, shifted=False):
    """n degrees in [lo, hi]; resampled until the output-degree estimate is <= cap.

    The estimate is sum(d) (cup-like) or the brace degree d_0 + sum(d_i - 1)
    when ``shifted``.
    """
    while True:
        degs = [int(d) for d in rng.integers(lo, hi + 1, size=n)]
        out = degs[0] + sum(d - 1 for d in degs[1:]) if shifted else sum(degs)
        if cap is None or max(degs) <= cap and out <= cap:
            return degs


def cochains(a, rng, degs):
    seeds = rng.integers(0, 2**31, size=len(degs))
    return [random_cochain(a, d, int(s)) for d, s in zip(degs, seeds)]


def rng_for(*key):
    return np.random.Generator(np.random.PCG64(list(key)))
