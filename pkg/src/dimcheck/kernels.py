"""Batched dimension-exponent kernels.

The dimension algebra is componentwise integer arithmetic on vectors of
seven exponents, so bulk property checks (the self-test runs hundreds of
thousands of them) are hot loops over ``(n, 7)`` int64 arrays.  Those loops
are compiled with numba when it is importable; setting the environment
variable ``DIMCHECK_NO_NUMBA`` to anything but ``0`` forces the pure-numpy
fallback.  Both paths compute identical results; tests assert that.
"""

from __future__ import annotations

import os

import numpy as np

NO_NUMBA_FLAG = "DIMCHECK_NO_NUMBA"

LAW_NAMES = ("associativity", "commutativity", "identity", "inverse", "power")


def _numba_requested() -> bool:
    return os.environ.get(NO_NUMBA_FLAG, "0") in ("", "0")


if _numba_requested():
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        _HAVE_NUMBA = False
else:
    _HAVE_NUMBA = False


def backend() -> str:
    """Which implementation the module-level kernels dispatch to."""
    return "numba" if _HAVE_NUMBA else "numpy"


# -- pure-numpy implementations (always defined; the fallback path) -------


def combine_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a + b


def divide_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a - b


def power_numpy(a: np.ndarray, n: int) -> np.ndarray:
    return a * np.int64(n)


def group_law_failures_numpy(
    a: np.ndarray, b: np.ndarray, c: np.ndarray, max_power: int = 6
) -> np.ndarray:
    """Count rows violating each group law; result indexed by LAW_NAMES."""
    counts = np.zeros(len(LAW_NAMES), dtype=np.int64)
    counts[0] = np.count_nonzero(((a + (b + c)) != ((a + b) + c)).any(axis=1))
    counts[1] = np.count_nonzero(((a + b) != (b + a)).any(axis=1))
    zero = np.zeros_like(a)
    counts[2] = np.count_nonzero(((a + zero) != a).any(axis=1) | ((zero + a) != a).any(axis=1))
    counts[3] = np.count_nonzero(((a + (-a)) != zero).any(axis=1))
    bad = np.zeros(a.shape[0], dtype=bool)
    acc = np.zeros_like(a)
    for p in range(max_power + 1):
        bad |= (acc != a * np.int64(p)).any(axis=1)
        acc = acc + a
    counts[4] = np.count_nonzero(bad)
    return counts


# -- numba implementations ------------------------------------------------

if _HAVE_NUMBA:

    @njit(cache=True)
    def _combine_nb(a, b):
        n, k = a.shape
        out = np.empty((n, k), np.int64)
        for i in range(n):
            for j in range(k):
                out[i, j] = a[i, j] + b[i, j]
        return out

    @njit(cache=True)
    def _divide_nb(a, b):
        n, k = a.shape
        out = np.empty((n, k), np.int64)
        for i in range(n):
            for j in range(k):
                out[i, j] = a[i, j] - b[i, j]
        return out

    @njit(cache=True)
    def _power_nb(a, n):
        rows, k = a.shape
        out = np.empty((rows, k), np.int64)
        for i in range(rows):
            for j in range(k):
                out[i, j] = a[i, j] * n
        return out

    @njit(cache=True)
    def _laws_nb(a, b, c, max_power):
        counts = np.zeros(5, np.int64)
        rows, k = a.shape
        for i in range(rows):
            assoc = comm = ident = inv = powbad = False
            for j in range(k):
                x = a[i, j]
                y = b[i, j]
                z = c[i, j]
                if x + (y + z) != (x + y) + z:
                    assoc = True
                if x + y != y + x:
                    comm = True
                if x + 0 != x or 0 + x != x:
                    ident = True
                if x + (-x) != 0:
                    inv = True
                acc = 0
                for p in range(max_power + 1):
                    if acc != x * p:
                        powbad = True
                    acc += x
            if assoc:
                counts[0] += 1
            if comm:
                counts[1] += 1
            if ident:
                counts[2] += 1
            if inv:
                counts[3] += 1
            if powbad:
                counts[4] += 1
        return counts

    combine = _combine_nb
    divide = _divide_nb
    power = _power_nb
    group_law_failures = _laws_nb
else:
    combine = combine_numpy
    divide = divide_numpy
    power = power_numpy
    group_law_failures = group_law_failures_numpy


def random_exponents(n: int, seed: int, low: int = -8, high: int = 8) -> np.ndarray:
    """Deterministic (n, 7) exponent sample, entries in [low, high]."""
    rng = np.random.default_rng(seed)
    return rng.integers(low, high + 1, size=(n, 7), dtype=np.int64)


def warmup():
    """Trigger jit compilation so timed runs measure the kernels only."""
    tiny = random_exponents(2, 0)
    combine(tiny, tiny)
    divide(tiny, tiny)
    power(tiny, 3)
    group_law_failures(tiny, tiny, tiny, 6)


def run_group_law_suite(n_cases: int, seed: int, max_power: int = 6) -> dict:
    """Check the abelian-group laws on n_cases random exponent triples.

    Returns failure counts per law plus the case and evaluation totals.
    Distinct sub-seeds keep the three operand arrays independent.
    """
    a = random_exponents(n_cases, seed)
    b = random_exponents(n_cases, seed + 1)
    c = random_exponents(n_cases, seed + 2)
    counts = group_law_failures(a, b, c, max_power)
    report = {name: int(counts[i]) for i, name in enumerate(LAW_NAMES)}
    report["cases"] = n_cases
    report["evaluations"] = n_cases * len(LAW_NAMES)
    return report
