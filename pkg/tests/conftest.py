"""Shared fixtures: the per-order sweep cache used by several test modules."""

from collections import namedtuple

import pytest

from diospec.hermite import enumerate_orderings, hermite_zeros, permuted_polynomial
from diospec.polynomials import roots

SweepRecord = namedtuple("SweepRecord", ["perm", "poly", "zeros"])

_cache = {}


def sweep_records(n):
    """Zeros of every coefficient ordering at order n, computed once per run."""
    if n not in _cache:
        herm = hermite_zeros(n)
        records = []
        for perm in enumerate_orderings(n):
            poly = permuted_polynomial(herm, perm)
            records.append(SweepRecord(perm, poly, roots(poly)))
        _cache[n] = records
    return _cache[n]


@pytest.fixture(scope="session")
def ordering_sweep():
    return sweep_records
