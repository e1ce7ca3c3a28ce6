"""Linear span growth of structured-word coefficient spaces."""

import pytest

from qgauss.copies import FreeHaarBackend, PermGroupBackend
from qgauss.dimensions import (L2k_dimension_bound, growth_report, span_Dk,
                               _rank)


def test_rank_exact():
    assert _rank([[1, 2], [2, 4]]) == 1
    assert _rank([[1, 0], [0, 1]]) == 2
    assert _rank([[0]]) == 0


def test_span_report_shape():
    backend = FreeHaarBackend(4)
    rep = span_Dk(backend, 1, 3)
    assert rep.k == 1
    assert rep.max_m == 3
    assert 1 <= rep.dim_scalar <= rep.bound == 4
    assert rep.dims_by_m[rep.max_m] == rep.dim_scalar
    # dimensions never shrink when longer words are allowed
    dims = [rep.dims_by_m[m] for m in sorted(rep.dims_by_m)]
    assert all(a <= b for a, b in zip(dims, dims[1:]))
    assert rep.stabilized_at_m <= rep.max_m


def test_span_respects_bound_free():
    backend = FreeHaarBackend(6)
    for k in (1, 2):
        rep = span_Dk(backend, k, k + 2)
        assert rep.dim_scalar <= 4 ** k


def test_span_respects_bound_perm():
    backend = PermGroupBackend(1, 6)
    for k in (1, 2):
        rep = span_Dk(backend, k, k + 2)
        assert rep.dim_scalar <= 2 ** k


def test_growth_report_keys_and_fit():
    backend = FreeHaarBackend(6)
    report = growth_report(backend, 2, max_m_offset=2)
    assert report["backend"] == backend.name
    assert len(report["rows"]) == 3  # one row per k in 0..k_max
    assert report["d_estimate"] >= 1.0
    for k, dim, bound, stab in report["rows"]:
        assert dim <= bound


def test_L2k_bound_scales_with_coefficients():
    backend = FreeHaarBackend(4)
    rep = span_Dk(backend, 2, 4)
    assert L2k_dimension_bound(rep, 3) == rep.dim_scalar * 9
    assert L2k_dimension_bound(rep, 1) == rep.dim_scalar


def test_custom_generators_shrink_the_span():
    backend = FreeHaarBackend(4)
    only_unit = [backend.S["1"]]
    rep = span_Dk(backend, 1, 3, gens=only_unit)
    full = span_Dk(backend, 1, 3)
    assert rep.dim_scalar <= full.dim_scalar
