"""Deformed Fock space: inner products, field operators, vacuum moments.

The vacuum moments computed with ladder operators are cross-checked
against the independent pairing-sum oracle

    sum over pair partitions of q^(crossings) * prod <h_left, h_right>.
"""

import math
from fractions import Fraction
from itertools import product

import pytest

from qgauss.partitions import crossing_number, enumerate_pair_partitions
from qgauss.qfock import (FockConfig, FockVector, apply_field, gram_psd_check,
                          q_inner, vacuum_moment)
from qgauss.qpoly import QPoly
from qgauss.errors import TruncationExceeded


def pairing_sum_oracle(vecs, cfg):
    total = QPoly.zero()
    for sigma in enumerate_pair_partitions(len(vecs)):
        prod_ip = Fraction(1)
        for l, r in sigma.sorted_pairs():
            prod_ip *= cfg.ip(vecs[l - 1], vecs[r - 1])
        if prod_ip:
            total = total + QPoly.monomial(crossing_number(sigma)).scale(prod_ip)
    return total


@pytest.fixture
def cfg2():
    return FockConfig(dim_H=2, max_degree=6)


def test_custom_inner_must_be_positive_definite():
    with pytest.raises(ValueError):
        FockConfig(dim_H=2, inner=[[1, 2], [2, 1]])
    FockConfig(dim_H=2, inner=[["1", "1/2"], ["1/2", "1"]])  # fine


def test_q_inner_degree_mismatch_is_zero(cfg2):
    # index words of different lengths are orthogonal
    assert q_inner((0,), (0, 0), cfg2).is_zero()


def test_q_inner_two_letters(cfg2):
    # <e0 e1, e0 e1> = 1, plus q from the swap when letters repeat
    assert q_inner((0, 1), (0, 1), cfg2) == QPoly.one()
    assert q_inner((0, 0), (0, 0), cfg2) == QPoly([1, 1])
    assert q_inner((0, 1), (1, 0), cfg2) == QPoly([0, 1])


def test_q_inner_matches_q_factorial(cfg2):
    # <e0^k, e0^k> = [k]_q! = prod (1 + q + ... + q^(j-1))
    expected = QPoly.one()
    for j in range(1, 5):
        expected = expected * QPoly([1] * j)
        assert q_inner((0,) * j, (0,) * j, cfg2) == expected


def test_field_operator_on_vacuum(cfg2):
    e0 = cfg2.basis_vector(0)
    v = apply_field(e0, FockVector.vacuum(), cfg2)
    assert v.coefficient((0,)) == QPoly.one()
    v2 = apply_field(e0, v, cfg2)
    # creation part e0 e0 plus annihilation back to vacuum
    assert v2.coefficient((0, 0)) == QPoly.one()
    assert v2.coefficient(()) == QPoly.one()


def test_field_truncation_guard():
    cfg = FockConfig(dim_H=1, max_degree=1)
    e0 = cfg.basis_vector(0)
    v = apply_field(e0, FockVector.vacuum(), cfg)
    with pytest.raises(TruncationExceeded):
        apply_field(e0, v, cfg)


def test_vacuum_moment_known_values():
    cfg = FockConfig(dim_H=1, max_degree=6)
    e0 = cfg.basis_vector(0)
    assert vacuum_moment([e0] * 2, cfg) == QPoly.one()
    assert vacuum_moment([e0] * 4, cfg) == QPoly([2, 1])
    assert vacuum_moment([e0] * 6, cfg) == QPoly([5, 6, 3, 1])
    assert vacuum_moment([e0] * 3, cfg).is_zero()


def test_vacuum_moment_sums_to_double_factorial_at_q_one():
    cfg = FockConfig(dim_H=1, max_degree=8)
    e0 = cfg.basis_vector(0)
    for k in range(1, 5):
        poly = vacuum_moment([e0] * (2 * k), cfg)
        assert poly.eval(Fraction(1)) == math.prod(range(2 * k - 1, 0, -2))
        # q = 0 counts non-crossing pairings
        assert poly.eval(Fraction(0)) == math.comb(2 * k, k) // (k + 1)


def test_vacuum_moment_against_pairing_oracle(cfg2):
    basis = [cfg2.basis_vector(b) for b in range(2)]
    for m in (2, 4):
        for vecs in product(basis, repeat=m):
            assert vacuum_moment(list(vecs), cfg2) == \
                pairing_sum_oracle(list(vecs), cfg2)


def test_vacuum_moment_with_nontrivial_inner():
    inner = [[Fraction(1), Fraction(1, 2)], [Fraction(1, 2), Fraction(2)]]
    cfg = FockConfig(dim_H=2, inner=inner, max_degree=4)
    basis = [cfg.basis_vector(b) for b in range(2)]
    for vecs in product(basis, repeat=4):
        assert vacuum_moment(list(vecs), cfg) == pairing_sum_oracle(list(vecs), cfg)


def test_gram_psd_inside_the_interval():
    cfg = FockConfig(dim_H=2, max_degree=3)
    for q0 in (Fraction(-1, 2), Fraction(0), Fraction(1, 2)):
        ok, min_eig = gram_psd_check(3, cfg, q0)
        assert ok, f"q={q0}: min eigenvalue {min_eig}"


def test_gram_degenerates_at_the_boundary():
    # at q = 1 words that differ by a permutation collide, so the Gram
    # matrix of degree-2 words is singular but still PSD
    cfg = FockConfig(dim_H=2, max_degree=2)
    ok, min_eig = gram_psd_check(2, cfg, Fraction(1))
    assert ok and abs(min_eig) < 1e-9
