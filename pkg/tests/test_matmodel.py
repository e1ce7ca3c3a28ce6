"""Random sign-matrix model: exchange relations, traces, and the Monte
Carlo estimator with its exact finite-size expectation."""

from fractions import Fraction

import numpy as np
import pytest

from qgauss import matmodel, moments
from qgauss.copies import FreeHaarBackend
from qgauss.errors import SizeGuard
from qgauss.qfock import FockConfig

H = (Fraction(1),)


def pure_word(m):
    return [(None, H)] * m


@pytest.fixture(scope="module")
def free8():
    return FreeHaarBackend(8)


@pytest.fixture(scope="module")
def cfg1():
    return FockConfig(dim_H=1, max_degree=6)


def test_sample_epsilon_is_symmetric_with_unit_diagonal():
    eps = matmodel.sample_epsilon([[Fraction(1, 2)]], 3, rng=1)
    assert len(eps.letters) == 3
    for a in eps.letters:
        assert eps.entry(a, a) == 1
        for b in eps.letters:
            assert eps.entry(a, b) == eps.entry(b, a)
            assert eps.entry(a, b) in (-1, 1)


def test_sample_epsilon_degenerate_laws():
    all_plus = matmodel.sample_epsilon([[Fraction(1)]], 4, rng=0)
    all_minus = matmodel.sample_epsilon([[Fraction(-1)]], 4, rng=0)
    assert all(v == 1 for v in all_plus.entries.values())
    assert all(v == -1 for v in all_minus.entries.values())


def test_sample_epsilon_mean():
    rng = np.random.Generator(np.random.Philox(key=5))
    vals = []
    for _ in range(300):
        eps = matmodel.sample_epsilon([[Fraction(1, 2)]], 2, rng=rng)
        vals.append(eps.entry(eps.letters[0], eps.letters[1]))
    assert abs(np.mean(vals) - 0.5) < 0.15


def test_build_symmetries_satisfies_relations():
    eps = matmodel.sample_epsilon([[Fraction(0)]], 3, rng=7)
    rep = matmodel.build_symmetries(eps)
    assert rep.verify()


def test_build_symmetries_size_guard():
    eps = matmodel.sample_epsilon([[Fraction(0)]], matmodel.SYMMETRY_CAP + 1,
                                  rng=0)
    with pytest.raises(SizeGuard):
        matmodel.build_symmetries(eps)


def test_word_sign_pairs_odd_multiplicity():
    assert matmodel.word_sign_pairs(["a", "b", "a"]) is None


def test_combinatorial_trace_matches_explicit_matrices():
    rng = np.random.Generator(np.random.Philox(key=11))
    eps = matmodel.sample_epsilon([[Fraction(0)]], 4, rng=rng)
    rep = matmodel.build_symmetries(eps)
    dim = rep.matrices[0].shape[0]
    idx = {l: i for i, l in enumerate(eps.letters)}
    for _ in range(40):
        word = [eps.letters[k] for k in rng.integers(0, 4, size=6)]
        m = np.eye(dim, dtype=np.int64)
        for l in word:
            m = m @ rep.matrices[idx[l]]
        explicit = Fraction(int(np.trace(m)), dim)
        assert matmodel.combinatorial_trace(word, eps) == explicit


def test_exact_model_moment_pure_quartic(free8, cfg1):
    # a single scalar variable at size n: the coincident-index term
    # replaces the limit 2 + Q by an exact (1 - Q)/n correction
    for Q0 in (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1)):
        for n in (1, 2, 4):
            assert matmodel.model_moment_exact(pure_word(4), [[Q0]], n) \
                == 2 + Q0 + Fraction(1 - Q0, n)


def test_exact_model_bias_halves(free8, cfg1):
    u = free8.S["u"]
    word = [(u, H), (u.star(), H), (u, H), (u.star(), H)]
    limit = Fraction(2)
    errs = []
    for n in (2, 4, 8):
        v = matmodel.model_moment_exact(word, [[Fraction(1, 2)]], n,
                                        free8, cfg1)
        errs.append(v - limit)
    assert errs == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]


def test_exact_model_converges_to_q_matrix_moment(free8, cfg1):
    Qm = [[Fraction(1, 2), Fraction(1, 3)],
          [Fraction(1, 3), Fraction(1, 4)]]
    colors = [0, 1, 0, 1]
    word = [(free8.A_one, H)] * 4
    target = moments.q_matrix_moment(word, colors, Qm, free8, cfg1)
    vals = [matmodel.model_moment_exact(pure_word(4), Qm, n, colors=colors)
            for n in (2, 8, 32)]
    errs = [abs(v - target) for v in vals]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= Fraction(1, 32)


def test_mc_estimate_fields_and_z(free8, cfg1):
    est = matmodel.mc_moment(pure_word(4), [[Fraction(1, 2)]], n=4,
                             samples=400, seed=3)
    assert est.samples == 400 and est.n == 4 and est.seed == 3
    assert est.target == 2.5
    assert est.target_n == float(
        matmodel.model_moment_exact(pure_word(4), [[Fraction(1, 2)]], 4))
    assert est.bias == pytest.approx(est.target_n - est.target)
    assert est.stderr > 0
    assert abs(est.z) <= 4  # sampling noise only


def test_mc_is_reproducible(free8, cfg1):
    a = matmodel.mc_moment(pure_word(4), [[Fraction(0)]], n=4, samples=200,
                           seed=9)
    b = matmodel.mc_moment(pure_word(4), [[Fraction(0)]], n=4, samples=200,
                           seed=9)
    assert a.mean == b.mean
    assert a.mean != matmodel.mc_moment(pure_word(4), [[Fraction(0)]], n=4,
                                        samples=200, seed=10).mean


def test_mc_agrees_with_explicit_small_model(free8, cfg1):
    Qm = [[Fraction(1, 2)]]
    fast = matmodel.mc_moment(pure_word(4), Qm, n=2, samples=300, seed=21)
    slow = matmodel.mc_moment_explicit(pure_word(4), Qm, n=2, samples=300,
                                       seed=21)
    assert fast.target_n == slow.target_n
    # independent streams, same distribution: compare means within noise
    assert abs(fast.mean - slow.mean) <= \
        4 * (fast.stderr ** 2 + slow.stderr ** 2) ** 0.5 + 1e-12
    assert abs(slow.z) <= 4


def test_mc_colored_word(free8, cfg1):
    Qm = [[Fraction(1, 2), Fraction(1, 3)],
          [Fraction(1, 3), Fraction(1, 4)]]
    colors = [0, 1, 0, 1]
    est = matmodel.mc_moment(pure_word(4), Qm, n=8, samples=800, seed=5,
                             colors=colors)
    assert est.target == pytest.approx(1 / 3)
    assert abs(est.z) <= 4
