"""The three backends realizing symmetric independent copies, and the
exhaustive axiom checker that certifies them at small window sizes."""

from fractions import Fraction

import pytest

from qgauss.algebra import cyclic_group, group_algebra
from qgauss.copies import (FreeHaarBackend, FreeWordElement, PermGroupBackend,
                           TensorBackend, axiom_check)


@pytest.fixture(scope="module")
def free3():
    return FreeHaarBackend(3)


@pytest.fixture(scope="module")
def perm3():
    return PermGroupBackend(1, 3, validate=True)


@pytest.fixture(scope="module")
def tensor3():
    z2 = group_algebra(cyclic_group(2))
    return TensorBackend(z2, group_algebra(cyclic_group(2)), 3)


# ---------------------------------------------------------------------
# reduced words in a free group


def test_free_word_reduction():
    u, ustar = ("u", 1), ("u", -1)
    assert FreeWordElement.from_word((u, ustar)) == FreeWordElement.from_word(())
    x = FreeWordElement.from_word((u,)) * FreeWordElement.from_word((ustar,))
    assert x.trace() == 1


def test_free_word_star_is_involutive_antihomomorphism():
    a = FreeWordElement.from_word((("a", 1), ("b", -1))).scale(Fraction(2, 3))
    b = FreeWordElement.from_word((("b", 1),))
    assert (a * b).star() == b.star() * a.star()
    assert a.star().star() == a


def test_free_trace_vanishes_off_identity(free3):
    u = free3.S["u"]
    assert u.trace() == 0
    assert (u * u).trace() == 0
    assert free3.trace(u * u.star()) == 1


def test_free_pi_and_expect(free3):
    u = free3.S["u"]
    u2 = free3.pi(2, u)
    assert u2 != u
    # conditional expectation onto copies {1} kills the letter living at 2
    assert free3.expect([1], u2).is_zero()
    assert free3.expect([2], u2) == u2


def test_free_expect_is_partial_trace_on_products(free3):
    u = free3.S["u"]
    x = free3.pi(1, u) * free3.pi(2, u) * free3.pi(2, u.star())
    assert free3.expect([1], x) == free3.pi(1, u)


# ---------------------------------------------------------------------
# permutation backend


def test_perm_pi_fixes_first_copy(perm3):
    u = perm3.S["u01"]
    assert perm3.pi(1, u) == u
    assert perm3.pi(2, u) != u


def test_perm_expect_projects_support(perm3):
    u = perm3.S["u01"]
    x = perm3.pi(2, u)
    # a transposition moving the point 2 has no support inside copies {1}
    e = perm3.expect([1], x)
    assert e != x
    assert perm3.trace(e) == perm3.trace(x)


def test_perm_relabel_is_trace_preserving_automorphism(perm3):
    u = perm3.S["u01"]
    x = perm3.pi(1, u) * perm3.pi(2, u)
    y = perm3.relabel({1: 2, 2: 3, 3: 1}, x)
    assert perm3.trace(x) == perm3.trace(y)
    assert y == perm3.pi(2, u) * perm3.pi(3, u)


def test_perm_b_pairs_commute_with_copies(perm3):
    for b, _ in perm3.B_pairs:
        for j in range(1, 4):
            assert perm3.pi(j, b) == b


# ---------------------------------------------------------------------
# tensor backend


def test_tensor_pi_places_generator_in_slot(tensor3):
    g = tensor3.S["g"]
    x1, x2 = tensor3.pi(1, g), tensor3.pi(2, g)
    assert x1 != x2
    assert x1 * x2 == x2 * x1  # disjoint slots commute
    assert tensor3.trace(x1 * x1) == 1


def test_tensor_expect_traces_out_slots(tensor3):
    g = tensor3.S["g"]
    x = tensor3.pi(2, g)
    assert tensor3.expect([1], x).is_zero()  # tau_C(g) = 0
    assert tensor3.expect([2], x) == x


def test_tensor_independence(tensor3):
    g = tensor3.S["g"]
    x = tensor3.pi(1, g) * tensor3.pi(2, g)
    assert tensor3.trace(x) == tensor3.trace(tensor3.pi(1, g)) * \
        tensor3.trace(tensor3.pi(2, g))


# ---------------------------------------------------------------------
# axiom certification


@pytest.mark.parametrize("name", ["free", "perm", "tensor"])
def test_axioms_hold(name, free3, perm3, tensor3):
    backend = {"free": free3, "perm": perm3, "tensor": tensor3}[name]
    report = axiom_check(backend, word_len=3)
    for ax in ("axiom1", "axiom2", "axiom3", "axiom4", "axiom5"):
        assert report[ax]["ok"], (ax, report[ax]["witness"])
    assert report["passed"]
    assert report["axiom2"]["checked"] > 0
    assert report["axiom3"]["checked"] > 0


def test_dim_bounds(free3, perm3, tensor3):
    assert [free3.dim_bound(k) for k in (1, 2, 3)] == [4, 16, 64]
    assert [perm3.dim_bound(k) for k in (1, 2, 3)] == [2, 4, 8]
    assert tensor3.dim_bound(2) == 4  # |C| = 2 per slot
