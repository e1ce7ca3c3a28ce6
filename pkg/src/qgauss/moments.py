"""The moment engine: partition-sum moments, exact finite-n moments,
Wick-word reduction, inner products, and convolution expansion.

Words are sequences of (x, h) letters: x an A-element of the chosen
backend, h a rational coordinate vector over the Fock configuration's
spanning family.  All results are exact polynomials in q (or exact
rationals where a numeric Q-matrix replaces q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from . import qfock
from .errors import WindowExceeded
from .partitions import (Partition12, convolution_joins, crossing_number,
                         encoding_map, enumerate_pair_partitions)
from .qfock import FockConfig
from .qpoly import QPoly


def _pair_product(sigma: Partition12, hs, cfg: FockConfig) -> Fraction:
    out = Fraction(1)
    for l, r in sigma.sorted_pairs():
        out *= cfg.ip(hs[l - 1], hs[r - 1])
        if not out:
            break
    return out


def trace_of_partition_term(sigma: Partition12, xs, hs, backend,
                            cfg: FockConfig) -> QPoly:
    """tau of the single-partition component x_sigma of a word.

    Zero unless sigma is a pair partition; otherwise
    q^cr(sigma) * prod <h_l,h_r> * tau_D of the pi-word with the canonical
    index assignment (pairs get indices 1..p ordered by left leg).
    """
    if not sigma.is_pair_partition():
        return QPoly.zero()
    ip = _pair_product(sigma, hs, cfg)
    if not ip:
        return QPoly.zero()
    index_of = {}
    for t, (l, r) in enumerate(sigma.sorted_pairs(), start=1):
        index_of[l] = t
        index_of[r] = t
    prod = backend.one()
    for pos in range(1, sigma.m + 1):
        prod = prod * backend.pi(index_of[pos], xs[pos - 1])
    tr = backend.trace(prod)
    if not tr:
        return QPoly.zero()
    return QPoly.monomial(crossing_number(sigma), ip * tr)


def moment(word, backend, cfg: FockConfig) -> QPoly:
    """tau(s(x_1,h_1)...s(x_m,h_m)) as an exact polynomial in q.

    The sum over pair partitions of q^cr * prod<h_l,h_r> * tau_D(pi-word);
    zero for odd m.
    """
    word = list(word)
    m = len(word)
    if m % 2:
        return QPoly.zero()
    if backend.window < m // 2:
        raise WindowExceeded(
            f"word of length {m} needs window >= {m // 2}, "
            f"backend has {backend.window}")
    xs = [x for x, _ in word]
    hs = [h for _, h in word]
    total = QPoly.zero()
    for sigma in enumerate_pair_partitions(m):
        total = total + trace_of_partition_term(sigma, xs, hs, backend, cfg)
    return total


# ---------------------------------------------------------------------
# finite-n generators


def enumerate_set_partitions(m: int):
    """All set partitions of {1..m} as sorted tuples of sorted blocks."""
    if m == 0:
        yield ()
        return

    def rec(k, blocks):
        if k > m:
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(k)
            yield from rec(k + 1, blocks)
            b.pop()
        blocks.append([k])
        yield from rec(k + 1, blocks)
        blocks.pop()

    yield from rec(1, [])


def finite_n_moment(word, backend, n: int, cfg: FockConfig) -> QPoly:
    """Exact moment of the finite-n generators.

    tau(u_n(x_1,h_1)...u_n(x_m,h_m)) with
    u_n(x,h) = n^{-1/2} sum_j s(e_j (x) h) (x) pi_j(x): the sum over all
    index tuples is grouped by the coincidence partition, each class
    contributing (n falling |rho|) times its representative value.
    """
    word = list(word)
    m = len(word)
    if m == 0:
        return QPoly.one()
    if m % 2:
        return QPoly.zero()
    if n < 1:
        raise ValueError("n must be positive")
    if backend.window < min(n, m):
        raise WindowExceeded(
            f"finite-n moment needs window >= {min(n, m)}, "
            f"backend has {backend.window}")
    xs = [x for x, _ in word]
    hs = [h for _, h in word]
    big_cfgs = {}
    total = QPoly.zero()
    for blocks in enumerate_set_partitions(m):
        r = len(blocks)
        if r > n:
            continue
        block_of = {}
        for t, b in enumerate(blocks):
            for pos in b:
                block_of[pos] = t
        # trace of the pi-word at the representative tuple (1..r by block)
        prod = backend.one()
        for pos in range(1, m + 1):
            prod = prod * backend.pi(block_of[pos] + 1, xs[pos - 1])
        tr = backend.trace(prod)
        if not tr:
            continue
        # Fock factor on l2_r (x) H with vectors e_{block} (x) h
        big = big_cfgs.get(r)
        if big is None:
            big = _tensor_config(r, cfg, (m + 1) // 2)
            big_cfgs[r] = big
        vecs = [_slot_vector(block_of[pos], hs[pos - 1], r, cfg)
                for pos in range(1, m + 1)]
        fock = qfock.vacuum_moment(vecs, big)
        if fock.is_zero():
            continue
        total = total + fock.scale(tr * math.perm(n, r))
    return total.scale(Fraction(1, n ** (m // 2)))


def _tensor_config(r: int, cfg: FockConfig, max_degree: int) -> FockConfig:
    d = cfg.dim_H
    inner = [[cfg.inner[i % d][j % d] if i // d == j // d else Fraction(0)
              for j in range(r * d)] for i in range(r * d)]
    return FockConfig(r * d, tuple(tuple(row) for row in inner), max_degree)


def _slot_vector(slot: int, h, r: int, cfg: FockConfig):
    d = cfg.dim_H
    out = [Fraction(0)] * (r * d)
    for c, hc in enumerate(h):
        out[slot * d + c] = Fraction(hc)
    return tuple(out)


# ---------------------------------------------------------------------
# Q-matrix moments


def q_matrix_moment(word, colors, Qm, backend, cfg: FockConfig) -> Fraction:
    """Moment with the crossing weight q replaced by per-color-pair
    entries: each crossing ({a,b},{c,d}), a<c<b<d, contributes
    Q[t_a][t_c].  Pairs must match colors (variables of different colors
    have covariance zero, as the sign-matrix model realizes); partitions
    pairing distinct colors contribute nothing.  For monochromatic words
    with constant Qm = q0 this reduces to moment() evaluated at q0.
    Exact when Qm is rational."""
    word = list(word)
    m = len(word)
    colors = list(colors)
    if len(colors) != m:
        raise ValueError("one color per letter required")
    Qm = [[Fraction(x) for x in row] for row in Qm]
    nt = len(Qm)
    if any(len(row) != nt for row in Qm):
        raise ValueError("Q matrix must be square")
    for i in range(nt):
        for j in range(nt):
            if Qm[i][j] != Qm[j][i]:
                raise ValueError("Q matrix must be symmetric")
            if abs(Qm[i][j]) > 1:
                raise ValueError("Q entries must lie in [-1, 1]")
    if any(not 0 <= t < nt for t in colors):
        raise ValueError("color out of range for the Q matrix")
    if m % 2:
        return Fraction(0)
    if backend.window < m // 2:
        raise WindowExceeded(
            f"word of length {m} needs window >= {m // 2}")
    xs = [x for x, _ in word]
    hs = [h for _, h in word]
    total = Fraction(0)
    for sigma in enumerate_pair_partitions(m):
        if any(colors[l - 1] != colors[r - 1] for l, r in sigma.pairs):
            continue
        ip = _pair_product(sigma, hs, cfg)
        if not ip:
            continue
        weight = Fraction(1)
        ps = sigma.sorted_pairs()
        for (a, b), (c, d) in combinations(ps, 2):
            if a < c < b < d:
                weight *= Qm[colors[a - 1]][colors[c - 1]]
                if not weight:
                    break
        if not weight:
            continue
        index_of = {}
        for t, (l, r) in enumerate(ps, start=1):
            index_of[l] = t
            index_of[r] = t
        prod = backend.one()
        for pos in range(1, m + 1):
            prod = prod * backend.pi(index_of[pos], xs[pos - 1])
        total += weight * ip * backend.trace(prod)
    return total


# ---------------------------------------------------------------------
# Wick words


@dataclass
class WickWord:
    """A partition-indexed generator x_sigma(x_1..x_m; h_1..h_m).

    f_sigma and F_sigma are filled by reduce(): f_sigma is the scalar
    q^cr * prod<h_l,h_r>, F_sigma the reduced coefficient
    E_{A_{1..s}}(pi_{phi(1)}(x_1)...pi_{phi(m)}(x_m)).
    """

    sigma: Partition12
    xs: tuple
    hs: tuple
    backend: object
    cfg: FockConfig
    f_sigma: QPoly = None
    F_sigma: object = None

    @property
    def degree(self) -> int:
        return self.sigma.num_singletons

    def singleton_vectors(self):
        return [self.hs[k - 1] for k in self.sigma.sorted_singletons()]

    def adjoint(self) -> "WickWord":
        """The Wick word of the adjoint: reversed partition, reversed
        starred coefficients, reversed vectors."""
        return WickWord(self.sigma.reversed(),
                        tuple(x.star() for x in reversed(self.xs)),
                        tuple(reversed(self.hs)),
                        self.backend, self.cfg)


def reduce(sigma: Partition12, xs, hs, backend, cfg: FockConfig) -> WickWord:
    """Compute the reduced form x_sigma = f_sigma * W_sigma.

    The encoding map sends the t-th singleton to copy index t and the t-th
    pair to s+t; F_sigma is the conditional expectation onto the first s
    copies of the resulting pi-word.
    """
    xs = tuple(xs)
    hs = tuple(hs)
    s = sigma.num_singletons
    p = sigma.num_pairs
    if backend.window < s + p:
        raise WindowExceeded(
            f"reduction needs window >= s+p = {s + p}, "
            f"backend has {backend.window}")
    phi = encoding_map(sigma)
    prod = backend.one()
    for pos in range(1, sigma.m + 1):
        prod = prod * backend.pi(phi[pos], xs[pos - 1])
    F = backend.expect(range(1, s + 1), prod)
    f = QPoly.monomial(crossing_number(sigma), _pair_product(sigma, hs, cfg))
    return WickWord(sigma, xs, hs, backend, cfg, f_sigma=f, F_sigma=F)


def _reduced(w: WickWord) -> WickWord:
    if w.F_sigma is None:
        return reduce(w.sigma, w.xs, w.hs, w.backend, w.cfg)
    return w


def wick_inner_product(w1: WickWord, w2: WickWord, backend=None) -> QPoly:
    """<x_sigma, x_nu> = tau(x_nu* x_sigma), via the reduced forms.

    Zero when the singleton degrees differ; otherwise
    f1 * f2 * sum over gamma in S_k of q^inv(gamma)
    * prod_s <g_{gamma(s)}, g~_s>
    * tau_D(relabel(t -> gamma(t))(F2)* F1).
    """
    backend = backend or w1.backend
    if w1.degree != w2.degree:
        return QPoly.zero()
    w1 = _reduced(w1)
    w2 = _reduced(w2)
    k = w1.degree
    g1 = w1.singleton_vectors()
    g2 = w2.singleton_vectors()
    cfg = w1.cfg
    total = QPoly.zero()
    for gamma in permutations(range(1, k + 1)):
        vec = Fraction(1)
        for s in range(1, k + 1):
            vec *= cfg.ip(g1[gamma[s - 1] - 1], g2[s - 1])
            if not vec:
                break
        if not vec:
            continue
        relabeled = backend.relabel({t: gamma[t - 1] for t in range(1, k + 1)},
                                    w2.F_sigma)
        tr = backend.trace(relabeled.star() * w1.F_sigma)
        if not tr:
            continue
        inv = sum(1 for i in range(k) for j in range(i + 1, k)
                  if gamma[i] > gamma[j])
        total = total + QPoly.monomial(inv, vec * tr)
    return w1.f_sigma * w2.f_sigma * total


def convolution_expand(w1: WickWord, w2: WickWord):
    """x_sigma * x_theta = sum over joins gamma of x_gamma, returned as
    (gamma, xs, hs) assemblies on the concatenated word."""
    xs = w1.xs + w2.xs
    hs = w1.hs + w2.hs
    return [(gamma, xs, hs)
            for gamma in convolution_joins(w1.sigma, w2.sigma)]


def trace_pairing(w1: WickWord, w2: WickWord) -> QPoly:
    """tau(w2* w1) computed through convolution expansion and the
    partition-term traces -- an independent path to the Wick Gram."""
    adj = w2.adjoint()
    total = QPoly.zero()
    for gamma, xs, hs in convolution_expand(adj, w1):
        total = total + trace_of_partition_term(gamma, xs, hs,
                                                w1.backend, w1.cfg)
    return total


def wick_trace(w: WickWord) -> QPoly:
    """tau(x_sigma): zero unless sigma is a pair partition."""
    return trace_of_partition_term(w.sigma, w.xs, w.hs, w.backend, w.cfg)
