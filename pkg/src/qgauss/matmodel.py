"""Random sign-matrix model: mixed-commutation symmetries and Monte Carlo
estimation of Q-gaussian moments.

Letters are (copy index j, color t) pairs.  The sign matrix epsilon is
sampled with P(eps = 1) = (1 + Q_{s,t})/2 so that E[eps] = Q_{s,t}; a
crossing of colors s, t in a pair partition then picks up exactly the
weight Q_{s,t} in the large-n limit, matching the exact Q-moment engine.

The estimator never materializes the 2^n-dimensional symmetries: the
normalized trace of a word of involutions satisfying
v_a v_b = eps_{ab} v_b v_a is evaluated combinatorially (cancel equal
letters, collect the exchange signs), which the explicit matrix
construction cross-checks at small sizes.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .errors import SizeGuard
from .moments import enumerate_set_partitions, q_matrix_moment

#: build_symmetries materializes 2^n x 2^n matrices.
SYMMETRY_CAP = 10

#: Longest word the Monte Carlo estimator accepts.
WORD_CAP = 8


@dataclass
class SignMatrix:
    """Symmetric {-1,+1} matrix over letters (copy, color), diagonal +1."""

    letters: list  # list of (j, t)
    entries: dict  # {frozenset({a, b}): -1 or +1} for a != b

    def entry(self, a, b) -> int:
        if a == b:
            return 1
        return self.entries[frozenset((a, b))]


def sample_epsilon(Qm, copies: int, rng) -> SignMatrix:
    """Draw a sign matrix with independent entries, E[eps_{(j,t),(k,s)}] =
    Q_{s,t}.  rng is a numpy Generator (or an int seed)."""
    if isinstance(rng, (int, np.integer)):
        rng = np.random.Generator(np.random.Philox(key=int(rng)))
    Qm = [[float(x) for x in row] for row in Qm]
    ncolors = len(Qm)
    letters = [(j, t) for j in range(1, copies + 1) for t in range(ncolors)]
    entries = {}
    for i, a in enumerate(letters):
        for b in letters[i + 1:]:
            p_plus = (1.0 + Qm[a[1]][b[1]]) / 2.0
            entries[frozenset((a, b))] = 1 if rng.random() < p_plus else -1
    return SignMatrix(letters, entries)


@dataclass
class SymmetryRep:
    """Explicit sign-matrix involutions with prescribed exchange signs."""

    letters: list
    matrices: list  # numpy integer arrays, one per letter
    eps: SignMatrix

    def verify(self) -> bool:
        n = len(self.letters)
        for a in range(n):
            va = self.matrices[a]
            if not np.array_equal(va @ va, np.eye(va.shape[0], dtype=va.dtype)):
                return False
            for b in range(a + 1, n):
                vb = self.matrices[b]
                sign = self.eps.entry(self.letters[a], self.letters[b])
                if not np.array_equal(va @ vb, sign * (vb @ va)):
                    return False
        return True


def build_symmetries(eps: SignMatrix) -> SymmetryRep:
    """v_a = (tensor of diag signs over b < a) (x) X (x) identities, with a
    Z factor in slot b exactly when eps(b, a) = -1.  The exchange relations
    hold by construction."""
    n = len(eps.letters)
    if n > SYMMETRY_CAP:
        raise SizeGuard(f"{n} letters need 2^{n}-dim matrices, "
                        f"cap is 2^{SYMMETRY_CAP}")
    I = np.eye(2, dtype=np.int64)
    X = np.array([[0, 1], [1, 0]], dtype=np.int64)
    Z = np.array([[1, 0], [0, -1]], dtype=np.int64)
    mats = []
    for a in range(n):
        factors = []
        for b in range(n):
            if b < a:
                factors.append(
                    Z if eps.entry(eps.letters[b], eps.letters[a]) == -1 else I)
            elif b == a:
                factors.append(X)
            else:
                factors.append(I)
        m = factors[0]
        for f in factors[1:]:
            m = np.kron(m, f)
        mats.append(m)
    return SymmetryRep(eps.letters, mats, eps)


def word_sign_pairs(letters):
    """Reduce a word of exchange-sign involutions to a scalar.

    Returns the list of letter pairs whose eps entries multiply to the
    normalized trace (each with odd multiplicity), or None when a letter
    has odd multiplicity (trace 0).
    """
    counts = Counter(letters)
    if any(c % 2 for c in counts.values()):
        return None
    rest = list(letters)
    pairs = Counter()
    while rest:
        first = rest[0]
        nxt = rest.index(first, 1)
        for i in range(1, nxt):
            a, b = sorted((rest[i], first))
            pairs[(a, b)] += 1
        del rest[nxt]
        del rest[0]
    return [p for p, c in pairs.items() if c % 2]


def combinatorial_trace(letters, eps: SignMatrix) -> int:
    """Normalized trace of v_{l_1} ... v_{l_m} under a fixed sign matrix."""
    pairs = word_sign_pairs(letters)
    if pairs is None:
        return 0
    sign = 1
    for a, b in pairs:
        sign *= eps.entry(a, b)
    return sign


@dataclass
class MCEstimate:
    """Monte Carlo mean with its sampling error.

    target is the exact large-n limit; target_n the exact expectation of
    the finite-n estimator (the model has an O(1/n) bias, so the z-score
    is taken against target_n where only sampling noise remains)."""

    mean: float
    stderr: float
    samples: int
    target: float
    target_n: float
    bias: float
    z: float
    n: int
    seed: int


def _even_color_partitions(m, colors):
    """Set partitions of positions with even, color-constant blocks."""
    out = []
    for blocks in enumerate_set_partitions(m):
        ok = all(len(b) % 2 == 0
                 and len({colors[i - 1] for i in b}) == 1 for b in blocks)
        if ok:
            out.append(blocks)
    return out


def _injective_assignments(blocks, colors, n):
    """Maps block -> copy index, injective within each color class."""
    by_color = {}
    for bi, b in enumerate(blocks):
        by_color.setdefault(colors[b[0] - 1], []).append(bi)
    assignments = [{}]
    for _, bis in sorted(by_color.items()):
        if len(bis) > n:
            return
        new = []
        for js in permutations(range(1, n + 1), len(bis)):
            for base in assignments:
                a = dict(base)
                a.update(zip(bis, js))
                new.append(a)
        assignments = new
    yield from assignments


def model_moment_exact(word, Qm, n: int, backend=None, cfg=None,
                       colors=None) -> Fraction:
    """The exact expectation of the finite-n matrix-model trace.

    Sum over coincidence patterns and copy assignments of the sign weight
    (product of Q entries over the exchange pairs), the gaussian moment of
    the field product (a Wick sum, evaluated as the q=1 Fock moment on
    l2_n (x) H), and the trace of the pi-word."""
    from . import moments as _moments
    from .qfock import FockConfig, vacuum_moment

    word = list(word)
    m = len(word)
    if colors is None:
        colors = [0] * m
    colors = list(colors)
    Qm = [[Fraction(x) for x in row] for row in Qm]
    hs = [h for _, h in word]
    if cfg is None:
        cfg = FockConfig(dim_H=max(len(h) for h in hs) if m else 1,
                         max_degree=max(1, (m + 1) // 2))
    if backend is not None:
        xs = [x if x is not None else backend.A_one for x, _ in word]
    if m == 0:
        return Fraction(1)
    if m % 2:
        return Fraction(0)

    trace_cache = {}

    def pi_trace(pattern):
        if backend is None:
            return Fraction(1)
        val = trace_cache.get(pattern)
        if val is None:
            prod = backend.one()
            for pos in range(m):
                prod = prod * backend.pi(pattern[pos] + 1, xs[pos])
            val = backend.trace(prod)
            trace_cache[pattern] = val
        return val

    gauss_cache = {}

    def gauss_moment(jpattern):
        # E prod_i g_{j_i}(h_i): Wick sum = the q=1 Fock moment with
        # vectors e_{j_i} (x) h_i (slots compacted)
        val = gauss_cache.get(jpattern)
        if val is None:
            slots = sorted(set(jpattern))
            slot_of = {j: s for s, j in enumerate(slots)}
            r = len(slots)
            big = _moments._tensor_config(r, cfg, (m + 1) // 2)
            vecs = [_moments._slot_vector(slot_of[jpattern[i]], hs[i], r, cfg)
                    for i in range(m)]
            val = vacuum_moment(vecs, big).eval(1)
            gauss_cache[jpattern] = val
        return val

    total = Fraction(0)
    for blocks in _even_color_partitions(m, colors):
        pattern = tuple(
            next(bi for bi, b in enumerate(blocks) if pos in b)
            for pos in range(1, m + 1))
        tau = pi_trace(pattern)
        if not tau:
            continue
        block_of = {}
        for bi, b in enumerate(blocks):
            for pos in b:
                block_of[pos] = bi
        for assign in _injective_assignments(blocks, colors, n):
            letters = [(assign[block_of[pos]], colors[pos - 1])
                       for pos in range(1, m + 1)]
            sign_pairs = word_sign_pairs(letters)
            if sign_pairs is None:
                continue
            weight = Fraction(1)
            for a, b in sign_pairs:
                weight *= Qm[a[1]][b[1]]
                if not weight:
                    break
            if not weight:
                continue
            g = gauss_moment(tuple(l[0] for l in letters))
            if not g:
                continue
            total += weight * g * tau
    return total / Fraction(n ** (m // 2))


def mc_moment(word, Qm, n: int, samples: int, seed: int,
              backend=None, cfg=None, colors=None) -> MCEstimate:
    """Monte Carlo estimate of the Q-gaussian moment at n copies, with the
    exact engine's limit value as the comparison target.

    word is a list of (x, h) letters; x may be None for the pure case.
    Per sample the sign matrix and the gaussian fields are redrawn; the
    estimate averages n^{-m/2} sum over index tuples of
    trace(v-word) * prod g * tau_D(pi-word), the tuple sum grouped by
    coincidence pattern and evaluated exactly per sample.
    """
    word = list(word)
    m = len(word)
    if m > WORD_CAP:
        raise SizeGuard(f"word length {m} exceeds the cap {WORD_CAP}")
    if colors is None:
        colors = [0] * m
    colors = list(colors)
    Qm = [[Fraction(x) for x in row] for row in Qm]
    hs = [h for _, h in word]
    if cfg is None:
        from .qfock import FockConfig
        cfg = FockConfig(dim_H=max(len(h) for h in hs) if m else 1,
                         max_degree=max(1, (m + 1) // 2))

    # exact limit target from the Q-moment engine
    if backend is None:
        from .copies import FreeHaarBackend
        tgt_backend = FreeHaarBackend(max(1, m // 2))
        xs = [tgt_backend.A_one] * m
    else:
        tgt_backend = backend
        xs = [x if x is not None else backend.A_one for x, _ in word]
    target = float(q_matrix_moment(list(zip(xs, hs)), colors, Qm,
                                   tgt_backend, cfg))

    rng = np.random.Generator(np.random.Philox(key=int(seed)))

    # gaussian fields: g_j(h) = gamma_j . (L^T h), E g(h)g(h') = <h,h'>
    d = cfg.dim_H
    L = np.linalg.cholesky(np.array(cfg.inner, dtype=float))
    gamma = rng.standard_normal((samples, n, d))
    coords = np.array([[float(Fraction(x)) for x in h] for h in hs])  # m x d
    gh = np.einsum("snd,md->snm", gamma, coords @ L)  # g_j(h_i) per sample

    # sign entries, one stream per unordered letter pair
    letter_pool = sorted({(j, t) for j in range(1, n + 1) for t in set(colors)})
    pair_index = {}
    probs = []
    for i, a in enumerate(letter_pool):
        for b in letter_pool[i + 1:]:
            pair_index[(a, b)] = len(probs)
            probs.append(float((1 + Qm[a[1]][b[1]]) / 2))
    if probs:
        eps = np.where(rng.random((samples, len(probs))) < np.array(probs),
                       1.0, -1.0)
    else:
        eps = np.zeros((samples, 0))

    trace_cache = {}

    def pi_trace(pattern):
        # tau_D of the pi-word at the representative tuple; exchangeability
        # makes it depend on the coincidence pattern only
        if backend is None:
            return 1.0
        val = trace_cache.get(pattern)
        if val is None:
            prod = backend.one()
            for pos in range(m):
                prod = prod * backend.pi(pattern[pos] + 1, xs[pos])
            val = float(backend.trace(prod))
            trace_cache[pattern] = val
        return val

    sums = np.zeros(samples)
    for blocks in _even_color_partitions(m, colors):
        pattern_tau = pi_trace(tuple(
            next(bi for bi, b in enumerate(blocks) if pos in b)
            for pos in range(1, m + 1)))
        if pattern_tau == 0.0:
            continue
        block_of = {}
        for bi, b in enumerate(blocks):
            for pos in b:
                block_of[pos] = bi
        for assign in _injective_assignments(blocks, colors, n):
            letters = [(assign[block_of[pos]], colors[pos - 1])
                       for pos in range(1, m + 1)]
            sign_pairs = word_sign_pairs(letters)
            if sign_pairs is None:
                continue
            term = np.full(samples, pattern_tau)
            for a, b in sign_pairs:
                term = term * eps[:, pair_index[(a, b)]]
            for pos in range(1, m + 1):
                term = term * gh[:, letters[pos - 1][0] - 1, pos - 1]
            sums += term
    estimates = sums / float(n) ** (m / 2.0)
    mean = float(estimates.mean())
    stderr = float(estimates.std(ddof=1) / math.sqrt(samples)) \
        if samples > 1 else 0.0
    target_n = float(model_moment_exact(word, Qm, n, backend=backend,
                                        cfg=cfg, colors=colors))
    if stderr > 0:
        z = (mean - target_n) / stderr
    else:
        z = 0.0 if mean == target_n else math.inf
    return MCEstimate(mean=mean, stderr=stderr, samples=samples,
                      target=target, target_n=target_n,
                      bias=target_n - target, z=z, n=n, seed=seed)


def mc_moment_explicit(word, Qm, n: int, samples: int, seed: int,
                       cfg=None, colors=None) -> MCEstimate:
    """Slow oracle for mc_moment (pure case): materializes the symmetry
    matrices and takes actual matrix traces.  Small n only."""
    word = list(word)
    m = len(word)
    if colors is None:
        colors = [0] * m
    colors = list(colors)
    Qm = [[Fraction(x) for x in row] for row in Qm]
    hs = [h for _, h in word]
    if cfg is None:
        from .qfock import FockConfig
        cfg = FockConfig(dim_H=max(len(h) for h in hs) if m else 1,
                         max_degree=max(1, (m + 1) // 2))
    from .copies import FreeHaarBackend
    tgt_backend = FreeHaarBackend(max(1, m // 2))
    target = float(q_matrix_moment(
        [(tgt_backend.A_one, h) for h in hs], colors, Qm, tgt_backend, cfg))

    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    d = cfg.dim_H
    L = np.linalg.cholesky(np.array(cfg.inner, dtype=float))
    coords = np.array([[float(Fraction(x)) for x in h] for h in hs]) @ L

    vals = np.empty(samples)
    for s in range(samples):
        eps = sample_epsilon(Qm, n, rng)
        used = [(j, t) for j in range(1, n + 1) for t in sorted(set(colors))]
        sub = SignMatrix(used, {k: v for k, v in eps.entries.items()
                                if all(l in used for l in k)})
        rep = build_symmetries(sub)
        vmat = {l: mat for l, mat in zip(rep.letters, rep.matrices)}
        gamma = rng.standard_normal((n, d))
        dim = 2 ** len(used)
        prod = np.eye(dim)
        for pos in range(m):
            u = np.zeros((dim, dim))
            for j in range(1, n + 1):
                g = float(gamma[j - 1] @ coords[pos])
                u += g * vmat[(j, colors[pos])]
            prod = prod @ (u / math.sqrt(n))
        vals[s] = np.trace(prod) / dim
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(samples)) \
        if samples > 1 else 0.0
    target_n = float(model_moment_exact(word, Qm, n, cfg=cfg, colors=colors))
    z = (mean - target_n) / stderr if stderr > 0 else \
        (0.0 if mean == target_n else math.inf)
    return MCEstimate(mean=mean, stderr=stderr, samples=samples,
                      target=target, target_n=target_n,
                      bias=target_n - target, z=z, n=n, seed=seed)
