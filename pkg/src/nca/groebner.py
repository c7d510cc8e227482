"""Degree-truncated noncommutative Groebner bases and the quotient algebra.

Completion runs degree by degree.  All input is homogeneous, so an overlap
of two leads has degree strictly larger than either lead, and every
ambiguity that matters in degree ``j`` comes from rules of degree ``< j``.
New rules of degree ``j`` are obtained by row-reducing the normal forms of
all degree-``j`` candidates at once, which keeps the system reduced and
makes the truncated basis canonical for the chosen order.
"""

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from nca.errors import OutOfWindowError
from nca.freealg import NcPoly
from nca.linalg import rref


@dataclass(frozen=True)
class RewriteRule:
    lead: tuple
    tail: NcPoly

    def as_poly(self):
        return NcPoly.word(self.lead, self.tail.p) - self.tail


class TruncatedGB:
    """Reduced rewrite system valid for words of degree <= ``bound``."""

    def __init__(self, algebra, bound, rules=()):
        self.algebra = algebra
        self.bound = bound
        self.rules = []
        self._by_first = defaultdict(list)
        self._cache = {}
        for r in rules:
            self._add(r)

    def _add(self, rule):
        self.rules.append(rule)
        self._by_first[rule.lead[0]].append(rule)
        self._cache.clear()

    def __repr__(self):
        return f"TruncatedGB(bound={self.bound}, rules={len(self.rules)})"

    def find_reducible(self, w):
        """Leftmost (position, rule) whose lead occurs in ``w``, or None."""
        for i, g in enumerate(w):
            for r in self._by_first.get(g, ()):
                n = len(r.lead)
                if w[i:i + n] == r.lead:
                    return i, r
        return None

    def is_normal(self, w):
        return self.find_reducible(w) is None

    def _nf_word(self, w):
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        found = self.find_reducible(w)
        if found is None:
            out = {w: 1}
        else:
            i, r = found
            pre, post = w[:i], w[i + len(r.lead):]
            p = self.algebra.p
            acc = defaultdict(int)
            for t, c in r.tail.terms.items():
                for u, d in self._nf_word(pre + t + post).items():
                    acc[u] = (acc[u] + c * d) % p
            out = {u: c for u, c in acc.items() if c}
        self._cache[w] = out
        return out

    def normal_form(self, f):
        p = self.algebra.p
        acc = defaultdict(int)
        for w, c in f.terms.items():
            if self.algebra.word_degree(w) > self.bound:
                raise OutOfWindowError(
                    f"word of degree {self.algebra.word_degree(w)} exceeds GB bound {self.bound}"
                )
            for u, d in self._nf_word(w).items():
                acc[u] = (acc[u] + c * d) % p
        return NcPoly(acc, p)

    def overlaps(self, max_degree=None):
        """All overlap ambiguities ``(a, b, k, word)`` with ``word = lead_a + lead_b[k:]``."""
        top = self.bound if max_degree is None else max_degree
        out = []
        for a in self.rules:
            for b in self.rules:
                out.extend(_overlaps(a, b, self.algebra, top))
        return out

    def diamond_check(self):
        """Reduce every overlap ambiguity both ways; return the ones that disagree."""
        failures = []
        p = self.algebra.p
        for a, b, k, word in self.overlaps():
            left = a.tail * NcPoly.word(b.lead[k:], p)
            right = NcPoly.word(a.lead[:-k], p) * b.tail
            if self.normal_form(left) != self.normal_form(right):
                failures.append((a.lead, b.lead, k, word))
        return failures


def _overlaps(a, b, algebra, top):
    la, lb = a.lead, b.lead
    out = []
    for k in range(1, min(len(la), len(lb))):
        if la[-k:] == lb[:k]:
            word = la + lb[k:]
            if algebra.word_degree(word) <= top:
                out.append((a, b, k, word))
    return out


def _spoly(a, b, k, p):
    return a.tail * NcPoly.word(b.lead[k:], p) - NcPoly.word(a.lead[:-k], p) * b.tail


def _echelon_rules(polys, order, p):
    """Row-reduce homogeneous polynomials of one degree into monic rules."""
    words = sorted({w for f in polys for w in f.terms}, key=order.key, reverse=True)
    col = {w: i for i, w in enumerate(words)}
    mat = np.zeros((len(polys), len(words)), dtype=np.int64)
    for i, f in enumerate(polys):
        for w, c in f.terms.items():
            mat[i, col[w]] = c
    red, pivots = rref(mat, p)
    rules = []
    for row, pc in zip(red, pivots):
        tail = {words[c]: -int(row[c]) for c in range(pc + 1, len(words)) if row[c]}
        rules.append(RewriteRule(words[pc], NcPoly(tail, p)))
    return rules


def complete(A, D):
    """Reduced Groebner basis of the relation ideal, complete through degree ``D``.

    Relations of degree above ``D`` do not affect degrees ``<= D`` and are skipped.
    """
    gb = TruncatedGB(A, D)
    p = A.p
    by_degree = defaultdict(list)
    for r in A.relations:
        d = r.degree(A.degrees)
        if d is not None and d <= D:
            by_degree[d].append(r)
    pending = defaultdict(list)
    for j in range(1, D + 1):
        cands = list(by_degree.get(j, ()))
        cands += [_spoly(a, b, k, p) for a, b, k, _ in pending.pop(j, ())]
        reduced = [f for f in (gb.normal_form(c) for c in cands) if f]
        if not reduced:
            continue
        old = list(gb.rules)
        new = _echelon_rules(reduced, A.order, p)
        for r in new:
            gb._add(r)
        pairs = [(r, o) for r in new for o in old] + [(o, r) for r in new for o in old]
        for i, r in enumerate(new):
            pairs.append((r, r))
            for s in new[i + 1:]:
                pairs += [(r, s), (s, r)]
        for a, b in pairs:
            for amb in _overlaps(a, b, A, D):
                pending[A.word_degree(amb[3])].append(amb)
    return gb


class AlgebraRealization:
    """Graded pieces A_0..A_D with normal-word bases and multiplication matrices.

    ``left[g][j]`` is the matrix of ``a -> x_g a`` from A_j to A_{j+deg g};
    ``right[g][j]`` the matrix of ``a -> a x_g``.  Columns index the source.
    """

    def __init__(self, gb):
        self.gb = gb
        self.algebra = A = gb.algebra
        self.bound = D = gb.bound
        self.p = A.p
        self.basis = {0: [()]}
        for j in range(1, D + 1):
            words = []
            for g, dg in enumerate(A.degrees):
                if j - dg < 0:
                    continue
                for w in self.basis[j - dg]:
                    cand = (g,) + w
                    if not any(cand[:len(r.lead)] == r.lead for r in gb._by_first.get(g, ())):
                        words.append(cand)
            self.basis[j] = sorted(words, key=A.order.key)
        self.index = {j: {w: i for i, w in enumerate(ws)} for j, ws in self.basis.items()}
        # words of A_j grouped by first letter: positions and indices of the rest
        self.split = {}
        for j in range(1, D + 1):
            for g, dg in enumerate(A.degrees):
                pos, rest = [], []
                for i, w in enumerate(self.basis[j]):
                    if w[0] == g:
                        pos.append(i)
                        rest.append(self.index[j - dg][w[1:]])
                self.split[j, g] = (np.array(pos, dtype=np.intp), np.array(rest, dtype=np.intp))
        self.left = {g: {} for g in range(A.ngens)}
        self.right = {g: {} for g in range(A.ngens)}
        for g, dg in enumerate(A.degrees):
            for j in range(0, D - dg + 1):
                self.left[g][j] = self._mult_matrix(j, dg, lambda w: (g,) + w)
                self.right[g][j] = self._mult_matrix(j, dg, lambda w: w + (g,))

    def _mult_matrix(self, j, dg, build):
        m = np.zeros((self.dim(j + dg), self.dim(j)), dtype=np.int64)
        idx = self.index[j + dg]
        for c, w in enumerate(self.basis[j]):
            for u, coef in self.gb._nf_word(build(w)).items():
                m[idx[u], c] = coef
        return m

    def dim(self, j):
        if j < 0:
            return 0
        if j > self.bound:
            raise OutOfWindowError(f"degree {j} beyond algebra window {self.bound}")
        return len(self.basis[j])

    def hilbert(self):
        return [self.dim(j) for j in range(self.bound + 1)]

    def coords(self, f, j):
        """Coordinate vector in A_j of the normal form of homogeneous ``f``."""
        v = np.zeros(self.dim(j), dtype=np.int64)
        for w, c in self.gb.normal_form(f).terms.items():
            if self.algebra.word_degree(w) != j:
                raise ValueError(f"element is not homogeneous of degree {j}")
            v[self.index[j][w]] = c
        return v

    def element(self, v, j):
        return NcPoly({self.basis[j][i]: int(c) for i, c in enumerate(v) if c}, self.p)

    def left_mult(self, f, j):
        """Matrix of left multiplication by homogeneous ``f`` from A_j."""
        e = f.degree(self.algebra.degrees)
        if e is None:
            return None
        out = np.zeros((self.dim(j + e), self.dim(j)), dtype=np.int64)
        for w, c in self.gb.normal_form(f).terms.items():
            m = np.eye(self.dim(j), dtype=np.int64)
            k = j
            for g in reversed(w):
                m = self.left[g][k] @ m % self.p
                k += self.algebra.degrees[g]
            out = (out + c * m) % self.p
        return out


def hilbert_function(real):
    return real.hilbert()


def normal_form(f, gb):
    return gb.normal_form(f)


@lru_cache(maxsize=128)
def _complete_cached(A, D):
    return complete(A, D)


@lru_cache(maxsize=128)
def realize_algebra(A, D):
    """Cached realization of ``A`` through degree ``D``."""
    return AlgebraRealization(_complete_cached(A, D))


def realize(gb):
    return AlgebraRealization(gb)
