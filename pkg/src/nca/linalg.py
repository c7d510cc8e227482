"""Dense exact linear algebra over prime fields GF(p).

Matrices are plain ``numpy`` int64 arrays with entries in ``[0, p)``.
The prime is capped at 2**24, so a matrix product of reduced matrices stays
below 2**63 as long as the inner dimension is under 2**15; every row
operation is a single vectorised multiply-subtract followed by ``% p``.

Pivoting is deterministic (leftmost nonzero column, first available row), so
echelon forms, kernels and everything built on them are reproducible.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_PRIME = 32003
MAX_PRIME = 1 << 24


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise ValueError(f"field characteristic must be a prime, got {self.p!r}")
        if self.p >= MAX_PRIME:
            raise ValueError("prime too large for int64 arithmetic")


def as_matrix(entries, p, shape=None):
    """Coerce ``entries`` to a reduced int64 array."""
    m = np.asarray(entries, dtype=np.int64)
    if shape is not None:
        m = m.reshape(shape)
    return np.mod(m, p)


def inverse(a, p):
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(a, -1, p)


def rref(m, p):
    """Reduced row echelon form.

    Returns ``(r, pivots)`` where ``r`` holds only the nonzero rows and
    ``pivots[i]`` is the pivot column of row ``i``.
    """
    a = np.array(m, dtype=np.int64, copy=True) % p
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * inverse(a[r, c], p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m, p):
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def kernel_basis(m, p):
    """Basis of the right null space ``{v : m @ v = 0}``, as rows in RREF."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0 or cols == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(m, p)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-r[row, f]) % p
    if len(free) == 0:
        return basis
    return rref(basis, p)[0]


class _Echelon:
    """Incrementally grown echelon basis used for membership tests."""

    def __init__(self, n, p):
        self.n = n
        self.p = p
        self.rows = []
        self.pivots = []

    def reduce(self, v):
        v = np.array(v, dtype=np.int64) % self.p
        for row, pc in zip(self.rows, self.pivots):
            if v[pc]:
                v = (v - v[pc] * row) % self.p
        return v

    def add(self, v):
        """Add ``v``; return True iff it was independent of the basis."""
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        pc = int(nz[0])
        v = (v * inverse(v[pc], self.p)) % self.p
        for i, row in enumerate(self.rows):
            if row[pc]:
                self.rows[i] = (row - row[pc] * v) % self.p
        self.rows.append(v)
        self.pivots.append(pc)
        return True


def reduce_mod_subspace(vectors, subspace, p):
    """Greedy first-fit choice of ``vectors`` forming a basis modulo ``subspace``.

    Returns the list of selected input vectors, in input order.
    """
    vectors = [np.asarray(v, dtype=np.int64) for v in vectors]
    subspace = [np.asarray(v, dtype=np.int64) for v in subspace]
    lengths = {v.shape for v in vectors + subspace}
    if len(lengths) > 1:
        raise ValueError(f"dimension mismatch among vectors: {sorted(lengths)}")
    if not vectors:
        return []
    ech = _Echelon(vectors[0].shape[0], p)
    for w in subspace:
        ech.add(w)
    return [v % p for v in vectors if ech.add(v)]


def in_span(v, basis, p):
    ech = _Echelon(len(v), p)
    for b in basis:
        ech.add(b)
    return not ech.reduce(v).any()
