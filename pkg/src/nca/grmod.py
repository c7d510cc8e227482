"""Finitely presented graded left modules, realized degree by degree.

Everything here is finite-dimensional linear algebra in one internal degree
at a time.  A free module ``F = (+)_t A(-s_t)`` has the basis ``(t, w)`` in
degree ``j`` with ``w`` running over normal words of degree ``j - s_t``
(generator-major).  A homomorphism out of a free module is stored as the
images of its generators; its degree-``j`` matrix is generated lazily from
those images and the action matrices of the target, one word letter at a time.
"""

from dataclasses import dataclass

import numpy as np

from nca.errors import OutOfWindowError
from nca.freealg import AlgebraPresentation, NcPoly, parse
from nca.groebner import realize_algebra
from nca.linalg import kernel_basis, reduce_mod_subspace, rref


class FreeModule:
    """Degreewise view of ``(+)_t A(-degrees[t])``."""

    def __init__(self, alg, degrees):
        self.alg = alg
        self.degrees = tuple(degrees)
        self.p = alg.p
        self.lo = min(self.degrees) if self.degrees else 0
        self._actions = {}
        self._offsets = {}

    def __repr__(self):
        return f"FreeModule({list(self.degrees)})"

    def offsets(self, j):
        """``[(t, start, size)]`` describing the degree-``j`` basis blocks."""
        hit = self._offsets.get(j)
        if hit is None:
            hit, start = [], 0
            for t, s in enumerate(self.degrees):
                n = self.alg.dim(j - s)
                hit.append((t, start, n))
                start += n
            self._offsets[j] = hit
        return hit

    def dim(self, j):
        if not self.degrees or j < self.lo:
            return 0
        return sum(n for _, _, n in self.offsets(j))

    def action(self, g, j):
        key = (g, j)
        hit = self._actions.get(key)
        if hit is None:
            dg = self.alg.algebra.degrees[g]
            hit = np.zeros((self.dim(j + dg), self.dim(j)), dtype=np.int64)
            if hit.size:
                src = self.offsets(j)
                dst = self.offsets(j + dg)
                for (t, c0, n), (_, r0, m) in zip(src, dst):
                    if n and m:
                        hit[r0:r0 + m, c0:c0 + n] = self.alg.left[g][j - self.degrees[t]]
            self._actions[key] = hit
        return hit

    def labels(self, j):
        out = []
        for t, s in enumerate(self.degrees):
            if j - s >= 0:
                out.extend((t, w) for w in self.alg.basis[j - s])
        return out

    def element(self, v, j):
        """Tuple of NcPoly components of the coordinate vector ``v`` in degree ``j``."""
        comps = []
        for t, start, n in self.offsets(j):
            if n:
                comps.append(self.alg.element(v[start:start + n], j - self.degrees[t]))
            else:
                comps.append(NcPoly.zero(self.p))
        return tuple(comps)

    def coords(self, comps, j):
        v = np.zeros(self.dim(j), dtype=np.int64)
        for (t, start, n), f in zip(self.offsets(j), comps):
            if f:
                if n == 0:
                    # A_e = 0 for e >= 0 means f is zero in A; negative e is an error
                    if f.degree(self.alg.algebra.degrees) != j - self.degrees[t]:
                        raise ValueError("component has the wrong degree")
                    continue
                v[start:start + n] = self.alg.coords(f, j - self.degrees[t])
        return v


class FreeMap:
    """Homomorphism from a free module, given by generator images.

    ``images[t]`` is a coordinate vector of the target in degree
    ``degrees[t]``.  Generators may be appended (in nondecreasing degree) while
    the map is in use; cached blocks stay valid.
    """

    def __init__(self, alg, target, degrees=(), images=()):
        self.alg = alg
        self.target = target
        self.p = alg.p
        self.degrees = list(degrees)
        self.images = [np.asarray(v, dtype=np.int64) for v in images]
        self._blocks = {}

    def append(self, degree, image):
        self.degrees.append(degree)
        self.images.append(np.asarray(image, dtype=np.int64))

    def block(self, t, e):
        """Images of ``w * gen_t`` for all normal words ``w`` of degree ``e``."""
        key = (t, e)
        hit = self._blocks.get(key)
        if hit is not None:
            return hit
        s = self.degrees[t]
        if e == 0:
            hit = self.images[t].reshape(-1, 1) % self.p
        else:
            hit = np.zeros((self.target.dim(s + e), self.alg.dim(e)), dtype=np.int64)
            for g, dg in enumerate(self.alg.algebra.degrees):
                if e - dg < 0:
                    continue
                pos, rest = self.alg.split[e, g]
                if pos.size == 0 or hit.shape[0] == 0:
                    continue
                sub = self.block(t, e - dg)[:, rest]
                hit[:, pos] = self.target.action(g, s + e - dg) @ sub % self.p
        self._blocks[key] = hit
        return hit

    def matrix(self, j):
        """Degree-``j`` matrix: target_j x source_j (columns in free-module order)."""
        cols = [self.block(t, j - s) for t, s in enumerate(self.degrees) if j - s >= 0]
        rows = self.target.dim(j)
        if not cols:
            return np.zeros((rows, 0), dtype=np.int64)
        return np.hstack(cols)

    def source(self):
        return FreeModule(self.alg, self.degrees)


class DegreewiseModule:
    """A graded module through degree ``hi``: dimensions plus generator actions.

    ``action(g, j)`` is the matrix of ``m -> x_g m`` from M_j to M_{j+deg g}.
    """

    def __init__(self, alg, lo, hi, dims, action_fn, labels=None):
        self.alg = alg
        self.p = alg.p
        self.lo = lo
        self.hi = hi
        self.dims = dict(dims)
        self._action_fn = action_fn
        self._actions = {}
        self.labels = labels or {}

    def __repr__(self):
        return f"DegreewiseModule(lo={self.lo}, hi={self.hi}, dims={self.dim_list()})"

    def dim(self, j):
        if j > self.hi:
            raise OutOfWindowError(f"degree {j} beyond module window {self.hi}")
        if j < self.lo:
            return 0
        return self.dims.get(j, 0)

    def dim_list(self, start=None):
        start = self.lo if start is None else start
        return [self.dim(j) for j in range(start, self.hi + 1)]

    def action(self, g, j):
        key = (g, j)
        hit = self._actions.get(key)
        if hit is None:
            dg = self.alg.algebra.degrees[g]
            tgt, src = self.dim(j + dg), self.dim(j)
            if tgt == 0 or src == 0:
                hit = np.zeros((tgt, src), dtype=np.int64)
            else:
                hit = self._action_fn(g, j)
            self._actions[key] = hit
        return hit

    def is_zero(self):
        return all(self.dim(j) == 0 for j in range(self.lo, self.hi + 1))

    def truncated_shift(self, s):
        """``M_{>=s}(s)``: degrees below ``s`` dropped, degree ``s`` moved to 0."""
        lo = max(self.lo, s) - s
        dims = {j - s: self.dims.get(j, 0) for j in range(max(self.lo, s), self.hi + 1)}
        labels = {j - s: v for j, v in self.labels.items() if j >= s}
        return DegreewiseModule(
            self.alg, lo, self.hi - s, dims, lambda g, j: self.action(g, j + s), labels
        )

    def relation_defect(self):
        """Check that every algebra relation acts as zero in every window degree.

        Returns the list of ``(relation index, degree)`` where it does not.
        """
        A = self.alg.algebra
        bad = []
        for i, r in enumerate(A.relations):
            e = r.degree(A.degrees)
            for j in range(self.lo, self.hi - e + 1):
                if self.dim(j) == 0:
                    continue
                acc = np.zeros((self.dim(j + e), self.dim(j)), dtype=np.int64)
                for w, c in r.terms.items():
                    m = np.eye(self.dim(j), dtype=np.int64)
                    k = j
                    for g in reversed(w):
                        m = self.action(g, k) @ m % self.p
                        k += A.degrees[g]
                    acc = (acc + c * m) % self.p
                if acc.any():
                    bad.append((i, j))
        return bad


@dataclass(frozen=True)
class GradedModulePresentation:
    """Cokernel of ``(+)_r A(-deg r) -> (+)_i A(-d_i)``.

    ``relations`` are vectors of NcPoly (one entry per generator).  ``window``
    is the top degree through which the relations are known to be complete;
    None means the presentation is complete.
    """

    algebra: AlgebraPresentation
    gen_degrees: tuple
    relations: tuple = ()
    window: object = None

    def __post_init__(self):
        for r in self.relations:
            if len(r) != len(self.gen_degrees):
                raise ValueError("relation length must equal the number of generators")
            self.relation_degree(r)

    def relation_degree(self, r):
        degs = set()
        for f, d in zip(r, self.gen_degrees):
            for e in f.degrees(self.algebra.degrees):
                degs.add(e + d)
        if len(degs) > 1:
            raise ValueError(f"module relation is not homogeneous (degrees {sorted(degs)})")
        return degs.pop() if degs else None

    @property
    def ngens(self):
        return len(self.gen_degrees)


def realize_module(M, J):
    """Realize ``M`` in degrees ``<= J`` as a :class:`DegreewiseModule`."""
    if isinstance(M, DegreewiseModule):
        if J > M.hi:
            raise OutOfWindowError(f"window {J} exceeds module window {M.hi}")
        return M
    if M.window is not None and J > M.window:
        raise OutOfWindowError(
            f"requested degree {J} beyond the presentation's certified window {M.window}"
        )
    A = M.algebra
    lo = min(M.gen_degrees) if M.gen_degrees else 0
    alg = realize_algebra(A, max(J - lo, 0))
    if not M.gen_degrees:
        return DegreewiseModule(alg, lo, J, {}, None)
    p = A.p
    F = FreeModule(alg, M.gen_degrees)
    rels = []
    for r in M.relations:
        e = M.relation_degree(r)
        if e is not None and e <= J:
            rels.append((e, F.coords(r, e)))
    rels.sort(key=lambda x: x[0])
    phi = FreeMap(alg, F, [e for e, _ in rels], [v for _, v in rels])
    dims, keep, proj, labels = {}, {}, {}, {}
    for j in range(lo, J + 1):
        n = F.dim(j)
        R = phi.matrix(j)
        red, pivots = rref(R.T, p) if R.size else (np.zeros((0, n), dtype=np.int64), [])
        piv = set(pivots)
        np_cols = [c for c in range(n) if c not in piv]
        # coordinates of v mod R: v[NP] - red[:, NP]^T v[P]
        pm = np.zeros((len(np_cols), n), dtype=np.int64)
        for i, c in enumerate(np_cols):
            pm[i, c] = 1
        if pivots:
            pm[:, pivots] = (-red[:, np_cols].T) % p
        dims[j] = len(np_cols)
        keep[j] = np.array(np_cols, dtype=np.intp)
        proj[j] = pm
        lab = F.labels(j)
        labels[j] = [lab[c] for c in np_cols]

    def act(g, j):
        dg = A.degrees[g]
        return proj[j + dg] @ F.action(g, j)[:, keep[j]] % p

    return DegreewiseModule(alg, lo, J, dims, act, labels)


def _images_to_relations(fmod, degrees, images):
    return tuple(fmod.element(v, d) for d, v in zip(degrees, images))


def minimal_generators(N, spans, lo, hi):
    """Minimal homogeneous generators of a graded submodule of ``N``.

    ``spans[j]`` lists vectors spanning the submodule in degree ``j``.  New
    generators in degree ``j`` are chosen greedily from ``spans[j]`` modulo
    what the earlier generators already produce.  Returns the growing
    :class:`FreeMap` whose generators are the chosen ones.
    """
    fmap = FreeMap(N.alg, N)
    for j in range(lo, hi + 1):
        vecs = spans.get(j)
        if vecs is None or len(vecs) == 0:
            continue
        img = fmap.matrix(j)
        for v in reduce_mod_subspace(list(vecs), list(img.T), N.p):
            fmap.append(j, v)
    return fmap


def free_module(A, degrees=(0,)):
    return GradedModulePresentation(A, tuple(degrees), ())


def simple_module(A):
    """The trivial module k = A / A_{>=1}, generated in degree 0."""
    rels = tuple((NcPoly.word((g,), A.p),) for g in range(A.ngens))
    return GradedModulePresentation(A, (0,), rels)


def cyclic_module(A, relations, degree=0):
    """A(-degree) / (left ideal generated by ``relations``)."""
    rels = []
    for r in relations:
        f = r if isinstance(r, NcPoly) else parse(r, A.names, A.p)
        if f:
            rels.append((f,))
    return GradedModulePresentation(A, (degree,), tuple(rels))


def module_from_strings(A, gen_degrees, relations):
    rels = []
    for r in relations:
        if len(r) != len(gen_degrees):
            raise ValueError("relation length must equal the number of generators")
        rels.append(tuple(parse(s, A.names, A.p) for s in r))
    return GradedModulePresentation(A, tuple(gen_degrees), tuple(rels))


def twist(M, n):
    """``M(n)``: the degree-``j`` piece of the result is ``M_{j+n}``."""
    window = None if M.window is None else M.window - n
    return GradedModulePresentation(
        M.algebra, tuple(d - n for d in M.gen_degrees), M.relations, window
    )


def direct_sum(M1, M2):
    if M1.algebra != M2.algebra:
        raise ValueError("direct sum needs modules over the same algebra")
    p = M1.algebra.p
    z1 = tuple(NcPoly.zero(p) for _ in M1.gen_degrees)
    z2 = tuple(NcPoly.zero(p) for _ in M2.gen_degrees)
    rels = tuple(r + z2 for r in M1.relations) + tuple(z1 + r for r in M2.relations)
    windows = [w for w in (M1.window, M2.window) if w is not None]
    return GradedModulePresentation(
        M1.algebra, M1.gen_degrees + M2.gen_degrees, rels, min(windows) if windows else None
    )


def truncate_shift(M, s, J):
    """Presentation of ``M_{>=s}(s)``, certified through degree ``J - s``.

    ``J`` is the window (in the grading of ``M``) through which ``M`` is
    realized; generators and relations of the truncation are computed from
    that realization, so the result carries window ``J - s``.
    """
    Mr = realize_module(M, J)
    A = Mr.alg.algebra
    T = Mr.truncated_shift(s)
    top = J - s
    if top < T.lo or T.is_zero():
        return GradedModulePresentation(A, (), (), top)
    spans = {j: np.eye(T.dim(j), dtype=np.int64) for j in range(T.lo, top + 1)}
    gens = minimal_generators(T, spans, T.lo, top)
    F0 = gens.source()
    kernels = {j: kernel_basis(gens.matrix(j), T.p) for j in range(T.lo, top + 1)}
    rels = minimal_generators(F0, kernels, T.lo, top)
    return GradedModulePresentation(
        A,
        tuple(gens.degrees),
        _images_to_relations(F0, rels.degrees, rels.images),
        top,
    )


def augmentation_ideal(A, J):
    """The ideal A_{>=1} as a left module, certified through degree ``J``."""
    return twist(truncate_shift(free_module(A), 1, J), -1)
