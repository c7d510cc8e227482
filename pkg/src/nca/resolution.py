"""Minimal graded free resolutions, Betti tables and their soundness checks.

The resolution is built by linear algebra in one internal degree at a time:
generators of ``F_0`` are a basis of ``M_j`` modulo the part already generated
from below, and generators of ``F_{m+1}`` are chosen the same way inside
``ker(F_m -> F_{m-1})``.  Every Betti number ``beta[m, j]`` with ``j <= D``
depends only on degrees ``<= j`` and is therefore exact; nothing is claimed
about degrees above ``D`` or homological degrees above ``h``.
"""

import json
from collections import Counter
from dataclasses import dataclass

import numpy as np

from nca.errors import OutOfWindowError
from nca.grmod import DegreewiseModule, FreeMap, FreeModule, minimal_generators, realize_module
from nca.linalg import kernel_basis, rank

PASS, FAIL, UNCERTIFIED = "pass", "fail", "uncertified"


class MinimalResolution:
    """``F_h -> ... -> F_0 -> M`` in internal degrees ``<= D``.

    ``maps[0]`` is the augmentation ``F_0 -> M``; ``maps[m]`` for ``m >= 1`` is
    the differential ``F_m -> F_{m-1}``.  Each map keeps its generator degrees
    and generator images, which is all that is needed to rebuild any matrix.
    """

    def __init__(self, module, h, D, maps):
        self.module = module
        self.h = h
        self.D = D
        self.maps = maps
        self.alg = module.alg
        self.p = module.p

    def __repr__(self):
        return f"MinimalResolution(h={self.h}, D={self.D}, degrees={self.generator_degrees()})"

    @property
    def window(self):
        return (self.h, self.D)

    def free(self, m):
        return FreeModule(self.alg, self.maps[m].degrees)

    def generator_degrees(self, m=None):
        if m is None:
            return [list(f.degrees) for f in self.maps]
        return list(self.maps[m].degrees)

    def differential(self, m):
        """Matrix of ``d_m`` with NcPoly entries: one row per generator of F_m."""
        if m < 1:
            raise ValueError("differentials start at m = 1")
        target = self.free(m - 1)
        fm = self.maps[m]
        return [list(target.element(v, d)) for d, v in zip(fm.degrees, fm.images)]

    def is_minimal(self):
        """True iff no differential entry has a nonzero scalar (degree-0) term."""
        for m in range(1, self.h + 1):
            for row in self.differential(m):
                for f in row:
                    if () in f.terms:
                        return False
        return True

    def corrupted(self, m, gen, index):
        """Copy with one coordinate of one generator image of ``d_m`` zeroed (negative control)."""
        maps = []
        for k, fm in enumerate(self.maps):
            images = [v.copy() for v in fm.images]
            if k == m:
                images[gen][index] = 0
            maps.append(FreeMap(self.alg, fm.target, fm.degrees, images))
        _retarget(maps)
        return MinimalResolution(self.module, self.h, self.D, maps)


def _retarget(maps):
    for k in range(1, len(maps)):
        maps[k].target = FreeModule(maps[k - 1].alg, maps[k - 1].degrees)


def _as_module(M, D):
    if isinstance(M, DegreewiseModule):
        if D > M.hi:
            raise OutOfWindowError(f"resolution window {D} exceeds module window {M.hi}")
        return M
    return realize_module(M, D)


def minimal_resolution(M, h, D):
    """Minimal free resolution of ``M`` through homological degree ``h``, internal degree ``D``."""
    if h < 0:
        raise ValueError("h must be non-negative")
    mod = _as_module(M, D)
    p = mod.p
    lo = mod.lo
    spans = {j: np.eye(mod.dim(j), dtype=np.int64) for j in range(lo, D + 1) if mod.dim(j)}
    maps = [minimal_generators(mod, spans, lo, D)]
    for m in range(1, h + 1):
        prev = maps[-1]
        F = prev.source()
        kernels = {}
        for j in range(lo + m - 1, D + 1):
            if F.dim(j) == 0:
                continue
            K = kernel_basis(prev.matrix(j), p)
            if len(K):
                kernels[j] = K
        maps.append(minimal_generators(F, kernels, lo + m, D))
    return MinimalResolution(mod, h, D, maps)


@dataclass
class BettiTable:
    """``entries[(m, j)]`` = multiplicity of A(-j) in F_m, for m <= h and j <= D."""

    entries: dict
    window: tuple
    lo: int = 0

    def __post_init__(self):
        self.entries = {k: v for k, v in sorted(self.entries.items()) if v}
        self.window = tuple(self.window)

    @property
    def h(self):
        return self.window[0]

    @property
    def D(self):
        return self.window[1]

    def __getitem__(self, key):
        return self.entries.get(tuple(key), 0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries and self.window == other.window

    def is_empty(self):
        return not self.entries

    def degrees(self, m):
        return sorted(j for (k, j), v in self.entries.items() if k == m for _ in range(v))

    def boundary_cells(self):
        """Nonzero cells on the window's edge: the last column or the top degree."""
        return [(m, j) for (m, j) in self.entries if m == self.h or j >= self.D]

    def is_closed(self):
        return not self.boundary_cells()

    def to_dict(self):
        return {
            "window": [self.h, self.D],
            "entries": [[m, j, b] for (m, j), b in sorted(self.entries.items())],
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        return cls({(m, j): b for m, j, b in data["entries"]}, tuple(data["window"]))

    def text(self):
        """Macaulay-style layout: columns are m, rows are j - m."""
        h = self.h
        if not self.entries:
            return "(zero module)"
        rows = sorted({j - m for m, j in self.entries})
        rows = list(range(rows[0], rows[-1] + 1))
        cells = [[self.entries.get((m, r + m), 0) for m in range(h + 1)] for r in rows]
        totals = [sum(v for (k, _), v in self.entries.items() if k == m) for m in range(h + 1)]
        width = max(len(str(v)) for v in totals + [h]) + 1
        label = max(len(f"{r}:") for r in rows + ["total"])
        label = max(label, len("total:"))

        def fmt(v):
            return ("." if v == 0 else str(v)).rjust(width)

        lines = [" " * label + "".join(str(m).rjust(width) for m in range(h + 1))]
        lines.append("total:".rjust(label) + "".join(fmt(v) for v in totals))
        for r, row in zip(rows, cells):
            lines.append(f"{r}:".rjust(label) + "".join(fmt(v) for v in row))
        return "\n".join(lines)


def betti(res):
    counts = Counter()
    for m, fm in enumerate(res.maps):
        for d in fm.degrees:
            counts[m, d] += 1
    return BettiTable(dict(counts), (res.h, res.D), res.module.lo)


def is_linear(b):
    return all(j == m for (m, j) in b.entries)


def verify_exactness(res):
    """Degreewise exactness of ``F_h -> ... -> F_0 -> M -> 0``.

    Returns ``{(m, j): "pass" | "fail" | "uncertified"}``.  At ``m = h`` the
    kernel of ``d_h`` is only certified when it is zero, since ``F_{h+1}`` was
    not computed.  Matrices are rebuilt from the stored generator images, so a
    corrupted resolution is caught.
    """
    p = res.p
    mod = res.module
    maps = res.maps
    out = {}
    for j in range(mod.lo, res.D + 1):
        for m in range(res.h + 1):
            src = FreeModule(res.alg, maps[m].degrees)
            n = src.dim(j)
            dm = maps[m].matrix(j)
            rk = rank(dm, p)
            ok = True
            if m == 0 and rk != mod.dim(j):
                ok = False
            kdim = n - rk
            if m < res.h:
                dn = maps[m + 1].matrix(j)
                if dm.size and dn.size and (dm @ dn % p).any():
                    ok = False
                if rank(dn, p) != kdim:
                    ok = False
                out[m, j] = PASS if ok else FAIL
            else:
                out[m, j] = FAIL if not ok else (PASS if kdim == 0 else UNCERTIFIED)
    return out


def euler_check(b, M, D=None):
    """Per-degree check of ``sum_m (-1)^m sum_s dim A_{j-s} = dim M_j``.

    A degree is certified when no generator of ``F_{h+1}`` can live in it:
    either ``j <= lo + h`` or the table's last column is empty.
    """
    D = b.D if D is None else D
    mod = _as_module(M, D)
    alg = mod.alg
    last_empty = not any(m == b.h for m, _ in b.entries)
    out = {}
    for j in range(mod.lo, D + 1):
        total = 0
        for (m, s), beta in b.entries.items():
            if j - s >= 0:
                total += (-1) ** m * beta * alg.dim(j - s)
        if j <= mod.lo + b.h or last_empty:
            out[j] = PASS if total == mod.dim(j) else FAIL
        else:
            out[j] = UNCERTIFIED
    return out
