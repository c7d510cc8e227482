"""Ext-regularity, Koszulness, CM-regularity via local duality, and the checks built on them.

Window conventions
------------------
A Betti table computed in window ``(h, D)`` is exact cell by cell, but says
nothing past its edge.  A supremum read off it is reported ``exact`` only
when every edge cell (column ``m = h`` or degree ``j = D``) is zero, i.e. the
resolution visibly stopped inside the window; otherwise it is a
``lower-bound``.  No finite window certifies an infinite value, so infinity
only ever appears as a lower bound that keeps growing with the window.

CM-regularity is computed only for algebras the user asserts to be
AS-Gorenstein with balanced dualizing complex ``A(-l)[d]``.  Local duality then
gives ``H^q_m(M)_p`` dual to ``Ext^{d-q}(M, A)_{-p-l}``, so

    CMreg M = max_m (d - m - l - b_m),   b_m = min{e : Ext^m(M, A)_e != 0},

over ``0 <= m <= d`` (Ext^m(M, A) vanishes for m > d under the assertion).
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from nca.errors import MissingDualityError, OutOfWindowError, UncertifiedError
from nca.freealg import opposite
from nca.grmod import free_module, realize_module, simple_module, truncate_shift
from nca.groebner import realize_algebra
from nca.linalg import rank
from nca.resolution import betti, is_linear, minimal_resolution

EXACT, LOWER, MINUS_INF = "exact", "lower-bound", "minus-infinity"
PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass(frozen=True)
class RegularityValue:
    kind: str
    value: object = None
    window: tuple = ()

    @property
    def exact(self):
        return self.kind == EXACT

    def interval(self):
        """``(low, high)`` range of values consistent with this report."""
        if self.kind == MINUS_INF:
            return (-math.inf, -math.inf)
        if self.kind == EXACT:
            return (self.value, self.value)
        return (self.value, math.inf)

    def to_dict(self):
        return {"kind": self.kind, "value": self.value, "window": list(self.window)}

    def __str__(self):
        if self.kind == MINUS_INF:
            return "-infinity"
        if self.kind == LOWER:
            return f">= {self.value}"
        return str(self.value)


@dataclass(frozen=True)
class DualityDatum:
    """User assertion: A is AS-Gorenstein with dualizing complex A(-l)[d]."""

    d: int
    l: int
    asserted: bool = True


@dataclass
class Report:
    claim: str
    window: tuple
    status: str
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "claim": self.claim,
            "window": list(self.window),
            "status": self.status,
            "details": _jsonable(self.details),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, RegularityValue):
        return x.to_dict()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _combine(statuses):
    statuses = list(statuses)
    if FAIL in statuses:
        return FAIL
    if statuses and all(s == PASS for s in statuses):
        return PASS
    return INCONCLUSIVE


# -- Ext-regularity and Koszulness -------------------------------------------

def ext_regularity(b):
    """Ext-regularity ``sup{j - m : beta[m, j] != 0}`` read from a Betti table."""
    if b.is_empty():
        return RegularityValue(MINUS_INF, None, b.window)
    r = max(j - m for m, j in b.entries)
    kind = EXACT if b.is_closed() else LOWER
    return RegularityValue(kind, r, b.window)


def koszul_check(A, h, D):
    """Is the resolution of k linear in window ``(h, D)``?

    Returns ``(koszul, witness)``; the witness is the lexicographically least
    offending cell ``(m, j)``, or None.  A True answer only covers the window.
    """
    heavy = sorted(d for d in A.degrees if d != 1)
    if heavy:
        return False, (1, heavy[0])
    b = betti(minimal_resolution(simple_module(A), h, D))
    bad = sorted((m, j) for m, j in b.entries if j != m)
    return (not bad), (bad[0] if bad else None)


def left_right_k(A, h, D):
    left = betti(minimal_resolution(simple_module(A), h, D))
    right = betti(minimal_resolution(simple_module(opposite(A)), h, D))
    same = left == right
    return Report(
        "Betti tables of k over A and over the opposite algebra coincide",
        (h, D),
        PASS if same else FAIL,
        {"left": left.to_dict(), "right": right.to_dict()},
    )


# -- Ext into A and the duality route ----------------------------------------

@dataclass
class ExtTable:
    """``dims[(m, e)] = dim Ext^m(M, A)_e`` on the certified cells.

    ``ranges[m]`` is the certified interval of ``e`` (None when ``F_m = 0``, in
    which case ``Ext^m`` vanishes identically).  Cells outside are unknown.
    """

    dims: dict
    ranges: dict
    window: tuple

    def bottom(self, m):
        rng = self.ranges.get(m)
        if rng is None:
            return None
        for e in range(rng[0], rng[1] + 1):
            if self.dims.get((m, e), 0):
                return e
        return None

    def to_dict(self):
        return {
            "window": list(self.window),
            "entries": [[m, e, v] for (m, e), v in sorted(self.dims.items()) if v],
            "certified": {str(m): (list(r) if r else None) for m, r in sorted(self.ranges.items())},
        }


def _dual_matrix(alg, res, m, e):
    """Matrix of ``Hom(F_m, A)_e -> Hom(F_{m+1}, A)_e``, ``phi -> phi o d_{m+1}``."""
    src = res.maps[m].degrees
    tgt = res.maps[m + 1].degrees if m + 1 <= res.h else []
    cols = [alg.dim(e + s) if e + s >= 0 else 0 for s in src]
    rows = [alg.dim(e + s) if e + s >= 0 else 0 for s in tgt]
    out = np.zeros((sum(rows), sum(cols)), dtype=np.int64)
    if not out.size:
        return out
    diff = res.differential(m + 1)
    r0 = 0
    for u, su in enumerate(tgt):
        c0 = 0
        for t, st in enumerate(src):
            if rows[u] and cols[t]:
                block = alg.left_mult(diff[u][t], e + st)
                if block is not None:
                    out[r0:r0 + rows[u], c0:c0 + cols[t]] = block
            c0 += cols[t]
        r0 += rows[u]
    return out


def ext_into_algebra(M, h, D):
    """Dimensions of ``Ext^m(M, A)_e`` for ``m <= h`` from the dualized resolution.

    Needs the resolution through ``h + 1``; raises :class:`UncertifiedError`
    when that resolution has generators in the top degree ``D`` (its
    generators above ``D`` could then matter).
    """
    res = minimal_resolution(M, h + 1, D)
    b = betti(res)
    if any(j >= D for _, j in b.entries):
        raise UncertifiedError(
            f"resolution has generators in the top degree {D}; enlarge D to certify Ext into A"
        )
    A = res.alg.algebra
    alg = realize_algebra(A, D)
    dims, ranges = {}, {}
    for m in range(h + 1):
        sig = res.maps[m].degrees
        if not sig:
            ranges[m] = None
            continue
        near = list(sig)
        if m >= 1:
            near += res.maps[m - 1].degrees
        near += res.maps[m + 1].degrees
        lo_e, hi_e = -max(sig), D - max(near)
        ranges[m] = (lo_e, hi_e)
        for e in range(lo_e, hi_e + 1):
            cur = _dual_matrix(alg, res, m, e)
            n = cur.shape[1]
            ker = n - rank(cur, alg.p)
            img = rank(_dual_matrix(alg, res, m - 1, e), alg.p) if m >= 1 else 0
            dims[m, e] = ker - img
    return ExtTable(dims, ranges, (h, D))


def cm_regularity_duality(M, dd, D):
    """CM-regularity of ``M`` from ``Ext^m(M, A)``, ``0 <= m <= d``, under duality datum ``dd``."""
    if dd is None or not dd.asserted:
        raise MissingDualityError("CM-regularity needs an asserted duality datum (d, l)")
    ext = ext_into_algebra(M, dd.d, D)
    known, caps = [], []
    for m in range(dd.d + 1):
        rng = ext.ranges.get(m)
        if rng is None:
            continue
        b = ext.bottom(m)
        if b is not None:
            known.append(dd.d - m - dd.l - b)
        else:
            caps.append(dd.d - m - dd.l - (rng[1] + 1))
    window = (dd.d, D)
    if not known:
        if all(ext.ranges.get(m) is None for m in range(dd.d + 1)):
            return RegularityValue(MINUS_INF, None, window)
        raise OutOfWindowError("no nonvanishing Ext^m(M, A) found in window; enlarge D")
    value = max(known)
    kind = EXACT if all(c <= value for c in caps) else LOWER
    return RegularityValue(kind, value, window)


# -- inequality and truncation checks ----------------------------------------

def _leq(left, right):
    """Status of ``left <= right`` for windowed values given as intervals."""
    llo, lhi = left
    rlo, rhi = right
    if lhi <= rlo:
        return PASS
    if llo > rhi:
        return FAIL
    return INCONCLUSIVE


def _plus(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _fmt_interval(iv):
    lo, hi = iv
    if lo == hi:
        return _jsonable(lo)
    return [_jsonable(lo), _jsonable(hi)]


def verify_inequalities(A, M, h, D, dd=None):
    """Check Ext.reg M <= CMreg M + Ext.reg k and CMreg M <= Ext.reg M + CMreg A.

    When Ext.reg k = 0 and CMreg A = 0 (both exact) the equality
    Ext.reg M = CMreg M is asserted too.  If the algebra carries the
    ``koszul`` assertion and k's resolution is linear in window, Ext.reg k is
    taken to be exactly 0.
    """
    k = simple_module(A)
    ereg_k = ext_regularity(betti(minimal_resolution(k, h, D)))
    ereg = ereg_k if M == k else ext_regularity(betti(minimal_resolution(M, h, D)))
    details = {"ext_reg": ereg, "ext_reg_k": ereg_k}
    checks = {}
    if "koszul" in A.assertions:
        koszul, witness = koszul_check(A, h, D)
        checks["asserted koszul consistent in window"] = {
            "status": PASS if koszul else FAIL,
            "witness": witness,
        }
        if koszul:
            # a user assertion, checked against the window above
            ereg_k = RegularityValue(EXACT, 0, ereg_k.window)
            if M == k:
                ereg = ereg_k
            details.update({"ext_reg": ereg, "ext_reg_k": ereg_k, "ext_reg_k_source": "asserted"})
    finiteness = PASS if ereg.exact or ereg.kind == MINUS_INF else INCONCLUSIVE
    details["finiteness"] = finiteness
    if dd is None:
        details["notice"] = "no duality datum: CM-regularity checks skipped"
        details["checks"] = checks
        return Report("regularity inequalities", (h, D), _combine([INCONCLUSIVE] + [c["status"] for c in checks.values()]), details)
    cm = cm_regularity_duality(M, dd, D)
    cm_a = cm_regularity_duality(free_module(A), dd, D)
    details.update({"cm_reg": cm, "cm_reg_A": cm_a, "duality": [dd.d, dd.l]})
    e_iv, ek_iv, c_iv, ca_iv = (v.interval() for v in (ereg, ereg_k, cm, cm_a))
    checks["ext_reg <= cm_reg + ext_reg_k"] = {
        "status": _leq(e_iv, _plus(c_iv, ek_iv)),
        "left": _fmt_interval(e_iv),
        "right": _fmt_interval(_plus(c_iv, ek_iv)),
    }
    checks["cm_reg <= ext_reg + cm_reg_A"] = {
        "status": _leq(c_iv, _plus(e_iv, ca_iv)),
        "left": _fmt_interval(c_iv),
        "right": _fmt_interval(_plus(e_iv, ca_iv)),
    }
    if ereg_k.exact and ereg_k.value == 0 and cm_a.exact and cm_a.value == 0:
        if ereg.exact and cm.exact:
            status = PASS if ereg.value == cm.value else FAIL
        else:
            status = INCONCLUSIVE
        checks["ext_reg == cm_reg"] = {"status": status, "left": ereg.value, "right": cm.value}
    details["checks"] = checks
    status = _combine(c["status"] for c in checks.values())
    return Report("regularity inequalities", (h, D), status, details)


def verify_truncation(A, M, h, D, s_range, dd=None):
    """Linearity of the resolutions of ``M_{>=s}(s)`` for ``s`` in ``s_range``.

    ``D`` is the degree through which ``M`` is realized; the truncation at
    ``s`` is resolved in window ``(h, D - s)``.
    """
    s_lo, s_hi = s_range
    if s_hi < s_lo:
        raise ValueError("empty s_range")
    if D - s_hi < 1:
        raise OutOfWindowError(f"D = {D} leaves no room to resolve the truncation at s = {s_hi}")
    koszul, witness = koszul_check(A, h, D)
    mres = minimal_resolution(M, h, D)
    r = ext_regularity(betti(mres))
    rows = []
    verdicts = {}
    for s in range(s_lo, s_hi + 1):
        T = truncate_shift(M, s, D)
        bt = betti(minimal_resolution(T, h, D - s))
        verdicts[s] = is_linear(bt)
        rows.append({
            "s": s,
            "linear": verdicts[s],
            "closed": bt.is_closed(),
            "betti": bt.to_dict(),
        })
    s_min = None
    for s in range(s_hi, s_lo - 1, -1):
        if not verdicts[s]:
            break
        s_min = s
    details = {
        "koszul_in_window": koszul,
        "koszul_witness": witness,
        "ext_reg": r,
        "s_min": s_min,
        "truncations": rows,
    }
    if not koszul:
        details["warning"] = "algebra is not Koszul in window; linearity is not predicted"
    checks = {}
    if dd is not None:
        cm_a = cm_regularity_duality(free_module(A), dd, D)
        cm = cm_regularity_duality(M, dd, D)
        details["cm_reg_A"] = cm_a
        details["cm_reg"] = cm
        if koszul and cm.exact:
            bad = [s for s in range(max(s_lo, cm.value), s_hi + 1) if not verdicts[s]]
            checks["linear for s >= cm_reg"] = {"status": FAIL if bad else PASS, "nonlinear": bad}
        if koszul and r.exact and cm_a.exact:
            bound = r.value + cm_a.value
            if s_min is not None:
                st = PASS if s_min <= max(bound, s_lo) else FAIL
            else:
                st = FAIL if bound <= s_hi else INCONCLUSIVE
            checks["s_min <= ext_reg + cm_reg_A"] = {"status": st, "bound": bound}
    details["checks"] = checks
    status = _combine(c["status"] for c in checks.values()) if checks else INCONCLUSIVE
    return Report("truncations M_{>=s}(s) have linear resolutions", (h, D), status, details)


def cm_regularity_report(M, dd, D):
    cm = cm_regularity_duality(M, dd, D)
    status = PASS if cm.exact or cm.kind == MINUS_INF else INCONCLUSIVE
    ext = ext_into_algebra(M, dd.d, D)
    return Report("CM-regularity via local duality", (dd.d, D), status, {"cm_reg": cm, "ext_into_A": ext.to_dict()})


def realized_dims(M, D):
    mod = realize_module(M, D)
    return {j: mod.dim(j) for j in range(mod.lo, D + 1)}
