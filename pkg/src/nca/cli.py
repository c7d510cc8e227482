"""``nca run JOB.json``: dispatch a job file and print a report.

Exit status: 0 pass (or inconclusive), 1 failed check, 2 usage or parse
error, 3 out of window.
"""

import argparse
import sys

from nca.errors import MissingDualityError, NcaError, OutOfWindowError, ParseError, UncertifiedError
from nca.freealg import NcPoly, format_poly
from nca.groebner import complete, realize_algebra
from nca.jobs import load_job
from nca.regularity import (
    FAIL,
    PASS,
    Report,
    cm_regularity_report,
    ext_regularity,
    koszul_check,
    left_right_k,
    realized_dims,
    verify_inequalities,
    verify_truncation,
)
from nca.resolution import betti, euler_check, minimal_resolution, verify_exactness

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_WINDOW = 0, 1, 2, 3


def _module_label(job):
    return job.module or "k"


def cmd_gb(job):
    A = job.algebra
    gb = complete(A, job.D)
    failures = gb.diamond_check()
    rules = []
    for r in gb.rules:
        lead = format_poly(NcPoly.word(r.lead, A.p), A.names, A.order)
        rules.append({"lead": lead, "tail": format_poly(r.tail, A.names, A.order), "degree": A.word_degree(r.lead)})
    details = {
        "rules": rules,
        "diamond_failures": [[list(a), list(b), k] for a, b, k, _ in failures],
    }
    lines = [f"Groebner basis through degree {job.D} ({len(rules)} rules)"]
    lines += [f"  {r['lead']} -> {r['tail']}" for r in rules]
    lines.append(f"diamond check: {'ok' if not failures else f'{len(failures)} failures'}")
    return Report("Groebner basis", (0, job.D), FAIL if failures else PASS, details), lines


def cmd_hilbert(job):
    alg = realize_algebra(job.algebra, job.D)
    details = {"algebra": alg.hilbert()}
    lines = ["dim A_j, j = 0..%d: %s" % (job.D, " ".join(map(str, details["algebra"])))]
    if job.module is not None:
        dims = realized_dims(job.get_module(), job.D)
        details["module"] = {"name": job.module, "dims": [[j, d] for j, d in dims.items()]}
        lines.append(f"dim {job.module}_j: " + " ".join(f"{j}:{d}" for j, d in dims.items()))
    return Report("Hilbert function", (0, job.D), PASS, details), lines


def cmd_betti(job):
    res = minimal_resolution(job.get_module(), job.h, job.D)
    b = betti(res)
    exact = verify_exactness(res)
    euler = euler_check(b, res.module, job.D)
    minimal = res.is_minimal()
    bad = [k for k, v in exact.items() if v == FAIL] + [j for j, v in euler.items() if v == FAIL]
    status = PASS if minimal and not bad else FAIL
    details = {
        "module": _module_label(job),
        "betti": b.to_dict(),
        "generator_degrees": res.generator_degrees(),
        "minimal": minimal,
        "exactness_failures": [list(k) for k, v in sorted(exact.items()) if v == FAIL],
        "euler_failures": [j for j, v in sorted(euler.items()) if v == FAIL],
        "closed": b.is_closed(),
    }
    lines = [f"Betti table of {details['module']} in window ({job.h}, {job.D}):", b.text()]
    for m, degs in enumerate(details["generator_degrees"]):
        lines.append(f"F_{m}: generators in degrees {degs}")
    lines.append(f"minimal: {str(minimal).lower()}; exactness: {'ok' if not bad else 'FAILED'}")
    return Report("minimal free resolution", (job.h, job.D), status, details), lines


def cmd_reg(job):
    r = ext_regularity(betti(minimal_resolution(job.get_module(), job.h, job.D)))
    details = {"module": _module_label(job), "ext_reg": r}
    lines = [f"Ext.reg {details['module']} in window ({job.h}, {job.D}): {r} ({r.kind})"]
    return Report("Ext-regularity", (job.h, job.D), PASS, details), lines


def cmd_koszul(job):
    ok, witness = koszul_check(job.algebra, job.h, job.D)
    details = {"koszul": ok, "witness": list(witness) if witness else None}
    lines = [f"Koszul in window ({job.h}, {job.D}): {str(ok).lower()}"]
    if witness:
        lines.append(f"witness: beta{tuple(witness)} != 0")
    return Report("k has a linear resolution", (job.h, job.D), PASS if ok else FAIL, details), lines


def cmd_truncate_verify(job):
    if job.s_range is None:
        raise ParseError("truncate-verify needs command.s_range")
    rep = verify_truncation(job.algebra, job.get_module(), job.h, job.D, job.s_range, job.duality)
    d = rep.details
    lines = [
        f"Koszul in window ({job.h}, {job.D}): {str(d['koszul_in_window']).lower()}",
        f"Ext.reg {_module_label(job)}: {d['ext_reg']} ({d['ext_reg'].kind})",
    ]
    if "cm_reg" in d:
        lines.append(f"CMreg {_module_label(job)}: {d['cm_reg']}; CMreg A: {d['cm_reg_A']}")
    for row in d["truncations"]:
        lines.append(f"  s = {row['s']}: linear = {str(row['linear']).lower()}")
    lines.append(f"s_min = {d['s_min']}")
    lines += _check_lines(d["checks"])
    if "warning" in d:
        lines.append("warning: " + d["warning"])
    return rep, lines


def cmd_cmreg(job):
    if job.duality is None:
        raise MissingDualityError("cmreg needs algebra.duality {d, l}")
    rep = cm_regularity_report(job.get_module(), job.duality, job.D)
    cm = rep.details["cm_reg"]
    lines = [f"CMreg {_module_label(job)} (d, l) = ({job.duality.d}, {job.duality.l}): {cm} ({cm.kind})"]
    for m, e, v in rep.details["ext_into_A"]["entries"]:
        lines.append(f"  dim Ext^{m}(M, A)_{e} = {v}")
    return rep, lines


def cmd_inequalities(job):
    rep = verify_inequalities(job.algebra, job.get_module(), job.h, job.D, job.duality)
    d = rep.details
    lines = [f"Ext.reg {_module_label(job)}: {d['ext_reg']}; Ext.reg k: {d['ext_reg_k']}"]
    if "cm_reg" in d:
        lines.append(f"CMreg {_module_label(job)}: {d['cm_reg']}; CMreg A: {d['cm_reg_A']}")
    if "notice" in d:
        lines.append(d["notice"])
    lines += _check_lines(d["checks"])
    return rep, lines


def cmd_left_right_k(job):
    rep = left_right_k(job.algebra, job.h, job.D)
    lines = [f"left and right Betti tables of k agree: {str(rep.status == PASS).lower()}"]
    return rep, lines


def _check_lines(checks):
    out = []
    for name, c in checks.items():
        extra = ""
        if "left" in c:
            extra = f" (left {c['left']}, right {c['right']})"
        out.append(f"  [{c['status']}] {name}{extra}")
    return out


DISPATCH = {
    "gb": cmd_gb,
    "hilbert": cmd_hilbert,
    "betti": cmd_betti,
    "reg": cmd_reg,
    "koszul": cmd_koszul,
    "truncate-verify": cmd_truncate_verify,
    "cmreg": cmd_cmreg,
    "inequalities": cmd_inequalities,
    "left-right-k": cmd_left_right_k,
}


def execute(job):
    """Run a loaded job; return ``(report, text_lines)``."""
    return DISPATCH[job.command](job)


def run(path, json_out=None, overrides=(), out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        job = load_job(path, overrides)
        rep, lines = execute(job)
    except (ParseError, MissingDualityError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except (OutOfWindowError, UncertifiedError) as exc:
        print(f"out of window: {exc}", file=err)
        return EXIT_WINDOW
    except (OSError, ValueError, NcaError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    lines.append(f"status: {rep.status}")
    print("\n".join(lines), file=out)
    if json_out:
        with open(json_out, "w", encoding="utf-8") as fh:
            fh.write(rep.to_json() + "\n")
    return EXIT_FAIL if rep.status == FAIL else EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="nca", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="action", required=True)
    rp = sub.add_parser("run", help="run a job file")
    rp.add_argument("job", help="path to the JSON job file")
    rp.add_argument("--json", dest="json_out", metavar="OUT", help="write the JSON report here")
    rp.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                    help="override a job field, e.g. command.h=6 (repeatable)")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    return run(args.job, args.json_out, args.override)


if __name__ == "__main__":
    sys.exit(main())

