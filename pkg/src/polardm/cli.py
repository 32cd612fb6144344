"""Command-line entry point.

Subcommands: check, translate, clausal, compile, prove, normalize,
reaches, report.  Exit status: 0 success / positive verdict, 1 negative
verdict (invalid proof, not clausal, exhausted search, unreachable),
2 undecided (fuel ran out), 3 usage or input error.

Reports come in two formats: `human` (a verdict sentence followed by
details) and `machine` (stable `key: value` lines, deterministic order,
no timestamps).  Both always agree on the verdict.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import axioms as AX
from . import syntax as S
from .kernel import check, is_cut_free, parse_proof, proof_size, proof_text
from .rewrite import FuelExhausted, ReachabilityBudget, e_normalize, reaches
from .search import prove_cutfree
from .sexp import SexpError, loads_one
from .theory import NEG, POS, get_theory, is_clausal_system
from .translate import TranslateError, hol_to_holpm

OK, NEGATIVE, UNDECIDED, USAGE = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _emit(pairs, fmt, verdict_line=None, stream=None):
    stream = stream or sys.stdout
    if fmt == "human" and verdict_line:
        print(verdict_line, file=stream)
    for key, value in pairs:
        print(f"{key}: {value}", file=stream)


def _read_input(arg):
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _var_context(var_args, base_sorts):
    ctx = {}
    for decl in var_args or ():
        if ":" not in decl:
            raise _UsageError(f"--var expects name:SORT, got {decl!r}")
        name, sort_text = decl.split(":", 1)
        ctx[name.strip()] = S.parse_sort(loads_one(sort_text), base_sorts)
    return ctx


def _load_goal(path, sig):
    with open(path, encoding="utf-8") as fh:
        return S.parse_sequent(loads_one(fh.read()), sig, {})


def _bool(v):
    return "true" if v else "false"


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_check(args):
    rs = get_theory(args.theory)
    budget = ReachabilityBudget(args.fuel)
    if os.path.isdir(args.proof):
        return _check_batch(args, rs, budget)
    goal, ctx = _load_goal(args.goal, rs.sig)
    with open(args.proof, encoding="utf-8") as fh:
        proof = parse_proof(loads_one(fh.read()), rs.sig, ctx)
    report = check(proof, goal, rs, budget)
    pairs = [("ok", _bool(report.ok)), ("status", report.status), ("size", report.size),
             ("cut-free", _bool(is_cut_free(proof)))]
    if report.failure is not None:
        pairs.append(("failed-rule", report.failure.rule))
        pairs.append(("failed-path", "/".join(map(str, report.failure.path)) or "root"))
        pairs.append(("reason", report.failure.reason))
    verdict = {
        "ok": f"proof accepted ({report.size} rule applications)",
        "invalid": "proof rejected",
        "undecided": "undecided: rewrite fuel exhausted",
    }[report.status]
    _emit(pairs, args.format, verdict)
    return {"ok": OK, "invalid": NEGATIVE, "undecided": UNDECIDED}[report.status]


def _check_batch(args, rs, budget):
    if args.goal is not None:
        raise _UsageError("directory mode takes no separate goal file")
    directory = args.proof
    stems = []
    for fn in sorted(os.listdir(directory)):
        if fn.endswith(".proof.sexp"):
            stem = fn[: -len(".proof.sexp")]
            if os.path.exists(os.path.join(directory, stem + ".goal.sexp")):
                stems.append(stem)
    if not stems:
        raise _UsageError(f"no goal/proof pairs in {directory}")

    def one(stem):
        goal, ctx = _load_goal(os.path.join(directory, stem + ".goal.sexp"), rs.sig)
        with open(os.path.join(directory, stem + ".proof.sexp"), encoding="utf-8") as fh:
            proof = parse_proof(loads_one(fh.read()), rs.sig, ctx)
        return stem, check(proof, goal, rs, budget)

    with ThreadPoolExecutor(max_workers=min(8, len(stems))) as pool:
        results = list(pool.map(one, stems))
    pairs = []
    for stem, report in results:
        pairs.append((stem, f"{report.status} size={report.size}"))
    statuses = {report.status for _, report in results}
    verdict = f"{sum(1 for _, r in results if r.ok)}/{len(results)} proofs accepted"
    _emit(pairs, args.format, verdict)
    if "invalid" in statuses:
        return NEGATIVE
    if "undecided" in statuses:
        return UNDECIDED
    return OK


def _cmd_translate(args):
    rs_hol = get_theory("HOL")
    budget = ReachabilityBudget(args.fuel)
    goal, ctx = _load_goal(args.goal, rs_hol.sig)
    with open(args.proof, encoding="utf-8") as fh:
        proof = parse_proof(loads_one(fh.read()), rs_hol.sig, ctx)
    try:
        out, trace = hol_to_holpm(proof, goal, budget)
    except TranslateError as e:
        _emit([("ok", "false"), ("error", str(e))], args.format, f"translation failed: {e}")
        return NEGATIVE
    rs_pm = get_theory("HOLpm")
    report = check(out, goal, rs_pm, budget)
    text = proof_text(out) + "\n"
    pairs = [
        ("ok", _bool(report.ok)),
        ("input-size", trace.input_size),
        ("output-size", trace.output_size),
        ("output-cut-free", _bool(is_cut_free(out))),
    ]
    for case in sorted(trace.cases):
        pairs.append((f"case-{case}", trace.cases[case]))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        pairs.append(("out", args.out))
        _emit(pairs, args.format, "translated to the clausal theory")
    else:
        sys.stdout.write(text)
        _emit(pairs, args.format, "translated to the clausal theory", stream=sys.stderr)
    return OK if report.ok else NEGATIVE


def _cmd_clausal(args):
    rs = get_theory(args.theory)
    verdict = is_clausal_system(rs)
    pairs = [("clausal", "yes" if verdict.ok else "no")]
    for name, polarity, reason in verdict.offenders:
        pairs.append((f"offender-{name}", f"{polarity}: {reason}"))
    _emit(pairs, args.format,
          "the rewrite system is clausal" if verdict.ok else "the rewrite system is not clausal")
    return OK if verdict.ok else NEGATIVE


def _cmd_compile(args):
    rs = get_theory(args.theory)
    conjecture = None
    if args.conjecture:
        conjecture, _ = _load_goal(args.conjecture, rs.sig)
    if args.universe:
        universe = tuple(
            S.parse_sort(node, rs.sig.base_sorts) for node in loads_one(args.universe)
        )
    elif conjecture is not None:
        universe = AX.default_universe(conjecture)
    else:
        raise _UsageError("compile needs --universe or --conjecture")
    try:
        axset = AX.compile_axioms(rs, universe)
    except AX.UniverseError as e:
        _emit([("ok", "false"), ("error", str(e))], args.format, f"bad universe: {e}")
        return NEGATIVE
    text = AX.export_tff(axset, conjecture, explicit_equality=args.explicit_equality)
    pairs = [("ok", "true"), ("universe-size", len(axset.universe))]
    for tag in (AX.TAG_EQUALITY, AX.TAG_EQUATION, AX.TAG_NEG, AX.TAG_POS):
        pairs.append((f"axioms-{tag}", len(axset.tagged(tag))))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        pairs.append(("out", args.out))
        _emit(pairs, args.format, "axiom set compiled")
    else:
        sys.stdout.write(text)
        _emit(pairs, args.format, "axiom set compiled", stream=sys.stderr)
    return OK


def _cmd_prove(args):
    rs = get_theory(args.theory)
    budget = ReachabilityBudget(args.fuel)
    goal, _ = _load_goal(args.goal, rs.sig)
    result = prove_cutfree(goal, rs, max_depth=args.depth, budget=budget,
                           allow_cut=args.allow_cut)
    pairs = [("outcome", result.outcome), ("nodes", result.nodes),
             ("max-depth", result.max_depth)]
    if result.proof is not None:
        pairs.append(("size", proof_size(result.proof)))
        pairs.append(("cut-free", _bool(is_cut_free(result.proof))))
        if args.emit_proof:
            with open(args.emit_proof, "w", encoding="utf-8") as fh:
                fh.write(proof_text(result.proof) + "\n")
            pairs.append(("out", args.emit_proof))
    verdict = {
        "proved": "proof found",
        "exhausted": "no proof within the documented bounds",
        "fuel-out": "undecided: rewrite fuel exhausted",
    }[result.outcome]
    _emit(pairs, args.format, verdict)
    return {"proved": OK, "exhausted": NEGATIVE, "fuel-out": UNDECIDED}[result.outcome]


def _cmd_normalize(args):
    rs = get_theory(args.theory)
    budget = ReachabilityBudget(args.fuel)
    ctx = _var_context(args.var, rs.sig.base_sorts)
    term = S.parse_term(loads_one(_read_input(args.term)), rs.sig, ctx)
    try:
        normal = e_normalize(term, rs, budget)
    except FuelExhausted:
        _emit([("ok", "false"), ("error", "fuel exhausted")], args.format,
              "undecided: rewrite fuel exhausted")
        return UNDECIDED
    _emit([("normal-form", S.term_text(normal))], args.format,
          f"normal form: {S.term_text(normal)}")
    return OK


def _cmd_reaches(args):
    rs = get_theory(args.theory)
    budget = ReachabilityBudget(args.fuel)
    ctx = _var_context(args.var, rs.sig.base_sorts)
    a = S.parse_prop(loads_one(_read_input(args.source)), rs.sig, ctx)
    b = S.parse_prop(loads_one(_read_input(args.target)), rs.sig, ctx)
    polarity = NEG if args.polarity == "neg" else POS
    try:
        hit = reaches(a, b, polarity, rs, budget)
    except FuelExhausted:
        _emit([("reachable", "undecided")], args.format, "undecided: rewrite fuel exhausted")
        return UNDECIDED
    _emit([("reachable", "yes" if hit else "no")], args.format,
          "reachable" if hit else "not reachable")
    return OK if hit else NEGATIVE


def _cmd_report(args):
    from .report import corpus_report

    budget = ReachabilityBudget(args.fuel)
    rows, paths = corpus_report(args.corpus, args.out_dir, budget)
    pairs = [("entries", len(rows))]
    for row in rows:
        ok = row.values["hol_ok"] and row.values["holpm_ok"] and row.values["cut_free"]
        pairs.append((row.name, "ok" if ok else "FAILED"))
    for p in paths:
        pairs.append(("wrote", p))
    all_ok = all(
        row.values["hol_ok"] and row.values["holpm_ok"] and row.values["cut_free"]
        for row in rows
    )
    _emit(pairs, args.format, f"report over {len(rows)} corpus entries")
    return OK if all_ok else NEGATIVE


# ---------------------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="polardm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, theory=True):
        if theory:
            p.add_argument("--theory", default="HOLpm",
                           help="HOL, HOLpm, or a theory file path")
        p.add_argument("--fuel", type=int, default=10000,
                       help="rewrite exploration budget per query")
        p.add_argument("--format", choices=("human", "machine"), default="human")

    p = sub.add_parser("check", help="check a proof file against a goal sequent")
    p.add_argument("proof", help="proof file, or a directory of goal/proof pairs")
    p.add_argument("goal", nargs="?", help="goal sequent file")
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("translate", help="translate a cut-free HOL proof to HOLpm")
    p.add_argument("proof")
    p.add_argument("goal")
    p.add_argument("--out", help="write the translated proof here")
    common(p, theory=False)
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("clausal", help="report whether a rewrite system is clausal")
    common(p)
    p.set_defaults(func=_cmd_clausal)

    p = sub.add_parser("compile", help="compile the first-order axiom set and export TFF")
    p.add_argument("--universe", help="sexp list of sorts, e.g. '(o (o -> o))'")
    p.add_argument("--conjecture", help="sequent file; also sets the default universe")
    p.add_argument("--explicit-equality", action="store_true",
                   help="emit the generated equality-theory axioms")
    p.add_argument("--out", help="write the TFF text here")
    common(p)
    p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("prove", help="depth-bounded cut-free proof search")
    p.add_argument("goal")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--allow-cut", action="store_true",
                   help="also try cut on goal-derived candidate formulas")
    p.add_argument("--emit-proof", help="write a found proof here")
    common(p)
    p.set_defaults(func=_cmd_prove)

    p = sub.add_parser("normalize", help="equational normal form of a term")
    p.add_argument("term", help="term text or a file containing one")
    p.add_argument("--var", action="append", help="declare a free variable name:SORT")
    common(p)
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("reaches", help="decide a polarized reachability query")
    p.add_argument("source", help="proposition text or file")
    p.add_argument("target", help="proposition text or file")
    p.add_argument("--polarity", choices=("neg", "pos"), required=True)
    p.add_argument("--var", action="append", help="declare a free variable name:SORT")
    common(p)
    p.set_defaults(func=_cmd_reaches)

    p = sub.add_parser("report", help="corpus statistics: TSV table plus figures")
    p.add_argument("--corpus", required=True, help="directory of goal/proof pairs")
    p.add_argument("--out-dir", required=True)
    common(p, theory=False)
    p.set_defaults(func=_cmd_report)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return USAGE
    except FileNotFoundError as e:
        print(f"file not found: {e.filename}", file=sys.stderr)
        return USAGE
    except (SexpError, S.SortError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return USAGE


def main():
    sys.setrecursionlimit(20000)
    sys.exit(run())


if __name__ == "__main__":
    main()
