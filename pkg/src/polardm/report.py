"""Corpus reporting: per-proof translation statistics rendered as a
tab-delimited table plus summary figures.

A corpus directory holds goal/proof pairs `NAME.goal.sexp` and
`NAME.proof.sexp` (proofs in the HOL theory).  Each entry is checked,
translated to the clausal theory, re-checked there, and summarized.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from . import syntax as S
from .kernel import check, is_cut_free, parse_proof, proof_height, proof_size
from .rewrite import DEFAULT_BUDGET
from .sexp import loads_one
from .theory import build_hol, build_holpm
from .translate import hol_to_holpm

CASE_NAMES = ("direct", "pullback", "or-right-gadget", "all-right-gadget", "top-right-gadget")

COLUMNS = (
    "name",
    "hol_ok",
    "holpm_ok",
    "cut_free",
    "hol_size",
    "holpm_size",
    "hol_height",
    "holpm_height",
) + CASE_NAMES


@dataclass(frozen=True)
class CorpusRow:
    name: str
    values: dict


def corpus_pairs(corpus_dir):
    names = []
    for fn in sorted(os.listdir(corpus_dir)):
        if fn.endswith(".goal.sexp"):
            stem = fn[: -len(".goal.sexp")]
            if os.path.exists(os.path.join(corpus_dir, stem + ".proof.sexp")):
                names.append(stem)
    return names


def analyze_corpus(corpus_dir, budget=DEFAULT_BUDGET):
    hol, holpm = build_hol(), build_holpm()
    rows = []
    for name in corpus_pairs(corpus_dir):
        with open(os.path.join(corpus_dir, name + ".goal.sexp"), encoding="utf-8") as fh:
            goal, ctx = S.parse_sequent(loads_one(fh.read()), hol.sig, {})
        with open(os.path.join(corpus_dir, name + ".proof.sexp"), encoding="utf-8") as fh:
            proof = parse_proof(loads_one(fh.read()), hol.sig, ctx)
        rep_hol = check(proof, goal, hol, budget)
        out, trace = hol_to_holpm(proof, goal, budget)
        rep_pm = check(out, goal, holpm, budget)
        values = {
            "name": name,
            "hol_ok": rep_hol.ok,
            "holpm_ok": rep_pm.ok,
            "cut_free": is_cut_free(out),
            "hol_size": proof_size(proof),
            "holpm_size": proof_size(out),
            "hol_height": proof_height(proof),
            "holpm_height": proof_height(out),
        }
        for case in CASE_NAMES:
            values[case] = trace.cases.get(case, 0)
        rows.append(CorpusRow(name, values))
    return rows


def _fmt(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def write_tsv(rows, path):
    lines = ["\t".join(COLUMNS)]
    for row in rows:
        lines.append("\t".join(_fmt(row.values[c]) for c in COLUMNS))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def write_figures(rows, out_dir):
    sizes_path = os.path.join(out_dir, "proof_sizes.png")
    cases_path = os.path.join(out_dir, "translation_cases.png")

    xs = [r.values["hol_size"] for r in rows]
    ys = [r.values["holpm_size"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.scatter(xs, ys, s=24)
    lim = max(xs + ys + [1]) + 1
    ax.plot([0, lim], [0, lim], linestyle="--", linewidth=0.8, color="gray")
    ax.set_xlabel("input proof size (HOL)")
    ax.set_ylabel("output proof size (HOLpm)")
    ax.set_title("translation size overhead")
    fig.tight_layout()
    fig.savefig(sizes_path, dpi=120)
    plt.close(fig)

    totals = [sum(r.values[c] for r in rows) for c in CASE_NAMES]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(CASE_NAMES)), totals)
    ax.set_xticks(range(len(CASE_NAMES)))
    ax.set_xticklabels(CASE_NAMES, rotation=20, ha="right")
    ax.set_ylabel("rule applications")
    ax.set_title("translation case counts")
    fig.tight_layout()
    fig.savefig(cases_path, dpi=120)
    plt.close(fig)
    return [sizes_path, cases_path]


def corpus_report(corpus_dir, out_dir, budget=DEFAULT_BUDGET):
    """Analyze a corpus and write report.tsv plus figures into out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    rows = analyze_corpus(corpus_dir, budget)
    tsv_path = os.path.join(out_dir, "report.tsv")
    write_tsv(rows, tsv_path)
    figures = write_figures(rows, out_dir)
    return rows, [tsv_path] + figures
