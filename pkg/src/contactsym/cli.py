"""Command-line driver: runs the checks and writes JSON or text reports.

Exit codes: 0 when every check passes, 2 on a mismatch, 1 on bad input
or an internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .coeffring import render
from .exactfield import sample_parameters
from .invariants import (
    build_invariants,
    check_invariant,
    equivariance_check,
    mutated_energy_invariant,
    poisson_bracket,
)
from .liealg import (
    RootDatum,
    center,
    nilpotent_radical,
    radical,
    semisimple_split,
    solvability_chain,
    verify_cartan,
    verify_roots,
)
from .models import (
    CLASSES,
    all_generators,
    check_class,
    class_algebra,
    compare_brackets,
    golden,
    parse_combination,
    render_combination,
)
from .symmetry import (
    BRANCHES,
    FAMILY_NAMES,
    build_system,
    classify_generators,
    generate_defining_equations,
    raw_defining_equations,
    verify_general_solution,
)

FORMAT_ENV = "CONTACTSYM_FORMAT"
EXIT_PASS, EXIT_ERROR, EXIT_MISMATCH = 0, 1, 2
COMMANDS = ("symmetries", "brackets", "classify", "invariants", "defining")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    classes: tuple
    fmt: str = "json"
    samples: int = 3
    seed: int = 0
    out: str | None = None
    pbw_crosscheck: bool = False
    branch: str = "both"
    emit: str | None = None
    timing: bool = False

    def __post_init__(self):
        if self.samples < 3:
            raise UsageError("--samples must be at least 3")
        for c in self.classes:
            check_class(c)

    def echo(self) -> dict:
        out = {"command": self.command, "classes": list(self.classes), "samples": self.samples, "seed": self.seed}
        if self.command == "invariants":
            out["pbw_crosscheck"] = self.pbw_crosscheck
        if self.command == "defining":
            out["branch"] = self.branch
        return out


@dataclass
class Report:
    config: RunConfig
    results: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.results)

    def as_dict(self) -> dict:
        d = {
            "tool": "contactsym",
            "version": __version__,
            "config": self.config.echo(),
            "parameter_samples": [sample_parameters(self.config.seed + j).as_dict()
                                  for j in range(self.config.samples)],
            "verdict": "pass" if self.passed else "mismatch",
            "results": self.results,
        }
        if self.config.timing:
            d["timing"] = self.timing
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _algebra(cfg, cls):
    return class_algebra(cls, cfg.seed, cfg.samples)


# -- symmetries ---------------------------------------------------------------------

def cmd_symmetries(cfg: RunConfig) -> Report:
    rep = Report(cfg)
    for cls in cfg.classes:
        t0 = time.perf_counter()
        res = classify_generators(build_system(cls), all_generators())
        expected = golden()["classes"][cls]["generators"]
        missing = sorted(set(expected) - set(res.symmetries))
        extra = sorted(set(res.symmetries) - set(expected))
        rep.results.append({
            "class": cls,
            "dimension": len(res.symmetries),
            "expected_dimension": len(expected),
            "symmetries": res.symmetries,
            "rejected": [{"generator": l, "equation": eq, "residual": r} for l, eq, r in res.rejected],
            "missing": missing,
            "unexpected": extra,
            "passed": not missing and not extra,
        })
        rep.timing[cls] = round(time.perf_counter() - t0, 3)
    return rep


# -- brackets -----------------------------------------------------------------------

def cmd_brackets(cfg: RunConfig) -> Report:
    rep = Report(cfg)
    emitted = []
    for cls in cfg.classes:
        t0 = time.perf_counter()
        L = _algebra(cfg, cls)
        diffs = compare_brackets(L, cls)
        unexpected = [d for d in diffs if not d["allowlisted"]]
        n = len(L.labels)
        rep.results.append({
            "class": cls,
            "pairs": n * (n - 1) // 2,
            "mismatches": diffs,
            "allowlisted": [d for d in diffs if d["allowlisted"]],
            "passed": not unexpected,
        })
        if cfg.emit:
            for i in range(n):
                for j in range(i + 1, n):
                    comb = {L.labels[k]: v for k, v in L.bracket_basis(i, j).items()}
                    if comb:
                        emitted.append({"class": cls, "left": L.labels[i], "right": L.labels[j],
                                        "value": render_combination(comb)})
        rep.timing[cls] = round(time.perf_counter() - t0, 3)
    if cfg.emit:
        with open(cfg.emit, "w", encoding="utf-8") as fh:
            json.dump({"brackets": emitted}, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return rep


# -- classify -----------------------------------------------------------------------

def _root_datum(name, spec):
    return RootDatum(
        name,
        [parse_combination(h) for h in spec["cartan"]],
        [(s["name"], parse_combination(s["value"]), tuple(s["root"])) for s in spec["standard"]],
    )


def classify_class(L, cls) -> dict:
    gold = golden()["classes"][cls]
    simple = golden()["simple_ideals"]
    Z, R, N = center(L), radical(L), nilpotent_radical(L)
    chains = solvability_chain(L)
    split = semisimple_split(L)

    # the solvable radical is an ideal whose derived series ends at zero
    cur, solvable = R, R.dim == 0
    for _ in range(R.dim + 1):
        if cur.dim == 0:
            solvable = True
            break
        nxt = L.bracket_space(cur, cur)
        if nxt.dim == cur.dim:
            break
        cur = nxt
    radical_ok = solvable and L.is_ideal(R)

    computed_ideals = {frozenset(i.labels or []): i for i in split.ideals}
    ideal_rows = []
    for g in gold["ideals"]:
        ref = simple[g["simple_ideal"]]
        info = computed_ideals.get(frozenset(g["generators"]))
        roots = verify_roots(split.quotient, _root_datum(g["simple_ideal"], ref))
        ok = (info is not None and info.name == ref["isomorphy"] and info.rank == ref["rank"]
              and info.roots == ref["root_count"] and roots.passed and roots.root_count == ref["root_count"])
        ideal_rows.append({
            "reference": g["simple_ideal"],
            "generators": g["generators"],
            "found": info is not None,
            "computed": None if info is None else info.as_dict(),
            "expected_name": ref["isomorphy"],
            "roots": roots.as_dict(),
            "passed": ok,
        })
    cartan = verify_cartan(L, L.coordinate_subspace(gold["cartan"]))

    checks = {
        "dimension": L.n == gold["dimension"],
        "center": Z.labels() == gold["center"],
        "radical": N.labels() == gold["radical"],
        "radical_solvable_ideal": radical_ok,
        "predicates": [chains.is_solvable, chains.is_nilpotent, chains.is_simple, chains.is_semisimple]
        == [gold["solvable"], gold["nilpotent"], gold["simple"], gold["semisimple"]],
        "ideals": {frozenset(g["generators"]) for g in gold["ideals"]} == set(computed_ideals),
        "dimension_sum": L.n == N.dim + sum(i.dimension for i in split.ideals),
        "cartan": cartan.passed,
        "roots": all(r["passed"] for r in ideal_rows),
    }
    return {
        "class": cls,
        "dimension": L.n,
        "center": Z.describe(),
        "radical": N.describe(),
        "solvable_radical": R.describe(),
        "chains": chains.as_dict(),
        "ideals": [i.as_dict() for i in split.ideals],
        "ideal_dimensions": split.dims,
        "table_ideals": ideal_rows,
        "cartan": {"generators": gold["cartan"], **cartan.as_dict()},
        "checks": checks,
        "passed": all(checks.values()),
    }


def cmd_classify(cfg: RunConfig) -> Report:
    rep = Report(cfg)
    for cls in cfg.classes:
        t0 = time.perf_counter()
        rep.results.append(classify_class(_algebra(cfg, cls), cls))
        rep.timing[cls] = round(time.perf_counter() - t0, 3)
    return rep


# -- invariants ---------------------------------------------------------------------

def cmd_invariants(cfg: RunConfig) -> Report:
    rep = Report(cfg)
    for cls in cfg.classes:
        t0 = time.perf_counter()
        L = _algebra(cfg, cls)
        invs = build_invariants(L, cls)
        rows, total = [], 0
        for inv in invs:
            res = check_invariant(L, inv.poly)
            total += len(res)
            bad = []
            for r in res:
                if not r.zero:
                    mono, coeff = r.residual.minimal_monomial(L.labels)
                    bad.append({"generator": r.generator, "minimal_monomial": mono, "coefficient": coeff})
            rows.append({"name": inv.name, "degree": inv.degree, "terms": len(inv.poly.terms),
                         "generators_checked": len(res), "failures": bad, "passed": not bad})
        result = {"class": cls, "count": len(invs), "residuals": total, "invariants": rows}
        ok = all(r["passed"] for r in rows) and len(invs) == (5 if cls == "constant" else 4)
        if cls in ("constant", "inverse_square"):
            mutant = check_invariant(L, mutated_energy_invariant(L, cls))
            caught = [r.generator for r in mutant if not r.zero]
            result["mutation"] = {"target": "I^t with the (Y_1)^2 sign flipped", "detected_by": caught,
                                  "passed": bool(caught)}
            ok = ok and bool(caught)
        named = {i.name: i.poly for i in invs}
        pb = poisson_bracket(L, named["I_S"], named["I^t"])
        result["poisson_I_S_I_t"] = pb.render(L.labels)
        ok = ok and not pb
        if cfg.pbw_crosscheck:
            eq = equivariance_check(L, 2)
            result["pbw_crosscheck"] = {"checked": eq.checked, "failures": [list(f) for f in eq.failures],
                                        "passed": eq.passed}
            ok = ok and eq.passed
        result["passed"] = ok
        rep.results.append(result)
        rep.timing[cls] = round(time.perf_counter() - t0, 3)
    return rep


# -- defining -----------------------------------------------------------------------

def cmd_defining(cfg: RunConfig) -> Report:
    rep = Report(cfg)
    t0 = time.perf_counter()
    system = generate_defining_equations()
    consequences = [r for r in system.records if r.relation == "consequence"]
    rep.results.append({
        "check": "defining_system",
        "raw_equations": len(system.records),
        "distinct_equations": system.distinct,
        "families": {f: system.families.get(f, 0) for f in FAMILY_NAMES},
        "matched_families": len(system.matched_families),
        "consequences": len(consequences),
        "leftovers": [f"{r.residual} [{r.monomial}]" for r in system.leftovers],
        "passed": len(system.matched_families) == len(FAMILY_NAMES) and not system.leftovers,
    })
    rep.timing["defining_system"] = round(time.perf_counter() - t0, 3)
    branches = BRANCHES if cfg.branch == "both" else (cfg.branch.replace("-", "_"),)
    for b in branches:
        t0 = time.perf_counter()
        sol = verify_general_solution(b)
        rep.results.append({
            "check": "general_solution",
            "branch": b,
            "reading": sol.reading,
            "family_residuals": sol.family_residuals,
            "criterion_residual": sol.criterion_residual,
            "f0_residual_is_wave_operator": sol.f0_residual_is_wave_operator,
            "auxiliary_residual": sol.auxiliary_residual,
            "passed": sol.passed,
        })
        rep.timing[f"general_solution:{b}"] = round(time.perf_counter() - t0, 3)
    if cfg.emit:
        with open(cfg.emit, "w", encoding="utf-8") as fh:
            for rec, (_, _, coeff) in zip(system.records, raw_defining_equations()):
                fh.write(f"{rec.residual} [{rec.monomial}] {rec.relation}:{rec.family}: {render(coeff)} = 0\n")
    return rep


HANDLERS = {
    "symmetries": cmd_symmetries,
    "brackets": cmd_brackets,
    "classify": cmd_classify,
    "invariants": cmd_invariants,
    "defining": cmd_defining,
}


# -- text rendering -----------------------------------------------------------------

def render_text(rep: Report) -> str:
    d = rep.as_dict()
    lines = [f"contactsym {d['version']} {rep.config.command}: {d['verdict'].upper()}"]
    for r in rep.results:
        head = r.get("class") or r.get("check")
        if "branch" in r:
            head += f" ({r['branch']})"
        lines.append(f"[{'pass' if r['passed'] else 'FAIL'}] {head}")
        cmd = rep.config.command
        if cmd == "symmetries":
            lines.append(f"    {r['dimension']} symmetries (expected {r['expected_dimension']})")
            for rej in r["rejected"]:
                lines.append(f"    rejected {rej['generator']}: {rej['equation']} residual {rej['residual']}")
        elif cmd == "brackets":
            lines.append(f"    {r['pairs']} pairs, {len(r['mismatches'])} mismatches")
            for m in r["mismatches"]:
                tag = " (allowlisted)" if m["allowlisted"] else ""
                lines.append(f"    [{m['left']}, {m['right']}]: {m['computed']} ≠ {m['golden']}{tag}")
        elif cmd == "classify":
            lines.append(f"    dimension {r['dimension']}, centre {r['center']['basis']}, radical dim {r['radical']['dimension']}"
                         f" (solvable radical dim {r['solvable_radical']['dimension']})")
            lines.append("    ideals " + ", ".join(f"{i['name'] or '?'}[{i['dimension']}]" for i in r["ideals"]))
            for k, v in r["checks"].items():
                if not v:
                    lines.append(f"    check failed: {k}")
        elif cmd == "invariants":
            lines.append(f"    {r['count']} invariants, {r['residuals']} residuals")
            for inv in r["invariants"]:
                lines.append(f"    {inv['name']} degree {inv['degree']}: {'zero' if inv['passed'] else inv['failures']}")
            if "mutation" in r:
                lines.append(f"    mutated I^t caught by {', '.join(r['mutation']['detected_by']) or 'nothing'}")
            if "pbw_crosscheck" in r:
                lines.append(f"    PBW equivariance: {r['pbw_crosscheck']['checked']} checks")
        elif cmd == "defining":
            if r["check"] == "defining_system":
                lines.append(f"    {r['raw_equations']} raw, {r['distinct_equations']} distinct, "
                             f"{r['matched_families']} families, {len(r['leftovers'])} leftovers")
            else:
                bad = {k: v for k, v in r["family_residuals"].items() if v != "0"}
                lines.append(f"    nonzero families: {bad or 'none'}; criterion residual {r['criterion_residual']}")
    if rep.config.timing:
        lines.append("timing: " + ", ".join(f"{k}={v}s" for k, v in sorted(rep.timing.items())))
    return "\n".join(lines) + "\n"


# -- entry point --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="contactsym", description="Exact contact-symmetry checks for the two-particle Schrodinger equation.")
    p.add_argument("--version", action="version", version=f"contactsym {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--class", dest="cls", default="all", help="potential class or 'all'")
        s.add_argument("--format", choices=("json", "text"), default=os.environ.get(FORMAT_ENV, "json"))
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--samples", type=int, default=3)
        s.add_argument("--out")
        s.add_argument("--timing", action="store_true", help="include wall-clock timings (not reproducible)")
        if name == "invariants":
            s.add_argument("--pbw-crosscheck", action="store_true")
        if name == "defining":
            s.add_argument("--branch", choices=("both", "v-prime-zero", "cross-constant-zero"), default="both")
        if name in ("defining", "brackets"):
            s.add_argument("--emit", metavar="PATH")
    return p


def config_from_args(ns) -> RunConfig:
    if ns.format not in ("json", "text"):
        raise UsageError(f"unsupported format {ns.format!r}")
    if ns.cls == "all":
        classes = CLASSES
    elif ns.cls in CLASSES:
        classes = (ns.cls,)
    else:
        raise UsageError(f"unknown class {ns.cls!r}; choose from all, {', '.join(CLASSES)}")
    return RunConfig(ns.command, classes, ns.format, ns.samples, ns.seed, ns.out,
                     getattr(ns, "pbw_crosscheck", False), getattr(ns, "branch", "both"),
                     getattr(ns, "emit", None), ns.timing)


def run(cfg: RunConfig) -> Report:
    return HANDLERS[cfg.command](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        rep = run(cfg)
    except (UsageError, ValueError) as e:
        parser.print_usage(sys.stderr)
        print(f"contactsym: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as e:  # noqa: BLE001 - any other failure is an internal error
        print(f"contactsym: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR
    text = rep.to_json() if cfg.fmt == "json" else render_text(rep)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if rep.passed else EXIT_MISMATCH


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
