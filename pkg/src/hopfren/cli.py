"""``renorm`` command-line driver.

Exit codes: 0 success / confirmed, 1 refuted or mismatch, 2 usage or input
error. Reports depend only on the inputs and the options, so reruns are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .corpus import corpus_theories, load_corpus
from .degrees import DegreeError, critical_degree
from .dsl import load_json_graphs, parse_graph_dsl
from .graphs import FeynmanGraph, GraphError, contract
from .hopf import GraphHopfAlgebra, HopfError, convolve
from .renorm import (
    METHODS, RenormError, bogoliubov, bwh_verify, exponential_left, exponential_right,
    forest_expansion_oracle,
)
from .schemes import SchemeError, SubtractionScheme, classify_scheme, rota_baxter_holds
from .synth import random_character, random_element

COMMANDS = ("wood", "degrees", "coproduct", "classify", "renormalize", "compare", "selftest")


class UsageError(Exception):
    pass


@dataclass
class WorkbenchConfig:
    max_grade: int = 3
    samples: int = 200
    seed: int = 0
    scheme: str = "minimal"
    method: str = "bogoliubov"
    output_format: str = "text"

    def __post_init__(self):
        if not 1 <= self.max_grade <= 6:
            raise UsageError("--max-grade must be in 1..6")
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("--seed must be a 64-bit unsigned integer")


@dataclass
class Report:
    lines: list[str]
    data: dict
    code: int = 0


# -- input ---------------------------------------------------------------------

def load_inputs(paths: list[str]) -> list[FeynmanGraph]:
    """Graphs from DSL or JSON files, or the shipped corpus if none given.
    Raises UsageError with every diagnostic on bad input."""
    if not paths:
        return load_corpus()
    theories = dict(corpus_theories())
    graphs, problems = [], []
    for p in paths:
        try:
            text = Path(p).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            problems.append(f"{p}: cannot read ({e})")
            continue
        if p.endswith(".json"):
            res = load_json_graphs(text, theories)
        else:
            res = parse_graph_dsl(text, theories)
            theories.update({t.name: t for t in res.theories})
        problems += [f"{p}:{d}" for d in res.diagnostics]
        graphs += res.graphs
    if problems:
        raise UsageError("\n".join(problems))
    return graphs


def build_scheme(spec: str, hopf: GraphHopfAlgebra | None = None) -> SubtractionScheme:
    if spec.startswith("custom:"):
        path = spec[len("custom:"):]
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read degree table {path}: {e}") from None
        if not isinstance(raw, dict) or not all(isinstance(v, int) for v in raw.values()):
            raise UsageError(f"degree table {path} must map graph names or keys to integers")
        table = {}
        for k, v in raw.items():
            try:
                table[hopf.key_of(k) if hopf else k] = v
            except HopfError:
                table[k] = v
        return SubtractionScheme.custom(table)
    try:
        return SubtractionScheme.from_name(spec)
    except SchemeError as e:
        raise UsageError(str(e)) from None


def _session(graphs, config) -> GraphHopfAlgebra:
    return GraphHopfAlgebra([g for g in graphs if g.omega >= 0], max_grade=config.max_grade)


def _names(graphs) -> dict[str, str]:
    out = {}
    for g in graphs:
        out.setdefault(g.key, g.name)
    return out


# -- commands --------------------------------------------------------------------

def cmd_wood(graphs, config) -> Report:
    names = _names(graphs)
    lines, items = [], []
    for g in graphs:
        sp = []
        lines.append(f"{g.name}: {len(g.wood)} spinneys")
        for s in g.wood:
            q = contract(g, s)
            qname = names.get(q.key, "")
            sp.append({"spinney": s.label(), "loops": s.loops, "quotient": q.key,
                       "quotient_name": qname, "quotient_loops": q.loops})
            lines.append(f"  {s.label()}  quotient: {q.loops}-loop" + (f" ~ {qname}" if qname else ""))
        items.append({"graph": g.name, "key": g.key, "spinneys": sp})
    return Report(lines, {"command": "wood", "graphs": items})


def cmd_degrees(graphs, config) -> Report:
    lines = [f"{'graph':<8} {'L':>2} {'l':>2} {'V':>2} {'omega':>5} {'abar':>5}"]
    items = []
    for g in graphs:
        L, l, V, w = g.power_counting
        abar = critical_degree(g) if w >= 0 else None
        items.append({"graph": g.name, "theory": g.theory.name, "L": L, "l": l, "V": V,
                      "omega": w, "abar": abar})
        lines.append(f"{g.name:<8} {L:>2} {l:>2} {V:>2} {w:>5} {'-' if abar is None else abar:>5}")
    return Report(lines, {"command": "degrees", "graphs": items})


def cmd_coproduct(graphs, config) -> Report:
    hopf = _session(graphs, config)
    lines, items = [], []
    for g in graphs:
        if g.omega < 0:
            continue
        terms = hopf.coproduct(hopf.key_of(g))
        rendered = []
        lines.append(f"Delta({g.name}) = {len(terms)} terms, total multiplicity {terms.total_multiplicity}")
        for left, right, m in terms:
            t = f"{hopf.forest_name(left)} (x) {hopf.forest_name(right)}"
            rendered.append({"left": hopf.forest_name(left), "right": hopf.forest_name(right), "mult": m})
            lines.append(f"  {m} * {t}" if m != 1 else f"  {t}")
        items.append({"graph": g.name, "terms": rendered})
    return Report(lines, {"command": "coproduct", "graphs": items})


def _witness_line(w) -> str:
    deg = w.degrees()
    extra = ""
    if deg:
        extra = ", degrees lhs {} rhs {}".format(*("zero" if d < 0 else d for d in deg))
    return f"    witness: {w.graph} {w.spinney} sample {w.sample} seed {w.seed}{extra}"


def cmd_classify(graphs, config) -> Report:
    hopf = _session(graphs, config)
    scheme = build_scheme(config.scheme, hopf)
    bad = scheme.validate_on(graphs)
    if bad is not None:
        raise UsageError(f"invalid subtraction degree: {bad.witness.describe()}")
    c = classify_scheme(scheme, graphs, config.samples, config.seed)
    lines = [f"scheme {scheme.name}: {c.ct.checks} samples per identity"]
    for ident, st in (("CT", c.ct), ("RT", c.rt)):
        lines.append(f"  {ident}: {st.status}")
        lines += [_witness_line(w) for w in st.witnesses]
    lines.append(f"  ST: {c.st}")
    return Report(lines, {"command": "classify", **c.to_json()}, 0 if c.st == "confirmed-on-corpus" else 1)


def _character(hopf, scheme, config):
    return random_character(hopf, scheme, random.Random(config.seed), max_grade=config.max_grade)


def _form_records(hopf, forms: dict, grade: int) -> list[dict]:
    out = []
    for key in hopf.generator_keys():
        if hopf.graph(key).loops > grade:
            continue
        rec = {"graph": key, "name": hopf.name(key)}
        rec.update({k: f((key,)).to_json() for k, f in forms.items()})
        out.append(rec)
    return out


def cmd_renormalize(graphs, config) -> Report:
    hopf = _session(graphs, config)
    scheme = build_scheme(config.scheme, hopf)
    phi = _character(hopf, scheme, config)
    n = config.max_grade
    lines = [f"scheme {scheme.name}, method {config.method}, character random:seed={config.seed}"]
    if config.method == "bogoliubov":
        res = bogoliubov(phi, scheme, n)
        pair, records, checks = res.as_pair(), res.records(), []
    else:
        run = exponential_left if config.method == "exp-left" else exponential_right
        pair, trace = run(phi, scheme, n)
        records = _form_records(hopf, {"irregular": pair.irregular, "regular": pair.regular}, n)
        checks = [{"step": c.step, "claim": c.claim, "holds": c.holds, "witness": c.witness}
                  for c in trace.checks]
    ok = bwh_verify(phi, pair, scheme, n)
    for rec in records:
        lines.append(f"  {rec['name']}: " + ", ".join(
            f"{k} = {_render(hopf, rec, k, scheme)}" for k in rec if k not in ("graph", "name")))
    for c in checks:
        if not c["holds"]:
            lines.append(f"  reported: {c['claim']} fails on {c['witness']}")
    lines.append(f"BWH decomposition verified up to grade {n}: {'yes' if ok else 'no'}")
    data = {"command": "renormalize", "scheme": scheme.name, "method": config.method,
            "seed": config.seed, "max_grade": n, "records": records, "checks": checks, "verified": ok}
    return Report(lines, data, 0 if ok else 1)


def _render(hopf, rec, field, scheme) -> str:
    return str(scheme.algebra.from_json(rec[field]))


def cmd_compare(graphs, config) -> Report:
    hopf = _session(graphs, config)
    scheme = build_scheme(config.scheme, hopf)
    phi = _character(hopf, scheme, config)
    n = config.max_grade
    pairs = {"bogoliubov": bogoliubov(phi, scheme, n).as_pair()}
    errors = {}
    for method, run in (("exp-left", exponential_left), ("exp-right", exponential_right)):
        try:
            pairs[method] = run(phi, scheme, n)[0].normalised()
        except RenormError as e:
            errors[method] = str(e)
    ref = pairs["bogoliubov"]
    diffs = {}
    for method, pair in pairs.items():
        if method == "bogoliubov":
            continue
        diffs[method] = [
            hopf.forest_name(f) for f in hopf.forests(n)
            if pair.irregular(f) != ref.irregular(f) or pair.regular(f) != ref.regular(f)
        ]
    left_ok = "exp-left" in diffs and not diffs["exp-left"]
    right_ok = "exp-right" in diffs and not diffs["exp-right"]
    lines = [f"scheme {scheme.name}, character random:seed={config.seed}, grade <= {n}, "
             f"{len(hopf.forests(n))} forests"]
    for method in ("exp-left", "exp-right"):
        if method in errors:
            lines.append(f"  {method}: failed: {errors[method]}")
        elif diffs[method]:
            lines.append(f"  {method}: differs from bogoliubov on {len(diffs[method])} forests, first {diffs[method][0]}")
        else:
            lines.append(f"  {method}: identical to bogoliubov")
    must_match_all = scheme.model == "A"
    code = 0 if left_ok and (right_ok or not must_match_all) else 1
    if left_ok and right_ok:
        lines.append("all methods identical")
    elif code == 0:
        lines.append("bogoliubov and exp-left identical; exp-right differs (recorded)")
    else:
        lines.append("mismatch")
    data = {"command": "compare", "scheme": scheme.name, "seed": config.seed, "max_grade": n,
            "differences": diffs, "errors": errors, "all_identical": left_ok and right_ok}
    return Report(lines, data, code)


def cmd_selftest(graphs, config) -> Report:
    """Invariant suite on the inputs at reduced sample counts."""
    checks: list[tuple[str, bool]] = []
    for g in graphs:
        ok = g.omega == g.theory.dimension * g.loops - 2 * len(g.edges)
        checks.append((f"power counting {g.name}", ok))
    for g in graphs:
        for kind in ("minimal", "critical"):
            res = SubtractionScheme.from_name(kind).validate_on([g])
            checks.append((f"degree validation {kind} {g.name}", res is None))
    hopf = _session(graphs, config)
    n = min(config.max_grade, 3)
    for key in hopf.generator_keys():
        if hopf.graph(key).loops > n:
            continue
        ok = hopf.coproduct_left_iterated((key,)) == hopf.coproduct_right_iterated((key,))
        checks.append((f"coassociativity {hopf.name(key)}", ok))
    rng = random.Random(config.seed)
    rb = all(
        rota_baxter_holds(lambda x: x.pole_part(),
                          random_element(rng, "A", graphs[0], "x"), random_element(rng, "A", graphs[0], "y"))
        for _ in range(min(config.samples, 50))
    )
    checks.append(("Rota-Baxter identity for the pole part", rb))
    reps = min(config.samples, 3)
    for name in ("minimal", "critical", "pole"):
        scheme = SubtractionScheme.from_name(name)
        for i in range(reps):
            phi = random_character(hopf, scheme, random.Random(config.seed + i), max_grade=n)
            res = bogoliubov(phi, scheme, n)
            checks.append((f"C * phi = R ({name}, sample {i})", convolve(res.C, phi).equals(res.R, n)))
            if name != "critical":
                left = exponential_left(phi, scheme, n)[0]
                checks.append((f"bogoliubov = exp-left ({name}, sample {i})",
                               left.irregular.equals(res.C, n) and left.regular.equals(res.R, n)))
            if name == "pole":
                right = exponential_right(phi, scheme, n)[0].normalised()
                checks.append((f"exp-right unique ({name}, sample {i})",
                               right.irregular.equals(res.C, n) and right.regular.equals(res.R, n)))
            if scheme.model == "B":
                ok = all(res.R((k,)).taylor_jet(scheme.degree_of(hopf.graph(k))).is_zero() for k in res.rbar)
                checks.append((f"degree annihilation ({name}, sample {i})", ok))
        for g in graphs:
            if 0 < g.loops <= n and g.omega >= 0:
                ok = forest_expansion_oracle(phi, scheme, g) == res.C((g.key,))
                checks.append((f"forest oracle {g.name} ({name})", ok))
    lines = [f"{'PASS' if ok else 'FAIL'} {what}" for what, ok in checks]
    failed = sum(not ok for _, ok in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    data = {"command": "selftest", "checks": [{"check": w, "pass": ok} for w, ok in checks]}
    return Report(lines, data, 1 if failed else 0)


HANDLERS = {
    "wood": cmd_wood, "degrees": cmd_degrees, "coproduct": cmd_coproduct, "classify": cmd_classify,
    "renormalize": cmd_renormalize, "compare": cmd_compare, "selftest": cmd_selftest,
}


def execute_command(config: WorkbenchConfig, command: str, inputs: list[str]) -> Report:
    if command not in HANDLERS:
        raise UsageError(f"unknown command {command!r}")
    graphs = load_inputs(inputs)
    if not graphs:
        raise UsageError("no graphs in input")
    try:
        return HANDLERS[command](graphs, config)
    except (DegreeError, SchemeError) as e:
        raise UsageError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="renorm", description="Hopf-algebraic renormalisation workbench")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("files", nargs="*", help="graph files (.fg DSL or .json); default: shipped corpus")
    p.add_argument("--scheme", default="minimal", help="minimal | critical | pole | custom:FILE")
    p.add_argument("--method", default="bogoliubov", choices=METHODS)
    p.add_argument("--max-grade", type=int, default=3)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", default="text", choices=("json", "text"))
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_intermixed_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        config = WorkbenchConfig(args.max_grade, args.samples, args.seed, args.scheme,
                                 args.method, args.format)
        report = execute_command(config, args.command, args.files)
    except UsageError as e:
        print(f"renorm: {e}", file=sys.stderr)
        return 2
    except (GraphError, HopfError) as e:
        print(f"renorm: {e}", file=sys.stderr)
        return 1 if isinstance(e, RenormError) else 2
    if config.output_format == "json":
        print(json.dumps({**report.data, "exit_code": report.code}, indent=2))
    else:
        print("\n".join(report.lines))
    return report.code


if __name__ == "__main__":
    sys.exit(main())
