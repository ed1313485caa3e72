"""Command-line front end.

Every command assembles its complete output before writing anything, so a
failing run prints only a diagnostic on stderr.  Exit codes: 0 success,
1 verification failure, 2 parse or usage error, 3 size cap, 4 hypothesis
violation (loop, coloop, simplicity).
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import chains, graphlab
from .errors import (ChainPolyError, ContractViolation, HypothesisViolation,
                     InvalidParameters, SchemaError, SizeCapExceeded)
from .graph import Graph, random_orientation
from .matroid import (GraphicMatroid, Matroid, check_axioms, is_coloop, is_loop,
                      make_graphic, matroid_from_json)
from .polyring import MultiPoly
from .report import Report

COMMANDS = ("chain-tutte", "chain-char", "whitney", "mobius", "chromatic", "flow",
            "count-colorings", "count-flows", "verify")
SUITES = ("axioms", "routes", "duality", "product", "recursion", "lemma21", "signs",
          "coloring-oracle", "flow-oracle")

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP, EXIT_HYPOTHESIS = 0, 1, 2, 3, 4


class UsageError(ChainPolyError):
    pass


# -- parsing -----------------------------------------------------------------------

def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"<{what}> line {exc.lineno} column {exc.colno}", exc.msg) from None


def parse_matroid(text: str) -> Matroid:
    return matroid_from_json(_load_json(text, "matroid"))


def parse_graph(text: str) -> Graph:
    return Graph.from_json(_load_json(text, "graph"))


def serialize(obj: Matroid | Graph) -> str:
    """Canonical JSON: sorted keys, no whitespace."""
    return json.dumps(obj.to_json(), sort_keys=True, separators=(",", ":"))


def _read_source(value: str, stdin) -> str:
    """Inline JSON, ``-`` for stdin, or a file path."""
    if value == "-":
        return stdin.read()
    if value.lstrip().startswith(("{", "[")):
        return value
    try:
        with open(value, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {value!r}: {exc.strerror}") from None


def _int_list(text: str, flag: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated integers, got {text!r}") from None
    if not out:
        raise UsageError(f"{flag}: empty list")
    return out


# -- jobs ------------------------------------------------------------------------------

@dataclass
class JobSpec:
    command: str
    k: int | None = None
    matroid: Matroid | None = None
    graph: Graph | None = None
    palette: list[int] | None = None
    groups: list[graphlab.AbelianGroup] | None = None
    suites: list[str] = field(default_factory=list)
    route: str | None = None
    table: bool = False
    output_format: str = "text"
    jobs: int = 1
    max_visits: int | None = None

    @property
    def caps(self) -> dict:
        return {"jobs": self.jobs, "max_visits": self.max_visits}

    def need_k(self) -> int:
        if self.k is None:
            raise UsageError(f"{self.command}: --k is required")
        return self.k

    def need_graph(self) -> Graph:
        if self.graph is None:
            if isinstance(self.matroid, GraphicMatroid):
                return self.matroid.graph
            raise UsageError(f"{self.command}: --graph is required")
        return self.graph

    def need_matroid(self) -> Matroid:
        if self.matroid is None:
            if self.graph is None:
                raise UsageError(f"{self.command}: --matroid or --graph is required")
            self.matroid = make_graphic(self.graph)
        return self.matroid


def _poly_payload(job: JobSpec, name: str, p: MultiPoly) -> dict:
    return {"command": job.command, "invariant": name, "k": job.k,
            "text": p.to_text(), "poly": p.to_json()}


def run(job: JobSpec) -> tuple[int, dict, str]:
    """Execute a job; returns ``(exit_code, json_payload, text)``."""
    cmd = job.command
    if job.k is not None and job.k < 1:
        raise UsageError("--k must be >= 1")
    if cmd in ("chain-tutte", "whitney", "chain-char"):
        m, k = job.need_matroid(), job.need_k()
        if cmd == "chain-tutte":
            p = chains.chain_tutte(m, k, **job.caps)
        elif cmd == "whitney":
            p = chains.whitney_rank_poly(m, k, **job.caps)
        else:
            p = chains.chain_characteristic(m, k, job.route or "definition", **job.caps)
        return EXIT_OK, _poly_payload(job, cmd, p), p.to_text()
    if cmd == "mobius":
        m = job.need_matroid()
        if job.table:
            k = job.need_k()
            tab = chains.chain_mobius_table(m, k)
            rows = [{"chain": [sorted(_bits(x)) for x in ch], "value": v}
                    for ch, v in tab.items()]
            text = "\n".join(f"{_fmt_chain(r['chain'])} {r['value']}" for r in rows)
            return EXIT_OK, {"command": cmd, "k": k, "values": rows}, text
        p = chains.mobius_poly(m)
        return EXIT_OK, _poly_payload(job, cmd, p), p.to_text()
    if cmd == "chromatic":
        p = graphlab.coupled_chromatic_poly(job.need_graph(), job.need_k(), **job.caps)
        return EXIT_OK, _poly_payload(job, cmd, p), p.to_text()
    if cmd == "flow":
        p = graphlab.coupled_flow_poly(job.need_graph(), job.need_k(), job.route or "both",
                                       **job.caps)
        return EXIT_OK, _poly_payload(job, cmd, p), p.to_text()
    if cmd == "count-colorings":
        if not job.palette:
            raise UsageError("count-colorings: --palette is required")
        _match_k(job, len(job.palette), "--palette")
        n = graphlab.count_coupled_colorings(job.need_graph(), job.palette,
                                             max_work=job.max_visits)
        return EXIT_OK, {"command": cmd, "palette": job.palette, "count": n}, str(n)
    if cmd == "count-flows":
        if not job.groups:
            raise UsageError("count-flows: --groups is required")
        _match_k(job, len(job.groups), "--groups")
        n = graphlab.count_coupled_flows(job.need_graph(), job.groups, max_work=job.max_visits)
        return EXIT_OK, {"command": cmd, "groups": [str(g) for g in job.groups],
                         "count": n}, str(n)
    if cmd == "verify":
        report = run_suites(job)
        payload = {"command": cmd, "k": job.k, "suites": job.suites, **report.to_json()}
        fails = sum(not c.passed for c in report.checks)
        skips = sum(c.skipped for c in report.checks)
        ran = len(report.checks) - skips
        summary = (f"all {ran} checks passed" if report.passed
                   else f"{fails} of {ran} checks failed")
        if skips:
            summary += f", {skips} skipped"
        text = "\n".join(report.lines() + [summary])
        return (EXIT_OK if report.passed else EXIT_FAIL), payload, text
    raise UsageError(f"unknown command {cmd!r}")


def _bits(s: int) -> list[int]:
    return [a for a in range(s.bit_length()) if s >> a & 1]


def _fmt_chain(chain) -> str:
    return " <= ".join("{" + ",".join(map(str, x)) + "}" for x in chain)


def _match_k(job: JobSpec, size: int, flag: str) -> None:
    if job.k is not None and job.k != size:
        raise UsageError(f"{flag} has {size} entries but --k is {job.k}")
    job.k = size


# -- verification suites ---------------------------------------------------------------

def run_suites(job: JobSpec) -> Report:
    suites = list(job.suites) or ["all"]
    explicit = "all" not in suites
    if not explicit:
        suites = list(SUITES)
    unknown = set(suites) - set(SUITES)
    if unknown:
        raise UsageError(f"unknown suite(s) {sorted(unknown)}; choose from {', '.join(SUITES)}, all")
    k = job.need_k()
    m = job.need_matroid()
    report = Report()
    for name in suites:
        try:
            _SUITE_FNS[name](job, m, k, report)
        except HypothesisViolation as exc:
            if explicit:
                raise
            report.skip(name, f"skipped: {exc}")
        except UsageError as exc:
            if explicit:
                raise
            report.skip(name, f"skipped: {exc}")
    return report.finish()


def _suite_axioms(job, m, k, report):
    try:
        check_axioms(m)
        report.add("axioms", True)
    except InvalidParameters as exc:
        report.add("axioms", False, str(exc))


def _suite_routes(job, m, k, report):
    report.extend(chains.verify_routes(m, k, **job.caps))
    report.extend(chains.verify_identities(m, k, checks=("mobius",), **job.caps))


def _identity(check):
    def fn(job, m, k, report):
        report.extend(chains.verify_identities(m, k, checks=(check,), **job.caps))
    return fn


def _suite_recursion(job, m, k, report):
    eligible = [a for a in range(m.n) if not is_loop(m, a) and not is_coloop(m, a)]
    if not eligible:
        raise HypothesisViolation("every element is a loop or a coloop")
    for a in eligible:
        report.extend(chains.verify_recursion(m, a, k, **job.caps))


def _suite_signs(job, m, k, report):
    report.extend(chains.verify_sign_alternation(m, k, **job.caps))


def _suite_coloring(job, m, k, report):
    g = job.need_graph()
    if not g.simple:
        raise HypothesisViolation("coupled colorings need a simple graph")
    poly = graphlab.coupled_chromatic_poly(g, k, **job.caps)
    bad = []
    sizes = job.palette and [job.palette] or list(itertools.product(range(1, 4), repeat=k))
    for pal in sizes:
        if len(pal) != k:
            raise UsageError(f"--palette has {len(pal)} entries but --k is {k}")
        count = graphlab.count_coupled_colorings(g, pal, max_work=job.max_visits)
        if count != poly(*pal):
            bad.append((tuple(pal), count, poly(*pal)))
    report.add(f"coloring-oracle(k={k})", not bad,
               f"{len(sizes)} palettes" if not bad else f"palette {bad[0][0]}: "
               f"counted {bad[0][1]}, polynomial {bad[0][2]}")


_ORACLE_GROUPS = ("Z2", "Z3", "Z4", "Z2xZ2")


def _suite_flow(job, m, k, report):
    g = job.need_graph()
    poly = graphlab.coupled_flow_poly(g, k, **job.caps)
    if job.groups:
        if len(job.groups) != k:
            raise UsageError(f"--groups has {len(job.groups)} entries but --k is {k}")
        combos = [tuple(job.groups)]
    else:
        combos = list(itertools.product([graphlab.parse_group(s) for s in _ORACLE_GROUPS],
                                        repeat=k))
    rng = random.Random(0)
    bad = []
    for groups in combos:
        want = poly(*[grp.order for grp in groups])
        got = graphlab.count_coupled_flows(g, groups, max_work=job.max_visits)
        flipped = graphlab.count_coupled_flows(g, groups, random_orientation(g, rng),
                                               max_work=job.max_visits)
        if not got == flipped == want:
            bad.append((",".join(map(str, groups)), got, flipped, want))
    report.add(f"flow-oracle(k={k})", not bad,
               f"{len(combos)} group tuples" if not bad else
               "groups {}: counted {} and {} (reoriented), polynomial {}".format(*bad[0]))


_SUITE_FNS = {
    "axioms": _suite_axioms,
    "routes": _suite_routes,
    "duality": _identity("duality"),
    "product": _identity("product"),
    "lemma21": _identity("lemma21"),
    "recursion": _suite_recursion,
    "signs": _suite_signs,
    "coloring-oracle": _suite_coloring,
    "flow-oracle": _suite_flow,
}


# -- entry point -------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chainpoly",
                description="Chain polynomials of matroids and coupled coloring/flow counts.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--k", type=int, help="chain length")
    p.add_argument("--matroid", metavar="JSON|FILE", help="matroid description (inline JSON, file, or -)")
    p.add_argument("--graph", metavar="FILE|-", help="graph description (file, inline JSON, or -)")
    p.add_argument("--palette", metavar="LIST", help="palette sizes, e.g. 2,3")
    p.add_argument("--groups", metavar="LIST", help="abelian groups, e.g. Z4,Z2xZ2")
    p.add_argument("--suite", action="append", default=[],
                   help=f"verification suite ({', '.join(SUITES)}, all); repeatable or comma list")
    p.add_argument("--route", help="chain-char: definition|tutte_eval|mobius; flow: chain|tutte|both")
    p.add_argument("--table", action="store_true", help="mobius: list mu^k on every flat chain")
    p.add_argument("--format", dest="output_format", choices=("text", "json"), default="text")
    p.add_argument("--max-visits", type=int, metavar="N",
                   help="work cap (default 10**9 or $CHAINPOLY_MAX_VISITS)")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker threads")
    return p


def parse_args(argv: Sequence[str], stdin=None) -> JobSpec:
    stdin = sys.stdin if stdin is None else stdin
    ns = build_parser().parse_args(list(argv))
    if ns.matroid is not None and ns.graph is not None:
        raise UsageError("give either --matroid or --graph, not both")
    if ns.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    if ns.max_visits is not None and ns.max_visits < 1:
        raise UsageError("--max-visits must be >= 1")
    job = JobSpec(ns.command, k=ns.k, output_format=ns.output_format, jobs=ns.jobs,
                  max_visits=ns.max_visits, route=ns.route, table=ns.table)
    if ns.matroid is not None:
        job.matroid = parse_matroid(_read_source(ns.matroid, stdin))
    if ns.graph is not None:
        job.graph = parse_graph(_read_source(ns.graph, stdin))
    if ns.palette is not None:
        job.palette = _int_list(ns.palette, "--palette")
    if ns.groups is not None:
        try:
            job.groups = graphlab.parse_groups(ns.groups)
        except (ContractViolation, InvalidParameters) as exc:
            raise UsageError(f"--groups: {exc}") from None
    job.suites = [s.strip() for item in ns.suite for s in item.split(",") if s.strip()]
    return job


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None, stdin=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        job = parse_args(argv, stdin)
        code, payload, text = run(job)
    except SchemaError as exc:
        stderr.write(f"chainpoly: parse error at {exc}\n")
        return EXIT_PARSE
    except (UsageError, ContractViolation, InvalidParameters) as exc:
        stderr.write(f"chainpoly: {exc}\n")
        return EXIT_PARSE
    except SizeCapExceeded as exc:
        stderr.write(f"chainpoly: size cap exceeded: {exc}\n")
        return EXIT_CAP
    except HypothesisViolation as exc:
        stderr.write(f"chainpoly: hypothesis violation: {exc}\n")
        return EXIT_HYPOTHESIS
    except ChainPolyError as exc:
        stderr.write(f"chainpoly: {exc}\n")
        return EXIT_FAIL
    if job.output_format == "json":
        stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        stdout.write(text + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
