"""Batch command-line front-end.

Input files use a small line grammar:

    char <prime>
    vars <name> <name> ...        (required for `ideal:`, optional otherwise)
    ideal:                        one generator per line (or inline after the colon,
        <polynomial>              separated by ';')
    facets: 1 2; 3 4              or: a simplicial complex by facets
    graph: 1 2; 2 3               or: a graph for the binomial edge ideal

Blank lines and '#' comments are ignored.  For `facets:`/`graph:` the
variable names are fixed (x1..xv, resp. x1..xv,y1..yv) and a `vars` line,
if present, must repeat them.  Exit codes: 0 success, 2 not-F-pure,
3 budget exceeded, 4 parse error, 1 internal assertion failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import (Budget, BudgetExceededError, InternalAssertionError,
                     LyutabError, NotFPureError, ParseError)
from .fieldpoly import PolyRing, is_prime
from .groebner import Ideal, krull_dimension
from .homological import ExtCalculator, double_ext_degree_zero
from .fsingularities import (fedder_is_fpure, is_compatible, ncm_ideal, sdim,
                             splitting_prime)
from .lyubeznik import (CellLedger, CheckReport, CheckResult, LyubeznikTable,
                        NOT_FPURE_MESSAGE, ideal_fingerprint, lyubeznik_table,
                        projective_table, standard_checks)
from .sr_oracle import (Graph, SimplicialComplex, binomial_edge_ideal,
                        connected_components, hochster_degree_zero,
                        reduced_cohomology_dims, stanley_reisner_ideal,
                        strand_double_ext)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_NOT_FPURE = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4


@dataclass(frozen=True)
class JobSpec:
    """A parsed input file: characteristic plus one ideal source."""

    characteristic: int
    variables: tuple | None
    source_kind: str                      # "ideal" | "facets" | "graph"
    ideal_generators: tuple = ()
    facets: tuple = ()
    edges: tuple = ()

    def to_text(self) -> str:
        lines = [f"char {self.characteristic}"]
        if self.variables is not None:
            lines.append("vars " + " ".join(self.variables))
        if self.source_kind == "ideal":
            lines.append("ideal:")
            lines.extend(self.ideal_generators)
        elif self.source_kind == "facets":
            lines.append("facets: " + "; ".join(
                " ".join(str(v) for v in f) for f in self.facets))
        else:
            lines.append("graph: " + "; ".join(
                f"{a} {b}" for a, b in self.edges))
        return "\n".join(lines) + "\n"

    def build(self):
        """Returns (ideal, complex-or-None, graph-or-None)."""
        p = self.characteristic
        if self.source_kind == "ideal":
            ring = PolyRing(p, self.variables)
            gens = [ring.parse(g) for g in self.ideal_generators]
            return Ideal(ring, gens), None, None
        if self.source_kind == "facets":
            v = max(max(f) for f in self.facets)
            delta = SimplicialComplex(v, self.facets)
            return stanley_reisner_ideal(delta, p), delta, None
        v = max(max(e) for e in self.edges)
        graph = Graph(v, self.edges)
        return binomial_edge_ideal(graph, p), None, graph


def parse_input(text: str, _check_roundtrip: bool = True) -> JobSpec:
    """Parse the documented input grammar with line-precise diagnostics."""
    characteristic = None
    variables = None
    source_kind = None
    gens: list[str] = []
    facets: list[tuple] = []
    edges: list[tuple] = []
    in_ideal_block = False

    def err(lineno: int, msg: str, col: int = 1):
        raise ParseError(msg, lineno, col)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if in_ideal_block:
            gens.append(line)
            continue
        head, _, rest = line.partition(" ")
        if head == "char":
            if characteristic is not None:
                err(lineno, "duplicate 'char' line")
            try:
                characteristic = int(rest.strip())
            except ValueError:
                err(lineno, f"invalid characteristic {rest.strip()!r}")
            if not is_prime(characteristic):
                err(lineno, f"{characteristic} is not prime")
        elif head == "vars":
            if variables is not None:
                err(lineno, "duplicate 'vars' line")
            variables = tuple(rest.split())
            if not variables:
                err(lineno, "empty variable list")
        elif line.startswith("ideal:"):
            source_kind = "ideal"
            inline = line[len("ideal:"):].strip()
            if inline:
                gens.extend(g.strip() for g in inline.split(";") if g.strip())
            in_ideal_block = True
        elif line.startswith("facets:"):
            source_kind = "facets"
            body = line[len("facets:"):]
            for part in body.split(";"):
                part = part.strip()
                if not part:
                    continue
                try:
                    facets.append(tuple(int(v) for v in part.split()))
                except ValueError:
                    err(lineno, f"invalid facet {part!r}")
            if not facets:
                err(lineno, "no facets given")
        elif line.startswith("graph:"):
            source_kind = "graph"
            body = line[len("graph:"):]
            for part in body.split(";"):
                part = part.strip()
                if not part:
                    continue
                pieces = part.split()
                if len(pieces) != 2:
                    err(lineno, f"an edge needs two vertices, got {part!r}")
                try:
                    edges.append((int(pieces[0]), int(pieces[1])))
                except ValueError:
                    err(lineno, f"invalid edge {part!r}")
            if not edges:
                err(lineno, "no edges given")
        else:
            err(lineno, f"unrecognized directive {head!r}")

    if characteristic is None:
        raise ParseError("missing 'char' line")
    if source_kind is None:
        raise ParseError("missing ideal source ('ideal:', 'facets:' or 'graph:')")
    if source_kind == "ideal":
        if variables is None:
            raise ParseError("'ideal:' input requires a 'vars' line")
        if not gens:
            raise ParseError("'ideal:' block lists no generators")
    else:
        count = (max(max(f) for f in facets) if source_kind == "facets"
                 else max(max(e) for e in edges))
        auto = (tuple(f"x{i}" for i in range(1, count + 1))
                if source_kind == "facets" else
                tuple(f"x{i}" for i in range(1, count + 1))
                + tuple(f"y{i}" for i in range(1, count + 1)))
        if variables is not None and variables != auto:
            raise ParseError(
                "for facets/graph input, 'vars' must be omitted or equal "
                + " ".join(auto))
        variables = None
    spec = JobSpec(characteristic=characteristic, variables=variables,
                   source_kind=source_kind, ideal_generators=tuple(gens),
                   facets=tuple(facets), edges=tuple(edges))
    # round-trip sanity: the canonical text reparses to the same job
    if _check_roundtrip and parse_input(spec.to_text(), _check_roundtrip=False) != spec:
        raise InternalAssertionError("input round-trip failed")
    return spec


# ----------------------------------------------------------------------
# Command execution.

def _base_document(spec: JobSpec, I: Ideal, command: str) -> dict:
    return {
        "schema": "lyutab.result.v1",
        "command": command,
        "char": spec.characteristic,
        "vars": list(I.ring.names),
        "generators": [str(g) for g in I.generators],
        "source": spec.source_kind,
    }


def run(spec: JobSpec, args) -> tuple[int, dict, str]:
    """Execute one command; returns (exit code, document, text rendering)."""
    budget = Budget(args.budget) if args.budget else Budget()
    I, delta, graph = spec.build()
    command = args.command
    doc = _base_document(spec, I, command)
    text_lines: list[str] = []
    exit_code = EXIT_OK

    ledger = CellLedger(args.checkpoint) if getattr(args, "checkpoint", None) else None
    calc = ExtCalculator(I, budget, minimal=not args.no_minimalize)

    def finish_table(T: LyubeznikTable, sd=None):
        checks = standard_checks(T, sd, delta=delta,
                                 assert_cm=args.assert_cm,
                                 assert_equidim=args.assert_equidim)
        doc.update(T.to_document(checks))
        doc["command"] = command
        text_lines.append(T.render_text())
        for r in checks:
            text_lines.append(f"check {r.name}: {r.status}"
                              + (f" ({r.details})" if r.details else ""))
        if args.strict and not checks.all_passed:
            return EXIT_INTERNAL
        return EXIT_OK

    try:
        if command == "fpure":
            verdict = fedder_is_fpure(I, budget)
            doc["fpure"] = verdict
            text_lines.append(f"F-pure (Fedder): {verdict}")

        elif command in ("table", "projective"):
            sd = None
            if args.fast or command == "projective" or args.with_sdim:
                try:
                    sd = sdim(I, args.e_max, budget)
                except NotFPureError:
                    raise
            maker = projective_table if command == "projective" else lyubeznik_table
            T = maker(I, strict=args.strict, fast=args.fast, sdim_result=sd,
                      budget=budget, verify=args.verify, threads=args.threads,
                      ledger=ledger, calculator=calc)
            exit_code = finish_table(T, sd)

        elif command == "sdim":
            res = sdim(I, args.e_max, budget)
            doc["sdim"] = res.value
            doc["certified"] = res.certified
            doc["stabilized_at"] = res.data.stabilized_at
            text_lines.append(
                f"sdim = {res.value} "
                + ("(certified)" if res.certified
                   else f"(UNCERTIFIED: chain open after e_max={args.e_max})"))

        elif command == "splitting-prime":
            data = splitting_prime(I, args.e_max, budget)
            doc["chain"] = [[str(g) for g in J.groebner_basis().elements]
                            for J in data.chain]
            doc["stabilized_at"] = data.stabilized_at
            doc["certified"] = data.certified
            doc["candidate_prime"] = [str(g) for g in
                                      data.candidate_prime.groebner_basis().elements]
            doc["sdim"] = data.sdim
            text_lines.append(f"chain length {len(data.chain)}, "
                              + (f"stabilized at e={data.stabilized_at}"
                                 if data.certified else "UNCERTIFIED"))
            text_lines.append("candidate splitting prime: "
                              + ", ".join(doc["candidate_prime"]) if doc["candidate_prime"]
                              else "candidate splitting prime: (0)")
            text_lines.append(f"sdim = {data.sdim}")

        elif command == "compatible":
            if not args.second:
                raise ParseError("the 'compatible' command needs --second \"g1; g2\"")
            second = Ideal(I.ring, [I.ring.parse(g.strip())
                                    for g in args.second.split(";") if g.strip()])
            res = is_compatible(I, second, args.e_max, budget)
            doc["second"] = [str(g) for g in second.generators]
            doc["compatible"] = res.compatible
            doc["e_checked"] = res.e_checked
            doc["definitive"] = res.definitive
            text_lines.append(
                f"compatible: {res.compatible} "
                + ("(definitive)" if res.definitive
                   else f"(certified up to e = {res.e_checked})"))

        elif command == "ncm":
            if not args.assert_equidim:
                raise ParseError(
                    "the 'ncm' command requires --assert-equidim "
                    "(equidimensionality is not verified internally)")
            J = ncm_ideal(I, assume_equidimensional=True, budget=budget,
                          calculator=calc)
            doc["ncm_generators"] = [str(g) for g in
                                     J.groebner_basis().elements] or ["0"]
            doc["is_unit"] = J.is_unit_ideal()
            text_lines.append("non-CM ideal: "
                              + (", ".join(doc["ncm_generators"])))
            if J.is_unit_ideal():
                text_lines.append("(unit ideal: Cohen-Macaulay locus is everything)")

        elif command == "raw-ext":
            i, j = args.i, args.j
            verdict = fedder_is_fpure(I, budget)
            value = double_ext_degree_zero(I, i, j, calculator=calc)
            doc["i"] = i
            doc["j"] = j
            doc["value"] = value
            doc["fpure"] = verdict
            text_lines.append(f"dim (Ext^(n-{i})(Ext^(n-{j})(S/I,S),S))_0 = {value}")
            if not verdict:
                doc["disclaimer"] = NOT_FPURE_MESSAGE
                text_lines.append(
                    "note: S/I is NOT F-pure; this raw dimension may exceed "
                    "the true Lyubeznik number")

        elif command == "oracle":
            if delta is None:
                raise ParseError("the 'oracle' command needs 'facets:' input")
            comps = connected_components(delta)
            cohom = reduced_cohomology_dims(delta, spec.characteristic)
            d = krull_dimension(I, budget)
            doc["components"] = comps
            doc["reduced_cohomology"] = cohom
            doc["hochster_degree_zero"] = [
                hochster_degree_zero(delta, i, spec.characteristic)
                for i in range(d + 2)]
            mismatches = []
            for jj in range(d + 1):
                for ii in range(d + 1):
                    main = calc.cell(ii, jj)
                    orac = strand_double_ext(I, ii, jj, calc, budget)
                    if main != orac:
                        mismatches.append([ii, jj, main, orac])
            doc["oracle_mismatches"] = mismatches
            doc["oracle_cells_checked"] = (d + 1) ** 2
            text_lines.append(f"components: {comps}")
            text_lines.append(f"reduced cohomology dims (deg -1..): {cohom}")
            text_lines.append(
                f"strand oracle vs main path: {(d + 1) ** 2} cells, "
                + ("all agree" if not mismatches else f"MISMATCHES {mismatches}"))
            if mismatches:
                exit_code = EXIT_INTERNAL

        else:
            raise ParseError(f"unknown command {command!r}")

    except NotFPureError as exc:
        doc["error"] = "NOT_F_PURE"
        doc["message"] = str(exc)
        text_lines.append(f"NOT_F_PURE: {exc}")
        exit_code = EXIT_NOT_FPURE
    except BudgetExceededError as exc:
        doc["error"] = "BUDGET_EXCEEDED"
        doc["message"] = str(exc)
        partial = getattr(exc, "partial_table", None)
        if partial is not None:
            doc.update(partial.to_document(None))
            doc["command"] = command
        text_lines.append(f"BUDGET_EXCEEDED: {exc}")
        exit_code = EXIT_BUDGET

    doc["generated_at"] = datetime.now(timezone.utc).isoformat()
    return exit_code, doc, "\n".join(text_lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lyutab",
        description="Exact Lyubeznik tables and Frobenius-splitting "
                    "diagnostics over prime fields")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="input file (see the grammar in the docs)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", "-o", help="also write the JSON document here")
        p.add_argument("--e-max", dest="e_max", type=int, default=5,
                       help="largest Frobenius level for splitting chains (default 5)")
        p.add_argument("--budget", type=int, default=None,
                       help="S-pair budget (default 10^7)")
        p.add_argument("--strict", action="store_true",
                       help="compute out-of-range cells, fail on failed checks")
        p.add_argument("--fast", action="store_true",
                       help="skip cells that certified sdim-vanishing forces to zero")
        p.add_argument("--no-minimalize", dest="no_minimalize", action="store_true",
                       help="use raw (non-minimal) resolutions; for cross-checks")
        p.add_argument("--verify", action="store_true",
                       help="re-verify GB confluence, resolution exactness and "
                            "the strand oracle on everything computed")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for independent table cells")
        p.add_argument("--assert-cm", dest="assert_cm", action="store_true",
                       help="assert the projective input is Cohen-Macaulay")
        p.add_argument("--assert-equidim", dest="assert_equidim", action="store_true",
                       help="assert the input is equidimensional")
        p.add_argument("--checkpoint", help="resumable per-cell ledger file")
        p.add_argument("--with-sdim", dest="with_sdim", action="store_true",
                       help="also compute sdim and run the vanishing check")
        return p

    common(sub.add_parser("fpure", help="Fedder F-purity verdict"))
    common(sub.add_parser("table", help="Lyubeznik table with checks"))
    common(sub.add_parser("projective", help="projective-mode table with duality checks"))
    common(sub.add_parser("sdim", help="splitting dimension"))
    common(sub.add_parser("splitting-prime", help="splitting-ideal chain and candidate prime"))
    pc = common(sub.add_parser("compatible", help="compatibility of a second ideal"))
    pc.add_argument("--second", help="generators of the candidate ideal, ';'-separated")
    common(sub.add_parser("ncm", help="non-Cohen-Macaulay locus ideal"))
    pr = common(sub.add_parser("raw-ext", help="ungated degree-zero double-Ext dimension"))
    pr.add_argument("i", type=int)
    pr.add_argument("j", type=int)
    common(sub.add_parser("oracle", help="Stanley-Reisner cross-checks"))
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not hasattr(args, "second"):
        args.second = None
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        spec = parse_input(text)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        code, doc, rendered = run(spec, args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InternalAssertionError as exc:
        print(f"internal assertion failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except LyutabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(rendered)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
