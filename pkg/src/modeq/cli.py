"""Command-line front end.

Exit codes: 0 for yes/pass, 1 for a semantic no (a failed check, a missing
model, a verification counterexample), 2 for usage, parse, or I/O problems,
and 3 for a refused oversized computation.  All randomness is seeded and the
seed is printed, so identical invocations print identical bytes.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import limits as limits_mod
from .asp import Program
from .errors import ModeqError, ParseError, ResourceLimit
from .formula import CnfFormula, EpfFormula, Formula, Interpretation
from .limits import Limits, load_limits

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        limits = load_limits(args.config)
        return args.handler(args, limits)
    except ResourceLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ModeqError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modeq",
        description="logic-system toolkit: model checking, reductions, and "
        "machine-to-formula compilation",
    )
    parser.add_argument("--config", help="JSON file overriding size caps", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="does the model satisfy the theory?")
    p.add_argument("--system", required=True)
    p.add_argument("--theory", required=True)
    p.add_argument("--model", required=True)
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("enumerate", help="list every model of the theory")
    p.add_argument("--system", required=True)
    p.add_argument("--theory", required=True)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("has-model", help="does the theory have any model?")
    p.add_argument("--system", required=True)
    p.add_argument("--theory", required=True)
    p.set_defaults(handler=_cmd_has_model)

    p = sub.add_parser("reduce", help="apply a named reduction to a theory file")
    p.add_argument("--name", required=True, choices=["tseitin", "cnf3", "dualrail", "pf2epf"])
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--witness-out", default=None)
    p.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("compile-tm", help="compile a machine and theory string")
    p.add_argument("--tm", required=True)
    p.add_argument("--theory", required=True)
    p.add_argument("--mode", choices=["ntm", "dtm"], default="ntm")
    p.add_argument("--output", required=True)
    p.add_argument("--witness-out", default=None)
    p.set_defaults(handler=_cmd_compile_tm)

    p = sub.add_parser("gadget", help="emit one of the clause-indicator gadgets")
    p.add_argument(
        "kind",
        choices=["psi-upper", "psi-lower", "encode-upper", "encode-lower", "sat-unsat"],
    )
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--input", default=None, help="clause set for the encode gadgets")
    p.add_argument("--phi", default=None, help="first formula for sat-unsat")
    p.add_argument("--psi", default=None, help="second formula for sat-unsat")
    p.add_argument("--output", required=True)
    p.set_defaults(handler=_cmd_gadget)

    p = sub.add_parser("verify", help="check a reduction's witness bijection")
    p.add_argument("--reduction", required=True, help="name or tm:<machine file>")
    p.add_argument("--corpus", required=True, help="directory or random:N:seed")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("qbf-eval", help="evaluate a closed prenex formula file")
    p.add_argument("--input", required=True)
    p.set_defaults(handler=_cmd_qbf_eval)

    p = sub.add_parser("suite", help="run one verification suite")
    p.add_argument("name")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mutate", action="store_true", help="inject the planted fault")
    p.set_defaults(handler=_cmd_suite)
    return parser


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _system(token: str):
    from .systems import SystemId

    try:
        return SystemId(token)
    except ValueError:
        choices = ", ".join(s.value for s in SystemId)
        raise ValueError(f"unknown system {token!r}; choose from {choices}") from None


def _load_theory(sys_id, path: str):
    from . import formats
    from .systems import SystemId

    text = _read(path)
    if sys_id in (SystemId.PF_SAT, SystemId.PF_MINSAT):
        return formats.parse_pf(text)
    if sys_id in (SystemId.CNF_SAT, SystemId.CNF3_SAT):
        return formats.parse_dimacs(text)
    if sys_id in (SystemId.EPF_FSAT, SystemId.EPF_FMINSAT):
        return formats.parse_eqdimacs(text)
    return formats.parse_lp(text)


def _cmd_check(args, limits: Limits) -> int:
    from . import formats
    from .systems import SYSTEMS, model_check

    sys_id = _system(args.system)
    theory = _load_theory(sys_id, args.theory)
    raw = formats.parse_interp(_read(args.model))
    domain = SYSTEMS[sys_id].interp_domain(theory)
    model = formats.resolve_interp(raw, domain)
    verdict = model_check(sys_id, theory, model)
    print("satisfied" if verdict else "not-satisfied")
    return EXIT_YES if verdict else EXIT_NO


def _cmd_enumerate(args, limits: Limits) -> int:
    from .systems import SYSTEMS, enumerate_models_sys

    sys_id = _system(args.system)
    theory = _load_theory(sys_id, args.theory)
    models = enumerate_models_sys(sys_id, theory, cap=limits.enumeration_cap)
    order = sorted(models.domain)
    print(f"domain {' '.join(repr(v) for v in order)}")
    for model in models:
        print(model.bits(order))
    print(f"count {len(models)}")
    return EXIT_YES


def _cmd_has_model(args, limits: Limits) -> int:
    from .systems import has_model

    sys_id = _system(args.system)
    theory = _load_theory(sys_id, args.theory)
    verdict = has_model(sys_id, theory, cap=limits.enumeration_cap)
    print("model-exists" if verdict else "no-model")
    return EXIT_YES if verdict else EXIT_NO


def _cmd_reduce(args, limits: Limits) -> int:
    from . import formats
    from .reductions import cnf_to_3cnf, dual_rail, pf_to_epf, tseitin

    text = _read(args.input)
    witness_lines: list[str] = [f"c witness map for {args.name}"]
    if args.name == "tseitin":
        result = tseitin(formats.parse_pf(text))
        _write(args.output, formats.serialize_dimacs(result.cnf, [f"tseitin of {args.input}"]))
        for var, idx in sorted(result.target_index.items()):
            witness_lines.append(f"map {var.index} {idx}")
        for aux in result.aux_defs:
            witness_lines.append(f"aux {aux.index} {aux.op} {' '.join(map(str, aux.args))}")
        if result.root is not None:
            witness_lines.append(f"root {result.root}")
    elif args.name == "cnf3":
        result = cnf_to_3cnf(formats.parse_dimacs(text))
        _write(args.output, formats.serialize_dimacs(result.cnf, [f"clause split of {args.input}"]))
        for chain in result.chains:
            lits = " ".join(map(str, chain.source_lits))
            auxes = " ".join(map(str, chain.aux_indices))
            witness_lines.append(f"chain {auxes} : {lits}")
    elif args.name == "pf2epf":
        epf = pf_to_epf(formats.parse_pf(text))
        _write(args.output, formats.serialize_eqdimacs(epf, [f"inclusion of {args.input}"]))
        witness_lines.append("identity")
    else:
        result = dual_rail(formats.parse_eqdimacs(text))
        _write(args.output, formats.serialize_eqdimacs(result.epf, [f"dual rail of {args.input}"]))
        for x, rail in sorted(result.rail_of.items()):
            witness_lines.append(f"rail {x.index} {rail.index}")
    if args.witness_out:
        _write(args.witness_out, "\n".join(witness_lines) + "\n")
    print(f"wrote {args.output}")
    return EXIT_YES


def _cmd_compile_tm(args, limits: Limits) -> int:
    from . import formats
    from .tableau import compile_det, compile_nondet

    machine = formats.parse_tm(_read(args.tm))
    if args.mode == "ntm":
        formula, comp = compile_nondet(machine, args.theory, layout_cap=limits.layout_var_cap)
        layout = comp.layout
        comments = [
            f"table of machine {machine.name} on theory {args.theory}",
            f"n {layout.n} m {layout.m} k0 {layout.k0} size {layout.size}",
        ]
        _write(args.output, formats.serialize_eqdimacs(formula, comments))
    else:
        theory, comp = compile_det(machine, args.theory, layout_cap=limits.layout_var_cap)
        layout = comp.layout
        comments = [
            f"deterministic table of machine {machine.name} on theory {args.theory}",
            f"n {layout.n} m {layout.m} k0 {layout.k0} size {layout.size}",
        ]
        _write(args.output, formats.serialize_dimacs(theory, comments))
    if args.witness_out:
        _write(args.witness_out, formats.serialize_witness_map(comp))
    print(f"wrote {args.output} (grid {comp.layout.size}x{comp.layout.size})")
    return EXIT_YES


def _cmd_gadget(args, limits: Limits) -> int:
    from . import formats
    from .gadgets import build_psi_lower, build_psi_upper, encode_lower, encode_upper
    from .reductions import sat_unsat_gadget

    if args.kind in ("psi-upper", "psi-lower", "encode-upper", "encode-lower"):
        if args.n is None:
            raise ValueError(f"{args.kind} needs --n")
    if args.kind == "psi-upper":
        epf = build_psi_upper(args.n)
        _write(args.output, formats.serialize_eqdimacs(epf, [f"indicator family, n={args.n}"]))
    elif args.kind == "psi-lower":
        _write(args.output, formats.serialize_pf(build_psi_lower(args.n)) + "\n")
    elif args.kind in ("encode-upper", "encode-lower"):
        if args.input is None:
            raise ValueError(f"{args.kind} needs --input")
        phi = formats.parse_dimacs(_read(args.input))
        encoder = encode_upper if args.kind == "encode-upper" else encode_lower
        _write(args.output, formats.serialize_interp(encoder(phi, args.n)))
    else:
        if args.phi is None or args.psi is None:
            raise ValueError("sat-unsat needs --phi and --psi")
        phi = formats.parse_pf(_read(args.phi))
        psi = formats.parse_pf(_read(args.psi))
        gadget, probe = sat_unsat_gadget(phi, psi)
        _write(
            args.output,
            formats.serialize_eqdimacs(gadget, [f"probe variable {probe.index}"]),
        )
        print(f"probe x{probe.index}")
    print(f"wrote {args.output}")
    return EXIT_YES


def _cmd_verify(args, limits: Limits) -> int:
    import os
    import random as random_mod

    from . import formats
    from .harness import Corpus
    from .machines import theory_strings
    from .reductions import ntm_to_epf, standard_reductions, verify_reduction

    token = args.reduction
    if token.startswith("tm:"):
        machine = formats.parse_tm(_read(token[3:]))
        reduction = ntm_to_epf(machine)
        source_kind = "tm"
    else:
        table = standard_reductions()
        if token not in table:
            raise ValueError(f"unknown reduction {token!r}; choose from {sorted(table)} or tm:<file>")
        reduction = table[token]
        source_kind = {"tseitin": "pf", "pf2epf": "pf", "tseitin+cnf3": "pf",
                       "cnf3": "cnf", "dualrail": "epf"}[token]

    entries: list = []
    labels: list[str] = []
    if args.corpus.startswith("random:"):
        parts = args.corpus.split(":")
        if len(parts) != 3:
            raise ValueError("random corpus is random:<count>:<seed>")
        count, seed = int(parts[1]), int(parts[2])
        print(f"corpus random count={count} seed={seed}")
        if source_kind == "tm":
            strings = theory_strings(machine, 2)
            rng = random_mod.Random(seed)
            entries = [rng.choice(strings) for _ in range(count)]
        else:
            entries = list(Corpus.build(source_kind, seed, count).entries)
        labels = [f"{token}[{k}]" for k in range(len(entries))]
    else:
        names = sorted(os.listdir(args.corpus))
        for fname in names:
            path = os.path.join(args.corpus, fname)
            text = _read(path)
            if source_kind == "pf":
                entries.append(formats.parse_pf(text))
            elif source_kind == "cnf":
                entries.append(formats.parse_dimacs(text))
            elif source_kind == "epf":
                entries.append(formats.parse_eqdimacs(text))
            else:
                entries.append(text.strip())
            labels.append(fname)

    all_pass = True
    for theory, label in zip(entries, labels):
        report = verify_reduction(reduction, theory, label=label)
        print(report.line())
        all_pass = all_pass and report.passed
    print("verification " + ("passed" if all_pass else "failed"))
    return EXIT_YES if all_pass else EXIT_NO


def _cmd_qbf_eval(args, limits: Limits) -> int:
    from . import formats
    from .sat import qbf_eval

    q = formats.parse_qdimacs(_read(args.input))
    verdict = qbf_eval(q, prefix_cap=limits.qbf_prefix_cap)
    print("true" if verdict else "false")
    return EXIT_YES if verdict else EXIT_NO


def _cmd_suite(args, limits: Limits) -> int:
    from .harness import run_suite

    report = run_suite(args.name, seed=args.seed, mutate=args.mutate)
    for line in report.lines():
        print(line)
    return EXIT_YES if report.passed else EXIT_NO


if __name__ == "__main__":
    raise SystemExit(main())
