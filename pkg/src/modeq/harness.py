"""Bundled corpora and the suite driver running every end-to-end check.

Each suite compares an engineered path against the semantically simplest
oracle available: truth tables for satisfiability, subset enumeration for
minimality, machine simulation for table theories, and the stable-model
definition for programs.  Disagreement therefore localizes a bug on the
engineered side.  Every suite is deterministic given its seed, and every
suite has a planted mutation mode that must make it fail, guarding against
vacuous passes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

from . import limits
from .asp import (
    Program,
    Rule,
    enumerate_answer_sets,
    reduct,
    satisfies_classically,
)
from .clausify import clausify
from .errors import ModeqError
from .formula import (
    And,
    Atom,
    Clause,
    CnfFormula,
    EpfFormula,
    Formula,
    Implies,
    Interpretation,
    Literal,
    Not,
    Or,
    Quantifier,
    QuantifiedFormula,
    Var,
    and_all,
    collect_vars,
    evaluate,
    evaluate_cnf,
    replace_with_constants,
    rename_vars,
)
from .gadgets import (
    build_psi_lower,
    build_psi_upper,
    clause_pool,
    encode_lower,
    encode_upper,
    pool_size,
)
from .machines import bundled_machines, reject_all_machine, theory_strings
from .ntm import accepted_witnesses, run_deterministic
from .reductions import (
    Reduction,
    dual_rail,
    ntm_to_epf,
    sat_unsat_gadget,
    standard_reductions,
    tseitin,
    verify_reduction,
)
from .sat import DpllSolver, enumerate_models, qbf_eval, solve
from .systems import (
    MinimalityStrategy,
    SystemId,
    is_minimal_model,
    iter_models_sys,
    membership_value,
    minimal_membership_formula,
    model_check,
)
from .tableau import TableMode, compile_det, compile_nondet, model_to_witness, witness_to_model

SUITE_NAMES = ("engines", "reductions", "theorem1", "prop1", "theorem3", "lemma2")

DEFAULT_SEEDS = {
    "engines": 101,
    "reductions": 202,
    "theorem1": 0,
    "prop1": 303,
    "theorem3": 404,
    "lemma2": 505,
}


@dataclass(frozen=True)
class CheckRecord:
    suite: str
    label: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        detail = f" {self.detail}" if self.detail else ""
        return f"{self.suite}|{self.label}|{verdict}{detail}"


@dataclass(frozen=True)
class SuiteReport:
    name: str
    seed: int
    records: tuple[CheckRecord, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def lines(self) -> list[str]:
        out = [r.line() for r in self.records]
        good = sum(1 for r in self.records if r.passed)
        verdict = "PASS" if self.passed else "FAIL"
        out.append(
            f"{self.name}|summary|{verdict} {good}/{len(self.records)} checks, seed={self.seed}"
        )
        return out


def run_suite(name: str, *, seed: int | None = None, mutate: bool = False) -> SuiteReport:
    """Run one named suite; with mutate=True its planted fault is injected
    and the report must come out failing."""
    if name not in SUITE_NAMES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    chosen_seed = DEFAULT_SEEDS[name] if seed is None else seed
    runner: Callable[[int, bool], list[CheckRecord]] = {
        "engines": _suite_engines,
        "reductions": _suite_reductions,
        "theorem1": _suite_theorem1,
        "prop1": _suite_prop1,
        "theorem3": _suite_theorem3,
        "lemma2": _suite_lemma2,
    }[name]
    records = runner(chosen_seed, mutate)
    return SuiteReport(name, chosen_seed, tuple(records))


# ------------------------------------------------------------------ oracles

def truth_table_models(
    theory: Formula | CnfFormula, domain: Iterable[Var]
) -> set[frozenset[Var]]:
    """Every satisfying assignment, by exhausting the domain's assignments."""
    ordered = sorted(set(domain))
    check = evaluate_cnf if isinstance(theory, CnfFormula) else evaluate
    out: set[frozenset[Var]] = set()
    for mask in range(1 << len(ordered)):
        true = frozenset(v for k, v in enumerate(ordered) if mask >> k & 1)
        if check(theory, Interpretation(ordered, true)):
            out.add(true)
    return out


def truth_table_satisfiable(theory: Formula | CnfFormula, domain: Iterable[Var]) -> bool:
    ordered = sorted(set(domain))
    check = evaluate_cnf if isinstance(theory, CnfFormula) else evaluate
    for mask in range(1 << len(ordered)):
        true = frozenset(v for k, v in enumerate(ordered) if mask >> k & 1)
        if check(theory, Interpretation(ordered, true)):
            return True
    return False


def epf_models_bruteforce(f: EpfFormula) -> set[frozenset[Var]]:
    """Free assignments extendable to the bound block, fully enumerated."""
    free = sorted(f.free)
    bound = sorted(f.bound)
    matrix = f.matrix
    check = evaluate_cnf if isinstance(matrix, CnfFormula) else evaluate
    out: set[frozenset[Var]] = set()
    domain = free + bound
    for mask in range(1 << len(free)):
        true_free = frozenset(v for k, v in enumerate(free) if mask >> k & 1)
        for bmask in range(1 << len(bound)):
            true = true_free | {v for k, v in enumerate(bound) if bmask >> k & 1}
            if check(matrix, Interpretation(domain, true)):
                out.add(true_free)
                break
    return out


def minimal_subsets(models: set[frozenset[Var]]) -> set[frozenset[Var]]:
    return {
        m for m in models if not any(other < m for other in models)
    }


def least_model_oracle(positive: Program) -> frozenset[Var]:
    """Intersection of all rule-respecting atom sets of a positive program."""
    atoms = sorted(positive.universe)
    meet: frozenset[Var] | None = None
    for mask in range(1 << len(atoms)):
        candidate = frozenset(a for k, a in enumerate(atoms) if mask >> k & 1)
        if satisfies_classically(positive, candidate):
            meet = candidate if meet is None else meet & candidate
    assert meet is not None  # a positive program always has the all-true set
    return meet


def answer_sets_oracle(p: Program) -> set[frozenset[Var]]:
    """Stable sets per the definition, with the least model taken as the
    intersection of classical models instead of the fixpoint."""
    atoms = sorted(p.universe)
    out: set[frozenset[Var]] = set()
    for mask in range(1 << len(atoms)):
        candidate = frozenset(a for k, a in enumerate(atoms) if mask >> k & 1)
        if candidate == least_model_oracle(reduct(p, candidate)):
            out.add(candidate)
    return out


# ----------------------------------------------------------------- corpora

def random_formula(rng: random.Random, pool: Sequence[Var], depth: int) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        return Atom(rng.choice(list(pool)))
    kind = rng.randrange(4)
    if kind == 0:
        return Not(random_formula(rng, pool, depth - 1))
    left = random_formula(rng, pool, depth - 1)
    right = random_formula(rng, pool, depth - 1)
    return (And, Or, Implies)[kind - 1](left, right)


def random_cnf(
    rng: random.Random, num_vars: int, num_clauses: int, max_width: int
) -> CnfFormula:
    clauses = []
    for _ in range(num_clauses):
        width = rng.randint(1, max_width)
        chosen = rng.sample(range(1, num_vars + 1), min(width, num_vars))
        clauses.append(
            Clause([Literal(Var(i), rng.random() < 0.5) for i in chosen])
        )
    return CnfFormula(clauses, num_vars)


def random_epf(
    rng: random.Random, max_free: int, max_bound: int, depth: int = 3
) -> EpfFormula:
    free_pool = [Var(i) for i in range(1, max_free + 1)]
    bound_pool = [Var(i) for i in range(max_free + 1, max_free + max_bound + 1)]
    matrix = random_formula(rng, free_pool + bound_pool, depth)
    bound = set(bound_pool) & collect_vars(matrix)
    return EpfFormula(bound, matrix)


def random_program(
    rng: random.Random, num_atoms: int, num_rules: int
) -> Program:
    atoms = [Var(i, f"p{i}") for i in range(1, num_atoms + 1)]
    rules = []
    for _ in range(num_rules):
        head = rng.choice(atoms)
        others = [a for a in atoms if a != head]
        rng.shuffle(others)
        pos = frozenset(others[: rng.randint(0, min(2, len(others)))])
        rest = [a for a in others if a not in pos]
        neg = frozenset(rest[: rng.randint(0, min(2, len(rest)))])
        rules.append(Rule(head, pos, neg))
    return Program(rules, atoms)


@dataclass(frozen=True)
class Corpus:
    """A reproducible entry list: same name and seed, same entries."""

    name: str
    seed: int
    entries: tuple

    @classmethod
    def build(cls, name: str, seed: int, count: int) -> "Corpus":
        rng = random.Random(seed)
        kind = name.split(":")[0]
        if kind == "pf":
            entries = tuple(
                random_formula(rng, [Var(i) for i in range(1, 7)], 4)
                for _ in range(count)
            )
        elif kind == "cnf":
            entries = tuple(
                random_cnf(rng, rng.randint(2, 6), rng.randint(1, 6), 6)
                for _ in range(count)
            )
        elif kind == "epf":
            entries = tuple(random_epf(rng, 4, 2) for _ in range(count))
        elif kind == "lp":
            entries = tuple(
                random_program(rng, rng.randint(2, 5), rng.randint(1, 6))
                for _ in range(count)
            )
        else:
            raise ValueError(f"unknown corpus kind {kind!r}")
        return cls(name, seed, entries)


# ------------------------------------------------------------------ engines

_FIXED_POOL_SPEC = (
    (1,),
    (-2,),
    (1, 2),
    (-1, 3),
    (2, -3),
    (3, 4),
    (-1, -4),
    (1, -2, 3),
    (-2, -3, 4),
    (2, 3, -4),
)


def _fixed_pool() -> list[Clause]:
    return [
        Clause([Literal(Var(abs(i)), i > 0) for i in ints]) for ints in _FIXED_POOL_SPEC
    ]


def _suite_engines(seed: int, mutate: bool) -> list[CheckRecord]:
    rng = random.Random(seed)
    records: list[CheckRecord] = []
    domain4 = [Var(i) for i in range(1, 5)]

    def solver_status(cnf: CnfFormula) -> bool:
        if mutate and len(cnf.clauses) > 1:
            cnf = CnfFormula(cnf.clauses[:-1], cnf.num_vars)  # planted fault
        return solve(cnf).satisfiable

    pool = _fixed_pool()
    checked = 0
    bad = ""
    for k in range(0, 7):
        for subset in combinations(range(len(pool)), k):
            cnf = CnfFormula([pool[i] for i in subset], 4)
            expected = truth_table_satisfiable(cnf, domain4)
            if solver_status(cnf) != expected:
                bad = bad or f"clause subset {subset}"
            checked += 1
    records.append(
        CheckRecord(
            "engines",
            "solve-vs-truth-table-exhaustive",
            not bad,
            bad or f"{checked} clause-pool formulas",
        )
    )

    bad = ""
    for case in range(1000):
        nv = rng.randint(1, 8)
        cnf = random_cnf(rng, nv, rng.randint(1, 2 * nv), 4)
        expected = truth_table_satisfiable(cnf, [Var(i) for i in range(1, nv + 1)])
        if solver_status(cnf) != expected:
            bad = bad or f"random case {case}"
    records.append(
        CheckRecord("engines", "solve-vs-truth-table-random", not bad, bad or "1000 formulas")
    )

    bad = ""
    cases = 0
    while cases < 500:
        f = random_formula(rng, [Var(i) for i in range(1, rng.randint(3, 9))], 3)
        domain = sorted(collect_vars(f))
        models = truth_table_models(f, domain)
        candidates = sorted(models, key=lambda s: sorted(v.index for v in s))[:3]
        mask = rng.randrange(1 << len(domain))
        candidates.append(
            frozenset(v for k2, v in enumerate(domain) if mask >> k2 & 1)
        )
        for true_set in candidates:
            m = Interpretation(domain, true_set)
            slow = is_minimal_model(f, m, MinimalityStrategy.BRUTE_FORCE)
            fast = is_minimal_model(f, m, MinimalityStrategy.SAT_BASED)
            if slow != fast:
                bad = bad or f"strategies disagree on {f!r} at {m!r}"
            cases += 1
    records.append(
        CheckRecord("engines", "minimality-strategies-agree", not bad, bad or f"{cases} cases")
    )

    bad = ""
    incomparable_bad = ""
    classical_bad = ""
    for case in range(300):
        program = random_program(rng, rng.randint(2, 5), rng.randint(1, 6))
        got = {m.true_atoms for m in enumerate_answer_sets(program)}
        expected = answer_sets_oracle(program)
        if got != expected:
            bad = bad or f"program case {case}"
        for a in got:
            for b in got:
                if a != b and a <= b:
                    incomparable_bad = incomparable_bad or f"case {case}"
            if not satisfies_classically(program, a):
                classical_bad = classical_bad or f"case {case}"
    records.append(
        CheckRecord("engines", "answer-sets-vs-definition-oracle", not bad, bad or "300 programs")
    )
    records.append(
        CheckRecord(
            "engines", "answer-sets-incomparable", not incomparable_bad, incomparable_bad
        )
    )
    records.append(
        CheckRecord(
            "engines", "answer-sets-classical-models", not classical_bad, classical_bad
        )
    )
    return records


# --------------------------------------------------------------- reductions

def _suite_reductions(seed: int, mutate: bool) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    table = standard_reductions()
    if mutate:
        honest = table["tseitin"]

        def broken_witness(t, result, w):
            image = result.model_map(w)
            if result.aux_defs:
                flip = Var(result.aux_defs[0].index)
                true = set(image.true_atoms) ^ {flip}
                return Interpretation(image.domain, true)
            return image

        table["tseitin"] = honest.with_witness("tseitin", broken_witness)

    plans = [
        ("tseitin", "pf", 500),
        ("cnf3", "cnf", 500),
        ("pf2epf", "pf", 500),
        ("tseitin+cnf3", "pf", 500),
    ]
    for name, kind, count in plans:
        corpus = Corpus.build(kind, seed + hash(name) % 1000, count)
        failures = 0
        first = ""
        for k, theory in enumerate(corpus.entries):
            report = verify_reduction(table[name], theory, label=f"{name}[{k}]")
            if not report.passed:
                failures += 1
                first = first or report.line()
        records.append(
            CheckRecord(
                "reductions",
                f"bijection-{name}",
                failures == 0,
                first or f"{count} theories",
            )
        )

    # every source model extends to exactly one clause-form model
    rng = random.Random(seed + 7)
    bad = ""
    for case in range(50):
        f = random_formula(rng, [Var(i) for i in range(1, 5)], 3)
        result = tseitin(f)
        for w in iter_models_sys(SystemId.PF_SAT, f):
            mapped = {result.target_index[v]: (v in w.true_atoms) for v in w.domain}
            assumptions = Interpretation.from_pairs(
                {Var(i): b for i, b in mapped.items()}
            )
            under = enumerate_models(
                result.cnf,
                [Var(i) for i in range(1, result.cnf.num_vars + 1)],
                cap=max(limits.ENUMERATION_CAP, result.cnf.num_vars),
                assumptions=assumptions,
            )
            if len(under) != 1:
                bad = bad or f"case {case}: {len(under)} extensions"
    records.append(
        CheckRecord("reductions", "tseitin-definitions-determined", not bad, bad or "50 formulas")
    )
    return records


# ----------------------------------------------------------------- theorem1

def _theorem1_theories(name: str) -> list[str]:
    machines = bundled_machines()
    m = machines[name]
    if name == "delta-check":
        return theory_strings(m, 3)
    return theory_strings(m, 2)


def _forbid_first_window(comp, theory_clauses: CnfFormula) -> CnfFormula:
    """Planted fault: forbid one genuinely legal window of a real run."""
    from .tableau import _row_symbols

    layout = comp.layout
    machine = layout.machine
    witnesses = accepted_witnesses(machine, layout.theory)
    if not witnesses or not machine.deterministic:
        return theory_clauses
    trace = run_deterministic(machine, layout.theory, witnesses[0], layout.size - 1)
    rows = [_row_symbols(c, layout.size, machine.blank) for c in trace]
    bad = Clause(
        [layout.literal(1, col, rows[0][col - 1], False) for col in (1, 2, 3)]
        + [layout.literal(2, col, rows[1][col - 1], False) for col in (1, 2, 3)]
    )
    return CnfFormula(theory_clauses.clauses + (bad,), theory_clauses.num_vars)


def _suite_theorem1(seed: int, mutate: bool) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    machines = bundled_machines()
    for name in sorted(machines):
        machine = machines[name]
        for t in _theorem1_theories(name):
            label = f"{name}|t={t}"
            formula, comp = compile_nondet(machine, t)
            matrix = formula.matrix
            if mutate:
                matrix = _forbid_first_window(comp, matrix)
                formula = EpfFormula(formula.bound, matrix)

            simulator_set = accepted_witnesses(machine, t)
            free = sorted(formula.free)
            table_models = list(
                iter_models_sys(
                    SystemId.EPF_FSAT,
                    formula,
                    cap=max(limits.ENUMERATION_CAP, len(free)),
                )
            )

            problems: list[str] = []
            images = []
            for w in simulator_set:
                try:
                    images.append(witness_to_model(comp, w))
                except ModeqError as exc:
                    problems.append(f"witness map failed on {w!r}: {exc}")
            if len(set(images)) != len(images):
                problems.append("witness map is not injective")
            model_set = set(table_models)
            for w, image in zip(simulator_set, images):
                if image not in model_set:
                    problems.append(f"image of {w!r} is not a table model")
                    break
            if len(table_models) != len(simulator_set):
                problems.append(
                    f"{len(simulator_set)} accepted vs {len(table_models)} table models"
                )
            witness_set = {model_to_witness(comp, model) for model in table_models}
            if witness_set != set(simulator_set):
                problems.append("witness sets differ")

            layout = comp.layout
            nsym = len(layout.symbols)
            if layout.var_count != layout.size**2 * nsym:
                problems.append("variable count formula violated")
            if len(comp.cell_part.clauses) != layout.size**2 * (
                1 + nsym * (nsym - 1) // 2
            ):
                problems.append("cell clause count formula violated")
            if (
                len(comp.accept_part.clauses) != 1
                or len(comp.accept_part.clauses[0]) != layout.size**2
            ):
                problems.append("accept clause shape violated")

            records.append(
                CheckRecord(
                    "theorem1",
                    label,
                    not problems,
                    problems[0] if problems else f"|Mod|={len(simulator_set)}",
                )
            )

    # a machine with no moves: both sides empty; also exercises the packaged
    # reduction object end to end
    dead = reject_all_machine()
    report = verify_reduction(ntm_to_epf(dead), "a", label="reject-all|t=a")
    records.append(
        CheckRecord(
            "theorem1",
            "reject-all|t=a",
            report.passed and report.source_count == 0,
            report.line(),
        )
    )
    small = bundled_machines()["parity"]
    report = verify_reduction(ntm_to_epf(small), "a", label="parity-reduction|t=a")
    records.append(
        CheckRecord("theorem1", "parity-reduction|t=a", report.passed, report.line())
    )

    records.extend(_deterministic_table_records(mutate))
    return records


def _deterministic_table_records(mutate: bool) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    machine = bundled_machines()["eq"]
    for t in theory_strings(machine, 2):
        label = f"eq-det|t={t}"
        theory, comp = compile_det(machine, t)
        if mutate:
            layout = comp.layout
            witnesses = accepted_witnesses(machine, t)
            if witnesses:
                trace = run_deterministic(machine, t, witnesses[0], layout.size - 1)
                from .tableau import _row_symbols

                rows = [_row_symbols(c, layout.size, machine.blank) for c in trace]
                bad = Clause(
                    [layout.literal(1, col, rows[0][col - 1], False) for col in (1, 2, 3)]
                    + [layout.literal(2, col, rows[1][col - 1], False) for col in (1, 2, 3)]
                )
                theory = CnfFormula(theory.clauses + (bad,), theory.num_vars)
        accepted = accepted_witnesses(machine, t)
        ok = True
        detail = f"{len(accepted)} accepted"
        full_domain = comp.layout.all_vars()
        for w in accepted:
            table_model = witness_to_model(comp, w)
            if not evaluate_cnf(theory, table_model):
                ok = False
                detail = f"run table of {w!r} is not a model"
                break
        if ok:
            models = enumerate_models(
                theory, full_domain, cap=max(limits.ENUMERATION_CAP, len(full_domain))
            )
            arising = {model_to_witness(comp, model) for model in models}
            if arising != set(accepted) or len(models) != len(accepted):
                ok = False
                detail = "full-table models do not match accepted witnesses"
        if ok:
            row1 = set(comp.layout.row_vars(1))
            for w in accepted:
                restriction = witness_to_model(comp, w).restrict(row1)
                under = enumerate_models(
                    theory,
                    full_domain,
                    cap=max(limits.ENUMERATION_CAP, len(full_domain)),
                    assumptions=restriction,
                )
                if len(under) != 1:
                    ok = False
                    detail = f"row-one restriction of {w!r} extends to {len(under)} tables"
                    break
        records.append(CheckRecord("theorem1", label, ok, detail))
    return records


# -------------------------------------------------------------------- prop1

def _membership_value_mutated(f: EpfFormula, m: Interpretation) -> bool:
    """Planted fault: the 'equal' escape of the smaller-model guard is gone."""
    from .formula import Or as _Or

    free_vars = sorted(f.free)
    bound_vars = sorted(f.bound)
    matrix = f.matrix if isinstance(f.matrix, Formula) else None
    assert matrix is not None
    base = max((v.index for v in collect_vars(f)), default=0)
    shadow = {z: Var(base + k) for k, z in enumerate(free_vars, start=1)}
    bound_copy = {
        x: Var(base + len(free_vars) + k) for k, x in enumerate(bound_vars, start=1)
    }
    shadow_matrix = rename_vars(matrix, {**shadow, **bound_copy})
    smaller = and_all([Implies(Atom(shadow[z]), Atom(z)) for z in free_vars])
    guard = _Or(Not(smaller), Not(shadow_matrix))  # missing the equality escape
    prefix = (
        [(Quantifier.EXISTS, x) for x in bound_vars]
        + [(Quantifier.FORALL, shadow[z]) for z in free_vars]
        + [(Quantifier.FORALL, bound_copy[x]) for x in bound_vars]
    )
    q = QuantifiedFormula(prefix, And(matrix, guard))
    plugged = replace_with_constants(q.matrix, {z: (z in m.true_atoms) for z in m.domain})
    return qbf_eval(QuantifiedFormula(q.prefix, plugged))


def _suite_prop1(seed: int, mutate: bool) -> list[CheckRecord]:
    rng = random.Random(seed)
    records: list[CheckRecord] = []

    bad = ""
    checked = 0
    for case in range(200):
        f = random_epf(rng, 3, 2)
        free = sorted(f.free)
        for mask in range(1 << len(free)):
            m = Interpretation(free, [v for k, v in enumerate(free) if mask >> k & 1])
            via_formula = (
                _membership_value_mutated(f, m) if mutate else membership_value(f, m)
            )
            direct = model_check(SystemId.EPF_FMINSAT, f, m)
            if via_formula != direct:
                bad = bad or f"case {case}, candidate {m.bits()}"
            checked += 1
    records.append(
        CheckRecord(
            "prop1", "membership-formula-vs-direct", not bad, bad or f"{checked} candidates"
        )
    )

    bad = ""
    for case in range(200):
        nphi = rng.randint(1, 4)
        npsi = rng.randint(1, 4)
        phi = random_formula(rng, [Var(i) for i in range(1, nphi + 1)], 3)
        psi = random_formula(rng, [Var(i) for i in range(1, npsi + 1)], 3)
        gadget, probe = sat_unsat_gadget(phi, psi)
        probe_on = Interpretation([probe], [probe])
        got = model_check(SystemId.EPF_FMINSAT, gadget, probe_on)
        expected = truth_table_satisfiable(phi, collect_vars(phi)) and not (
            truth_table_satisfiable(psi, collect_vars(psi))
        )
        if got != expected:
            bad = bad or f"pair case {case}"
    records.append(
        CheckRecord("prop1", "sat-unsat-gadget-vs-truth-table", not bad, bad or "200 pairs")
    )
    return records


# ----------------------------------------------------------------- theorem3

def _suite_theorem3(seed: int, mutate: bool) -> list[CheckRecord]:
    rng = random.Random(seed)
    records: list[CheckRecord] = []

    for n in range(3, 7):
        got = len(clause_pool(n))
        records.append(
            CheckRecord(
                "theorem3",
                f"pool-size-n{n}",
                got == pool_size(n),
                f"{got} clauses",
            )
        )

    def encode_upper_maybe_mutated(phi: CnfFormula, n: int) -> Interpretation:
        m = encode_upper(phi, n)
        if mutate and m.true_atoms:
            dropped = sorted(m.true_atoms)[0]
            return Interpretation(m.domain, m.true_atoms - {dropped})
        return m

    def upper_check(phi: CnfFormula, n: int, theory: EpfFormula) -> bool:
        m = encode_upper_maybe_mutated(phi, n)
        sat = truth_table_satisfiable(phi, [Var(i) for i in range(1, n + 1)])
        return model_check(SystemId.EPF_FSAT, theory, m) == sat

    def lower_check(phi: CnfFormula, n: int, theory: Formula) -> bool:
        m = encode_lower(phi, n)
        unsat = not truth_table_satisfiable(phi, [Var(i) for i in range(1, n + 1)])
        return (
            is_minimal_model(theory, m, MinimalityStrategy.SAT_BASED) == unsat
        )

    pool3 = clause_pool(3)
    upper3 = build_psi_upper(3)
    lower3 = build_psi_lower(3)
    bad_upper = ""
    bad_lower = ""
    checked = 0
    for k in range(0, 5):
        for subset in combinations(range(len(pool3)), k):
            phi = CnfFormula([pool3[i] for i in subset], 3)
            if not upper_check(phi, 3, upper3):
                bad_upper = bad_upper or f"subset {subset}"
            if not lower_check(phi, 3, lower3):
                bad_lower = bad_lower or f"subset {subset}"
            checked += 1
    records.append(
        CheckRecord(
            "theorem3", "upper-exhaustive-n3", not bad_upper, bad_upper or f"{checked} clause sets"
        )
    )
    records.append(
        CheckRecord(
            "theorem3", "lower-exhaustive-n3", not bad_lower, bad_lower or f"{checked} clause sets"
        )
    )

    pool4 = clause_pool(4)
    upper4 = build_psi_upper(4)
    lower4 = build_psi_lower(4)
    bad_upper = ""
    bad_lower = ""
    for case in range(200):
        count = rng.randint(0, 10)
        phi = CnfFormula(rng.sample(pool4, count), 4)
        if not upper_check(phi, 4, upper4):
            bad_upper = bad_upper or f"case {case}"
        if not lower_check(phi, 4, lower4):
            bad_lower = bad_lower or f"case {case}"
    records.append(
        CheckRecord("theorem3", "upper-random-n4", not bad_upper, bad_upper or "200 clause sets")
    )
    records.append(
        CheckRecord("theorem3", "lower-random-n4", not bad_lower, bad_lower or "200 clause sets")
    )

    from .formats import parse_eqdimacs, serialize_eqdimacs

    reparsed = parse_eqdimacs(serialize_eqdimacs(upper3))
    records.append(
        CheckRecord(
            "theorem3",
            "canonical-order-stable",
            reparsed == EpfFormula(upper3.bound, upper3.matrix),
            "serialize/parse reproduces the numbering",
        )
    )
    return records


# ------------------------------------------------------------------- lemma2

def _suite_lemma2(seed: int, mutate: bool) -> list[CheckRecord]:
    rng = random.Random(seed)
    records: list[CheckRecord] = []

    def transform(f: EpfFormula):
        result = dual_rail(f)
        if mutate:
            epf = result.epf
            assert isinstance(epf.matrix, Formula)
            # drop one rail disjunction: And(left, And(or1, or2)) -> keep or2 only
            broken = And(epf.matrix.left, epf.matrix.right.right)
            return EpfFormula(epf.bound, broken), result
        return result.epf, result

    r = Reduction(
        name="dualrail",
        source=SystemId.EPF_FSAT,
        target=SystemId.EPF_FMINSAT,
        transform=transform,
        witness=lambda _t, result, w: result.model_map(w),
        source_models=lambda t: list(iter_models_sys(SystemId.EPF_FSAT, t)),
        target_models=lambda t: list(iter_models_sys(SystemId.EPF_FMINSAT, t)),
    )

    failures = 0
    first = ""
    rail_bad = ""
    if mutate:
        entries = [EpfFormula((), Not(Atom(Var(1))))]
    else:
        entries = [random_epf(rng, 4, 2) for _ in range(300)]
    for k, f in enumerate(entries):
        report = verify_reduction(r, f, label=f"dualrail[{k}]")
        if not report.passed:
            failures += 1
            first = first or report.line()
        result = dual_rail(f)
        for model in iter_models_sys(SystemId.EPF_FMINSAT, result.epf):
            for x, rail in result.rail_of.items():
                if (x in model.true_atoms) == (rail in model.true_atoms):
                    rail_bad = rail_bad or f"entry {k}: pair {x!r}/{rail!r}"
    records.append(
        CheckRecord(
            "lemma2",
            "dual-rail-bijection",
            failures == 0,
            first or f"{len(entries)} theories",
        )
    )
    records.append(
        CheckRecord("lemma2", "images-pick-one-rail", not rail_bad, rail_bad or "all models")
    )
    return records
