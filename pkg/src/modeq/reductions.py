"""Theory-to-theory reductions whose witness maps are verified bijections.

A reduction packages a theory transformation f together with a per-theory
witness map g; the contract that g restricted to the source model set is a
bijection onto the target model set is never assumed, it is checked by
enumerating both sides.  Definition variables introduced by the clause-form
translations are given full biconditional definitions exactly so they are
functionally determined and the witness maps stay bijective.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from . import limits
from .formula import (
    And,
    Atom,
    Clause,
    CnfFormula,
    Const,
    EpfFormula,
    Formula,
    Implies,
    Interpretation,
    Literal,
    Not,
    Or,
    Var,
    collect_vars,
    fold_constants,
    rename_vars,
    walk_postorder,
)
from .ntm import NtmSpec, accepted_witnesses
from .systems import SystemId, iter_models_sys
from .tableau import TableauCompilation, compile_nondet, witness_to_model


class Reduction:
    """A named (f, g) pair with enumerators for both model sets."""

    def __init__(
        self,
        name: str,
        source: object,
        target: object,
        transform: Callable[[object], tuple[object, object]],
        witness: Callable[[object, object, object], object],
        source_models: Callable[[object], list],
        target_models: Callable[[object], list],
    ):
        self.name = name
        self.source = source
        self.target = target
        self._transform = transform
        self._witness = witness
        self._source_models = source_models
        self._target_models = target_models
        self._cache: dict[int, tuple[object, object, object]] = {}

    def _result(self, t: object) -> tuple[object, object, object]:
        hit = self._cache.get(id(t))
        if hit is not None and hit[0] is t:
            return hit
        target_theory, ctx = self._transform(t)
        entry = (t, target_theory, ctx)
        self._cache[id(t)] = entry
        return entry

    def f(self, t: object) -> object:
        return self._result(t)[1]

    def g(self, t: object, w: object) -> object:
        _, _, ctx = self._result(t)
        return self._witness(t, ctx, w)

    def source_models(self, t: object) -> list:
        return self._source_models(t)

    def target_models(self, target_theory: object) -> list:
        return self._target_models(target_theory)

    def with_witness(self, name: str, witness) -> "Reduction":
        """Same transformation with a replacement witness map (test hook)."""
        return Reduction(
            name,
            self.source,
            self.target,
            self._transform,
            witness,
            self._source_models,
            self._target_models,
        )

    def compose(self, other: "Reduction", name: str | None = None) -> "Reduction":
        """First this reduction, then the other; witness maps compose."""

        def transform(t):
            mid = self.f(t)
            return other.f(mid), mid

        def witness(t, mid, w):
            return other.g(mid, self.g(t, w))

        return Reduction(
            name or f"{self.name}+{other.name}",
            self.source,
            other.target,
            transform,
            witness,
            self._source_models,
            other._target_models,
        )

    def __repr__(self) -> str:
        return f"Reduction({self.name}: {self.source} -> {self.target})"


@dataclass(frozen=True)
class VerificationReport:
    theory_label: str
    source_count: int
    target_count: int
    g_total: bool
    g_injective: bool
    g_onto: bool
    counterexample: tuple[object, str] | None = None

    @property
    def passed(self) -> bool:
        return (
            self.g_total
            and self.g_injective
            and self.g_onto
            and self.source_count == self.target_count
        )

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = ""
        if self.counterexample is not None:
            extra = f" counterexample: {self.counterexample[1]}"
        return (
            f"{verdict} {self.theory_label}: |source|={self.source_count} "
            f"|target|={self.target_count} total={self.g_total} "
            f"injective={self.g_injective} onto={self.g_onto}{extra}"
        )


def verify_reduction(r: Reduction, t: object, label: str | None = None) -> VerificationReport:
    """Enumerate both model sets and check that g restricts to a bijection."""
    theory_label = label if label is not None else f"{r.name}:{t!r}"[:80]
    source = r.source_models(t)
    target_theory = r.f(t)
    target = r.target_models(target_theory)
    target_set = set(target)

    images: list = []
    for w in source:
        try:
            images.append(r.g(t, w))
        except Exception as exc:  # noqa: BLE001 - reported, not swallowed
            return VerificationReport(
                theory_label, len(source), len(target), False, True, True,
                (w, f"witness map failed: {exc}"),
            )

    g_injective = True
    g_onto = True
    counterexample = None
    seen: set = set()
    for w, img in zip(source, images):
        if img in seen:
            g_injective = False
            if counterexample is None:
                counterexample = (w, "two source models share an image")
            break
        seen.add(img)
        if img not in target_set:
            g_onto = False
            if counterexample is None:
                counterexample = (w, "image is not a target model")
            break
    if g_onto and g_injective:
        uncovered = target_set - seen
        if uncovered:
            g_onto = False
            counterexample = (next(iter(uncovered)), "target model with no preimage")
    return VerificationReport(
        theory_label, len(source), len(target), True, g_injective, g_onto, counterexample
    )


# ---------------------------------------------------------------- tseitin

@dataclass(frozen=True)
class AuxDef:
    """index <-> op(args), args as signed target-variable numbers."""

    index: int
    op: str  # "and" | "or"
    args: tuple[int, ...]

    def value(self, assignment: dict[int, bool]) -> bool:
        vals = [assignment[abs(a)] == (a > 0) for a in self.args]
        return all(vals) if self.op == "and" else any(vals)


@dataclass(frozen=True)
class TseitinResult:
    cnf: CnfFormula
    source_vars: tuple[Var, ...]
    target_index: dict[Var, int]
    aux_defs: tuple[AuxDef, ...]
    root: int | None  # signed literal asserted at the root; None when folded away

    def model_map(self, v: Interpretation) -> Interpretation:
        assignment = {self.target_index[var]: (var in v.true_atoms) for var in v.domain}
        for aux in self.aux_defs:
            assignment[aux.index] = aux.value(assignment)
        domain = [Var(i) for i in range(1, self.cnf.num_vars + 1)]
        return Interpretation(domain, [d for d in domain if assignment.get(d.index, False)])


def tseitin(f: Formula) -> TseitinResult:
    """Clause form with one defined variable per connective subtree.

    Source variables are renumbered densely (sorted by index) so the target
    clause set speaks about 1..num_vars with no gaps; negations fold into
    literals; a unit clause asserts the root.  Every new variable carries a
    full biconditional definition, so the accompanying model map is a
    bijection between the two model sets.
    """
    source_vars = tuple(sorted(collect_vars(f)))
    target_index = {v: k for k, v in enumerate(source_vars, start=1)}
    folded = fold_constants(f)
    aux_defs: list[AuxDef] = []
    clauses: list[Clause] = []
    next_index = len(source_vars)

    if isinstance(folded, Const):
        if folded.value:
            return TseitinResult(
                CnfFormula((), len(source_vars)), source_vars, target_index, (), None
            )
        return TseitinResult(
            CnfFormula((Clause(()),), len(source_vars)),
            source_vars,
            target_index,
            (),
            None,
        )

    def lit_of(signed: int) -> Literal:
        return Literal(Var(abs(signed)), signed > 0)

    def emit(*signed: int) -> None:
        clauses.append(Clause([lit_of(s) for s in signed]))

    labels: dict[int, int] = {}
    for node in walk_postorder(folded):
        if isinstance(node, Atom):
            labels[id(node)] = target_index[node.var]
        elif isinstance(node, Not):
            labels[id(node)] = -labels[id(node.child)]
        elif isinstance(node, Const):
            raise AssertionError("constants survive folding only at the root")
        else:
            a = labels[id(node.left)]
            b = labels[id(node.right)]
            if isinstance(node, Implies):
                a = -a
            next_index += 1
            out = next_index
            if isinstance(node, And):
                aux_defs.append(AuxDef(out, "and", (a, b)))
                emit(-out, a)
                emit(-out, b)
                emit(out, -a, -b)
            else:
                aux_defs.append(AuxDef(out, "or", (a, b)))
                emit(-out, a, b)
                emit(out, -a)
                emit(out, -b)
            labels[id(node)] = out

    root = labels[id(folded)]
    emit(root)
    return TseitinResult(
        CnfFormula(clauses, next_index), source_vars, target_index, tuple(aux_defs), root
    )


# ---------------------------------------------------------- clause splitting

@dataclass(frozen=True)
class SplitChain:
    """One long clause's ladder: aux k defined as (source lit k+2 or aux k+1)."""

    aux_indices: tuple[int, ...]
    source_lits: tuple[int, ...]

    def values(self, assignment: dict[int, bool]) -> dict[int, bool]:
        lits = self.source_lits
        k = len(lits)
        out: dict[int, bool] = {}
        tail = assignment[abs(lits[-1])] == (lits[-1] > 0)
        prev = (assignment[abs(lits[-2])] == (lits[-2] > 0)) or tail
        out[self.aux_indices[-1]] = prev
        for pos in range(len(self.aux_indices) - 2, -1, -1):
            lit = lits[pos + 2]
            prev = (assignment[abs(lit)] == (lit > 0)) or prev
            out[self.aux_indices[pos]] = prev
        return out


@dataclass(frozen=True)
class Cnf3Result:
    cnf: CnfFormula
    source_num_vars: int
    chains: tuple[SplitChain, ...]

    def model_map(self, v: Interpretation) -> Interpretation:
        assignment = {var.index: (var in v.true_atoms) for var in v.domain}
        for chain in self.chains:
            assignment.update(chain.values(assignment))
        domain = [Var(i) for i in range(1, self.cnf.num_vars + 1)]
        return Interpretation(domain, [d for d in domain if assignment.get(d.index, False)])


def cnf_to_3cnf(c: CnfFormula) -> Cnf3Result:
    """Split every clause above three literals with a ladder of defined
    variables: aux_j holds exactly when the suffix disjunction from literal
    j+2 on holds.  Definitions are biconditional, so the model map extends
    each source model uniquely."""
    clauses: list[Clause] = []
    chains: list[SplitChain] = []
    next_index = c.num_vars

    def ints(clause: Clause) -> list[int]:
        return [l.var.index if l.positive else -l.var.index for l in clause]

    def lit_of(signed: int) -> Literal:
        return Literal(Var(abs(signed)), signed > 0)

    def emit(*signed: int) -> None:
        clauses.append(Clause([lit_of(s) for s in signed]))

    for clause in c.clauses:
        if len(clause) <= 3:
            clauses.append(clause)
            continue
        lits = ints(clause)
        k = len(lits)
        aux = list(range(next_index + 1, next_index + k - 2))
        next_index += k - 3
        emit(lits[0], lits[1], aux[0])
        for j in range(0, k - 4):
            emit(-aux[j], lits[j + 2], aux[j + 1])
            emit(aux[j], -lits[j + 2])
            emit(aux[j], -aux[j + 1])
        emit(-aux[-1], lits[k - 2], lits[k - 1])
        emit(aux[-1], -lits[k - 2])
        emit(aux[-1], -lits[k - 1])
        chains.append(SplitChain(tuple(aux), tuple(lits)))
    return Cnf3Result(CnfFormula(clauses, next_index), c.num_vars, tuple(chains))


# ----------------------------------------------------------- inclusion map

def pf_to_epf(f: Formula) -> EpfFormula:
    """A formula as a quantifier-free existential theory; models coincide."""
    return EpfFormula((), f)


# ------------------------------------------------------------- twin rails

@dataclass(frozen=True)
class DualRailResult:
    epf: EpfFormula
    rail_of: dict[Var, Var]

    def model_map(self, m: Interpretation) -> Interpretation:
        extra = [rail for x, rail in self.rail_of.items() if x not in m.true_atoms]
        domain = set(m.domain) | set(self.rail_of.values())
        return Interpretation(domain, set(m.true_atoms) | set(extra))


def dual_rail(f: EpfFormula) -> DualRailResult:
    """Pair every free variable with a twin standing for its negation.

    The rail constraints make each free model pick exactly one of every
    pair, so the extended models are pairwise incomparable and the models of
    the source reappear exactly as the minimal models of the result.
    """
    free_vars = sorted(f.free)
    base = max((v.index for v in collect_vars(f)), default=0)
    rail_of = {
        x: Var(base + k, f"{x!r}'") for k, x in enumerate(free_vars, start=1)
    }
    if isinstance(f.matrix, CnfFormula):
        clauses = list(f.matrix.clauses)
        for x in free_vars:
            clauses.append(Clause((Literal(x, True), Literal(rail_of[x], True))))
            clauses.append(Clause((Literal(x, False), Literal(rail_of[x], False))))
        matrix: Formula | CnfFormula = CnfFormula(clauses, max(f.matrix.num_vars, base + len(free_vars)))
    else:
        matrix = f.matrix
        for x in free_vars:
            rail = rail_of[x]
            matrix = And(
                matrix,
                And(
                    Or(Atom(x), Atom(rail)),
                    Or(Not(Atom(x)), Not(Atom(rail))),
                ),
            )
    return DualRailResult(EpfFormula(f.bound, matrix), rail_of)


# -------------------------------------------------- satisfiable/unsatisfiable

def sat_unsat_gadget(phi: Formula, psi: Formula) -> tuple[EpfFormula, Var]:
    """One existential theory whose single free variable is a minimal-model
    probe for the pair: the probe's singleton is a minimal model exactly
    when the first formula is satisfiable and the second is not.

    The second formula's variables are renamed apart first; the probe
    variable is fresh beyond both.
    """
    phi_vars = sorted(collect_vars(phi))
    psi_vars = sorted(collect_vars(psi))
    base = max((v.index for v in phi_vars), default=0)
    renaming = {y: Var(base + k, f"{y!r}r") for k, y in enumerate(psi_vars, start=1)}
    psi_apart = rename_vars(psi, renaming)
    probe = Var(base + len(psi_vars) + 1, "z")
    matrix = And(phi, Or(Atom(probe), psi_apart))
    bound = set(phi_vars) | set(renaming.values())
    return EpfFormula(bound, matrix), probe


# ------------------------------------------------------------ table theory

def ntm_to_epf(m: NtmSpec) -> Reduction:
    """The machine's relation as a source system, reduced onto existential
    table theories; witnesses map to first-row assignments."""

    def transform(t: str) -> tuple[EpfFormula, TableauCompilation]:
        formula, comp = compile_nondet(m, t)
        return formula, comp

    def witness(_t: str, comp: TableauCompilation, w: str) -> Interpretation:
        return witness_to_model(comp, w)

    def source_models(t: str) -> list[str]:
        return accepted_witnesses(m, t)

    def target_models(formula: EpfFormula) -> list[Interpretation]:
        cap = max(limits.ENUMERATION_CAP, len(formula.free))
        return list(iter_models_sys(SystemId.EPF_FSAT, formula, cap=cap))

    return Reduction(
        name=f"tm:{m.name}",
        source=f"tm:{m.name}",
        target=SystemId.EPF_FSAT,
        transform=transform,
        witness=witness,
        source_models=source_models,
        target_models=target_models,
    )


# ----------------------------------------------------- packaged reductions

def _pf_models(t: Formula) -> list[Interpretation]:
    return list(iter_models_sys(SystemId.PF_SAT, t))


def _cnf_models(t: CnfFormula) -> list[Interpretation]:
    return list(iter_models_sys(SystemId.CNF_SAT, t))


def _epf_models(t: EpfFormula) -> list[Interpretation]:
    return list(iter_models_sys(SystemId.EPF_FSAT, t))


def _epf_minimal_models(t: EpfFormula) -> list[Interpretation]:
    return list(iter_models_sys(SystemId.EPF_FMINSAT, t))


def tseitin_reduction() -> Reduction:
    return Reduction(
        name="tseitin",
        source=SystemId.PF_SAT,
        target=SystemId.CNF_SAT,
        transform=lambda t: ((result := tseitin(t)).cnf, result),
        witness=lambda _t, result, w: result.model_map(w),
        source_models=_pf_models,
        target_models=_cnf_models,
    )


def cnf3_reduction() -> Reduction:
    return Reduction(
        name="cnf3",
        source=SystemId.CNF_SAT,
        target=SystemId.CNF3_SAT,
        transform=lambda t: ((result := cnf_to_3cnf(t)).cnf, result),
        witness=lambda _t, result, w: result.model_map(w),
        source_models=_cnf_models,
        target_models=_cnf_models,
    )


def pf_to_epf_reduction() -> Reduction:
    return Reduction(
        name="pf2epf",
        source=SystemId.PF_SAT,
        target=SystemId.EPF_FSAT,
        transform=lambda t: (pf_to_epf(t), None),
        witness=lambda _t, _ctx, w: w,
        source_models=_pf_models,
        target_models=_epf_models,
    )


def dual_rail_reduction() -> Reduction:
    return Reduction(
        name="dualrail",
        source=SystemId.EPF_FSAT,
        target=SystemId.EPF_FMINSAT,
        transform=lambda t: ((result := dual_rail(t)).epf, result),
        witness=lambda _t, result, w: result.model_map(w),
        source_models=_epf_models,
        target_models=_epf_minimal_models,
    )


def standard_reductions() -> dict[str, Reduction]:
    table = {
        "tseitin": tseitin_reduction(),
        "cnf3": cnf3_reduction(),
        "pf2epf": pf_to_epf_reduction(),
        "dualrail": dual_rail_reduction(),
    }
    table["tseitin+cnf3"] = table["tseitin"].compose(table["cnf3"], "tseitin+cnf3")
    return table
