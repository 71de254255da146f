"""The seven concrete logic systems and their shared operations.

A system fixes which objects count as theories, which variables an
assignment must cover, and when an assignment satisfies a theory.  Model
checking, model enumeration, existence, and subset-minimality all dispatch
on the system identifier.  Assignments are always over a declared domain:
the occurring variables for formula theories, the declared range for clause
lists, the free variables for quantified theories, and the declared universe
for programs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Callable, Iterator, Union

from . import asp as asp_mod
from . import limits
from .clausify import clausify
from .errors import DomainMismatch, MalformedTheory, ResourceLimit
from .formula import (
    And,
    Atom,
    Clause,
    CnfFormula,
    Formula,
    EpfFormula,
    Implies,
    Interpretation,
    Literal,
    Matrix,
    Not,
    Or,
    Quantifier,
    QuantifiedFormula,
    Var,
    and_all,
    cnf_to_formula,
    collect_vars,
    evaluate,
    evaluate_cnf,
    rename_vars,
    substitute,
)
from .sat import ModelSet, enumerate_models, iter_models, solve

Theory = Union[Formula, CnfFormula, EpfFormula, asp_mod.Program]


class SystemId(Enum):
    PF_SAT = "pf-sat"
    CNF_SAT = "cnf-sat"
    CNF3_SAT = "cnf3-sat"
    EPF_FSAT = "epf-fsat"
    PF_MINSAT = "pf-minsat"
    EPF_FMINSAT = "epf-fminsat"
    LP_ANS = "lp-ans"


class MinimalityStrategy(Enum):
    BRUTE_FORCE = "brute-force"
    SAT_BASED = "sat-based"


@dataclass(frozen=True)
class LogicSystem:
    """Theory admission, assignment format, and expected assignment size."""

    id: SystemId
    theory_check: Callable[[Theory], bool]
    interp_domain: Callable[[Theory], frozenset[Var]]

    def model_size(self, t: Theory) -> int:
        """Length every satisfying assignment of t must have."""
        return len(self.interp_domain(t))


def _is_pf(t: Theory) -> bool:
    return isinstance(t, Formula)


def _is_cnf(t: Theory) -> bool:
    return isinstance(t, CnfFormula)


def _is_cnf3(t: Theory) -> bool:
    return isinstance(t, CnfFormula) and all(len(c) <= 3 for c in t.clauses)


def _is_epf(t: Theory) -> bool:
    return isinstance(t, EpfFormula)


def _is_lp(t: Theory) -> bool:
    return isinstance(t, asp_mod.Program)


def _cnf_domain(t: CnfFormula) -> frozenset[Var]:
    return frozenset(Var(i) for i in range(1, t.num_vars + 1))


SYSTEMS: dict[SystemId, LogicSystem] = {
    SystemId.PF_SAT: LogicSystem(SystemId.PF_SAT, _is_pf, collect_vars),
    SystemId.CNF_SAT: LogicSystem(SystemId.CNF_SAT, _is_cnf, _cnf_domain),
    SystemId.CNF3_SAT: LogicSystem(SystemId.CNF3_SAT, _is_cnf3, _cnf_domain),
    SystemId.EPF_FSAT: LogicSystem(SystemId.EPF_FSAT, _is_epf, lambda t: t.free),
    SystemId.PF_MINSAT: LogicSystem(SystemId.PF_MINSAT, _is_pf, collect_vars),
    SystemId.EPF_FMINSAT: LogicSystem(SystemId.EPF_FMINSAT, _is_epf, lambda t: t.free),
    SystemId.LP_ANS: LogicSystem(SystemId.LP_ANS, _is_lp, lambda t: t.universe),
}


def get_system(sys_id: SystemId) -> LogicSystem:
    return SYSTEMS[sys_id]


def require_theory(sys_id: SystemId, t: Theory) -> None:
    if not SYSTEMS[sys_id].theory_check(t):
        raise MalformedTheory(
            f"{type(t).__name__} is not admitted by the {sys_id.value} system"
        )


def _require_domain(sys_id: SystemId, t: Theory, w: Interpretation) -> None:
    expected = SYSTEMS[sys_id].interp_domain(t)
    if w.domain != expected:
        raise DomainMismatch(
            f"assignment over {len(w.domain)} variables; {sys_id.value} expects "
            f"exactly the {len(expected)} domain variables of this theory"
        )


def _epf_extends(t: EpfFormula, w: Interpretation) -> bool:
    """Whether the free-variable assignment extends to the bound variables."""
    remainder = substitute(t, w)
    return solve(clausify(remainder)).satisfiable


def model_check(sys_id: SystemId, t: Theory, w: Interpretation) -> bool:
    """Does the assignment satisfy the theory under this system's relation?"""
    require_theory(sys_id, t)
    _require_domain(sys_id, t, w)
    if sys_id is SystemId.PF_SAT:
        return evaluate(t, w)
    if sys_id in (SystemId.CNF_SAT, SystemId.CNF3_SAT):
        return evaluate_cnf(t, w)
    if sys_id is SystemId.EPF_FSAT:
        return _epf_extends(t, w)
    if sys_id in (SystemId.PF_MINSAT, SystemId.EPF_FMINSAT):
        return is_minimal_model(t, w)
    if sys_id is SystemId.LP_ANS:
        return asp_mod.is_answer_set(t, w.true_atoms)
    raise MalformedTheory(f"unknown system {sys_id}")


def is_minimal_model(
    f: Formula | EpfFormula,
    m: Interpretation,
    strategy: MinimalityStrategy = MinimalityStrategy.SAT_BASED,
    *,
    bruteforce_cap: int = limits.BRUTEFORCE_CAP,
) -> bool:
    """True when m is a model and no proper subset of its true atoms is one.

    The solver-backed strategy forces the variables outside m false, blocks
    m itself with one clause, and reads unsatisfiability as minimality.  The
    subset strategy tries every proper subset and is kept as the slow oracle.
    """
    if isinstance(f, EpfFormula):
        domain = f.free
        is_model = lambda w: _epf_extends(f, w)
        matrix: Matrix = f.matrix
    else:
        domain = collect_vars(f)
        is_model = lambda w: evaluate(f, w)
        matrix = f
    if m.domain != domain:
        raise DomainMismatch(
            "minimality is judged over the theory's own domain variables"
        )
    if not is_model(m):
        return False
    if strategy is MinimalityStrategy.BRUTE_FORCE:
        true_atoms = sorted(m.true_atoms)
        if len(true_atoms) > bruteforce_cap:
            raise ResourceLimit(
                f"{len(true_atoms)} true atoms exceed the subset cap of {bruteforce_cap}"
            )
        for k in range(len(true_atoms)):
            for subset in combinations(true_atoms, k):
                if is_model(Interpretation(domain, subset)):
                    return False
        return True
    cnf = clausify(matrix)
    solver_cnf = _with_restrictions(cnf, domain - m.true_atoms, m.true_atoms)
    return not solve(solver_cnf).satisfiable


def _with_restrictions(
    cnf: CnfFormula, forced_false: frozenset[Var], blocked: frozenset[Var]
) -> CnfFormula:
    clauses = list(cnf.clauses)
    for var in sorted(forced_false):
        clauses.append(Clause([Literal(var, False)]))
    clauses.append(Clause([Literal(v, False) for v in sorted(blocked)]))
    return CnfFormula(clauses, cnf.num_vars)


def membership_value(f: EpfFormula, m: Interpretation, *, prefix_cap: int = limits.QBF_PREFIX_CAP) -> bool:
    """Evaluate the minimal-membership formula at the candidate m."""
    from .formula import replace_with_constants
    from .sat import qbf_eval

    if m.domain != f.free:
        raise DomainMismatch("candidate must assign exactly the free variables")
    q = minimal_membership_formula(f)
    plugged = replace_with_constants(
        q.matrix, {z: (z in m.true_atoms) for z in m.domain}
    )
    return qbf_eval(QuantifiedFormula(q.prefix, plugged), prefix_cap=prefix_cap)


def iter_models_sys(
    sys_id: SystemId, t: Theory, *, cap: int = limits.ENUMERATION_CAP
) -> Iterator[Interpretation]:
    """Models in a fixed order; exactly the assignments model_check accepts."""
    require_theory(sys_id, t)
    domain = SYSTEMS[sys_id].interp_domain(t)
    if sys_id in (SystemId.PF_SAT, SystemId.PF_MINSAT):
        base = clausify(t)
        models = iter_models(base, domain, cap=cap)
        if sys_id is SystemId.PF_SAT:
            yield from models
        else:
            for w in models:
                if is_minimal_model(t, w):
                    yield w
    elif sys_id in (SystemId.CNF_SAT, SystemId.CNF3_SAT):
        yield from iter_models(t, domain, cap=cap)
    elif sys_id in (SystemId.EPF_FSAT, SystemId.EPF_FMINSAT):
        base = clausify(t.matrix)
        models = iter_models(base, domain, cap=cap)
        if sys_id is SystemId.EPF_FSAT:
            yield from models
        else:
            for w in models:
                if is_minimal_model(t, w):
                    yield w
    elif sys_id is SystemId.LP_ANS:
        for atoms in asp_mod.iter_answer_sets(t, cap=cap):
            yield Interpretation(t.universe, atoms)
    else:
        raise MalformedTheory(f"unknown system {sys_id}")


def enumerate_models_sys(
    sys_id: SystemId, t: Theory, *, cap: int = limits.ENUMERATION_CAP
) -> ModelSet:
    domain = SYSTEMS[sys_id].interp_domain(t)
    return ModelSet(domain, frozenset(iter_models_sys(sys_id, t, cap=cap)))


def has_model(sys_id: SystemId, t: Theory, *, cap: int = limits.ENUMERATION_CAP) -> bool:
    """Model existence; the plain-satisfiability systems use a single solve."""
    require_theory(sys_id, t)
    if sys_id is SystemId.PF_SAT:
        return solve(clausify(t)).satisfiable
    if sys_id in (SystemId.CNF_SAT, SystemId.CNF3_SAT):
        return solve(t).satisfiable
    if sys_id is SystemId.EPF_FSAT:
        return solve(clausify(t.matrix)).satisfiable
    for _ in iter_models_sys(sys_id, t, cap=cap):
        return True
    return False


def minimal_membership_formula(f: EpfFormula) -> QuantifiedFormula:
    """A prenex formula over fresh copies whose truth at Z:=M says that M is
    a minimal model of f.

    Shape: the matrix conjoins "some bound assignment satisfies the matrix
    at Z" with "every strictly smaller Z-assignment satisfies it under no
    bound assignment".  The universal copy of the bound block is a fresh
    variable set so the prefix can stay prenex; the two occurrences live in
    disjoint conjuncts, so the renaming is harmless.
    """
    require_theory(SystemId.EPF_FMINSAT, f)
    free_vars = sorted(f.free)
    bound_vars = sorted(f.bound)
    matrix = f.matrix if isinstance(f.matrix, Formula) else cnf_to_formula(f.matrix)

    base = max((v.index for v in collect_vars(f)), default=0)
    shadow: dict[Var, Var] = {}
    next_index = base + 1
    for z in free_vars:
        shadow[z] = Var(next_index, f"{z!r}'")
        next_index += 1
    bound_copy: dict[Var, Var] = {}
    for x in bound_vars:
        bound_copy[x] = Var(next_index, f"{x!r}'")
        next_index += 1

    shadow_matrix = rename_vars(matrix, {**shadow, **bound_copy})
    smaller = and_all([Implies(Atom(shadow[z]), Atom(z)) for z in free_vars])
    back = and_all([Implies(Atom(z), Atom(shadow[z])) for z in free_vars])
    equal = And(smaller, back)
    no_smaller_model = Or(Or(Not(smaller), Not(shadow_matrix)), equal)

    prefix = (
        [(Quantifier.EXISTS, x) for x in bound_vars]
        + [(Quantifier.FORALL, shadow[z]) for z in free_vars]
        + [(Quantifier.FORALL, bound_copy[x]) for x in bound_vars]
    )
    return QuantifiedFormula(prefix, And(matrix, no_smaller_model))
