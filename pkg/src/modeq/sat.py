"""Decision procedures: a deterministic DPLL solver, model enumeration by
blocking clauses, and quantifier-expansion evaluation of closed formulas.

The solver is deliberately plain: counter-based propagation, chronological
backtracking, branching on the lowest-index unassigned variable with true
tried first.  Two runs on the same input produce the same model and the same
enumeration order, which golden tests depend on.  A solver instance owns
mutable state and must not be shared; inputs and outputs are immutable.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import limits
from .errors import NotClosed, ResourceLimit
from .formula import (
    CnfFormula,
    Interpretation,
    Quantifier,
    QuantifiedFormula,
    Var,
    collect_vars,
    evaluate,
)


@dataclass(frozen=True)
class SolveResult:
    satisfiable: bool
    model: Interpretation | None  # total over 1..num_vars when satisfiable

    def __post_init__(self) -> None:
        if self.satisfiable and self.model is None:
            raise ValueError("a satisfiable result must carry a model")
        if not self.satisfiable and self.model is not None:
            raise ValueError("an unsatisfiable result must not carry a model")


@dataclass(frozen=True)
class ModelSet:
    """A set of assignments over one shared domain."""

    domain: frozenset[Var]
    models: frozenset[Interpretation]

    def __post_init__(self) -> None:
        for m in self.models:
            if m.domain != self.domain:
                raise ValueError("all members must share the set's domain")

    def __len__(self) -> int:
        return len(self.models)

    def __iter__(self) -> Iterator[Interpretation]:
        return iter(sorted(self.models, key=lambda m: m.bits()))

    def __contains__(self, item: object) -> bool:
        return item in self.models


class DpllSolver:
    """One reusable solver over a fixed clause set plus added clauses."""

    def __init__(self, cnf: CnfFormula):
        self.num_vars = cnf.num_vars
        self.clauses: list[list[int]] = []
        self.occ_pos: list[list[int]] = [[] for _ in range(self.num_vars + 1)]
        self.occ_neg: list[list[int]] = [[] for _ in range(self.num_vars + 1)]
        for clause in cnf.clauses:
            self.add_clause(
                [lit.var.index if lit.positive else -lit.var.index for lit in clause]
            )

    def add_clause(self, ints: Sequence[int]) -> None:
        ci = len(self.clauses)
        lits = list(ints)
        self.clauses.append(lits)
        for lit in lits:
            if lit > 0:
                self.occ_pos[lit].append(ci)
            else:
                self.occ_neg[-lit].append(ci)

    def solve(self, assumptions: Interpretation | None = None) -> SolveResult:
        n = self.num_vars
        clauses = self.clauses
        occ_pos = self.occ_pos
        occ_neg = self.occ_neg
        val = [0] * (n + 1)  # 0 unassigned, 1 true, -1 false
        sat_cnt = [0] * len(clauses)
        unass = [len(c) for c in clauses]
        trail: list[int] = []
        pending: list[int] = []

        def assign(lit: int) -> bool:
            """Set a literal true; False and an updated pending on conflict."""
            var = lit if lit > 0 else -lit
            val[var] = 1 if lit > 0 else -1
            trail.append(lit)
            if lit > 0:
                sats, opps = occ_pos[var], occ_neg[var]
            else:
                sats, opps = occ_neg[var], occ_pos[var]
            for ci in sats:
                sat_cnt[ci] += 1
            ok = True
            for ci in opps:
                unass[ci] -= 1
                if sat_cnt[ci] == 0:
                    left = unass[ci]
                    if left == 0:
                        ok = False
                    elif left == 1:
                        pending.append(ci)
            return ok

        def undo_to(length: int) -> None:
            while len(trail) > length:
                lit = trail.pop()
                var = lit if lit > 0 else -lit
                val[var] = 0
                if lit > 0:
                    sats, opps = occ_pos[var], occ_neg[var]
                else:
                    sats, opps = occ_neg[var], occ_pos[var]
                for ci in sats:
                    sat_cnt[ci] -= 1
                for ci in opps:
                    unass[ci] += 1

        def propagate() -> bool:
            qi = 0
            while qi < len(pending):
                ci = pending[qi]
                qi += 1
                if sat_cnt[ci] > 0:
                    continue
                left = unass[ci]
                if left == 0:
                    pending.clear()
                    return False
                if left != 1:
                    continue
                unit = 0
                for lit in clauses[ci]:
                    if val[lit if lit > 0 else -lit] == 0:
                        unit = lit
                        break
                if unit == 0:
                    continue  # became satisfied or shrank since queueing
                if not assign(unit):
                    pending.clear()
                    return False
            pending.clear()
            return True

        ok = True
        if assumptions is not None:
            for var in sorted(assumptions.domain):
                want = 1 if var in assumptions.true_atoms else -1
                if val[var.index] == want:
                    continue
                if val[var.index] == -want:
                    return SolveResult(False, None)
                if not assign(var.index * want):
                    ok = False
                    break
        if ok:
            for ci, clause in enumerate(clauses):
                if sat_cnt[ci] == 0 and unass[ci] <= 1:
                    pending.append(ci)
            ok = propagate()
        if not ok:
            return SolveResult(False, None)

        # decisions: (trail length before, variable, flipped-to-false yet)
        decisions: list[tuple[int, int, bool]] = []
        cursor = 1
        while True:
            while cursor <= n and val[cursor] != 0:
                cursor += 1
            if cursor > n:
                model = Interpretation(
                    (Var(i) for i in range(1, n + 1)),
                    (Var(i) for i in range(1, n + 1) if val[i] == 1),
                )
                return SolveResult(True, model)
            decisions.append((len(trail), cursor, False))
            good = assign(cursor) and propagate()
            while not good:
                pending.clear()
                while decisions and decisions[-1][2]:
                    mark, dvar, _ = decisions.pop()
                    undo_to(mark)
                    cursor = min(cursor, dvar)
                if not decisions:
                    return SolveResult(False, None)
                mark, dvar, _ = decisions.pop()
                undo_to(mark)
                cursor = min(cursor, dvar)
                decisions.append((mark, dvar, True))
                good = assign(-dvar) and propagate()


def solve(cnf: CnfFormula, assumptions: Interpretation | None = None) -> SolveResult:
    """Satisfiability of the clause set under a partial assignment."""
    if assumptions is not None:
        for var in assumptions.domain:
            if var.index > cnf.num_vars:
                raise ValueError(
                    f"assumption variable {var!r} beyond num_vars={cnf.num_vars}"
                )
    return DpllSolver(cnf).solve(assumptions)


def iter_models(
    cnf: CnfFormula,
    over: Iterable[Var],
    *,
    cap: int = limits.ENUMERATION_CAP,
    assumptions: Interpretation | None = None,
) -> Iterator[Interpretation]:
    """Assignments over `over` that extend to a full model, in a fixed order.

    Projection semantics: an assignment is produced exactly when some total
    model of the clause set agrees with it, realized by repeated solving
    with a blocking clause over `over` per found projection.
    """
    over_vars = sorted(set(over))
    for var in over_vars:
        if var.index > cnf.num_vars:
            raise ValueError(f"projection variable {var!r} beyond num_vars={cnf.num_vars}")
    if len(over_vars) > cap:
        raise ResourceLimit(
            f"enumeration over {len(over_vars)} variables exceeds the cap of {cap}"
        )
    solver = DpllSolver(cnf)
    while True:
        result = solver.solve(assumptions)
        if not result.satisfiable:
            return
        model = result.model
        assert model is not None
        true_set = {v.index for v in model.true_atoms}
        projection = Interpretation(over_vars, [v for v in over_vars if v.index in true_set])
        yield projection
        if not over_vars:
            return
        solver.add_clause(
            [-v.index if v.index in true_set else v.index for v in over_vars]
        )


def enumerate_models(
    cnf: CnfFormula,
    over: Iterable[Var],
    *,
    cap: int = limits.ENUMERATION_CAP,
    assumptions: Interpretation | None = None,
) -> ModelSet:
    over_vars = frozenset(over)
    found = frozenset(iter_models(cnf, over_vars, cap=cap, assumptions=assumptions))
    return ModelSet(over_vars, found)


def qbf_eval(q: QuantifiedFormula, *, prefix_cap: int = limits.QBF_PREFIX_CAP) -> bool:
    """Truth of a closed prenex formula by quantifier expansion."""
    stray = collect_vars(q.matrix) - q.prefix_vars
    if stray:
        raise NotClosed(f"unquantified matrix variables: {sorted(stray)}")
    if len(q.prefix) > prefix_cap:
        raise ResourceLimit(
            f"prefix of length {len(q.prefix)} exceeds the cap of {prefix_cap}"
        )
    prefix = q.prefix
    matrix = q.matrix
    assignment: dict[Var, bool] = {}

    def expand(k: int) -> bool:
        if k == len(prefix):
            return evaluate(matrix, Interpretation.from_pairs(assignment))
        quant, var = prefix[k]
        outcomes = []
        for choice in (True, False):
            assignment[var] = choice
            result = expand(k + 1)
            del assignment[var]
            if quant is Quantifier.EXISTS and result:
                return True
            if quant is Quantifier.FORALL and not result:
                return False
            outcomes.append(result)
        return outcomes[0] if quant is Quantifier.EXISTS else True

    return expand(0)


def parse_solver_output(text: str, num_vars: int) -> SolveResult:
    """Interpret the s/v line output convention of standalone SAT solvers."""
    status: bool | None = None
    values: dict[int, bool] = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            verdict = line[2:].strip().upper()
            if verdict == "SATISFIABLE":
                status = True
            elif verdict == "UNSATISFIABLE":
                status = False
        elif line.startswith("v "):
            for token in line[2:].split():
                lit = int(token)
                if lit == 0:
                    continue
                values[abs(lit)] = lit > 0
    if status is None:
        raise ValueError("no s-line in solver output")
    if not status:
        return SolveResult(False, None)
    model = Interpretation(
        (Var(i) for i in range(1, num_vars + 1)),
        (Var(i) for i in range(1, num_vars + 1) if values.get(i, False)),
    )
    return SolveResult(True, model)


def external_solve(cnf: CnfFormula, solver_path: str, *, timeout: float = 60.0) -> SolveResult:
    """Escape hatch: run a user-configured DIMACS solver executable.

    Never required by anything in this package; the built-in solver is the
    reference path.
    """
    import tempfile

    from .formats import serialize_dimacs

    with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as handle:
        handle.write(serialize_dimacs(cnf))
        path = handle.name
    proc = subprocess.run(
        [solver_path, path], capture_output=True, text=True, timeout=timeout, check=False
    )
    return parse_solver_output(proc.stdout, cnf.num_vars)
