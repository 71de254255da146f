"""Clause-indicator gadget families over the pool of three-variable clauses.

The pool over x1..xn holds every clause with exactly three pairwise distinct
variables, each literal signed either way: 8 * C(n,3) clauses, none
tautological.  The upper family pairs each pool clause with an indicator so
that switching on exactly the indicators of some clause set makes the theory
satisfiable precisely when that clause set is.  The lower family adds twin
indicators and a guard variable so that the same clause sets map to minimal
models precisely when they are unsatisfiable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb

from .errors import ClauseNotInPi, TooSmall
from .formula import (
    And,
    Atom,
    Clause,
    CnfFormula,
    EpfFormula,
    Formula,
    Interpretation,
    Literal,
    Not,
    Or,
    Var,
    and_all,
    or_all,
)


@dataclass(frozen=True)
class ClauseIndex:
    """Canonical clause pool ordering and the variable blocks built on it.

    Layout: x1..xn, then the guard y at n+1, then one indicator per pool
    clause, then one twin indicator per pool clause.  Pool order is
    lexicographic by variable triple and then by sign pattern with positive
    before negative.
    """

    n: int
    clauses: tuple[Clause, ...]
    y: Var
    z_of: dict[Clause, Var]
    zprime_of: dict[Clause, Var]

    @property
    def base_vars(self) -> tuple[Var, ...]:
        return tuple(Var(i) for i in range(1, self.n + 1))

    @property
    def z_vars(self) -> tuple[Var, ...]:
        return tuple(self.z_of[c] for c in self.clauses)

    @property
    def zprime_vars(self) -> tuple[Var, ...]:
        return tuple(self.zprime_of[c] for c in self.clauses)


def clause_pool(n: int) -> tuple[Clause, ...]:
    """All three-distinct-variable clauses over x1..xn, canonically ordered."""
    if n < 3:
        raise TooSmall(f"the clause pool needs n >= 3, got {n}")
    pool: list[Clause] = []
    for triple in combinations(range(1, n + 1), 3):
        for signs in product((True, False), repeat=3):
            pool.append(
                Clause([Literal(Var(i), s) for i, s in zip(triple, signs)])
            )
    return tuple(pool)


def pool_size(n: int) -> int:
    return 8 * comb(n, 3)


def build_index(n: int) -> ClauseIndex:
    pool = clause_pool(n)
    y = Var(n + 1, "y")
    z_of = {
        c: Var(n + 2 + k, f"z{k + 1}") for k, c in enumerate(pool)
    }
    zprime_of = {
        c: Var(n + 2 + len(pool) + k, f"z{k + 1}'") for k, c in enumerate(pool)
    }
    return ClauseIndex(n, pool, y, z_of, zprime_of)


def build_psi_upper(n: int) -> EpfFormula:
    """Existential theory with one free indicator per pool clause: a clause
    is enforced exactly when its indicator is on."""
    index = build_index(n)
    guarded = [
        Clause(list(c.literals) + [Literal(index.z_of[c], False)])
        for c in index.clauses
    ]
    num_vars = n + 1 + 2 * len(index.clauses)
    matrix = CnfFormula(guarded, num_vars)
    return EpfFormula(index.base_vars, matrix)


def encode_upper(phi: CnfFormula, n: int) -> Interpretation:
    """Indicator assignment switching on exactly the clauses of phi."""
    index = build_index(n)
    chosen = _pool_members(index, phi)
    domain = index.z_vars
    return Interpretation(domain, [index.z_of[c] for c in chosen])


def build_psi_lower(n: int) -> Formula:
    """Plain theory whose minimal models encode unsatisfiable clause sets.

    Either the guard is off and every switched-on pool clause must hold, or
    the guard is on together with all base variables; twin indicators make
    each indicator pair carry exactly one true member.
    """
    index = build_index(n)
    guarded: list[Formula] = []
    for c in index.clauses:
        lits: list[Formula] = [
            Atom(l.var) if l.positive else Not(Atom(l.var)) for l in c.literals
        ]
        lits.append(Not(Atom(index.z_of[c])))
        guarded.append(or_all(lits))
    off_branch = And(Not(Atom(index.y)), and_all(guarded))
    on_branch = And(
        Atom(index.y), and_all([Atom(x) for x in index.base_vars])
    )
    rails = and_all(
        [
            And(
                Or(Atom(index.z_of[c]), Atom(index.zprime_of[c])),
                Or(Not(Atom(index.z_of[c])), Not(Atom(index.zprime_of[c]))),
            )
            for c in index.clauses
        ]
    )
    return And(Or(off_branch, on_branch), rails)


def encode_lower(phi: CnfFormula, n: int) -> Interpretation:
    """Candidate model: guard and base variables on, the indicators of phi
    on, and the twins of every clause outside phi on."""
    index = build_index(n)
    chosen = _pool_members(index, phi)
    domain = (index.y,) + index.base_vars + index.z_vars + index.zprime_vars
    true = (
        [index.y]
        + list(index.base_vars)
        + [index.z_of[c] for c in chosen]
        + [index.zprime_of[c] for c in index.clauses if c not in chosen]
    )
    return Interpretation(domain, true)


def _pool_members(index: ClauseIndex, phi: CnfFormula) -> set[Clause]:
    members: set[Clause] = set()
    for clause in phi.clauses:
        if clause not in index.z_of:
            raise ClauseNotInPi(f"{clause!r} is outside the pool over n={index.n}")
        members.add(clause)
    return members
