"""Propositional formulas, clause forms, quantified forms, and assignments.

Variables are positive integers with an optional display name; two variables
are the same variable exactly when their indices match.  Formula trees admit
explicit truth constants so substitution never has to re-normalize.  Clause
lists may serve as the matrix of an existentially quantified formula, which
keeps large machine-generated theories in clause form end to end.

Everything here is immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    BoundVarAbsent,
    DomainMismatch,
    TautologicalClause,
    UndefinedVariable,
)


@dataclass(frozen=True)
class Var:
    """A propositional variable, identified by its positive index."""

    index: int
    name: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"variable index must be >= 1, got {self.index}")

    def __lt__(self, other: "Var") -> bool:
        return self.index < other.index

    def __repr__(self) -> str:
        return self.name if self.name else f"x{self.index}"


@dataclass(frozen=True)
class Literal:
    """A variable or its negation."""

    var: Var
    positive: bool = True

    def complement(self) -> "Literal":
        return Literal(self.var, not self.positive)

    def key(self) -> tuple[int, bool]:
        return (self.var.index, self.positive)

    def __repr__(self) -> str:
        return repr(self.var) if self.positive else "~" + repr(self.var)


class Formula:
    """Base class for formula tree nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    var: Var

    def __repr__(self) -> str:
        return repr(self.var)


@dataclass(frozen=True, slots=True)
class Not(Formula):
    child: Formula

    def __repr__(self) -> str:
        return f"~{self.child!r}"


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"({self.left!r} & {self.right!r})"


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"({self.left!r} | {self.right!r})"


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"({self.left!r} -> {self.right!r})"


@dataclass(frozen=True, slots=True)
class Const(Formula):
    value: bool

    def __repr__(self) -> str:
        return "T" if self.value else "F"


TRUE = Const(True)
FALSE = Const(False)

_BINARY = (And, Or, Implies)


def _children(node: Formula) -> tuple[Formula, ...]:
    if isinstance(node, _BINARY):
        return (node.left, node.right)
    if isinstance(node, Not):
        return (node.child,)
    return ()


def walk_postorder(f: Formula) -> Iterator[Formula]:
    """Yield each node after its children, left to right, without recursion."""
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        for child in reversed(_children(node)):
            stack.append((child, False))


def size(f: Formula) -> int:
    """Node count of the formula tree."""
    return sum(1 for _ in walk_postorder(f))


def and_all(parts: Sequence[Formula]) -> Formula:
    """Conjunction of parts, balanced so deep inputs stay shallow. Empty -> T."""
    return _balanced(list(parts), And, TRUE)


def or_all(parts: Sequence[Formula]) -> Formula:
    """Disjunction of parts, balanced. Empty -> F."""
    return _balanced(list(parts), Or, FALSE)


def _balanced(parts: list[Formula], op, empty: Formula) -> Formula:
    if not parts:
        return empty
    while len(parts) > 1:
        merged = []
        for i in range(0, len(parts) - 1, 2):
            merged.append(op(parts[i], parts[i + 1]))
        if len(parts) % 2:
            merged.append(parts[-1])
        parts = merged
    return parts[0]


class Interpretation:
    """A truth assignment: a declared domain and the subset of true atoms.

    Equivalently a {0,1}-string once the domain is put in index order.
    """

    __slots__ = ("domain", "true_atoms")

    def __init__(self, domain: Iterable[Var], true_atoms: Iterable[Var]):
        dom = frozenset(domain)
        true = frozenset(true_atoms)
        if not true <= dom:
            extra = sorted(true - dom)
            raise DomainMismatch(f"true atoms outside the domain: {extra}")
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "true_atoms", true)

    @classmethod
    def from_pairs(cls, pairs: Mapping[Var, bool]) -> "Interpretation":
        return cls(pairs.keys(), {v for v, b in pairs.items() if b})

    @classmethod
    def from_bits(cls, ordered_domain: Sequence[Var], bits: str) -> "Interpretation":
        if len(bits) != len(ordered_domain):
            raise DomainMismatch(
                f"bit string of length {len(bits)} for domain of size {len(ordered_domain)}"
            )
        true = {v for v, b in zip(ordered_domain, bits) if b == "1"}
        return cls(ordered_domain, true)

    def value(self, var: Var) -> bool:
        if var not in self.domain:
            raise UndefinedVariable(f"{var!r} is outside the assignment domain")
        return var in self.true_atoms

    def bits(self, ordered_domain: Sequence[Var] | None = None) -> str:
        order = ordered_domain if ordered_domain is not None else sorted(self.domain)
        return "".join("1" if v in self.true_atoms else "0" for v in order)

    def merge(self, other: "Interpretation") -> "Interpretation":
        overlap = self.domain & other.domain
        if overlap:
            raise DomainMismatch(f"overlapping domains: {sorted(overlap)}")
        return Interpretation(self.domain | other.domain, self.true_atoms | other.true_atoms)

    def restrict(self, to_vars: Iterable[Var]) -> "Interpretation":
        keep = frozenset(to_vars)
        missing = keep - self.domain
        if missing:
            raise DomainMismatch(f"cannot restrict to absent variables: {sorted(missing)}")
        return Interpretation(keep, self.true_atoms & keep)

    def __setattr__(self, *_args) -> None:
        raise AttributeError("Interpretation is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interpretation):
            return NotImplemented
        return self.domain == other.domain and self.true_atoms == other.true_atoms

    def __hash__(self) -> int:
        return hash((self.domain, self.true_atoms))

    def __repr__(self) -> str:
        names = ",".join(repr(v) for v in sorted(self.true_atoms))
        return f"Interp[{len(self.domain)} vars; true={{{names}}}]"


class Clause:
    """A disjunction of literals over pairwise distinct variables.

    Duplicated literals collapse; a complementary pair is a construction
    error, never silently dropped.  Literals are kept sorted by
    (variable index, sign) so clause equality is syntactic.
    """

    __slots__ = ("literals",)

    def __init__(self, literals: Iterable[Literal]):
        by_var: dict[int, Literal] = {}
        for lit in literals:
            prev = by_var.get(lit.var.index)
            if prev is None:
                by_var[lit.var.index] = lit
            elif prev.positive != lit.positive:
                raise TautologicalClause(
                    f"clause contains both {lit.var!r} and its negation"
                )
        object.__setattr__(
            self, "literals", tuple(sorted(by_var.values(), key=Literal.key))
        )

    def variables(self) -> frozenset[Var]:
        return frozenset(lit.var for lit in self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __setattr__(self, *_args) -> None:
        raise AttributeError("Clause is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clause):
            return NotImplemented
        return self.literals == other.literals

    def __hash__(self) -> int:
        return hash(self.literals)

    def __repr__(self) -> str:
        return "(" + " | ".join(repr(l) for l in self.literals) + ")"


class CnfFormula:
    """A clause list together with its declared variable range 1..num_vars."""

    __slots__ = ("clauses", "num_vars")

    def __init__(self, clauses: Iterable[Clause], num_vars: int | None = None):
        clause_tuple = tuple(clauses)
        max_index = 0
        for clause in clause_tuple:
            for lit in clause:
                if lit.var.index > max_index:
                    max_index = lit.var.index
        if num_vars is None:
            num_vars = max_index
        elif num_vars < max_index:
            raise ValueError(
                f"num_vars={num_vars} below the largest literal index {max_index}"
            )
        object.__setattr__(self, "clauses", clause_tuple)
        object.__setattr__(self, "num_vars", num_vars)

    def variables(self) -> frozenset[Var]:
        out: set[Var] = set()
        for clause in self.clauses:
            for lit in clause:
                out.add(lit.var)
        return frozenset(out)

    def __setattr__(self, *_args) -> None:
        raise AttributeError("CnfFormula is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CnfFormula):
            return NotImplemented
        return self.clauses == other.clauses and self.num_vars == other.num_vars

    def __hash__(self) -> int:
        return hash((self.clauses, self.num_vars))

    def __repr__(self) -> str:
        return f"CnfFormula({len(self.clauses)} clauses, {self.num_vars} vars)"


Matrix = Union[Formula, CnfFormula]


class EpfFormula:
    """An existentially quantified propositional formula with free variables.

    The matrix may be a formula tree or a clause list; machine-generated
    theories use the clause form.  Quantifying a variable absent from the
    matrix is rejected.
    """

    __slots__ = ("bound", "matrix")

    def __init__(self, bound: Iterable[Var], matrix: Matrix):
        bound_set = frozenset(bound)
        occurring = matrix_vars(matrix)
        absent = bound_set - occurring
        if absent:
            raise BoundVarAbsent(
                f"quantified variables missing from the matrix: {sorted(absent)}"
            )
        object.__setattr__(self, "bound", bound_set)
        object.__setattr__(self, "matrix", matrix)

    @property
    def free(self) -> frozenset[Var]:
        return matrix_vars(self.matrix) - self.bound

    def __setattr__(self, *_args) -> None:
        raise AttributeError("EpfFormula is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EpfFormula):
            return NotImplemented
        return self.bound == other.bound and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.bound, self.matrix))

    def __repr__(self) -> str:
        names = ",".join(repr(v) for v in sorted(self.bound))
        return f"Exists[{names}]({self.matrix!r})"


class Quantifier(Enum):
    EXISTS = "e"
    FORALL = "a"


class QuantifiedFormula:
    """A prenex formula with an ordered mixed prefix; free variables allowed."""

    __slots__ = ("prefix", "matrix")

    def __init__(self, prefix: Iterable[tuple[Quantifier, Var]], matrix: Formula):
        pref = tuple(prefix)
        seen: set[Var] = set()
        for _, var in pref:
            if var in seen:
                raise ValueError(f"variable {var!r} quantified twice")
            seen.add(var)
        object.__setattr__(self, "prefix", pref)
        object.__setattr__(self, "matrix", matrix)

    @property
    def prefix_vars(self) -> frozenset[Var]:
        return frozenset(v for _, v in self.prefix)

    @property
    def free(self) -> frozenset[Var]:
        return collect_vars(self.matrix) - self.prefix_vars

    def is_closed(self) -> bool:
        return not self.free

    def __setattr__(self, *_args) -> None:
        raise AttributeError("QuantifiedFormula is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantifiedFormula):
            return NotImplemented
        return self.prefix == other.prefix and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.prefix, self.matrix))

    def __repr__(self) -> str:
        pref = " ".join(f"{q.value}{v!r}" for q, v in self.prefix)
        return f"[{pref}]({self.matrix!r})"


def matrix_vars(matrix: Matrix) -> frozenset[Var]:
    if isinstance(matrix, CnfFormula):
        return matrix.variables()
    return collect_vars(matrix)


def collect_vars(f) -> frozenset[Var]:
    """Exact occurrence set of variables in a formula-like object."""
    if isinstance(f, Formula):
        out: set[Var] = set()
        for node in walk_postorder(f):
            if isinstance(node, Atom):
                out.add(node.var)
        return frozenset(out)
    if isinstance(f, (CnfFormula, Clause)):
        return f.variables()
    if isinstance(f, EpfFormula):
        return matrix_vars(f.matrix)
    if isinstance(f, QuantifiedFormula):
        return collect_vars(f.matrix)
    raise TypeError(f"cannot collect variables from {type(f).__name__}")


def evaluate(f: Formula, v: Interpretation) -> bool:
    """Truth value of f under v; implication is material."""
    missing = collect_vars(f) - v.domain
    if missing:
        raise UndefinedVariable(f"unassigned variables: {sorted(missing)}")
    true_atoms = v.true_atoms
    values: dict[int, bool] = {}
    for node in walk_postorder(f):
        if isinstance(node, Atom):
            values[id(node)] = node.var in true_atoms
        elif isinstance(node, Const):
            values[id(node)] = node.value
        elif isinstance(node, Not):
            values[id(node)] = not values[id(node.child)]
        elif isinstance(node, And):
            values[id(node)] = values[id(node.left)] and values[id(node.right)]
        elif isinstance(node, Or):
            values[id(node)] = values[id(node.left)] or values[id(node.right)]
        else:  # Implies
            values[id(node)] = (not values[id(node.left)]) or values[id(node.right)]
    return values[id(f)]


def evaluate_cnf(c: CnfFormula, v: Interpretation) -> bool:
    """Truth value of a clause list under v."""
    missing = c.variables() - v.domain
    if missing:
        raise UndefinedVariable(f"unassigned variables: {sorted(missing)}")
    true_atoms = v.true_atoms
    for clause in c.clauses:
        if not any((lit.var in true_atoms) == lit.positive for lit in clause):
            return False
    return True


def replace_with_constants(f: Formula, mapping: Mapping[Var, bool]) -> Formula:
    """Replace mapped atoms by truth constants; no other rewriting."""
    rebuilt: dict[int, Formula] = {}
    for node in walk_postorder(f):
        if isinstance(node, Atom):
            if node.var in mapping:
                rebuilt[id(node)] = TRUE if mapping[node.var] else FALSE
            else:
                rebuilt[id(node)] = node
        elif isinstance(node, Not):
            rebuilt[id(node)] = Not(rebuilt[id(node.child)])
        elif isinstance(node, _BINARY):
            rebuilt[id(node)] = type(node)(rebuilt[id(node.left)], rebuilt[id(node.right)])
        else:
            rebuilt[id(node)] = node
    return rebuilt[id(f)]


def rename_vars(f: Formula, mapping: Mapping[Var, Var]) -> Formula:
    """Replace mapped atoms by fresh variables; unmapped atoms stay."""
    rebuilt: dict[int, Formula] = {}
    for node in walk_postorder(f):
        if isinstance(node, Atom):
            rebuilt[id(node)] = Atom(mapping.get(node.var, node.var))
        elif isinstance(node, Not):
            rebuilt[id(node)] = Not(rebuilt[id(node.child)])
        elif isinstance(node, _BINARY):
            rebuilt[id(node)] = type(node)(rebuilt[id(node.left)], rebuilt[id(node.right)])
        else:
            rebuilt[id(node)] = node
    return rebuilt[id(f)]


def fold_constants(f: Formula) -> Formula:
    """Eliminate truth constants bottom-up; result is constant-free or a Const."""
    rebuilt: dict[int, Formula] = {}
    for node in walk_postorder(f):
        if isinstance(node, (Atom, Const)):
            rebuilt[id(node)] = node
        elif isinstance(node, Not):
            child = rebuilt[id(node.child)]
            if isinstance(child, Const):
                rebuilt[id(node)] = FALSE if child.value else TRUE
            else:
                rebuilt[id(node)] = Not(child)
        else:
            left = rebuilt[id(node.left)]
            right = rebuilt[id(node.right)]
            rebuilt[id(node)] = _fold_binary(type(node), left, right)
    return rebuilt[id(f)]


def _fold_binary(op, left: Formula, right: Formula) -> Formula:
    if op is And:
        if isinstance(left, Const):
            return right if left.value else FALSE
        if isinstance(right, Const):
            return left if right.value else FALSE
    elif op is Or:
        if isinstance(left, Const):
            return TRUE if left.value else right
        if isinstance(right, Const):
            return TRUE if right.value else left
    else:  # Implies
        if isinstance(left, Const):
            return right if left.value else TRUE
        if isinstance(right, Const):
            return TRUE if right.value else Not(left)
    return op(left, right)


def substitute(f: EpfFormula, v: Interpretation) -> Matrix:
    """Plug an assignment of exactly the free variables into the matrix.

    Tree matrices get their free atoms replaced by constants and keep their
    shape otherwise.  Clause matrices are simplified clause by clause:
    satisfied clauses drop, false literals are removed, and a clause whose
    literals are all false becomes the empty clause.
    """
    if v.domain != f.free:
        raise DomainMismatch(
            f"assignment domain {sorted(v.domain)} differs from the free "
            f"variables {sorted(f.free)}"
        )
    if isinstance(f.matrix, CnfFormula):
        return _substitute_cnf(f.matrix, v)
    mapping = {var: (var in v.true_atoms) for var in v.domain}
    return replace_with_constants(f.matrix, mapping)


def _substitute_cnf(matrix: CnfFormula, v: Interpretation) -> CnfFormula:
    domain = v.domain
    true_atoms = v.true_atoms
    kept: list[Clause] = []
    for clause in matrix.clauses:
        satisfied = False
        survivors: list[Literal] = []
        for lit in clause:
            if lit.var in domain:
                if (lit.var in true_atoms) == lit.positive:
                    satisfied = True
                    break
            else:
                survivors.append(lit)
        if not satisfied:
            kept.append(Clause(survivors))
    return CnfFormula(kept, matrix.num_vars)


def cnf_to_formula(c: CnfFormula) -> Formula:
    """The clause list as a formula tree (conjunction of disjunctions)."""
    clause_trees: list[Formula] = []
    for clause in c.clauses:
        lits: list[Formula] = [
            Atom(l.var) if l.positive else Not(Atom(l.var)) for l in clause
        ]
        clause_trees.append(or_all(lits))
    return and_all(clause_trees)
