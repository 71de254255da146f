"""Clause-form conversion for the solving pipeline.

Conversion is structural: a matrix that is already a conjunction of literal
disjunctions maps to exactly those clauses with no new variables, while any
other subtree gets a fresh definition variable with full biconditional
defining clauses.  Definition variables are functionally determined by the
original ones, so model sets projected to the original variables are
preserved, which is what projection enumeration and minimality checks rely
on.  Original variables keep their indices; definitions are appended after
the largest index in use.

This converter serves the decision procedures.  The clause-form translation
that is itself a verified theory-to-theory reduction lives in `reductions`.
"""

from __future__ import annotations

from .formula import (
    And,
    Atom,
    Clause,
    CnfFormula,
    Const,
    Formula,
    Implies,
    Literal,
    Matrix,
    Not,
    Or,
    TautologicalClause,
    Var,
    collect_vars,
    fold_constants,
    walk_postorder,
)


def clausify(matrix: Matrix, min_num_vars: int = 0) -> CnfFormula:
    """Clause form whose models, projected to the original variables, are
    exactly the models of the matrix.

    `min_num_vars` widens the declared variable range, so callers can keep
    domain variables that the matrix never mentions.
    """
    if isinstance(matrix, CnfFormula):
        if matrix.num_vars >= min_num_vars:
            return matrix
        return CnfFormula(matrix.clauses, min_num_vars)

    orig_max = max((v.index for v in collect_vars(matrix)), default=0)
    num_vars = max(orig_max, min_num_vars)
    folded = fold_constants(matrix)
    if isinstance(folded, Const):
        if folded.value:
            return CnfFormula((), num_vars)
        return CnfFormula((Clause(()),), num_vars)

    builder = _Builder(orig_max)
    for conjunct in _and_spine(folded):
        builder.assert_top(conjunct)
    return CnfFormula(builder.clauses, max(builder.next_index - 1, num_vars))


class _Builder:
    def __init__(self, max_index: int):
        self.next_index = max_index + 1
        self.clauses: list[Clause] = []
        self._label_memo: dict[int, Literal] = {}

    def fresh(self) -> Var:
        var = Var(self.next_index, f"d{self.next_index}")
        self.next_index += 1
        return var

    def add(self, lits: list[Literal]) -> None:
        try:
            self.clauses.append(Clause(lits))
        except TautologicalClause:
            pass  # an always-true disjunct constrains nothing

    def assert_top(self, node: Formula) -> None:
        leaves = _or_spine(node)
        lits: list[Literal] = []
        for leaf in leaves:
            lit = _as_literal(leaf)
            lits.append(lit if lit is not None else self.label(leaf))
        self.add(lits)

    def label(self, node: Formula) -> Literal:
        """Literal equivalent to the subtree, defining variables as needed."""
        memo = self._label_memo
        for sub in walk_postorder(node):
            if id(sub) in memo:
                continue
            if isinstance(sub, Atom):
                memo[id(sub)] = Literal(sub.var, True)
            elif isinstance(sub, Not):
                memo[id(sub)] = memo[id(sub.child)].complement()
            elif isinstance(sub, Const):
                raise AssertionError("constants must be folded before labeling")
            else:
                left = memo[id(sub.left)]
                right = memo[id(sub.right)]
                if isinstance(sub, Implies):
                    left = left.complement()  # a -> b is ~a | b
                out = Literal(self.fresh(), True)
                if isinstance(sub, And):
                    self.add([out.complement(), left])
                    self.add([out.complement(), right])
                    self.add([out, left.complement(), right.complement()])
                else:
                    self.add([out.complement(), left, right])
                    self.add([out, left.complement()])
                    self.add([out, right.complement()])
                memo[id(sub)] = out
        return memo[id(node)]


def _as_literal(node: Formula) -> Literal | None:
    if isinstance(node, Atom):
        return Literal(node.var, True)
    if isinstance(node, Not) and isinstance(node.child, Atom):
        return Literal(node.child.var, False)
    return None


def _and_spine(node: Formula) -> list[Formula]:
    out: list[Formula] = []
    stack = [node]
    while stack:
        cur = stack.pop()
        if isinstance(cur, And):
            stack.append(cur.right)
            stack.append(cur.left)
        else:
            out.append(cur)
    return out


def _or_spine(node: Formula) -> list[Formula]:
    out: list[Formula] = []
    stack = [node]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Or):
            stack.append(cur.right)
            stack.append(cur.left)
        else:
            out.append(cur)
    return out
