"""Compiling a machine's theory/witness relation into a computation table.

A run is laid out on an n' x n' grid of cells, n' = (|t| + p(|t|))**k0 + 1,
one symbol per cell, one row per machine step.  Row one is the start
configuration with the witness cells left open over the combined theory and
witness alphabets; each later row must follow from the one above by a single
machine move.  One variable exists per (row, column, symbol) triple.

Within a row the state symbol occupies its own cell immediately left of the
scanned tape cell, so the head at tape position p puts the state symbol in
column p and tape cell p in column p+1.  A consequence used throughout: the
state column at row i is at most i, so the state can reach the last column
only in the last row.

The move constraint is a clause family per 2x3 window position.  Windows
whose top row shows two state symbols never occur above a legal row, so
their contents are unconstrained.  For the rest the clauses pin the bottom
exactly:

  * no state in the top: the middle persists (family A); at the grid edges
    the outer cells persist too, since nothing can enter from outside
    (families E and F);
  * state over the middle cell: the whole transition is visible; the
    bottom-right cell determines the move direction (a state symbol for a
    right move, a written tape symbol for a left move) and the remaining
    cells are forced per option (family B);
  * state over the left cell: the scanned cell is visible; the
    bottom-middle cell determines the direction; on an interior left move
    the bottom-left cell receives content from outside the window and is
    only constrained to be a tape symbol, with the left neighbour window
    pinning it exactly (family C, with the stay-put rule at column 1);
  * state over the right cell: the scanned cell is outside; the bottom is
    constrained to the union over all possible reads, and the right
    neighbour window, which sees the state over its middle, enforces the
    exact transition (family D).

Halting states keep their configuration unchanged row to row, so a table
that accepts early stays legal to the bottom; a configuration with no
applicable move is forbidden above any row that needs a successor, which
makes dead branches unsatisfiable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import limits
from .errors import (
    AmbiguousCell,
    InvalidSpec,
    LengthMismatch,
    NotDeterministic,
    ResourceLimit,
)
from .formula import Clause, CnfFormula, EpfFormula, Interpretation, Literal, Var
from .ntm import Configuration, NtmSpec, run_deterministic, validate_spec


class TableMode(Enum):
    NONDET = "ntm"
    DET = "dtm"


class TableauLayout:
    """Grid dimensions and the bijection between cells/symbols and variables."""

    __slots__ = (
        "machine",
        "theory",
        "n",
        "m",
        "k0",
        "size",
        "symbols",
        "tape_symbols",
        "state_symbols",
        "sym_pos",
        "var_count",
        "_vars",
        "_pos",
        "_neg",
    )

    def __init__(self, machine: NtmSpec, theory: str):
        n = len(theory)
        m = machine.witness_length(n)
        size = (n + m) ** machine.time_exponent + 1
        tape_symbols = tuple(sorted(machine.tape_alphabet))
        state_symbols = tuple(sorted(machine.states))
        symbols = tape_symbols + state_symbols
        object.__setattr__(self, "machine", machine)
        object.__setattr__(self, "theory", theory)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "k0", machine.time_exponent)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "tape_symbols", tape_symbols)
        object.__setattr__(self, "state_symbols", state_symbols)
        object.__setattr__(self, "sym_pos", {s: k for k, s in enumerate(symbols)})
        object.__setattr__(self, "var_count", size * size * len(symbols))
        object.__setattr__(self, "_vars", None)
        object.__setattr__(self, "_pos", None)
        object.__setattr__(self, "_neg", None)

    def __setattr__(self, *_args) -> None:
        raise AttributeError("TableauLayout is immutable")

    def _ensure_tables(self) -> None:
        if self._vars is not None:
            return
        nsym = len(self.symbols)
        variables: list[Var] = []
        pos: list[Literal] = []
        neg: list[Literal] = []
        index = 0
        for i in range(1, self.size + 1):
            for j in range(1, self.size + 1):
                for s in self.symbols:
                    index += 1
                    var = Var(index, f"c[{i},{j}]={s}")
                    variables.append(var)
                    pos.append(Literal(var, True))
                    neg.append(Literal(var, False))
        object.__setattr__(self, "_vars", variables)
        object.__setattr__(self, "_pos", pos)
        object.__setattr__(self, "_neg", neg)

    def var_id(self, i: int, j: int, s: str) -> int:
        if not (1 <= i <= self.size and 1 <= j <= self.size):
            raise ValueError(f"cell ({i},{j}) outside the {self.size}-grid")
        return ((i - 1) * self.size + (j - 1)) * len(self.symbols) + self.sym_pos[s] + 1

    def var(self, i: int, j: int, s: str) -> Var:
        self._ensure_tables()
        return self._vars[self.var_id(i, j, s) - 1]

    def unindex(self, var_id: int) -> tuple[int, int, str]:
        if not (1 <= var_id <= self.var_count):
            raise ValueError(f"variable {var_id} outside the layout range")
        q, sym_k = divmod(var_id - 1, len(self.symbols))
        i, j = divmod(q, self.size)
        return (i + 1, j + 1, self.symbols[sym_k])

    def literal(self, i: int, j: int, s: str, positive: bool) -> Literal:
        self._ensure_tables()
        table = self._pos if positive else self._neg
        return table[self.var_id(i, j, s) - 1]

    def row_vars(self, i: int) -> list[Var]:
        self._ensure_tables()
        base = (i - 1) * self.size * len(self.symbols)
        return self._vars[base : base + self.size * len(self.symbols)]

    def all_vars(self) -> list[Var]:
        self._ensure_tables()
        return list(self._vars)

    def witness_columns(self) -> range:
        return range(self.n + 2, self.n + self.m + 2)


@dataclass(frozen=True)
class TableauCompilation:
    """The compiled table: layout, the four clause blocks, and the emitted theory."""

    layout: TableauLayout
    cell_part: CnfFormula
    start_part: CnfFormula
    move_part: CnfFormula
    accept_part: CnfFormula
    mode: TableMode

    @property
    def combined(self) -> CnfFormula:
        return CnfFormula(
            self.cell_part.clauses
            + self.start_part.clauses
            + self.move_part.clauses
            + self.accept_part.clauses,
            self.layout.var_count,
        )

    def g_of_t(self, w: str) -> Interpretation:
        return witness_to_model(self, w)


def _cell_clauses(layout: TableauLayout) -> list[Clause]:
    """Exactly one symbol per cell: one at-least-one clause and all
    pairwise exclusions."""
    out: list[Clause] = []
    symbols = layout.symbols
    nsym = len(symbols)
    for i in range(1, layout.size + 1):
        for j in range(1, layout.size + 1):
            cell = [layout.literal(i, j, s, True) for s in symbols]
            cell_neg = [layout.literal(i, j, s, False) for s in symbols]
            out.append(Clause(cell))
            for a in range(nsym):
                for b in range(a + 1, nsym):
                    out.append(Clause((cell_neg[a], cell_neg[b])))
    return out


def _start_clauses(layout: TableauLayout) -> list[Clause]:
    """Row one: start state, the theory, open witness cells, then blanks."""
    machine = layout.machine
    out: list[Clause] = [Clause((layout.literal(1, 1, machine.start, True),))]
    for k, ch in enumerate(layout.theory, start=2):
        out.append(Clause((layout.literal(1, k, ch, True),)))
    open_symbols = sorted(machine.theory_alphabet | machine.model_alphabet)
    for col in layout.witness_columns():
        out.append(Clause([layout.literal(1, col, s, True) for s in open_symbols]))
    for col in range(layout.n + layout.m + 2, layout.size + 1):
        out.append(Clause((layout.literal(1, col, machine.blank, True),)))
    return out


def _accept_clause(layout: TableauLayout) -> list[Clause]:
    accept = layout.machine.accept
    lits = [
        layout.literal(i, j, accept, True)
        for i in range(1, layout.size + 1)
        for j in range(1, layout.size + 1)
    ]
    return [Clause(lits)]


def _move_clauses(layout: TableauLayout) -> list[Clause]:
    machine = layout.machine
    tape = layout.tape_symbols
    states = layout.state_symbols
    size = layout.size
    lit = layout.literal
    out: list[Clause] = []

    halting = {machine.accept, machine.reject}
    delta = machine.transitions

    for i in range(1, size):
        below = i + 1
        for j in range(1, size - 1):
            c1, c2, c3 = j, j + 1, j + 2
            t1q = [lit(i, c1, q, True) for q in states]
            t2q = [lit(i, c2, q, True) for q in states]
            t3q = [lit(i, c3, q, True) for q in states]

            # family A: tape middle persists unless a state is beside it
            for u in tape:
                out.append(
                    Clause(t1q + t3q + [lit(i, c2, u, False), lit(below, c2, u, True)])
                )

            # family B: state over the middle cell, scan visible at the right
            for q in states:
                for s in tape:
                    premise = [lit(i, c2, q, False), lit(i, c3, s, False)]
                    if q in halting:
                        out.append(Clause(premise + [lit(below, c2, q, True)]))
                        out.append(Clause(premise + [lit(below, c3, s, True)]))
                        for u in tape:
                            out.append(
                                Clause(
                                    premise
                                    + [lit(i, c1, u, False), lit(below, c1, u, True)]
                                )
                            )
                        continue
                    options = delta.get((q, s), ())
                    if not options:
                        out.append(Clause(premise))
                        continue
                    right = [(q2, s2) for (q2, s2, mv) in options if mv == "R"]
                    left = [(q2, s2) for (q2, s2, mv) in options if mv == "L"]
                    pivots = sorted({q2 for q2, _ in right}) + sorted(
                        {s2 for _, s2 in left}
                    )
                    out.append(
                        Clause(premise + [lit(below, c3, x, True) for x in pivots])
                    )
                    for q2 in sorted({q2 for q2, _ in right}):
                        anchor = lit(below, c3, q2, False)
                        writes = sorted({s2 for q2b, s2 in right if q2b == q2})
                        out.append(
                            Clause(
                                premise
                                + [anchor]
                                + [lit(below, c2, s2, True) for s2 in writes]
                            )
                        )
                        for u in tape:
                            out.append(
                                Clause(
                                    premise
                                    + [
                                        anchor,
                                        lit(i, c1, u, False),
                                        lit(below, c1, u, True),
                                    ]
                                )
                            )
                    for s2 in sorted({s2 for _, s2 in left}):
                        anchor = lit(below, c3, s2, False)
                        targets = sorted({q2 for q2, s2b in left if s2b == s2})
                        out.append(
                            Clause(
                                premise
                                + [anchor]
                                + [lit(below, c1, q2, True) for q2 in targets]
                            )
                        )
                        for u in tape:
                            out.append(
                                Clause(
                                    premise
                                    + [
                                        anchor,
                                        lit(i, c1, u, False),
                                        lit(below, c2, u, True),
                                    ]
                                )
                            )

            # family C: state over the left cell, scanning the middle
            for q in states:
                for s in tape:
                    premise = [lit(i, c1, q, False), lit(i, c2, s, False)]
                    if q in halting:
                        out.append(Clause(premise + [lit(below, c1, q, True)]))
                        out.append(Clause(premise + [lit(below, c2, s, True)]))
                        for u in tape:
                            out.append(
                                Clause(
                                    premise
                                    + [lit(i, c3, u, False), lit(below, c3, u, True)]
                                )
                            )
                        continue
                    options = delta.get((q, s), ())
                    if not options:
                        out.append(Clause(premise))
                        continue
                    for u in tape:
                        out.append(
                            Clause(
                                premise + [lit(i, c3, u, False), lit(below, c3, u, True)]
                            )
                        )
                    right = [(q2, s2) for (q2, s2, mv) in options if mv == "R"]
                    left = [(q2, s2) for (q2, s2, mv) in options if mv == "L"]
                    pivots = sorted({q2 for q2, _ in right}) + sorted(
                        {s2 for _, s2 in left}
                    )
                    out.append(
                        Clause(premise + [lit(below, c2, x, True) for x in pivots])
                    )
                    for q2 in sorted({q2 for q2, _ in right}):
                        anchor = lit(below, c2, q2, False)
                        writes = sorted({s2 for q2b, s2 in right if q2b == q2})
                        out.append(
                            Clause(
                                premise
                                + [anchor]
                                + [lit(below, c1, s2, True) for s2 in writes]
                            )
                        )
                    for s2 in sorted({s2 for _, s2 in left}):
                        anchor = lit(below, c2, s2, False)
                        if j == 1:
                            targets = sorted({q2 for q2, s2b in left if s2b == s2})
                            out.append(
                                Clause(
                                    premise
                                    + [anchor]
                                    + [lit(below, c1, q2, True) for q2 in targets]
                                )
                            )
                        else:
                            out.append(
                                Clause(
                                    premise
                                    + [anchor]
                                    + [lit(below, c1, u, True) for u in tape]
                                )
                            )

            # family D: state over the right cell, scanning outside
            for q in states:
                premise_q = [lit(i, c3, q, False)]
                if q in halting:
                    out.append(Clause(premise_q + [lit(below, c3, q, True)]))
                    for u in tape:
                        out.append(
                            Clause(
                                premise_q
                                + [lit(i, c1, u, False), lit(below, c1, u, True)]
                            )
                        )
                        out.append(
                            Clause(
                                premise_q
                                + [lit(i, c2, u, False), lit(below, c2, u, True)]
                            )
                        )
                    continue
                reads = [
                    (r, outs)
                    for (qk, r), outs in delta.items()
                    if qk == q
                ]
                r_writes = sorted(
                    {s2 for _, outs in reads for (q2, s2, mv) in outs if mv == "R"}
                )
                l_targets = sorted(
                    {q2 for _, outs in reads for (q2, s2, mv) in outs if mv == "L"}
                )
                for u in tape:
                    out.append(
                        Clause(
                            premise_q + [lit(i, c1, u, False), lit(below, c1, u, True)]
                        )
                    )
                    out.append(
                        Clause(
                            premise_q
                            + [lit(i, c2, u, False), lit(below, c2, u, True)]
                            + [lit(below, c2, q2, True) for q2 in l_targets]
                        )
                    )
                    out.append(
                        Clause(
                            premise_q
                            + [lit(i, c2, u, False), lit(below, c2, u, False)]
                            + [lit(below, c3, s2, True) for s2 in r_writes]
                        )
                    )
                for q2 in l_targets:
                    for u in tape:
                        out.append(
                            Clause(
                                premise_q
                                + [
                                    lit(below, c2, q2, False),
                                    lit(i, c2, u, False),
                                    lit(below, c3, u, True),
                                ]
                            )
                        )

            # families E and F: at the edges nothing enters from outside
            if j == 1 or j == size - 2:
                no_state = t1q + t2q + t3q
                for u in tape:
                    if j == 1:
                        out.append(
                            Clause(
                                no_state
                                + [lit(i, c1, u, False), lit(below, c1, u, True)]
                            )
                        )
                    if j == size - 2:
                        out.append(
                            Clause(
                                no_state
                                + [lit(i, c3, u, False), lit(below, c3, u, True)]
                            )
                        )
    return out


def _check_compilable(m: NtmSpec, t: str, layout_cap: int) -> TableauLayout:
    problems = validate_spec(m)
    if problems:
        raise InvalidSpec("; ".join(problems))
    if len(t) < 1:
        raise InvalidSpec("theory strings must be non-empty")
    bad = [ch for ch in t if ch not in m.theory_alphabet]
    if bad:
        raise InvalidSpec(f"theory symbols outside the theory alphabet: {bad}")
    layout = TableauLayout(m, t)
    if layout.var_count > layout_cap:
        raise ResourceLimit(
            f"table of side {layout.size} needs {layout.var_count} variables, "
            f"over the cap of {layout_cap}"
        )
    return layout


def _compile(m: NtmSpec, t: str, mode: TableMode, layout_cap: int) -> TableauCompilation:
    layout = _check_compilable(m, t, layout_cap)
    nv = layout.var_count
    return TableauCompilation(
        layout=layout,
        cell_part=CnfFormula(_cell_clauses(layout), nv),
        start_part=CnfFormula(_start_clauses(layout), nv),
        move_part=CnfFormula(_move_clauses(layout), nv),
        accept_part=CnfFormula(_accept_clause(layout), nv),
        mode=mode,
    )


def compile_nondet(
    m: NtmSpec, t: str, *, layout_cap: int = limits.LAYOUT_VAR_CAP
) -> tuple[EpfFormula, TableauCompilation]:
    """The existentially quantified table theory: row one free, the rest bound."""
    comp = _compile(m, t, TableMode.NONDET, layout_cap)
    layout = comp.layout
    bound = [
        v
        for i in range(2, layout.size + 1)
        for v in layout.row_vars(i)
    ]
    return EpfFormula(bound, comp.combined), comp


def compile_det(
    m: NtmSpec, t: str, *, layout_cap: int = limits.LAYOUT_VAR_CAP
) -> tuple[CnfFormula, TableauCompilation]:
    """The plain table theory of a deterministic machine; models are whole tables."""
    if not m.deterministic:
        raise NotDeterministic(f"{m.name} has a branching transition")
    comp = _compile(m, t, TableMode.DET, layout_cap)
    return comp.combined, comp


def _row_symbols(config: Configuration, width: int, blank: str) -> list[str]:
    tape = config.tape
    if len(tape) < width - 1:
        tape = tape + blank * (width - 1 - len(tape))
    head = config.head
    row = list(tape[: head - 1]) + [config.state] + list(tape[head - 1 :])
    if len(row) < width:
        row.extend(blank * (width - len(row)))
    return row[:width]


def witness_to_model(comp: TableauCompilation, w: str) -> Interpretation:
    """The per-theory witness map: a witness string to its table assignment.

    Open mode: the determined row one.  Deterministic mode: the full table of
    the unique accepting run, with the halted configuration repeated below.
    """
    layout = comp.layout
    machine = layout.machine
    if len(w) != layout.m:
        raise LengthMismatch(f"witness length {len(w)}; this table fixes {layout.m}")
    open_symbols = machine.theory_alphabet | machine.model_alphabet
    bad = [ch for ch in w if ch not in open_symbols]
    if bad:
        raise ValueError(f"witness symbols outside the open alphabets: {bad}")

    if comp.mode is TableMode.NONDET:
        row = _row_symbols(
            Configuration(layout.theory + w, 1, machine.start), layout.size, machine.blank
        )
        domain = layout.row_vars(1)
        true = [layout.var(1, col, sym) for col, sym in enumerate(row, start=1)]
        return Interpretation(domain, true)

    trace = run_deterministic(machine, layout.theory, w, layout.size - 1)
    rows = [_row_symbols(c, layout.size, machine.blank) for c in trace]
    while len(rows) < layout.size:
        rows.append(rows[-1])
    true = [
        layout.var(i, col, sym)
        for i, row in enumerate(rows, start=1)
        for col, sym in enumerate(row, start=1)
    ]
    return Interpretation(layout.all_vars(), true)


def model_to_witness(comp: TableauCompilation, v: Interpretation) -> str:
    """Read the witness string back out of a table assignment's first row."""
    layout = comp.layout
    chars: list[str] = []
    for col in layout.witness_columns():
        hits = [s for s in layout.symbols if v.value(layout.var(1, col, s))]
        if len(hits) != 1:
            raise AmbiguousCell(
                f"witness cell at column {col} holds {len(hits)} symbols"
            )
        chars.append(hits[0])
    return "".join(chars)
