"""Text formats: formula grammar, DIMACS and its quantified extensions,
program and machine descriptions, assignments, and witness-map sidecars.

The existential DIMACS extension adds one optional `e v1 v2 ... 0` line
after the header naming the quantified variables; unlisted variables are
free.  Standard QDIMACS forbids free variables, which these theories need,
hence the one-line deviation, which is recorded in emitted file headers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .asp import Program, Rule
from .errors import (
    BoundVarAbsent,
    HeaderMismatch,
    InvalidSpec,
    ParseError,
    TautologicalClause,
)
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
    Quantifier,
    QuantifiedFormula,
    Var,
    cnf_to_formula,
)
from .ntm import NtmSpec, validate_spec
from .tableau import TableauCompilation, TableMode


class FileFormat(Enum):
    PF_TEXT = "pf"
    DIMACS_CNF = "cnf"
    EQDIMACS = "eqdimacs"
    LP_TEXT = "lp"
    TM_SPEC = "tm"
    INTERP_TEXT = "interp"
    WITNESS_MAP = "wmap"


# ------------------------------------------------------------- formula text

class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        if ch:
            self.pos += 1
            self.col += 1
        return ch

    def expect(self, ch: str) -> None:
        got = self.take()
        if got != ch:
            raise self.error(f"expected {ch!r}, found {got!r or 'end of input'}")


def parse_pf(text: str) -> Formula:
    """expr := xDIGITS | T | F | ~expr | (expr op expr), op in & | ->."""
    scanner = _Scanner(text)
    formula = _parse_expr(scanner)
    if scanner.peek():
        raise scanner.error(f"trailing input starting at {scanner.peek()!r}")
    return formula


def _parse_expr(s: _Scanner) -> Formula:
    ch = s.peek()
    if ch == "x":
        s.take()
        digits = ""
        while s.pos < len(s.text) and s.text[s.pos].isdigit():
            digits += s.text[s.pos]
            s.pos += 1
            s.col += 1
        if not digits:
            raise s.error("variable needs digits after 'x'")
        return Atom(Var(int(digits)))
    if ch == "T":
        s.take()
        return Const(True)
    if ch == "F":
        s.take()
        return Const(False)
    if ch == "~":
        s.take()
        return Not(_parse_expr(s))
    if ch == "(":
        s.take()
        left = _parse_expr(s)
        op = s.peek()
        if op == "&":
            s.take()
            node: type = And
        elif op == "|":
            s.take()
            node = Or
        elif op == "-":
            s.take()
            s.expect(">")
            node = Implies
        else:
            raise s.error(f"expected a connective, found {op!r or 'end of input'}")
        right = _parse_expr(s)
        s.expect(")")
        return node(left, right)
    raise s.error(f"unexpected {ch!r or 'end of input'}")


def serialize_pf(f: Formula) -> str:
    if isinstance(f, Atom):
        return f"x{f.var.index}"
    if isinstance(f, Const):
        return "T" if f.value else "F"
    if isinstance(f, Not):
        return "~" + serialize_pf(f.child)
    op = {And: "&", Or: "|", Implies: "->"}[type(f)]
    return f"({serialize_pf(f.left)} {op} {serialize_pf(f.right)})"


# ----------------------------------------------------------------- DIMACS

def _dimacs_body(text: str):
    """Yield (kind, payload, line_no) for header, quantifier, and clause rows."""
    pending: list[int] = []
    header: tuple[int, int] | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("malformed problem line", line_no)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as exc:
                raise ParseError(f"problem line: {exc}", line_no) from None
            yield ("header", header, line_no)
            continue
        if line[0] in "ea" and not _looks_numeric(line):
            tokens = line.split()
            try:
                nums = [int(tok) for tok in tokens[1:]]
            except ValueError as exc:
                raise ParseError(f"quantifier line: {exc}", line_no) from None
            if not nums or nums[-1] != 0:
                raise ParseError("quantifier line must end with 0", line_no)
            yield (tokens[0], nums[:-1], line_no)
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise ParseError(f"clause line: {exc}", line_no) from None
        for num in nums:
            if num == 0:
                yield ("clause", pending, line_no)
                pending = []
            else:
                pending.append(num)
    if pending:
        raise ParseError("last clause is not zero-terminated")


def _looks_numeric(line: str) -> bool:
    head = line.split(None, 1)[0]
    try:
        int(head)
        return True
    except ValueError:
        return False


def _clause_from_ints(nums: Sequence[int], num_vars: int, line_no: int) -> Clause:
    for num in nums:
        if abs(num) > num_vars:
            raise HeaderMismatch(
                f"literal {num} exceeds the declared {num_vars} variables", line_no
            )
    try:
        return Clause([Literal(Var(abs(n)), n > 0) for n in nums])
    except TautologicalClause as exc:
        raise ParseError(f"tautological clause rejected: {exc}", line_no) from None


def parse_dimacs(text: str) -> CnfFormula:
    header: tuple[int, int] | None = None
    clauses: list[Clause] = []
    for kind, payload, line_no in _dimacs_body(text):
        if kind == "header":
            if header is not None:
                raise ParseError("second problem line", line_no)
            header = payload
        elif kind == "clause":
            if header is None:
                raise ParseError("clause before the problem line", line_no)
            clauses.append(_clause_from_ints(payload, header[0], line_no))
        else:
            raise ParseError("quantifier lines are not part of plain cnf", line_no)
    if header is None:
        raise ParseError("missing problem line")
    if len(clauses) != header[1]:
        raise HeaderMismatch(
            f"header declares {header[1]} clauses, found {len(clauses)}"
        )
    return CnfFormula(clauses, header[0])


def serialize_dimacs(c: CnfFormula, comments: Iterable[str] = ()) -> str:
    lines = [f"c {line}" for line in comments]
    lines.append(f"p cnf {c.num_vars} {len(c.clauses)}")
    for clause in c.clauses:
        ints = [l.var.index if l.positive else -l.var.index for l in clause]
        lines.append(" ".join(str(i) for i in ints + [0]))
    return "\n".join(lines) + "\n"


def parse_eqdimacs(text: str) -> EpfFormula:
    """DIMACS with one optional `e ... 0` line; unlisted variables are free."""
    header: tuple[int, int] | None = None
    bound: list[int] = []
    saw_e = False
    clauses: list[Clause] = []
    for kind, payload, line_no in _dimacs_body(text):
        if kind == "header":
            if header is not None:
                raise ParseError("second problem line", line_no)
            header = payload
        elif kind == "e":
            if saw_e:
                raise ParseError("a second quantifier line is not allowed", line_no)
            if clauses:
                raise ParseError("quantifier line must precede the clauses", line_no)
            saw_e = True
            bound = payload
        elif kind == "a":
            raise ParseError("universal quantifiers are not part of this format", line_no)
        else:
            if header is None:
                raise ParseError("clause before the problem line", line_no)
            clauses.append(_clause_from_ints(payload, header[0], line_no))
    if header is None:
        raise ParseError("missing problem line")
    if len(clauses) != header[1]:
        raise HeaderMismatch(
            f"header declares {header[1]} clauses, found {len(clauses)}"
        )
    matrix = CnfFormula(clauses, header[0])
    occurring = {v.index for v in matrix.variables()}
    missing = [b for b in bound if b not in occurring]
    if missing:
        raise BoundVarAbsent(
            f"quantified variables absent from every clause: {missing}"
        )
    return EpfFormula([Var(b) for b in bound], matrix)


def serialize_eqdimacs(f: EpfFormula, comments: Iterable[str] = ()) -> str:
    from .clausify import clausify

    matrix = f.matrix if isinstance(f.matrix, CnfFormula) else clausify(f.matrix)
    lines = ["c existential dimacs: one e-line, free variables allowed"]
    lines += [f"c {line}" for line in comments]
    lines.append(f"p cnf {matrix.num_vars} {len(matrix.clauses)}")
    if f.bound:
        bound = " ".join(str(v.index) for v in sorted(f.bound))
        lines.append(f"e {bound} 0")
    for clause in matrix.clauses:
        ints = [l.var.index if l.positive else -l.var.index for l in clause]
        lines.append(" ".join(str(i) for i in ints + [0]))
    return "\n".join(lines) + "\n"


def parse_qdimacs(text: str) -> QuantifiedFormula:
    """Prenex e/a prefix lines in order, then clauses; free variables allowed."""
    header: tuple[int, int] | None = None
    prefix: list[tuple[Quantifier, Var]] = []
    clauses: list[Clause] = []
    for kind, payload, line_no in _dimacs_body(text):
        if kind == "header":
            header = payload
        elif kind in ("e", "a"):
            quant = Quantifier.EXISTS if kind == "e" else Quantifier.FORALL
            prefix.extend((quant, Var(v)) for v in payload)
        else:
            if header is None:
                raise ParseError("clause before the problem line", line_no)
            clauses.append(_clause_from_ints(payload, header[0], line_no))
    if header is None:
        raise ParseError("missing problem line")
    if len(clauses) != header[1]:
        raise HeaderMismatch(
            f"header declares {header[1]} clauses, found {len(clauses)}"
        )
    matrix = cnf_to_formula(CnfFormula(clauses, header[0]))
    return QuantifiedFormula(prefix, matrix)


def serialize_qdimacs(q: QuantifiedFormula, matrix_cnf: CnfFormula) -> str:
    lines = [f"p cnf {matrix_cnf.num_vars} {len(matrix_cnf.clauses)}"]
    run: list[str] = []
    current: Quantifier | None = None
    for quant, var in q.prefix:
        if quant is not current and run:
            lines.append(f"{current.value} {' '.join(run)} 0")
            run = []
        current = quant
        run.append(str(var.index))
    if run:
        lines.append(f"{current.value} {' '.join(run)} 0")
    for clause in matrix_cnf.clauses:
        ints = [l.var.index if l.positive else -l.var.index for l in clause]
        lines.append(" ".join(str(i) for i in ints + [0]))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- programs

_NAME_OK = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_"


def _valid_atom(token: str) -> bool:
    return bool(token) and token[0].isalpha() and all(c in _NAME_OK for c in token)


def parse_lp(text: str) -> Program:
    """Rules `a :- b, not c.` and facts `a.`; `#universe a b.` declares atoms."""
    names: dict[str, Var] = {}

    def atom(token: str, line_no: int) -> Var:
        if not _valid_atom(token):
            raise ParseError(f"bad atom name {token!r}", line_no)
        if token not in names:
            names[token] = Var(len(names) + 1, token)
        return names[token]

    rules: list[Rule] = []
    extra_universe: list[Var] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#universe"):
            body = line[len("#universe"):].strip()
            if not body.endswith("."):
                raise ParseError("universe directive must end with '.'", line_no)
            for token in body[:-1].split():
                extra_universe.append(atom(token, line_no))
            continue
        if not line.endswith("."):
            raise ParseError("rules must end with '.'", line_no)
        line = line[:-1]
        if ":-" in line:
            head_text, body_text = line.split(":-", 1)
        else:
            head_text, body_text = line, ""
        head = atom(head_text.strip(), line_no)
        pos: list[Var] = []
        neg: list[Var] = []
        body_text = body_text.strip()
        if body_text:
            for part in body_text.split(","):
                part = part.strip()
                if part.startswith("not "):
                    neg.append(atom(part[4:].strip(), line_no))
                elif part.startswith("not\t"):
                    neg.append(atom(part[4:].strip(), line_no))
                else:
                    pos.append(atom(part, line_no))
        rules.append(Rule(head, frozenset(pos), frozenset(neg)))
    universe = set(names.values())
    return Program(rules, universe)


def serialize_lp(p: Program) -> str:
    def name(v: Var) -> str:
        return v.name if v.name else f"a{v.index}"

    lines = []
    for rule in p.rules:
        body = [name(a) for a in sorted(rule.pos_body)]
        body += [f"not {name(a)}" for a in sorted(rule.neg_body)]
        if body:
            lines.append(f"{name(rule.head)} :- {', '.join(body)}.")
        else:
            lines.append(f"{name(rule.head)}.")
    atoms = " ".join(name(a) for a in sorted(p.universe))
    if atoms:
        lines.append(f"#universe {atoms}.")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- machines

def parse_tm(text: str) -> NtmSpec:
    """Line-oriented machine description; repeated delta lines are options.

    Keys: states, start, accept, reject, theory_alphabet, model_alphabet,
    tape_alphabet, k0, p (coefficients, constant term first), name, and one
    `delta: q s -> q2 s2 L|R` per transition.  The blank symbol is `_` and
    must appear in the tape alphabet.
    """
    fields: dict[str, str] = {}
    transitions: list[tuple[tuple[str, str], tuple[str, str, str]]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", line_no)
        key, value = line.split(":", 1)
        key = key.strip()
        value = value.strip()
        if key == "delta":
            if "->" not in value:
                raise ParseError("delta needs '->'", line_no)
            lhs, rhs = value.split("->", 1)
            lhs_parts = lhs.split()
            rhs_parts = rhs.split()
            if len(lhs_parts) != 2 or len(rhs_parts) != 3:
                raise ParseError("delta is 'q s -> q2 s2 L|R'", line_no)
            if rhs_parts[2] not in ("L", "R"):
                raise ParseError(f"move must be L or R, got {rhs_parts[2]!r}", line_no)
            transitions.append(
                ((lhs_parts[0], lhs_parts[1]), (rhs_parts[0], rhs_parts[1], rhs_parts[2]))
            )
        else:
            if key in fields:
                raise ParseError(f"duplicate key {key!r}", line_no)
            fields[key] = value
    required = [
        "states",
        "start",
        "accept",
        "reject",
        "theory_alphabet",
        "model_alphabet",
        "tape_alphabet",
        "k0",
        "p",
    ]
    for key in required:
        if key not in fields:
            raise ParseError(f"missing key {key!r}")
    try:
        k0 = int(fields["k0"])
        poly = [int(tok) for tok in fields["p"].split()]
    except ValueError as exc:
        raise ParseError(f"numeric field: {exc}") from None
    spec = NtmSpec(
        name=fields.get("name", "machine"),
        states=fields["states"].split(),
        start=fields["start"],
        accept=fields["accept"],
        reject=fields["reject"],
        theory_alphabet=fields["theory_alphabet"].split(),
        model_alphabet=fields["model_alphabet"].split(),
        tape_alphabet=fields["tape_alphabet"].split(),
        transitions=transitions,
        time_exponent=k0,
        len_poly=poly,
    )
    problems = validate_spec(spec)
    if problems:
        raise InvalidSpec("; ".join(problems))
    return spec


def serialize_tm(m: NtmSpec) -> str:
    lines = [
        f"name: {m.name}",
        f"states: {' '.join(sorted(m.states))}",
        f"start: {m.start}",
        f"accept: {m.accept}",
        f"reject: {m.reject}",
        f"theory_alphabet: {' '.join(sorted(m.theory_alphabet))}",
        f"model_alphabet: {' '.join(sorted(m.model_alphabet))}",
        f"tape_alphabet: {' '.join(sorted(m.tape_alphabet))}",
        f"k0: {m.time_exponent}",
        f"p: {' '.join(str(c) for c in m.len_poly)}",
    ]
    for (state, sym), outs in m.transitions.items():
        for nstate, wsym, move in outs:
            lines.append(f"delta: {state} {sym} -> {nstate} {wsym} {move}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- assignments

@dataclass(frozen=True)
class RawInterp:
    tokens: tuple[str, ...]
    bits: str | None
    domain_tokens: tuple[str, ...] | None


def parse_interp(text: str) -> RawInterp:
    """Either whitespace-separated true atoms or one {0,1} string, with an
    optional `@domain ...` line fixing the domain and its order."""
    domain_tokens: tuple[str, ...] | None = None
    body_tokens: list[str] = []
    for raw in text.splitlines():
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@domain"):
            if domain_tokens is not None:
                raise ParseError("second @domain line")
            domain_tokens = tuple(_expand_range(line[len("@domain"):].split()))
            continue
        body_tokens.extend(line.split())
    if len(body_tokens) == 1 and set(body_tokens[0]) <= {"0", "1"}:
        return RawInterp((), body_tokens[0], domain_tokens)
    return RawInterp(tuple(body_tokens), None, domain_tokens)


def _expand_range(tokens: Iterable[str]) -> list[str]:
    out: list[str] = []
    for token in tokens:
        if ".." in token:
            lo_text, hi_text = token.split("..", 1)
            if not (lo_text.startswith("x") and hi_text.startswith("x")):
                raise ParseError(f"bad domain range {token!r}")
            try:
                lo, hi = int(lo_text[1:]), int(hi_text[1:])
            except ValueError:
                raise ParseError(f"bad domain range {token!r}") from None
            out.extend(f"x{i}" for i in range(lo, hi + 1))
        else:
            out.append(token)
    return out


def resolve_interp(raw: RawInterp, domain: Iterable[Var]) -> Interpretation:
    """Bind parsed tokens to a concrete domain, by name first, then by xN."""
    domain_vars = sorted(set(domain))
    by_name = {v.name: v for v in domain_vars if v.name}
    by_index = {f"x{v.index}": v for v in domain_vars}

    def lookup(token: str) -> Var:
        if token in by_name:
            return by_name[token]
        if token in by_index:
            return by_index[token]
        raise ParseError(f"atom {token!r} is not in the domain")

    order = domain_vars
    if raw.domain_tokens is not None:
        order = [lookup(tok) for tok in raw.domain_tokens]
        if set(order) != set(domain_vars) or len(order) != len(domain_vars):
            raise ParseError("@domain does not match the theory's domain")
    if raw.bits is not None:
        if len(raw.bits) != len(order):
            raise ParseError(
                f"{len(raw.bits)} bits for a domain of {len(order)} variables"
            )
        return Interpretation.from_bits(order, raw.bits)
    return Interpretation(domain_vars, [lookup(tok) for tok in raw.tokens])


def serialize_interp(v: Interpretation) -> str:
    def name(var: Var) -> str:
        return var.name if var.name else f"x{var.index}"

    order = sorted(v.domain)
    lines = [f"@domain {' '.join(name(var) for var in order)}"]
    lines.append(v.bits(order))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ witness maps

@dataclass(frozen=True)
class WitnessMapInfo:
    """Everything needed to rebuild the first-row witness map externally.

    Variable numbering inside row one: the variable of (column, symbol) is
    (column-1) * len(symbols) + symbols.index(symbol) + 1.
    """

    machine: str
    theory: str
    mode: str
    n: int
    m: int
    k0: int
    size: int
    symbols: tuple[str, ...]
    cells: tuple[tuple[str, str], ...]  # per column: ("fixed", sym) | ("witness", k)

    def row1_true_ids(self, w: str) -> list[int]:
        if len(w) != self.m:
            raise ParseError(f"witness length {len(w)}, table fixes {self.m}")
        pos = {s: k for k, s in enumerate(self.symbols)}
        out = []
        for col, (kind, payload) in enumerate(self.cells, start=1):
            sym = payload if kind == "fixed" else w[int(payload) - 1]
            out.append((col - 1) * len(self.symbols) + pos[sym] + 1)
        return out

    def row1_all_ids(self) -> range:
        return range(1, self.size * len(self.symbols) + 1)


def serialize_witness_map(comp: TableauCompilation) -> str:
    layout = comp.layout
    machine = layout.machine
    lines = [
        "c first-row witness map; var(col, sym) = (col-1)*|symbols| + pos(sym) + 1",
        f"machine {machine.name}",
        f"theory {layout.theory}",
        f"mode {comp.mode.value}",
        f"n {layout.n}",
        f"m {layout.m}",
        f"k0 {layout.k0}",
        f"size {layout.size}",
        f"symbols {' '.join(layout.symbols)}",
    ]
    witness_cols = set(layout.witness_columns())
    row = [machine.start] + list(layout.theory)
    for col in range(1, layout.size + 1):
        if col in witness_cols:
            lines.append(f"cell {col} witness {col - layout.n - 1}")
        elif col <= layout.n + 1:
            lines.append(f"cell {col} fixed {row[col - 1]}")
        else:
            lines.append(f"cell {col} fixed {machine.blank}")
    return "\n".join(lines) + "\n"


def parse_witness_map(text: str) -> WitnessMapInfo:
    fields: dict[str, str] = {}
    cells: dict[int, tuple[str, str]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "cell":
            if len(parts) != 4:
                raise ParseError("cell lines are 'cell <col> <kind> <payload>'", line_no)
            cells[int(parts[1])] = (parts[2], parts[3])
        else:
            fields[parts[0]] = " ".join(parts[1:])
    try:
        size = int(fields["size"])
        info = WitnessMapInfo(
            machine=fields["machine"],
            theory=fields["theory"],
            mode=fields["mode"],
            n=int(fields["n"]),
            m=int(fields["m"]),
            k0=int(fields["k0"]),
            size=size,
            symbols=tuple(fields["symbols"].split()),
            cells=tuple(cells[col] for col in range(1, size + 1)),
        )
    except KeyError as exc:
        raise ParseError(f"witness map is missing {exc}") from None
    return info
