"""Nondeterministic Turing machines over a theory/witness split tape.

A machine reads an input tape holding a theory string followed by a witness
string and accepts within a step budget that is a fixed power of the input
length.  The tape is right-infinite; a left move at cell 1 stays at cell 1.
Missing transitions end the branch as rejecting.  The simulator is the
ground-truth oracle that table compilations are verified against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import HaltedConfiguration, InvalidSpec, LengthMismatch, NotAccepted

Move = str  # "L" or "R"
TransitionKey = tuple[str, str]
TransitionOut = tuple[str, str, Move]


def poly_eval(coeffs: Sequence[int], n: int) -> int:
    """Value of a polynomial given constant-first coefficients."""
    total = 0
    for k, c in enumerate(coeffs):
        total += c * n**k
    return total


class NtmSpec:
    """A machine: states, alphabets, transition options, and size contract.

    `len_poly` holds constant-first coefficients of the witness-length
    polynomial; `time_exponent` is the exponent of the step budget
    (theory length + witness length) ** time_exponent.
    """

    __slots__ = (
        "name",
        "states",
        "start",
        "accept",
        "reject",
        "theory_alphabet",
        "model_alphabet",
        "tape_alphabet",
        "blank",
        "transitions",
        "time_exponent",
        "len_poly",
    )

    def __init__(
        self,
        name: str,
        states: Iterable[str],
        start: str,
        accept: str,
        reject: str,
        theory_alphabet: Iterable[str],
        model_alphabet: Iterable[str],
        tape_alphabet: Iterable[str],
        transitions: Mapping[TransitionKey, Sequence[TransitionOut]] | Iterable[tuple[TransitionKey, TransitionOut]],
        time_exponent: int,
        len_poly: Sequence[int],
        blank: str = "_",
    ):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "states", frozenset(states))
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "accept", accept)
        object.__setattr__(self, "reject", reject)
        object.__setattr__(self, "theory_alphabet", frozenset(theory_alphabet))
        object.__setattr__(self, "model_alphabet", frozenset(model_alphabet))
        object.__setattr__(self, "tape_alphabet", frozenset(tape_alphabet))
        object.__setattr__(self, "blank", blank)
        table: dict[TransitionKey, tuple[TransitionOut, ...]] = {}
        if isinstance(transitions, Mapping):
            items = [(k, o) for k, outs in transitions.items() for o in outs]
        else:
            items = list(transitions)
        for key, out in items:
            table.setdefault(key, ())
            table[key] = table[key] + (out,)
        object.__setattr__(self, "transitions", table)
        object.__setattr__(self, "time_exponent", int(time_exponent))
        object.__setattr__(self, "len_poly", tuple(int(c) for c in len_poly))

    def __setattr__(self, *_args) -> None:
        raise AttributeError("NtmSpec is immutable")

    @property
    def deterministic(self) -> bool:
        return all(len(outs) <= 1 for outs in self.transitions.values())

    def halting(self, state: str) -> bool:
        return state in (self.accept, self.reject)

    def witness_length(self, theory_len: int) -> int:
        return poly_eval(self.len_poly, theory_len)

    def step_budget(self, theory_len: int, witness_len: int) -> int:
        return (theory_len + witness_len) ** self.time_exponent

    def __repr__(self) -> str:
        kind = "det" if self.deterministic else "nondet"
        return f"NtmSpec({self.name}, {kind}, {len(self.states)} states)"


@dataclass(frozen=True)
class Configuration:
    """Tape content (blanks implicit beyond it), 1-based head, and state."""

    tape: str
    head: int
    state: str

    def __post_init__(self) -> None:
        if self.head < 1:
            raise ValueError("head position is 1-based")

    def scanned(self, blank: str) -> str:
        if self.head <= len(self.tape):
            return self.tape[self.head - 1]
        return blank


def validate_spec(m: NtmSpec) -> list[str]:
    """Structural violations; an empty list means the machine is well formed."""
    out: list[str] = []
    if m.theory_alphabet & m.model_alphabet:
        overlap = sorted(m.theory_alphabet & m.model_alphabet)
        out.append(f"AlphabetsOverlap: {overlap}")
    if not m.theory_alphabet or not m.model_alphabet:
        out.append("EmptyAlphabet: theory and model alphabets must be non-empty")
    if m.blank in m.theory_alphabet or m.blank in m.model_alphabet:
        out.append(f"BlankInModelAlphabet: {m.blank!r}")
    if m.blank not in m.tape_alphabet:
        out.append(f"BlankNotOnTape: {m.blank!r}")
    missing = (m.theory_alphabet | m.model_alphabet) - m.tape_alphabet
    if missing:
        out.append(f"TapeAlphabetIncomplete: {sorted(missing)}")
    for who, state in (("start", m.start), ("accept", m.accept), ("reject", m.reject)):
        if state not in m.states:
            out.append(f"UnknownState: {who} state {state!r}")
    if m.accept == m.reject:
        out.append("AcceptEqualsReject")
    for (state, sym), outs in m.transitions.items():
        if state in (m.accept, m.reject):
            out.append(f"HaltingStateHasTransition: {state!r}")
        if state not in m.states:
            out.append(f"UnknownState: transition from {state!r}")
        if sym not in m.tape_alphabet:
            out.append(f"UnknownSymbol: transition reads {sym!r}")
        for nstate, wsym, move in outs:
            if nstate not in m.states:
                out.append(f"UnknownState: transition to {nstate!r}")
            if wsym not in m.tape_alphabet:
                out.append(f"UnknownSymbol: transition writes {wsym!r}")
            if move not in ("L", "R"):
                out.append(f"BadMove: {move!r}")
    if m.time_exponent < 1:
        out.append(f"BadTimeExponent: {m.time_exponent}")
    for n in range(1, 9):
        if poly_eval(m.len_poly, n) < 1:
            out.append(f"WitnessLengthNotPositive: p({n}) < 1")
            break
    return out


def transition_gaps(m: NtmSpec) -> list[TransitionKey]:
    """Non-halting (state, symbol) pairs with no transition.

    Such branches reject; listing them supports an authoring warning.
    """
    gaps = []
    for state in sorted(m.states):
        if m.halting(state):
            continue
        for sym in sorted(m.tape_alphabet):
            if (state, sym) not in m.transitions:
                gaps.append((state, sym))
    return gaps


def step(m: NtmSpec, c: Configuration) -> tuple[Configuration, ...]:
    """All one-step successors; empty when the branch dies."""
    if m.halting(c.state):
        raise HaltedConfiguration(f"no steps from halting state {c.state!r}")
    scanned = c.scanned(m.blank)
    out = []
    for nstate, wsym, move in m.transitions.get((c.state, scanned), ()):
        tape = c.tape
        if c.head > len(tape):
            tape = tape + m.blank * (c.head - len(tape))
        tape = tape[: c.head - 1] + wsym + tape[c.head :]
        head = c.head + 1 if move == "R" else max(1, c.head - 1)
        out.append(Configuration(tape, head, nstate))
    return tuple(out)


def initial_configuration(m: NtmSpec, t: str, w: str) -> Configuration:
    return Configuration(t + w, 1, m.start)


def accepts(m: NtmSpec, t: str, w: str) -> bool:
    """Whether some branch reaches the accept state within the step budget."""
    if len(t) < 1:
        raise InvalidSpec("theory strings must be non-empty")
    budget = m.step_budget(len(t), len(w))
    start = initial_configuration(m, t, w)
    deterministic = m.deterministic
    # best known step count per configuration prunes re-exploration
    seen: dict[Configuration, int] = {start: 0}
    stack: list[tuple[Configuration, int]] = [(start, 0)]
    while stack:
        config, used = stack.pop()
        if config.state == m.accept:
            return True
        if config.state == m.reject or used == budget:
            continue
        successors = step(m, config)
        if deterministic and len(successors) > 1:
            raise InvalidSpec("deterministic machine produced several successors")
        for nxt in successors:
            best = seen.get(nxt)
            if best is not None and best <= used + 1:
                continue
            seen[nxt] = used + 1
            stack.append((nxt, used + 1))
    return False


def decide_relation(m: NtmSpec, t: str, w: str) -> bool:
    """The machine's theory/witness relation, with the length contract enforced."""
    expected = m.witness_length(len(t))
    if len(w) != expected:
        raise LengthMismatch(
            f"witness length {len(w)}; this machine requires {expected} for |t|={len(t)}"
        )
    return accepts(m, t, w)


def witness_universe(m: NtmSpec, t: str) -> list[str]:
    """All candidate witnesses of the contracted length, in sorted order."""
    length = m.witness_length(len(t))
    symbols = sorted(m.model_alphabet)
    out = [""]
    for _ in range(length):
        out = [prefix + s for prefix in out for s in symbols]
    return out


def accepted_witnesses(m: NtmSpec, t: str) -> list[str]:
    """Brute-force model set of t under this machine's relation."""
    return [w for w in witness_universe(m, t) if accepts(m, t, w)]


def run_deterministic(m: NtmSpec, t: str, w: str, max_steps: int) -> list[Configuration]:
    """The unique run, up to max_steps or a halt; the accept state must be
    reached or the caller gets a NotAccepted error."""
    if not m.deterministic:
        raise InvalidSpec("run_deterministic needs a deterministic machine")
    trace = [initial_configuration(m, t, w)]
    while len(trace) - 1 < max_steps:
        current = trace[-1]
        if m.halting(current.state):
            break
        successors = step(m, current)
        if not successors:
            raise NotAccepted(f"the run dies after {len(trace) - 1} steps")
        trace.append(successors[0])
    if trace[-1].state != m.accept:
        raise NotAccepted(f"witness {w!r} is not accepted within {max_steps} steps")
    return trace
