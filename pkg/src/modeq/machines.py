"""Bundled machines used by the table compiler's verification corpus.

Each machine must reject every witness containing a symbol outside the
witness alphabet: the compiled start row lets witness cells hold theory
symbols too, so consistency between simulator and table depends on it.
Theory languages of the marker machines end in '#', which lets a one-pass
reader locate the witness region without counting.
"""

from __future__ import annotations

from .ntm import NtmSpec

BLANK = "_"


def eq_machine() -> NtmSpec:
    """Accepts exactly the witness spelling the theory under a<->0, b<->1.

    Zigzag compare: mark the leftmost unprocessed theory symbol with E,
    carry it right past unprocessed theory and processed witness cells,
    check the first unprocessed witness symbol, mark it with D, walk back.
    Theory and witness have equal lengths, so once the theory is exhausted
    the scanner sitting on a processed-witness mark can accept outright.
    """
    delta = {
        ("seek", "a"): [("carry_a", "E", "R")],
        ("seek", "b"): [("carry_b", "E", "R")],
        ("seek", "D"): [("acc", "D", "R")],
        ("carry_a", "a"): [("carry_a", "a", "R")],
        ("carry_a", "b"): [("carry_a", "b", "R")],
        ("carry_a", "D"): [("carry_a", "D", "R")],
        ("carry_a", "0"): [("back", "D", "L")],
        ("carry_b", "a"): [("carry_b", "a", "R")],
        ("carry_b", "b"): [("carry_b", "b", "R")],
        ("carry_b", "D"): [("carry_b", "D", "R")],
        ("carry_b", "1"): [("back", "D", "L")],
        ("back", "D"): [("back", "D", "L")],
        ("back", "a"): [("back", "a", "L")],
        ("back", "b"): [("back", "b", "L")],
        ("back", "E"): [("seek", "E", "R")],
    }
    return NtmSpec(
        name="eq",
        states=["seek", "carry_a", "carry_b", "back", "acc", "rej"],
        start="seek",
        accept="acc",
        reject="rej",
        theory_alphabet=["a", "b"],
        model_alphabet=["0", "1"],
        tape_alphabet=["a", "b", "0", "1", "D", "E", BLANK],
        transitions=[(k, o) for k, outs in delta.items() for o in outs],
        time_exponent=2,
        len_poly=[0, 1],
    )


def delta_check_machine() -> NtmSpec:
    """Accepts iff the single witness symbol is a witness-alphabet symbol.

    Theories are a*#; the marker flips the scanner into witness mode, and
    the accepting move is the read of the witness symbol itself, so the run
    fits the linear step budget exactly.
    """
    delta = {
        ("scan", "a"): [("scan", "a", "R")],
        ("scan", "#"): [("wmode", "#", "R")],
        ("wmode", "0"): [("acc", "0", "R")],
        ("wmode", "1"): [("acc", "1", "R")],
    }
    return NtmSpec(
        name="delta-check",
        states=["scan", "wmode", "acc", "rej"],
        start="scan",
        accept="acc",
        reject="rej",
        theory_alphabet=["a", "#"],
        model_alphabet=["0", "1"],
        tape_alphabet=["a", "#", "0", "1", BLANK],
        transitions=[(k, o) for k, outs in delta.items() for o in outs],
        time_exponent=1,
        len_poly=[1],
    )


def parity_machine() -> NtmSpec:
    """Accepts iff the witness is over {0,1} with an even count of ones."""
    delta = {
        ("skip", "a"): [("skip", "a", "R")],
        ("skip", "0"): [("even", "0", "R")],
        ("skip", "1"): [("odd", "1", "R")],
        ("even", "0"): [("even", "0", "R")],
        ("even", "1"): [("odd", "1", "R")],
        ("even", BLANK): [("acc", BLANK, "R")],
        ("odd", "0"): [("odd", "0", "R")],
        ("odd", "1"): [("even", "1", "R")],
    }
    return NtmSpec(
        name="parity",
        states=["skip", "even", "odd", "acc", "rej"],
        start="skip",
        accept="acc",
        reject="rej",
        theory_alphabet=["a"],
        model_alphabet=["0", "1"],
        tape_alphabet=["a", "0", "1", BLANK],
        transitions=[(k, o) for k, outs in delta.items() for o in outs],
        time_exponent=2,
        len_poly=[0, 1],
    )


def nondet_guess_machine() -> NtmSpec:
    """Accepts iff the witness is over {0,1} and contains a one, found by a
    guessed position: on each one the scanner either keeps scanning or
    commits, and a committed branch still reads the rest of the witness."""
    delta = {
        ("scan", "a"): [("scan", "a", "R")],
        ("scan", "#"): [("hunt", "#", "R")],
        ("hunt", "0"): [("hunt", "0", "R")],
        ("hunt", "1"): [("hunt", "1", "R"), ("sure", "1", "R")],
        ("sure", "0"): [("sure", "0", "R")],
        ("sure", "1"): [("sure", "1", "R")],
        ("sure", BLANK): [("acc", BLANK, "R")],
    }
    return NtmSpec(
        name="nondet-guess",
        states=["scan", "hunt", "sure", "acc", "rej"],
        start="scan",
        accept="acc",
        reject="rej",
        theory_alphabet=["a", "#"],
        model_alphabet=["0", "1"],
        tape_alphabet=["a", "#", "0", "1", BLANK],
        transitions=[(k, o) for k, outs in delta.items() for o in outs],
        time_exponent=2,
        len_poly=[0, 1],
    )


def reject_all_machine() -> NtmSpec:
    """No transitions at all: every branch dies immediately."""
    return NtmSpec(
        name="reject-all",
        states=["go", "acc", "rej"],
        start="go",
        accept="acc",
        reject="rej",
        theory_alphabet=["a"],
        model_alphabet=["0", "1"],
        tape_alphabet=["a", "0", "1", BLANK],
        transitions=[],
        time_exponent=1,
        len_poly=[0, 1],
    )


def bundled_machines() -> dict[str, NtmSpec]:
    machines = [
        eq_machine(),
        delta_check_machine(),
        parity_machine(),
        nondet_guess_machine(),
    ]
    return {m.name: m for m in machines}


def theory_strings(m: NtmSpec, max_len: int) -> list[str]:
    """Valid theory strings up to a length, per machine convention.

    Marker machines take a*#; the others take any non-empty string over
    their theory alphabet.
    """
    if "#" in m.theory_alphabet:
        return ["a" * k + "#" for k in range(0, max_len)]
    symbols = sorted(m.theory_alphabet)
    out: list[str] = []
    layer = [""]
    for _ in range(max_len):
        layer = [prefix + s for prefix in layer for s in symbols]
        out.extend(layer)
    return out
