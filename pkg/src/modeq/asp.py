"""Normal logic programs under the stable-model semantics.

A candidate atom set is stable exactly when it equals the least model of its
positive reduct: rules with a blocked negative body are dropped, the rest
keep only their positive bodies, and the least model is the fixpoint of the
one-step consequence operator from the empty set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Iterable, Iterator

from . import limits
from .errors import DomainMismatch, NotPositive, ResourceLimit
from .formula import Interpretation, Var
from .sat import ModelSet


@dataclass(frozen=True)
class Rule:
    """head <- pos_body, not neg_body  (normal rules only)."""

    head: Var
    pos_body: frozenset[Var] = frozenset()
    neg_body: frozenset[Var] = frozenset()

    def atoms(self) -> frozenset[Var]:
        return frozenset({self.head}) | self.pos_body | self.neg_body


class Program:
    """A rule list over an explicitly declared universe of atoms.

    The universe must contain every occurring atom; atoms may be declared
    without occurring, so the empty-set-versus-missing-atom question never
    arises implicitly.
    """

    __slots__ = ("rules", "universe")

    def __init__(self, rules: Iterable[Rule], universe: Iterable[Var] | None = None):
        rule_tuple = tuple(rules)
        occurring: set[Var] = set()
        for rule in rule_tuple:
            occurring |= rule.atoms()
        if universe is None:
            declared = frozenset(occurring)
        else:
            declared = frozenset(universe)
            missing = occurring - declared
            if missing:
                raise DomainMismatch(
                    f"universe omits occurring atoms: {sorted(missing)}"
                )
        object.__setattr__(self, "rules", rule_tuple)
        object.__setattr__(self, "universe", declared)

    def __setattr__(self, *_args) -> None:
        raise AttributeError("Program is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Program):
            return NotImplemented
        return self.rules == other.rules and self.universe == other.universe

    def __hash__(self) -> int:
        return hash((self.rules, self.universe))

    def __repr__(self) -> str:
        return f"Program({len(self.rules)} rules, {len(self.universe)} atoms)"


def reduct(p: Program, m: AbstractSet[Var]) -> Program:
    """The positive program obtained relative to the candidate set m."""
    _check_subset(p, m)
    kept = [
        Rule(rule.head, rule.pos_body, frozenset())
        for rule in p.rules
        if not (rule.neg_body & m)
    ]
    return Program(kept, p.universe)


def least_model(p: Program) -> frozenset[Var]:
    """Least fixpoint of the one-step consequence operator, from the empty set."""
    for rule in p.rules:
        if rule.neg_body:
            raise NotPositive(f"rule for {rule.head!r} has a negative body")
    derived: set[Var] = set()
    remaining = list(p.rules)
    changed = True
    while changed:
        changed = False
        still: list[Rule] = []
        for rule in remaining:
            if rule.pos_body <= derived:
                if rule.head not in derived:
                    derived.add(rule.head)
                    changed = True
            else:
                still.append(rule)
        remaining = still
    return frozenset(derived)


def is_answer_set(p: Program, m: AbstractSet[Var]) -> bool:
    _check_subset(p, m)
    return frozenset(m) == least_model(reduct(p, m))


def satisfies_classically(p: Program, m: AbstractSet[Var]) -> bool:
    """Rule-by-rule reading: head true whenever the body holds under m."""
    _check_subset(p, m)
    for rule in p.rules:
        body = rule.pos_body <= m and not (rule.neg_body & m)
        if body and rule.head not in m:
            return False
    return True


def iter_answer_sets(
    p: Program, *, cap: int = limits.ASP_UNIVERSE_CAP
) -> Iterator[frozenset[Var]]:
    if len(p.universe) > cap:
        raise ResourceLimit(
            f"universe of {len(p.universe)} atoms exceeds the cap of {cap}"
        )
    atoms = sorted(p.universe)
    for mask in range(1 << len(atoms)):
        candidate = frozenset(a for k, a in enumerate(atoms) if mask >> k & 1)
        if is_answer_set(p, candidate):
            yield candidate


def enumerate_answer_sets(p: Program, *, cap: int = limits.ASP_UNIVERSE_CAP) -> ModelSet:
    models = frozenset(
        Interpretation(p.universe, m) for m in iter_answer_sets(p, cap=cap)
    )
    return ModelSet(p.universe, models)


def _check_subset(p: Program, m: AbstractSet[Var]) -> None:
    extra = set(m) - p.universe
    if extra:
        raise DomainMismatch(f"atoms outside the universe: {sorted(extra)}")
