"""Grounding, state transitions, and plan validation for STRIPS tasks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .pddl.ast import (
    ActionSchema,
    Atom,
    DomainDef,
    EQUALITY_PREDICATE,
    ProblemDef,
)

# Ground atoms are plain Atoms with no variables; a state is a set of them
# under the closed-world assumption.
GroundAtom = Atom
State = frozenset


class DomainProblemMismatch(Exception):
    pass


class NotApplicable(Exception):
    def __init__(self, action: "GroundAction", literal: str):
        super().__init__("{} is not applicable: {} fails".format(action.name, literal))
        self.action = action
        self.literal = literal


@dataclass(frozen=True)
class GroundAction:
    """A fully instantiated action; delete effects never overlap adds."""

    schema: str
    binding: tuple[tuple[str, str], ...]  # (variable, object) in parameter order
    pre_pos: frozenset[GroundAtom]
    pre_neg: frozenset[GroundAtom]
    add: frozenset[GroundAtom]
    delete: frozenset[GroundAtom]
    cost: int = 1

    @property
    def objects(self) -> tuple[str, ...]:
        return tuple(o for _, o in self.binding)

    @property
    def name(self) -> str:
        if self.binding:
            return "({} {})".format(self.schema, " ".join(self.objects))
        return "({})".format(self.schema)


@dataclass(frozen=True)
class Plan:
    steps: tuple[GroundAction, ...]

    @property
    def cost(self) -> int:
        return sum(s.cost for s in self.steps)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    failed_step: Optional[int] = None  # index of first failing step, or None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


def instantiate(schema: ActionSchema, binding: dict[str, str]) -> Optional[GroundAction]:
    """Ground a schema under a complete binding.

    Equality literals are resolved statically; returns None when one fails.
    """
    pre_pos: set[GroundAtom] = set()
    pre_neg: set[GroundAtom] = set()
    for lit in schema.precondition:
        atom = lit.atom.substitute(binding)
        if atom.predicate == EQUALITY_PREDICATE:
            equal = atom.args[0] == atom.args[1]
            if equal == lit.negated:
                return None
            continue
        (pre_neg if lit.negated else pre_pos).add(atom)
    add = frozenset(a.substitute(binding) for a in schema.add)
    delete = frozenset(a.substitute(binding) for a in schema.delete) - add
    return GroundAction(
        schema.name,
        tuple((v, binding[v]) for v in schema.variables),
        frozenset(pre_pos),
        frozenset(pre_neg),
        add,
        delete,
    )


def ground(d: DomainDef, p: ProblemDef) -> list[GroundAction]:
    """Every type-consistent instantiation of every schema, in deterministic
    order: schema declaration order, then lexicographic bindings."""
    if p.domain_name != d.name:
        raise DomainProblemMismatch(
            "problem '{}' references domain '{}', not '{}'".format(
                p.name, p.domain_name, d.name
            )
        )
    pool = list(d.constants) + list(p.objects)
    actions: list[GroundAction] = []
    for schema in d.actions:
        candidates = []
        for _, ptype in schema.params:
            names = sorted(o for o, otype in pool if d.is_subtype(otype, ptype))
            candidates.append(names)
        for combo in itertools.product(*candidates):
            binding = dict(zip(schema.variables, combo))
            ga = instantiate(schema, binding)
            if ga is not None:
                actions.append(ga)
    return actions


def applicable(s: State, a: GroundAction) -> bool:
    return a.pre_pos <= s and not (a.pre_neg & s)


def apply_action(s: State, a: GroundAction) -> State:
    for atom in a.pre_pos:
        if atom not in s:
            raise NotApplicable(a, str(atom))
    for atom in a.pre_neg:
        if atom in s:
            raise NotApplicable(a, "(not {})".format(atom))
    return (s - a.delete) | a.add


def goal_satisfied(s: State, p: ProblemDef) -> bool:
    for lit in p.goal:
        if lit.negated == (lit.atom in s):
            return False
    return True


def validate_plan(d: DomainDef, p: ProblemDef, plan: Plan) -> ValidationReport:
    state: State = frozenset(p.init)
    for i, step in enumerate(plan.steps):
        if not applicable(state, step):
            missing = next(
                (str(a) for a in step.pre_pos if a not in state),
                next(("(not {})".format(a) for a in step.pre_neg if a in state), "?"),
            )
            return ValidationReport(
                False, i, "step {} {}: precondition {} fails".format(i, step.name, missing)
            )
        state = apply_action(state, step)
    for lit in p.goal:
        if lit.negated == (lit.atom in state):
            return ValidationReport(
                False, None, "goal literal {} does not hold in final state".format(lit)
            )
    return ValidationReport(True)


def reachable_states(init: State, actions: Iterable[GroundAction], limit: int = 10**6):
    """Breadth-first enumeration of all states reachable from init."""
    actions = list(actions)
    seen = {init}
    frontier = [init]
    while frontier:
        nxt = []
        for s in frontier:
            for a in actions:
                if applicable(s, a):
                    t = apply_action(s, a)
                    if t not in seen:
                        if len(seen) >= limit:
                            raise RuntimeError("reachable state limit exceeded")
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    return seen


# --- plan text format: one "(name obj...)" step per line -------------------


class PlanParseError(Exception):
    pass


def parse_plan_text(text: str, actions: Iterable[GroundAction]) -> Plan:
    """Resolve an IPC-style solution file against a grounded action list."""
    index = {(a.schema, a.objects): a for a in actions}
    steps: list[GroundAction] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        if not (line.startswith("(") and line.endswith(")")):
            raise PlanParseError("line {}: expected '(name obj...)'".format(lineno))
        parts = line[1:-1].split()
        if not parts:
            raise PlanParseError("line {}: empty step".format(lineno))
        key = (parts[0].lower(), tuple(x.lower() for x in parts[1:]))
        action = index.get(key)
        if action is None:
            raise PlanParseError(
                "line {}: no ground action matches {}".format(lineno, line)
            )
        steps.append(action)
    return Plan(tuple(steps))


def format_plan(plan: Plan) -> str:
    return "".join(step.name + "\n" for step in plan.steps)
