"""Grounding, state transition, and plan validation semantics."""

import itertools
import random

import pytest

from plankb import bundles
from plankb.pddl.ast import Atom, Literal
from plankb.semantics import (
    DomainProblemMismatch,
    NotApplicable,
    Plan,
    PlanParseError,
    applicable,
    apply_action,
    format_plan,
    goal_satisfied,
    ground,
    parse_plan_text,
    reachable_states,
    validate_plan,
)


def oracle_ground(d, p):
    """Brute-force grounding oracle: substitute every object tuple and keep
    the type-consistent, equality-satisfying ones."""
    pool = list(d.constants) + list(p.objects)
    result = []
    for schema in d.actions:
        for combo in itertools.product([o for o, _ in pool], repeat=len(schema.params)):
            ok = True
            for (var, ptype), obj in zip(schema.params, combo):
                otype = dict(pool)[obj]
                if not d.is_subtype(otype, ptype):
                    ok = False
                    break
            if not ok:
                continue
            binding = dict(zip(schema.variables, combo))
            for lit in schema.precondition:
                if lit.atom.predicate == "=":
                    a = lit.atom.substitute(binding)
                    if (a.args[0] == a.args[1]) == lit.negated:
                        ok = False
                        break
            if ok:
                result.append((schema.name, combo))
    return sorted(result)


@pytest.mark.parametrize("domain_name,problem_idx", [
    ("blocksworld", 0), ("blocksworld", 7), ("gripper", 0), ("driverlog", 0),
])
def test_ground_matches_oracle(domain_name, problem_idx):
    d = bundles.load_domain(domain_name)
    p = bundles.load_problems(domain_name)[problem_idx]
    actual = sorted((a.schema, a.objects) for a in ground(d, p))
    assert actual == oracle_ground(d, p)


def test_bw_p01_ground_count():
    # 3 blocks: pick-up 3, put-down 3, stack 9, unstack 9.
    d = bundles.load_domain("blocksworld")
    p = bundles.load_problems("blocksworld")[0]
    actions = ground(d, p)
    assert len(actions) == 24
    by_schema = {}
    for a in actions:
        by_schema[a.schema] = by_schema.get(a.schema, 0) + 1
    assert by_schema == {"pick-up": 3, "put-down": 3, "stack": 9, "unstack": 9}


def test_ground_is_deterministic():
    d = bundles.load_domain("gripper")
    p = bundles.load_problems("gripper")[0]
    assert [a.name for a in ground(d, p)] == [a.name for a in ground(d, p)]


def test_ground_rejects_foreign_problem():
    d = bundles.load_domain("blocksworld")
    p = bundles.load_problems("gripper")[0]
    with pytest.raises(DomainProblemMismatch):
        ground(d, p)


def test_typed_grounding_respects_types():
    d = bundles.load_domain("gripper")
    p = bundles.load_problems("gripper")[0]
    for a in ground(d, p):
        if a.schema == "move":
            rooms = {o for o, t in p.objects if t == "room"}
            assert set(a.objects) <= rooms


def test_apply_follows_strips_rule():
    d = bundles.load_domain("blocksworld")
    p = bundles.load_problems("blocksworld")[0]
    state = frozenset(p.init)
    for a in ground(d, p):
        if applicable(state, a):
            nxt = apply_action(state, a)
            assert nxt == (state - a.delete) | a.add


def test_apply_raises_when_not_applicable():
    d = bundles.load_domain("blocksworld")
    p = bundles.load_problems("blocksworld")[0]
    state = frozenset(p.init)
    blocked = next(a for a in ground(d, p) if not applicable(state, a))
    with pytest.raises(NotApplicable):
        apply_action(state, blocked)


def test_random_walks_stay_consistent():
    """Closure property: every state along random walks keeps exactly one
    block in the hand or a free hand, matching blocksworld physics."""
    d = bundles.load_domain("blocksworld")
    p = bundles.load_problems("blocksworld")[2]
    actions = ground(d, p)
    rng = random.Random(42)
    for _ in range(50):
        state = frozenset(p.init)
        for _ in range(20):
            options = [a for a in actions if applicable(state, a)]
            if not options:
                break
            state = apply_action(state, rng.choice(options))
            holding = [a for a in state if a.predicate == "holding"]
            hand_free = Atom("handempty", ()) in state
            assert hand_free == (len(holding) == 0)
            assert len(holding) <= 1


def test_goal_satisfied_negative_literal():
    p_goal = frozenset({Literal(Atom("p", ("a",)), negated=True)})
    from plankb.pddl.ast import ProblemDef

    prob = ProblemDef("t", "d", (("a", "object"),), frozenset(), p_goal)
    assert goal_satisfied(frozenset(), prob)
    assert not goal_satisfied(frozenset({Atom("p", ("a",))}), prob)


def test_validate_plan_accepts_bundled_corpus():
    for name in bundles.DOMAIN_NAMES:
        d = bundles.load_domain(name)
        problems = {p.name: p for p in bundles.load_problems(name)}
        for path in bundles.plan_paths(name):
            problem_name, _ = path.stem.rsplit(".", 1)
            p = problems[problem_name]
            plan = parse_plan_text(path.read_text(), ground(d, p))
            report = validate_plan(d, p, plan)
            assert report.valid, report.reason


def test_validate_plan_flags_bad_step():
    d = bundles.load_domain("blocksworld")
    p = bundles.load_problems("blocksworld")[0]
    actions = {a.name: a for a in ground(d, p)}
    bad = Plan((actions["(pick-up a)"],))  # a is under c in bw-p01
    report = validate_plan(d, p, bad)
    assert not report.valid
    assert report.failed_step == 0


def test_validate_plan_flags_unmet_goal():
    d = bundles.load_domain("blocksworld")
    p = bundles.load_problems("blocksworld")[0]
    report = validate_plan(d, p, Plan(()))
    assert not report.valid
    assert report.failed_step is None


def test_plan_text_roundtrip():
    d = bundles.load_domain("blocksworld")
    p = bundles.load_problems("blocksworld")[0]
    actions = ground(d, p)
    text = bundles.plan_paths("blocksworld")[0].read_text()
    plan = parse_plan_text(text, actions)
    assert parse_plan_text(format_plan(plan), actions) == plan


def test_plan_text_unknown_action():
    d = bundles.load_domain("blocksworld")
    p = bundles.load_problems("blocksworld")[0]
    with pytest.raises(PlanParseError):
        parse_plan_text("(fly a b)", ground(d, p))


def test_plan_cost_is_step_count():
    d = bundles.load_domain("blocksworld")
    p = bundles.load_problems("blocksworld")[0]
    text = bundles.plan_paths("blocksworld")[0].read_text()
    plan = parse_plan_text(text, ground(d, p))
    assert plan.cost == len(plan.steps) == 6


def test_reachable_states_three_blocks():
    """3-block blocksworld has 22 configurations plus holding states.

    Tower layouts: 13 (1 three-tower ordering x 6, 3 two-plus-one x 6 / ...)
    counted exactly by the oracle below; the enumeration must agree with a
    direct closed-form count of 22 hand-free states plus 9 holding states
    for n = 3 blocks.
    """
    d = bundles.load_domain("blocksworld")
    p = bundles.load_problems("blocksworld")[0]
    states = reachable_states(frozenset(p.init), ground(d, p))
    hand_free = [s for s in states if Atom("handempty", ()) in s]
    holding = [s for s in states if Atom("handempty", ()) not in s]
    assert len(hand_free) == 13
    assert len(holding) == 9
    assert len(states) == 22
