"""Instrumented forward state-space search and macro/selection benchmarks."""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .kg.store import Graph, Iri
from .macros import MacroSchema, augment_domain
from .pddl.ast import DomainDef, ProblemDef
from .select import (
    NoDataForDomain,
    select_ontology,
    select_random,
)
from .semantics import (
    GroundAction,
    Plan,
    State,
    applicable,
    apply_action,
    goal_satisfied,
    ground,
)

ALGORITHMS = ("breadth-first", "greedy-best-first", "a-star")
HEURISTICS = ("goal-count", "zero")


@dataclass(frozen=True)
class SearchConfig:
    algorithm: str = "breadth-first"
    heuristic: str = "goal-count"
    max_expansions: int = 1_000_000
    max_seconds: float = 60.0
    seed: int = 0  # recorded for tie-order audits; search itself is FIFO

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError("unknown algorithm '{}'".format(self.algorithm))
        if self.heuristic not in HEURISTICS:
            raise ValueError("unknown heuristic '{}'".format(self.heuristic))
        if self.max_expansions <= 0 or self.max_seconds <= 0:
            raise ValueError("limits must be positive")


@dataclass
class SearchStats:
    expanded: int = 0
    evaluated: int = 0
    generated: int = 0
    plan_cost: Optional[int] = None
    wall_time: float = 0.0
    status: str = "solved"  # "solved" | "exhausted" | "limit"


def _heuristic(name: str, p: ProblemDef) -> Callable[[State], int]:
    if name == "zero":
        return lambda s: 0
    goal = p.goal

    def goal_count(s: State) -> int:
        unsatisfied = 0
        for lit in goal:
            if lit.negated == (lit.atom in s):
                unsatisfied += 1
        return unsatisfied

    return goal_count


def solve(
    d: DomainDef, p: ProblemDef, cfg: SearchConfig = SearchConfig()
) -> tuple[Optional[Plan], SearchStats]:
    """Forward search from the initial state.

    Counters: generated = nodes constructed (the root included), evaluated =
    heuristic calls, expanded = nodes popped and expanded.  Duplicates are
    detected on generation, before evaluation, so generated >= evaluated >=
    expanded always holds.  FIFO tie order by generation index makes runs
    deterministic.
    """
    start = time.monotonic()
    actions = ground(d, p)
    h = _heuristic(cfg.heuristic, p)
    stats = SearchStats()

    init: State = frozenset(p.init)
    # node: (state, parent node, action leading here, depth)
    root = (init, None, None, 0)
    stats.generated = 1
    stats.evaluated = 1
    h0 = h(init)

    def priority(hval: int, depth: int) -> tuple:
        if cfg.algorithm == "breadth-first":
            return (depth,)
        if cfg.algorithm == "greedy-best-first":
            return (hval,)
        return (depth + hval, hval)

    counter = 0
    frontier: list[tuple] = [(priority(h0, 0), counter, root)]
    seen: set[State] = {init}

    while frontier:
        if time.monotonic() - start > cfg.max_seconds:
            stats.status = "limit"
            stats.wall_time = time.monotonic() - start
            return None, stats
        _, _, node = heapq.heappop(frontier)
        state, _, _, depth = node
        if goal_satisfied(state, p):
            steps = []
            cur = node
            while cur[1] is not None:
                steps.append(cur[2])
                cur = cur[1]
            steps.reverse()
            plan = Plan(tuple(steps))
            stats.plan_cost = plan.cost
            stats.wall_time = time.monotonic() - start
            return plan, stats
        if stats.expanded >= cfg.max_expansions:
            stats.status = "limit"
            stats.wall_time = time.monotonic() - start
            return None, stats
        stats.expanded += 1
        for a in actions:
            if applicable(state, a):
                succ = apply_action(state, a)
                stats.generated += 1
                if succ in seen:
                    continue
                seen.add(succ)
                stats.evaluated += 1
                counter += 1
                heapq.heappush(
                    frontier,
                    (priority(h(succ), depth + 1), counter, (succ, node, a, depth + 1)),
                )
    stats.status = "exhausted"
    stats.wall_time = time.monotonic() - start
    return None, stats


# --- macro benchmark -------------------------------------------------------


@dataclass(frozen=True)
class BenchRow:
    problem: str
    variant: str  # "original" | "macro"
    stats: SearchStats


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def solved_rows(self, variant: str) -> list[BenchRow]:
        return [
            r for r in self.rows if r.variant == variant and r.stats.status == "solved"
        ]

    def mean(self, variant: str, attr: str) -> Optional[float]:
        rows = self.solved_rows(variant)
        if not rows:
            return None
        return sum(getattr(r.stats, attr) for r in rows) / len(rows)

    def regressions(self) -> list[str]:
        """Problems where the macro variant expanded more nodes."""
        original = {r.problem: r.stats for r in self.rows if r.variant == "original"}
        out = []
        for r in self.rows:
            if r.variant != "macro" or r.stats.status != "solved":
                continue
            base = original.get(r.problem)
            if base and base.status == "solved" and r.stats.expanded > base.expanded:
                out.append(r.problem)
        return out

    def to_csv(self) -> str:
        lines = ["problem,variant,expanded,evaluated,generated,cost,time"]
        for r in self.rows:
            cost = "" if r.stats.plan_cost is None else r.stats.plan_cost
            lines.append(
                "{},{},{},{},{},{},{:.4f}".format(
                    r.problem, r.variant, r.stats.expanded, r.stats.evaluated,
                    r.stats.generated, cost, r.stats.wall_time,
                )
            )
        return "\n".join(lines) + "\n"

    def format_table(self) -> str:
        header = "{:<16} {:<9} {:>9} {:>9} {:>9} {:>6}".format(
            "problem", "variant", "expanded", "evaluated", "generated", "cost"
        )
        lines = [header, "-" * len(header)]
        for r in self.rows:
            cost = "-" if r.stats.plan_cost is None else str(r.stats.plan_cost)
            lines.append(
                "{:<16} {:<9} {:>9} {:>9} {:>9} {:>6}".format(
                    r.problem, r.variant, r.stats.expanded, r.stats.evaluated,
                    r.stats.generated, cost,
                )
            )
        for variant in ("original", "macro"):
            if any(r.variant == variant for r in self.rows):
                means = [self.mean(variant, a) for a in ("expanded", "evaluated", "generated")]
                if means[0] is not None:
                    lines.append(
                        "{:<16} {:<9} {:>9.1f} {:>9.1f} {:>9.1f}".format(
                            "mean", variant, *means
                        )
                    )
        regressed = self.regressions()
        if regressed:
            lines.append("macro regressions: " + ", ".join(regressed))
        return "\n".join(lines)


def bench_compare(
    d: DomainDef,
    macros: Iterable[MacroSchema],
    problems: Iterable[ProblemDef],
    cfg: SearchConfig = SearchConfig(),
    k: int = 2,
) -> BenchReport:
    """Solve each problem in the original and macro-augmented domain."""
    macros = list(macros)
    augmented = augment_domain(d, macros, k)
    report = BenchReport()
    for p in problems:
        for variant, dom in (("original", d), ("macro", augmented)):
            _, stats = solve(dom, p, cfg)
            report.rows.append(BenchRow(p.name, variant, stats))
    return report


# --- selection-policy experiment ------------------------------------------

#: Built-in planner configurations that stand in for external planners.
PLANNER_CONFIGS: dict[str, SearchConfig] = {
    "bfs": SearchConfig(algorithm="breadth-first", heuristic="zero"),
    "gbfs-goalcount": SearchConfig(algorithm="greedy-best-first", heuristic="goal-count"),
    "astar-goalcount": SearchConfig(algorithm="a-star", heuristic="goal-count"),
    "gbfs-zero": SearchConfig(algorithm="greedy-best-first", heuristic="zero"),
}


@dataclass(frozen=True)
class PolicyRow:
    problem: str
    policy: str
    planner: str
    stats: SearchStats


@dataclass
class PolicyReport:
    rows: list[PolicyRow] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    def mean(self, policy: str, attr: str) -> Optional[float]:
        rows = [
            r for r in self.rows if r.policy == policy and r.stats.status == "solved"
        ]
        if not rows:
            return None
        return sum(getattr(r.stats, attr) for r in rows) / len(rows)

    def format_table(self) -> str:
        lines = [
            "{:<16} {:<9} {:<16} {:>9} {:>6}".format(
                "problem", "policy", "planner", "expanded", "cost"
            )
        ]
        for r in self.rows:
            cost = "-" if r.stats.plan_cost is None else str(r.stats.plan_cost)
            lines.append(
                "{:<16} {:<9} {:<16} {:>9} {:>6}".format(
                    r.problem, r.policy, r.planner, r.stats.expanded, cost
                )
            )
        for policy in ("ontology", "random"):
            mean_exp = self.mean(policy, "expanded")
            mean_cost = self.mean(policy, "plan_cost")
            if mean_exp is not None:
                lines.append(
                    "{:<16} {:<9} {:<16} {:>9.1f} {:>6.1f}".format(
                        "mean", policy, "", mean_exp, mean_cost
                    )
                )
        for f in self.failures:
            lines.append("no data: " + f)
        return "\n".join(lines)


def policy_experiment(
    g: Graph,
    tasks: Iterable[tuple[DomainDef, Iri, ProblemDef]],
    cfg_overrides: Optional[dict[str, SearchConfig]] = None,
    seed: int = 0,
) -> PolicyReport:
    """Run the ontology and random selection policies over (domain, problem)
    tasks, picking among the built-in planner configurations."""
    from .mapper import planner_iri

    configs = dict(PLANNER_CONFIGS)
    if cfg_overrides:
        configs.update(cfg_overrides)
    candidates = [planner_iri(name) for name in sorted(configs)]
    local = {planner_iri(name): name for name in configs}

    report = PolicyReport()
    for i, (d, domain, p) in enumerate(tasks):
        try:
            picked = select_ontology(g, domain, candidates)
        except NoDataForDomain as exc:
            report.failures.append("{}: {}".format(p.name, exc))
            picked = None
        if picked is not None:
            name = local[picked.chosen]
            _, stats = solve(d, p, configs[name])
            report.rows.append(PolicyRow(p.name, "ontology", name, stats))
        outcome = select_random(candidates, seed + i)
        name = local[outcome.chosen]
        _, stats = solve(d, p, configs[name])
        report.rows.append(PolicyRow(p.name, "random", name, stats))
    return report
