"""Ground-truth machinery: trace simulation, Monte Carlo, and brute force.

The simulator plays out the confirm / diagnose / correct / redo cycle
step by step under an arbitrary checkpoint policy, so its sample mean is an
estimate of the analytic expected time that shares no code with the solver's
recursion. Exhaustive policy enumeration provides the independent optimum for
small plans. Both exist to check the solver, and the solver to check them.

Randomness: run r of master seed s reads its own disjoint window of a
counter-based uniform stream, so any single run is reproducible in isolation
and results do not depend on execution order. Agent forward-execution time is
never charged (cost is user interaction time); execute events are logged with
zero duration for trace readability.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import (
    Policy,
    TaskPlan,
    diagnose_redo_prefix_sums,
    plan_columns,
    validate_plan,
)
from .solver import _policy_values

DEFAULT_ENUM_CAP = 8

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def _mix64(x: int) -> int:
    """splitmix64 finalizer: bijective avalanche mix of a 64-bit word."""
    x = ((x ^ (x >> 30)) * _MIX_A) & _MASK64
    x = ((x ^ (x >> 27)) * _MIX_B) & _MASK64
    return x ^ (x >> 31)


class RunStream:
    """Uniform [0, 1) source for one simulation run.

    Implements splitmix64 as a counter-based generator: master seed s owns
    one long counter sequence, and run r reads the window starting at counter
    r * 2**32 (draws per run never approach 2**32, so windows cannot overlap).
    Pure 64-bit integer arithmetic, identical on every platform.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int, run: int) -> None:
        if seed < 0:
            raise ValueError(f"seed must be >= 0, got {seed}")
        base = _mix64((seed + _GOLDEN) & _MASK64)
        self._state = (base + (run << 32) * _GOLDEN) & _MASK64

    def random(self) -> float:
        self._state = s = (self._state + _GOLDEN) & _MASK64
        return (_mix64(s) >> 11) * 2.0**-53


EXECUTE = "execute"
CONFIRM = "confirm"
DIAGNOSE = "diagnose"
CORRECT = "correct"
REDO = "redo"


class PlanTooLargeError(ValueError):
    """Plan exceeds the exhaustive-enumeration cap (policy count is N!)."""


@dataclass(frozen=True)
class TraceEvent:
    """One logged simulator event.

    ``index`` is a step number for execute/correct/redo and a state number
    for confirm/diagnose. ``ok`` is the sampled outcome, execute events only.
    """

    kind: str
    index: int
    seconds: float
    ok: bool | None = None


@dataclass(frozen=True)
class SimTrace:
    """Event log of one full run, ending in a clean confirmation at state N."""

    events: tuple[TraceEvent, ...]
    total_user_time: float
    cycles: int


@dataclass(frozen=True)
class MonteCarloSummary:
    runs: int
    mean_time: float
    std_error: float
    ci95: tuple[float, float]
    mean_cycles: float


@dataclass(frozen=True)
class EnumerationResult:
    best_policy: Policy
    best_value: float
    evaluated: int


def _run_cdcr(
    p: Sequence[float],
    tc: Sequence[float],
    td: Sequence[float],
    tcor: Sequence[float],
    tr: Sequence[float],
    next_ckpt: Sequence[int],
    outcomes: Callable[[int, int], Sequence[bool]],
    include_correct_cost: bool,
    events: list[TraceEvent] | None,
) -> tuple[float, int]:
    """Play one run to completion; returns (total user time, cycle count).

    ``outcomes(i, j)`` yields the success flags for executing steps i+1..j.
    Terminates with probability 1 whenever every p_a > 0.
    """
    n = len(p)
    total = 0.0
    cycles = 0
    i = 0
    while True:
        j = next_ckpt[i]
        oks = outcomes(i, j)
        first_fail = 0
        for off in range(j - i):
            k = i + 1 + off
            ok = bool(oks[off])
            if events is not None:
                events.append(TraceEvent(EXECUTE, k, 0.0, ok))
            if first_fail == 0 and not ok:
                first_fail = k
        total += tc[j - 1]
        if events is not None:
            events.append(TraceEvent(CONFIRM, j, tc[j - 1]))
        if first_fail == 0:
            if j == n:
                return total, cycles
            i = j
        else:
            cycles += 1
            m = first_fail
            for k in range(i + 1, m + 1):
                total += td[k - 1]
                if events is not None:
                    events.append(TraceEvent(DIAGNOSE, k, td[k - 1]))
            fix = tcor[m - 1] if include_correct_cost else 0.0
            total += fix
            if events is not None:
                events.append(TraceEvent(CORRECT, m, fix))
            for k in range(m, j + 1):
                total += tr[k - 1]
                if events is not None:
                    events.append(TraceEvent(REDO, k, tr[k - 1]))
            i = m - 1


def _sampled_outcomes(
    p: Sequence[float], stream: RunStream
) -> Callable[[int, int], Sequence[bool]]:
    """Fresh Bernoulli draw per executed step, redone steps included."""
    rand = stream.random

    def outcomes(i: int, j: int) -> Sequence[bool]:
        return [rand() < p[k] for k in range(i, j)]

    return outcomes


def _forced_outcomes(fail_step: int | None) -> Callable[[int, int], Sequence[bool]]:
    """Deterministic outcomes: ``fail_step`` fails on its first execution
    only, every other execution succeeds. None forces an error-free run."""
    attempts = {fail_step: 0}

    def outcomes(i: int, j: int) -> Sequence[bool]:
        oks = []
        for k in range(i + 1, j + 1):
            if k == fail_step:
                attempts[k] += 1
                oks.append(attempts[k] != 1)
            else:
                oks.append(True)
        return oks

    return outcomes


def _trace_from(
    plan: TaskPlan,
    policy: Policy,
    outcomes: Callable[[int, int], Sequence[bool]],
    include_correct_cost: bool,
) -> SimTrace:
    cols = plan_columns(plan)
    events: list[TraceEvent] = []
    total, cycles = _run_cdcr(
        *cols, policy.next_ckpt, outcomes, include_correct_cost, events
    )
    return SimTrace(events=tuple(events), total_user_time=total, cycles=cycles)


def simulate_run(
    plan: TaskPlan,
    policy: Policy,
    seed: int,
    include_correct_cost: bool = False,
) -> SimTrace:
    """Sample one full run and log every event.

    Identical to run index 0 of monte_carlo() with the same master seed.
    """
    validate_plan(plan)
    policy.validate_for(plan.n)
    outcomes = _sampled_outcomes([s.p_a for s in plan.steps], RunStream(seed, 0))
    return _trace_from(plan, policy, outcomes, include_correct_cost)


def simulate_run_forced(
    plan: TaskPlan,
    policy: Policy,
    fail_step: int | None,
    include_correct_cost: bool = False,
) -> SimTrace:
    """Deterministic run in which exactly one chosen step fails once.

    Conditioning is by outcome forcing, not rejection: ``fail_step`` fails on
    its first execution and succeeds on the redo, all other steps always
    succeed. With ``fail_step=None`` the run is error-free.
    """
    validate_plan(plan)
    policy.validate_for(plan.n)
    if fail_step is not None and not 1 <= fail_step <= plan.n:
        raise ValueError(f"fail_step must be in 1..{plan.n}, got {fail_step}")
    return _trace_from(plan, policy, _forced_outcomes(fail_step), include_correct_cost)


def monte_carlo(
    plan: TaskPlan,
    policy: Policy,
    runs: int,
    seed: int,
    include_correct_cost: bool = False,
) -> MonteCarloSummary:
    """Aggregate independent runs; deterministic given (plan, policy, seed).

    runs=1 reproduces simulate_run() totals exactly (same child stream).
    """
    validate_plan(plan)
    policy.validate_for(plan.n)
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    p, tc, td, tcor, tr = plan_columns(plan)
    next_ckpt = policy.next_ckpt
    totals = np.empty(runs)
    cycle_counts = np.empty(runs)
    for r in range(runs):
        outcomes = _sampled_outcomes(p, RunStream(seed, r))
        totals[r], cycle_counts[r] = _run_cdcr(
            p, tc, td, tcor, tr, next_ckpt, outcomes, include_correct_cost, None
        )
    mean = float(totals.mean())
    if runs > 1:
        std_error = float(totals.std(ddof=1)) / math.sqrt(runs)
    else:
        std_error = 0.0
    half = 1.96 * std_error
    return MonteCarloSummary(
        runs=runs,
        mean_time=mean,
        std_error=std_error,
        ci95=(mean - half, mean + half),
        mean_cycles=float(cycle_counts.mean()),
    )


def enumerate_policies(
    plan: TaskPlan,
    include_correct_cost: bool = False,
    max_n: int = DEFAULT_ENUM_CAP,
) -> EnumerationResult:
    """Evaluate every total forward policy and return the best.

    Policy count is N!, so plans above ``max_n`` raise PlanTooLargeError
    rather than silently truncating. Ties resolve to the lexicographically
    smallest next_ckpt vector.
    """
    validate_plan(plan)
    n = plan.n
    if n > max_n:
        raise PlanTooLargeError(
            f"plan has {n} steps; enumeration capped at {max_n} "
            f"({math.factorial(n)} policies)"
        )
    p, tc, _, tcor, _ = plan_columns(plan)
    td_sum, tr_sum = diagnose_redo_prefix_sums(plan)
    best_value = math.inf
    best: tuple[int, ...] | None = None
    evaluated = 0
    for candidate in itertools.product(*(range(i + 1, n + 1) for i in range(n))):
        v0 = _policy_values(
            n, candidate, p, tc, tcor, td_sum, tr_sum, include_correct_cost
        )[0]
        evaluated += 1
        if v0 < best_value:
            best_value = v0
            best = candidate
    assert best is not None
    return EnumerationResult(
        best_policy=Policy(best), best_value=best_value, evaluated=evaluated
    )


def format_event(event: TraceEvent) -> str:
    """One text record: kind, index, seconds (6 decimal places)."""
    kind = event.kind
    if kind == EXECUTE:
        kind = "execute-ok" if event.ok else "execute-fail"
    return f"{kind} {event.index} {event.seconds:.6f}"


def format_trace(trace: SimTrace) -> str:
    """Newline-delimited event records followed by a summary line."""
    lines = [format_event(e) for e in trace.events]
    lines.append(f"total {trace.cycles} {trace.total_user_time:.6f}")
    return "\n".join(lines) + "\n"
