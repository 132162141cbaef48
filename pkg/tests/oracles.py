"""Independent reference implementations used only to check the library.

Each function recomputes a quantity by a route the library does not take:
plain product loops for the kernels, a dense linear solve over a policy's
state equations instead of the per-row closed form, and sweep-to-convergence
fixed-point iteration instead of the algebraic fixed point.
"""

from __future__ import annotations

import math
import random

import numpy as np

from ckptsched import Policy, StepModel, TaskPlan


def ref_survival(plan: TaskPlan, i: int, j: int) -> float:
    return math.prod(s.p_a for s in plan.steps[i:j])


def ref_first_error(plan: TaskPlan, i: int, j: int) -> list[tuple[int, float]]:
    out = []
    for m in range(i + 1, j + 1):
        prefix = math.prod(s.p_a for s in plan.steps[i : m - 1])
        out.append((m, prefix * (1.0 - plan.steps[m - 1].p_a)))
    return out


def _branch_cost(plan: TaskPlan, i: int, m: int, j: int, include_correct: bool) -> float:
    cost = sum(s.t_diagnose for s in plan.steps[i:m])
    cost += sum(s.t_redo for s in plan.steps[m - 1 : j])
    if include_correct:
        cost += plan.steps[m - 1].t_correct
    return cost


def linear_policy_values(
    plan: TaskPlan, policy: Policy, include_correct: bool
) -> np.ndarray:
    """Policy values by solving the full linear state-equation system.

    Row i states: V[i] - S(i,j) V[j] - sum_m q(m) V[m-1] = confirm + error
    costs, with j the policy's checkpoint. No row-local fixed point is used;
    the self-reference sits in the matrix like any other coupling.
    """
    n = plan.n
    A = np.zeros((n + 1, n + 1))
    b = np.zeros(n + 1)
    A[n, n] = 1.0
    for i in range(n):
        j = policy.next_ckpt[i]
        A[i, i] += 1.0
        A[i, j] -= ref_survival(plan, i, j)
        rhs = plan.steps[j - 1].t_confirm
        for m, q in ref_first_error(plan, i, j):
            rhs += q * _branch_cost(plan, i, m, j, include_correct)
            A[i, m - 1] -= q
        b[i] = rhs
    return np.linalg.solve(A, b)


def iterate_to_fixed_point(
    plan: TaskPlan,
    include_correct: bool,
    tol: float = 1e-13,
    max_sweeps: int = 200_000,
) -> tuple[list[float], list[int]]:
    """Optimal values by repeated full table sweeps until convergence."""
    n = plan.n
    value = [0.0] * (n + 1)
    next_ckpt = [0] * n
    for _ in range(max_sweeps):
        new = [0.0] * (n + 1)
        delta = 0.0
        for i in range(n - 1, -1, -1):
            best = math.inf
            best_j = -1
            for j in range(i + 1, n + 1):
                t = plan.steps[j - 1].t_confirm
                t += ref_survival(plan, i, j) * new[j]
                for m, q in ref_first_error(plan, i, j):
                    cont = value[i] if m - 1 == i else new[m - 1]
                    t += q * (_branch_cost(plan, i, m, j, include_correct) + cont)
                if t < best:
                    best = t
                    best_j = j
            new[i] = best
            next_ckpt[i] = best_j
            delta = max(delta, abs(new[i] - value[i]))
        value = new
        if delta < tol:
            return value, next_ckpt
    raise AssertionError("fixed-point iteration did not converge")


def random_plan(
    rng: random.Random,
    n_lo: int = 2,
    n_hi: int = 6,
    p_lo: float = 0.5,
    p_hi: float = 1.0,
    cost_hi: float = 10.0,
    uniform_t_correct: bool = False,
) -> TaskPlan:
    n = rng.randint(n_lo, n_hi)
    shared_correct = rng.uniform(0.0, cost_hi)
    return TaskPlan(
        StepModel(
            p_a=rng.uniform(p_lo, p_hi),
            t_confirm=rng.uniform(0.0, cost_hi),
            t_diagnose=rng.uniform(0.0, cost_hi),
            t_correct=shared_correct if uniform_t_correct else rng.uniform(0.0, cost_hi),
            t_redo=rng.uniform(0.0, cost_hi),
        )
        for _ in range(n)
    )
