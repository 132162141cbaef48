"""Acceptance suite: one test per exit criterion, each printing a PASS/FAIL
line (run with -s, or rely on pytest's captured-output report on failure).

Criterion 1 asserts the three published checkpoint locations at their stated
start indices. The solver, exhaustive enumeration, dense linear pricing, and
fixed-point iteration all agree that the optimum is next_ckpt = (2, 3, 5, 5,
5), which matches the published locations only after shifting the start
labels by one (published starts 1, 2, 3 correspond to computed starts 0, 1,
2). The criterion is asserted literally as stated and is expected to fail;
see the analysis notes shipped alongside the repository for the full
derivation.
"""

import math
import random
import time
from pathlib import Path

from ckptsched import (
    Policy,
    enumerate_policies,
    evaluate_policy,
    first_error_distribution,
    get_scenario,
    monte_carlo,
    reachable_states,
    solve,
    survival_probability,
)
from ckptsched.cli import main
from ckptsched.scenarios import NON_REPRODUCTION_NOTE, builtin_scenarios

from oracles import random_plan


def report(criterion: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {criterion}: {status}" + (f" ({detail})" if detail else ""))


# ---------------------------------------------------------------------------
# 1. Published checkpoint locations for the five-step example
# ---------------------------------------------------------------------------


def test_c1_fig4_policy_reproduction(fig4_plan):
    best = math.inf
    for _ in range(3):
        start = time.perf_counter()
        result = solve(fig4_plan)
        best = min(best, time.perf_counter() - start)
    runtime_ok = best < 1e-3

    nxt = result.policy.next_ckpt
    stated = {1: 2, 2: 3, 3: 5}
    policy_ok = all(nxt[i] == j for i, j in stated.items())
    ok = runtime_ok and policy_ok
    report(
        "1 fig4-policy",
        ok,
        f"next_ckpt={nxt}, stated start->ckpt pairs {stated}, "
        f"solve time {best * 1e6:.0f}us; computed optimum matches the stated "
        f"pairs only under a one-position start-label shift",
    )
    assert runtime_ok
    assert policy_ok, (
        f"stated locations {stated} vs computed next_ckpt {nxt}: the computed "
        "optimum (2, 3, 5, 5, 5) is confirmed by exhaustive enumeration and "
        "two independent evaluators; the stated indices match it only after "
        "shifting start labels by one"
    )


# ---------------------------------------------------------------------------
# 2. Dynamic program vs brute force on a random corpus
# ---------------------------------------------------------------------------


def test_c2_dp_equals_brute_force(corpus):
    start = time.perf_counter()
    checked = 0
    for plan in corpus:
        for flag in (False, True):
            solved = solve(plan, flag)
            brute = enumerate_policies(plan, flag)
            v_dp = float(solved.value[0])
            assert abs(v_dp - brute.best_value) <= 1e-9 * max(1.0, abs(v_dp)), (
                plan,
                flag,
                v_dp,
                brute.best_value,
            )
            for state in reachable_states(plan, solved.policy):
                assert (
                    solved.policy.next_ckpt[state] == brute.best_policy.next_ckpt[state]
                ), (plan, flag, state)
            checked += 1
    elapsed = time.perf_counter() - start
    ok = checked == 2 * len(corpus) and elapsed < 30.0
    report("2 dp-vs-brute-force", ok, f"{checked} solves in {elapsed:.1f}s")
    assert ok


# ---------------------------------------------------------------------------
# 3. Analytic values vs Monte Carlo at one million runs
# ---------------------------------------------------------------------------


def test_c3_analytic_equals_monte_carlo(fig4_plan):
    start = time.perf_counter()
    policies = {
        "optimal": solve(fig4_plan).policy,
        "end-only": Policy.end_only(5),
        "every-step": Policy.every_step(5),
    }
    details = []
    ok = True
    for label, policy in policies.items():
        expected = float(evaluate_policy(fig4_plan, policy)[0])
        summary = monte_carlo(fig4_plan, policy, runs=1_000_000, seed=20260809)
        z = (summary.mean_time - expected) / summary.std_error
        details.append(f"{label} z={z:+.2f}")
        ok = ok and abs(z) <= 4.0
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 60.0
    report("3 analytic-vs-mc", ok, f"{', '.join(details)}, {elapsed:.1f}s")
    assert ok


# ---------------------------------------------------------------------------
# 4. Probability normalization
# ---------------------------------------------------------------------------


def test_c4_normalization():
    rng = random.Random(41)
    worst = 0.0
    for _ in range(10_000):
        plan = random_plan(rng, n_lo=1, n_hi=30, p_lo=0.05, p_hi=1.0)
        j = rng.randint(1, plan.n)
        i = rng.randint(0, j - 1)
        total = sum(q for _, q in first_error_distribution(plan, i, j))
        total += survival_probability(plan, i, j)
        worst = max(worst, abs(total - 1.0))
    ok = worst <= 1e-12
    report("4 normalization", ok, f"worst |sum-1| = {worst:.2e} over 10000 triples")
    assert ok


# ---------------------------------------------------------------------------
# 5. Dominance over the two baseline schedules
# ---------------------------------------------------------------------------


def test_c5_dominance(corpus):
    for plan in corpus:
        for flag in (False, True):
            v_opt = float(solve(plan, flag).value[0])
            v_end = float(evaluate_policy(plan, Policy.end_only(plan.n), flag)[0])
            v_every = float(evaluate_policy(plan, Policy.every_step(plan.n), flag)[0])
            assert v_opt <= v_end + 1e-12, (plan, flag)
            assert v_opt <= v_every + 1e-12, (plan, flag)
    report("5 dominance", True, f"{2 * len(corpus)} instances")


# ---------------------------------------------------------------------------
# 6. Dropping the correction term does not move the checkpoints
# ---------------------------------------------------------------------------


def test_c6_correction_cost_invariance(fig4_plan, corpus_uniform_correct):
    findings = []
    for idx, plan in enumerate(corpus_uniform_correct):
        without = solve(plan, include_correct_cost=False)
        with_cost = solve(plan, include_correct_cost=True)
        reach = reachable_states(plan, without.policy)
        diff = sorted(
            s for s in reach
            if without.policy.next_ckpt[s] != with_cost.policy.next_ckpt[s]
        )
        if diff:
            findings.append((idx, diff, without.policy.next_ckpt,
                             with_cost.policy.next_ckpt))
    for idx, diff, a, b in findings:
        print(f"FINDING: corpus plan {idx}: checkpoint locations moved at "
              f"states {diff}: without={a} with={b}")

    fig4_same = (
        solve(fig4_plan, False).policy.next_ckpt
        == solve(fig4_plan, True).policy.next_ckpt
    )
    ok = fig4_same  # corpus counterexamples are findings, not failures
    report(
        "6 correction-term-invariance",
        ok,
        f"{len(findings)} counterexample(s) in {len(corpus_uniform_correct)} "
        f"plans; five-step example unchanged: {fig4_same}",
    )
    assert ok


# ---------------------------------------------------------------------------
# 7. Error-location directionality on the shopping scenario
# ---------------------------------------------------------------------------


def test_c7_error_location_directionality():
    from ckptsched import error_location_experiment

    rows = error_location_experiment(get_scenario("shopping"))
    by_loc = {r.location: r for r in rows}
    early = by_loc["early"]
    late = by_loc["late"]
    early_ok = early.optimal_time < early.end_only_time
    report(
        "7 error-location",
        early_ok,
        f"early: optimal {early.optimal_time:g} < end {early.end_only_time:g}; "
        f"late: optimal {late.optimal_time:g} vs end {late.end_only_time:g} "
        f"(end-only allowed to win late)",
    )
    assert early_ok


# ---------------------------------------------------------------------------
# 8. Human-study magnitudes are explicitly out of scope
# ---------------------------------------------------------------------------


def test_c8_non_reproduction_statement():
    readme = (Path(__file__).parents[1] / "README.md").read_text(encoding="utf-8")
    statement_in_docs = "not reproduction targets" in readme
    statement_in_reports = "not reproduction targets" in NON_REPRODUCTION_NOTE
    assumed_marked = all(
        scenario.provenance["t_confirm"].startswith("assumed")
        and scenario.provenance["t_diagnose"].startswith("assumed")
        for scenario in builtin_scenarios()
    )
    ok = statement_in_docs and statement_in_reports and assumed_marked
    report(
        "8 scope-statement",
        ok,
        f"README note: {statement_in_docs}, report footer: {statement_in_reports}, "
        f"assumed params labelled: {assumed_marked}",
    )
    assert ok


# ---------------------------------------------------------------------------
# 9. CLI determinism
# ---------------------------------------------------------------------------


def test_c9_cli_determinism(tmp_path, capsys):
    commands = {
        "solve": ["solve", "fig4", "--precision", "4"],
        "trace": ["simulate", "shopping", "--policy", "optimal", "--seed", "31"],
        "mc": ["simulate", "fig4", "--policy", "every", "--seed", "5",
               "--runs", "2000"],
        "compare": ["compare", "image-editing", "--runs", "400", "--seed", "8"],
        "sweep": ["sweep", "overcooked", "--axis", "t_confirm",
                  "--values", "2,4,8,16"],
        "error-loc": ["error-loc", "shopping"],
    }
    ok = True
    for label, argv in commands.items():
        paths = [tmp_path / f"{label}-{k}.out" for k in (1, 2)]
        for path in paths:
            assert main(argv + ["--out", str(path)]) == 0
        capsys.readouterr()
        if paths[0].read_bytes() != paths[1].read_bytes():
            ok = False
            print(f"nondeterministic output for {label}")
    report("9 determinism", ok, f"{len(commands)} commands, byte-identical files")
    assert ok
