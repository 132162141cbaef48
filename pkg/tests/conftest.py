import random

import pytest

from ckptsched import TaskPlan, fig4_scenario

from oracles import random_plan

CORPUS_SEED = 20260809


def make_corpus(count: int = 500, seed: int = CORPUS_SEED, **kwargs) -> list[TaskPlan]:
    rng = random.Random(seed)
    return [random_plan(rng, **kwargs) for _ in range(count)]


@pytest.fixture(scope="session")
def corpus() -> list[TaskPlan]:
    """500 random plans, N in 2..6, p in [0.5, 1], costs in [0, 10]."""
    return make_corpus()


@pytest.fixture(scope="session")
def corpus_uniform_correct() -> list[TaskPlan]:
    """Same shape of corpus but t_correct shared across each plan's steps."""
    return make_corpus(uniform_t_correct=True)


@pytest.fixture()
def fig4_plan() -> TaskPlan:
    return fig4_scenario().plan
