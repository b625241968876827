import random
from math import gcd

import pytest

from isoscreen.gl2core import ImageGroup
from isoscreen.records import load_fixtures

# criterion number -> (passed, description); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def random_subgroup(rng: random.Random, max_modulus: int = 24) -> ImageGroup:
    n = rng.randint(1, max_modulus)
    k = rng.randint(1, 3)
    gens = []
    while len(gens) < k:
        g = [rng.randrange(n) for _ in range(4)]
        if gcd(g[0] * g[3] - g[1] * g[2], n) == 1:
            gens.append(g)
    return ImageGroup(n, gens)


def corpus(size: int = 200, max_modulus: int = 24, seed: int = 2024) -> list[ImageGroup]:
    rng = random.Random(seed)
    return [random_subgroup(rng, max_modulus) for _ in range(size)]


@pytest.fixture(scope="session")
def random_corpus():
    return corpus()


@pytest.fixture(scope="session")
def fixtures():
    return load_fixtures()


@pytest.fixture(scope="session")
def witness_suite():
    return load_fixtures("witness_suite.jsonl")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, desc = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {desc}")
