"""Shared fixtures: shipped scenarios are expensive, so run each once per
session and let every test module reuse the result."""

import time

import pytest

from memsim.scenario import find_scenario, load_scenario, run_scenario

COMPARISON_TRIO = ("strukov_switching", "yang_m11_switching", "pickett_switching")


def run_shipped(name):
    return run_scenario(load_scenario(find_scenario(name)))


@pytest.fixture(scope="session")
def comparison_trio():
    """The three saturating comparison runs plus their total wall time."""
    t0 = time.perf_counter()
    results = {name: run_shipped(name) for name in COMPARISON_TRIO}
    elapsed = time.perf_counter() - t0
    return results, elapsed


@pytest.fixture(scope="session")
def strukov_fig2_result():
    return run_shipped("strukov_fig2")


@pytest.fixture(scope="session")
def yang_m11_fig4_result():
    return run_shipped("yang_m11_fig4")


@pytest.fixture(scope="session")
def yang_m1_result():
    return run_shipped("yang_m1_reduction")
