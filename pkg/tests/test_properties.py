"""Randomized algebraic laws at quick-feedback case counts.

The acceptance suite reruns every law at >= 1000 cases.
"""

import pytest

from property_laws import LAWS, run_law

QUICK = 150


@pytest.mark.parametrize("name", sorted(LAWS))
def test_law(name):
    assert run_law(name, QUICK) == QUICK
