"""Shared fixtures: standard calculi, fuels, and small graph builders."""

from __future__ import annotations

import pytest

from ontoweave import presets
from ontoweave.consequence import CalculusPresentation, Fuel, Rule
from ontoweave.ontology import make_ontology
from ontoweave.syntax import make_signature, parse_formula


@pytest.fixture(scope="session")
def cpl():
    return presets.cpl()


@pytest.fixture(scope="session")
def conj():
    return presets.conj()


@pytest.fixture(scope="session")
def imp_fragment():
    return presets.implication_fragment()


@pytest.fixture(scope="session")
def rule_free():
    return presets.rule_free()


@pytest.fixture(scope="session")
def fuel():
    """Workhorse fuel: enough for corpus-scale derivations, fast."""
    return Fuel(max_closure_rounds=3, max_formula_size=24, max_set_size=50_000)


@pytest.fixture(scope="session")
def quick_fuel():
    return Fuel(max_closure_rounds=2, max_formula_size=14, max_set_size=20_000)


@pytest.fixture(scope="session")
def link_fuel():
    """Small fuel for link checkers inside graph fixtures."""
    return Fuel(max_closure_rounds=1, max_formula_size=12, max_set_size=4_000)


def binary_calculus(symbol: str) -> CalculusPresentation:
    """A conjunction-style calculus over one binary symbol."""
    sig = make_signature([(symbol, 2)])
    f = lambda s: parse_formula(s, sig)
    return CalculusPresentation(
        sig,
        rules=(
            Rule("E1", (f(f"{symbol}(x1, x2)"),), f("x1")),
            Rule("E2", (f(f"{symbol}(x1, x2)"),), f("x2")),
            Rule("I", (f("x1"), f("x2")), f(f"{symbol}(x1, x2)")),
        ),
    )


def plain_ontology(cal: CalculusPresentation, name: str):
    """An axiom-free ontology exposing the whole signature ontologically."""
    return make_ontology(cal, cal.sig, [], name)
