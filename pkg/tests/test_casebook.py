import json

import numpy as np
import pytest

from minimaxproof.casebook import (
    BOUNDS,
    CASES,
    P5_BOUND,
    get_case,
    list_cases,
    p5_max_error,
    t_domain,
)
from minimaxproof.exprlang import EvalEnv, eval_expr, parse_expr
from minimaxproof.prover import PROVED

REQUIRED = {"lemma_gamma_upper", "lemma_gamma_lower", "theorem1_kurepa", "theorem2_arcsin",
            "chain_fink", "chain_zhu", "chain_new_vs_zhu"}

# displayed chains, lower to upper
CHAINS = {
    "fink": ["shafer", "asin", "fink"],
    "malesevic97": ["shafer", "asin", "phi97", "fink"],
    "zhu": ["shafer", "shafer2", "asin", "zhu", "fink"],
    "new": ["shafer", "shafer2", "asin", "phinew", "zhu", "fink"],
}


def test_list_is_complete_and_stable():
    assert REQUIRED <= set(list_cases())
    assert list_cases() == list_cases()


def test_unknown_case():
    with pytest.raises(KeyError):
        get_case("nope")


def test_expected_constants_have_tolerances():
    for spec in CASES.values():
        for exp in spec.expected:
            assert exp.provenance
            assert exp.rtol is not None or exp.atol is not None


@pytest.mark.parametrize("chain", sorted(CHAINS))
def test_chains_hold_pointwise(chain):
    xs = np.linspace(0.0, 1.0, 1000)
    vals = [eval_expr(parse_expr(BOUNDS[b]), EvalEnv(xs, "np")) for b in CHAINS[chain]]
    for lower, upper in zip(vals, vals[1:]):
        assert np.all(upper - lower >= -1e-15)


def test_t_domain_substitution():
    ast = parse_expr(t_domain("asin(x)", "x"))
    v = float(eval_expr(ast, EvalEnv(0.3, "mp", 30)))
    assert v == pytest.approx(0.3 - np.sin(0.3), abs=1e-15)


def test_p5_bound():
    assert p5_max_error() <= P5_BOUND


@pytest.mark.parametrize("name", sorted(REQUIRED))
def test_case_passes(case_report, name):
    report = case_report(name)
    assert report.passed, report.table
    assert all(c.verdict == PROVED for c in report.certificates)
    doc = json.loads(report.to_json())
    assert doc["case"] == name and len(doc["jobs"]) == len(CASES[name].jobs)
