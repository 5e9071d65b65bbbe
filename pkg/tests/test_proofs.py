from __future__ import annotations

import json

import pytest

from polytrs.framework import Bound, Judgement, Problem, StartTerms, problems_equal
from polytrs.proofs import (
    Assumption,
    Axiom,
    Inference,
    bound_from_json,
    bound_to_json,
    is_closed,
    iter_nodes,
    problem_from_json,
    problem_to_json,
    proof_from_json,
    proof_to_json,
    render_proof,
    rule_from_json,
    rule_to_json,
    term_from_json,
    term_to_json,
    validate_proof,
)
from polytrs.terms import App, Var
from tests.conftest import constructor


def empty_problem(template: Problem) -> Problem:
    return Problem(
        strict_dps=(),
        strict_trs=(),
        weak_dps=(),
        weak_trs=template.strict_trs,
        q=template.q,
        start_terms=template.start_terms,
        signature=template.signature,
    )


class TestValidation:
    def test_strategy_proof_replays(self, mult_proof):
        assert is_closed(mult_proof)
        result = validate_proof(mult_proof)
        assert result.ok and result.errors == []
        assert mult_proof.judgement.bound == Bound.poly(2)

    def test_open_proof_is_reported(self, exp_proof):
        assert not is_closed(exp_proof)
        result = validate_proof(exp_proof)
        assert not result.ok
        assert any("open assumption" in e for e in result.errors)

    def test_axiom_needs_empty_strict(self, mult_problem):
        bad = Axiom(Judgement(mult_problem, Bound.poly(0)))
        result = validate_proof(bad)
        assert not result.ok
        assert "nonempty strict" in result.errors[0]

    def test_axiom_needs_constant_bound(self, mult_problem):
        bad = Axiom(Judgement(empty_problem(mult_problem), Bound.poly(1)))
        result = validate_proof(bad)
        assert not result.ok
        assert "O(1)" in result.errors[0]

    def test_wrong_conclusion_names_the_inference(self, mult_proof):
        assert isinstance(mult_proof, Inference)
        lowered = Inference(
            mult_proof.processor,
            mult_proof.params,
            Judgement(mult_proof.judgement.problem, Bound.poly(1)),
            mult_proof.premises,
        )
        result = validate_proof(lowered)
        assert not result.ok
        assert len(result.errors) == 1
        assert mult_proof.processor in result.errors[0]
        assert "concluded O(n^1)" in result.errors[0]

    def test_foreign_premise_names_the_inference(self, mult_problem):
        stray = Axiom(Judgement(empty_problem(mult_problem), Bound.poly(0)))
        node = Inference(
            "dependency_tuples",
            {},
            Judgement(mult_problem, Bound.poly(0)),
            (stray,),
        )
        result = validate_proof(node)
        assert not result.ok
        assert "premise problem mismatch under dependency_tuples" in result.errors[0]

    def test_inapplicable_processor_is_an_error(self, mult_problem):
        node = Inference(
            "empty", {}, Judgement(mult_problem, Bound.poly(0)), ()
        )
        result = validate_proof(node)
        assert not result.ok
        assert "not applicable" in result.errors[0]

    def test_premise_count_must_match(self, mult_problem):
        node = Inference(
            "dependency_tuples", {}, Judgement(mult_problem, Bound.poly(0)), ()
        )
        result = validate_proof(node)
        assert not result.ok
        assert "premises" in result.errors[0]


class TestRendering:
    def test_mentions_processors_and_judgements(self, mult_proof):
        text = render_proof(mult_proof)
        assert "dependency_tuples" in text
        assert "complexity_pair" in text
        assert "O(n^2)" in text
        assert text.count("|-") == sum(1 for _ in iter_nodes(mult_proof))

    def test_interpretation_params_are_elided(self, mult_proof):
        text = render_proof(mult_proof)
        assert '"interpretation": "..."' in text
        assert '"lin"' not in text

    def test_open_leaf_is_visible(self, exp_proof):
        assert "[open" in render_proof(exp_proof)


class TestJsonRoundtrip:
    def test_proof_roundtrip(self, mult_proof):
        blob = json.dumps(proof_to_json(mult_proof))
        back = proof_from_json(json.loads(blob))
        assert validate_proof(back).ok
        assert back.judgement.bound == mult_proof.judgement.bound
        assert problems_equal(back.judgement.problem, mult_proof.judgement.problem)
        assert render_proof(back) == render_proof(mult_proof)

    def test_open_proof_roundtrip_keeps_note(self, mult_problem):
        tree = Assumption(Judgement(mult_problem, Bound.unknown()), "why not")
        back = proof_from_json(proof_to_json(tree))
        assert isinstance(back, Assumption)
        assert back.note == "why not"
        assert back.judgement.bound.is_unknown

    def test_schema_is_checked(self, mult_proof):
        obj = proof_to_json(mult_proof)
        obj["schema"] = 99
        with pytest.raises(ValueError):
            proof_from_json(obj)

    def test_unknown_node_kind(self, mult_problem):
        obj = proof_to_json(Axiom(Judgement(empty_problem(mult_problem), Bound.poly(0))))
        obj["proof"]["node"] = "lemma"
        with pytest.raises(ValueError):
            proof_from_json(obj)


class TestComponentSerializers:
    def test_bound(self):
        for b in (Bound.poly(0), Bound.poly(3), Bound.unknown()):
            assert bound_from_json(bound_to_json(b)) == b

    def test_term(self, mult_problem):
        t = App(
            constructor(mult_problem, "s"),
            (Var("x"),),
        )
        assert term_from_json(term_to_json(t)) == t
        assert term_from_json(term_to_json(Var("y"))) == Var("y")

    def test_rule(self, mult_dt):
        for rule in mult_dt.dps + mult_dt.weak_trs:
            assert rule_from_json(rule_to_json(rule)) == rule

    def test_problem(self, mult_dt, exp_problem):
        for p in (mult_dt, exp_problem):
            assert problems_equal(problem_from_json(problem_to_json(p)), p)

    def test_explicit_start_terms(self, mult_problem):
        p = Problem(
            strict_dps=(),
            strict_trs=mult_problem.strict_trs,
            weak_dps=(),
            weak_trs=(),
            q=(),
            start_terms=StartTerms.explicit((App(constructor(mult_problem, "0")),)),
            signature=mult_problem.signature,
        )
        back = problem_from_json(problem_to_json(p))
        assert problems_equal(back, p)
        assert back.start_terms.terms == p.start_terms.terms
