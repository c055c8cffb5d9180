from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rulegraph import (
    Answer,
    InvalidQuery,
    InvalidReason,
    MissingParameter,
    NoRule,
    Query,
    Statement,
    build_statement,
    canonical,
    extract_query,
    match,
    total_questions_covered,
)

from corpus import exact_coverage_counts, keywords_of_parameter, random_statement


class TestAlgorithmContract:
    def test_incomplete_query_prompts_first_missing_parameter(self, toy_statement):
        result = match(toy_statement, Query.from_items([("sport", "scuba diving")]))
        assert result == MissingParameter(parameter="country")
        assert result.http_status == 422

    def test_unmatched_combination_is_no_rule(self, toy_statement):
        result = match(
            toy_statement,
            Query.from_items([("sport", "scuba diving"), ("country", "Nepal")]),
        )
        assert result == NoRule()
        assert result.http_status == 200

    def test_complete_query_answers(self, toy_statement):
        result = match(
            toy_statement,
            Query.from_items([("sport", "hiking"), ("country", "Switzerland")]),
        )
        assert result == Answer(label="20 EUR")
        assert result.http_status == 200

    def test_fixture_price_trace(self, toy_statement):
        result = match(
            toy_statement, Query.from_items([("sport", "hiking"), ("country", "Nepal")])
        )
        assert result == Answer(label="30 EUR")

    def test_repeated_parameter_is_invalid(self, toy_statement):
        result = match(
            toy_statement,
            Query.from_items([("sport", "hiking"), ("sport", "climbing")]),
        )
        assert isinstance(result, InvalidQuery)
        assert result.reason is InvalidReason.MULTI_VALUE
        assert result.http_status == 400

    def test_unknown_keyword_is_invalid(self, toy_statement):
        result = match(
            toy_statement, Query.from_items([("sport", "chess"), ("country", "Nepal")])
        )
        assert isinstance(result, InvalidQuery)
        assert result.reason is InvalidReason.UNKNOWN_KEYWORD

    def test_unknown_parameter_is_invalid(self, toy_statement):
        result = match(toy_statement, Query.from_items([("price", "cheap")]))
        assert isinstance(result, InvalidQuery)
        assert result.reason is InvalidReason.UNKNOWN_PARAMETER
        assert result.http_status == 400

    def test_empty_query_prompts_first_parameter(self, toy_statement):
        assert match(toy_statement, Query()) == MissingParameter(parameter="sport")

    def test_values_canonicalize_before_matching(self, toy_statement):
        result = match(
            toy_statement,
            Query.from_items([("sport", "  Scuba   DIVING "), ("country", "TURKEY")]),
        )
        assert result == Answer(label="50 EUR")

    def test_multi_value_detected_before_unknown_keyword(self, toy_statement):
        result = match(
            toy_statement,
            Query.from_items([("sport", "chess"), ("sport", "go")]),
        )
        assert isinstance(result, InvalidQuery)
        assert result.reason is InvalidReason.MULTI_VALUE


class TestSubsetSemantics:
    @pytest.fixture()
    def sub_spanning(self) -> Statement:
        built = build_statement(
            {
                "id": "sub",
                "name": "Sub-spanning rule",
                "parameters": ["sport", "country"],
                "vertices": [
                    {"id": "a", "kind": "parameter", "parameter": "sport",
                     "keywords": ["hiking"]},
                    {"id": "b", "kind": "parameter", "parameter": "country",
                     "keywords": ["Nepal"]},
                    {"id": "r1", "kind": "response", "label": "flat rate"},
                    {"id": "r2", "kind": "response", "label": "special rate"},
                ],
                "edges": [
                    {"id": "e-sport", "vertices": ["a", "r1"]},
                    {"id": "e-both", "vertices": ["a", "b", "r2"]},
                ],
            }
        )
        assert isinstance(built, Statement)
        return built

    def test_partial_edge_answers_incomplete_query(self, sub_spanning):
        assert match(sub_spanning, Query.from_items([("sport", "hiking")])) == Answer(
            label="flat rate"
        )

    def test_most_specific_edge_wins_on_complete_query(self, sub_spanning):
        result = match(
            sub_spanning,
            Query.from_items([("sport", "hiking"), ("country", "Nepal")]),
        )
        assert result == Answer(label="special rate")

    def test_equal_size_tie_breaks_on_smallest_edge_id(self):
        built = build_statement(
            {
                "id": "tie",
                "name": "Tie break",
                "parameters": ["sport", "country"],
                "vertices": [
                    {"id": "a", "kind": "parameter", "parameter": "sport",
                     "keywords": ["hiking"]},
                    {"id": "b", "kind": "parameter", "parameter": "country",
                     "keywords": ["Nepal"]},
                    {"id": "r1", "kind": "response", "label": "sport rate"},
                    {"id": "r2", "kind": "response", "label": "country rate"},
                ],
                "edges": [
                    {"id": "e2", "vertices": ["b", "r2"]},
                    {"id": "e1", "vertices": ["a", "r1"]},
                ],
            }
        )
        assert isinstance(built, Statement)
        result = match(
            built, Query.from_items([("sport", "hiking"), ("country", "Nepal")])
        )
        assert result == Answer(label="sport rate")  # e1 < e2


class TestExtractQuery:
    def test_example_question(self, toy_statement):
        query = extract_query(
            toy_statement,
            "How much is an accident insurance for scuba diving in Turkey?",
        )
        assert query.pairs == (("sport", "scuba diving"), ("country", "Turkey"))

    def test_no_keywords_yields_empty_query(self, toy_statement):
        assert extract_query(toy_statement, "hello there").pairs == ()

    def test_two_keywords_of_one_parameter(self, toy_statement):
        query = extract_query(toy_statement, "hiking or climbing?")
        assert query.pairs == (("sport", "hiking"), ("sport", "climbing"))
        assert isinstance(match(toy_statement, query), InvalidQuery)

    def test_longest_keyword_wins_on_overlap(self):
        built = build_statement(
            {
                "id": "overlap",
                "name": "Overlapping keywords",
                "parameters": ["sport"],
                "vertices": [
                    {"id": "a", "kind": "parameter", "parameter": "sport",
                     "keywords": ["water polo"]},
                    {"id": "b", "kind": "parameter", "parameter": "sport",
                     "keywords": ["polo"]},
                    {"id": "r", "kind": "response", "label": "ok"},
                ],
                "edges": [{"id": "e", "vertices": ["a", "r"]}],
            }
        )
        assert isinstance(built, Statement)
        assert extract_query(built, "price for water polo?").pairs == (
            ("sport", "water polo"),
        )

    def test_keyword_must_align_with_word_boundaries(self, toy_statement):
        # "skiing" contains no standalone "hiking"; "hiking" must not fire.
        assert extract_query(toy_statement, "downhill-skiing").pairs == (
            ("sport", "skiing"),
        )
        assert extract_query(toy_statement, "hikingest trails").pairs == ()

    def test_case_and_spacing_insensitive(self, toy_statement):
        query = extract_query(toy_statement, "SCUBA   diving in nepal")
        assert query.pairs == (("sport", "scuba diving"), ("country", "Nepal"))


class TestMatchProperties:
    def test_deterministic(self, statement_corpus):
        rng = random.Random(1)
        for stmt in statement_corpus[:40]:
            query = _random_query(rng, stmt)
            assert match(stmt, query) == match(stmt, query)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 10_000), permutation=st.randoms(use_true_random=False))
    def test_order_insensitive_for_repeat_free_queries(self, seed, permutation):
        rng = random.Random(seed)
        stmt = random_statement(rng, statement_id="order")
        names = list(stmt.parameters)
        chosen = [n for n in names if rng.random() < 0.7] or names[:1]
        pairs = [(n, rng.choice(keywords_of_parameter(stmt, n))) for n in chosen]
        if rng.random() < 0.3:
            pairs.append(("unheard-of", "value"))
        shuffled = list(pairs)
        permutation.shuffle(shuffled)
        assert match(stmt, Query.from_items(pairs)) == match(
            stmt, Query.from_items(shuffled)
        )

    def test_unknown_keyword_never_reports_no_rule(self, statement_corpus):
        rng = random.Random(2)
        for stmt in statement_corpus[:60]:
            name = rng.choice(stmt.parameters)
            query = Query.from_items([(name, "definitely-not-a-keyword-xyz")])
            result = match(stmt, query)
            assert isinstance(result, InvalidQuery)
            assert result.reason is InvalidReason.UNKNOWN_KEYWORD

    def test_prompt_convergence(self, statement_corpus):
        rng = random.Random(3)
        for stmt in statement_corpus[:100]:
            query = Query()
            prompts = 0
            while True:
                result = match(stmt, query)
                if isinstance(result, (Answer, NoRule)):
                    break
                assert isinstance(result, MissingParameter)
                prompts += 1
                assert prompts <= len(stmt.parameters), "prompt loop exceeded bound"
                value = rng.choice(keywords_of_parameter(stmt, result.parameter))
                query = query.with_pair(result.parameter, value)

    def test_exact_coverage_matches_per_edge_keyword_products(self, statement_corpus):
        for stmt in statement_corpus[:60]:
            counts = exact_coverage_counts(stmt)
            for edge in stmt.edges:
                product = 1
                for vid in edge.vertex_id_set:
                    vertex = stmt.vertices_by_id[vid]
                    if hasattr(vertex, "keywords"):
                        product *= len(vertex.keywords)
                assert counts[edge.id] == product
            assert sum(counts.values()) == total_questions_covered(stmt)


def _random_query(rng: random.Random, stmt: Statement) -> Query:
    pairs = []
    for name in stmt.parameters:
        roll = rng.random()
        if roll < 0.5:
            pairs.append((name, rng.choice(keywords_of_parameter(stmt, name))))
        elif roll < 0.6:
            pairs.append((name, "no-such-keyword"))
    if rng.random() < 0.2 and pairs:
        pairs.append(pairs[0])
    rng.shuffle(pairs)
    return Query.from_items(pairs)
