import dataclasses

import numpy as np
import pytest

import mixmetric as mm
from oracles import brute_predict, make_mixed_dataset


def binary_dataset():
    schema = mm.Schema(
        attributes=(
            mm.AttributeSpec(name="x", kind=mm.Kind.NUMERIC, mode=mm.Mode.PROB_EMPIRICAL),
            mm.AttributeSpec(name="c", kind=mm.Kind.CATEGORICAL, mode=mm.Mode.EXACT_MATCH),
            mm.AttributeSpec(name="y", kind=mm.Kind.CATEGORICAL, mode=mm.Mode.EXACT_MATCH),
        ),
        target="y",
    )
    return mm.Dataset(
        schema=schema,
        columns=(
            (1.0, 2.0, 8.0, 9.0, 1.5),
            ("a", "a", "b", "b", "a"),
            ("lo", "lo", "hi", "hi", "lo"),
        ),
    )


class TestTrain:
    def test_models_match_direct_fits(self):
        rng = np.random.default_rng(1)
        data = make_mixed_dataset(rng, 10, with_target=True)
        p = mm.train(data)
        direct = mm.fit_gaussian([v for v in data.column("g") if v is not None])
        assert (p.fm.models[0].mu, p.fm.models[0].sigma) == (direct.mu, direct.sigma)

    def test_classes_sorted(self):
        p = mm.train(binary_dataset())
        assert p.classes == ("hi", "lo")

    def test_all_targets_missing_rejected(self):
        d = binary_dataset()
        stripped = mm.Dataset(
            schema=d.schema, columns=(d.columns[0], d.columns[1], (None,) * 5)
        )
        with pytest.raises(mm.DataError, match="no training rows"):
            mm.train(stripped)

    def test_rows_without_target_dropped_before_fitting(self):
        d = binary_dataset()
        partial = mm.Dataset(
            schema=d.schema,
            columns=(d.columns[0], d.columns[1], ("lo", "lo", None, "hi", "lo")),
        )
        p = mm.train(partial)
        assert p.n_rows == 4
        # the dropped row's x=8.0 must not appear in the fitted samples
        assert 8.0 not in p.fm.models[0].samples

    def test_single_row_trains_and_k_clamps(self):
        d = binary_dataset().select_rows([0])
        p = mm.train(d)
        res = mm.predict(p, (1.0, "a"), k=5)
        assert res.label == "lo"
        assert len(res.neighbors) == 1

    def test_schema_without_target_rejected(self):
        schema = mm.Schema(
            attributes=(mm.AttributeSpec(name="x", kind=mm.Kind.NUMERIC,
                                         mode=mm.Mode.GOWER),)
        )
        data = mm.Dataset(schema=schema, columns=((1.0, 2.0),))
        with pytest.raises(mm.DataError, match="target"):
            mm.train(data)


class TestPredict:
    def test_identical_row_dominates_at_k1(self):
        d = binary_dataset()
        p = mm.train(d)
        res = mm.predict(p, d.feature_row(3), k=1)
        assert res.label == "hi"
        assert res.neighbors == ((3, 1.0),)
        assert res.class_scores["hi"] == 1.0

    def test_k_equals_n_matches_full_scan_oracle(self):
        d = binary_dataset()
        p = mm.train(d)
        got = mm.predict(p, (4.0, "a"), k=5)
        label, scores, picked = brute_predict(p, (4.0, "a"), 5)
        assert (got.label, got.class_scores, got.neighbors) == (label, scores, picked)

    def test_similarity_tie_prefers_lower_row_index(self):
        schema = mm.Schema(
            attributes=(
                mm.AttributeSpec(name="c", kind=mm.Kind.CATEGORICAL, mode=mm.Mode.EXACT_MATCH),
                mm.AttributeSpec(name="y", kind=mm.Kind.CATEGORICAL, mode=mm.Mode.EXACT_MATCH),
            ),
            target="y",
        )
        data = mm.Dataset(schema=schema, columns=(("a", "a", "a"), ("p", "q", "p")))
        p = mm.train(data)
        res = mm.predict(p, ("a",), k=1)
        assert res.neighbors == ((0, 1.0),)
        assert res.label == "p"

    def test_label_tie_breaks_lexicographically(self):
        schema = mm.Schema(
            attributes=(
                mm.AttributeSpec(name="c", kind=mm.Kind.CATEGORICAL, mode=mm.Mode.EXACT_MATCH),
                mm.AttributeSpec(name="y", kind=mm.Kind.CATEGORICAL, mode=mm.Mode.EXACT_MATCH),
            ),
            target="y",
        )
        data = mm.Dataset(schema=schema, columns=(("a", "a"), ("q", "p")))
        p = mm.train(data)
        res = mm.predict(p, ("a",), k=2)
        assert res.class_scores["p"] == res.class_scores["q"] == 1.0
        assert res.label == "p"

    def test_k_must_be_positive(self):
        p = mm.train(binary_dataset())
        with pytest.raises(mm.DataError, match="k must be"):
            mm.predict(p, (1.0, "a"), k=0)

    def test_deterministic_repeat(self):
        rng = np.random.default_rng(2)
        data = make_mixed_dataset(rng, 30, with_target=True, missing_rate=0.1)
        p = mm.train(data)
        q = data.feature_row(4)
        first = mm.predict(p, q, k=7)
        for _ in range(3):
            again = mm.predict(p, q, k=7)
            assert again == first

    def test_neighbor_count_clamps(self):
        p = mm.train(binary_dataset())
        assert len(mm.predict(p, (1.0, "a"), k=50).neighbors) == 5
        assert len(mm.predict(p, (1.0, "a"), k=2).neighbors) == 2


class TestWeightScaling:
    def test_power_of_two_scaling_leaves_scores_bitwise_identical(self):
        d = binary_dataset()
        p1 = mm.train(d)
        scaled_attrs = tuple(
            dataclasses.replace(a, weight=a.weight * 4.0) for a in d.schema.attributes
        )
        schema2 = mm.Schema(attributes=scaled_attrs, target=d.schema.target)
        d2 = mm.Dataset(schema=schema2, columns=d.columns)
        p2 = mm.train(d2)
        for q in [(4.0, "a"), (8.5, "b"), (1.0, "b")]:
            r1 = mm.predict(p1, q, k=3)
            r2 = mm.predict(p2, q, k=3)
            assert r1.class_scores == r2.class_scores
            assert r1.label == r2.label

    def test_general_scaling_preserves_the_label(self):
        rng = np.random.default_rng(3)
        data = make_mixed_dataset(rng, 25, with_target=True)
        scaled_attrs = tuple(
            dataclasses.replace(a, weight=a.weight * 3.7) for a in data.schema.attributes
        )
        schema2 = mm.Schema(attributes=scaled_attrs, target=data.schema.target)
        data2 = mm.Dataset(schema=schema2, columns=data.columns)
        p1, p2 = mm.train(data), mm.train(data2)
        for t in range(10):
            q = make_mixed_dataset(np.random.default_rng(100 + t), 1).feature_row(0)
            assert mm.predict(p1, q, k=5).label == mm.predict(p2, q, k=5).label


class TestMonotonicity:
    def test_appending_a_query_clone_never_hurts_its_label(self):
        rng = np.random.default_rng(4)
        base = make_mixed_dataset(rng, 20, with_target=True)
        fm = mm.fit_metric(base)
        p0 = mm.predictor_from_fitted(fm, base)
        query = base.feature_row(7)
        for c in ("p", "q"):
            grown = mm.Dataset(
                schema=base.schema,
                columns=tuple(
                    col + (query[i] if i < len(query) else c,)
                    for i, col in enumerate(base.columns)
                ),
            )
            p1 = mm.predictor_from_fitted(fm, grown)
            k = grown.n_rows
            before = mm.predict(p0, query, k=k).class_scores[c]
            after = mm.predict(p1, query, k=k).class_scores[c]
            assert after >= before


class TestLooAccuracy:
    def test_two_identical_rows_opposite_labels(self):
        schema = mm.Schema(
            attributes=(
                mm.AttributeSpec(name="c", kind=mm.Kind.CATEGORICAL, mode=mm.Mode.EXACT_MATCH),
                mm.AttributeSpec(name="y", kind=mm.Kind.CATEGORICAL, mode=mm.Mode.EXACT_MATCH),
            ),
            target="y",
        )
        data = mm.Dataset(schema=schema, columns=(("a", "a"), ("p", "q")))
        assert mm.loo_accuracy(data, k=1) == 0.0

    def test_single_class_is_always_right(self):
        d = binary_dataset().select_rows([0, 1, 4])
        assert mm.loo_accuracy(d, k=2) == 1.0

    def test_missing_target_named(self):
        d = binary_dataset()
        holed = mm.Dataset(
            schema=d.schema,
            columns=(d.columns[0], d.columns[1], ("lo", "lo", None, "hi", "lo")),
        )
        with pytest.raises(mm.DataError, match="row 3"):
            mm.loo_accuracy(holed, k=1)

    def test_needs_two_rows(self):
        with pytest.raises(mm.DataError, match="at least 2"):
            mm.loo_accuracy(binary_dataset().select_rows([0]), k=1)

    def test_fold_errors_are_labeled(self):
        # drop one row -> a fold sees a column with no samples to fit
        schema = mm.Schema(
            attributes=(
                mm.AttributeSpec(name="x", kind=mm.Kind.NUMERIC, mode=mm.Mode.PROB_GAUSSIAN),
                mm.AttributeSpec(name="y", kind=mm.Kind.CATEGORICAL, mode=mm.Mode.EXACT_MATCH),
            ),
            target="y",
        )
        data = mm.Dataset(schema=schema, columns=((1.0, None), ("p", "q")))
        with pytest.raises(mm.FitError, match="fold 1"):
            mm.loo_accuracy(data, k=1)

    def test_separated_classes_score_perfectly(self):
        rng = np.random.default_rng(20260823)
        lo = [float(v) for v in rng.normal(0.0, 1.0, 20)]
        hi = [float(v) for v in rng.normal(10.0, 1.0, 20)]
        schema = mm.Schema(
            attributes=(
                mm.AttributeSpec(name="x", kind=mm.Kind.NUMERIC, mode=mm.Mode.PROB_GAUSSIAN),
                mm.AttributeSpec(name="label", kind=mm.Kind.CATEGORICAL,
                                 mode=mm.Mode.EXACT_MATCH),
            ),
            target="label",
        )
        data = mm.Dataset(
            schema=schema,
            columns=(tuple(lo + hi), ("lo",) * 20 + ("hi",) * 20),
        )
        assert mm.loo_accuracy(data, k=3) == 1.0
