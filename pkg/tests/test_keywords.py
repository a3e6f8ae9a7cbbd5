"""Naming, duplicate merging, keyword emission, and hit-rate scoring."""

import numpy as np
import pytest

from attrmeaning import (
    KeywordReport,
    NamingTable,
    TruthTable,
    evaluate_hit_rate,
    generate_keywords,
    merge_duplicates,
    nameable_count,
)


def test_naming_table_trims_and_validates():
    names = NamingTable({0: "  striped ", 2: "fuzzy"})
    assert names.entries == {0: "striped", 2: "fuzzy"}
    assert nameable_count(names) == 2
    with pytest.raises(ValueError, match="empty"):
        NamingTable({0: "   "})
    with pytest.raises(ValueError, match=">= 0"):
        NamingTable({-1: "x"})
    with pytest.raises(ValueError, match="out of range"):
        names.check_width(2)


def test_merge_duplicates_is_logical_or():
    Z = np.array(
        [
            [1, -1, -1],
            [-1, -1, 1],
            [-1, -1, -1],
            [1, -1, 1],
        ],
        dtype=np.int8,
    )
    names = NamingTable({0: "Striped", 1: "fuzzy", 2: "striped"})
    merged, merged_names = merge_duplicates(Z, names)
    # bits 0 and 2 share a canonical name: OR them, keep position 0 and the
    # first surface form
    assert merged.shape == (4, 2)
    assert merged[:, 0].tolist() == [1, 1, -1, 1]
    assert merged[:, 1].tolist() == [-1, -1, -1, -1]
    assert merged_names.entries == {0: "Striped", 1: "fuzzy"}


def test_merge_keeps_unnamed_columns():
    Z = np.array([[1, -1, 1], [-1, 1, 1]], dtype=np.int8)
    names = NamingTable({0: "a", 2: "A"})
    merged, merged_names = merge_duplicates(Z, names)
    assert merged.shape == (2, 2)
    assert merged[:, 0].tolist() == [1, 1]  # OR of bits 0 and 2
    assert merged[:, 1].tolist() == [-1, 1]  # untouched unnamed bit
    assert merged_names.entries == {0: "a"}


def test_merge_is_idempotent():
    rng = np.random.default_rng(0)
    Z = (2 * rng.integers(0, 2, size=(20, 5)) - 1).astype(np.int8)
    names = NamingTable({0: "red", 1: "RED", 3: "blue", 4: " red "})
    merged, merged_names = merge_duplicates(Z, names)
    again, again_names = merge_duplicates(merged, merged_names)
    assert np.array_equal(merged, again)
    assert merged_names.entries == again_names.entries


def test_generate_keywords_emission_rules():
    Z = np.array(
        [
            [1, 1, -1, 1],
            [-1, -1, -1, 1],
            [-1, 1, 1, -1],
        ],
        dtype=np.int8,
    )
    # bit 3 unnamed; bits 0 and 2 are duplicates
    names = NamingTable({0: "Striped", 1: "fuzzy", 2: "striped"})
    report = generate_keywords(Z, names)
    assert report.vocabulary == ("Striped", "fuzzy")
    assert report.items["0"] == ("Striped", "fuzzy")  # no duplicate emission
    assert report.items["1"] == ()  # only the unnamed bit fired
    assert report.items["2"] == ("Striped", "fuzzy")  # via duplicate bit 2


def test_generate_keywords_custom_ids():
    Z = np.array([[1], [-1]], dtype=np.int8)
    names = NamingTable({0: "metallic"})
    report = generate_keywords(Z, names, item_ids=["img_a", "img_b"])
    assert report.items == {"img_a": ("metallic",), "img_b": ()}
    with pytest.raises(ValueError, match="unique"):
        generate_keywords(Z, names, item_ids=["x", "x"])
    with pytest.raises(ValueError, match="item ids"):
        generate_keywords(Z, names, item_ids=["x"])


def test_generate_then_merge_agree():
    # emitting from the raw matrix equals emitting from the merged one
    rng = np.random.default_rng(1)
    Z = (2 * rng.integers(0, 2, size=(30, 6)) - 1).astype(np.int8)
    names = NamingTable({0: "cat", 1: "dog", 2: "CAT", 4: "bird"})
    direct = generate_keywords(Z, names)
    merged, merged_names = merge_duplicates(Z, names)
    via_merge = generate_keywords(merged, merged_names)
    assert direct == via_merge


def test_hit_rate_hand_computed():
    report = KeywordReport(
        items={"a": ("striped", "fuzzy"), "b": ("fuzzy",), "c": ()},
        vocabulary=("striped", "fuzzy", "metallic"),
    )
    truth = TruthTable(
        judgments={
            ("a", "striped"): 1,
            ("a", "fuzzy"): 0,
            ("b", "fuzzy"): 1,
        }
    )
    rates = evaluate_hit_rate(report, truth)
    assert rates.emitted == 3
    assert rates.suitable == 2
    assert rates.overall == pytest.approx(2 / 3)
    assert rates.per_keyword["striped"] == 1.0
    assert rates.per_keyword["fuzzy"] == pytest.approx(1 / 2)
    assert rates.per_keyword["metallic"] is None  # never emitted
    assert rates.per_action is None  # no action table supplied


def test_hit_rate_consistency_identity():
    # judging every emitted pair suitable forces a rate of exactly 1
    rng = np.random.default_rng(2)
    Z = (2 * rng.integers(0, 2, size=(10, 4)) - 1).astype(np.int8)
    names = NamingTable({0: "a", 1: "b", 2: "c"})
    report = generate_keywords(Z, names)
    truth = TruthTable(
        judgments={
            (item, word): 1
            for item, words in report.items.items()
            for word in words
        }
    )
    assert evaluate_hit_rate(report, truth).overall == 1.0


def test_hit_rate_requires_full_judgments():
    report = KeywordReport(items={"a": ("x",), "b": ("x",)}, vocabulary=("x",))
    truth = TruthTable(judgments={("a", "x"): 1})
    with pytest.raises(ValueError, match=r"\('b', 'x'\)"):
        evaluate_hit_rate(report, truth)


def test_hit_rate_with_no_emissions():
    report = KeywordReport(items={"a": (), "b": ()}, vocabulary=("x",))
    rates = evaluate_hit_rate(report, TruthTable(judgments={}))
    assert rates.overall is None
    assert rates.emitted == 0


def test_hit_rate_per_action():
    report = KeywordReport(
        items={"a": ("x",), "b": ("x",), "c": ("x",)}, vocabulary=("x",)
    )
    truth = TruthTable(
        judgments={("a", "x"): 1, ("b", "x"): 0, ("c", "x"): 1},
        actions={"a": "walk", "b": "walk", "c": "run"},
    )
    rates = evaluate_hit_rate(report, truth)
    assert rates.per_action == {"walk": pytest.approx(1 / 2), "run": 1.0}
    # every report item must carry an action
    bad = TruthTable(judgments=truth.judgments, actions={"a": "walk"})
    with pytest.raises(ValueError, match="action table"):
        evaluate_hit_rate(report, bad)


def test_truth_table_validation():
    with pytest.raises(ValueError, match="0 or 1|got"):
        TruthTable(judgments={("a", "x"): 2})
