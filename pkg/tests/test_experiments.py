import pytest

from lexnorm.experiments import (EXPERIMENTS, format_table, format_tsv,
                                 run_grid)

from test_normalizer import tiny_corpus, tiny_model


def base_params():
    model = tiny_model(n_trees=5)
    return model.get_params(deep=False)


@pytest.fixture(scope="module")
def split_corpus():
    utts = tiny_corpus()
    return utts[:40], utts[40:50]


def test_unknown_experiment_rejected(split_corpus):
    train, dev = split_corpus
    with pytest.raises(ValueError, match="unknown experiment"):
        run_grid("bogus", train, dev, base_params())


def test_mode_filter_grid_shape(split_corpus):
    train, dev = split_corpus
    rows = run_grid("mode_filter_grid", train, dev, base_params())
    assert len(rows) == 6  # 2 spell modes x 3 filters
    assert [r["config"] for r in rows[:3]] == [
        "normal/none", "normal/train+dict", "normal/train"]
    for row in rows:
        assert 0 <= row["f1"] <= 1
        assert 0 <= row["upperbound"] <= 1
        assert row["avg_cands"] >= 1  # the original is always a candidate


def test_generator_ablation_rows(split_corpus):
    train, dev = split_corpus
    rows = run_grid("ablate_generators", train, dev, base_params())
    configs = [r["config"] for r in rows]
    assert configs[0] == "all-modules"
    assert "-original" not in configs
    assert {"-embeddings", "-spell", "-lookup", "-prefix", "-split"} <= set(configs)


def test_learning_curve_sizes_capped(split_corpus):
    train, dev = split_corpus
    rows = run_grid("learning_curve", train, dev, base_params(), sizes=(10, 10000))
    assert [r["config"] for r in rows] == ["n=10", f"n={len(train)}"]


def test_feature_ablation_covers_all_groups(split_corpus):
    from lexnorm.features import FEATURE_GROUPS
    train, dev = split_corpus
    rows = run_grid("ablate_features", train, dev, base_params())
    assert len(rows) == 1 + len(FEATURE_GROUPS)


def test_experiments_tuple():
    assert set(EXPERIMENTS) == {"ablate_features", "ablate_generators",
                                "learning_curve", "mode_filter_grid"}


def test_format_helpers():
    rows = [{"config": "a", "f1": 0.51234, "avg_cands": 3.0, "train_time_s": 75.0},
            {"config": "bb", "f1": 1.0, "avg_cands": 10.5, "train_time_s": 5.25}]
    table = format_table(rows)
    lines = table.splitlines()
    assert len(lines) == 3
    assert "51.23" in lines[1] and "1:15.0" in lines[1]
    assert "100.00" in lines[2] and "0:05.2" in lines[2]
    tsv = format_tsv(rows)
    assert tsv.splitlines()[0] == "config\tf1\tavg_cands\ttrain_time_s"
    assert tsv.splitlines()[1] == "a\t51.23\t3.0\t1:15.0"
    assert format_table([]) == "" and format_tsv([]) == ""
