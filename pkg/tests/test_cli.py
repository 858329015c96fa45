import os

import pytest
from click.testing import CliRunner

from lexnorm.cli import main

from conftest import DATA_DIR


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def workdir(tmp_path_factory, runner):
    """Resources plus a small trained bundle on the bundled sample data."""
    base = tmp_path_factory.mktemp("cli")
    resources = str(base / "resources")
    model = str(base / "model")
    r = runner.invoke(main, [
        "build-resources",
        "--noisy-text", os.path.join(DATA_DIR, "noisy.txt"),
        "--canonical-text", os.path.join(DATA_DIR, "canonical.txt"),
        "--out", resources,
    ])
    assert r.exit_code == 0, r.output
    r = runner.invoke(main, [
        "train",
        "--train", os.path.join(DATA_DIR, "train.norm"),
        "--dictionary", os.path.join(DATA_DIR, "dictionary.txt"),
        "--embeddings", os.path.join(DATA_DIR, "embeddings.vec"),
        "--resources", resources,
        "--model-out", model,
        "--num-trees", "25",
        "--seed", "1",
    ])
    assert r.exit_code == 0, r.output
    return {"base": base, "resources": resources, "model": model}


def test_build_resources_outputs(workdir):
    for name in ("ngram_noisy.json", "ngram_canonical.json"):
        assert os.path.exists(os.path.join(workdir["resources"], name))


def test_train_writes_bundle(workdir):
    for name in ("manifest.json", "forest.npz", "lookup.json"):
        assert os.path.exists(os.path.join(workdir["model"], name))


def test_normalize_top1_format(workdir, runner):
    out = str(workdir["base"] / "out.norm")
    r = runner.invoke(main, [
        "normalize", "--model", workdir["model"],
        "--input", os.path.join(DATA_DIR, "heldout.norm"),
        "--output", out,
    ])
    assert r.exit_code == 0, r.output
    with open(out, encoding="utf-8") as fh:
        blocks = fh.read().split("\n\n")
    assert len(blocks) == 60  # one block per held-out utterance
    for block in blocks:
        for line in block.strip("\n").splitlines():
            assert len(line.split("\t")) == 2


def test_normalize_topn_candidates(workdir, runner):
    r = runner.invoke(main, [
        "normalize", "--model", workdir["model"],
        "--input", os.path.join(DATA_DIR, "heldout.norm"),
        "--top-n", "3",
    ])
    assert r.exit_code == 0, r.output
    for line in r.stdout.splitlines():
        if not line:
            continue
        cells = line.split("\t")
        # raw token plus up to three (surface, score) pairs
        assert 3 <= len(cells) <= 7 and len(cells) % 2 == 1
        float(cells[2])  # scores parse


def test_normalize_empty_input(workdir, runner, tmp_path):
    empty = tmp_path / "empty.norm"
    empty.write_text("")
    out = tmp_path / "out.norm"
    r = runner.invoke(main, [
        "normalize", "--model", workdir["model"],
        "--input", str(empty), "--output", str(out),
    ])
    assert r.exit_code == 0, r.output
    assert out.read_text() == ""


def test_missing_input_exits_2(workdir, runner):
    r = runner.invoke(main, [
        "normalize", "--model", workdir["model"],
        "--input", "/nonexistent/file.norm",
    ])
    assert r.exit_code == 2


def test_evaluate_standard(workdir, runner):
    r = runner.invoke(main, [
        "evaluate", "--model", workdir["model"],
        "--input", os.path.join(DATA_DIR, "heldout.norm"),
        "--top-n", "3",
    ])
    assert r.exit_code == 0, r.output
    lines = [l for l in r.output.splitlines() if l]
    header = next(l for l in lines if l.startswith("recall\t"))
    assert header == "recall\tprecision\tf1\twer\ttop1_recall\ttop2_recall\ttop3_recall"
    values = lines[lines.index(header) + 1].split("\t")
    assert len(values) == 7
    assert all(0.0 <= float(v) <= 100.0 for v in values)
    assert any("both FP and FN" in l for l in lines)


def test_evaluate_gold_ed(workdir, runner):
    r = runner.invoke(main, [
        "evaluate", "--model", workdir["model"],
        "--input", os.path.join(DATA_DIR, "heldout.norm"),
        "--mode", "gold-ed",
    ])
    assert r.exit_code == 0, r.output
    data_lines = [l for l in r.output.splitlines() if l.startswith("accuracy\t")]
    assert len(data_lines) == 1
    assert 0.0 <= float(data_lines[0].split("\t")[1]) <= 100.0


def test_normalize_parallel_matches_serial(workdir, runner):
    outputs = []
    for threads in ("1", "4"):
        out = str(workdir["base"] / f"out_{threads}.norm")
        r = runner.invoke(main, [
            "normalize", "--model", workdir["model"],
            "--input", os.path.join(DATA_DIR, "heldout.norm"),
            "--output", out, "--threads", threads, "--top-n", "2",
        ])
        assert r.exit_code == 0, r.output
        with open(out, encoding="utf-8") as fh:
            outputs.append(fh.read())
    assert outputs[0] == outputs[1]


def test_experiment_command(workdir, runner, tmp_path):
    # tiny slice so the grid stays fast
    from lexnorm.corpus import load_corpus, save_corpus
    train = load_corpus(os.path.join(DATA_DIR, "train.norm"))[:30]
    dev = load_corpus(os.path.join(DATA_DIR, "heldout.norm"))[:10]
    tpath, dpath = str(tmp_path / "t.norm"), str(tmp_path / "d.norm")
    save_corpus(train, tpath)
    save_corpus(dev, dpath)
    r = runner.invoke(main, [
        "experiment", "mode_filter_grid",
        "--train", tpath, "--dev", dpath,
        "--dictionary", os.path.join(DATA_DIR, "dictionary.txt"),
        "--embeddings", os.path.join(DATA_DIR, "embeddings.vec"),
        "--resources", workdir["resources"],
        "--num-trees", "5",
    ])
    assert r.exit_code == 0, r.output
    tsv = [l for l in r.stdout.splitlines() if l]
    assert tsv[0].startswith("config\t")
    assert len(tsv) == 7  # header + 6 grid cells
