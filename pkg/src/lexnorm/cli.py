"""Command-line surface: build-resources, train, normalize, evaluate,
experiment. Diagnostics go to stderr, data to stdout (or the output file)."""

from __future__ import annotations

import json
import os
import sys
import time

import click

from . import __version__
from .corpus import PreprocessRules, ingest_raw_text, load_corpus
from .embeddings import load_vectors_file
from .evaluate import accuracy_gold_ed, count_outcomes, prf, topn_recall, wer
from .experiments import EXPERIMENTS, format_table, format_tsv, run_grid
from .generation import MODULES
from .lexicon import Dictionary
from .ngram import NGramModel, build_ngram
from .normalizer import Normalizer

NOISY_NGRAM_FILE = "ngram_noisy.json"
CANONICAL_NGRAM_FILE = "ngram_canonical.json"


def _info(msg: str) -> None:
    click.echo(msg, err=True)


def _load_resources(dictionary_path, embeddings_path, resources_dir):
    dictionary = Dictionary.from_file(dictionary_path)
    dictionary.source_path = os.path.abspath(dictionary_path)
    embeddings = load_vectors_file(embeddings_path)
    embeddings.source_path = os.path.abspath(embeddings_path)
    with open(os.path.join(resources_dir, NOISY_NGRAM_FILE), encoding="utf-8") as fh:
        noisy = NGramModel.from_json(fh)
    with open(os.path.join(resources_dir, CANONICAL_NGRAM_FILE), encoding="utf-8") as fh:
        canonical = NGramModel.from_json(fh)
    return dict(dictionary=dictionary, embeddings=embeddings,
                noisy_ngram=noisy, canonical_ngram=canonical)


@click.group()
@click.version_option(__version__)
def main():
    """Lexical normalization of noisy user-generated text."""


@main.command("build-resources")
@click.option("--noisy-text", type=click.Path(exists=True), required=True,
              help="Raw social-media text, one sentence per line.")
@click.option("--canonical-text", type=click.Path(exists=True), required=True,
              help="Raw canonical-domain text, one sentence per line.")
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--alpha", type=float, default=1.0, show_default=True,
              help="Additive smoothing constant.")
@click.option("--min-count", type=int, default=1, show_default=True,
              help="Prune n-gram entries below this count.")
@click.option("--lowercase/--no-lowercase", default=True, show_default=True)
@click.option("--username-placeholder", default="<USERNAME>", show_default=True)
@click.option("--url-placeholder", default="<URL>", show_default=True)
@click.option("--embeddings", type=click.Path(exists=True), default=None,
              help="Optional vector file to validate.")
def cmd_build_resources(noisy_text, canonical_text, out_dir, alpha, min_count,
                        lowercase, username_placeholder, url_placeholder, embeddings):
    """Build and serialize the two n-gram models from raw text."""
    rules = PreprocessRules(username_placeholder=username_placeholder,
                            url_placeholder=url_placeholder, lowercase=lowercase)
    os.makedirs(out_dir, exist_ok=True)
    for src, dest in ((noisy_text, NOISY_NGRAM_FILE), (canonical_text, CANONICAL_NGRAM_FILE)):
        with open(src, encoding="utf-8") as fh:
            model = build_ngram(ingest_raw_text(fh, rules), alpha=alpha, min_count=min_count)
        with open(os.path.join(out_dir, dest), "w", encoding="utf-8") as fh:
            model.to_json(fh)
        _info(f"{dest}: {model.total_tokens} tokens, vocabulary {model.vocab_size}")
    if embeddings:
        store = load_vectors_file(embeddings)
        _info(f"embeddings OK: {len(store)} vectors of dim {store.dim}")


def _train_options(fn):
    opts = [
        click.option("--spell-mode", type=click.Choice(["normal", "bad-spellers"]),
                     default="normal", show_default=True),
        click.option("--filter", "candidate_filter",
                     type=click.Choice(["none", "train", "train+dict"]),
                     default="none", show_default=True),
        click.option("--emb-k", type=int, default=40, show_default=True),
        click.option("--prefix-min-len", type=int, default=3, show_default=True),
        click.option("--split-min-len", type=int, default=4, show_default=True),
        click.option("--disable-module", "disabled_modules", multiple=True,
                     type=click.Choice([m for m in MODULES if m != "original"])),
        click.option("--exclude-feature-group", "excluded_feature_groups", multiple=True),
        click.option("--num-trees", type=int, default=500, show_default=True),
        click.option("--mtry", type=int, default=None),
        click.option("--min-node-size", type=int, default=1, show_default=True),
        click.option("--max-depth", type=int, default=None),
        click.option("--bootstrap-fraction", type=float, default=1.0, show_default=True),
        click.option("--class-weight", type=float, default=None),
        click.option("--original-weight", type=float, default=1.0, show_default=True),
        click.option("--held-out-lookup", is_flag=True),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--threads", type=int, default=1, show_default=True),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _normalizer_params(spell_mode, candidate_filter, emb_k, prefix_min_len,
                       split_min_len, disabled_modules, excluded_feature_groups,
                       num_trees, mtry, min_node_size, max_depth,
                       bootstrap_fraction, class_weight, original_weight,
                       held_out_lookup, seed, threads):
    return dict(
        enabled_modules=tuple(m for m in MODULES if m not in disabled_modules),
        emb_k=emb_k, prefix_min_len=prefix_min_len, split_min_len=split_min_len,
        spell_mode=spell_mode, candidate_filter=candidate_filter,
        n_trees=num_trees, mtry=mtry, min_node_size=min_node_size,
        max_depth=max_depth, bootstrap_fraction=bootstrap_fraction,
        class_weight=class_weight, original_weight=original_weight,
        excluded_feature_groups=tuple(excluded_feature_groups),
        held_out_lookup=held_out_lookup, random_state=seed, n_jobs=threads,
    )


@main.command("train")
@click.option("--train", "train_path", type=click.Path(exists=True), required=True)
@click.option("--dictionary", type=click.Path(exists=True), required=True)
@click.option("--embeddings", type=click.Path(exists=True), required=True)
@click.option("--resources", "resources_dir", type=click.Path(exists=True), required=True,
              help="Directory produced by build-resources.")
@click.option("--model-out", type=click.Path(), required=True)
@_train_options
def cmd_train(train_path, dictionary, embeddings, resources_dir, model_out, **opts):
    """Train a model bundle from a gold-annotated vertical corpus."""
    training = load_corpus(train_path)
    resources = _load_resources(dictionary, embeddings, resources_dir)
    model = Normalizer(**resources, **_normalizer_params(**opts))
    n_tokens = sum(len(u.tokens) for u in training)
    t0 = time.perf_counter()
    try:
        model.fit(training)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    elapsed = time.perf_counter() - t0
    model.save(model_out)
    _info(f"trained on {len(training)} utterances / {n_tokens} tokens, "
          f"{model.n_instances_} candidate instances")
    _info(f"train time {int(elapsed // 60)}:{elapsed % 60:04.1f} "
          f"({n_tokens / elapsed:.1f} words/sec)")
    _info(f"bundle written to {model_out}")


def _load_model(model_dir, dictionary, embeddings):
    d = e = None
    if dictionary:
        d = Dictionary.from_file(dictionary)
        d.source_path = os.path.abspath(dictionary)
    if embeddings:
        e = load_vectors_file(embeddings)
        e.source_path = os.path.abspath(embeddings)
    try:
        return Normalizer.load(model_dir, dictionary=d, embeddings=e)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command("normalize")
@click.option("--model", "model_dir", type=click.Path(exists=True), required=True)
@click.option("--input", "input_path", type=click.Path(exists=True), required=True)
@click.option("--output", type=click.Path(), default="-", show_default=True)
@click.option("--top-n", type=int, default=1, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--original-weight", type=float, default=None,
              help="Override the bundle's original-token weight.")
@click.option("--dictionary", type=click.Path(exists=True), default=None)
@click.option("--embeddings", type=click.Path(exists=True), default=None)
def cmd_normalize(model_dir, input_path, output, top_n, threads,
                  original_weight, dictionary, embeddings):
    """Normalize a vertical corpus; emits raw<TAB>chosen (top_n=1) or
    raw<TAB>cand<TAB>score... (top_n>1)."""
    model = _load_model(model_dir, dictionary, embeddings)
    if original_weight is not None:
        model.original_weight = original_weight
    utterances = load_corpus(input_path)
    ranked = model.normalize_corpus(utterances, top_n=top_n, threads=threads)
    out = sys.stdout if output == "-" else open(output, "w", encoding="utf-8")
    try:
        for i, utt_ranked in enumerate(ranked):
            if i:
                out.write("\n")
            for rt in utt_ranked:
                if top_n == 1:
                    out.write(f"{rt.raw}\t{rt.chosen}\n")
                else:
                    cells = [rt.raw]
                    for surface, score in rt.candidates:
                        cells.append(surface)
                        cells.append(f"{score:.6f}")
                    out.write("\t".join(cells) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    _info(f"normalized {sum(len(u.tokens) for u in utterances)} tokens")


@main.command("evaluate")
@click.option("--model", "model_dir", type=click.Path(exists=True), required=True)
@click.option("--input", "input_path", type=click.Path(exists=True), required=True,
              help="Gold-annotated vertical corpus.")
@click.option("--mode", type=click.Choice(["standard", "gold-ed"]),
              default="standard", show_default=True)
@click.option("--top-n", type=int, default=5, show_default=True,
              help="Report top-N recall up to this N (standard mode).")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--dictionary", type=click.Path(exists=True), default=None)
@click.option("--embeddings", type=click.Path(exists=True), default=None)
def cmd_evaluate(model_dir, input_path, mode, top_n, threads, dictionary, embeddings):
    """Score a model on a gold corpus."""
    model = _load_model(model_dir, dictionary, embeddings)
    gold = load_corpus(input_path)
    if mode == "gold-ed":
        system = model.normalize_corpus(gold, top_n=1, gold_ed=True, threads=threads)
        acc = accuracy_gold_ed(gold, system)
        _info(f"gold-ED accuracy: {100 * acc:.2f}")
        click.echo(f"accuracy\t{100 * acc:.2f}")
        return
    system = model.normalize_corpus(gold, top_n=max(top_n, 1), threads=threads)
    counts = count_outcomes(gold, system)
    metrics = prf(counts)
    w = wer(gold, system)
    _info("note: a wrong normalization of an anomaly counts as both FP and FN")
    _info(f"TP={counts.tp} FP={counts.fp} TN={counts.tn} FN={counts.fn} "
          f"(tokens={counts.n_tokens}, wrong normalizations={counts.n_wrong_normalizations})")
    _info(f"recall={100 * metrics.recall:.2f} precision={100 * metrics.precision:.2f} "
          f"F1={100 * metrics.f1:.2f} WER={100 * w:.2f}")
    for n in range(1, top_n + 1):
        _info(f"top-{n} recall: {100 * topn_recall(gold, system, n):.2f}")
    header = ["recall", "precision", "f1", "wer"] + [f"top{n}_recall" for n in range(1, top_n + 1)]
    values = [metrics.recall, metrics.precision, metrics.f1, w] + \
        [topn_recall(gold, system, n) for n in range(1, top_n + 1)]
    click.echo("\t".join(header))
    click.echo("\t".join(f"{100 * v:.2f}" for v in values))


@main.command("experiment")
@click.argument("name", type=click.Choice(EXPERIMENTS))
@click.option("--train", "train_path", type=click.Path(exists=True), required=True)
@click.option("--dev", "dev_path", type=click.Path(exists=True), required=True)
@click.option("--dictionary", type=click.Path(exists=True), required=True)
@click.option("--embeddings", type=click.Path(exists=True), required=True)
@click.option("--resources", "resources_dir", type=click.Path(exists=True), required=True)
@click.option("--sizes", default="500,1000,2000", show_default=True,
              help="Training sizes for the learning curve.")
@_train_options
def cmd_experiment(name, train_path, dev_path, dictionary, embeddings,
                   resources_dir, sizes, **opts):
    """Run an experiment grid and print a report."""
    training = load_corpus(train_path)
    dev = load_corpus(dev_path)
    resources = _load_resources(dictionary, embeddings, resources_dir)
    params = dict(resources, **_normalizer_params(**opts))
    seed = params["random_state"]
    size_list = [int(s) for s in sizes.split(",") if s.strip()]
    rows = run_grid(name, training, dev, params, seed=seed, sizes=size_list)
    _info("note: a wrong normalization of an anomaly counts as both FP and FN")
    _info(format_table(rows))
    click.echo(format_tsv(rows))


if __name__ == "__main__":
    main()
