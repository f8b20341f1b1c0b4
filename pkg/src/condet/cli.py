"""Command-line entry point.

Exit codes: 0 success, 1 computation failure, 2 usage or input failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .corpus_io import CorpusFormatError, corpus_stats, load_corpus, write_predictions
from .evaluation import error_report, score_corpus, time_inference
from .features import VerbPolicy, build_vocabulary, featurize_corpus
from .gbdt import PRESETS, Hyperparams, SchemaMismatchError, feature_importance, predict_labels, train
from .model_store import ModelFormatError, load_model, save_model
from .tuning import ParamGrid, grid_search

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(path, fmt):
    try:
        return load_corpus(path, fmt)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except (CorpusFormatError, UnicodeDecodeError, ValueError) as e:
        raise UsageError(f"cannot parse {path}: {e}") from None


def _load_model(path):
    try:
        return load_model(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except ModelFormatError as e:
        raise UsageError(f"{path}: {e}") from None


def _read_json(path, what):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise UsageError(f"no such {what} file: {path}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{what} file {path} is not valid JSON: {e}") from None


def _pct(x: float) -> str:
    return f"{100 * x:.2f}"


def _policy(args) -> VerbPolicy:
    tags = frozenset(t for t in args.verb_tags.split(",") if t)
    if not tags:
        raise UsageError("--verb-tags must name at least one tag")
    return VerbPolicy(tags, args.include_aux)


def _hyperparams(args) -> Hyperparams:
    hp = PRESETS[args.preset]
    if args.params:
        block = _read_json(args.params, "params")
        block = block.get("hyperparams", block) if isinstance(block, dict) else block
        try:
            hp = hp.replace(**block)
        except (TypeError, ValueError) as e:
            raise UsageError(f"bad params file {args.params}: {e}") from None
    overrides = {k: getattr(args, k) for k in
                 ("learning_rate", "max_depth", "n_estimators", "max_delta_step",
                  "min_child_weight", "lambda_reg", "gamma", "seed")
                 if getattr(args, k) is not None}
    try:
        return hp.replace(**overrides)
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_stats(args) -> int:
    st = corpus_stats(_load(args.corpus, args.format))
    print("label\tcount")
    print(f"B-Conn\t{st.count_b}")
    print(f"I-Conn\t{st.count_i}")
    print(f"O\t{st.count_o}")
    print(f"total\t{st.total}")
    print(f"connective_proportion\t{_pct(st.connective_proportion)}%")
    return EXIT_OK


def cmd_train(args) -> int:
    hp = _hyperparams(args)
    policy = _policy(args)
    corpus = _load(args.train, args.format)
    vocab = build_vocabulary(corpus)
    X, y = featurize_corpus(corpus, vocab, policy)
    try:
        model = train(X, y, hp, weighted=args.weighted, vocab=vocab, verb_policy=policy)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    save_model(model, args.model)
    print(f"rounds\t{model.n_rounds}")
    print(f"final_training_loss\t{model.loss_history[-1]:.6f}")
    print(f"model\t{args.model}")
    return EXIT_OK


def cmd_tune(args) -> int:
    corpus = _load(args.train, args.format)
    grid = ParamGrid()
    if args.grid:
        try:
            grid = ParamGrid.from_dict(_read_json(args.grid, "grid"))
        except (TypeError, ValueError) as e:
            raise UsageError(f"bad grid file {args.grid}: {e}") from None
    n_docs = len(corpus.documents)
    if args.k < 2 or (n_docs > 1 and args.k > n_docs):
        raise UsageError(f"k={args.k} needs between 2 and {n_docs} documents")
    if n_docs == 0:
        raise UsageError("training corpus is empty")
    try:
        best, table = grid_search(corpus, grid, k=args.k, weighted=args.weighted, seed=args.seed,
                                  policy=_policy(args))
    except ValueError as e:
        raise UsageError(str(e)) from None
    except RuntimeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL

    header = ["rank", *best.to_dict().keys(), *(f"fold{i}_f1" for i in range(args.k)), "mean_f1"]
    lines = ["\t".join(header)]
    for r in table:
        lines.append("\t".join([str(r.rank), *(str(v) for v in r.params.to_dict().values()),
                                *(_pct(f) for f in r.fold_f1), _pct(r.mean_f1)]))
    print("\n".join(lines))
    if args.results:
        with open(args.results, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")
    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(best.to_dict(), f, indent=2)
        f.write("\n")
    print(f"best params written to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_predict(args) -> int:
    model = _load_model(args.model)
    corpus = _load(args.input, args.format)
    try:
        labels = predict_labels(model, corpus)
        timing = time_inference(model, corpus, args.reps) if args.time else None
    except SchemaMismatchError as e:
        raise UsageError(str(e)) from None
    write_predictions(corpus, labels, args.output, args.format)
    print(f"tokens\t{len(labels)}")
    if timing is not None:
        seconds, tps = timing
        print(f"inference_seconds\t{seconds:.4f}")
        print(f"tokens_per_second\t{tps:.0f}")
    return EXIT_OK


def _gold_pred(args):
    gold = _load(args.gold, args.format)
    pred = _load(args.pred, args.format)
    if [t.form for t in gold.tokens()] != [t.form for t in pred.tokens()]:
        raise UsageError("gold and prediction files do not contain the same tokens")
    if gold.sentence_lengths() != pred.sentence_lengths():
        raise UsageError("gold and prediction files differ in sentence boundaries")
    return gold, pred.labels()


def cmd_score(args) -> int:
    gold, pred = _gold_pred(args)
    rep = score_corpus(gold, pred)
    print("tp\tfp\tfn\tprecision\trecall\tf1")
    print(f"{rep.tp}\t{rep.fp}\t{rep.fn}\t{_pct(rep.precision)}\t{_pct(rep.recall)}\t{_pct(rep.f1)}")
    return EXIT_OK


def cmd_report(args) -> int:
    gold, pred = _gold_pred(args)
    rows = error_report(gold, gold.labels(), pred)
    rows = [r for r in rows if r.total >= args.min_count]
    if args.top:
        rows = rows[:args.top]
    print("connective\ttp\ttn\tfp\tfn\taccuracy")
    for r in rows:
        print(f"{r.form}\t{r.tp}\t{r.tn}\t{r.fp}\t{r.fn}\t{_pct(r.accuracy)}")
    return EXIT_OK


def cmd_importance(args) -> int:
    model = _load_model(args.model)
    try:
        ranked = feature_importance(model, args.kind)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    total = sum(v for _, v in ranked) or 1
    print(f"rank\tfeature\t{args.kind}\tshare")
    for i, (name, v) in enumerate(ranked, 1):
        print(f"{i}\t{name}\t{v:.6g}\t{_pct(v / total)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="condet", description="Discourse connective detection.")
    sub = p.add_subparsers(dest="command", required=True)

    def corpus_fmt(sp):
        sp.add_argument("--format", choices=("conllu", "tsv"),
                        help="corpus format (default: from file suffix, .conllu or tsv)")

    def verb_flags(sp):
        sp.add_argument("--verb-tags", default="VERB", help="comma-separated POS tags counted as verbs")
        sp.add_argument("--include-aux", action="store_true", help="also count AUX as a verb")

    sp = sub.add_parser("stats", help="label distribution of a corpus")
    sp.add_argument("corpus")
    corpus_fmt(sp)
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("train", help="train a model")
    sp.add_argument("train")
    sp.add_argument("model", help="output model file")
    corpus_fmt(sp)
    verb_flags(sp)
    sp.add_argument("--weighted", action="store_true", help="inverse-frequency class weights")
    sp.add_argument("--preset", choices=sorted(PRESETS), default="pdtb")
    sp.add_argument("--params", help="JSON hyperparameter file (e.g. from `tune`)")
    sp.add_argument("--learning-rate", type=float)
    sp.add_argument("--max-depth", type=int)
    sp.add_argument("--n-estimators", type=int)
    sp.add_argument("--max-delta-step", type=float)
    sp.add_argument("--min-child-weight", type=float)
    sp.add_argument("--lambda", dest="lambda_reg", type=float)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("tune", help="grid search with k-fold cross-validation")
    sp.add_argument("train")
    corpus_fmt(sp)
    verb_flags(sp)
    sp.add_argument("--grid", help="JSON file mapping hyperparameter names to candidate lists")
    sp.add_argument("-k", type=int, default=3)
    sp.add_argument("--weighted", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default="best_params.json", help="where to write the winning params")
    sp.add_argument("--results", help="also write the CV table to this TSV file")
    sp.set_defaults(func=cmd_tune)

    sp = sub.add_parser("predict", help="label a corpus with a trained model")
    sp.add_argument("model")
    sp.add_argument("input")
    sp.add_argument("output")
    corpus_fmt(sp)
    sp.add_argument("--time", action="store_true", help="report inference time")
    sp.add_argument("--reps", type=int, default=5)
    sp.set_defaults(func=cmd_predict)

    for name, func, help_ in (("score", cmd_score, "exact-span precision/recall/F1"),
                              ("report", cmd_report, "per-connective error counts")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("gold")
        sp.add_argument("pred")
        corpus_fmt(sp)
        if name == "report":
            sp.add_argument("--min-count", type=int, default=0)
            sp.add_argument("--top", type=int, default=0)
        sp.set_defaults(func=func)

    sp = sub.add_parser("importance", help="ranked feature importances of a model")
    sp.add_argument("model")
    sp.add_argument("--kind", choices=("gain", "split_count"), default="gain")
    sp.set_defaults(func=cmd_importance)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "reps", 1) < 1:
        print("error: --reps must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
