"""Inference throughput of a 500-round depth-8 model against corpus size."""

import argparse

from condet.corpus_io import Corpus
from condet.evaluation import time_inference
from condet.features import build_vocabulary, featurize_corpus
from condet.gbdt import PRESETS, train
from condet.synthetic import make_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[25, 50, 100, 200],
                    help="corpus sizes in documents of 20 sentences")
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()

    train_c = make_corpus(30, 15, seed=0)
    vocab = build_vocabulary(train_c)
    X, y = featurize_corpus(train_c, vocab)
    model = train(X, y, PRESETS["pdtb"], vocab=vocab)

    print("docs\ttokens\tseconds\ttokens_per_s")
    pool = make_corpus(max(args.sizes), 20, seed=1, prefix="bench")
    for n in args.sizes:
        corpus = Corpus(pool.documents[:n])
        seconds, tps = time_inference(model, corpus, repetitions=args.reps)
        print(f"{n}\t{corpus.n_tokens}\t{seconds:.4f}\t{tps:,.0f}")


if __name__ == "__main__":
    main()
