"""Write a train/held-out pair of synthetic corpora with planted connectives."""

import argparse
from pathlib import Path

from condet.corpus_io import corpus_stats, format_corpus
from condet.synthetic import make_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--train-docs", type=int, default=30)
    ap.add_argument("--test-docs", type=int, default=12)
    ap.add_argument("--sentences", type=int, default=15)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    splits = {
        "train": make_corpus(args.train_docs, args.sentences, seed=args.seed),
        "test": make_corpus(args.test_docs, args.sentences, seed=args.seed + 1, prefix="held"),
    }
    for name, corpus in splits.items():
        path = args.outdir / f"{name}.tsv"
        path.write_text(format_corpus(corpus, "tsv"))
        st = corpus_stats(corpus)
        print(f"{path}\ttokens={st.total}\tB={st.count_b}\tI={st.count_i}\t"
              f"conn={100 * st.connective_proportion:.2f}%")


if __name__ == "__main__":
    main()
