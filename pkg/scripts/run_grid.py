"""Grid search on a synthetic corpus with document-level k-fold CV."""

import argparse
import time

from condet.synthetic import make_corpus
from condet.tuning import ParamGrid, grid_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--docs", type=int, default=12)
    ap.add_argument("--sentences", type=int, default=6)
    ap.add_argument("-k", type=int, default=3)
    ap.add_argument("--weighted", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    corpus = make_corpus(args.docs, args.sentences, seed=args.seed)
    grid = ParamGrid()
    t0 = time.perf_counter()
    best, table = grid_search(corpus, grid, k=args.k, weighted=args.weighted, seed=args.seed)
    print(f"{len(table)} settings x {args.k} folds on {corpus.n_tokens} tokens "
          f"in {time.perf_counter() - t0:.1f}s")
    print("rank\tlr\tdepth\tn\tmean_f1\tfolds")
    for r in sorted(table, key=lambda r: r.rank):
        p = r.params
        folds = " ".join(f"{100 * f:.1f}" for f in r.fold_f1)
        print(f"{r.rank}\t{p.learning_rate}\t{p.max_depth}\t{p.n_estimators}\t"
              f"{100 * r.mean_f1:.2f}\t{folds}")
    print("best:", best.to_dict())


if __name__ == "__main__":
    main()
