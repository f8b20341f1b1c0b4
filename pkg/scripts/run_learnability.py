"""Train with each preset on synthetic data and report held-out span F1.

Also prints the top features by gain, to check the verb features are used.
"""

import argparse
import time

from condet.evaluation import score_corpus
from condet.features import build_vocabulary, featurize_corpus
from condet.gbdt import PRESETS, feature_importance, predict_labels, train
from condet.synthetic import make_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--presets", nargs="+", default=sorted(PRESETS), choices=sorted(PRESETS))
    ap.add_argument("--seed", type=int, default=101)
    ap.add_argument("--top", type=int, default=5)
    args = ap.parse_args()

    train_c = make_corpus(30, 15, seed=args.seed)
    held = make_corpus(12, 15, seed=args.seed + 1, prefix="held")
    vocab = build_vocabulary(train_c)
    X, y = featurize_corpus(train_c, vocab)
    print(f"train tokens {len(y)}, held-out tokens {held.n_tokens}")

    for name in args.presets:
        hp = PRESETS[name]
        t0 = time.perf_counter()
        model = train(X, y, hp, weighted=name.endswith("weighted"), vocab=vocab)
        fit = time.perf_counter() - t0
        r = score_corpus(held, predict_labels(model, held))
        top = ", ".join(f"{n}={v:.1f}" for n, v in feature_importance(model, "gain")[: args.top])
        print(f"{name:14s} P={100 * r.precision:6.2f} R={100 * r.recall:6.2f} "
              f"F1={100 * r.f1:6.2f}  fit={fit:5.1f}s  loss={model.loss_history[-1]:.2e}")
        print(f"{'':14s} top gain: {top}")


if __name__ == "__main__":
    main()
