import pytest

from condet.corpus_io import Label
from condet.gbdt import PRESETS, Hyperparams
from condet.synthetic import make_corpus
from condet.tuning import CvResult, ParamGrid, grid_search, make_folds, split_single_document


def test_default_grid_contains_reported_winners():
    combos = ParamGrid().combinations()
    assert len(combos) == 16
    for name, hp in PRESETS.items():
        assert hp in combos, name


def test_grid_rejects_empty_lists():
    with pytest.raises(ValueError):
        ParamGrid(max_depth=())
    with pytest.raises(ValueError):
        ParamGrid.from_dict({"depth": [3]})


def test_grid_from_dict_roundtrip():
    g = ParamGrid.from_dict({"learning_rate": [0.1], "max_depth": 3})
    assert g.max_depth == (3,)
    assert ParamGrid.from_dict(g.to_dict()) == g


def test_folds_nine_documents():
    c = make_corpus(9, 1, seed=0)
    folds = make_folds(c, 3, seed=4)
    assert [len(f) for f in folds] == [3, 3, 3]
    assert sorted(i for f in folds for i in f) == list(range(9))
    assert folds == make_folds(c, 3, seed=4)


@pytest.mark.parametrize("n_docs, k", [(10, 3), (7, 2), (5, 5), (11, 4)])
def test_folds_partition(n_docs, k):
    folds = make_folds(make_corpus(n_docs, 1, seed=1), k, seed=n_docs)
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1
    assert sorted(i for f in folds for i in f) == list(range(n_docs))


def test_folds_errors():
    with pytest.raises(ValueError):
        make_folds(make_corpus(2, 1), 3)
    with pytest.raises(ValueError):
        make_folds(make_corpus(4, 1), 1)


def test_single_document_split():
    c = make_corpus(1, 10, seed=2)
    parts = split_single_document(c, 3)
    assert len(parts.documents) == 3
    assert [s for d in parts.documents for s in d.sentences] == list(c.sentences())


def test_cv_result_mean():
    r = CvResult(Hyperparams(), [0.5, 0.75, 1.0])
    assert r.mean_f1 == 0.75


SMALL = Hyperparams(0.3, 3, 5, 4.0, 1.0)


@pytest.fixture(scope="module")
def corpus():
    return make_corpus(9, 6, seed=21)


def test_single_combination(corpus):
    grid = ParamGrid(learning_rate=(0.3,), max_depth=(3,), n_estimators=(5,),
                     max_delta_step=(4.0,), min_child_weight=(1.0,))
    best, table = grid_search(corpus, grid, k=3, seed=1, n_threads=1)
    assert len(table) == 1 and table[0].rank == 1
    assert best == SMALL.replace(seed=1)
    assert len(table[0].fold_f1) == 3


def test_repeatable_and_order_independent(corpus):
    grid = ParamGrid(learning_rate=(0.3, 0.1), max_depth=(2, 3), n_estimators=(2, 4),
                     max_delta_step=(4.0,), min_child_weight=(1.0,))
    best1, t1 = grid_search(corpus, grid, k=3, seed=5, n_threads=1)
    best2, t2 = grid_search(corpus, grid, k=3, seed=5, n_threads=2)
    assert best1 == best2
    assert [(r.params, r.fold_f1, r.rank) for r in t1] == [(r.params, r.fold_f1, r.rank) for r in t2]
    permuted = ParamGrid(learning_rate=(0.1, 0.3), max_depth=(3, 2), n_estimators=(4, 2),
                         max_delta_step=(4.0,), min_child_weight=(1.0,))
    best3, _ = grid_search(corpus, permuted, k=3, seed=5, n_threads=1)
    assert best3 == best1
    assert sorted(r.rank for r in t1) == list(range(1, 9))


def test_ties_prefer_smaller_models():
    # one document per fold and no connectives: every setting scores 0
    docs = make_corpus(3, 2, seed=3)
    flat = docs.relabel([Label.O] * docs.n_tokens)
    grid = ParamGrid(learning_rate=(0.3, 0.1), max_depth=(3, 2), n_estimators=(3, 2))
    best, table = grid_search(flat, grid, k=3, seed=0, n_threads=1)
    assert all(r.mean_f1 == 0 for r in table)
    assert (best.n_estimators, best.max_depth, best.learning_rate) == (2, 2, 0.1)


def test_single_document_corpus_falls_back_to_blocks():
    c = make_corpus(1, 12, seed=4)
    grid = ParamGrid(learning_rate=(0.3,), max_depth=(2,), n_estimators=(2,))
    _, table = grid_search(c, grid, k=3, n_threads=1)
    assert len(table[0].fold_f1) == 3


def test_training_errors_name_combination():
    c = make_corpus(3, 1, seed=0)
    no_conn = c.relabel([Label.O] * c.n_tokens)
    grid = ParamGrid(learning_rate=(0.3,), max_depth=(2,), n_estimators=(2,))
    with pytest.raises(RuntimeError, match="learning_rate"):
        grid_search(no_conn, grid, k=3, weighted=True, n_threads=1)
