import random

import pytest

from mailminer import (
    MISSING,
    ArityMismatch,
    AttributeSpec,
    Dataset,
    EmptyDataset,
    KMeansConfig,
    TooFewRows,
    attribute_ranges,
    distance,
    kmeans,
    select_k,
    silhouette_mean,
    sse,
)

from helpers import naive_silhouette, random_dataset


def _numeric_ds(values, name="x"):
    return Dataset([AttributeSpec(name, "numeric")], [[float(v)] for v in values])


def test_distance_zero_on_identical():
    ds = _numeric_ds([0, 1])
    ranges = attribute_ranges(ds)
    assert distance([0.0], [0.0], ds.schema, ranges) == 0.0


def test_distance_nominal_mismatch_is_one():
    schema = [AttributeSpec("c", "nominal", ("a", "b"))]
    assert distance(["a"], ["b"], schema, [None]) == 1.0


def test_distance_hand_value():
    # dataset ranges [0,10] and [0,4]; row (0,0) vs centroid (10,2)
    schema = [AttributeSpec("x", "numeric"), AttributeSpec("y", "numeric")]
    ds = Dataset(schema, [[0.0, 0.0], [10.0, 4.0], [10.0, 2.0]])
    d = distance([0.0, 0.0], [10.0, 2.0], schema, attribute_ranges(ds))
    assert d == pytest.approx(1.1180, abs=1e-4)


def test_distance_missing_side_is_one():
    schema = [AttributeSpec("x", "numeric")]
    assert distance([MISSING], [5.0], schema, [(0.0, 10.0)]) == 1.0
    assert distance([MISSING], [MISSING], schema, [(0.0, 10.0)]) == 1.0


def test_distance_arity_mismatch():
    schema = [AttributeSpec("x", "numeric")]
    with pytest.raises(ArityMismatch):
        distance([1.0, 2.0], [1.0], schema, [(0.0, 1.0)])


def test_hand_trace_two_clusters():
    ds = _numeric_ds([0, 1, 10, 11])
    model = kmeans(ds, KMeansConfig(k=2), initial_centroids=[[0.0], [10.0]])
    assert model.assignment == [0, 0, 1, 1]
    assert model.centroids == [[0.5], [10.5]]
    assert model.iterations == 2
    assert model.sizes == [2, 2]


def test_k_equals_n_gives_zero_sse():
    ds = _numeric_ds([3, 7, 9])
    model = kmeans(ds, KMeansConfig(k=3, seed=4))
    assert sorted(model.sizes) == [1, 1, 1]
    assert model.sse == 0.0


def test_sse_hand_value():
    # single cluster of {0, 2}: centroid 1, range [0,2] -> 0.5^2 + 0.5^2
    ds = _numeric_ds([0, 2])
    model = kmeans(ds, KMeansConfig(k=1, seed=0))
    assert model.centroids == [[1.0]]
    assert model.sse == pytest.approx(0.5)
    assert sse(ds, model) == pytest.approx(model.sse)


def test_empty_dataset_and_too_few_rows():
    with pytest.raises(EmptyDataset):
        kmeans(Dataset([AttributeSpec("x", "numeric")], []), KMeansConfig(k=1))
    with pytest.raises(TooFewRows):
        kmeans(_numeric_ds([1, 2]), KMeansConfig(k=3))
    with pytest.raises(TooFewRows):
        select_k(_numeric_ds([1]), KMeansConfig(fixed_k=False, k_max=2))
    with pytest.raises(TooFewRows):
        select_k(_numeric_ds([1, 2]), KMeansConfig(fixed_k=False, k_max=3))


def test_select_k_two_separated_groups():
    ds = _numeric_ds([0, 1, 100, 101])
    cfg = KMeansConfig(fixed_k=False, k_max=3, seed=1)
    chosen, model = select_k(ds, cfg)
    # oracle: exhaustive silhouette comparison over k in [2, 3]
    ranges = attribute_ranges(ds)
    pd = lambda i, j: distance(ds.rows[i], ds.rows[j], ds.schema, ranges)
    scores = {}
    for k in (2, 3):
        mk = kmeans(ds, KMeansConfig(k=k, seed=1))
        scores[k] = naive_silhouette(ds, mk.assignment, pd)
    assert chosen == max(scores, key=scores.get) == 2
    assert sorted(model.sizes) == [2, 2]


def test_select_k_all_identical_rows():
    ds = _numeric_ds([5, 5, 5, 5])
    chosen, model = select_k(ds, KMeansConfig(fixed_k=False, k_max=2, seed=3))
    assert chosen == 2
    assert model.sse == 0.0
    assert silhouette_mean(ds, model) == 0.0


def test_silhouette_matches_naive():
    rnd = random.Random(21)
    for _ in range(30):
        ds = random_dataset(rnd, max_rows=12, min_rows=2)
        k = rnd.randint(1, len(ds.rows))
        model = kmeans(ds, KMeansConfig(k=k, seed=rnd.randrange(2**32)))
        ranges = attribute_ranges(ds)
        pd = lambda i, j: distance(ds.rows[i], ds.rows[j], ds.schema, ranges)
        assert silhouette_mean(ds, model) == pytest.approx(
            naive_silhouette(ds, model.assignment, pd), abs=1e-12
        )


def test_determinism_same_seed_same_model():
    rnd = random.Random(13)
    for _ in range(20):
        ds = random_dataset(rnd, max_rows=20)
        k = rnd.randint(1, len(ds.rows))
        cfg = KMeansConfig(k=k, seed=rnd.randrange(2**63))
        a = kmeans(ds, cfg)
        b = kmeans(ds, cfg)
        assert a.assignment == b.assignment
        assert a.sizes == b.sizes
        assert a.centroids == b.centroids
        assert a.sse == b.sse


def test_partition_invariant_under_row_permutation():
    # numeric-only data: modal tie-breaking for nominal/text centroids is
    # first-occurrence by design, which legitimately depends on row order
    rnd = random.Random(17)
    for _ in range(20):
        ds = random_dataset(rnd, max_rows=12, min_rows=3, kinds=("numeric", "date"))
        k = rnd.randint(1, 3)
        centers = [list(ds.rows[i]) for i in rnd.sample(range(len(ds.rows)), k)]
        perm = list(range(len(ds.rows)))
        rnd.shuffle(perm)
        shuffled = Dataset(list(ds.schema), [list(ds.rows[i]) for i in perm], ds.relation_name)

        def partition(model, rows):
            groups = {}
            for row, ci in zip(rows, model.assignment):
                groups.setdefault(ci, []).append(tuple(repr(c) for c in row))
            return frozenset(frozenset(g) for g in groups.values() if g)

        m1 = kmeans(ds, KMeansConfig(k=k), initial_centroids=centers)
        m2 = kmeans(shuffled, KMeansConfig(k=k), initial_centroids=centers)
        assert partition(m1, ds.rows) == partition(m2, shuffled.rows)


def test_select_k_scale_invariance():
    # min-max normalization removes per-attribute scale
    rnd = random.Random(29)
    for _ in range(10):
        ds = random_dataset(rnd, max_rows=10, min_rows=4)
        numeric_cols = [j for j, s in enumerate(ds.schema) if s.kind in ("numeric", "date")]
        if not numeric_cols:
            continue
        j = rnd.choice(numeric_cols)
        factor = rnd.choice([3.0, 0.25, 1000.0])
        scaled_rows = [
            [c * factor if idx == j and c is not MISSING else c for idx, c in enumerate(row)]
            for row in ds.rows
        ]
        scaled = Dataset(list(ds.schema), scaled_rows, ds.relation_name)
        cfg = KMeansConfig(fixed_k=False, k_max=min(4, len(ds.rows)), seed=8)
        k1, m1 = select_k(ds, cfg)
        k2, m2 = select_k(scaled, cfg)
        assert k1 == k2
        assert m1.assignment == m2.assignment


def test_termination_and_converged_fixed_point():
    rnd = random.Random(31)
    for _ in range(30):
        ds = random_dataset(rnd, max_rows=16)
        k = rnd.randint(1, len(ds.rows))
        model = kmeans(ds, KMeansConfig(k=k, seed=rnd.randrange(2**32)))
        assert model.iterations <= 100
        # one more assignment pass against the converged centroids changes nothing
        recheck = kmeans(
            ds,
            KMeansConfig(k=k, max_iterations=1),
            initial_centroids=model.centroids,
        )
        assert recheck.assignment == model.assignment
