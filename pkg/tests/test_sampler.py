import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from witrees.sampler import (
    SamplerContext,
    _expansion_weights,
    enumerate_all,
    sample_uniform,
    tree_statistics,
)
from witrees.trees import canonical_encoding, complete, root_tree, validate
from tests.test_trees import figure_tree, strip


# ---------------------------------------------------------------- enumeration


def test_enumerate_counts():
    assert len(enumerate_all(2, 2)) == 1
    assert len(enumerate_all(2, 5)) == 34
    assert len(enumerate_all(2, 8)) == 15121


def test_enumerate_only_root_at_base_size():
    assert enumerate_all(2, 2) == [root_tree(2)]
    assert enumerate_all(3, 3) == [root_tree(3)]


def test_enumerate_off_lattice_is_empty():
    assert enumerate_all(3, 4) == []
    assert enumerate_all(2, 1) == []


def test_enumerate_deterministic_order():
    first, second = enumerate_all(2, 4)[:2], enumerate_all(2, 4)[:2]
    assert [canonical_encoding(t) for t in first] == [
        canonical_encoding(t) for t in second
    ]


def test_enumerate_trees_are_valid_and_distinct():
    trees = enumerate_all(2, 6)
    encodings = {canonical_encoding(t) for t in trees}
    assert len(encodings) == len(trees) == 214
    for t in trees[:50]:
        assert t.size == 6
        assert validate(strip(t), 2)


# ---------------------------------------------------------------- sampling


def test_sample_base_size_is_root():
    ctx = SamplerContext.create(2, 4, seed=7)
    assert sample_uniform(ctx, 2) == root_tree(2)


def test_sample_sizes_and_validity():
    ctx = SamplerContext.create(2, 20, seed=1)
    for _ in range(20):
        t = sample_uniform(ctx, 20)
        assert t.size == 20
        assert validate(strip(t), 2)
    ctx3 = SamplerContext.create(3, 21, seed=1)
    t = sample_uniform(ctx3, 21)
    assert t.size == 21
    assert validate(strip(t), 3)


def test_sample_deterministic_under_seed():
    runs = []
    for _ in range(2):
        ctx = SamplerContext.create(2, 15, seed=42)
        runs.append([canonical_encoding(sample_uniform(ctx, 15)) for _ in range(5)])
    assert runs[0] == runs[1]
    other = SamplerContext.create(2, 15, seed=43)
    assert [canonical_encoding(sample_uniform(other, 15)) for _ in range(5)] != runs[0]


def test_sample_zero_count_sizes_rejected():
    ctx = SamplerContext.create(3, 13, seed=0)
    with pytest.raises(ValueError, match="size 4"):
        sample_uniform(ctx, 4)
    with pytest.raises(ValueError, match="size 6"):
        sample_uniform(ctx, 6)
    ctx2 = SamplerContext.create(2, 6, seed=0)
    with pytest.raises(ValueError, match="size 1"):
        sample_uniform(ctx2, 1)


def test_expansion_weights_normalize_exactly():
    ctx = SamplerContext.create(2, 40, seed=0)
    for m in range(3, 41):
        assert sum(w for _, w in _expansion_weights(ctx, m)) == ctx.table.entry(m)
    ctx3 = SamplerContext.create(3, 81, seed=0)
    for m in range(2, 41):
        assert sum(w for _, w in _expansion_weights(ctx3, m)) == ctx3.table.entry(m)


def test_sampled_distribution_uniform_n5():
    from scipy.stats import chisquare

    trees = enumerate_all(2, 5)
    index = {canonical_encoding(t): i for i, t in enumerate(trees)}
    counts = [0] * len(trees)
    ctx = SamplerContext.create(2, 5, seed=20240817)
    draws = 20_000
    for _ in range(draws):
        counts[index[canonical_encoding(sample_uniform(ctx, 5))]] += 1
    assert sum(counts) == draws
    assert min(counts) > 0
    result = chisquare(counts)
    assert result.pvalue > 1e-3


def test_sampled_max_label_marginal_n5(bmn60, btab300):
    from scipy.stats import chisquare

    ctx = SamplerContext.create(2, 5, seed=7)
    draws = 20_000
    observed: dict[int, int] = {}
    for _ in range(draws):
        m = tree_statistics(sample_uniform(ctx, 5)).max_label
        observed[m] = observed.get(m, 0) + 1
    b5 = btab300.entry(5)
    support = [m for m in range(1, 5) if bmn60.entry(m, 5)]
    assert sorted(observed) == support  # no mass outside the exact support
    expected = [draws * bmn60.entry(m, 5) / b5 for m in support]
    result = chisquare([observed[m] for m in support], expected)
    assert result.pvalue > 1e-3


# ---------------------------------------------------------------- statistics


def test_statistics_figure_tree():
    stats = tree_statistics(complete(figure_tree(), 2))
    assert stats.size == 8
    assert stats.node_count == 7
    assert stats.max_label == 4
    assert stats.depth == 4


def test_statistics_root_tree():
    assert tree_statistics(root_tree(2)) == tree_statistics(root_tree(2))
    stats = tree_statistics(root_tree(2))
    assert (stats.size, stats.node_count, stats.max_label, stats.depth) == (2, 1, 1, 1)


def test_statistics_consistency_kary():
    ctx = SamplerContext.create(3, 13, seed=3)
    t = sample_uniform(ctx, 13)
    stats = tree_statistics(t)
    assert stats.size == 2 * stats.node_count + 1 == 13


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_sampling_is_total_and_valid(seed):
    ctx = SamplerContext.create(2, 12, seed=seed)
    t = sample_uniform(ctx, 12)
    assert t.size == 12
    assert validate(strip(t), 2)
