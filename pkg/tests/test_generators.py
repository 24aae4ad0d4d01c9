"""Random graph generators and bundled demo fixtures."""

import numpy as np
import pytest

from cgtopo import RandomGraphSpec, SpecError, generate_random, sample_power_law
from cgtopo.fixtures import (
    bridged_triangles,
    hierarchical_graph,
    permutation_core_graph,
    star_graph,
)
from cgtopo.generators import ERASED_CONFIG, GNM


def test_gnm_exact_edge_count_and_simplicity():
    for seed in range(100):
        g = generate_random(RandomGraphSpec(model=GNM, n=50, m=200, seed=seed))
        assert g.n == 50
        assert g.m == 200
        seen = set()
        for u, v in g.edges():
            assert u != v
            assert (u, v) not in seen
            seen.add((u, v))


def test_gnm_complete_graph_boundary():
    g = generate_random(RandomGraphSpec(model=GNM, n=10, m=90, seed=7))
    assert g.m == 90
    assert all(len(row) == 9 for row in g.out_adj)


def test_gnm_deterministic():
    a = generate_random(RandomGraphSpec(model=GNM, n=1000, m=5000, seed=42))
    b = generate_random(RandomGraphSpec(model=GNM, n=1000, m=5000, seed=42))
    assert a.out_adj == b.out_adj
    c = generate_random(RandomGraphSpec(model=GNM, n=1000, m=5000, seed=43))
    assert a.out_adj != c.out_adj


def test_gnm_rejects_impossible_m():
    with pytest.raises(SpecError):
        generate_random(RandomGraphSpec(model=GNM, n=5, m=21, seed=1))


def test_spec_validation():
    with pytest.raises(SpecError):
        generate_random(RandomGraphSpec(model="nope", n=5, m=2, seed=1))
    with pytest.raises(SpecError):
        generate_random(RandomGraphSpec(model=GNM, n=0, m=0, seed=1))
    with pytest.raises(SpecError):
        generate_random(
            RandomGraphSpec(model=ERASED_CONFIG, n=100, m=0, gamma=0.9, seed=1)
        )
    with pytest.raises(SpecError):
        generate_random(RandomGraphSpec(model=ERASED_CONFIG, n=100, m=0, seed=1))


def test_erased_configuration_simple_and_deterministic():
    spec = RandomGraphSpec(model=ERASED_CONFIG, n=2000, gamma=2.5, seed=5)
    a = generate_random(spec)
    b = generate_random(spec)
    assert a.out_adj == b.out_adj
    seen = set()
    for u, v in a.edges():
        assert u != v
        assert (u, v) not in seen
        seen.add((u, v))


def test_erased_configuration_heavy_indegree_tail():
    g = generate_random(RandomGraphSpec(model=ERASED_CONFIG, n=5000, gamma=2.5, seed=9))
    indeg = sorted((len(s) for s in g.in_adj), reverse=True)
    # a power-law tail puts the max far above the mean
    assert indeg[0] > 10 * (sum(indeg) / len(indeg))


def test_sampler_gamma_validation():
    rng = np.random.Generator(np.random.PCG64(1))
    with pytest.raises(SpecError):
        sample_power_law(1.0, 10, rng)
    with pytest.raises(SpecError):
        sample_power_law(2.5, 10, rng, x_min=0)


def test_fixture_shapes():
    assert star_graph(100).n == 101
    assert bridged_triangles(10).n == 30
    assert bridged_triangles(10).m == 39
    h = hierarchical_graph(3)
    assert h.n == 125
    assert h.m == 394


def test_permutation_core_graph_exact_counts_no_isolated():
    g = permutation_core_graph(500, 1700, seed=3)
    assert g.n == 500
    assert g.m == 1700
    for v in range(g.n):
        assert g.out_adj[v] or g.in_adj[v]


def test_demo_corpus_manifests(corpus_dir):
    manifest = (corpus_dir / "manifest.tsv").read_text().splitlines()
    assert len(manifest) == 5
    full = (corpus_dir / "manifest-full.tsv").read_text().splitlines()
    assert len(full) == 6
    assert any("linux" in line for line in full)
    for line in manifest:
        fields = line.split("\t")
        assert len(fields) == 6
        assert (corpus_dir / fields[3]).exists()
