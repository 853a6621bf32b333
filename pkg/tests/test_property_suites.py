"""Randomised decomposition suites over seeded sources and partitions."""

import numpy as np

from ltsd.confluence import factor_sets, is_confluent
from ltsd.decomposition import compose_async, compose_sync, decomp_a, decomp_s, queue_lengths, relation_witness
from ltsd.equivalence import branching_bisim, check_equivalence, pairs_outside_blocks, validate_witness
from ltsd.generator import generate_lts, random_instance
from ltsd.oracle import brute_force_bb
from ltsd.settings import load_settings


def test_sync_decomposition_is_branching_bisimilar() -> None:
    harness = load_settings().harness
    for seed in range(harness.property_seeds):
        source, partition = random_instance(seed, harness.max_states, harness.max_actions)
        decomposition = decomp_s(source, partition)
        product, state_map = compose_sync(decomposition)

        result = branching_bisim(source, product)
        assert result.verdict, f"seed {seed}"
        assert validate_witness(source, product, result.blocks) == (), f"seed {seed}"

        pairs = relation_witness(decomposition, state_map)
        assert {state for _, state in pairs} == set(range(product.num_states)), f"seed {seed}"
        assert pairs_outside_blocks(result, pairs) == (), f"seed {seed}"
        assert is_confluent(product, *factor_sets(decomposition.m1.alphabet, decomposition.m2.alphabet)).verdict


def test_async_decomposition_is_branching_bisimilar() -> None:
    harness = load_settings().harness
    for seed in range(harness.property_seeds):
        source, partition = random_instance(seed, harness.max_states, harness.max_actions)
        decomposition = decomp_a(source, partition, capacity=1 + seed % 3)
        product, state_map = compose_async(decomposition)

        assert all(left <= 1 and right <= 1 for left, right in queue_lengths(decomposition, state_map))
        result = branching_bisim(source, product)
        assert result.verdict, f"seed {seed}"
        pairs = relation_witness(decomposition, state_map)
        assert pairs_outside_blocks(result, pairs) == (), f"seed {seed}"
        assert validate_witness(source, product, result.blocks) == (), f"seed {seed}"


def test_refinement_agrees_with_the_oracle() -> None:
    harness = load_settings().harness
    for seed in range(harness.oracle_pairs):
        rng = np.random.default_rng(seed)
        left, right = (
            generate_lts(
                int(rng.integers(2**31)),
                states=int(rng.integers(1, harness.oracle_max_states + 1)),
                actions=int(rng.integers(1, 3)),
                density=float(rng.uniform(0.05, 0.4)),
                tau_density=float(rng.uniform(0.0, 0.3)),
            )
            for _ in range(2)
        )
        for divergence in (False, True):
            expected = check_equivalence(left, right, divergence_sensitive=divergence)
            found = brute_force_bb(left, right, divergence_sensitive=divergence)
            assert found.verdict == expected.verdict, f"seed {seed}, divergence {divergence}"
            if expected.verdict:
                assert validate_witness(left, right, expected.blocks, divergence) == (), f"seed {seed}"
