import numpy as np
import pytest

from rtsl.randomness import (
    PRNG_ID,
    BranchingDistribution,
    BranchingSequence,
    draw_values,
    parse_dist,
    sample_sequence,
    sequence_values,
    shift,
    substream,
)


def test_substream_reproducible():
    a = substream(123, 4).random(8)
    b = substream(123, 4).random(8)
    assert np.array_equal(a, b)


def test_substream_distinct_streams():
    a = substream(123, 0).random(8)
    b = substream(123, 1).random(8)
    assert not np.array_equal(a, b)


def test_prng_id_names_generator_and_keying():
    assert "pcg64" in PRNG_ID
    assert "spawn_key" in PRNG_ID


def test_distribution_sorted_atoms_and_weights():
    dist = BranchingDistribution(((3, 0.25), (2, 0.75)))
    assert np.array_equal(dist.values, [2, 3])
    assert np.array_equal(dist.weights, [0.75, 0.25])
    assert dist.d_max == 3
    assert not dist.degenerate


def test_uniform_and_point_mass():
    u = BranchingDistribution.uniform((2, 3, 5))
    assert np.allclose(u.weights, 1 / 3)
    p = BranchingDistribution.point_mass(2)
    assert p.degenerate
    assert np.array_equal(p.values, [2])


def test_distribution_rejects_small_atoms():
    with pytest.raises(ValueError):
        BranchingDistribution(((1, 1.0),))


def test_distribution_rejects_bad_weights():
    with pytest.raises(ValueError):
        BranchingDistribution(((2, 0.4), (3, 0.4)))
    with pytest.raises(ValueError):
        BranchingDistribution(((2, -0.5), (3, 1.5)))


def test_parse_dist_basic():
    dist = parse_dist("2:0.5,3:0.5")
    assert np.array_equal(dist.values, [2, 3])
    assert np.array_equal(dist.weights, [0.5, 0.5])


def test_parse_dist_normalizes_tiny_drift():
    dist = parse_dist("2:0.5000001,3:0.5")
    assert abs(sum(dist.weights) - 1.0) < 1e-15


def test_parse_dist_rejects_garbage():
    with pytest.raises(ValueError):
        parse_dist("2:0.5,3:0.9")
    with pytest.raises(ValueError):
        parse_dist("nope")
    with pytest.raises(ValueError):
        parse_dist("2:0.5,2:0.5")


def test_draw_values_support_and_frequencies():
    dist = BranchingDistribution(((2, 0.8), (3, 0.2)))
    vals = draw_values(dist, substream(0, 0), 20000)
    assert set(np.unique(vals)) <= {2, 3}
    # binomial(2e4, 0.2) is within 5 sigma of its mean
    frac = np.mean(vals == 3)
    assert abs(frac - 0.2) < 5 * np.sqrt(0.2 * 0.8 / 20000)


def test_sample_sequence_deterministic():
    dist = BranchingDistribution.uniform((2, 3))
    a = sample_sequence(dist, 50, 9)
    b = sample_sequence(dist, 50, 9)
    assert a == b
    assert a.values.dtype == np.int64
    c = sample_sequence(dist, 50, 9, stream=1)
    assert a != c


def test_sample_sequence_tuple_stream():
    dist = BranchingDistribution.uniform((2, 3))
    a = sample_sequence(dist, 30, 9, stream=(2, 5))
    b = sample_sequence(dist, 30, 9, stream=(2, 5))
    assert a == b


def test_sample_sequence_rejects_empty():
    dist = BranchingDistribution.uniform((2, 3))
    with pytest.raises(ValueError):
        sample_sequence(dist, 0, 1)


def test_sequence_validates_minimum():
    with pytest.raises(ValueError):
        BranchingSequence(np.array([2, 1, 3]))


def test_sequence_values_read_only():
    seq = BranchingSequence(np.array([2, 3, 2]))
    with pytest.raises(ValueError):
        seq.values[0] = 5


def test_sequence_values_helper_passthrough():
    seq = BranchingSequence(np.array([2, 3, 2]))
    assert np.array_equal(sequence_values(seq), [2, 3, 2])
    raw = np.array([4.0, 5.0])
    assert sequence_values(raw) is raw


def test_shift_drops_prefix():
    seq = BranchingSequence(np.array([2, 3, 2, 2, 3]))
    shifted = shift(seq, 2)
    assert np.array_equal(shifted.values, [2, 2, 3])
    assert shifted.origin == 2
    assert np.array_equal(shift(seq, 0).values, seq.values)
    with pytest.raises(ValueError):
        shift(seq, 6)
