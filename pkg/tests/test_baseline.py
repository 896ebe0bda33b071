import numpy as np
import pytest

from conftest import shifted_sequence
from driftreg.baseline import PairwiseOffsets, pairwise_register, project_constant
from driftreg.core import MotionVector, NoiseSpec
from driftreg.registration import SearchRange, ml_register
from driftreg.simulator import SequenceSpec, simulate_sequence


def test_noiseless_offsets_equal_drift(rng):
    y = shifted_sequence(rng.random((32, 32)), (2, -1), 5)
    off = pairwise_register(y)
    assert len(off) == 4
    assert all(o == MotionVector(2, -1) for o in off.offsets)
    assert project_constant(off) == MotionVector(2, -1)


def test_k2_matches_ml(rng):
    for seed in range(10):
        scene = rng.random((16, 16))
        seq, _ = simulate_sequence(SequenceSpec(scene=scene, K=2, noise=NoiseSpec(snr_db=-5.0, seed=seed), seed=seed))
        rng_full = SearchRange(full_range=True)
        assert pairwise_register(seq, rng_full).offsets[0] == ml_register(seq, rng_full).estimate


def test_projection_examples():
    assert project_constant([(2, -1)] * 5) == MotionVector(2, -1)
    assert project_constant([(1, 0), (3, 0)]) == MotionVector(2, 0)
    offs = [(1, 0), (2, 0), (9, 0)]
    assert project_constant(offs) == MotionVector(4, 0)
    assert project_constant(offs, estimator="median") == MotionVector(2, 0)


def test_projection_ties_round_towards_zero():
    assert project_constant([(1, -1), (2, -2)]) == MotionVector(1, -1)
    assert project_constant([(0, 0), (-1, 1)]) == MotionVector(0, 0)


def test_projection_accepts_offsets_object():
    off = PairwiseOffsets((MotionVector(1, 1), MotionVector(3, 1)), (1.0, 1.0))
    assert project_constant(off) == MotionVector(2, 1)


def test_projection_rejects_empty():
    with pytest.raises(ValueError):
        project_constant([])
    with pytest.raises(ValueError):
        project_constant([(1, 1)], estimator="mode")
