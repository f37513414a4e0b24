import numpy as np
import pytest

from snowflake_qec.simulate import run_trial, trial_seed


@pytest.mark.parametrize("decoder", ["snowflake", "forward-uf"])
@pytest.mark.parametrize("d", [3, 5])
def test_noiseless_run(decoder, d):
    res = run_trial(decoder, "surface-circuit", d, 0.0, 1, 20)
    assert res.status == "ok"
    assert res.logical_bitflips.tolist() == [0] * 20
    if decoder == "snowflake":
        # every empty cycle costs three timesteps
        assert res.timesteps.tolist() == [3 * d] * 20


def test_trial_seed_is_shared_and_distinct():
    assert trial_seed(5, 0) == trial_seed(5, 0)
    assert len({trial_seed(5, i) for i in range(50)}) == 50
    assert trial_seed(5, 0) != trial_seed(6, 0)


def test_trial_is_reproducible():
    a = run_trial("snowflake", "surface-phenom", 3, 0.02, 9, 50)
    b = run_trial("snowflake", "surface-phenom", 3, 0.02, 9, 50)
    assert np.array_equal(a.logical_bitflips, b.logical_bitflips)
    assert np.array_equal(a.timesteps, b.timesteps)


@pytest.mark.parametrize("family", ["repetition", "surface-phenom", "surface-circuit"])
def test_both_decoders_sound(family):
    for decoder in ("snowflake", "forward-uf"):
        res = run_trial(decoder, family, 5, 0.02, 2, 40, check_invariants=decoder == "snowflake")
        assert res.status == "ok"
        assert res.syndrome_violations == 0
        assert res.commit_region_defects == 0 and res.quiescence_violations == 0


def test_high_noise_produces_logical_errors():
    res = run_trial("snowflake", "repetition", 3, 0.15, 4, 200)
    assert res.logical_bitflips.sum() > 0


def test_merge_cap_taints_trial():
    res = run_trial("snowflake", "surface-phenom", 5, 0.05, 3, 10, merge_cap=1)
    assert res.status == "merge-cap"


def test_backends_give_identical_trials():
    a = run_trial("snowflake", "surface-circuit", 3, 0.01, 8, 60, backend="numba")
    b = run_trial("snowflake", "surface-circuit", 3, 0.01, 8, 60, backend="numpy")
    assert np.array_equal(a.logical_bitflips, b.logical_bitflips)
    assert np.array_equal(a.timesteps, b.timesteps)


def test_unknown_decoder():
    with pytest.raises(ValueError):
        run_trial("mwpm", "repetition", 3, 0.01, 0, 1)
