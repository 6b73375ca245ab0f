import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levyspec import (ECFGrid, FALLBACK_KAPPA, KappaGrid, NoStabilizationError,
                      SeedSpec, UGrid, cauchy_triplet, chi_profile, ecf,
                      euler_characteristic, sample_increments, select_kappa,
                      stabilization_index, unthresholded_mask)
from levyspec.calibration import write_chi_csv


def synthetic(grid, fn, n):
    return ECFGrid(grid, np.asarray(fn(grid.points), dtype=complex), n)


# ---------------------------------------------------------------------------
# masks

def test_mask_all_false_when_level_above_one():
    g = UGrid.make(5.0, 0.1)
    e = synthetic(g, lambda u: np.exp(-np.abs(u)), n=2)
    mask = unthresholded_mask(e, 10.0)
    assert not mask.kept.any()


def test_mask_keeps_zero_frequency_at_kappa_zero():
    g = UGrid.make(5.0, 0.1)
    e = synthetic(g, lambda u: np.exp(-4.0 * np.abs(u)), n=9)
    mask = unthresholded_mask(e, 0.0)
    assert mask.kept[g.half_count]


def test_mask_monotone_on_kappa_grid():
    s = sample_increments(cauchy_triplet(), 1.0, 1000, SeedSpec(17))
    e = ecf(s, UGrid.make(10.0, 0.1))
    kappas = KappaGrid(0.05, 100).kappas
    masks = [unthresholded_mask(e, k).kept for k in kappas]
    for small, large in zip(masks, masks[1:]):
        assert np.all(large <= small)


# ---------------------------------------------------------------------------
# Euler characteristic

def test_chi_trivials():
    assert euler_characteristic(np.array([], dtype=bool)) == 0
    assert euler_characteristic(np.ones(10, dtype=bool)) == 1
    assert euler_characteristic(np.zeros(10, dtype=bool)) == 0
    assert euler_characteristic(np.array([True, True, False, True])) == 2


@given(st.lists(st.booleans(), max_size=60))
@settings(max_examples=200, deadline=None)
def test_chi_counts_runs(bits):
    arr = np.array(bits, dtype=bool)
    runs = 0
    prev = False
    for b in bits:
        if b and not prev:
            runs += 1
        prev = b
    assert euler_characteristic(arr) == runs


# ---------------------------------------------------------------------------
# stabilization rule

def test_stabilization_constant_sequence():
    assert stabilization_index([1, 1, 1, 1]) == 2


def test_stabilization_hand_trace():
    assert stabilization_index([5, 4, 3, 3, 3, 2]) == 4


def test_stabilization_never():
    assert stabilization_index([9, 8, 7, 6, 5, 4, 3, 2, 1]) is None


@given(st.lists(st.integers(min_value=0, max_value=4), min_size=3, max_size=30))
@settings(max_examples=200, deadline=None)
def test_stabilization_matches_bruteforce(chis):
    want = None
    for k in range(2, len(chis)):
        if chis[k] == chis[k - 1] == chis[k - 2]:
            want = k
            break
    assert stabilization_index(chis) == want


# ---------------------------------------------------------------------------
# kappa selection

def test_select_kappa_constant_chi_gives_two_steps():
    # noise-free exponential CF: the kept set is one interval at every kappa
    g = UGrid.make(10.0, 0.05)
    e = synthetic(g, lambda u: np.exp(-np.abs(u)), n=10_000)
    grid = KappaGrid(0.05, 100)
    kappas, chis = chi_profile(e, grid)
    assert np.all(chis == 1)
    assert select_kappa(e, grid) == pytest.approx(0.1)


def test_select_kappa_invariant_to_grid_refinement():
    for step in (0.1, 0.05):
        g = UGrid.make(10.0, step)
        e = synthetic(g, lambda u: np.exp(-np.abs(u)), n=10_000)
        assert select_kappa(e) == pytest.approx(0.1)


def test_select_kappa_no_stabilization_raises_with_chis():
    # a strictly decreasing staircase of moduli defeats the three-in-a-row rule
    g = UGrid.make(4.0, 1.0)  # nine points
    n = 100
    sqrt_logn = math.sqrt(math.log(n))
    grid = KappaGrid(0.5, 4)
    # place moduli so each kappa step drops exactly one kept point
    levels = [(1.0 + k * 0.5 * sqrt_logn) / math.sqrt(n) for k in range(6)]
    mods = np.zeros(9)
    mods[4] = 1.0
    mods[0], mods[2], mods[6], mods[8] = levels[1], levels[2], levels[3], levels[4]
    e = ECFGrid(g, mods.astype(complex), n)
    with pytest.raises(NoStabilizationError) as err:
        select_kappa(e, grid)
    assert len(err.value.chis) == 5
    assert FALLBACK_KAPPA == pytest.approx(2.0 * math.sqrt(2.0))


def test_select_kappa_on_real_sample_in_grid_range():
    s = sample_increments(cauchy_triplet(), 1.0, 10_000, SeedSpec(2))
    e = ecf(s, UGrid.make(10.0, 0.05))
    k = select_kappa(e)
    assert 0.0 < k <= 5.0


def test_write_chi_csv(tmp_path):
    path = tmp_path / "chi.csv"
    write_chi_csv([0.0, 0.05], [3, 1], path, ["n=100"])
    assert path.read_text() == "# n=100\nkappa,chi\n0,3\n0.050000000000000003,1\n"
