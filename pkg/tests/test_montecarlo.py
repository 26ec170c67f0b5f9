import math

import numpy as np
import pytest

from relaysec import DecodingSet, DomainError, LinkParams, SecrecyConfig
from relaysec.analytic import (
    all_decoding_sets,
    outage_empty_set,
    outage_its_set,
    outage_os_set,
    outage_single_relay,
    outage_ts_set,
    prob_decoding_set,
    secrecy_outage,
)
from relaysec.experiments import PRESETS
from relaysec.montecarlo import BLOCK, _block_uniforms, mc_estimate, mc_trial, simulate

TRIALS = 1_000_000


def within(est, value, n_sigma=3.0):
    return abs(est.mean - value) <= n_sigma * est.stderr


def test_same_seed_is_bitwise_identical(three_relays):
    links, cfg = three_relays
    a = mc_estimate(links, cfg, "OS", 50_000, seed=7)
    b = mc_estimate(links, cfg, "OS", 50_000, seed=7)
    assert a == b
    assert mc_estimate(links, cfg, "OS", 50_000, seed=8) != a


def test_worker_count_does_not_change_results(three_relays):
    links, cfg = three_relays
    n = 3 * BLOCK + 123
    a = simulate(links, cfg, n, seed=3)
    b = simulate(links, cfg, n, seed=3, workers=4)
    for s in a.outage:
        np.testing.assert_array_equal(a.outage[s], b.outage[s])
    np.testing.assert_array_equal(a.decoding_mask, b.decoding_mask)


def test_trials_are_a_prefix_of_longer_runs(three_relays):
    links, cfg = three_relays
    short = simulate(links, cfg, BLOCK + 10, seed=5)
    long = simulate(links, cfg, 2 * BLOCK, seed=5)
    np.testing.assert_array_equal(short.outage["TS"], long.outage["TS"][: BLOCK + 10])


def test_single_trial_estimate(three_relays):
    links, cfg = three_relays
    est = mc_estimate(links, cfg, "TS", 1, seed=0)
    assert est.mean in (0.0, 1.0) and est.stderr == 0.0 and est.trials == 1


def test_rejects_zero_trials(three_relays):
    links, cfg = three_relays
    with pytest.raises(DomainError):
        mc_estimate(links, cfg, "TS", 0, seed=0)


def test_exponential_draws_have_right_mean():
    u = _block_uniforms(11, 0, TRIALS, 1)[:, 0]
    lam = 0.37
    x = -np.log1p(-u) / lam
    assert abs(x.mean() - 1 / lam) <= 5 * x.std() / math.sqrt(TRIALS)


def test_unreachable_threshold_never_selects(three_relays):
    links, _ = three_relays
    cfg = SecrecyConfig(1.0, 1e12)
    rng = np.random.default_rng(0)
    for _ in range(50):
        out, snap = mc_trial(links, cfg, "OS", rng)
        assert snap.selected is None
        assert (snap.gamma_m, snap.gamma_e) == (snap.gamma_sd, snap.gamma_se)


def test_single_relay_same_outcome_for_every_scheme():
    links = LinkParams(1.0, 1.0, (0.2,), (0.5,), (1.5,))
    cfg = SecrecyConfig(1.0, 1.0)
    for seed in range(20):
        outs = {s: mc_trial(links, cfg, s, np.random.default_rng(seed)) for s in ("TS", "ITS", "OS")}
        assert len({(o, snap) for o, snap in outs.values()}) == 1


def test_ties_go_to_lowest_index():
    links = LinkParams(1.0, 1.0, (1.0, 1.0), (1.0, 1.0), (1.0, 1.0))
    cfg = SecrecyConfig(1.0, 0.0)

    class Same:
        def random(self, shape):
            return np.full(shape, 0.5)

    for scheme in "TS", "ITS", "OS":
        _, snap = mc_trial(links, cfg, scheme, Same())
        assert snap.selected == 0


def test_snapshot_invariants(three_relays):
    links, cfg = three_relays
    rng = np.random.default_rng(1)
    for _ in range(200):
        _, snap = mc_trial(links, cfg, "TS", rng)
        assert min(snap.gamma_sd, snap.gamma_se, *snap.gamma_sk, *snap.gamma_kd, *snap.gamma_ke) >= 0
        if snap.selected is not None:
            assert snap.gamma_m >= snap.gamma_sd and snap.gamma_e >= snap.gamma_se


def test_decoding_set_frequencies():
    links, cfg = PRESETS["fig2"]["rs1"].at(10.0)
    sim = simulate(links, cfg, TRIALS, seed=42, schemes=("TS",))
    counts = np.bincount(sim.decoding_mask, minlength=16)
    for s in all_decoding_sets(4):
        p = prob_decoding_set(links, cfg, s)
        f = counts[s.mask] / TRIALS
        assert abs(f - p) <= 3 * math.sqrt(p * (1 - p) / TRIALS) + 1e-12, s


def test_direct_link_outage_matches():
    links = LinkParams.from_db(3, 2)
    cfg = SecrecyConfig(1.0)
    est = mc_estimate(links, cfg, "TS", TRIALS, seed=42)
    assert within(est, outage_empty_set(links, cfg))


def test_single_relay_outage_matches():
    links = LinkParams(1.0, 1.0, (1.0,), (2.0,), (2.0,))
    cfg = SecrecyConfig(1.0, 0.0)
    est = mc_estimate(links, cfg, "TS", TRIALS, seed=42)
    assert within(est, outage_single_relay(links, cfg, 0))


@pytest.mark.parametrize(
    "fn, scheme, ke_db",
    [(outage_ts_set, "TS", (3, 3)), (outage_its_set, "ITS", (0, 9)), (outage_os_set, "OS", (3, 3))],
)
def test_conditional_set_outage_matches(fn, scheme, ke_db):
    # zero threshold: both relays always decode, so MC samples P_out given S = {0, 1}
    links = LinkParams.from_db(3, 2, [10, 10], [10, 10], ke_db)
    cfg = SecrecyConfig(1.0, 0.0)
    est = mc_estimate(links, cfg, scheme, TRIALS, seed=42)
    assert within(est, fn(links, cfg, DecodingSet.from_members([0, 1], 2)))


def test_fig2_end_to_end():
    links, cfg = PRESETS["fig2"]["rs1"].at(15.0)
    sim = simulate(links, cfg, TRIALS, seed=42)
    for scheme in "TS", "ITS", "OS":
        assert within(sim.estimate(scheme), secrecy_outage(links, cfg, scheme).total)


def test_optimal_selection_dominates_per_trial():
    links, cfg = PRESETS["fig2"]["rs1"].at(12.0)
    sim = simulate(links, cfg, 200_000, seed=9)
    assert not np.any(sim.outage["OS"] & ~sim.outage["TS"])
    assert not np.any(sim.outage["OS"] & ~sim.outage["ITS"])


def test_weighted_selection_can_lose_at_high_rate():
    # at R_s = 2 the alpha-weighted rule is genuinely worse than TS around 16 dB
    links, cfg = PRESETS["fig2"]["rs2"].at(16.0)
    gap = secrecy_outage(links, cfg, "ITS").total - secrecy_outage(links, cfg, "TS").total
    sim = simulate(links, cfg, TRIALS, seed=42, schemes=("TS", "ITS"))
    d = sim.outage["ITS"].astype(float) - sim.outage["TS"].astype(float)
    se = d.std() / math.sqrt(TRIALS)
    assert gap > 0.005
    assert abs(d.mean() - gap) <= 3 * se and d.mean() > 10 * se
