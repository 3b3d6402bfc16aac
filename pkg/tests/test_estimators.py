"""Monte Carlo estimator sweeps: scalar/vector consistency and limit behavior."""
import math

import numpy as np
import pytest

from heavykp.estimators import (
    IdsScale,
    LyapunovScale,
    chain_mixing,
    darling_ratio,
    estimate_ids,
    estimate_lyapunov,
    ids_trace,
    lyapunov_trace,
    model3_joint_samples,
    nonlinear_samples,
    sweep_chains,
)
from heavykp.potentials import Model, ModelConfig
from heavykp.rng import RngStream, sample_bump_height, split_stream
from heavykp.stats import mean_ci

_PI = math.pi


def _cfg(model: Model, **kw) -> ModelConfig:
    base = {"energy": 1.0}
    base.update(kw)
    return ModelConfig(model=model, **base)


CONFIGS = {
    "I": _cfg(Model.I, alpha1=0.5, energy=2.0),
    "II": _cfg(Model.II, alpha1=0.5, energy=1.0),
    "III": _cfg(Model.III, alpha2=0.6, energy=2.0),
    "IV": _cfg(Model.IV, alpha1=0.5, alpha2=0.6, energy=2.0),
}


# ── Vector sweep versus scalar traces ────────────────────────────────────────


@pytest.mark.parametrize("name", ["I", "II", "III", "IV"])
def test_sweep_matches_scalar_traces(name):
    # seed i of the sweep must retrace the single-chain scalar paths built on
    # split_stream(parent, i): same draws, same geometry, same flow values
    cfg = CONFIGS[name]
    parent = RngStream(321, stream_id=4)
    n_bumps, n_seeds = 60, 4
    res = sweep_chains(cfg, n_bumps, n_seeds, parent, want_theta=True, want_log_norm=True,
                       checkpoint_bumps=[20])
    for i in range(n_seeds):
        child = split_stream(parent, i)
        ids_pts = ids_trace(cfg, n_bumps, [20], child)
        lyap_pts = lyapunov_trace(cfg, n_bumps, [20], child)
        for rec_nb, (x_ids, rot), (x_ly, ln) in zip((20, 60), ids_pts, lyap_pts):
            rec = res.records[rec_nb]
            assert rec.x[i] == x_ids == x_ly
            assert rec.theta[i] / _PI == pytest.approx(rot, rel=1e-11, abs=1e-11)
            assert rec.log_norm[i] == pytest.approx(ln, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("name", ["I", "II", "III"])
def test_sweep_checkpoints_consistent_with_shorter_sweep(name):
    # single-block models draw one array per seed, so the 50-bump checkpoint
    # of a 200-bump sweep is bit-identical to a standalone 50-bump sweep on
    # the same stream (model IV's three stacked blocks shift positions, so
    # the property is deliberately not claimed there)
    cfg = CONFIGS[name]
    parent = RngStream(8421)
    long = sweep_chains(cfg, 200, 6, parent, want_theta=True, want_log_norm=True,
                        checkpoint_bumps=[50])
    short = sweep_chains(cfg, 50, 6, parent, want_theta=True, want_log_norm=True)
    a, b = long.records[50], short.records[50]
    assert np.array_equal(a.x, b.x)
    assert np.array_equal(a.theta, b.theta)
    assert np.array_equal(a.log_norm, b.log_norm)


def test_sweep_gap_models_require_positive_energy():
    cfg = _cfg(Model.IV, alpha1=0.5, alpha2=0.5, energy=-1.0)
    with pytest.raises(ValueError, match="require energy > 0"):
        sweep_chains(cfg, 10, 2, RngStream(1), want_theta=True)


def test_sweep_validation():
    cfg = CONFIGS["I"]
    with pytest.raises(ValueError):
        sweep_chains(cfg, 0, 2, RngStream(1))
    with pytest.raises(ValueError):
        sweep_chains(cfg, 10, 2, RngStream(1), checkpoint_bumps=[0])
    with pytest.raises(ValueError):
        sweep_chains(cfg, 10, 2, RngStream(1), checkpoint_bumps=[11])


def test_aux_sqrt_sums_match_manual_draws():
    # model II: sum sqrt(lam + X); model I: sqrt of the positive part of X - lam
    parent = RngStream(99)
    n = 40
    for name, reducer in (
        ("II", lambda x, lam: np.sqrt(lam + x).sum()),
        ("I", lambda x, lam: np.sqrt(np.maximum(x - lam, 0.0)).sum()),
    ):
        cfg = CONFIGS[name]
        res = sweep_chains(cfg, n, 3, parent, want_aux_sqrt=True)
        for i in range(3):
            gen = split_stream(parent, i).generator()
            x = sample_bump_height(cfg.bump_law(), gen, size=n)
            assert res.aux_sqrt_sum[i] == pytest.approx(reducer(x, cfg.energy), rel=1e-12)


def test_aux_sqrt_rejected_for_gap_models():
    with pytest.raises(ValueError, match="models I and II"):
        sweep_chains(CONFIGS["III"], 10, 2, RngStream(1), want_aux_sqrt=True)


# ── Scalar traces ────────────────────────────────────────────────────────────


def test_traces_record_requested_bump_counts():
    cfg = CONFIGS["I"]
    pts = lyapunov_trace(cfg, 30, [10, 20], RngStream(3))
    assert [x for x, _ in pts] == [10.0, 20.0, 30.0]
    rot = ids_trace(cfg, 30, [10, 20], RngStream(3))
    assert [x for x, _ in rot] == [10.0, 20.0, 30.0]
    # same chain: log norms nondecreasing in n for a model I chain is not
    # guaranteed, but positivity of the rotation is
    assert all(v > 0.0 for _, v in rot)


def test_trace_checkpoint_validation():
    cfg = CONFIGS["I"]
    with pytest.raises(ValueError):
        lyapunov_trace(cfg, 10, [0], RngStream(1))
    with pytest.raises(ValueError):
        ids_trace(cfg, 10, [11], RngStream(1))


# ── Estimates and scales ─────────────────────────────────────────────────────


def test_linear_scales_coincide_for_unit_spacing():
    # models I/II have x_n = n, so per-length and per-bump scales agree
    cfg = CONFIGS["I"]
    ex = estimate_lyapunov(cfg, 50, 8, RngStream(12), LyapunovScale.LINEAR_X)
    en = estimate_lyapunov(cfg, 50, 8, RngStream(12), LyapunovScale.LINEAR_N)
    assert np.allclose(ex.values, en.values, rtol=1e-12)
    assert ex.normalizer_desc != en.normalizer_desc


def test_nonlinear_normalizer_descriptions():
    est = estimate_lyapunov(CONFIGS["I"], 50, 4, RngStream(13), LyapunovScale.NONLINEAR_ALPHA)
    assert "alpha1=0.5" in est.normalizer_desc
    est3 = estimate_lyapunov(CONFIGS["III"], 50, 4, RngStream(13), LyapunovScale.NONLINEAR_ALPHA)
    assert "L_n**alpha2" in est3.normalizer_desc
    ids3 = estimate_ids(CONFIGS["III"], 50, 4, RngStream(13), IdsScale.NONLINEAR_ALPHA)
    assert "n**(1/alpha2)" in ids3.normalizer_desc


def test_model3_rotation_tracks_free_value():
    # sparse bumps barely perturb the free rotation: theta/(pi x) near 1/pi at k=1
    cfg = _cfg(Model.III, alpha2=0.5, energy=1.0)
    est = estimate_ids(cfg, 500, 200, RngStream(72))
    assert np.median(est.values) == pytest.approx(1.0 / _PI, rel=0.02)


def test_model3_lyapunov_per_bump_positive():
    cfg = _cfg(Model.III, alpha2=0.5, energy=1.0)
    est = estimate_lyapunov(cfg, 500, 100, RngStream(73), LyapunovScale.LINEAR_N)
    ci = mean_ci(est.values)
    assert ci.mean - ci.half_width > 0.0
    assert 0.05 < ci.mean < 0.15


def test_model2_linear_rotation_diverges():
    # theta grows like the sum of sqrt(lam + X), a heavy-tailed pile: the
    # per-length rotation must blow up with n rather than stabilize
    cfg = CONFIGS["II"]
    m_small = np.median(estimate_ids(cfg, 100, 100, RngStream(71)).values)
    m_big = np.median(estimate_ids(cfg, 1600, 100, RngStream(71)).values)
    assert m_big > 5.0 * m_small


def test_nonlinear_samples_dispatch_and_validation():
    cfg = CONFIGS["I"]
    vals = nonlinear_samples(cfg, 64, 16, "lyapunov", RngStream(14))
    assert vals.shape == (16,)
    assert np.all(vals >= 0.0)
    with pytest.raises(ValueError, match="which"):
        nonlinear_samples(cfg, 64, 16, "spectral", RngStream(14))
    with pytest.raises(ValueError):
        nonlinear_samples(cfg, 64, 1, "ids", RngStream(14))


def test_model3_joint_samples_identity():
    # dividing ln||M||/n by (L/n^(1/alpha))^alpha recovers the L^alpha scaling
    cfg = _cfg(Model.III, alpha2=0.5, energy=1.0)
    stream = RngStream(15)
    a_part, b_part = model3_joint_samples(cfg, 128, 32, stream)
    scaled = nonlinear_samples(cfg, 128, 32, "lyapunov", stream)
    assert np.allclose(a_part / b_part ** cfg.alpha2, scaled, rtol=1e-12)


def test_model3_joint_samples_model_checked():
    with pytest.raises(ValueError, match="Model III"):
        model3_joint_samples(CONFIGS["I"], 16, 4, RngStream(1))


# ── Darling ratio ────────────────────────────────────────────────────────────


def test_darling_ratio_values():
    assert darling_ratio([1.0, 2.0, 3.0, 4.0]) == pytest.approx(0.4)
    assert darling_ratio([7.0]) == 1.0
    assert darling_ratio(np.full(10, 2.5)) == pytest.approx(0.1)


def test_darling_ratio_validation():
    with pytest.raises(ValueError):
        darling_ratio([])
    with pytest.raises(ValueError):
        darling_ratio([1.0, 0.0])
    with pytest.raises(ValueError):
        darling_ratio([1.0, -2.0])


# ── Phase-chain mixing ───────────────────────────────────────────────────────


def test_mixing_output_shape_and_symmetry():
    cfg = _cfg(Model.I, alpha1=0.5, energy=1.0)
    ks = chain_mixing(cfg, 5, [-1.0, 0.0, 2.0], 50, RngStream(20))
    assert ks.shape == (5, 3, 3)
    assert np.all(ks >= 0.0) and np.all(ks <= 1.0)
    for s in range(5):
        assert np.array_equal(ks[s], ks[s].T)
        assert np.all(np.diag(ks[s]) == 0.0)


def test_mixing_identical_starts_stay_identical():
    cfg = _cfg(Model.I, alpha1=0.5, energy=1.0)
    ks = chain_mixing(cfg, 10, [0.5, 0.5], 50, RngStream(21))
    assert np.all(ks == 0.0)


def test_mixing_strong_disorder_collapses_exactly():
    # coupled chains at alpha = 1/2, k = 1: by 50 bumps every seed's three
    # phases have merged to the same float, so the KS distance is exactly 0
    cfg = _cfg(Model.I, alpha1=0.5, energy=1.0)
    ks = chain_mixing(cfg, 50, [-10.0, 0.0, 10.0], 200, RngStream(74))
    assert ks[0].max() > 0.1          # distinguishable at the start
    assert ks[9].max() < 0.02
    assert ks[49].max() == 0.0


def test_mixing_decay_profile_mild_disorder():
    # k = 6, alpha = 0.8: slower geometric contraction, still monotone
    cfg = _cfg(Model.I, alpha1=0.8, energy=36.0)
    ks = chain_mixing(cfg, 40, [-10.0, 0.0, 10.0], 20000, RngStream(75))
    d10, d20, d40 = ks[9].max(), ks[19].max(), ks[39].max()
    assert d10 < 0.006
    assert d20 < 0.5 * d10
    assert d40 < d20
    assert d40 < 5e-4


def test_mixing_validation():
    cfg = _cfg(Model.I, alpha1=0.5, energy=1.0)
    with pytest.raises(ValueError, match="Model I"):
        chain_mixing(CONFIGS["II"], 5, [0.0, 1.0], 10, RngStream(1))
    with pytest.raises(ValueError):
        chain_mixing(cfg, 5, [0.0], 10, RngStream(1))
    with pytest.raises(ValueError):
        chain_mixing(cfg, 0, [0.0, 1.0], 10, RngStream(1))
    with pytest.raises(ValueError):
        chain_mixing(cfg, 5, [0.0, 1.0], 1, RngStream(1))
