"""Tests for the Monte Carlo recovery-rate harness."""
import json
import math

import numpy as np
import pytest
from scipy.special import ndtri

from mrflimits.genmodel import EDGE_AND_NODE, EDGE_ONLY, ModelParams
from mrflimits.graphs import EnumerationLimitError, chain, complete, star
from mrflimits.montecarlo import (
    McSummary,
    TrialConfig,
    cell_seed,
    grid_configs,
    run_trials,
    summary_to_dict,
    sweep,
    wilson_interval,
)


class TestWilsonInterval:
    def test_reference_values(self):
        low, high = wilson_interval(1600, 2000)
        assert low == pytest.approx(0.7759858793432406, rel=1e-14)
        assert high == pytest.approx(0.8220302331207878, rel=1e-14)

    def test_matches_score_formula(self):
        z = float(ndtri(0.995))
        for s, t in [(0, 50), (3, 7), (999, 1000), (1, 1)]:
            phat = s / t
            denom = 1 + z * z / t
            center = (phat + z * z / (2 * t)) / denom
            half = z * math.sqrt(phat * (1 - phat) / t + z * z / (4 * t * t)) / denom
            low, high = wilson_interval(s, t)
            assert low == pytest.approx(max(0.0, center - half), abs=1e-15)
            assert high == pytest.approx(min(1.0, center + half), abs=1e-15)

    def test_degenerate_counts_stay_in_unit_interval(self):
        assert wilson_interval(0, 10) == (0.0, pytest.approx(0.3988540933049081))
        assert wilson_interval(10, 10) == (pytest.approx(0.6011459066950919), 1.0)

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            wilson_interval(1, 0)
        with pytest.raises(ValueError):
            wilson_interval(5, 4)


class TestTrialConfig:
    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            TrialConfig(complete(4), ModelParams(0.1), trials=0, master_seed=1)

    def test_rejects_zero_workers(self):
        with pytest.raises(ValueError):
            TrialConfig(complete(4), ModelParams(0.1), trials=1, master_seed=1, workers=0)

    def test_rejects_oversized_graph(self):
        with pytest.raises(EnumerationLimitError):
            TrialConfig(chain(30), ModelParams(0.1), trials=1, master_seed=1)

    def test_regime_follows_params(self):
        cfg = TrialConfig(complete(4), ModelParams(0.1), trials=1, master_seed=1)
        assert cfg.regime == EDGE_ONLY
        cfg2 = TrialConfig(complete(4), ModelParams(0.1, 0.2), trials=1, master_seed=1)
        assert cfg2.regime == EDGE_AND_NODE


class TestRunTrials:
    def test_noiseless_always_recovers(self):
        cfg = TrialConfig(complete(8), ModelParams(0.0), trials=100, master_seed=1)
        s = run_trials(cfg)
        assert s.rate == 1.0 and s.successes == 100
        assert s.tie_trials == 0
        assert s.bound_consistent

    def test_summary_invariants(self):
        cfg = TrialConfig(star(10), ModelParams(0.15), trials=400, master_seed=2, workers=2)
        s = run_trials(cfg)
        assert 0 <= s.successes <= s.trials
        assert s.ci_low <= s.rate <= s.ci_high
        assert s.regime == EDGE_ONLY

    def test_worker_count_never_changes_counts(self):
        base = None
        for workers in (1, 4, 8):
            cfg = TrialConfig(complete(10), ModelParams(0.1), trials=600,
                              master_seed=7, workers=workers)
            s = run_trials(cfg)
            key = (s.successes, s.tie_trials, s.rate, s.ci_low, s.ci_high)
            base = base or key
            assert key == base

    def test_json_dict_identical_across_workers_and_runs(self):
        dumps = []
        for workers in (1, 4, 4):
            cfg = TrialConfig(star(12), ModelParams(0.1, 0.1), trials=300,
                              master_seed=11, workers=workers)
            dumps.append(json.dumps(summary_to_dict(cfg, run_trials(cfg)), sort_keys=True))
        assert dumps[0] == dumps[1] == dumps[2]
        assert '"workers"' not in dumps[0]

    def test_dominant_alpha_with_near_noiseless_nodes(self):
        # q=1e-9 makes alpha huge, so node observations pin the argmax
        # and those observations are essentially never flipped.
        cfg = TrialConfig(star(10), ModelParams(0.2, 1e-9), trials=300, master_seed=3, workers=4)
        s = run_trials(cfg)
        assert s.regime == EDGE_AND_NODE
        assert s.rate == 1.0

    def test_bound_consistency_moderate_noise(self):
        cfg = TrialConfig(complete(12), ModelParams(0.05), trials=2000, master_seed=7, workers=8)
        s = run_trials(cfg)
        assert s.bound_consistent
        assert s.rate >= s.bounds.mle_success_lower - 3 * s.half_width

    def test_necessary_violated_cell_fails_often(self):
        # chain at p=0.2 sits past the information-theoretic threshold
        cfg = TrialConfig(chain(16), ModelParams(0.2), trials=800, master_seed=9, workers=8)
        s = run_trials(cfg)
        assert s.necessary_condition_violated
        assert 1.0 - s.rate >= 0.5 - 3 * s.half_width

    def test_ties_are_counted(self):
        # ties need frustrated cycles: on trees the quotient classes
        # biject with edge-sign patterns and the optimum is unique
        cfg = TrialConfig(complete(4), ModelParams(0.45), trials=400, master_seed=13)
        s = run_trials(cfg)
        assert s.tie_trials > 0
        tree = run_trials(TrialConfig(chain(8), ModelParams(0.45), trials=400, master_seed=13))
        assert tree.tie_trials == 0

    def test_boundary_params_regime2_propagate(self):
        # alpha undefined at q=0.5: solver weight does not exist there
        cfg = TrialConfig(complete(6), ModelParams(0.1, 0.5), trials=10, master_seed=1)
        with pytest.raises(ValueError):
            run_trials(cfg)


class TestSweep:
    def test_empty_grid(self):
        assert sweep([]) == []

    def test_duplicate_configs_identical(self):
        cfg = TrialConfig(complete(8), ModelParams(0.1), trials=200, master_seed=5, workers=2)
        a, b = sweep([cfg, cfg])
        assert a == b

    def test_grid_configs_derive_distinct_seeds(self):
        cfgs = grid_configs(chain(10), [ModelParams(p) for p in (0.0, 0.1, 0.2)],
                            trials=50, master_seed=42)
        assert len({c.master_seed for c in cfgs}) == 3
        assert [c.params.p for c in cfgs] == [0.0, 0.1, 0.2]

    def test_cell_seed_frozen_values(self):
        # derivation must stay stable or every archived run changes
        assert cell_seed(42, 0) == 11465652750463011511
        assert cell_seed(42, 1) == 15658369528003122356

    def test_sweep_runs_each_cell(self):
        cfgs = grid_configs(star(8), [ModelParams(p) for p in (0.0, 0.3)],
                            trials=100, master_seed=6, workers=2)
        out = sweep(cfgs)
        assert len(out) == 2
        assert out[0].rate == 1.0
        assert out[0].trials == out[1].trials == 100
