"""Staircase mechanics, the simulated observer and the study driver."""

from __future__ import annotations

import numpy as np
import pytest

from chromashift import colorspace as cs, cvd, psychophysics as pp

GRAY = cs.srgb_decode([136, 136, 136])


def fresh_staircase(max_distance=60.0):
    return pp.new_staircase(GRAY, np.array([0.0, 1.0, 0.0]), max_distance)


class TestStaircase:
    def test_first_incorrect_moves_up_without_reversal(self):
        s = fresh_staircase()
        s2 = pp.staircase_step(s, False)
        assert s2.current_distance == s.current_distance + pp.COARSE_STEP
        assert s2.reversals == ()
        assert s2.last_move == "up"

    def test_single_correct_does_not_move(self):
        s = fresh_staircase()
        s2 = pp.staircase_step(s, True)
        assert s2.current_distance == s.current_distance
        assert s2.consecutive_correct == 1
        assert s2.last_move == "none"

    def test_hand_traced_sequence(self):
        # correct, correct, correct, correct, incorrect:
        # two down-moves, then an up-move that records one reversal.
        s = fresh_staircase()
        d0 = s.current_distance
        for outcome in (True, True):
            s = pp.staircase_step(s, outcome)
        assert s.current_distance == d0 - pp.COARSE_STEP
        assert s.last_move == "down"
        for outcome in (True, True):
            s = pp.staircase_step(s, outcome)
        assert s.current_distance == d0 - 2 * pp.COARSE_STEP
        s = pp.staircase_step(s, False)
        assert s.last_move == "up"
        assert s.reversals == (d0 - 2 * pp.COARSE_STEP,)

    def test_finishes_after_six_reversals_and_rejects_stepping(self):
        s = fresh_staircase()
        rng = np.random.default_rng(50)
        steps = 0
        while not s.finished:
            s = pp.staircase_step(s, bool(rng.random() < 0.6))
            steps += 1
            assert steps < 1000
        assert len(s.reversals) == 6
        with pytest.raises(ValueError):
            pp.staircase_step(s, True)

    def test_step_shrinks_after_second_reversal(self):
        s = fresh_staircase()
        # down, up (reversal 1), down (reversal 2) -> fine step from then on
        s = pp.staircase_step(pp.staircase_step(s, True), True)  # down
        s = pp.staircase_step(s, False)  # up, reversal 1
        d = s.current_distance
        s = pp.staircase_step(pp.staircase_step(s, True), True)  # down, reversal 2
        assert s.current_distance == d - pp.FINE_STEP
        assert len(s.reversals) == 2

    def test_distance_clamps_to_bounds(self):
        s = fresh_staircase(max_distance=16.0)
        s = pp.staircase_step(s, False)
        assert s.current_distance == 16.0
        low = pp.StaircaseState(
            base_rgb=GRAY, direction_lab=np.array([0, 1.0, 0]), current_distance=0.5,
            step=pp.COARSE_STEP, max_distance=16.0,
        )
        low = pp.staircase_step(pp.staircase_step(low, True), True)
        assert low.current_distance == 0.0


class TestThresholdEstimate:
    def test_mean_of_last_three(self):
        s = fresh_staircase()
        s = pp.StaircaseState(
            base_rgb=s.base_rgb, direction_lab=s.direction_lab, current_distance=5.0,
            step=1.0, max_distance=60.0, reversals=(8.0, 6.0, 7.0, 5.0, 6.0, 4.0),
            finished=True,
        )
        assert pp.threshold_estimate(s) == pytest.approx(5.0)

    def test_equal_reversals(self):
        s = fresh_staircase()
        s = pp.StaircaseState(
            base_rgb=s.base_rgb, direction_lab=s.direction_lab, current_distance=5.0,
            step=1.0, max_distance=60.0, reversals=(3.0,) * 6, finished=True,
        )
        assert pp.threshold_estimate(s) == 3.0

    def test_first_three_reversals_ignored(self):
        base = fresh_staircase()
        for head in [(8.0, 6.0, 7.0), (7.0, 8.0, 6.0), (6.0, 7.0, 8.0)]:
            s = pp.StaircaseState(
                base_rgb=base.base_rgb, direction_lab=base.direction_lab,
                current_distance=5.0, step=1.0, max_distance=60.0,
                reversals=head + (5.0, 6.0, 4.0), finished=True,
            )
            assert pp.threshold_estimate(s) == pytest.approx(5.0)

    def test_unfinished_rejected(self):
        with pytest.raises(ValueError):
            pp.threshold_estimate(fresh_staircase())


class TestObserver:
    def test_validation(self):
        with pytest.raises(ValueError):
            pp.SimulatedObserver(cvd.CvdType.DEUTAN, tau_jnd=0.0)
        with pytest.raises(ValueError):
            pp.SimulatedObserver(cvd.CvdType.DEUTAN, lapse_rate=1.5)

    def test_identical_odd_is_chance_level(self):
        obs = pp.SimulatedObserver(cvd.CvdType.DEUTAN, tau_jnd=1.0)
        rng = np.random.default_rng(51)
        correct = 0
        n = 2000
        for _ in range(n):
            layout = pp.make_trial(GRAY, GRAY, rng)
            correct += pp.observer_decide(obs, layout, False, rng) == layout.odd_position
        assert correct / n == pytest.approx(0.25, abs=0.03)

    def test_lapsing_observer_is_chance_level(self):
        obs = pp.SimulatedObserver(cvd.CvdType.DEUTAN, tau_jnd=1.0, lapse_rate=1.0)
        rng = np.random.default_rng(52)
        far = cs.srgb_decode([220, 220, 40])
        correct = 0
        n = 10000
        for _ in range(n):
            layout = pp.make_trial(GRAY, far, rng)
            correct += pp.observer_decide(obs, layout, True, rng) == layout.odd_position
        assert correct / n == pytest.approx(0.25, abs=0.03)

    def test_far_odd_always_correct(self):
        # 10 JND along a direction the observer can see.
        obs = pp.SimulatedObserver(cvd.CvdType.DEUTAN, tau_jnd=1.0)
        line = pp.sampling_line(GRAY, "tritan")
        odd = line.color_at_delta_e(10 * cs.JND_DELTA_E / 0.82)  # visibility-compensated
        rng = np.random.default_rng(53)
        for _ in range(50):
            layout = pp.make_trial(GRAY, odd, rng)
            assert pp.observer_decide(obs, layout, False, rng) == layout.odd_position

    def test_confusion_line_odd_needs_the_shift(self):
        obs = pp.SimulatedObserver(cvd.CvdType.DEUTAN, tau_jnd=1.0)
        line = pp.sampling_line(GRAY, "deutan")
        odd = line.color_at_delta_e(2 * cs.JND_DELTA_E)  # 2 JND along the blind line
        rng = np.random.default_rng(54)
        without = sum(
            pp.observer_decide(obs, pp.make_trial(GRAY, odd, rng), False, rng)
            == 0  # fixed reference position
            for _ in range(400)
        )
        # Guessing: fraction picking any fixed position is about 1/4.
        assert without / 400 == pytest.approx(0.25, abs=0.07)
        for _ in range(25):
            layout = pp.make_trial(GRAY, odd, rng)
            assert pp.observer_decide(obs, layout, True, rng) == layout.odd_position

    def test_trial_layout_patches(self):
        layout = pp.TrialLayout(GRAY, np.array([0.5, 0.2, 0.2]), 2)
        patches = layout.patches
        assert patches.shape == (4, 3)
        assert np.array_equal(patches[2], [0.5, 0.2, 0.2])
        for k in (0, 1, 3):
            assert np.array_equal(patches[k], GRAY)


class TestSequences:
    def test_ideal_observer_converges_near_tau(self):
        obs = pp.SimulatedObserver(cvd.CvdType.PROTAN, tau_jnd=1.0)
        line = pp.sampling_line(GRAY, "ortho_protan")
        thresholds = [
            pp.run_sequence(obs, GRAY, line, 1, False, np.random.default_rng(seed))
            for seed in range(100)
        ]
        median_jnd = np.median(thresholds) / cs.JND_DELTA_E
        assert 0.5 <= median_jnd <= 2.0

    def test_blind_direction_rises_to_gamut_bound(self):
        obs = pp.SimulatedObserver(cvd.CvdType.DEUTAN, tau_jnd=1.0)
        line = pp.sampling_line(GRAY, "deutan")
        bound = line.max_delta_e(1.0)
        threshold = pp.run_sequence(obs, GRAY, line, 1, False, np.random.default_rng(55))
        assert threshold > 0.75 * bound

    def test_shift_makes_blind_direction_informative(self):
        obs = pp.SimulatedObserver(cvd.CvdType.DEUTAN, tau_jnd=1.0)
        blind = pp.sampling_line(GRAY, "deutan")
        visible = pp.sampling_line(GRAY, "tritan")
        with_shift = pp.run_sequence(obs, GRAY, blind, 1, True, np.random.default_rng(56))
        reference = pp.run_sequence(obs, GRAY, visible, 1, False, np.random.default_rng(56))
        assert with_shift <= 3.0 * reference

    def test_always_correct_observer_reaches_zero_neighborhood(self):
        # tau near zero makes every discriminable distance pass, driving
        # the staircase into the floor.
        obs = pp.SimulatedObserver(cvd.CvdType.DEUTAN, tau_jnd=1e-9)
        line = pp.sampling_line(GRAY, "tritan")
        threshold = pp.run_sequence(obs, GRAY, line, 1, False, np.random.default_rng(57))
        assert threshold <= 3.0


class TestStudy:
    def test_config_enumeration(self):
        cfg = pp.make_study_config(7)
        assert len(cfg.sequences) == 64
        for phase in pp.PHASES:
            combos = {
                (s.base_name, s.line, s.direction)
                for s in cfg.sequences
                if s.phase == phase
            }
            assert len(combos) == 32
        assert pp.make_study_config(7) == cfg
        assert pp.make_study_config(8) != cfg

    def test_study_is_deterministic(self):
        obs = pp.SimulatedObserver(cvd.CvdType.DEUTAN, tau_jnd=1.0)
        cfg = pp.make_study_config(3)
        first = pp.run_study(obs, cfg, angle_step_deg=6.0)
        second = pp.run_study(obs, cfg, angle_step_deg=6.0)
        assert first == second
        assert len(first) == 64

    def test_study_ellipses_shrink_with_shift(self):
        obs = pp.SimulatedObserver(cvd.CvdType.DEUTAN, tau_jnd=1.0)
        records = pp.run_study(obs, pp.make_study_config(11), angle_step_deg=6.0)
        ellipses = pp.study_ellipses(records)
        for base in pp.BASE_COLORS_SRGB:
            assert ellipses[(base, "with_shift")]["area"] < ellipses[(base, "without_shift")]["area"]


class TestPerturbColor:
    def test_distance_honored(self):
        rng = np.random.default_rng(60)
        lab = cs.lab_from_linear(GRAY)
        for _ in range(50):
            moved = pp.perturb_color(GRAY, 4.0, rng)
            d = cs.delta_e76(cs.lab_from_linear(moved), lab)
            assert 3.9 <= d <= 4.1
            assert np.all(moved >= 0.0) and np.all(moved <= 1.0)

    def test_zero_distance_identity(self):
        rng = np.random.default_rng(61)
        assert np.array_equal(pp.perturb_color(GRAY, 0.0, rng), GRAY)

    def test_directions_roughly_uniform(self):
        rng = np.random.default_rng(62)
        lab = cs.lab_from_linear(GRAY)
        octants = np.zeros(8, dtype=int)
        for _ in range(1000):
            moved = pp.perturb_color(GRAY, 4.0, rng)
            d = cs.lab_from_linear(moved) - lab
            octants[int(d[0] > 0) * 4 + int(d[1] > 0) * 2 + int(d[2] > 0)] += 1
        assert octants.max() / 1000 < 0.20

    def test_infeasible_distance_rejected(self):
        rng = np.random.default_rng(63)
        with pytest.raises(cvd.GamutError):
            pp.perturb_color(GRAY, 500.0, rng)
        with pytest.raises(ValueError):
            pp.perturb_color(GRAY, -1.0, rng)
