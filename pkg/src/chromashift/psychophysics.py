"""Simulated 4AFC discrimination study: staircase, observer, study driver.

The harness mirrors the human procedure end to end so the pipeline can be
exercised without participants: a trial shows four patches (three in the
base color, one odd color on a sampling line), a 1-up-2-down staircase
adapts the odd color's distance, and a sequence ends after six reversals
with the threshold taken as the mean of the last three. A full study is
64 sequences: 4 base colors x 4 sampling lines x 2 directions x 2 phases
(color shifts allowed or not).

The stand-in observer is a deterministic dichromat: it picks the odd patch
whenever the simulated-percept difference (maximized over rotation angles
when shifts are allowed) exceeds its threshold, and guesses uniformly
otherwise. Everything is driven by explicit rngs, so a seed fixes the
whole study.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import analysis, colorspace, cvd, rotation

START_DISTANCE = 15.0  # delta-E of the first trial's odd color
COARSE_STEP = 2.0  # delta-E per move until the second reversal
FINE_STEP = 1.0  # delta-E per move afterwards
REVERSAL_LIMIT = 6

PHASES = ("with_shift", "without_shift")
LINE_NAMES = ("protan", "deutan", "tritan", "ortho_protan")

# The study's base colors (display sRGB codes).
BASE_COLORS_SRGB = {
    "blue": (86, 95, 214),
    "green": (100, 204, 102),
    "red": (184, 74, 74),
    "gray": (136, 136, 136),
}


# ---------------------------------------------------------------------------
# Staircase


@dataclass(frozen=True)
class StaircaseState:
    """State of one 1-up-2-down sequence; ``staircase_step`` advances it."""

    base_rgb: np.ndarray
    direction_lab: np.ndarray  # unit tangent of the sampling line at the base
    current_distance: float
    step: float
    max_distance: float
    consecutive_correct: int = 0
    reversals: tuple[float, ...] = ()
    last_move: str = "none"  # "none", "up" or "down"
    finished: bool = False


def new_staircase(base_rgb, direction_lab, max_distance: float) -> StaircaseState:
    return StaircaseState(
        base_rgb=np.asarray(base_rgb, dtype=np.float64),
        direction_lab=np.asarray(direction_lab, dtype=np.float64),
        current_distance=min(START_DISTANCE, max_distance),
        step=COARSE_STEP,
        max_distance=max_distance,
    )


def staircase_step(state: StaircaseState, correct: bool) -> StaircaseState:
    """Advance the staircase by one trial outcome.

    Two consecutive correct answers move the distance down one step and
    reset the counter; a wrong answer moves it up. A move opposite to the
    previous move records the pre-move distance as a reversal; the step
    shrinks after the second reversal, and the sixth finishes the
    sequence. Distances clamp to [0, max_distance].
    """
    if state.finished:
        raise ValueError("staircase already finished")
    if correct:
        if state.consecutive_correct + 1 < 2:
            return replace(state, consecutive_correct=state.consecutive_correct + 1)
        move = "down"
    else:
        move = "up"

    reversals = state.reversals
    if state.last_move != "none" and move != state.last_move:
        reversals = reversals + (state.current_distance,)
    step = FINE_STEP if len(reversals) >= 2 else COARSE_STEP
    if move == "down":
        distance = max(0.0, state.current_distance - step)
    else:
        distance = min(state.max_distance, state.current_distance + step)
    return replace(
        state,
        current_distance=distance,
        step=step,
        consecutive_correct=0,
        reversals=reversals,
        last_move=move,
        finished=len(reversals) >= REVERSAL_LIMIT,
    )


def threshold_estimate(state: StaircaseState) -> float:
    """Mean of the last three reversals of a finished staircase."""
    if not state.finished:
        raise ValueError("staircase not finished")
    return float(np.mean(state.reversals[3:6]))


# ---------------------------------------------------------------------------
# Sampling lines

_EPS_TANGENT = 0.25  # delta-E step used to estimate a line's Lab tangent


class ChromaticPath(cvd.DeltaEPath):
    """Straight line in xy chromaticity at the base color's luminance."""

    def __init__(self, base_rgb, direction_xy):
        super().__init__(base_rgb)
        xyz = colorspace.linear_to_xyz(self.base_rgb)
        self.base_xy = colorspace.xyz_to_xy(xyz)
        self.luminance = float(xyz[1])
        self.direction_xy = np.asarray(direction_xy, dtype=np.float64)
        self.direction_xy = self.direction_xy / np.linalg.norm(self.direction_xy)

    def color(self, param: float) -> np.ndarray:
        x, y = self.base_xy + param * self.direction_xy
        if y <= 1e-6:
            return np.full(3, np.nan)  # outside the physical half-plane
        return colorspace.xyz_to_linear(colorspace.xyy_to_xyz(x, y, self.luminance))


def _orthogonal_to_protan(base_rgb) -> ChromaticPath:
    line = cvd.confusion_line(base_rgb, cvd.CvdType.PROTAN)
    ortho = np.array([-line.direction[1], line.direction[0]])
    return ChromaticPath(base_rgb, ortho)


def sampling_line(base_rgb, name: str) -> cvd.DeltaEPath:
    """One of the study's four sampling lines through a base color."""
    if name == "ortho_protan":
        return _orthogonal_to_protan(base_rgb)
    return cvd.ConfusionPath(base_rgb, cvd.CvdType(name))


def line_tangent_lab(path: cvd.DeltaEPath, sign: float) -> np.ndarray:
    """Unit Lab-space direction of a line at its base color."""
    probe = colorspace.lab_from_linear(path.color_at_delta_e(sign * _EPS_TANGENT))
    delta = probe - path.base_lab
    return delta / np.linalg.norm(delta)


# ---------------------------------------------------------------------------
# Trials and the simulated observer


@dataclass(frozen=True)
class TrialLayout:
    """Four patches: three in the base color, the odd one at odd_position."""

    base_rgb: np.ndarray
    odd_rgb: np.ndarray
    odd_position: int  # 0..3

    @property
    def patches(self) -> np.ndarray:
        out = np.tile(self.base_rgb, (4, 1))
        out[self.odd_position] = self.odd_rgb
        return out


def make_trial(base_rgb, odd_rgb, rng: np.random.Generator) -> TrialLayout:
    return TrialLayout(
        np.asarray(base_rgb, dtype=np.float64),
        np.asarray(odd_rgb, dtype=np.float64),
        int(rng.integers(0, 4)),
    )


@dataclass(frozen=True)
class SimulatedObserver:
    """Deterministic dichromat observer with a JND threshold and a lapse rate."""

    cvd_type: cvd.CvdType
    tau_jnd: float = 1.0
    lapse_rate: float = 0.0

    def __post_init__(self):
        if self.tau_jnd <= 0.0:
            raise ValueError("tau_jnd must be positive")
        if not 0.0 <= self.lapse_rate <= 1.0:
            raise ValueError("lapse_rate must be in [0, 1]")


@lru_cache(maxsize=8)
def _rotation_grid(angle_step_deg: float) -> np.ndarray:
    thetas = np.radians(np.arange(0.0, 360.0, angle_step_deg))
    return np.stack([rotation.rotation_matrix(t) for t in thetas])


def percept_jnd(base_rgb, odd_rgb, cvd_type: cvd.CvdType, shift_allowed: bool,
                angle_step_deg: float = 1.0) -> float:
    """Largest simulated-percept JND between two colors over allowed angles.

    Without shifts only the resting view (angle 0) counts; with shifts the
    pair is rotated through the full angle grid and the maximum is taken,
    which models an observer free to sweep the slider.
    """
    pair = np.stack([np.asarray(base_rgb, dtype=np.float64), np.asarray(odd_rgb, dtype=np.float64)])
    if shift_allowed:
        rotated = np.einsum("aij,cj->aci", _rotation_grid(angle_step_deg), pair)
    else:
        rotated = pair[None, :, :]
    lab = colorspace.lab_from_linear(
        cvd.simulate_dichromat(np.clip(rotated, 0.0, 1.0), cvd_type)
    )
    jnd = colorspace.delta_e_to_jnd(colorspace.delta_e76(lab[:, 0, :], lab[:, 1, :]))
    return float(jnd.max())


def observer_decide(
    observer: SimulatedObserver,
    layout: TrialLayout,
    shift_allowed: bool,
    rng: np.random.Generator,
    angle_step_deg: float = 1.0,
) -> int:
    """Patch index the observer picks for one trial."""
    if observer.lapse_rate > 0.0 and rng.random() < observer.lapse_rate:
        return int(rng.integers(0, 4))
    jnd = percept_jnd(layout.base_rgb, layout.odd_rgb, observer.cvd_type, shift_allowed,
                      angle_step_deg)
    if jnd > observer.tau_jnd:
        return layout.odd_position
    return int(rng.integers(0, 4))


# ---------------------------------------------------------------------------
# Sequences and the full study


def run_sequence(
    observer: SimulatedObserver,
    base_rgb,
    line: cvd.DeltaEPath,
    direction: int,
    shift_allowed: bool,
    rng: np.random.Generator,
    max_trials: int = 500,
    angle_step_deg: float = 1.0,
) -> float:
    """Drive one staircase sequence to completion; returns the threshold.

    ``direction`` is +1 or -1 along the line. The staircase is capped at
    the line's in-gamut range. If the reversal budget is somehow not spent
    within ``max_trials`` the best available estimate is returned.
    """
    if direction not in (-1, 1):
        raise ValueError("direction must be +1 or -1")
    max_distance = line.max_delta_e(float(direction))
    state = new_staircase(base_rgb, line_tangent_lab(line, float(direction)), max_distance)
    color_cache: dict[float, np.ndarray] = {}
    for _ in range(max_trials):
        if state.finished:
            break
        d = state.current_distance
        if d not in color_cache:
            color_cache[d] = line.color_at_delta_e(direction * d)
        layout = make_trial(base_rgb, color_cache[d], rng)
        picked = observer_decide(observer, layout, shift_allowed, rng, angle_step_deg)
        state = staircase_step(state, picked == layout.odd_position)
    if state.finished:
        return threshold_estimate(state)
    if len(state.reversals) >= 3:
        return float(np.mean(state.reversals[-3:]))
    return state.current_distance


@dataclass(frozen=True)
class SequenceSpec:
    base_name: str
    line: str
    direction: int
    phase: str


@dataclass(frozen=True)
class StudyConfig:
    """The 64-sequence enumeration, shuffled within each phase by the seed."""

    seed: int
    base_colors: dict[str, np.ndarray] = field(repr=False, compare=False)
    sequences: tuple[SequenceSpec, ...] = ()


def make_study_config(seed: int) -> StudyConfig:
    base_colors = {
        name: colorspace.srgb_decode(np.array(srgb)) for name, srgb in BASE_COLORS_SRGB.items()
    }
    rng = np.random.default_rng(seed)
    sequences: list[SequenceSpec] = []
    for phase in PHASES:
        block = [
            SequenceSpec(base, line, direction, phase)
            for base in BASE_COLORS_SRGB
            for line in LINE_NAMES
            for direction in (1, -1)
        ]
        order = rng.permutation(len(block))
        sequences.extend(block[i] for i in order)
    return StudyConfig(seed=seed, base_colors=base_colors, sequences=tuple(sequences))


@dataclass(frozen=True)
class ThresholdRecord:
    base_name: str
    line: str
    direction: int
    phase: str
    threshold_delta_e: float
    endpoint_xy: tuple[float, float]


def run_study(
    observer: SimulatedObserver,
    config: StudyConfig,
    angle_step_deg: float = 1.0,
) -> list[ThresholdRecord]:
    """Run all 64 sequences; rng streams are spawned per sequence from the seed."""
    streams = np.random.SeedSequence(config.seed).spawn(len(config.sequences))
    lines = {
        (name, line): sampling_line(rgb, line)
        for name, rgb in config.base_colors.items()
        for line in LINE_NAMES
    }
    records = []
    for spec, stream in zip(config.sequences, streams):
        line = lines[(spec.base_name, spec.line)]
        threshold = run_sequence(
            observer,
            config.base_colors[spec.base_name],
            line,
            spec.direction,
            spec.phase == "with_shift",
            np.random.default_rng(stream),
            angle_step_deg=angle_step_deg,
        )
        endpoint = line.color_at_delta_e(spec.direction * threshold)
        xy = colorspace.xyz_to_xy(colorspace.linear_to_xyz(endpoint))
        records.append(
            ThresholdRecord(
                spec.base_name, spec.line, spec.direction, spec.phase,
                threshold, (float(xy[0]), float(xy[1])),
            )
        )
    return records


def study_ellipses(records: list[ThresholdRecord]) -> dict[tuple[str, str], dict]:
    """Fit a threshold ellipse per (base color, phase) from the 8 endpoints."""
    groups: dict[tuple[str, str], list[ThresholdRecord]] = {}
    for rec in records:
        groups.setdefault((rec.base_name, rec.phase), []).append(rec)
    out = {}
    for key, recs in groups.items():
        points = np.array([r.endpoint_xy for r in recs])
        ellipse = analysis.fit_ellipse(points)
        out[key] = {"ellipse": ellipse, "area": analysis.ellipse_area(ellipse)}
    return out


def perturb_color(rgb, distance: float, rng: np.random.Generator, max_tries: int = 256) -> np.ndarray:
    """Move a color a fixed delta-E in a uniformly random Lab direction.

    Directions are redrawn until the endpoint is inside the gamut; raises
    GamutError when no direction fits (distance too large for the color).
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    if distance < 0.0:
        raise ValueError("distance must be non-negative")
    if distance == 0.0:
        return rgb.copy()
    lab = colorspace.lab_from_linear(rgb)
    for _ in range(max_tries):
        direction = rng.normal(size=3)
        norm = np.linalg.norm(direction)
        if norm < 1e-12:
            continue
        candidate = colorspace.linear_from_lab(lab + distance * direction / norm)
        if np.all(candidate >= 0.0) and np.all(candidate <= 1.0):
            return candidate
    raise cvd.GamutError(f"no in-gamut color at {distance} delta-E from {rgb}")
