/**
 * Viewer state and the gesture math that drives it.
 *
 * The state is a plain value: rendering is a pure function of
 * (source, theta, mode), so replaying the same gestures reproduces the
 * same frames. A swipe has one degree of freedom; a full screen-width
 * maps to swipeGain degrees (default 360) and theta wraps modulo 360.
 */

export type CvdKind = "protan" | "deutan" | "tritan";

export interface ViewerState {
  /** Rotation angle in degrees, normalized to [0, 360). */
  thetaDeg: number;
  /** Degrees of rotation per screen-width of swipe. */
  swipeGain: number;
  /** Dichromat preview requested from the service, if any. */
  simPreview: CvdKind | null;
  /** Pixel coordinate of the active naming probe, if any. */
  probe: { x: number; y: number } | null;
}

export const DEFAULT_SWIPE_GAIN = 360;

export function initialState(swipeGain: number = DEFAULT_SWIPE_GAIN): ViewerState {
  if (!(swipeGain > 0)) throw new RangeError("swipeGain must be positive");
  return { thetaDeg: 0, swipeGain, simPreview: null, probe: null };
}

export function normalizeTheta(thetaDeg: number): number {
  const wrapped = thetaDeg % 360;
  return wrapped < 0 ? wrapped + 360 : wrapped;
}

/**
 * Apply a horizontal swipe; deltaFraction is the drag distance as a
 * fraction of the view width (right positive).
 */
export function swipeToTheta(state: ViewerState, deltaFraction: number): ViewerState {
  return {
    ...state,
    thetaDeg: normalizeTheta(state.thetaDeg + deltaFraction * state.swipeGain),
  };
}

export function setTheta(state: ViewerState, thetaDeg: number): ViewerState {
  return { ...state, thetaDeg: normalizeTheta(thetaDeg) };
}

/** The reset control: back to the unshifted view. */
export function resetTheta(state: ViewerState): ViewerState {
  return { ...state, thetaDeg: 0 };
}
