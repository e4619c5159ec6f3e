/** Editor state transitions and render-request construction.
 *
 * The state here mirrors the server's validation rules so that any
 * in-range widget interaction produces a request the server accepts:
 * softness is clamped to [0,1], the sample count to >= 1, and the
 * light carries exactly one of H / horizon by construction.
 */

import type { EditorState, LightMode, RenderParams } from './types.js';

export function initialState(): EditorState {
  return {
    sceneId: null,
    lightX: 0,
    lightY: 0,
    lightMode: { kind: 'point', H: 200 },
    softness: 0,
    samples: 64,
    seed: 0,
    renderMode: 'hard',
    composite: false,
  };
}

export const clamp = (v: number, lo: number, hi: number): number =>
  Math.min(hi, Math.max(lo, v));

export function placeLight(s: EditorState, x: number, y: number): EditorState {
  return { ...s, lightX: x, lightY: y };
}

export function setLightHeight(s: EditorState, H: number): EditorState {
  return { ...s, lightMode: { kind: 'point', H } };
}

export function setHorizon(s: EditorState, horizon: number): EditorState {
  return { ...s, lightMode: { kind: 'horizon', horizon } };
}

/** Toggle between point and horizon placement, carrying a sane default. */
export function toggleLightMode(s: EditorState): EditorState {
  const lightMode: LightMode =
    s.lightMode.kind === 'point'
      ? { kind: 'horizon', horizon: s.lightY + s.lightMode.H }
      : { kind: 'point', H: s.lightMode.horizon - s.lightY || 200 };
  return { ...s, lightMode };
}

export function setSoftness(s: EditorState, softness: number): EditorState {
  return { ...s, softness: clamp(softness, 0, 1) };
}

/** Horizon lights degenerate when the row equals the light's own row;
 * nudge by a pixel instead of sending a request the server rejects. */
function safeHorizon(horizon: number, lightY: number): number {
  return horizon === lightY ? horizon + 1 : horizon;
}

export function renderParams(s: EditorState, preview: boolean): RenderParams {
  const light: RenderParams['light'] = { x: s.lightX, y: s.lightY };
  if (s.lightMode.kind === 'point') {
    light.H = s.lightMode.H === 0 ? 1 : s.lightMode.H;
  } else {
    light.horizon = safeHorizon(s.lightMode.horizon, s.lightY);
  }
  return {
    light,
    softness: clamp(s.softness, 0, 1),
    samples: Math.max(1, Math.round(s.samples)),
    seed: s.seed,
    mode: s.renderMode,
    composite: s.composite,
    preview,
  };
}
