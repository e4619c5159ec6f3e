/** Shared editor and wire types for the shadow studio. */

export type RenderMode = 'hard' | 'soft' | 'reflection';

/** Exactly one way to pin the light's height, enforced by construction. */
export type LightMode =
  | { kind: 'point'; H: number }
  | { kind: 'horizon'; horizon: number };

export interface EditorState {
  sceneId: string | null;
  lightX: number;
  lightY: number;
  lightMode: LightMode;
  softness: number;
  samples: number;
  seed: number;
  renderMode: RenderMode;
  composite: boolean;
}

/** JSON body of POST /scenes/{id}/render. */
export interface RenderParams {
  light: { x: number; y: number; H?: number; horizon?: number };
  softness: number;
  samples: number;
  seed: number;
  mode: RenderMode;
  composite: boolean;
  preview: boolean;
}

export interface SceneUpload {
  cutout: Blob;
  height: Blob;
  receiver?: Blob;
  background?: Blob;
}
