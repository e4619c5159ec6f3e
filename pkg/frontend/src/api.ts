/** Thin client for the render service. */

import type { RenderParams, SceneUpload } from './types.js';

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorDetail(resp: Response): Promise<string> {
  try {
    const body = await resp.json();
    return typeof body.detail === 'string' ? body.detail : JSON.stringify(body.detail);
  } catch {
    return resp.statusText || `HTTP ${resp.status}`;
  }
}

export class StudioClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  async health(): Promise<boolean> {
    try {
      const resp = await this.fetchImpl(`${this.baseUrl}/health`);
      return resp.ok;
    } catch {
      return false;
    }
  }

  async uploadScene(files: SceneUpload): Promise<string> {
    const form = new FormData();
    form.append('cutout', files.cutout, 'cutout.png');
    form.append('height', files.height, 'object.phm');
    if (files.receiver) form.append('receiver', files.receiver, 'receiver.phm');
    if (files.background) form.append('background', files.background, 'background.png');
    const resp = await this.fetchImpl(`${this.baseUrl}/scenes`, {
      method: 'POST',
      body: form,
    });
    if (!resp.ok) throw new ApiError(resp.status, await errorDetail(resp));
    const body = await resp.json();
    return body.scene_id as string;
  }

  /** Render a frame; resolves to the PNG bytes. */
  async render(
    sceneId: string,
    params: RenderParams,
    signal?: AbortSignal,
  ): Promise<ArrayBuffer> {
    const resp = await this.fetchImpl(`${this.baseUrl}/scenes/${sceneId}/render`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(params),
      signal,
    });
    if (!resp.ok) throw new ApiError(resp.status, await errorDetail(resp));
    return resp.arrayBuffer();
  }
}
