/** End-to-end studio flow against a real render service: upload a
 * scene, place the light, and check the interactive latency and the
 * softness-zero contract on actual PNG bytes. */

import { type ChildProcess, spawn } from 'node:child_process';
import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { StudioClient } from '../src/api.js';
import { initialState, placeLight, renderParams, setLightHeight, setSoftness } from '../src/state.js';

const fixtures = join(dirname(fileURLToPath(import.meta.url)), 'fixtures');
const PORT = 8701 + (process.pid % 700);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
const client = new StudioClient(BASE);

async function waitForHealth(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (await client.health()) return;
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error(`render service did not come up on ${BASE}`);
}

beforeAll(async () => {
  server = spawn('python3', ['-m', 'shadowkit.cli', 'serve',
                             '--host', '127.0.0.1', '--port', String(PORT)],
                 { stdio: 'ignore' });
  await waitForHealth(90_000);
}, 120_000);

afterAll(() => {
  server?.kill();
});

function fixtureBlob(name: string): Blob {
  return new Blob([readFileSync(join(fixtures, name))]);
}

describe('studio flow', () => {
  it('upload, click to place light, see the hard preview within 500 ms', async () => {
    const sceneId = await client.uploadScene({
      cutout: fixtureBlob('cutout.png'),
      height: fixtureBlob('object.phm'),
    });
    expect(sceneId).toMatch(/^[0-9a-f]{32}$/);

    let state = placeLight(setLightHeight(initialState(), 60), 10, -5);
    state.sceneId = sceneId;

    const t0 = performance.now();
    const bytes = await client.render(sceneId, renderParams(state, true));
    const elapsed = performance.now() - t0;
    expect(elapsed).toBeLessThan(500);

    const png = new Uint8Array(bytes);
    expect([...png.slice(0, 4)]).toEqual([137, 80, 78, 71]);
  });

  it('softness slider at zero reproduces the hard preview pixel-identically', async () => {
    const sceneId = await client.uploadScene({
      cutout: fixtureBlob('cutout.png'),
      height: fixtureBlob('object.phm'),
    });
    let state = placeLight(setLightHeight(initialState(), 60), 10, -5);
    state.sceneId = sceneId;

    state.renderMode = 'hard';
    const hard = new Uint8Array(await client.render(sceneId, renderParams(state, false)));

    state.renderMode = 'soft';
    state = setSoftness(state, 0);
    const soft = new Uint8Array(await client.render(sceneId, renderParams(state, false)));

    expect(soft).toEqual(hard);
  });

  it('rejected parameters surface as 4xx without breaking the session', async () => {
    const sceneId = await client.uploadScene({
      cutout: fixtureBlob('cutout.png'),
      height: fixtureBlob('object.phm'),
    });
    await expect(
      client.render(sceneId, {
        light: { x: 1, y: 2, H: 60 },
        softness: -0.1, // bypasses the UI clamp on purpose
        samples: 8, seed: 0, mode: 'soft', composite: false, preview: true,
      }),
    ).rejects.toMatchObject({ status: 422 });

    const state = { ...placeLight(setLightHeight(initialState(), 60), 10, -5), sceneId };
    const bytes = await client.render(sceneId, renderParams(state, true));
    expect(bytes.byteLength).toBeGreaterThan(0);
  });
});
