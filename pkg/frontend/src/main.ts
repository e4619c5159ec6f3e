/** DOM wiring for the shadow studio: upload a cutout + height map,
 * click to place the light, drag the horizon, slide softness. */

import { ApiError, StudioClient } from './api.js';
import { debounce } from './debounce.js';
import { PreviewSequencer } from './sequencer.js';
import {
  initialState,
  placeLight,
  renderParams,
  setHorizon,
  setLightHeight,
  setSoftness,
} from './state.js';
import type { EditorState } from './types.js';

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const sceneCanvas = $<HTMLCanvasElement>('scene');
const previewCanvas = $<HTMLCanvasElement>('preview');
const status = $<HTMLSpanElement>('status');
const cutoutInput = $<HTMLInputElement>('cutout-file');
const heightInput = $<HTMLInputElement>('height-file');
const receiverInput = $<HTMLInputElement>('receiver-file');
const backgroundInput = $<HTMLInputElement>('background-file');
const uploadBtn = $<HTMLButtonElement>('upload');
const lightHSlider = $<HTMLInputElement>('light-h');
const horizonToggle = $<HTMLInputElement>('horizon-mode');
const softnessSlider = $<HTMLInputElement>('softness');
const samplesInput = $<HTMLInputElement>('samples');
const seedInput = $<HTMLInputElement>('seed');
const modeSelect = $<HTMLSelectElement>('render-mode');
const compositeToggle = $<HTMLInputElement>('composite');

const client = new StudioClient(location.origin.startsWith('http')
  ? location.origin
  : 'http://127.0.0.1:8000');

let state: EditorState = initialState();
let cutoutBitmap: ImageBitmap | null = null;

function setStatus(text: string, isError = false): void {
  status.textContent = text;
  status.className = isError ? 'error' : '';
}

function drawScene(): void {
  const ctx = sceneCanvas.getContext('2d');
  if (!ctx) return;
  ctx.clearRect(0, 0, sceneCanvas.width, sceneCanvas.height);
  if (cutoutBitmap) ctx.drawImage(cutoutBitmap, 0, 0);
  if (state.lightMode.kind === 'horizon') {
    const y = state.lightMode.horizon;
    ctx.strokeStyle = '#2b8';
    ctx.setLineDash([6, 4]);
    ctx.beginPath();
    ctx.moveTo(0, y);
    ctx.lineTo(sceneCanvas.width, y);
    ctx.stroke();
    ctx.setLineDash([]);
  }
  ctx.strokeStyle = '#fa3';
  ctx.beginPath();
  ctx.arc(state.lightX, state.lightY, 6, 0, Math.PI * 2);
  ctx.stroke();
  ctx.beginPath();
  ctx.arc(state.lightX, state.lightY, 1.5, 0, Math.PI * 2);
  ctx.stroke();
}

async function showPreview(bytes: ArrayBuffer): Promise<void> {
  const bitmap = await createImageBitmap(new Blob([bytes], { type: 'image/png' }));
  previewCanvas.width = bitmap.width;
  previewCanvas.height = bitmap.height;
  previewCanvas.getContext('2d')?.drawImage(bitmap, 0, 0);
}

const sequencer = new PreviewSequencer(
  (outcome) => {
    void showPreview(outcome.bytes);
    setStatus('');
  },
  (_seq, err) => {
    // keep the previous preview; surface the message inline
    if (err instanceof ApiError) setStatus(`render rejected: ${err.message}`, true);
    else setStatus(`render failed: ${String(err)}`, true);
  },
);

function requestRender(preview: boolean): void {
  const sceneId = state.sceneId;
  if (!sceneId) {
    setStatus('upload a cutout and height map first', true);
    return;
  }
  const params = renderParams(state, preview);
  sequencer.issue((signal) => client.render(sceneId, params, signal));
}

const debouncedPreview = debounce(() => requestRender(true), 150);

function scrub(update: () => void): void {
  update();
  drawScene();
  debouncedPreview();
}

function settle(update?: () => void): void {
  if (update) update();
  debouncedPreview.cancel();
  drawScene();
  requestRender(false);
}

uploadBtn.addEventListener('click', async () => {
  const cutout = cutoutInput.files?.[0];
  const height = heightInput.files?.[0];
  if (!cutout || !height) {
    setStatus('choose both a cutout PNG and a height map (.phm)', true);
    return;
  }
  try {
    setStatus('uploading…');
    state.sceneId = await client.uploadScene({
      cutout,
      height,
      receiver: receiverInput.files?.[0],
      background: backgroundInput.files?.[0],
    });
    cutoutBitmap = await createImageBitmap(cutout);
    sceneCanvas.width = cutoutBitmap.width;
    sceneCanvas.height = cutoutBitmap.height;
    state = placeLight(state, cutoutBitmap.width * 0.2, -cutoutBitmap.height * 0.2);
    drawScene();
    setStatus('scene ready: click to place the light');
  } catch (err) {
    setStatus(err instanceof ApiError ? `upload rejected: ${err.message}`
                                      : `upload failed: ${String(err)}`, true);
  }
});

sceneCanvas.addEventListener('click', (ev) => {
  if (!state.sceneId) {
    setStatus('upload a cutout and height map first', true);
    return;
  }
  const rect = sceneCanvas.getBoundingClientRect();
  const x = ((ev.clientX - rect.left) / rect.width) * sceneCanvas.width;
  const y = ((ev.clientY - rect.top) / rect.height) * sceneCanvas.height;
  settle(() => {
    state = placeLight(state, Math.round(x), Math.round(y));
  });
});

let draggingHorizon = false;
sceneCanvas.addEventListener('pointerdown', (ev) => {
  if (state.lightMode.kind !== 'horizon' || !state.sceneId) return;
  draggingHorizon = true;
  sceneCanvas.setPointerCapture(ev.pointerId);
});
sceneCanvas.addEventListener('pointermove', (ev) => {
  if (!draggingHorizon) return;
  const rect = sceneCanvas.getBoundingClientRect();
  const y = ((ev.clientY - rect.top) / rect.height) * sceneCanvas.height;
  scrub(() => {
    state = setHorizon(state, Math.round(y));
  });
});
sceneCanvas.addEventListener('pointerup', () => {
  if (!draggingHorizon) return;
  draggingHorizon = false;
  settle();
});

horizonToggle.addEventListener('change', () => {
  if (horizonToggle.checked) {
    state = setHorizon(state, Math.round(sceneCanvas.height * 0.75));
  } else {
    state = setLightHeight(state, Number(lightHSlider.value));
  }
  settle();
});

lightHSlider.addEventListener('input', () => {
  if (state.lightMode.kind !== 'point') return;
  scrub(() => {
    state = setLightHeight(state, Number(lightHSlider.value));
  });
});
lightHSlider.addEventListener('change', () => {
  if (state.lightMode.kind !== 'point') return;
  settle();
});

softnessSlider.addEventListener('input', () => {
  scrub(() => {
    state = setSoftness(state, Number(softnessSlider.value));
  });
});
softnessSlider.addEventListener('change', () => settle());

samplesInput.addEventListener('change', () => {
  settle(() => {
    state.samples = Math.max(1, Number(samplesInput.value) || 64);
  });
});
seedInput.addEventListener('change', () => {
  settle(() => {
    state.seed = Number(seedInput.value) || 0;
  });
});
modeSelect.addEventListener('change', () => {
  settle(() => {
    state.renderMode = modeSelect.value as EditorState['renderMode'];
  });
});
compositeToggle.addEventListener('change', () => {
  settle(() => {
    state.composite = compositeToggle.checked;
  });
});

void client.health().then((ok) => {
  if (!ok) setStatus('render service unreachable', true);
});
