/**
 * main.ts — damage explorer: click a link to remove or restore it and watch
 * the compatibility count, rigidity flags, and flex modes respond.
 *
 * All numbers on screen come from the API; this file only wires DOM events
 * into the store and paints whatever the store holds.
 */

import { ApiClient } from './api.js';
import { buildScene, paint, toWorld } from './render.js';
import { ExplorerStore } from './store.js';
import { flexAnimationAvailable, hitTestEdge, panel } from './viewmodel.js';

// ── API endpoint ─────────────────────────────────────────────────────────────
// same origin by default; ?api=http://127.0.0.1:8000 points elsewhere

const apiBase = new URLSearchParams(window.location.search).get('api') ?? '';
const store = new ExplorerStore(new ApiClient(apiBase));

// ── DOM ──────────────────────────────────────────────────────────────────────

const canvas = document.getElementById('scene') as HTMLCanvasElement;
const banner = document.getElementById('banner') as HTMLDivElement;
const panelDiv = document.getElementById('panel') as HTMLDivElement;
const historyDiv = document.getElementById('history') as HTMLDivElement;
const flexSelect = document.getElementById('flexMode') as HTMLSelectElement;
const ampSlider = document.getElementById('amplitude') as HTMLInputElement;
const shapeSelect = document.getElementById('shape') as HTMLSelectElement;
const sizeInput = document.getElementById('size') as HTMLInputElement;
const holesInput = document.getElementById('holes') as HTMLInputElement;
const generateBtn = document.getElementById('generate') as HTMLButtonElement;
const resetBtn = document.getElementById('reset') as HTMLButtonElement;
const replayBtn = document.getElementById('replay') as HTMLButtonElement;

const ctx = canvas.getContext('2d')!;
const W = canvas.width;
const H = canvas.height;

// ── panel + controls ─────────────────────────────────────────────────────────

function badge(text: string, on: boolean): string {
  return `<span class="badge ${on ? 'on' : 'off'}">${text}</span>`;
}

function renderPanel(): void {
  banner.textContent = store.vm.banner ?? '';
  banner.style.display = store.vm.banner ? 'block' : 'none';

  const p = panel(store.vm);
  if (!p) {
    panelDiv.innerHTML = '<em>waiting for analysis…</em>';
    return;
  }
  const rec = p.recoverable === null ? ''
    : badge(p.recoverable ? 'damage recoverable' : 'damage unrecoverable',
            p.recoverable);
  panelDiv.innerHTML = `
    <div class="count">vertices <b>${p.v}</b></div>
    <div class="count">links <b>${p.e}</b> (${p.removedCount} removed)</div>
    <div class="count">compatibility count <b>${p.c}</b></div>
    <div class="count">Maxwell number <b>${p.maxwell}</b></div>
    <div class="count">nullity <b>${p.nullity}</b> · flexes <b>${p.flexCount}</b></div>
    <div>${badge(p.rigid ? 'rigid' : 'flexible', p.rigid)}
         ${badge(p.generic ? 'generic' : 'non-generic', p.generic)} ${rec}</div>
    <div class="snap">snapshot ${store.vm.snapshot}</div>`;

  const hist = store.history.slice(-12).reverse().map(h => `
    <div class="hist-item">#${h.step} ${h.action} link ${h.edge}
      → c ${h.c}${h.action === 'remove' && h.recoverable !== undefined
        ? (h.recoverable ? '' : ' ⚠') : ''}</div>`);
  historyDiv.innerHTML = hist.join('') || '<em>no toggles yet</em>';

  const available = flexAnimationAvailable(store.vm.analysis);
  flexSelect.disabled = !available;
  ampSlider.disabled = !available;
  const nModes = store.vm.flexes.length;
  if (flexSelect.options.length !== nModes) {
    flexSelect.innerHTML = Array.from(
      { length: nModes }, (_, i) => `<option value="${i}">mode ${i + 1}</option>`,
    ).join('');
    flexSelect.value = String(store.vm.selectedFlex);
  }
}

store.onChange(renderPanel);

// ── canvas events ────────────────────────────────────────────────────────────

function worldPos(ev: MouseEvent): [number, number] {
  const rect = canvas.getBoundingClientRect();
  const sx = (ev.clientX - rect.left) * (W / rect.width);
  const sy = (ev.clientY - rect.top) * (H / rect.height);
  const t = buildScene(store.vm, W, H, 0).transform;
  return toWorld(t, sx, sy);
}

canvas.addEventListener('mousemove', ev => {
  const t = buildScene(store.vm, W, H, 0).transform;
  const [wx, wy] = worldPos(ev);
  const hit = hitTestEdge(store.vm, wx, wy, t.scale);
  store.setHover(hit);
  canvas.style.cursor = hit === null ? 'default' : 'pointer';
});

canvas.addEventListener('click', ev => {
  const t = buildScene(store.vm, W, H, 0).transform;
  const [wx, wy] = worldPos(ev);
  void store.clickAt(wx, wy, t.scale);
});

// ── controls ─────────────────────────────────────────────────────────────────

flexSelect.onchange = () => store.selectFlex(Number(flexSelect.value));
ampSlider.oninput = () => store.setAmplitude(Number(ampSlider.value));

generateBtn.onclick = () => {
  const shape = shapeSelect.value;
  const size = Number(sizeInput.value) || 2;
  void store.generate({
    shape,
    n: size,
    k: size,
    holes: holesInput.value.trim() || undefined,
  });
};

resetBtn.onclick = () => void store.reset();
replayBtn.onclick = () => void store.replayHistory();

// ── animation loop ───────────────────────────────────────────────────────────

function frame(ms: number): void {
  const scene = buildScene(store.vm, W, H, ms / 400);
  paint(ctx, scene, W, H);
  requestAnimationFrame(frame);
}

requestAnimationFrame(frame);
void store.load();
