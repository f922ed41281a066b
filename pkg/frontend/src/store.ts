/**
 * store.ts — the UI state machine, DOM-free.
 *
 * Every mutation goes through the ApiClient (which serializes them and
 * resolves 409s) and is followed by a consistent re-pull of all reads:
 * the pull is accepted only when every payload echoes one snapshot id,
 * so the panel can never mix analyses from different states.
 */

import { ApiClient, type GenerateRequest, type HistoryEntry } from './api.js';
import {
  emptyViewModel, hitTestEdge, projectAnalysis, projectFlexes, projectTruss,
  type ViewModel,
} from './viewmodel.js';

const PULL_ATTEMPTS = 3;

export class ExplorerStore {
  vm: ViewModel = emptyViewModel();
  history: HistoryEntry[] = [];

  private listeners: Array<() => void> = [];

  constructor(private api: ApiClient) {}

  onChange(cb: () => void): void {
    this.listeners.push(cb);
  }

  private commit(vm: ViewModel): void {
    this.vm = vm;
    for (const cb of this.listeners) cb();
  }

  /** re-read everything; accept only a pull that echoes one snapshot */
  private async pullAll(): Promise<void> {
    let vm = this.vm;
    for (let attempt = 0; attempt < PULL_ATTEMPTS; attempt++) {
      const truss = await this.api.truss();
      const snap = this.api.snapshot;
      const analysis = await this.api.analysis();
      const wheels = await this.api.wagonWheels();
      const { flexes } = await this.api.flexes();
      const history = await this.api.history();
      if (this.api.snapshot !== snap && attempt + 1 < PULL_ATTEMPTS) {
        continue;             // someone mutated mid-pull; start over
      }
      vm = projectTruss(vm, truss, wheels);
      vm = projectAnalysis(vm, analysis, snap);
      vm = projectFlexes(vm, flexes);
      this.history = history;
      this.commit({ ...vm, banner: null });
      return;
    }
  }

  async load(): Promise<void> {
    try {
      await this.pullAll();
    } catch (err) {
      this.commit({ ...this.vm, banner: `API unreachable: ${String(err)}` });
    }
  }

  // ── mutations ──────────────────────────────────────────────────────

  async toggleEdge(id: number): Promise<string | null> {
    try {
      const { action } = await this.api.toggle(id);
      await this.pullAll();
      return action;
    } catch (err) {
      this.commit({ ...this.vm, banner: `toggle failed: ${String(err)}` });
      return null;
    }
  }

  /** click in world coordinates: hit-test, then toggle whatever was hit */
  async clickAt(wx: number, wy: number, zoom: number): Promise<string | null> {
    const id = hitTestEdge(this.vm, wx, wy, zoom);
    return id === null ? null : this.toggleEdge(id);
  }

  async generate(req: GenerateRequest): Promise<void> {
    try {
      await this.api.generate(req);
      await this.pullAll();
    } catch (err) {
      this.commit({ ...this.vm, banner: `generate failed: ${String(err)}` });
    }
  }

  async reset(): Promise<void> {
    try {
      await this.api.reset();
      await this.pullAll();
    } catch (err) {
      this.commit({ ...this.vm, banner: `reset failed: ${String(err)}` });
    }
  }

  /** reset, then reapply the recorded toggles in order */
  async replayHistory(): Promise<void> {
    const seq = this.history.map(h => h.edge);
    await this.api.reset();
    for (const id of seq) {
      await this.api.toggle(id);
    }
    await this.pullAll();
  }

  // ── local view state ───────────────────────────────────────────────

  selectFlex(i: number): void {
    this.commit({ ...this.vm, selectedFlex: i });
  }

  setAmplitude(a: number): void {
    this.commit({ ...this.vm, amplitude: a });
  }

  setHover(id: number | null): void {
    if (id !== this.vm.hoveredEdge) {
      this.commit({ ...this.vm, hoveredEdge: id });
    }
  }
}
