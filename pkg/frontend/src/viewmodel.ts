/**
 * viewmodel.ts — pure projection of API responses into what the screen shows.
 *
 * Nothing in here computes physics: counts come from the analysis payload,
 * interior vertices from the wagon-wheel payload, flex shapes from the flex
 * payload.  Functions are pure so the whole UI state machine is testable
 * without a DOM.
 */

import type { Analysis, TrussDoc, WagonWheel } from './api.js';

export interface VertexView {
  x: number;
  y: number;
  interior: boolean;
}

export interface EdgeView {
  id: number;
  a: number;
  b: number;
  removed: boolean;
}

export interface ViewModel {
  vertices: VertexView[];
  edges: EdgeView[];
  analysis: Analysis | null;
  snapshot: number;
  flexes: number[][][];
  selectedFlex: number;
  amplitude: number;
  hoveredEdge: number | null;
  banner: string | null;
}

export interface Panel {
  v: number;
  e: number;
  c: number;
  maxwell: number;
  rank: number;
  nullity: number;
  rigid: boolean;
  generic: boolean;
  flexCount: number;
  removedCount: number;
  /** whole removal set keeps the truss rigid; null when nothing is removed */
  recoverable: boolean | null;
}

export function emptyViewModel(): ViewModel {
  return {
    vertices: [],
    edges: [],
    analysis: null,
    snapshot: 0,
    flexes: [],
    selectedFlex: 0,
    amplitude: 0,
    hoveredEdge: null,
    banner: null,
  };
}

export function projectTruss(vm: ViewModel, doc: TrussDoc,
                             wheels: WagonWheel[]): ViewModel {
  const interior = new Set(wheels.map(w => w.center));
  return {
    ...vm,
    vertices: doc.vertices.map(p => ({
      x: p.x, y: p.y, interior: interior.has(p.id),
    })),
    edges: doc.edges.map(e => ({
      id: e.id, a: e.a, b: e.b, removed: e.removed,
    })),
  };
}

export function projectAnalysis(vm: ViewModel, analysis: Analysis,
                                snapshot: number): ViewModel {
  const flexCount = analysis.flex_count;
  return {
    ...vm,
    analysis,
    snapshot,
    selectedFlex: Math.min(vm.selectedFlex, Math.max(0, flexCount - 1)),
  };
}

export function projectFlexes(vm: ViewModel, flexes: number[][][]): ViewModel {
  return { ...vm, flexes };
}

export function panel(vm: ViewModel): Panel | null {
  const a = vm.analysis;
  if (!a) return null;
  const removedCount = vm.edges.filter(e => e.removed).length;
  return {
    v: a.v,
    e: a.e,
    c: a.c,
    maxwell: a.maxwell,
    rank: a.rank,
    nullity: a.nullity,
    rigid: a.is_inf_rigid,
    generic: a.is_generic,
    flexCount: a.flex_count,
    removedCount,
    recoverable: removedCount === 0 ? null : a.is_inf_rigid,
  };
}

/** flex animation is offered exactly when there is a nontrivial flex */
export function flexAnimationAvailable(a: Analysis | null): boolean {
  return a !== null && a.nullity > 3;
}

/** rest positions displaced along the selected flex, amplitude·sin(t) */
export function displacedPositions(vm: ViewModel,
                                   t: number): { x: number; y: number }[] {
  const flex = vm.flexes[vm.selectedFlex];
  const s = vm.amplitude * Math.sin(t);
  if (!flex || s === 0) {
    return vm.vertices.map(p => ({ x: p.x, y: p.y }));
  }
  return vm.vertices.map((p, i) => ({
    x: p.x + s * flex[i][0],
    y: p.y + s * flex[i][1],
  }));
}

function segmentDistance(px: number, py: number, ax: number, ay: number,
                         bx: number, by: number): number {
  const dx = bx - ax, dy = by - ay;
  const len2 = dx * dx + dy * dy;
  let u = len2 === 0 ? 0 : ((px - ax) * dx + (py - ay) * dy) / len2;
  u = Math.max(0, Math.min(1, u));
  return Math.hypot(px - (ax + u * dx), py - (ay + u * dy));
}

/**
 * Nearest edge within pixelRadius screen pixels of a world point; removed
 * edges stay clickable so they can be restored.  Radius shrinks in world
 * units as zoom grows, so the clickable band is constant on screen.
 */
export function hitTestEdge(vm: ViewModel, wx: number, wy: number,
                            zoom: number, pixelRadius = 8): number | null {
  const reach = pixelRadius / zoom;
  let best: number | null = null;
  let bestDist = reach;
  for (const e of vm.edges) {
    const a = vm.vertices[e.a];
    const b = vm.vertices[e.b];
    const d = segmentDistance(wx, wy, a.x, a.y, b.x, b.y);
    if (d <= bestDist) {
      bestDist = d;
      best = e.id;
    }
  }
  return best;
}
