import { describe, expect, it } from 'vitest';

import type { Analysis, TrussDoc } from '../src/api';
import { buildScene } from '../src/render';
import {
  displacedPositions, emptyViewModel, flexAnimationAvailable, hitTestEdge,
  panel, projectAnalysis, projectFlexes, projectTruss,
} from '../src/viewmodel';

// unit square, counterclockwise; edge ids follow the doc order
const squareDoc: TrussDoc = {
  version: 1,
  vertices: [
    { id: 0, x: 0, y: 0 },
    { id: 1, x: 1, y: 0 },
    { id: 2, x: 1, y: 1 },
    { id: 3, x: 0, y: 1 },
  ],
  edges: [
    { id: 0, a: 0, b: 1, removed: false },
    { id: 1, a: 1, b: 2, removed: false },
    { id: 2, a: 2, b: 3, removed: true },
    { id: 3, a: 3, b: 0, removed: false },
  ],
};

function analysisStub(over: Partial<Analysis> = {}): Analysis {
  return {
    v: 4, e: 3, rank: 3, nullity: 5, c: 0, maxwell: -2,
    is_inf_rigid: false, is_generic: false, flex_count: 2,
    edge_order: [0, 1, 3], tol: 1e-9, sv_kept: 3, sv_dropped: 0,
    flex_basis: [], ...over,
  };
}

function squareVm() {
  return projectTruss(emptyViewModel(), squareDoc,
                      [{ center: 2, coeffs: {} }]);
}

describe('projection', () => {
  it('marks interior vertices from the wagon-wheel payload', () => {
    const vm = squareVm();
    expect(vm.vertices.map(p => p.interior)).toEqual(
      [false, false, true, false]);
    expect(vm.edges.map(e => e.removed)).toEqual([false, false, true, false]);
  });

  it('panel is a plain rename of the analysis payload', () => {
    let vm = squareVm();
    vm = projectAnalysis(vm, analysisStub(), 7);
    const p = panel(vm)!;
    expect([p.v, p.e, p.c, p.maxwell, p.nullity]).toEqual([4, 3, 0, -2, 5]);
    expect(p.rigid).toBe(false);
    expect(p.removedCount).toBe(1);
    expect(p.recoverable).toBe(false);            // removed set broke rigidity
    expect(vm.snapshot).toBe(7);
  });

  it('recoverability badge is absent with nothing removed', () => {
    const intact = {
      ...squareDoc,
      edges: squareDoc.edges.map(e => ({ ...e, removed: false })),
    };
    let vm = projectTruss(emptyViewModel(), intact, []);
    vm = projectAnalysis(
      vm, analysisStub({ is_inf_rigid: true, nullity: 3 }), 1);
    expect(panel(vm)!.recoverable).toBeNull();
  });

  it('panel is null before the first analysis arrives', () => {
    expect(panel(emptyViewModel())).toBeNull();
  });
});

describe('hit testing', () => {
  it('finds the nearest edge within the zoom-scaled radius', () => {
    const vm = squareVm();
    expect(hitTestEdge(vm, 0.5, 0.02, 100)).toBe(0);
    expect(hitTestEdge(vm, 0.98, 0.5, 100)).toBe(1);
    expect(hitTestEdge(vm, 0.5, 0.5, 100)).toBeNull();   // center: all too far
  });

  it('radius grows as zoom shrinks', () => {
    const vm = squareVm();
    expect(hitTestEdge(vm, 0.5, 0.2, 100)).toBeNull();   // reach 0.08
    expect(hitTestEdge(vm, 0.5, 0.2, 20)).toBe(0);       // reach 0.4
  });

  it('removed edges stay clickable for restore', () => {
    const vm = squareVm();
    expect(hitTestEdge(vm, 0.5, 0.97, 100)).toBe(2);
  });
});

describe('flex animation', () => {
  it('is available exactly when nullity exceeds the rigid-motion three', () => {
    expect(flexAnimationAvailable(null)).toBe(false);
    expect(flexAnimationAvailable(analysisStub({ nullity: 3 }))).toBe(false);
    expect(flexAnimationAvailable(analysisStub({ nullity: 4 }))).toBe(true);
  });

  it('amplitude zero leaves the rest pose untouched', () => {
    let vm = squareVm();
    vm = projectFlexes(vm, [[[0, 0], [0, 0], [1, 0], [0, 0]]]);
    const rest = displacedPositions(vm, Math.PI / 2);
    expect(rest[2]).toEqual({ x: 1, y: 1 });
  });

  it('displaces along the selected flex by amplitude times sin t', () => {
    let vm = squareVm();
    vm = projectFlexes(vm, [[[0, 0], [0, 0], [1, 0.5], [0, 0]]]);
    vm = { ...vm, amplitude: 0.2 };
    const atPeak = displacedPositions(vm, Math.PI / 2);
    expect(atPeak[2].x).toBeCloseTo(1.2, 12);
    expect(atPeak[2].y).toBeCloseTo(1.1, 12);
    expect(atPeak[0]).toEqual({ x: 0, y: 0 });
    const atZero = displacedPositions(vm, 0);
    expect(atZero[2].x).toBeCloseTo(1, 12);
  });
});

describe('scene building', () => {
  it('flags an empty truss for the empty-state message', () => {
    const scene = buildScene(emptyViewModel(), 400, 300, 0);
    expect(scene.empty).toBe(true);
    expect(scene.edges).toEqual([]);
  });

  it('dashes removed edges and keeps the frame on rest positions', () => {
    const vm = { ...squareVm(), hoveredEdge: 1 };
    const scene = buildScene(vm, 400, 300, 0);
    expect(scene.empty).toBe(false);
    expect(scene.edges.map(e => e.dashed)).toEqual(
      [false, false, true, false]);
    expect(scene.edges[1].hovered).toBe(true);
    expect(scene.vertices.filter(p => p.interior).length).toBe(1);
  });
});
