/**
 * render.ts — world-to-screen fitting, scene building, canvas painting.
 *
 * buildScene is pure (positions only, no canvas), so geometry and the
 * dashed/highlight flags are testable headlessly; paint() is the only
 * function that touches a 2d context.
 */

import { displacedPositions, type ViewModel } from './viewmodel.js';

export interface Transform {
  scale: number;
  ox: number;
  oy: number;
  height: number;
}

export function fitTransform(pts: { x: number; y: number }[], width: number,
                             height: number, margin = 36): Transform {
  if (pts.length === 0) {
    return { scale: 1, ox: width / 2, oy: height / 2, height };
  }
  const xs = pts.map(p => p.x);
  const ys = pts.map(p => p.y);
  const minx = Math.min(...xs), maxx = Math.max(...xs);
  const miny = Math.min(...ys), maxy = Math.max(...ys);
  const spanx = Math.max(maxx - minx, 1e-9);
  const spany = Math.max(maxy - miny, 1e-9);
  const scale = Math.min((width - 2 * margin) / spanx,
                         (height - 2 * margin) / spany);
  return {
    scale,
    ox: (width - scale * (minx + maxx)) / 2,
    oy: (height - scale * (miny + maxy)) / 2,
    height,
  };
}

/** y flips so the model's +y points up on screen */
export function toScreen(t: Transform, x: number,
                         y: number): [number, number] {
  return [t.scale * x + t.ox, t.height - (t.scale * y + t.oy)];
}

export function toWorld(t: Transform, sx: number,
                        sy: number): [number, number] {
  return [(sx - t.ox) / t.scale, (t.height - sy - t.oy) / t.scale];
}

export interface SceneEdge {
  id: number;
  x1: number; y1: number;
  x2: number; y2: number;
  dashed: boolean;
  hovered: boolean;
}

export interface SceneVertex {
  x: number;
  y: number;
  interior: boolean;
}

export interface Scene {
  empty: boolean;
  transform: Transform;
  edges: SceneEdge[];
  vertices: SceneVertex[];
}

export function buildScene(vm: ViewModel, width: number, height: number,
                           time: number): Scene {
  if (vm.vertices.length === 0) {
    return {
      empty: true,
      transform: fitTransform([], width, height),
      edges: [],
      vertices: [],
    };
  }
  // fit on rest positions so the frame does not wobble while animating
  const t = fitTransform(vm.vertices, width, height);
  const pos = displacedPositions(vm, time);
  const screen = pos.map(p => toScreen(t, p.x, p.y));
  return {
    empty: false,
    transform: t,
    edges: vm.edges.map(e => {
      const [x1, y1] = screen[e.a];
      const [x2, y2] = screen[e.b];
      return {
        id: e.id, x1, y1, x2, y2,
        dashed: e.removed,
        hovered: e.id === vm.hoveredEdge,
      };
    }),
    vertices: vm.vertices.map((p, i) => ({
      x: screen[i][0], y: screen[i][1], interior: p.interior,
    })),
  };
}

const COLORS = {
  background: '#fafafa',
  edge: '#37474f',
  removed: '#b0bec5',
  hovered: '#e65100',
  vertex: '#ffffff',
  vertexRim: '#37474f',
  interior: '#1565c0',
  emptyText: '#778',
};

export function paint(ctx: CanvasRenderingContext2D, scene: Scene,
                      width: number, height: number): void {
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, width, height);
  if (scene.empty) {
    ctx.fillStyle = COLORS.emptyText;
    ctx.font = '16px sans-serif';
    ctx.textAlign = 'center';
    ctx.fillText('no truss loaded — generate one below', width / 2, height / 2);
    return;
  }
  for (const e of scene.edges) {
    ctx.beginPath();
    ctx.setLineDash(e.dashed ? [6, 5] : []);
    ctx.lineWidth = e.hovered ? 3.5 : e.dashed ? 1.25 : 2;
    ctx.strokeStyle = e.hovered ? COLORS.hovered
      : e.dashed ? COLORS.removed : COLORS.edge;
    ctx.moveTo(e.x1, e.y1);
    ctx.lineTo(e.x2, e.y2);
    ctx.stroke();
  }
  ctx.setLineDash([]);
  for (const p of scene.vertices) {
    ctx.beginPath();
    ctx.arc(p.x, p.y, p.interior ? 6 : 4.5, 0, 2 * Math.PI);
    ctx.fillStyle = p.interior ? COLORS.interior : COLORS.vertex;
    ctx.fill();
    ctx.lineWidth = 1.5;
    ctx.strokeStyle = COLORS.vertexRim;
    ctx.stroke();
  }
}
