/**
 * Deterministic layered layout for the lineage DAG: one layer per
 * generation, nodes ordered left-to-right by seq, so the same archive always
 * draws the same picture.
 */

import type { AncestryGraph } from "./api.js";

export interface NodePosition {
  artifactId: string;
  seq: number;
  generation: number;
  x: number;
  y: number;
}

export interface EdgeLine {
  from: string;
  to: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface Layout {
  nodes: NodePosition[];
  edges: EdgeLine[];
  width: number;
  height: number;
}

export interface LayoutOptions {
  cell: number; // thumbnail square size
  gapX: number;
  gapY: number;
}

export const DEFAULT_OPTIONS: LayoutOptions = { cell: 96, gapX: 24, gapY: 48 };

export function layeredLayout(
  graph: AncestryGraph,
  options: LayoutOptions = DEFAULT_OPTIONS,
): Layout {
  const { cell, gapX, gapY } = options;
  const layers = new Map<number, NodePosition[]>();
  const byId = new Map<string, NodePosition>();

  const sorted = [...graph.nodes].sort((a, b) => a.seq - b.seq);
  for (const node of sorted) {
    const layer = layers.get(node.generation) ?? [];
    const position: NodePosition = {
      artifactId: node.artifact_id,
      seq: node.seq,
      generation: node.generation,
      x: layer.length * (cell + gapX),
      y: node.generation * (cell + gapY),
    };
    layer.push(position);
    layers.set(node.generation, layer);
    byId.set(node.artifact_id, position);
  }

  const nodes = sorted.map((n) => byId.get(n.artifact_id)!);
  const edges: EdgeLine[] = graph.edges.map(([parent, child]) => {
    const p = byId.get(parent)!;
    const c = byId.get(child)!;
    return {
      from: parent,
      to: child,
      x1: p.x + cell / 2,
      y1: p.y + cell,
      x2: c.x + cell / 2,
      y2: c.y,
    };
  });

  let width = 0;
  let height = 0;
  for (const node of nodes) {
    width = Math.max(width, node.x + cell);
    height = Math.max(height, node.y + cell);
  }
  return { nodes, edges, width, height };
}
