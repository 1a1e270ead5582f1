/**
 * Pure view-model builders: UiState in, plain render-ready data out.
 * Keeping these free of DOM and fetch makes the interesting UI logic
 * unit-testable without a browser.
 */

import type { ApiClient } from "./api.js";
import { layeredLayout, DEFAULT_OPTIONS, type Layout } from "./layout.js";
import type { UiState } from "./state.js";

export const THUMB = 128; // grid thumbnails, matches the default pop grid 4x3

export interface PhylogenyViewModel {
  empty: boolean;
  emptyMessage: string;
  layout: Layout;
  thumbs: { artifactId: string; url: string; label: string }[];
}

export interface GridCell {
  index: number;
  url: string;
  selected: boolean;
}

export interface GridViewModel {
  cells: GridCell[];
  nextEnabled: boolean;
  stepLabel: string;
  banner: string | null;
  toast: string | null;
}

export function phylogenyViewModel(state: UiState, api: ApiClient): PhylogenyViewModel {
  const graph = state.graph ?? { nodes: [], edges: [], roots: [] };
  const layout = layeredLayout(graph);
  return {
    empty: graph.nodes.length === 0,
    emptyMessage: "Nothing published in this domain yet — start from scratch.",
    layout,
    thumbs: layout.nodes.map((n) => ({
      artifactId: n.artifactId,
      url: api.artifactPngUrl(n.artifactId, DEFAULT_OPTIONS.cell, DEFAULT_OPTIONS.cell),
      label: `#${n.seq} (gen ${n.generation})`,
    })),
  };
}

export function gridViewModel(state: UiState, api: ApiClient): GridViewModel {
  const session = state.session;
  if (!session) {
    return { cells: [], nextEnabled: false, stepLabel: "", banner: state.banner,
             toast: state.toast };
  }
  const cells: GridCell[] = [];
  for (let i = 0; i < session.candidateCount; i++) {
    cells.push({
      index: i,
      url: api.candidatePngUrl(session.sessionId, i, THUMB, THUMB),
      selected: state.selected.has(i),
    });
  }
  return {
    cells,
    // mirrors the server's EMPTY_SELECTION rule client-side
    nextEnabled: state.selected.size > 0,
    stepLabel: `generation ${session.step}`,
    banner: state.banner,
    toast: state.toast,
  };
}
