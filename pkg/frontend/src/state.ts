/**
 * Client-side UI state. The single mutable store; views render from it and
 * the controller is the only writer. Two invariants are enforced here:
 * the selection is cleared after every successful step, and op_epoch always
 * echoes the server's latest value.
 */

import type { AncestryGraph, SessionInfo } from "./api.js";

export type View = "phylogeny" | "evolve";

export interface SessionDescriptor {
  sessionId: string;
  opEpoch: number;
  step: number;
  candidateCount: number;
}

export interface UiState {
  view: View;
  domainId: string;
  graph: AncestryGraph | null;
  session: SessionDescriptor | null;
  selected: Set<number>;
  banner: string | null; // e.g. stale-epoch warning
  toast: string | null; // e.g. publish confirmation
}

export type Listener = (state: UiState) => void;

export function initialState(domainId = "cppn-picture"): UiState {
  return {
    view: "phylogeny",
    domainId,
    graph: null,
    session: null,
    selected: new Set(),
    banner: null,
    toast: null,
  };
}

export class Store {
  private listeners: Listener[] = [];

  constructor(public state: UiState = initialState()) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  setDomain(domainId: string): void {
    this.state.domainId = domainId;
    this.state.graph = null;
    this.emit();
  }

  showPhylogeny(graph: AncestryGraph): void {
    this.state.view = "phylogeny";
    this.state.graph = graph;
    this.emit();
  }

  /** Adopt the server's session snapshot; clears any stale selection. */
  adoptSession(session: SessionInfo): void {
    this.state.view = "evolve";
    this.state.session = {
      sessionId: session.session_id,
      opEpoch: session.op_epoch,
      step: session.step,
      candidateCount: session.candidates.length,
    };
    this.state.selected = new Set();
    this.state.banner = null;
    this.emit();
  }

  toggleSelected(index: number): void {
    if (!this.state.session) return;
    if (index < 0 || index >= this.state.session.candidateCount) return;
    if (this.state.selected.has(index)) {
      this.state.selected.delete(index);
    } else {
      this.state.selected.add(index);
    }
    this.emit();
  }

  clearSession(): void {
    this.state.session = null;
    this.state.selected = new Set();
    this.state.view = "phylogeny";
    this.emit();
  }

  setBanner(message: string | null): void {
    this.state.banner = message;
    this.emit();
  }

  setToast(message: string | null): void {
    this.state.toast = message;
    this.emit();
  }
}
