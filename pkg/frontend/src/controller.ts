/**
 * Application controller: the only layer that talks to the API, and the
 * layer the DOM handlers (and the scripted-session tests) drive. All
 * session-changing calls go through the transcript recorder so an
 * interaction can be replayed verbatim.
 */

import { ApiClient, ApiError, Transcript } from "./api.js";
import { Store } from "./state.js";

export const STALE_BANNER =
  "Another tab advanced this session — reload to continue from its latest state.";

export function randomRngSeed(): number {
  // 48 bits keeps it inside Number.MAX_SAFE_INTEGER and JSON-exact
  return Math.floor(Math.random() * 2 ** 48);
}

export class AppController {
  readonly transcript = new Transcript();

  constructor(
    readonly api: ApiClient,
    readonly store: Store,
  ) {}

  async loadPhylogeny(domainId?: string): Promise<void> {
    if (domainId) this.store.setDomain(domainId);
    const graph = await this.api.phylogeny(this.store.state.domainId);
    this.store.showPhylogeny(graph);
  }

  /** Branch from a published artifact, or from scratch when id is null. */
  async branchFrom(
    artifactId: string | null,
    rngSeed: number = randomRngSeed(),
    popSize?: number,
  ): Promise<void> {
    const seeds = artifactId ? [artifactId] : [];
    const session = await this.api.createSession(
      this.store.state.domainId,
      seeds,
      rngSeed,
      popSize,
      this.transcript,
    );
    this.store.adoptSession(session);
  }

  toggleSelect(index: number): void {
    this.store.toggleSelected(index);
  }

  async nextGeneration(): Promise<void> {
    const { session, selected } = this.store.state;
    if (!session || selected.size === 0) return;
    try {
      const next = await this.api.select(
        session.sessionId,
        session.opEpoch,
        [...selected].sort((a, b) => a - b),
        this.transcript,
      );
      this.store.adoptSession(next); // clears selection, echoes op_epoch
    } catch (err) {
      if (err instanceof ApiError && err.code === "STALE_EPOCH") {
        this.store.setBanner(STALE_BANNER);
        return;
      }
      throw err;
    }
  }

  async publishCandidate(index: number, author = "", tags: string[] = []): Promise<string> {
    const { session } = this.store.state;
    if (!session) throw new Error("no active session");
    const record = await this.api.publish(
      session.sessionId,
      index,
      author,
      tags,
      this.transcript,
    );
    this.store.setToast(`published as #${record.seq}`);
    // the new node must show up in the phylogeny right away
    const graph = await this.api.phylogeny(this.store.state.domainId);
    this.store.state.graph = graph;
    return record.artifact_id;
  }

  async endSession(): Promise<void> {
    const { session } = this.store.state;
    if (session) {
      try {
        await this.api.deleteSession(session.sessionId);
      } catch {
        // already expired server-side: nothing to clean up
      }
    }
    this.store.clearSession();
    await this.loadPhylogeny();
  }
}
