/**
 * Typed client for the stemma HTTP API.
 *
 * Only documented routes are used, and the client never touches genomes:
 * phenotypes arrive as server-rendered PNG urls, everything else is metadata.
 * Session-changing calls can be recorded into a Transcript for replay.
 */

export interface DomainInfo {
  domain_id: string;
  display_name: string;
  default_render_size: [number, number];
}

export interface ArtifactMeta {
  artifact_id: string;
  seq: number;
  domain_id: string;
  parent_ids: string[];
  generation: number;
  author: string;
  created_at: number;
  tags: string[];
}

export interface AncestryGraph {
  nodes: ArtifactMeta[];
  edges: [string, string][];
  roots: string[];
}

export interface CandidateInfo {
  index: number;
  lineage_roots: string[];
}

export interface SessionInfo {
  session_id: string;
  op_epoch: number;
  step: number;
  candidates: CandidateInfo[];
}

export interface ArtifactPage {
  total: number;
  items: ArtifactMeta[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** One session-changing operation, enough to replay the interaction. */
export type TranscriptEntry =
  | {
      op: "create";
      domain_id: string;
      seed_artifact_ids: string[];
      pop_size?: number;
      rng_seed: number;
    }
  | { op: "select"; selected: number[] }
  | { op: "publish"; candidate: number; author: string; tags: string[] };

export class Transcript {
  readonly entries: TranscriptEntry[] = [];

  record(entry: TranscriptEntry): void {
    this.entries.push(entry);
  }

  toJSON(): TranscriptEntry[] {
    return this.entries;
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  try {
    const body = (await resp.json()) as { error: { code: string; message: string } };
    return new ApiError(resp.status, body.error.code, body.error.message);
  } catch {
    return new ApiError(resp.status, "INTERNAL", `http ${resp.status}`);
  }
}

export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  private async send<T>(method: string, path: string, body?: unknown): Promise<T | null> {
    const resp = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) throw await parseError(resp);
    if (resp.status === 204) return null;
    return (await resp.json()) as T;
  }

  listDomains(): Promise<DomainInfo[]> {
    return this.get("/api/domains");
  }

  listArtifacts(domainId: string, offset = 0, limit = 100): Promise<ArtifactPage> {
    const q = new URLSearchParams({
      domain_id: domainId,
      offset: String(offset),
      limit: String(limit),
    });
    return this.get(`/api/artifacts?${q}`);
  }

  getArtifact(artifactId: string): Promise<ArtifactMeta & { genome_blob: string }> {
    return this.get(`/api/artifacts/${artifactId}`);
  }

  ancestry(artifactId: string, direction: "up" | "down", depth?: number): Promise<AncestryGraph> {
    const q = new URLSearchParams({ direction });
    if (depth !== undefined) q.set("depth", String(depth));
    return this.get(`/api/artifacts/${artifactId}/ancestry?${q}`);
  }

  phylogeny(domainId: string): Promise<AncestryGraph> {
    const q = new URLSearchParams({ domain_id: domainId });
    return this.get(`/api/phylogeny?${q}`);
  }

  artifactPngUrl(artifactId: string, w: number, h: number): string {
    return `${this.baseUrl}/api/artifacts/${artifactId}/phenotype.png?w=${w}&h=${h}`;
  }

  candidatePngUrl(sessionId: string, index: number, w: number, h: number): string {
    return `${this.baseUrl}/api/sessions/${sessionId}/candidates/${index}/phenotype.png?w=${w}&h=${h}`;
  }

  async createSession(
    domainId: string,
    seedArtifactIds: string[],
    rngSeed: number,
    popSize?: number,
    transcript?: Transcript,
  ): Promise<SessionInfo> {
    const body: Record<string, unknown> = {
      domain_id: domainId,
      seed_artifact_ids: seedArtifactIds,
      rng_seed: rngSeed,
    };
    if (popSize !== undefined) body.pop_size = popSize;
    const session = (await this.send<SessionInfo>("POST", "/api/sessions", body))!;
    transcript?.record({
      op: "create",
      domain_id: domainId,
      seed_artifact_ids: seedArtifactIds,
      pop_size: popSize,
      rng_seed: rngSeed,
    });
    return session;
  }

  async select(
    sessionId: string,
    opEpoch: number,
    selected: number[],
    transcript?: Transcript,
  ): Promise<SessionInfo> {
    const session = (await this.send<SessionInfo>(
      "POST",
      `/api/sessions/${sessionId}/select`,
      { op_epoch: opEpoch, selected },
    ))!;
    transcript?.record({ op: "select", selected });
    return session;
  }

  async publish(
    sessionId: string,
    candidate: number,
    author = "",
    tags: string[] = [],
    transcript?: Transcript,
  ): Promise<ArtifactMeta> {
    const record = (await this.send<ArtifactMeta>(
      "POST",
      `/api/sessions/${sessionId}/publish`,
      { candidate, author, tags },
    ))!;
    transcript?.record({ op: "publish", candidate, author, tags });
    return record;
  }

  async deleteSession(sessionId: string): Promise<void> {
    await this.send("DELETE", `/api/sessions/${sessionId}`);
  }
}

/**
 * Re-run a recorded interaction against a fresh server. With the same
 * rng_seed the server breeds identical candidates, so publishes yield the
 * same artifact ids — the archive-side proof that the UI added no evolution
 * logic of its own.
 */
export async function replayTranscript(
  client: ApiClient,
  entries: TranscriptEntry[],
): Promise<string[]> {
  const published: string[] = [];
  let session: SessionInfo | null = null;
  for (const entry of entries) {
    if (entry.op === "create") {
      session = await client.createSession(
        entry.domain_id,
        entry.seed_artifact_ids,
        entry.rng_seed,
        entry.pop_size,
      );
    } else if (!session) {
      throw new Error("transcript uses a session before creating one");
    } else if (entry.op === "select") {
      session = await client.select(session.session_id, session.op_epoch, entry.selected);
    } else {
      const record = await client.publish(
        session.session_id,
        entry.candidate,
        entry.author,
        entry.tags,
      );
      published.push(record.artifact_id);
    }
  }
  return published;
}
