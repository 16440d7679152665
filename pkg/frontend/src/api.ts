/** Typed client for the annotation HTTP API. */

import type { Edit, EditResult, SessionState } from "./types.js";

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private url(path: string): string {
    return this.baseUrl + path;
  }

  async listImages(): Promise<string[]> {
    const r = await fetch(this.url("/api/images"));
    if (!r.ok) throw new Error(`list images failed: ${r.status}`);
    const body = (await r.json()) as { images: string[] };
    return body.images;
  }

  imageUrl(imageId: string): string {
    return this.url(`/api/image/${encodeURIComponent(imageId)}`);
  }

  async openSession(imageId: string): Promise<{ session: string; state: SessionState }> {
    const r = await fetch(this.url("/api/session"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ image_id: imageId }),
    });
    if (!r.ok) throw new Error(`open session failed: ${r.status}`);
    return (await r.json()) as { session: string; state: SessionState };
  }

  async getState(sid: string): Promise<SessionState> {
    const r = await fetch(this.url(`/api/session/${sid}`));
    if (!r.ok) throw new Error(`get state failed: ${r.status}`);
    return (await r.json()) as SessionState;
  }

  /**
   * Submit one edit based on the given revision. Concurrency conflicts
   * (409) and invalid edits (422) come back as values, not exceptions,
   * so the controller can route them.
   */
  async sendEdit(sid: string, edit: Edit, baseRevision: number): Promise<EditResult> {
    const r = await fetch(this.url(`/api/session/${sid}/edit`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ edit, base_revision: baseRevision }),
    });
    if (r.ok) return { kind: "ok", state: (await r.json()) as SessionState };
    const detail = await detailOf(r);
    if (r.status === 409) return { kind: "conflict", detail };
    return { kind: "rejected", detail };
  }

  async exportLabels(sid: string, kind: string): Promise<Record<string, string>> {
    const r = await fetch(this.url(`/api/session/${sid}/export`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ kind }),
    });
    if (!r.ok) throw new Error(`export failed: ${r.status}: ${await detailOf(r)}`);
    const body = (await r.json()) as { files: Record<string, string> };
    return body.files;
  }
}

async function detailOf(r: Response): Promise<string> {
  try {
    const body = (await r.json()) as { detail?: string };
    return body.detail ?? r.statusText;
  } catch {
    return r.statusText;
  }
}
