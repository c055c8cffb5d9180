/** HTTP client for the knowledge service. The editor talks to the service
 * exclusively through these endpoints; versions travel via ETag/If-Match. */

import type { MetricsDoc, ReportDoc, StatementDoc, SummaryDoc } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
    message?: string,
  ) {
    super(message ?? `request failed with status ${status}`);
  }
}

export class NotFoundError extends ApiError {
  constructor(body: unknown) {
    super(404, body, "statement not found");
  }
}

export class ConflictError extends ApiError {
  currentVersion: number | null;
  constructor(body: unknown) {
    super(409, body, "version conflict");
    const version = (body as { current_version?: unknown })?.current_version;
    this.currentVersion = typeof version === "number" ? version : null;
  }
}

export class ValidationRejected extends ApiError {
  constructor(public report: ReportDoc, body: unknown) {
    super(422, body, "service rejected the document");
  }
}

function versionFromEtag(response: Response): number {
  const etag = response.headers.get("etag") ?? "";
  const version = Number.parseInt(etag.replace(/^W\//, "").replace(/"/g, ""), 10);
  if (Number.isNaN(version)) throw new ApiError(response.status, null, "missing version ETag");
  return version;
}

async function raiseFor(response: Response): Promise<never> {
  const body = await response.json().catch(() => null);
  if (response.status === 404) throw new NotFoundError(body);
  if (response.status === 409) throw new ConflictError(body);
  if (response.status === 422) {
    const report: ReportDoc = {
      valid: false,
      violations: (body as { violations?: ReportDoc["violations"] })?.violations ?? [],
    };
    throw new ValidationRejected(report, body);
  }
  throw new ApiError(response.status, body);
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}/api/v1${path}`;
  }

  async listStatements(): Promise<SummaryDoc[]> {
    const response = await fetch(this.url("/statements"));
    if (!response.ok) await raiseFor(response);
    const body = (await response.json()) as { statements: SummaryDoc[] };
    return body.statements;
  }

  async getStatement(id: string): Promise<{ doc: StatementDoc; version: number }> {
    const response = await fetch(this.url(`/statements/${encodeURIComponent(id)}`));
    if (!response.ok) await raiseFor(response);
    return { doc: (await response.json()) as StatementDoc, version: versionFromEtag(response) };
  }

  async createStatement(doc: StatementDoc): Promise<number> {
    const response = await fetch(this.url("/statements"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    });
    if (!response.ok) await raiseFor(response);
    return versionFromEtag(response);
  }

  async putStatement(doc: StatementDoc, ifMatch?: number): Promise<number> {
    const headers: Record<string, string> = { "content-type": "application/json" };
    if (ifMatch !== undefined) headers["if-match"] = `"${ifMatch}"`;
    const response = await fetch(this.url(`/statements/${encodeURIComponent(doc.id)}`), {
      method: "PUT",
      headers,
      body: JSON.stringify(doc),
    });
    if (!response.ok) await raiseFor(response);
    return versionFromEtag(response);
  }

  async deleteStatement(id: string): Promise<void> {
    const response = await fetch(this.url(`/statements/${encodeURIComponent(id)}`), {
      method: "DELETE",
    });
    if (!response.ok && response.status !== 204) await raiseFor(response);
  }

  async validate(doc: StatementDoc): Promise<ReportDoc> {
    const response = await fetch(this.url("/statements/validate"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    });
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as ReportDoc;
  }

  async metrics(id: string): Promise<MetricsDoc> {
    const response = await fetch(this.url(`/statements/${encodeURIComponent(id)}/metrics`));
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as MetricsDoc;
  }
}
