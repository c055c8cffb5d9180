/** The editor application: statement state, poka-yoke mutations, live
 * metrics, and save/load against the knowledge service.
 *
 * Committed edges always carry exactly one response vertex; edges still
 * under construction live in `drafts` and never reach the saved document,
 * so anything the editor persists passes server validation.
 */

import { ApiClient, ConflictError, NotFoundError, ValidationRejected } from "./api.js";
import { computeMetrics } from "./metrics.js";
import { renderGraph } from "./graph.js";
import {
  canonicalize,
  validateGesture,
  validateKeywordAddition,
  validateKeywordRemoval,
  type GestureCode,
  type KeywordCode,
} from "./validation.js";
import {
  cloneDoc,
  isParameterVertex,
  parseStatementDoc,
  SchemaError,
  type EdgeDoc,
  type StatementDoc,
} from "./types.js";

export class EditorApp {
  doc: StatementDoc | null = null;
  version: number | null = null;
  drafts: EdgeDoc[] = [];
  selectedVertex: string | null = null;

  private root: HTMLElement;
  private api: ApiClient;
  private draftCounter = 0;

  constructor(root: HTMLElement, api: ApiClient) {
    this.root = root;
    this.api = api;
    this.buildSkeleton();
  }

  // ------------------------------------------------------------------ DOM

  private buildSkeleton(): void {
    this.root.innerHTML = `
      <header class="rg-header">
        <input class="rg-load-id" placeholder="statement id" />
        <button class="rg-load">Load</button>
        <button class="rg-save" disabled>Save</button>
        <span class="rg-version"></span>
      </header>
      <div class="rg-banner" hidden></div>
      <div class="rg-conflict" hidden>
        <span>Someone else saved a newer version.</span>
        <button class="rg-reload">Reload</button>
        <button class="rg-overwrite">Overwrite</button>
      </div>
      <div class="rg-flash" hidden></div>
      <div class="rg-error" hidden></div>
      <div class="rg-notfound" hidden>No such statement.</div>
      <dl class="rg-metrics">
        <dt>sigma</dt><dd class="rg-metric-sigma">–</dd>
        <dt>z</dt><dd class="rg-metric-z">–</dd>
        <dt>t</dt><dd class="rg-metric-t">–</dd>
      </dl>
      <svg class="rg-canvas" xmlns="http://www.w3.org/2000/svg"></svg>
      <ul class="rg-rules"></ul>
      <div class="rg-tags" hidden>
        <span class="rg-tags-title"></span>
        <ul class="rg-tag-list"></ul>
        <input class="rg-tag-input" placeholder="add keyword" />
        <span class="rg-tag-preview"></span>
        <button class="rg-tag-add">Add</button>
      </div>
    `;
    this.el(".rg-load").addEventListener("click", () => {
      void this.load(this.input(".rg-load-id").value.trim());
    });
    this.el(".rg-save").addEventListener("click", () => void this.save());
    this.el(".rg-reload").addEventListener("click", () => {
      this.el(".rg-conflict").hidden = true;
      if (this.doc) void this.load(this.doc.id);
    });
    this.el(".rg-overwrite").addEventListener("click", () => {
      this.el(".rg-conflict").hidden = true;
      void this.save({ force: true });
    });
    this.el(".rg-tag-add").addEventListener("click", () => {
      if (this.selectedVertex) {
        this.addKeyword(this.selectedVertex, this.input(".rg-tag-input").value);
      }
    });
    this.input(".rg-tag-input").addEventListener("input", () => this.renderTagPreview());
  }

  private el<T extends HTMLElement = HTMLElement>(selector: string): T {
    const found = this.root.querySelector<T>(selector);
    if (!found) throw new Error(`missing editor element ${selector}`);
    return found;
  }

  private input(selector: string): HTMLInputElement {
    return this.el<HTMLInputElement>(selector);
  }

  // ------------------------------------------------------------ load/save

  setDocument(raw: unknown, version: number | null = null): void {
    try {
      this.doc = parseStatementDoc(raw);
    } catch (error) {
      if (error instanceof SchemaError) {
        this.doc = null;
        this.version = null;
        this.showError(`document rejected: ${error.message}`);
        return;
      }
      throw error;
    }
    this.version = version;
    this.drafts = [];
    this.selectedVertex = null;
    this.el(".rg-error").hidden = true;
    this.el(".rg-notfound").hidden = true;
    this.renderAll();
  }

  async load(id: string): Promise<void> {
    try {
      const { doc, version } = await this.api.getStatement(id);
      this.setDocument(doc, version);
      this.hideBanner();
    } catch (error) {
      if (error instanceof NotFoundError) {
        this.el(".rg-notfound").hidden = false;
        return;
      }
      this.showBanner(`load failed: ${String(error)}`, () => void this.load(id));
    }
  }

  async save(options: { force?: boolean } = {}): Promise<void> {
    if (!this.doc) return;
    const doc = this.getDocument();
    try {
      if (this.version === null) {
        this.version = await this.api.createStatement(doc);
      } else {
        const ifMatch = options.force ? undefined : this.version;
        this.version = await this.api.putStatement(doc, ifMatch);
      }
      this.hideBanner();
      this.renderHeader();
    } catch (error) {
      if (error instanceof ConflictError) {
        this.el(".rg-conflict").hidden = false;
        return;
      }
      if (error instanceof ValidationRejected) {
        const codes = error.report.violations.map((v) => v.code).join(", ");
        this.showError(`service rejected the document: ${codes}`);
        return;
      }
      this.showBanner(`save failed: ${String(error)}`, () => void this.save(options));
    }
  }

  /** The persistable document: committed edges only, drafts stay local. */
  getDocument(): StatementDoc {
    if (!this.doc) throw new Error("no statement loaded");
    return cloneDoc(this.doc);
  }

  // ------------------------------------------------------------ mutations

  /** Apply a draw gesture; returns the rejection code or null when applied. */
  gesture(sideA: string[], sideB: string[]): GestureCode | null {
    if (!this.doc) return null;
    const merged = this.mergedDocForValidation();
    const code = validateGesture(merged, sideA, sideB);
    if (code) {
      this.showFlash(code);
      this.renderAll(); // rejected edges snap back
      return code;
    }
    this.clearFlash();
    const union = [...new Set([...sideA, ...sideB])];
    const hasResponse = union.some((id) => this.isResponse(id));

    const draftIndex = this.drafts.findIndex(
      (d) => sameSet(d.vertices, sideA) || sameSet(d.vertices, sideB),
    );
    const committedIndex = this.doc.edges.findIndex(
      (e) => sameSet(e.vertices, sideA) || sameSet(e.vertices, sideB),
    );

    if (committedIndex >= 0) {
      this.doc.edges[committedIndex] = {
        id: this.doc.edges[committedIndex].id,
        vertices: union,
      };
    } else if (hasResponse) {
      if (draftIndex >= 0) this.drafts.splice(draftIndex, 1);
      this.doc.edges.push({ id: this.nextEdgeId(), vertices: union });
    } else if (draftIndex >= 0) {
      this.drafts[draftIndex] = { id: this.drafts[draftIndex].id, vertices: union };
    } else {
      this.draftCounter += 1;
      this.drafts.push({ id: `draft-${this.draftCounter}`, vertices: union });
    }
    this.renderAll();
    return null;
  }

  addKeyword(vertexId: string, keyword: string): KeywordCode | null {
    if (!this.doc) return null;
    const code = validateKeywordAddition(this.doc, vertexId, keyword);
    if (code) {
      this.showFlash(code);
      return code;
    }
    const vertex = this.doc.vertices.find((v) => v.id === vertexId);
    if (vertex && isParameterVertex(vertex)) {
      vertex.keywords.push(keyword.trim());
      this.clearFlash();
      this.renderAll();
    }
    return null;
  }

  removeKeyword(vertexId: string, keyword: string): KeywordCode | null {
    if (!this.doc) return null;
    const code = validateKeywordRemoval(this.doc, vertexId);
    if (code) {
      this.showFlash(code);
      return code;
    }
    const vertex = this.doc.vertices.find((v) => v.id === vertexId);
    if (vertex && isParameterVertex(vertex)) {
      vertex.keywords = vertex.keywords.filter((k) => k !== keyword);
      this.clearFlash();
      this.renderAll();
    }
    return null;
  }

  deleteEdge(edgeId: string): void {
    if (!this.doc) return;
    this.doc.edges = this.doc.edges.filter((e) => e.id !== edgeId);
    this.drafts = this.drafts.filter((d) => d.id !== edgeId);
    this.renderAll();
  }

  // ------------------------------------------------------------- helpers

  private isResponse(vertexId: string): boolean {
    return this.doc?.vertices.some((v) => v.id === vertexId && v.kind === "response") ?? false;
  }

  /** Validation must see drafts too, or a duplicate draft would slip by. */
  private mergedDocForValidation(): StatementDoc {
    const merged = this.getDocument();
    merged.edges = [...merged.edges, ...this.drafts.map((d) => ({ ...d }))];
    return merged;
  }

  private nextEdgeId(): string {
    const taken = new Set([
      ...(this.doc?.edges.map((e) => e.id) ?? []),
      ...this.drafts.map((d) => d.id),
    ]);
    let n = (this.doc?.edges.length ?? 0) + 1;
    while (taken.has(`e${n}`)) n += 1;
    return `e${n}`;
  }

  // ------------------------------------------------------------ rendering

  renderAll(): void {
    if (!this.doc) return;
    this.renderHeader();
    this.renderMetrics();
    this.renderCanvas();
    this.renderRules();
    this.renderTags();
  }

  private renderHeader(): void {
    this.el(".rg-version").textContent = this.doc
      ? `${this.doc.id}${this.version !== null ? ` @ v${this.version}` : " (unsaved)"}`
      : "";
    (this.el(".rg-save") as HTMLButtonElement).disabled = this.doc === null;
  }

  private renderMetrics(): void {
    if (!this.doc) return;
    const m = computeMetrics(this.getDocument());
    this.el(".rg-metric-sigma").textContent = `[${m.sigma.join(",")}]`;
    this.el(".rg-metric-z").textContent = m.z.toString();
    this.el(".rg-metric-t").textContent = m.t.toString();
  }

  private renderCanvas(): void {
    if (!this.doc) return;
    const svg = this.root.querySelector<SVGSVGElement>(".rg-canvas");
    if (!svg) return;
    renderGraph(svg, this.doc, this.drafts, {
      onGesture: (a, b) => void this.gesture(a, b),
      onSelectVertex: (id) => {
        this.selectedVertex = id;
        this.renderTags();
      },
    });
  }

  private renderRules(): void {
    if (!this.doc) return;
    const list = this.el(".rg-rules");
    list.innerHTML = "";
    for (const edge of this.doc.edges) {
      const item = document.createElement("li");
      item.dataset.edgeId = edge.id;
      item.textContent = `${edge.id}: {${edge.vertices.join(", ")}} `;
      const remove = document.createElement("button");
      remove.className = "rg-rule-delete";
      remove.textContent = "delete";
      remove.addEventListener("click", () => this.deleteEdge(edge.id));
      item.appendChild(remove);
      list.appendChild(item);
    }
    for (const draft of this.drafts) {
      const item = document.createElement("li");
      item.dataset.edgeId = draft.id;
      item.className = "rg-rule-draft";
      item.textContent = `${draft.id} (no response yet): {${draft.vertices.join(", ")}}`;
      list.appendChild(item);
    }
  }

  private renderTags(): void {
    const panel = this.el(".rg-tags");
    const vertex = this.doc?.vertices.find((v) => v.id === this.selectedVertex);
    if (!vertex || !isParameterVertex(vertex)) {
      panel.hidden = true;
      return;
    }
    panel.hidden = false;
    this.el(".rg-tags-title").textContent = `${vertex.id} (${vertex.parameter})`;
    const list = this.el(".rg-tag-list");
    list.innerHTML = "";
    for (const keyword of vertex.keywords) {
      const item = document.createElement("li");
      item.className = "rg-tag";
      item.textContent = keyword;
      const remove = document.createElement("button");
      remove.className = "rg-tag-remove";
      remove.textContent = "×";
      remove.addEventListener("click", () => this.removeKeyword(vertex.id, keyword));
      item.appendChild(remove);
      list.appendChild(item);
    }
    this.renderTagPreview();
  }

  private renderTagPreview(): void {
    const value = this.input(".rg-tag-input").value;
    const preview = this.el(".rg-tag-preview");
    preview.textContent = value ? `matches as "${canonicalize(value)}"` : "";
  }

  // ------------------------------------------------------------- notices

  private showFlash(code: string): void {
    const flash = this.el(".rg-flash");
    flash.hidden = false;
    flash.textContent = code;
  }

  private clearFlash(): void {
    const flash = this.el(".rg-flash");
    flash.hidden = true;
    flash.textContent = "";
  }

  get flashText(): string {
    return this.el(".rg-flash").textContent ?? "";
  }

  private showError(message: string): void {
    const panel = this.el(".rg-error");
    panel.hidden = false;
    panel.textContent = message;
  }

  private showBanner(message: string, retry: () => void): void {
    const banner = this.el(".rg-banner");
    banner.hidden = false;
    banner.textContent = message + " ";
    const button = document.createElement("button");
    button.className = "rg-retry";
    button.textContent = "Retry";
    button.addEventListener("click", () => {
      this.hideBanner();
      retry();
    });
    banner.appendChild(button);
  }

  private hideBanner(): void {
    const banner = this.el(".rg-banner");
    banner.hidden = true;
    banner.textContent = "";
  }
}

function sameSet(a: string[], b: string[]): boolean {
  const setA = new Set(a);
  const setB = new Set(b);
  if (setA.size !== setB.size) return false;
  for (const item of setA) if (!setB.has(item)) return false;
  return true;
}
