/** Differential tests against the live knowledge service: the editor's
 * local poka-yoke checks must agree with server-side validation, and
 * nothing the editor produces may be rejected on save. */

import { beforeEach, describe, expect, inject, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { computeMetrics } from "../src/metrics.js";
import type { EdgeDoc, StatementDoc } from "../src/types.js";
import { dragConnect, flashText, mountEditor, toyDoc } from "./helpers.js";

const api = new ApiClient(inject("serverUrl"));

beforeEach(() => {
  document.body.innerHTML = "";
});

async function serverCodesForDrawnEdge(
  base: StatementDoc,
  drawn: string[],
): Promise<Set<string>> {
  const probe = { ...base, edges: [...base.edges, { id: "drawn", vertices: drawn }] };
  const report = await api.validate(probe);
  const codes = new Set(
    report.violations.filter((v) => v.severity === "error").map((v) => v.code),
  );
  // An edge still missing its response is a legal draft in the editor; the
  // whole-statement view flags only that gap.
  codes.delete("NO_RESPONSE_VERTEX");
  return codes;
}

describe("rejection parity with the live server", () => {
  it("correct connection: accepted locally, clean on the server", async () => {
    const doc = { ...toyDoc(), edges: [] as EdgeDoc[] };
    const { root, editor } = mountEditor();
    editor.setDocument(doc);
    dragConnect(root, "v1", "v4");
    expect(flashText(root)).toBe("");
    expect(await serverCodesForDrawnEdge(doc, ["v1", "v4"])).toEqual(new Set());
  });

  it.each([
    ["v1", "v1", "SELF_REFERENCE"],
    ["v1", "v2", "SAME_LAYER"],
    ["v1", "v4", "DUPLICATE_RULE"],
  ])("%s -> %s shows the server's code (%s)", async (from, to, expected) => {
    const doc = toyDoc();
    const { root, editor } = mountEditor();
    editor.setDocument(doc);
    dragConnect(root, from, to);
    const displayed = flashText(root);
    expect(displayed).toBe(expected);
    const serverCodes = await serverCodesForDrawnEdge(doc, [from, to]);
    expect(serverCodes).toEqual(new Set([displayed]));
  });

  it("second response vertex matches the server's verdict", async () => {
    const doc = toyDoc();
    const { root, editor } = mountEditor();
    editor.setDocument(doc);
    const junction = root.querySelector('[data-edge-id="e1"] circle')!;
    junction.dispatchEvent(new MouseEvent("mousedown", { bubbles: true }));
    root
      .querySelector('[data-vertex-id="r2"]')!
      .dispatchEvent(new MouseEvent("mouseup", { bubbles: true }));
    expect(flashText(root)).toBe("MULTIPLE_RESPONSE_VERTICES");
    // The completed gesture would rewrite e1 as {v1,v4,r1,r2}.
    const probe = {
      ...doc,
      edges: doc.edges.map((e) =>
        e.id === "e1" ? { id: "e1", vertices: ["v1", "v4", "r1", "r2"] } : e,
      ),
    };
    const report = await api.validate(probe);
    const codes = report.violations.filter((v) => v.severity === "error").map((v) => v.code);
    expect(codes).toContain("MULTIPLE_RESPONSE_VERTICES");
  });
});

describe("save validity against the live server", () => {
  function mulberry32(seed: number): () => number {
    let state = seed;
    return () => {
      state |= 0;
      state = (state + 0x6d2b79f5) | 0;
      let t = Math.imul(state ^ (state >>> 15), 1 | state);
      t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
      return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    };
  }

  it("random accepted mutation sequences always validate clean", async () => {
    for (let round = 0; round < 12; round += 1) {
      const random = mulberry32(1000 + round);
      const { editor } = mountEditor();
      editor.setDocument(toyDoc());
      const vertexIds = toyDoc().vertices.map((v) => v.id);
      const parameterIds = toyDoc()
        .vertices.filter((v) => v.kind === "parameter")
        .map((v) => v.id);

      for (let step = 0; step < 18; step += 1) {
        const roll = random();
        if (roll < 0.45) {
          const a = vertexIds[Math.floor(random() * vertexIds.length)];
          const b = vertexIds[Math.floor(random() * vertexIds.length)];
          editor.gesture([a], [b]); // outcome irrelevant: rejections mutate nothing
        } else if (roll < 0.6 && editor.drafts.length > 0) {
          const draft = editor.drafts[Math.floor(random() * editor.drafts.length)];
          const target = vertexIds[Math.floor(random() * vertexIds.length)];
          editor.gesture([...draft.vertices], [target]);
        } else if (roll < 0.75) {
          const vertex = parameterIds[Math.floor(random() * parameterIds.length)];
          editor.addKeyword(vertex, `extra ${round} ${step}`);
        } else if (roll < 0.85) {
          const vertex = parameterIds[Math.floor(random() * parameterIds.length)];
          const doc = editor.getDocument();
          const found = doc.vertices.find((v) => v.id === vertex);
          if (found && found.kind === "parameter" && found.keywords.length > 0) {
            editor.removeKeyword(vertex, found.keywords[0]);
          }
        } else {
          const edges = editor.getDocument().edges;
          if (edges.length > 0) {
            editor.deleteEdge(edges[Math.floor(random() * edges.length)].id);
          }
        }
      }

      const report = await api.validate(editor.getDocument());
      const errors = report.violations.filter((v) => v.severity === "error");
      expect(errors, JSON.stringify(errors)).toHaveLength(0);
      expect(report.valid).toBe(true);
    }
  });
});

describe("live metrics parity", () => {
  it("editor panel matches the service's numbers for the fixture", async () => {
    const { editor } = mountEditor();
    editor.setDocument(toyDoc());
    const local = computeMetrics(editor.getDocument());
    const remote = await api.metrics("toy-accident");
    expect(local.sigma).toEqual(remote.sigma);
    expect(local.z.toString()).toBe(String(remote.z));
    expect(local.t.toString()).toBe(String(remote.t));
    expect(remote.z).toBe(34);
    expect(remote.t).toBe(13);
  });
});

describe("editing against the live server end to end", () => {
  it("loads, mutates, saves, and survives a version conflict", async () => {
    const workingId = `working-${Date.now()}-${Math.floor(Math.random() * 10_000)}`;
    const seed = { ...toyDoc(), id: workingId };
    await api.createStatement(seed);
    try {
      const first = mountEditor(api);
      await first.editor.load(workingId);
      expect(first.editor.version).toBe(1);
      expect(first.editor.addKeyword("v4", "Austria")).toBeNull();
      await first.editor.save();
      expect(first.editor.version).toBe(2);

      // A second editor saved in between; the next save must conflict.
      const second = mountEditor(api);
      await second.editor.load(workingId);
      expect(second.editor.addKeyword("v6", "Peru")).toBeNull();
      await second.editor.save();
      expect(second.editor.version).toBe(3);

      expect(first.editor.addKeyword("v4", "Iceland")).toBeNull();
      await first.editor.save();
      expect(first.root.querySelector<HTMLElement>(".rg-conflict")?.hidden).toBe(false);

      first.root
        .querySelector(".rg-overwrite")!
        .dispatchEvent(new MouseEvent("click", { bubbles: true }));
      await new Promise((r) => setTimeout(r, 100));
      expect(first.editor.version).toBe(4);

      const { doc } = await api.getStatement(workingId);
      const v4 = doc.vertices.find((v) => v.id === "v4");
      expect(v4 && v4.kind === "parameter" ? v4.keywords : []).toContain("Iceland");
    } finally {
      await api.deleteStatement(workingId);
    }
  });

  it("shows the not-found view for ids the service does not know", async () => {
    const { editor, root } = mountEditor(api);
    await editor.load("never-created");
    expect(root.querySelector<HTMLElement>(".rg-notfound")?.hidden).toBe(false);
  });
});
