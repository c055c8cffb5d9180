import { readFileSync } from "node:fs";
import { dirname, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import { ApiClient } from "../src/api.js";
import { EditorApp } from "../src/editor.js";
import { parseStatementDoc, type StatementDoc } from "../src/types.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const FIXTURE_PATH = resolve(HERE, "../../tests/data/toy_accident.json");

/** Fresh copy of the worked example statement shared with the service repo. */
export function toyDoc(): StatementDoc {
  return parseStatementDoc(JSON.parse(readFileSync(FIXTURE_PATH, "utf-8")));
}

export function mountEditor(api: ApiClient = new ApiClient("http://unused.invalid")): {
  editor: EditorApp;
  root: HTMLElement;
} {
  const root = document.createElement("div");
  document.body.appendChild(root);
  return { editor: new EditorApp(root, api), root };
}

export function vertexEl(root: HTMLElement, vertexId: string): Element {
  const el = root.querySelector(`[data-vertex-id="${vertexId}"]`);
  if (!el) throw new Error(`vertex ${vertexId} not rendered`);
  return el;
}

export function mouse(target: Element, type: "mousedown" | "mouseup" | "click"): void {
  target.dispatchEvent(new MouseEvent(type, { bubbles: true, cancelable: true }));
}

/** Simulate dragging from one vertex to another on the canvas. */
export function dragConnect(root: HTMLElement, fromId: string, toId: string): void {
  mouse(vertexEl(root, fromId), "mousedown");
  mouse(vertexEl(root, toId), "mouseup");
}

export function flashText(root: HTMLElement): string {
  return root.querySelector(".rg-flash")?.textContent ?? "";
}

export function metricText(root: HTMLElement, which: "sigma" | "z" | "t"): string {
  return root.querySelector(`.rg-metric-${which}`)?.textContent ?? "";
}
