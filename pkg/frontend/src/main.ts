import { ApiClient } from "./api.js";
import { EditorApp } from "./editor.js";

declare global {
  interface Window {
    RULEGRAPH_API?: string;
    rulegraphEditor?: EditorApp;
  }
}

const root = document.getElementById("editor");
if (root) {
  const api = new ApiClient(window.RULEGRAPH_API ?? "");
  const editor = new EditorApp(root, api);
  window.rulegraphEditor = editor;
  const requested = new URLSearchParams(window.location.search).get("statement");
  if (requested) void editor.load(requested);
}
