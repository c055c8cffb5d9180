/** Layered hypergraph canvas.
 *
 * One horizontal layer per parameter in declaration order, the response
 * layer at the bottom. A hyperedge renders as a star of links through an
 * invisible junction point, one color per edge; drafts (edges still missing
 * their response) render dashed gray. Dragging from a vertex (or an edge's
 * junction) to another vertex emits a gesture for validation upstream.
 */

import { edgeColor } from "./palette.js";
import { canonicalize } from "./validation.js";
import { isParameterVertex, type EdgeDoc, type StatementDoc } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const BOX_WIDTH = 132;
const BOX_HEIGHT = 40;
const H_GAP = 24;
const V_GAP = 72;
const MARGIN = 28;

export interface GraphCallbacks {
  onGesture(sideA: string[], sideB: string[]): void;
  onSelectVertex(vertexId: string): void;
}

interface Point {
  x: number;
  y: number;
}

export function renderGraph(
  svg: SVGSVGElement,
  doc: StatementDoc,
  drafts: EdgeDoc[],
  callbacks: GraphCallbacks,
): void {
  svg.textContent = "";
  const positions = layeredLayout(doc);

  let dragSource: string[] | null = null;

  const edgesGroup = document.createElementNS(SVG_NS, "g");
  edgesGroup.setAttribute("class", "rg-edges");
  svg.appendChild(edgesGroup);

  doc.edges.forEach((edge, index) => {
    edgesGroup.appendChild(
      renderEdge(edge, positions, edgeColor(index), false, () => {
        dragSource = [...edge.vertices];
      }),
    );
  });
  drafts.forEach((draft) => {
    edgesGroup.appendChild(
      renderEdge(draft, positions, "#999999", true, () => {
        dragSource = [...draft.vertices];
      }),
    );
  });

  const vertexGroup = document.createElementNS(SVG_NS, "g");
  vertexGroup.setAttribute("class", "rg-vertices");
  svg.appendChild(vertexGroup);

  for (const vertex of doc.vertices) {
    const point = positions.get(vertex.id);
    if (!point) continue;
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", `rg-vertex rg-vertex-${vertex.kind}`);
    group.setAttribute("data-vertex-id", vertex.id);

    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", String(point.x - BOX_WIDTH / 2));
    rect.setAttribute("y", String(point.y - BOX_HEIGHT / 2));
    rect.setAttribute("width", String(BOX_WIDTH));
    rect.setAttribute("height", String(BOX_HEIGHT));
    rect.setAttribute("rx", "6");
    group.appendChild(rect);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(point.x));
    label.setAttribute("y", String(point.y + 4));
    label.setAttribute("text-anchor", "middle");
    label.textContent = isParameterVertex(vertex)
      ? `${vertex.id} · ${vertex.keywords.length} kw`
      : vertex.label;
    group.appendChild(label);

    group.addEventListener("mousedown", (event) => {
      event.preventDefault();
      dragSource = [vertex.id];
    });
    group.addEventListener("mouseup", () => {
      // Releasing on the starting vertex still emits: that is exactly the
      // self-reference gesture the validator must catch.
      if (dragSource) {
        const source = dragSource;
        dragSource = null;
        callbacks.onGesture(source, [vertex.id]);
      }
    });
    group.addEventListener("click", () => callbacks.onSelectVertex(vertex.id));
    vertexGroup.appendChild(group);
  }

  svg.addEventListener("mouseup", (event) => {
    if (event.target === svg) dragSource = null; // released on empty canvas
  });

  const height = (layerCount(doc) - 1) * (BOX_HEIGHT + V_GAP) + BOX_HEIGHT + 2 * MARGIN;
  const width = maxLayerWidth(doc) + 2 * MARGIN;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
}

function renderEdge(
  edge: EdgeDoc,
  positions: Map<string, Point>,
  color: string,
  draft: boolean,
  onGrab: () => void,
): SVGGElement {
  const group = document.createElementNS(SVG_NS, "g");
  group.setAttribute("class", draft ? "rg-edge rg-edge-draft" : "rg-edge");
  group.setAttribute("data-edge-id", edge.id);
  group.setAttribute("data-edge-color", color);

  const points = edge.vertices
    .map((id) => positions.get(id))
    .filter((p): p is Point => p !== undefined);
  if (points.length === 0) return group;
  const junction: Point = {
    x: points.reduce((acc, p) => acc + p.x, 0) / points.length,
    y: points.reduce((acc, p) => acc + p.y, 0) / points.length,
  };

  for (const point of points) {
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(junction.x));
    line.setAttribute("y1", String(junction.y));
    line.setAttribute("x2", String(point.x));
    line.setAttribute("y2", String(point.y));
    line.setAttribute("stroke", color);
    line.setAttribute("stroke-width", "2.5");
    if (draft) line.setAttribute("stroke-dasharray", "6 4");
    group.appendChild(line);
  }

  const grab = document.createElementNS(SVG_NS, "circle");
  grab.setAttribute("class", "rg-junction");
  grab.setAttribute("cx", String(junction.x));
  grab.setAttribute("cy", String(junction.y));
  grab.setAttribute("r", "7");
  grab.setAttribute("fill", color);
  grab.addEventListener("mousedown", (event) => {
    event.preventDefault();
    onGrab();
  });
  group.appendChild(grab);
  return group;
}

function layerCount(doc: StatementDoc): number {
  return doc.parameters.length + 1;
}

function layeredLayout(doc: StatementDoc): Map<string, Point> {
  const positions = new Map<string, Point>();
  const layerIndex = new Map<string, number>();
  doc.parameters.forEach((name, index) => layerIndex.set(canonicalize(name), index));
  const responsesLayer = doc.parameters.length;

  const counts = new Map<number, number>();
  for (const vertex of doc.vertices) {
    const layer = isParameterVertex(vertex)
      ? layerIndex.get(canonicalize(vertex.parameter)) ?? responsesLayer
      : responsesLayer;
    const column = counts.get(layer) ?? 0;
    counts.set(layer, column + 1);
    positions.set(vertex.id, {
      x: MARGIN + BOX_WIDTH / 2 + column * (BOX_WIDTH + H_GAP),
      y: MARGIN + BOX_HEIGHT / 2 + layer * (BOX_HEIGHT + V_GAP),
    });
  }
  return positions;
}

function maxLayerWidth(doc: StatementDoc): number {
  const perLayer = new Map<number, number>();
  const layerIndex = new Map<string, number>();
  doc.parameters.forEach((name, index) => layerIndex.set(canonicalize(name), index));
  for (const vertex of doc.vertices) {
    const layer = isParameterVertex(vertex)
      ? layerIndex.get(canonicalize(vertex.parameter)) ?? doc.parameters.length
      : doc.parameters.length;
    perLayer.set(layer, (perLayer.get(layer) ?? 0) + 1);
  }
  const widest = Math.max(1, ...perLayer.values());
  return widest * BOX_WIDTH + (widest - 1) * H_GAP;
}
