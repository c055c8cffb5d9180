/** Client-side statement metrics so the panel updates before anything is
 * saved. Arithmetic uses BigInt: large keyword enumerations overflow
 * double-precision numbers quickly. */

import { canonicalize } from "./validation.js";
import { isParameterVertex, type StatementDoc } from "./types.js";

export interface ClientMetrics {
  sigma: number[];
  z: bigint;
  t: bigint;
}

export function computeMetrics(doc: StatementDoc): ClientMetrics {
  const totals = new Map<string, number>();
  const order: string[] = [];
  for (const name of doc.parameters) {
    const key = canonicalize(name);
    if (!totals.has(key)) {
      totals.set(key, 0);
      order.push(key);
    }
  }
  for (const vertex of doc.vertices) {
    if (!isParameterVertex(vertex)) continue;
    const key = canonicalize(vertex.parameter);
    if (totals.has(key)) totals.set(key, totals.get(key)! + vertex.keywords.length);
  }
  const sigma = order.map((key) => totals.get(key)!);

  let z = 1n;
  for (const count of sigma) z *= 1n + BigInt(count);
  z -= 1n;

  const keywordCount = new Map<string, number>();
  for (const vertex of doc.vertices) {
    if (isParameterVertex(vertex)) keywordCount.set(vertex.id, vertex.keywords.length);
  }
  let t = 0n;
  for (const edge of doc.edges) {
    let product = 1n;
    for (const id of new Set(edge.vertices)) {
      const count = keywordCount.get(id);
      if (count !== undefined) product *= BigInt(count);
    }
    t += product;
  }
  return { sigma, z, t };
}
