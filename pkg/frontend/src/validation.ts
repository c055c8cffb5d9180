/** Local mirror of the service's connection rules for instant feedback.
 *
 * The server stays authoritative (documents are re-validated on save); this
 * mirror must agree with it on every rejection code, which the parity tests
 * enforce against a live service.
 */

import { isParameterVertex, type StatementDoc, type VertexDoc } from "./types.js";

export type GestureCode =
  | "SELF_REFERENCE"
  | "SAME_LAYER"
  | "DUPLICATE_RULE"
  | "MULTIPLE_RESPONSE_VERTICES"
  | "DANGLING_VERTEX_REF";

export type KeywordCode = "DUPLICATE_KEYWORD" | "BAD_LABEL_LENGTH" | "EMPTY_KEYWORDS";

export const MIN_LABEL_LENGTH = 2;

/** Trim, collapse whitespace runs, lowercase; identical to the service. */
export function canonicalize(text: string): string {
  return text.split(/\s+/).filter(Boolean).join(" ").toLowerCase();
}

function vertexById(doc: StatementDoc): Map<string, VertexDoc> {
  return new Map(doc.vertices.map((v) => [v.id, v]));
}

function parameterVertexIds(doc: StatementDoc, vertexIds: Iterable<string>): Set<string> {
  const byId = vertexById(doc);
  const out = new Set<string>();
  for (const id of vertexIds) {
    const vertex = byId.get(id);
    if (vertex && isParameterVertex(vertex)) out.add(id);
  }
  return out;
}

function setsEqual(a: Set<string>, b: Set<string>): boolean {
  if (a.size !== b.size) return false;
  for (const item of a) if (!b.has(item)) return false;
  return true;
}

/** Judge a draw-an-edge gesture between two vertex groups.
 *
 * Check order matches the service: dangling refs, self-reference,
 * same-layer, duplicate rule, second response vertex. Null means accepted;
 * response-less partial edges are acceptable drafts.
 */
export function validateGesture(
  doc: StatementDoc,
  sideA: string[],
  sideB: string[],
): GestureCode | null {
  if (sideA.length === 0 || sideB.length === 0) {
    throw new Error("both gesture sides must name at least one vertex");
  }
  const byId = vertexById(doc);
  const setA = new Set(sideA);
  const setB = new Set(sideB);
  const union = new Set([...setA, ...setB]);

  for (const id of union) {
    if (!byId.has(id)) return "DANGLING_VERTEX_REF";
  }
  for (const id of setA) {
    if (setB.has(id)) return "SELF_REFERENCE";
  }

  const paramsInUnion = new Map<string, Set<string>>();
  let responseCount = 0;
  for (const id of union) {
    const vertex = byId.get(id)!;
    if (isParameterVertex(vertex)) {
      const key = canonicalize(vertex.parameter);
      if (!paramsInUnion.has(key)) paramsInUnion.set(key, new Set());
      paramsInUnion.get(key)!.add(id);
    } else {
      responseCount += 1;
    }
  }

  for (const ids of paramsInUnion.values()) {
    if (ids.size > 1) return "SAME_LAYER";
  }
  if (responseCount === union.size) return "SAME_LAYER";

  const draftParams = parameterVertexIds(doc, union);
  if (draftParams.size > 0) {
    for (const edge of doc.edges) {
      const full = new Set(edge.vertices);
      // A side equal to an existing edge is that edge being extended.
      if (setsEqual(full, setA) || setsEqual(full, setB)) continue;
      if (setsEqual(parameterVertexIds(doc, edge.vertices), draftParams)) {
        return "DUPLICATE_RULE";
      }
    }
  }

  if (responseCount > 1) return "MULTIPLE_RESPONSE_VERTICES";
  return null;
}

/** Immediate checks for adding one keyword tag to a parameter vertex. */
export function validateKeywordAddition(
  doc: StatementDoc,
  vertexId: string,
  keyword: string,
): KeywordCode | null {
  const canonical = canonicalize(keyword);
  if (canonical.length < MIN_LABEL_LENGTH) return "BAD_LABEL_LENGTH";
  const target = doc.vertices.find((v) => v.id === vertexId);
  if (!target || !isParameterVertex(target)) return null;
  const parameter = canonicalize(target.parameter);
  for (const vertex of doc.vertices) {
    if (!isParameterVertex(vertex)) continue;
    if (canonicalize(vertex.parameter) !== parameter) continue;
    if (vertex.keywords.some((k) => canonicalize(k) === canonical)) {
      return "DUPLICATE_KEYWORD";
    }
  }
  return null;
}

/** Removing the last keyword would leave the vertex invalid. */
export function validateKeywordRemoval(
  doc: StatementDoc,
  vertexId: string,
): KeywordCode | null {
  const target = doc.vertices.find((v) => v.id === vertexId);
  if (!target || !isParameterVertex(target)) return null;
  return target.keywords.length <= 1 ? "EMPTY_KEYWORDS" : null;
}
