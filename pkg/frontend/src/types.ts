/** Statement document types mirroring the service's wire schema. */

export interface ParameterVertexDoc {
  id: string;
  kind: "parameter";
  parameter: string;
  keywords: string[];
}

export interface ResponseVertexDoc {
  id: string;
  kind: "response";
  label: string;
}

export type VertexDoc = ParameterVertexDoc | ResponseVertexDoc;

export interface EdgeDoc {
  id: string;
  vertices: string[];
}

export interface StatementDoc {
  id: string;
  name: string;
  parameters: string[];
  vertices: VertexDoc[];
  edges: EdgeDoc[];
}

export interface ViolationDoc {
  code: string;
  message: string;
  ids: string[];
  severity: "error" | "warning";
}

export interface ReportDoc {
  valid: boolean;
  violations: ViolationDoc[];
}

export interface SummaryDoc {
  id: string;
  name: string;
  parameter_count: number;
  z: number | string;
  t: number | string;
}

export interface MetricsDoc {
  sigma: number[];
  z: number | string;
  t: number | string;
  coverage_ratio: string;
}

export function isParameterVertex(vertex: VertexDoc): vertex is ParameterVertexDoc {
  return vertex.kind === "parameter";
}

export class SchemaError extends Error {}

const DOC_KEYS = ["id", "name", "parameters", "vertices", "edges"];

/** Strict parse of an untrusted document; the editor never renders a partial
 * graph from a malformed one. */
export function parseStatementDoc(raw: unknown): StatementDoc {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new SchemaError("document must be an object");
  }
  const doc = raw as Record<string, unknown>;
  for (const key of Object.keys(doc)) {
    if (!DOC_KEYS.includes(key)) throw new SchemaError(`unknown key ${key}`);
  }
  for (const key of DOC_KEYS) {
    if (!(key in doc)) throw new SchemaError(`missing key ${key}`);
  }
  if (typeof doc.id !== "string" || !doc.id) throw new SchemaError("id must be a non-empty string");
  if (typeof doc.name !== "string") throw new SchemaError("name must be a string");
  if (!Array.isArray(doc.parameters) || doc.parameters.some((p) => typeof p !== "string")) {
    throw new SchemaError("parameters must be a list of strings");
  }
  if (!Array.isArray(doc.vertices)) throw new SchemaError("vertices must be a list");
  if (!Array.isArray(doc.edges)) throw new SchemaError("edges must be a list");

  const seenVertex = new Set<string>();
  const vertices: VertexDoc[] = doc.vertices.map((raw, i) => {
    if (typeof raw !== "object" || raw === null) throw new SchemaError(`vertices[${i}] must be an object`);
    const v = raw as Record<string, unknown>;
    if (typeof v.id !== "string" || !v.id) throw new SchemaError(`vertices[${i}].id must be a non-empty string`);
    if (seenVertex.has(v.id)) throw new SchemaError(`duplicate vertex id ${v.id}`);
    seenVertex.add(v.id);
    if (v.kind === "parameter") {
      if (typeof v.parameter !== "string") throw new SchemaError(`vertices[${i}].parameter must be a string`);
      if (!Array.isArray(v.keywords) || v.keywords.some((k) => typeof k !== "string")) {
        throw new SchemaError(`vertices[${i}].keywords must be a list of strings`);
      }
      return { id: v.id, kind: "parameter", parameter: v.parameter, keywords: [...(v.keywords as string[])] };
    }
    if (v.kind === "response") {
      if (typeof v.label !== "string") throw new SchemaError(`vertices[${i}].label must be a string`);
      return { id: v.id, kind: "response", label: v.label };
    }
    throw new SchemaError(`vertices[${i}].kind must be 'parameter' or 'response'`);
  });

  const seenEdge = new Set<string>();
  const edges: EdgeDoc[] = doc.edges.map((raw, i) => {
    if (typeof raw !== "object" || raw === null) throw new SchemaError(`edges[${i}] must be an object`);
    const e = raw as Record<string, unknown>;
    if (typeof e.id !== "string" || !e.id) throw new SchemaError(`edges[${i}].id must be a non-empty string`);
    if (seenEdge.has(e.id)) throw new SchemaError(`duplicate edge id ${e.id}`);
    seenEdge.add(e.id);
    if (!Array.isArray(e.vertices) || e.vertices.some((v) => typeof v !== "string")) {
      throw new SchemaError(`edges[${i}].vertices must be a list of vertex ids`);
    }
    return { id: e.id, vertices: [...(e.vertices as string[])] };
  });

  return {
    id: doc.id,
    name: doc.name,
    parameters: [...(doc.parameters as string[])],
    vertices,
    edges,
  };
}

export function cloneDoc(doc: StatementDoc): StatementDoc {
  return JSON.parse(JSON.stringify(doc)) as StatementDoc;
}
