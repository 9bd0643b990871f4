// SVG DOM rendering of the diagram. Geometry, shapes, and colors mirror
// the server's SVG export one for one; the client never lays anything
// out, it draws the x/y/w/h the server sent and nothing else.

import type { AddressJson, VisualState } from "./protocol.js";
import { stateOf, type ViewNode, type ViewState } from "./replay.js";

export const FILLS: Record<VisualState, string> = {
  Untouched: "#ffffff",
  Called: "#9ee09e",
  Succeeded: "#9ecbf5",
  Failed: "#f5a3a3",
  Pruned: "#cccccc",
};

const STROKE = "#333333";
const CROSS = "#aa0000";
const FONT_SIZE = 13;
const SVG_NS = "http://www.w3.org/2000/svg";

function segmentRank(seg: AddressJson[number]): [number, number] {
  return "body" in seg ? [0, seg.body] : [1, seg.alt];
}

// Same ordering the server uses when it emits nodes
export function compareAddresses(a: AddressJson, b: AddressJson): number {
  const n = Math.min(a.length, b.length);
  for (let i = 0; i < n; i++) {
    const [ka, va] = segmentRank(a[i]!);
    const [kb, vb] = segmentRank(b[i]!);
    if (ka !== kb) return ka - kb;
    if (va !== vb) return va - vb;
  }
  return a.length - b.length;
}

function sortedNodes(view: ViewState): ViewNode[] {
  return [...view.diagram.nodes.values()].sort((a, b) =>
    compareAddresses(a.address, b.address),
  );
}

function parentKey(key: string): string | null {
  if (key === "") return null;
  const dot = key.lastIndexOf(".");
  return dot === -1 ? "" : key.slice(0, dot);
}

interface Connector {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

// Connectors are derived from the parent/child structure the addresses
// encode: body goals chain rightward from their parent, alternatives hang
// on one line dropping from the goal's bottom-left corner.
export function connectors(view: ViewState): Connector[] {
  const boxH = view.diagram.constants?.box_height ?? 24;
  const mid = Math.floor(boxH / 2);
  const bodyKids = new Map<string, ViewNode[]>();
  const altKids = new Map<string, ViewNode[]>();
  for (const node of view.diagram.nodes.values()) {
    const parent = parentKey(node.key);
    if (parent === null) continue;
    const last = node.address[node.address.length - 1]!;
    const bucket = "body" in last ? bodyKids : altKids;
    const list = bucket.get(parent);
    if (list) list.push(node);
    else bucket.set(parent, [node]);
  }
  const lines: Connector[] = [];
  for (const node of sortedNodes(view)) {
    const body = bodyKids.get(node.key);
    if (body) {
      body.sort((a, b) => compareAddresses(a.address, b.address));
      let prev = node;
      for (const child of body) {
        lines.push({
          x1: prev.x + prev.w,
          y1: prev.y + mid,
          x2: child.x,
          y2: child.y + mid,
        });
        prev = child;
      }
    }
    const alts = altKids.get(node.key);
    if (alts) {
      // visual order is the server's placement, not clause-id order
      const last = alts.reduce((a, b) => (b.y > a.y ? b : a));
      lines.push({
        x1: node.x,
        y1: node.y + node.h,
        x2: last.x,
        y2: last.y + mid,
      });
    }
  }
  return lines;
}

function setAttrs(el: Element, attrs: Record<string, string | number>): void {
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, String(v));
}

function buildBox(doc: Document, g: Element, node: ViewNode, fill: string): void {
  const rect = doc.createElementNS(SVG_NS, "rect");
  rect.setAttribute("class", "box");
  setAttrs(rect, {
    x: node.x,
    y: node.y,
    width: node.w,
    height: node.h,
    fill,
    stroke: STROKE,
    "stroke-width": 1,
  });
  if (node.kind === "Root" || node.kind === "ClauseHead") {
    rect.setAttribute("rx", "6");
  } else if (node.kind === "RecursiveGoal") {
    rect.setAttribute("stroke-dasharray", "5,3");
  }
  g.appendChild(rect);
  if (node.kind === "BuiltinGoal") {
    const inner = doc.createElementNS(SVG_NS, "rect");
    inner.setAttribute("class", "inner");
    setAttrs(inner, {
      x: node.x + 3,
      y: node.y + 3,
      width: node.w - 6,
      height: node.h - 6,
      fill: "none",
      stroke: STROKE,
      "stroke-width": 1,
    });
    g.appendChild(inner);
  }
  const text = doc.createElementNS(SVG_NS, "text");
  setAttrs(text, {
    x: node.x + Math.floor(node.w / 2),
    y: node.y + Math.floor(node.h / 2) + 4,
    "font-family": "monospace",
    "font-size": FONT_SIZE,
    "text-anchor": "middle",
    fill: "#000000",
  });
  text.textContent = node.label;
  g.appendChild(text);
  if (node.retracted) {
    const a = doc.createElementNS(SVG_NS, "line");
    setAttrs(a, {
      class: "cross",
      x1: node.x,
      y1: node.y,
      x2: node.x + node.w,
      y2: node.y + node.h,
      stroke: CROSS,
      "stroke-width": 2,
    });
    const b = doc.createElementNS(SVG_NS, "line");
    setAttrs(b, {
      class: "cross",
      x1: node.x,
      y1: node.y + node.h,
      x2: node.x + node.w,
      y2: node.y,
      stroke: CROSS,
      "stroke-width": 2,
    });
    g.appendChild(a);
    g.appendChild(b);
  }
}

// Reconciles the <svg> in place: node groups are keyed by address, so a
// patch updates existing groups rather than rebuilding the document.
export function renderDiagram(view: ViewState, svg: SVGSVGElement): void {
  const doc = svg.ownerDocument;
  const nodes = sortedNodes(view);
  if (nodes.length === 0) {
    svg.replaceChildren();
    return;
  }
  const rootX = view.diagram.constants?.root_x ?? 10;
  const rootY = view.diagram.constants?.root_y ?? 10;
  const width = Math.max(...nodes.map((n) => n.x + n.w)) + rootX;
  const height = Math.max(...nodes.map((n) => n.y + n.h)) + rootY;
  setAttrs(svg, { width, height, viewBox: `0 0 ${width} ${height}` });

  let lineLayer = svg.querySelector(":scope > g.connectors");
  if (!lineLayer) {
    lineLayer = doc.createElementNS(SVG_NS, "g");
    lineLayer.setAttribute("class", "connectors");
    svg.insertBefore(lineLayer, svg.firstChild);
  }
  lineLayer.replaceChildren();
  for (const c of connectors(view)) {
    const line = doc.createElementNS(SVG_NS, "line");
    setAttrs(line, { ...c, stroke: STROKE, "stroke-width": 1 });
    lineLayer.appendChild(line);
  }

  const seen = new Set<string>();
  for (const node of nodes) {
    seen.add(node.key);
    let g = svg.querySelector(`:scope > g[data-key="${node.key}"]`);
    if (!g) {
      g = doc.createElementNS(SVG_NS, "g");
      g.setAttribute("data-key", node.key);
      svg.appendChild(g);
    }
    g.setAttribute("data-kind", node.kind);
    g.replaceChildren();
    buildBox(doc, g, node, FILLS[stateOf(view, node.key)]);
  }
  for (const g of [...svg.querySelectorAll(":scope > g[data-key]")]) {
    if (!seen.has(g.getAttribute("data-key") ?? "")) g.remove();
  }
}
