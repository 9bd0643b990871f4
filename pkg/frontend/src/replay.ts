// Pure fold of received protocol messages into view state. The scrub
// slider re-runs this fold over a prefix of the log, so history wants no
// extra bookkeeping: view = fold(messages[0..pos]).

import {
  addressKey,
  type AddressJson,
  type BindingsMsg,
  type DiagramFullMsg,
  type DiagramNodeJson,
  type DoneMsg,
  type PatchJson,
  type ServerMessage,
  type VisualState,
} from "./protocol.js";

export interface ViewNode {
  key: string;
  address: AddressJson;
  kind: DiagramNodeJson["kind"];
  label: string;
  x: number;
  y: number;
  w: number;
  h: number;
  retracted: boolean;
}

export interface DiagramModel {
  constants: DiagramFullMsg["constants"] | null;
  nodes: Map<string, ViewNode>;
}

export interface ViewState {
  diagram: DiagramModel;
  states: Map<string, VisualState>;
  bindings: BindingsMsg | null;
  output: string;
  done: DoneMsg | null;
  // true when the last message is an unanswered backtracking prompt
  promptOpen: boolean;
  errors: string[];
}

export function emptyView(): ViewState {
  return {
    diagram: { constants: null, nodes: new Map() },
    states: new Map(),
    bindings: null,
    output: "",
    done: null,
    promptOpen: false,
    errors: [],
  };
}

function toViewNode(n: DiagramNodeJson): ViewNode {
  return {
    key: addressKey(n.address),
    address: n.address,
    kind: n.kind,
    label: n.label,
    x: n.x,
    y: n.y,
    w: n.w,
    h: n.h,
    retracted: n.retracted,
  };
}

function applyFull(view: ViewState, msg: DiagramFullMsg): void {
  view.diagram = { constants: msg.constants, nodes: new Map() };
  for (const n of msg.nodes) {
    view.diagram.nodes.set(addressKey(n.address), toViewNode(n));
  }
  // a new diagram restarts the run: stale colors and output would be lies
  view.states = new Map();
  view.bindings = null;
  view.done = null;
  view.output = "";
}

function applyPatch(view: ViewState, patch: PatchJson): void {
  for (const n of patch.added) {
    view.diagram.nodes.set(addressKey(n.address), toViewNode(n));
  }
  for (const addr of patch.crossed) {
    const node = view.diagram.nodes.get(addressKey(addr));
    if (node) node.retracted = true;
  }
  for (const m of patch.moved) {
    const node = view.diagram.nodes.get(addressKey(m.address));
    if (node) {
      node.x = m.x;
      node.y = m.y;
    }
  }
}

export function foldMessages(messages: readonly ServerMessage[]): ViewState {
  const view = emptyView();
  for (const msg of messages) {
    view.promptOpen = false;
    switch (msg.kind) {
      case "DiagramFull":
        applyFull(view, msg);
        break;
      case "NodeState":
        view.states.set(addressKey(msg.address), msg.state);
        break;
      case "DiagramPatch":
        applyPatch(view, msg.patch);
        break;
      case "Bindings":
        view.bindings = msg;
        break;
      case "OutputText":
        view.output += msg.text;
        break;
      case "PromptBacktrack":
        view.promptOpen = true;
        break;
      case "Done":
        view.done = msg;
        break;
      case "Error":
        view.errors.push(msg.message);
        break;
    }
  }
  return view;
}

export function stateOf(view: ViewState, key: string): VisualState {
  return view.states.get(key) ?? "Untouched";
}
