// The session view: one WebSocket, a message log, and DOM panels that are
// all recomputed from the log. Control actions turn into protocol
// requests; the backtracking prompt opens a modal that blocks further
// actions (they queue, they are never dropped) until yes or no is chosen.

import {
  answerBacktrack,
  loadProgram,
  parseServerMessage,
  reset,
  run,
  setQuery,
  step,
  type ServerMessage,
} from "./protocol.js";
import { addressKey } from "./protocol.js";
import { foldMessages, type ViewState } from "./replay.js";
import { renderDiagram } from "./render.js";

export type Action =
  | { type: "go" }
  | { type: "run" }
  | { type: "reset" }
  | { type: "load"; program: string; query: string }
  | { type: "answer"; more: boolean }
  | { type: "scrub"; pos: number }
  | { type: "live" };

export interface Transport {
  send(data: string): void;
}

type ModalPhase = "closed" | "open" | "answering";

export class App {
  log: ServerMessage[] = [];
  // null renders the live end of the log; a number is a history position
  scrubPos: number | null = null;
  modal: ModalPhase = "closed";
  queue: object[] = [];
  banner: string | null = null;

  constructor(
    private doc: Document,
    private transport: Transport,
  ) {
    this.bindControls();
  }

  private el<T extends HTMLElement>(id: string): T | null {
    return this.doc.getElementById(id) as T | null;
  }

  private bindControls(): void {
    this.el("go")?.addEventListener("click", () => this.dispatch({ type: "go" }));
    this.el("run")?.addEventListener("click", () => this.dispatch({ type: "run" }));
    this.el("reset")?.addEventListener("click", () => this.dispatch({ type: "reset" }));
    this.el("load")?.addEventListener("click", () => {
      const program = this.el<HTMLTextAreaElement>("program")?.value ?? "";
      const query = this.el<HTMLInputElement>("query")?.value ?? "";
      this.dispatch({ type: "load", program, query });
    });
    this.el("modal-yes")?.addEventListener("click", () =>
      this.dispatch({ type: "answer", more: true }),
    );
    this.el("modal-no")?.addEventListener("click", () =>
      this.dispatch({ type: "answer", more: false }),
    );
    this.el("banner-close")?.addEventListener("click", () => {
      this.banner = null;
      this.render();
    });
    this.el<HTMLInputElement>("scrub")?.addEventListener("input", (ev) => {
      const pos = Number((ev.target as HTMLInputElement).value);
      this.dispatch({ type: "scrub", pos });
    });
  }

  onMessage(raw: string): void {
    let msg: ServerMessage;
    try {
      msg = parseServerMessage(raw);
    } catch (e) {
      // malformed traffic is reported, the connection stays up
      this.banner = (e as Error).message;
      this.render();
      return;
    }
    this.log.push(msg);
    if (msg.kind === "Error") {
      this.banner = msg.message;
    }
    if (msg.kind === "PromptBacktrack") {
      this.modal = "open";
    } else if (this.modal === "answering") {
      // the answer got its first response, the prompt is settled
      this.modal = "closed";
      this.flushQueue();
    }
    this.render();
  }

  dispatch(action: Action): void {
    switch (action.type) {
      case "go":
        this.request(step());
        return;
      case "run":
        this.request(run());
        return;
      case "reset":
        this.request(reset());
        return;
      case "load":
        this.request(loadProgram(action.program));
        this.request(setQuery(action.query));
        return;
      case "answer":
        if (this.modal !== "open") return;
        this.modal = "answering";
        this.send(answerBacktrack(action.more));
        this.render();
        return;
      case "scrub": {
        const pos = Math.max(0, Math.min(action.pos, this.log.length));
        this.scrubPos = pos >= this.log.length ? null : pos;
        this.render();
        return;
      }
      case "live":
        this.scrubPos = null;
        this.render();
        return;
    }
  }

  // Requests go out immediately unless the prompt modal is up; then they
  // wait in order for the answer.
  private request(req: object): void {
    this.scrubPos = null;
    if (this.modal !== "closed") {
      this.queue.push(req);
      this.render();
      return;
    }
    this.send(req);
    this.render();
  }

  private flushQueue(): void {
    const pending = this.queue;
    this.queue = [];
    for (const req of pending) this.send(req);
  }

  private send(req: object): void {
    this.transport.send(JSON.stringify(req));
  }

  view(): ViewState {
    const upto = this.scrubPos ?? this.log.length;
    const view = foldMessages(this.log.slice(0, upto));
    if (view.diagram.nodes.size === 0) {
      // scrubbed before the diagram arrived: show it untouched rather
      // than an empty canvas
      const full = this.log.find((m) => m.kind === "DiagramFull");
      if (full) return foldMessages([full]);
    }
    return view;
  }

  render(): void {
    const view = this.view();
    const svg = this.doc.querySelector<SVGSVGElement>("svg#canvas");
    if (svg) renderDiagram(view, svg);
    this.renderBindings(view);
    this.renderPanels(view);
  }

  private renderBindings(view: ViewState): void {
    const tbody = this.el("bindings");
    if (!tbody) return;
    tbody.replaceChildren();
    if (!view.bindings) return;
    const nodeId = addressKey(view.bindings.address) || "root";
    for (const [name, value] of view.bindings.vars) {
      const tr = this.doc.createElement("tr");
      for (const cell of [nodeId, name, value]) {
        const td = this.doc.createElement("td");
        td.textContent = cell;
        tr.appendChild(td);
      }
      tbody.appendChild(tr);
    }
  }

  private renderPanels(view: ViewState): void {
    const output = this.el("output");
    if (output) output.textContent = view.output;

    const banner = this.el("banner");
    if (banner) {
      const text = this.banner ?? view.errors[view.errors.length - 1] ?? null;
      banner.hidden = text === null;
      const span = this.el("banner-text");
      if (span) span.textContent = text ?? "";
    }

    const modal = this.el("modal");
    if (modal) modal.hidden = this.modal !== "open" || this.scrubPos !== null;

    const status = this.el("status");
    if (status) {
      if (this.scrubPos !== null) {
        status.textContent = `history ${this.scrubPos}/${this.log.length}`;
      } else if (view.done) {
        const tail = view.done.text ? ` (${view.done.text})` : "";
        status.textContent = view.done.success
          ? `done: success, ${view.done.solutions} solution(s)${tail}`
          : `done: failure${tail}`;
      } else if (this.modal !== "closed") {
        status.textContent = "backtrack?";
      } else {
        status.textContent = this.log.length ? "running" : "not connected to a run";
      }
    }

    const scrub = this.el<HTMLInputElement>("scrub");
    if (scrub) {
      scrub.max = String(this.log.length);
      scrub.value = String(this.scrubPos ?? this.log.length);
    }
  }
}
