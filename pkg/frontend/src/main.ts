// Browser entry point: connect the WebSocket and wire the App to it.

import { App } from "./app.js";

const SAMPLE_PROGRAM = `f :- g, !, h, fail.
f.
g :- write(a),nl.
g :- write(b),nl.
h.
`;

function connect(): void {
  const scheme = location.protocol === "https:" ? "wss" : "ws";
  const ws = new WebSocket(`${scheme}://${location.host}/session`);
  const app = new App(document, { send: (d) => ws.send(d) });

  ws.onmessage = (ev) => app.onMessage(String(ev.data));
  ws.onclose = () => {
    app.banner = "connection closed; reload the page to reconnect";
    app.render();
  };
  ws.onerror = () => {
    app.banner = "websocket error";
    app.render();
  };

  const program = document.getElementById("program") as HTMLTextAreaElement | null;
  if (program && !program.value) program.value = SAMPLE_PROGRAM;
  const query = document.getElementById("query") as HTMLInputElement | null;
  if (query && !query.value) query.value = "f.";
}

connect();
