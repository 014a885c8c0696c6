/**
 * Browser entry point: wires the editor textarea, the per-line suggestion
 * panel, and the enhance view against a running service.
 */

import { ApiClient } from "./api.js";
import { EditorState } from "./editor.js";
import { EnhanceView, SuggestionPanel } from "./panels.js";
import { renderEnhanceView, renderPanel } from "./render.js";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ??
  "http://127.0.0.1:8000";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

function currentLineIndex(textarea: HTMLTextAreaElement): number {
  return textarea.value.slice(0, textarea.selectionStart).split("\n").length - 1;
}

function main() {
  const api = new ApiClient(SERVICE_URL);
  const textarea = byId<HTMLTextAreaElement>("doc");
  const panelHost = byId<HTMLDivElement>("panel");
  const enhanceHost = byId<HTMLDivElement>("enhance");
  const historyHost = byId<HTMLDivElement>("history");

  let editor = new EditorState(textarea.value);
  const panel = new SuggestionPanel(api);
  const enhance = new EnhanceView(api);
  let panelLine = 0;

  const syncFromEditor = () => {
    textarea.value = editor.document;
    historyHost.textContent = `${editor.history.length} accepted change(s); Ctrl+Z-style undo below`;
  };

  const drawPanel = () => {
    panelHost.innerHTML = renderPanel(panel.state);
    panelHost.querySelectorAll<HTMLButtonElement>("button.accept").forEach((btn) =>
      btn.addEventListener("click", () => {
        if (panel.state.kind !== "ready") return;
        const row = panel.state.rows[Number(btn.dataset.index)];
        if (!row) return;
        panel.accept(editor, panelLine, row);
        syncFromEditor();
      }),
    );
    panelHost.querySelector<HTMLButtonElement>("button.regenerate")
      ?.addEventListener("click", async () => {
        await panel.regenerate(editor.getLine(panelLine), Date.now() % 2 ** 31);
        drawPanel();
      });
    panelHost.querySelector<HTMLButtonElement>("button.retry")
      ?.addEventListener("click", async () => {
        await panel.requestSuggestions(editor.getLine(panelLine));
        drawPanel();
      });
  };

  const drawEnhance = () => {
    enhanceHost.innerHTML = renderEnhanceView(enhance.state);
    enhanceHost.querySelectorAll<HTMLButtonElement>("button.approve").forEach((btn) =>
      btn.addEventListener("click", () => {
        if (enhance.state.kind !== "ready") return;
        const card = enhance.state.cards[Number(btn.dataset.quatrain)];
        if (!card) return;
        enhance.approve(editor, card);
        syncFromEditor();
        btn.closest("section")?.classList.add("applied");
      }),
    );
    enhanceHost.querySelectorAll<HTMLButtonElement>("button.reject").forEach((btn) =>
      btn.addEventListener("click", () =>
        btn.closest("section")?.classList.add("rejected"),
      ),
    );
  };

  textarea.addEventListener("input", () => {
    editor = new EditorState(textarea.value);
    historyHost.textContent = "history reset by manual edit";
  });

  byId<HTMLButtonElement>("suggest-btn").addEventListener("click", async () => {
    panelLine = currentLineIndex(textarea);
    await panel.requestSuggestions(editor.getLine(panelLine));
    drawPanel();
  });

  byId<HTMLButtonElement>("undo-btn").addEventListener("click", () => {
    editor.undo();
    syncFromEditor();
  });

  byId<HTMLButtonElement>("enhance-btn").addEventListener("click", async () => {
    await enhance.load(editor.document);
    drawEnhance();
  });

  void api.health().then(
    (h) => (byId("status").textContent = `service: ${h.status}`),
    () => (byId("status").textContent = "service: unreachable"),
  );
}

main();
