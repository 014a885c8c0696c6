/**
 * HTML rendering for panel and enhance-view states. Pure string builders
 * so they can be checked without a DOM; main.ts injects the results.
 */

import { CandidateRow, DiffCard, EnhanceViewState, PanelState } from "./panels.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(value: number): string {
  return value.toFixed(3);
}

export function renderCandidate(row: CandidateRow, index: number): string {
  const swap =
    row.verbBefore && row.verbAfter
      ? `<span class="swap">${esc(row.verbBefore)} → ${esc(row.verbAfter)}</span>`
      : "";
  return (
    `<li class="candidate" data-index="${index}">` +
    `<span class="text">${esc(row.text)}</span> ${swap}` +
    `<span class="badge nll" title="sequence negative log-likelihood">nll ${fmt(row.badges.nll)}</span>` +
    `<span class="badge disc" title="discriminator metaphoricity">met ${fmt(row.badges.disc)}</span>` +
    `<span class="badge sim" title="semantic similarity to the input">sim ${fmt(row.badges.similarity)}</span>` +
    `<button class="accept" data-index="${index}">accept</button>` +
    `</li>`
  );
}

export function renderPanel(state: PanelState): string {
  switch (state.kind) {
    case "idle":
      return `<p class="hint">select a line and ask for suggestions</p>`;
    case "disabled":
      return `<p class="hint disabled">${esc(state.reason)}</p>`;
    case "loading":
      return `<p class="hint">thinking…</p>`;
    case "error": {
      const retry = state.retryable ? `<button class="retry">retry</button>` : "";
      return `<p class="notice error">${esc(state.notice)}</p>${retry}`;
    }
    case "ready": {
      const items = state.rows.map(renderCandidate).join("");
      return (
        `<p class="hint">seed ${state.response.seed} · ` +
        `<button class="regenerate">regenerate</button></p>` +
        `<ol class="candidates">${items}</ol>`
      );
    }
  }
}

export function renderDiffCard(card: DiffCard): string {
  const rows = card.before
    .map((before, i) => {
      const after = card.after[i] ?? "";
      const changed = before !== after;
      return (
        `<tr class="${changed ? "changed" : ""}">` +
        `<td class="before">${esc(before)}</td>` +
        `<td class="after">${esc(after)}</td></tr>`
      );
    })
    .join("");
  const verbs =
    card.changed && card.verbBefore
      ? `<p class="swap">${esc(card.verbBefore)} → ${esc(card.verbAfter ?? "?")}</p>`
      : `<p class="swap none">no rewrite proposed</p>`;
  const approve = card.changed
    ? `<button class="approve" data-quatrain="${card.quatrainIndex}">approve</button>` +
      `<button class="reject" data-quatrain="${card.quatrainIndex}">reject</button>`
    : "";
  return (
    `<section class="diff-card" data-quatrain="${card.quatrainIndex}">` +
    `${verbs}<table><tbody>${rows}</tbody></table>${approve}</section>`
  );
}

export function renderEnhanceView(state: EnhanceViewState): string {
  switch (state.kind) {
    case "idle":
      return "";
    case "disabled":
      return `<p class="hint disabled">${esc(state.reason)}</p>`;
    case "loading":
      return `<p class="hint">rewriting…</p>`;
    case "error":
      return `<p class="notice error">${esc(state.notice)}</p>`;
    case "ready": {
      const cards = state.cards.map(renderDiffCard).join("");
      const dropped =
        state.droppedLines > 0
          ? `<p class="hint">${state.droppedLines} trailing line(s) not in a full stanza</p>`
          : "";
      return `${cards}${dropped}`;
    }
  }
}
