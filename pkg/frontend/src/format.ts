// Pure rendering helpers. Every number shown comes straight from the API
// payload; the only client-side arithmetic is fixed 1-decimal rounding of
// percentages and bar widths.

import type { DiagnosisView, HistoryItem } from "./types";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function formatPercent(probability: number): string {
  return (probability * 100).toFixed(1) + "%";
}

export function diagnosisLabel(axiomIds: string[]): string {
  return axiomIds.length ? `{${axiomIds.join(", ")}}` : "(no fault)";
}

export function sortDiagnoses(diagnoses: DiagnosisView[]): DiagnosisView[] {
  return [...diagnoses].sort((a, b) =>
    b.probability - a.probability ||
    a.axiom_ids.join(",").localeCompare(b.axiom_ids.join(",")));
}

/** Descending probability bars with a threshold marker at sigma. */
export function renderBars(diagnoses: DiagnosisView[], sigma: number): string {
  if (!diagnoses.length) {
    return `<p class="placeholder">no diagnoses</p>`;
  }
  const rows = sortDiagnoses(diagnoses).map((d) => {
    const pct = formatPercent(d.probability);
    const width = (d.probability * 100).toFixed(1);
    return `
      <div class="bar-row">
        <span class="bar-label">${escapeHtml(diagnosisLabel(d.axiom_ids))}</span>
        <span class="bar-track">
          <span class="bar-fill" style="width:${width}%"></span>
          <span class="bar-threshold" style="left:${(sigma * 100).toFixed(1)}%"></span>
        </span>
        <span class="bar-pct">${pct}</span>
      </div>`;
  });
  return rows.join("");
}

export function renderQueryCard(sentences: string[], busy: boolean): string {
  const items = sentences
    .map((s) => `<li><code>${escapeHtml(s)}</code></li>`)
    .join("");
  const disabled = busy ? "disabled" : "";
  return `
    <div class="query-card">
      <p>Should the intended knowledge base entail:</p>
      <ul>${items}</ul>
      <div class="answer-buttons">
        <button data-action="answer-yes" ${disabled}>Yes</button>
        <button data-action="answer-no" ${disabled}>No</button>
      </div>
    </div>`;
}

export function renderHistory(history: HistoryItem[]): string {
  if (!history.length) {
    return "";
  }
  const rows = history
    .map((item, i) =>
      `<li>q${i + 1}: <code>${escapeHtml(item.sentences.join(", "))}</code>` +
      ` &rarr; <strong>${item.answer}</strong></li>`)
    .join("");
  return `<h3>answers so far</h3><ol class="history">${rows}</ol>`;
}

/** KB text with the given axiom ids highlighted (display only; the server
 * owns all reasoning). */
export function renderKbText(kbText: string, highlightIds: string[]): string {
  const wanted = new Set(highlightIds);
  return kbText
    .split("\n")
    .map((line) => {
      const match = /^\s*([A-Za-z_][A-Za-z0-9_]*)\s*:/.exec(line);
      const escaped = escapeHtml(line);
      if (match && wanted.has(match[1]!)) {
        return `<mark class="faulty">${escaped}</mark>`;
      }
      return escaped;
    })
    .join("\n");
}
