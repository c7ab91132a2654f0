/**
 * HTML renderers. Pure string-in/string-out so they test without a DOM.
 *
 * Cards keep rank order top to bottom. A result with no label yet is
 * visually flagged and neither toggle is pre-selected: "not relevant" is a
 * human decision, not a default form value.
 */

import { SearchResult } from "./api.js";
import { escapeHtml, highlight } from "./highlight.js";
import { Label, Progress } from "./session.js";

export function renderResultCard(
    result: SearchResult,
    label: Label | undefined,
): string {
    const unlabeled = label === undefined;
    const docsSection = result.docstring
        ? `<div class="card-docs">${escapeHtml(result.docstring)}</div>`
        : "";
    return `<article class="result-card${unlabeled ? " unlabeled" : ""}" ` +
        `data-entity-id="${escapeHtml(result.entity_id)}" data-rank="${result.rank}">
  <header class="card-header">
    <span class="card-rank">#${result.rank}</span>
    <span class="card-function">${escapeHtml(result.function_name)}</span>
    <span class="card-path">${escapeHtml(result.rel_path)}</span>
    <span class="card-score">${result.score.toFixed(4)}</span>
  </header>
  ${docsSection}
  <pre class="card-code"><code>${highlight(result.code)}</code></pre>
  <footer class="card-labels">
    <button class="label-btn relevant${label === 1 ? " selected" : ""}" ` +
        `data-label="1" aria-pressed="${label === 1}">relevant</button>
    <button class="label-btn not-relevant${label === 0 ? " selected" : ""}" ` +
        `data-label="0" aria-pressed="${label === 0}">not relevant</button>
    ${unlabeled ? '<span class="needs-label">needs label</span>' : ""}
  </footer>
</article>`;
}

export function renderResults(
    results: SearchResult[],
    labels: Map<string, Label>,
): string {
    if (results.length === 0) {
        return '<p class="empty-results">No results.</p>';
    }
    return results
        .map((result) => renderResultCard(result, labels.get(result.entity_id)))
        .join("\n");
}

export function renderQueryPicker(
    queries: string[],
    completed: Set<string>,
): string {
    const items = queries
        .map((query, index) => {
            const done = completed.has(query);
            return `<li class="query-item${done ? " done" : ""}" data-query-index="${index}">` +
                `<button class="query-pick" data-query-index="${index}">` +
                `${escapeHtml(query)}</button>${done ? " ✓" : ""}</li>`;
        })
        .join("\n");
    return `<ol class="query-list">\n${items}\n</ol>`;
}

export function renderProgress(progress: Progress): string {
    return `<span class="progress">${progress.labeled} / ${progress.total} queries fully labeled</span>`;
}

export function renderOptions(names: string[], selected: string): string {
    return names
        .map((name) => {
            const sel = name === selected ? " selected" : "";
            return `<option value="${escapeHtml(name)}"${sel}>${escapeHtml(name)}</option>`;
        })
        .join("");
}
