/**
 * Browser bootstrap: wires the session to the page.
 *
 * The page reads everything from the API on load; reloading mid-session
 * reconstructs identical state from the server.
 */

import { ApiClient } from "./api.js";
import { renderOptions, renderProgress, renderQueryPicker, renderResults } from "./render.js";
import { AnnotationSession, Label } from "./session.js";

function el<T extends HTMLElement>(id: string): T {
    const found = document.getElementById(id);
    if (!found) {
        throw new Error(`missing element #${id}`);
    }
    return found as T;
}

function apiBase(): string {
    const params = new URLSearchParams(window.location.search);
    return params.get("api") ?? "http://localhost:8080";
}

function annotatorId(): string {
    const params = new URLSearchParams(window.location.search);
    const fromUrl = params.get("annotator");
    if (fromUrl) {
        localStorage.setItem("annotator_id", fromUrl);
        return fromUrl;
    }
    const stored = localStorage.getItem("annotator_id");
    if (stored) {
        return stored;
    }
    const entered = window.prompt("Annotator id:") || "anonymous";
    localStorage.setItem("annotator_id", entered);
    return entered;
}

async function start(): Promise<void> {
    const api = new ApiClient(apiBase());
    const session = new AnnotationSession(api, annotatorId());
    const statusEl = el<HTMLElement>("status");
    const resultsEl = el<HTMLElement>("results");
    const queriesEl = el<HTMLElement>("queries");
    const progressEl = el<HTMLElement>("progress");
    const searchBar = el<HTMLInputElement>("search-bar");
    const repoSelect = el<HTMLSelectElement>("repo-select");
    const retrieverSelect = el<HTMLSelectElement>("retriever-select");

    const setStatus = (text: string) => {
        statusEl.textContent = text;
    };

    const redraw = () => {
        resultsEl.innerHTML = renderResults(session.results, session.labels);
        queriesEl.innerHTML = renderQueryPicker(
            session.queries,
            session.completedQueries,
        );
        progressEl.innerHTML = renderProgress(session.progress());
    };

    try {
        await session.init();
    } catch (error) {
        setStatus(`cannot reach API at ${api.baseUrl}: ${error}`);
        return;
    }
    repoSelect.innerHTML = renderOptions(session.repos, session.selectedRepo);
    retrieverSelect.innerHTML = renderOptions(
        session.retrievers,
        session.selectedRetriever,
    );
    setStatus(`annotating as ${session.annotatorId}`);
    redraw();

    const runSearch = async (query: string) => {
        if (!query.trim()) {
            return;
        }
        setStatus("searching…");
        try {
            await session.runSearch(query);
            setStatus(
                `${session.results.length} results for the active query`,
            );
        } catch (error) {
            setStatus(`search failed: ${error}`);
        }
        redraw();
    };

    el<HTMLFormElement>("search-form").addEventListener("submit", (event) => {
        event.preventDefault();
        void runSearch(searchBar.value);
    });

    // Picking a predefined query injects the byte-exact string.
    queriesEl.addEventListener("click", (event) => {
        const target = (event.target as HTMLElement).closest<HTMLElement>(
            ".query-pick",
        );
        if (!target) {
            return;
        }
        const index = Number(target.dataset.queryIndex);
        searchBar.value = session.queries[index];
        void runSearch(searchBar.value);
    });

    repoSelect.addEventListener("change", () => {
        session.selectedRepo = repoSelect.value;
        void session.rerun().then(redraw);
    });

    // Switching retriever re-executes the same query text on the new index.
    retrieverSelect.addEventListener("change", () => {
        session.selectedRetriever = retrieverSelect.value;
        void session.rerun().then(redraw);
    });

    // One click = one POST; rollback on failure happens inside setLabel.
    resultsEl.addEventListener("click", (event) => {
        const button = (event.target as HTMLElement).closest<HTMLElement>(
            ".label-btn",
        );
        if (!button) {
            return;
        }
        const card = button.closest<HTMLElement>(".result-card");
        if (!card) {
            return;
        }
        const entityId = card.dataset.entityId!;
        const label = Number(button.dataset.label) as Label;
        session
            .setLabel(entityId, label)
            .catch((error) => setStatus(`label write failed: ${error}`))
            .finally(redraw);
    });
}

void start();
