/**
 * Annotation session state, DOM-free.
 *
 * A query is complete only when every returned result carries a label from
 * this annotator. Label writes are optimistic (the UI flips immediately) and
 * roll back if the POST fails; each click issues exactly one POST so every
 * correction gets its own timestamp.
 */

import { ApiClient, SearchResult } from "./api.js";

export type Label = 0 | 1;

export interface Progress {
    labeled: number;
    total: number;
}

export class AnnotationSession {
    repos: string[] = [];
    retrievers: string[] = [];
    queries: string[] = [];

    selectedRepo = "";
    selectedRetriever = "";
    activeQuery: string | null = null;
    queryId: string | null = null;
    results: SearchResult[] = [];
    labels = new Map<string, Label>();
    completedQueries = new Set<string>();

    constructor(
        private readonly api: ApiClient,
        readonly annotatorId: string,
    ) {}

    /** Load catalogs and the predefined query list; pick defaults. */
    async init(): Promise<void> {
        const [repos, retrievers, queries] = await Promise.all([
            this.api.repos(),
            this.api.retrievers(),
            this.api.queries(),
        ]);
        this.repos = repos.map((r) => r.name);
        this.retrievers = retrievers.map((r) => r.name);
        this.queries = queries;
        if (!this.selectedRepo && this.repos.length > 0) {
            this.selectedRepo = this.repos[0];
        }
        if (!this.selectedRetriever && this.retrievers.length > 0) {
            this.selectedRetriever = this.retrievers[0];
        }
    }

    /**
     * Execute a query and rebuild label state from the server, never from
     * anything cached locally.
     */
    async runSearch(query: string): Promise<void> {
        const response = await this.api.search(
            query,
            this.selectedRepo,
            this.selectedRetriever,
        );
        this.activeQuery = query;
        this.queryId = response.query_id;
        this.results = response.results;
        this.labels = new Map();
        const records = await this.api.annotations(response.query_id, this.annotatorId);
        for (const record of records) {
            this.labels.set(record.entity_id, record.label);
        }
        this.refreshCompletion();
    }

    /** Re-run the active query (e.g. after switching retriever). */
    async rerun(): Promise<void> {
        if (this.activeQuery !== null) {
            await this.runSearch(this.activeQuery);
        }
    }

    /**
     * One click, one POST. The label flips optimistically and reverts when
     * the write fails.
     */
    async setLabel(entityId: string, label: Label): Promise<void> {
        if (this.queryId === null) {
            throw new Error("no active query");
        }
        const previous = this.labels.get(entityId);
        this.labels.set(entityId, label);
        try {
            await this.api.annotate(this.queryId, entityId, label, this.annotatorId);
        } catch (error) {
            if (previous === undefined) {
                this.labels.delete(entityId);
            } else {
                this.labels.set(entityId, previous);
            }
            throw error;
        }
        this.refreshCompletion();
    }

    /** All returned results labeled? (Unlabeled results block completion.) */
    isComplete(): boolean {
        return (
            this.results.length > 0 &&
            this.results.every((r) => this.labels.has(r.entity_id))
        );
    }

    private refreshCompletion(): void {
        if (this.activeQuery === null) {
            return;
        }
        if (this.queries.includes(this.activeQuery)) {
            if (this.isComplete()) {
                this.completedQueries.add(this.activeQuery);
            } else {
                this.completedQueries.delete(this.activeQuery);
            }
        }
    }

    /**
     * Predefined-list progress, recomputed entirely from the API: a query
     * counts once every one of its results carries this annotator's label.
     * Searches are idempotent snapshots, so probing every query is safe.
     */
    async refreshProgress(): Promise<Progress> {
        this.completedQueries = new Set();
        for (const query of this.queries) {
            const response = await this.api.search(
                query,
                this.selectedRepo,
                this.selectedRetriever,
            );
            if (response.results.length === 0) {
                continue;
            }
            const records = await this.api.annotations(
                response.query_id,
                this.annotatorId,
            );
            const labeled = new Set(records.map((r) => r.entity_id));
            if (response.results.every((r) => labeled.has(r.entity_id))) {
                this.completedQueries.add(query);
            }
        }
        return this.progress();
    }

    progress(): Progress {
        return {
            labeled: this.completedQueries.size,
            total: this.queries.length,
        };
    }
}
