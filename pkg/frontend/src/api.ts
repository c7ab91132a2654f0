/**
 * Typed client for the searchbench HTTP API.
 *
 * The UI owns no authoritative state: every read goes through these calls,
 * so reloading the page and re-fetching reconstructs the exact session.
 */

export interface RepoInfo {
    name: string;
    language: string;
    extensions: string[];
    commit: string;
}

export interface RetrieverInfo {
    name: string;
    kind: string;
    model_id: string;
    cutoff: number;
}

export interface SearchResult {
    entity_id: string;
    rank: number;
    score: number;
    rel_path: string;
    function_name: string;
    code: string;
    docstring: string;
}

export interface SearchResponse {
    query_id: string;
    results: SearchResult[];
}

export interface AnnotationRecord {
    annotator_id: string;
    query_id: string;
    entity_id: string;
    label: 0 | 1;
    timestamp_ms: number;
    source: string;
}

export class ApiError extends Error {
    constructor(readonly status: number, message: string) {
        super(message);
        this.name = "ApiError";
    }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
    constructor(
        readonly baseUrl: string,
        private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    ) {}

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
        if (!response.ok) {
            let detail = response.statusText;
            try {
                const body = await response.json();
                detail = body.detail ?? body.error ?? detail;
            } catch {
                // non-JSON error body; keep the status text
            }
            throw new ApiError(response.status, detail);
        }
        return (await response.json()) as T;
    }

    async repos(): Promise<RepoInfo[]> {
        const body = await this.request<{ repos: RepoInfo[] }>("/repos");
        return body.repos;
    }

    async retrievers(): Promise<RetrieverInfo[]> {
        const body = await this.request<{ retrievers: RetrieverInfo[] }>("/retrievers");
        return body.retrievers;
    }

    /** The predefined query list, byte-exact as served. */
    async queries(): Promise<string[]> {
        const body = await this.request<{ queries: string[] }>("/queries");
        return body.queries;
    }

    async search(query: string, repo: string, retriever: string): Promise<SearchResponse> {
        return this.request<SearchResponse>("/search", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ query, repo, retriever }),
        });
    }

    async annotate(
        queryId: string,
        entityId: string,
        label: 0 | 1,
        annotatorId: string,
    ): Promise<AnnotationRecord> {
        return this.request<AnnotationRecord>("/annotations", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({
                query_id: queryId,
                entity_id: entityId,
                label,
                annotator_id: annotatorId,
            }),
        });
    }

    async annotations(queryId: string, annotatorId?: string): Promise<AnnotationRecord[]> {
        const params = new URLSearchParams({ query_id: queryId });
        if (annotatorId) {
            params.set("annotator_id", annotatorId);
        }
        const body = await this.request<{ labels: AnnotationRecord[] }>(
            `/annotations?${params.toString()}`,
        );
        return body.labels;
    }
}
