import assert from "node:assert/strict";
import { test } from "node:test";

import { ApiClient, FetchLike } from "../src/api.js";
import { AnnotationSession } from "../src/session.js";

/** Offline stub server covering the endpoints the session touches. */
function stubFetch(
    options: { failAnnotate?: boolean } = {},
): { fetchFn: FetchLike; annotatePosts: string[] } {
    const annotatePosts: string[] = [];
    const labels = new Map<string, { entity_id: string; label: 0 | 1 }>();
    const results = [1, 2, 3].map((rank) => ({
        entity_id: `e${rank}`,
        rank,
        score: 1 / rank,
        rel_path: `f${rank}.py`,
        function_name: `fn${rank}`,
        code: `def fn${rank}(): pass`,
        docstring: "",
    }));
    const fetchFn: FetchLike = async (input, init) => {
        const url = new URL(input);
        const respond = (body: unknown, status = 200) =>
            new Response(JSON.stringify(body), {
                status,
                headers: { "Content-Type": "application/json" },
            });
        if (url.pathname === "/repos") {
            return respond({ repos: [{ name: "r", language: "python", extensions: [".py"], commit: "" }] });
        }
        if (url.pathname === "/retrievers") {
            return respond({ retrievers: [{ name: "bm25", kind: "sparse_bm25", model_id: "", cutoff: 10 }] });
        }
        if (url.pathname === "/queries") {
            return respond({ queries: ["q one", "q two"] });
        }
        if (url.pathname === "/search") {
            return respond({ query_id: "qid-1", results });
        }
        if (url.pathname === "/annotations" && init?.method === "POST") {
            annotatePosts.push(String(init.body));
            if (options.failAnnotate) {
                return respond({ detail: "boom" }, 500);
            }
            const body = JSON.parse(String(init.body));
            labels.set(body.entity_id, { entity_id: body.entity_id, label: body.label });
            return respond({ ...body, timestamp_ms: 1, source: "human" });
        }
        if (url.pathname === "/annotations") {
            return respond({
                labels: [...labels.values()].map((l) => ({
                    annotator_id: "alice",
                    query_id: "qid-1",
                    entity_id: l.entity_id,
                    label: l.label,
                    timestamp_ms: 1,
                    source: "human",
                })),
            });
        }
        return respond({ detail: `unexpected ${url.pathname}` }, 404);
    };
    return { fetchFn, annotatePosts };
}

function makeSession(options: { failAnnotate?: boolean } = {}) {
    const { fetchFn, annotatePosts } = stubFetch(options);
    const api = new ApiClient("http://stub", fetchFn);
    return { session: new AnnotationSession(api, "alice"), annotatePosts };
}

test("init loads catalogs and picks defaults", async () => {
    const { session } = makeSession();
    await session.init();
    assert.deepEqual(session.queries, ["q one", "q two"]);
    assert.equal(session.selectedRepo, "r");
    assert.equal(session.selectedRetriever, "bm25");
});

test("every label click issues exactly one POST", async () => {
    const { session, annotatePosts } = makeSession();
    await session.init();
    await session.runSearch("q one");
    await session.setLabel("e1", 1);
    await session.setLabel("e1", 0); // correction: another single POST
    await session.setLabel("e2", 1);
    assert.equal(annotatePosts.length, 3);
});

test("failed POST rolls the optimistic label back", async () => {
    const { session } = makeSession({ failAnnotate: true });
    await session.init();
    await session.runSearch("q one");
    await assert.rejects(session.setLabel("e1", 1));
    assert.equal(session.labels.has("e1"), false);
});

test("failed POST on a correction restores the previous label", async () => {
    const { session } = makeSession();
    await session.init();
    await session.runSearch("q one");
    await session.setLabel("e1", 1);
    // flip the API into failure mode by swapping the fetch stub
    const failing = makeSession({ failAnnotate: true });
    await failing.session.init();
    await failing.session.runSearch("q one");
    failing.session.labels.set("e1", 1);
    await assert.rejects(failing.session.setLabel("e1", 0));
    assert.equal(failing.session.labels.get("e1"), 1);
});

test("query completeness requires every result labeled", async () => {
    const { session } = makeSession();
    await session.init();
    await session.runSearch("q one");
    assert.equal(session.isComplete(), false);
    await session.setLabel("e1", 1);
    await session.setLabel("e2", 0);
    assert.equal(session.isComplete(), false);
    await session.setLabel("e3", 0);
    assert.equal(session.isComplete(), true);
    assert.deepEqual(session.progress(), { labeled: 1, total: 2 });
});

test("free-text queries do not count toward predefined progress", async () => {
    const { session } = makeSession();
    await session.init();
    await session.runSearch("anything else entirely");
    await session.setLabel("e1", 1);
    await session.setLabel("e2", 1);
    await session.setLabel("e3", 1);
    assert.equal(session.isComplete(), true);
    assert.deepEqual(session.progress(), { labeled: 0, total: 2 });
});

test("switching retriever re-executes the same query text", async () => {
    const searchBodies: Array<{ query: string; retriever: string }> = [];
    const { fetchFn } = stubFetch();
    const recordingFetch: FetchLike = async (input, init) => {
        if (String(input).endsWith("/search")) {
            const body = JSON.parse(String(init?.body));
            searchBodies.push({ query: body.query, retriever: body.retriever });
        }
        return fetchFn(input, init);
    };
    const session = new AnnotationSession(
        new ApiClient("http://stub", recordingFetch),
        "alice",
    );
    await session.init();
    await session.runSearch("q one");
    session.selectedRetriever = "dense-x";
    await session.rerun();
    assert.equal(searchBodies.length, 2);
    assert.equal(searchBodies[0].query, "q one");
    assert.deepEqual(searchBodies[1], { query: "q one", retriever: "dense-x" });
});
