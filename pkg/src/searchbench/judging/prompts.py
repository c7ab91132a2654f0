"""Graded relevance prompt and its rendering.

The default prompt asks for a 0-3 relevance grade in the style popularized
by open-source reproductions of large-scale search relevance assessors, and
requests a structured JSON answer so parsing never depends on prose.
"""

from __future__ import annotations

from dataclasses import dataclass, field

QUERY_SLOT = "{query}"
PASSAGE_SLOT = "{passage}"

GRADED_RELEVANCE_PROMPT = """\
Given a query and a passage, you must provide a score on an integer scale \
of 0 to 3 with the following meanings:
0 = represents that the passage has nothing to do with the query,
1 = represents that the passage seems related to the query but does not \
answer it,
2 = represents that the passage has some answer for the query, but the \
answer may be a bit unclear, or hidden amongst extraneous information and
3 = represents that the passage is dedicated to the query and contains the \
exact answer.

Important Instruction: Assign category 1 if the passage is somewhat related \
to the topic but not completely, category 2 if passage presents something \
very important related to the entire topic but also has some extra \
information and category 3 if the passage only and entirely refers to the \
topic. If none of the above satisfies give it category 0.

Query: {query}
Passage: {passage}

Split this problem into steps:
Consider the underlying intent of the search.
Measure how well the content matches a likely intent of the query (M).
Measure how trustworthy the passage is (T).
Consider the aspects above and the relative importance of each, and decide \
on a final score (O). The final score must be an integer value only.

Respond with a JSON object of the form {"relevance": <score>} and nothing \
else.
"""

DEFAULT_PASSAGE_BUDGET = 12_000
PROVIDER_OPENAI_COMPAT = "openai_compat"
PROVIDER_BATCH_FILE = "batch_file"


@dataclass(frozen=True)
class JudgeConfig:
    model_id: str
    provider: str = PROVIDER_OPENAI_COMPAT
    prompt_template: str = GRADED_RELEVANCE_PROMPT
    max_retries: int = 3
    temperature: float = 0.0
    passage_char_budget: int = DEFAULT_PASSAGE_BUDGET
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.provider not in (PROVIDER_OPENAI_COMPAT, PROVIDER_BATCH_FILE):
            raise ValueError(f"unknown judge provider {self.provider!r}")
        validate_template(self.prompt_template)


def validate_template(template: str) -> None:
    """The template must contain each placeholder exactly once."""
    for slot in (QUERY_SLOT, PASSAGE_SLOT):
        count = template.count(slot)
        if count != 1:
            raise ValueError(
                f"prompt template must contain {slot} exactly once, found {count}"
            )


@dataclass(frozen=True)
class RenderedPrompt:
    text: str
    truncated: bool


def passage_text(docstring: str, code: str) -> str:
    """Docstring then code; no leading blank line when docs are absent."""
    if docstring:
        return f"{docstring}\n{code}"
    return code


def render_prompt(
    config: JudgeConfig,
    query: str,
    docstring: str,
    code: str,
) -> RenderedPrompt:
    """Substitute placeholders, truncating the passage to the char budget.

    Substitution is literal string replacement, so braces in code passages
    never interact with the template.
    """
    validate_template(config.prompt_template)
    passage = passage_text(docstring, code)
    truncated = len(passage) > config.passage_char_budget
    if truncated:
        passage = passage[: config.passage_char_budget]
    text = config.prompt_template.replace(QUERY_SLOT, query).replace(
        PASSAGE_SLOT, passage
    )
    return RenderedPrompt(text=text, truncated=truncated)
