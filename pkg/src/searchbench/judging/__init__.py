"""Model-generated relevance verdicts for (query, code entity) pairs."""

from searchbench.judging.batch import (
    BatchReport,
    judge_batch,
    read_batch_responses,
    write_batch_requests,
)
from searchbench.judging.client import JudgeClient, JudgeError
from searchbench.judging.engine import (
    JudgeVerdict,
    collapse_grade,
    judge_pair,
    parse_verdict,
)
from searchbench.judging.prompts import (
    GRADED_RELEVANCE_PROMPT,
    JudgeConfig,
    RenderedPrompt,
    render_prompt,
)
from searchbench.judging.runner import JudgeRunReport, judge_snapshots

__all__ = [
    "BatchReport",
    "GRADED_RELEVANCE_PROMPT",
    "JudgeClient",
    "JudgeConfig",
    "JudgeError",
    "JudgeRunReport",
    "JudgeVerdict",
    "RenderedPrompt",
    "collapse_grade",
    "judge_batch",
    "judge_pair",
    "judge_snapshots",
    "parse_verdict",
    "read_batch_responses",
    "render_prompt",
    "write_batch_requests",
]
