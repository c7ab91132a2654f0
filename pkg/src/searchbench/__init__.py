"""Function-level code search workbench.

Ingests repositories into a function-level corpus, serves ranked search
results under interchangeable sparse/dense retrievers, collects human and
model-generated relevance labels, computes agreement metrics between label
sources, and bootstraps cross-language benchmarks by deterministic
source-to-source transpilation.
"""

__version__ = "0.1.0"
