"""Model checker for alternation-free coalgebraic fixpoint logics.

Thin wrapper around the compiled _cofix extension. The heavy lifting --
parsing, fixpoint evaluation, oracles -- is all C++; see the project README
for the model JSON schema and the formula grammar.
"""

try:
    from cofix._cofix import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _cofix import *  # noqa: F401,F403  (in-build layout)

__all__ = [
    "eval_least",
    "eval_initial",
    "check",
    "oracle_compare",
    "normalize",
    "parse_print",
    "translate_mu",
    "check_invariance",
    "random_model",
    "UserError",
]
