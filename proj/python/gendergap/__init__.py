"""Gender-gap analysis of commit metadata (Python front end to the C++ core)."""

from ._core import (  # noqa: F401
    ConfigError,
    InputError,
    RefData,
    exp_fit,
    gen_corpus,
    in_study_window,
    loess_smooth,
    majority,
    rejection_rule,
    run_pipeline,
    sanitize_author_name,
    tokenize_name,
)
