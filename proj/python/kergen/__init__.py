"""Python front end for the kergen engine.

Every CLI subcommand is available through :func:`run`, which takes the same
fields as a manifest job and returns the parsed report.
"""

import json as _json

from ._kergen import (
    KergenError,
    commands,
    lyndon_count,
    lyndon_words,
    magnus_component,
    run_job_json,
    schema_version,
    tau,
    zassenhaus_membership,
)

__all__ = [
    "KergenError",
    "commands",
    "lyndon_count",
    "lyndon_words",
    "magnus_component",
    "run",
    "run_job",
    "schema_version",
    "tau",
    "zassenhaus_membership",
]


def run_job(job, jobs=1, budget_prefixes=None, cap_order=None):
    """Run a job dict (with a "command" key) and return the report dict."""
    kwargs = {"jobs": jobs}
    if budget_prefixes is not None:
        kwargs["budget_prefixes"] = budget_prefixes
    if cap_order is not None:
        kwargs["cap_order"] = cap_order
    return _json.loads(run_job_json(_json.dumps(job), **kwargs))


def run(command, **fields):
    """run("filtration", group="D4", p=2, kind="lower-central", upto=3)"""
    return run_job(dict(fields, command=command))
