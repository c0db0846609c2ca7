"""Profiler-trace analysis: call trees, workload taxonomy, roofline estimates.

The heavy lifting lives in the compiled extension; this package re-exports
it and adds one convenience wrapper for the common path.
"""

from tracelens._core import *  # noqa: F401,F403
from tracelens._core import (
    __version__,
    aggregate,
    builtin_rules,
    classify_all,
    flatten_trace,
    read_trace,
)


def breakdown_of(path, rules="builtin:ml8", clip=False):
    """Read a trace file and return its per-category Breakdown.

    `rules` is "builtin:<name>" or the text of a rule file.
    """
    from tracelens import _core

    if rules.startswith("builtin:"):
        ruleset = builtin_rules(rules[len("builtin:"):])
    else:
        ruleset = _core.load_rules(rules)
    trace = read_trace(path)
    records, _ = classify_all(flatten_trace(trace, clip), ruleset)
    return aggregate(records, ruleset.taxonomy(), trace.label)
