"""Random-field pinning model: exact solver, Gibbs sampler, inequality audits."""

import json as _json

from ._pinfield import (
    Volume,
    Potential,
    DisorderModel,
    sample_disorder,
    exact_solution,
    gaussian_log_partition,
    estimate_observables,
    green_scan,
    infinite_volume_green_origin,
    extrapolate_green_origin,
    constants,
    overlap_bound,
    pinning_bound,
    gaussian_ibp,
    monotonicity,
    run_config,
    sha256_file,
    __version__,
)


def run(config):
    """Run a CLI-equivalent command from a dict or JSON text. Returns (status, message, outputs)."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return run_config(text)


def report(raw):
    """Parse the JSON line returned by the audit functions."""
    return _json.loads(raw)
