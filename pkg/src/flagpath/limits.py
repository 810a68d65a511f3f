"""Desk-scale ceilings for the brute-force routines.

Each exhaustive routine refuses inputs above its ceiling with
:class:`~flagpath.errors.GroundTooLarge`.  The environment variable
``FLAGPATH_LIMIT`` overrides every default at once; an explicit ``limit=``
argument beats both.
"""

import os

from .errors import GroundTooLarge

DEFAULTS = {
    "flats": 16,
    "exchange": 16,
    "flag": 16,
    "bfs": 12,
    "family": 12,
    "diagram_bfm": 60,
    "diagram_paths": 15,
    "filter": 12,
}

ENV_VAR = "FLAGPATH_LIMIT"


def resolve(name, override=None):
    if override is not None:
        return int(override)
    env = os.environ.get(ENV_VAR)
    if env:
        return int(env)
    return DEFAULTS[name]


def check(name, size, override=None):
    cap = resolve(name, override)
    if size > cap:
        raise GroundTooLarge(f"{name}: size {size} exceeds limit {cap}")
