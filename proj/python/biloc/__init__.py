"""Python front end for the bilocality toolkit."""

import json

from ._biloc import *  # noqa: F401,F403
from ._biloc import __version__, heuristic_search as _heuristic_search, certify as _certify


def search(correlation, restarts=64, seed=0):
    return json.loads(_heuristic_search(correlation, restarts, seed))


def certify(correlation, **kw):
    return json.loads(_certify(correlation, **kw))
