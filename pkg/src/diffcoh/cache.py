"""On-disk memo of complex reductions keyed by content hash.

The location comes from ``DIFFCOH_CACHE``; without it, and unless the CLI
enables its default directory, nothing is written to disk.
"""

from __future__ import annotations

import os
import pickle
import tempfile
from pathlib import Path

FORMAT = 1

_settings = {"enabled": None, "directory": None}


def configure(enabled: bool | None = None, directory: str | os.PathLike | None = None) -> None:
    if enabled is not None:
        _settings["enabled"] = enabled
    if directory is not None:
        _settings["directory"] = Path(directory)


def default_directory() -> Path:
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "diffcoh"


def cache_directory() -> Path | None:
    if _settings["enabled"] is False:
        return None
    env = os.environ.get("DIFFCOH_CACHE")
    if env:
        return Path(env)
    if _settings["enabled"]:
        return _settings["directory"] or default_directory()
    return None


def _path(key: str) -> Path | None:
    d = cache_directory()
    if d is None:
        return None
    return d / f"reduction-v{FORMAT}-{key}.pkl"


def load(key: str):
    p = _path(key)
    if p is None or not p.exists():
        return None
    try:
        with open(p, "rb") as fh:
            payload = pickle.load(fh)
    except (OSError, pickle.UnpicklingError, EOFError):
        return None
    if payload.get("format") != FORMAT or payload.get("key") != key:
        return None
    return payload["state"]


def store(key: str, state) -> None:
    p = _path(key)
    if p is None:
        return
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-")
        with os.fdopen(fd, "wb") as fh:
            pickle.dump({"format": FORMAT, "key": key, "state": state}, fh, protocol=pickle.HIGHEST_PROTOCOL)
        os.replace(tmp, p)
    except OSError:
        pass
