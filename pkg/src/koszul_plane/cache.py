"""Content-addressed result cache with integrity digests and atomic writes."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, field
from typing import Optional

log = logging.getLogger("koszul_plane")


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cache_key(input_digest: str, command: dict) -> str:
    blob = json.dumps({"input": input_digest, "command": command}, sort_keys=True)
    return sha256_text(blob)


@dataclass
class RunManifest:
    tool_version: str
    input_digest: str
    primes: list[int]
    seed: int
    command: dict
    timings: dict = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    cache: str = "off"

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


class ResultCache:
    """Stores rendered outputs keyed by (input digest, command).

    Each entry carries the sha256 of its payload; entries whose digest does
    not match are reported and treated as misses.
    """

    def __init__(self, directory: Optional[str]):
        self.directory = directory
        self.enabled = directory is not None
        if self.enabled:
            try:
                os.makedirs(directory, exist_ok=True)
                probe = os.path.join(directory, ".probe")
                atomic_write(probe, "ok")
                os.unlink(probe)
            except OSError as e:
                log.warning("cache directory %s is not writable (%s); caching disabled", directory, e)
                self.enabled = False

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, f"{key}.json")

    def lookup(self, key: str) -> Optional[dict]:
        """Return {"payload", "exit_code"} on a verified hit, else None."""
        if not self.enabled:
            return None
        path = self._path(key)
        if not os.path.exists(path):
            return None
        try:
            with open(path, encoding="utf-8") as fh:
                env = json.load(fh)
            payload = env["payload"]
            if env.get("key") != key or sha256_text(payload) != env.get("digest"):
                raise ValueError("digest mismatch")
            return {"payload": payload, "exit_code": int(env.get("exit_code", 0))}
        except (OSError, ValueError, KeyError, TypeError) as e:
            log.warning("ignoring corrupt cache entry %s (%s)", path, e)
            return None

    def store(self, key: str, payload: str, exit_code: int, manifest: Optional[RunManifest] = None) -> None:
        if not self.enabled:
            return
        env = {"key": key, "digest": sha256_text(payload), "exit_code": exit_code, "payload": payload}
        try:
            atomic_write(self._path(key), json.dumps(env, sort_keys=True) + "\n")
            if manifest is not None:
                atomic_write(os.path.join(self.directory, f"{key}.manifest.json"), manifest.to_json())
        except OSError as e:
            log.warning("could not write cache entry (%s); continuing without cache", e)
            self.enabled = False
