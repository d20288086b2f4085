"""Run manifests for reproducibility.

Every CLI output file gets a sidecar ``<file>.manifest.json``.  The
manifest identity hashes only the reproducible inputs (command, options,
seeds, input digests, versions), so identical runs produce identical
ids; wall-clock timing lives outside the hash.
"""

import hashlib
import json
import time
from pathlib import Path

SCHEMA_VERSION = 1


def file_digest(path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class RunManifest:
    def __init__(self, command: str, options: dict, inputs: dict | None = None):
        from . import __version__

        self.command = command
        self.options = {k: v for k, v in sorted(options.items())}
        self.input_digests = {
            name: file_digest(p) for name, p in sorted((inputs or {}).items())
        }
        self.versions = {"dimscope": __version__}
        self._start = time.monotonic()

    @property
    def manifest_id(self) -> str:
        payload = json.dumps(
            {
                "command": self.command,
                "options": self.options,
                "input_digests": self.input_digests,
                "versions": self.versions,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    def write_sidecar(self, output_path) -> None:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "manifest_id": self.manifest_id,
            "command": self.command,
            "options": self.options,
            "input_digests": self.input_digests,
            "versions": self.versions,
            "elapsed_seconds": round(time.monotonic() - self._start, 3),
        }
        side = Path(str(output_path) + ".manifest.json")
        side.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
