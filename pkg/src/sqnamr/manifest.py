"""Run manifests embedded in every emitted artifact."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import asdict, dataclass, field

from . import __version__


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True)


def sha256_of(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    config_path: str | None
    config: dict
    out_dir: str | None = None
    grid: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None
    version: str = __version__

    @property
    def config_hash(self) -> str:
        return sha256_of(self.config)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("config")
        d["config_hash"] = self.config_hash
        return d

    @property
    def manifest_hash(self) -> str:
        return sha256_of(self.to_dict())

    def comment_block(self) -> str:
        lines = ["# manifest " + canonical_json(self.to_dict()),
                 "# manifest_sha256 " + self.manifest_hash]
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_csv(header: str, rows, manifest: RunManifest) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    buf.write(header + "\n")
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    buf.write(manifest.comment_block())
    return buf.getvalue()


def render_json(payload: dict, manifest: RunManifest) -> str:
    doc = dict(payload)
    doc["manifest"] = manifest.to_dict()
    doc["manifest_sha256"] = manifest.manifest_hash
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=True) + "\n"


def read_csv(text: str) -> tuple[list[str], list[list[str]], list[str]]:
    """Split an emitted CSV into header, data rows and trailing comment lines."""
    lines = text.splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if ln and not ln.startswith("#")]
    rows = list(csv.reader(body))
    return rows[0], rows[1:], comments
