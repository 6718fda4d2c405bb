"""Line-oriented checkpoint files for long F-series runs.

A checkpoint is a text file: one header line, then one record line per n.
The header pins everything that affects the numbers (parse policy, output
digits, precision ceiling, config hash), so a resume against a file written
under different settings fails loudly with CheckpointMismatch instead of
silently mixing regimes.  The tool version in the header is informational
only; the semantic fields are what must match.

Record lines are key=value pairs in a fixed order, shell-quoted where needed,
so files are diffable, greppable, and byte-reproducible for identical inputs.
"""

from __future__ import annotations

import hashlib
import json
import shlex
from typing import Iterable, Optional, TextIO

from .errors import CheckpointMismatch

FORMAT_NAME = "f-series-checkpoint"
FORMAT_VERSION = "v1"
TOOL_VERSION = "0.1.0"

_OK_KEYS = ("n", "status", "bits", "frac", "frac_err", "dist", "dist_err",
            "F", "F_err", "mag")
_SKIP_KEYS = ("n", "status", "reason")


def config_hash(config: dict) -> str:
    """First 12 hex chars of the sha256 of the canonical JSON of config."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def fseries_config(digits: int, precision_ceiling: int) -> dict:
    from .exact import PARSE_POLICY

    return {"digits": digits, "policy": PARSE_POLICY,
            "precision_ceiling": precision_ceiling}


def header_line(digits: int, precision_ceiling: int) -> str:
    from .exact import PARSE_POLICY

    cfg = fseries_config(digits, precision_ceiling)
    return (f"# {FORMAT_NAME} {FORMAT_VERSION} tool=eulerforms/{TOOL_VERSION} "
            f"policy={PARSE_POLICY} config={config_hash(cfg)} digits={digits}")


def record_line(rec: dict) -> str:
    keys = _SKIP_KEYS if rec.get("status") == "skip" else _OK_KEYS
    parts = []
    for k in keys:
        v = str(rec[k])
        parts.append(f"{k}={shlex.quote(v)}")
    return " ".join(parts)


def parse_record_line(line: str) -> dict:
    rec = {}
    for tok in shlex.split(line):
        k, _, v = tok.partition("=")
        rec[k] = v
    if "n" not in rec or "status" not in rec:
        raise CheckpointMismatch(f"malformed record line: {line!r}")
    rec["n"] = int(rec["n"])
    if rec["status"] == "ok":
        rec["bits"] = int(rec["bits"])
        rec["mag"] = int(rec["mag"])
    return rec


def _check_header(line: str, digits: int, precision_ceiling: int) -> None:
    expected = header_line(digits, precision_ceiling)
    got = line.rstrip("\n").split()
    want = expected.split()
    if len(got) < 3 or got[0] != "#" or got[1] != FORMAT_NAME:
        raise CheckpointMismatch(f"not a {FORMAT_NAME} file: {line!r}")
    if got[2] != FORMAT_VERSION:
        raise CheckpointMismatch(f"unsupported format version in {line!r}")
    got_kv = dict(t.partition("=")[::2] for t in got[3:] if "=" in t)
    want_kv = dict(t.partition("=")[::2] for t in want[3:] if "=" in t)
    for key in ("policy", "config", "digits"):
        if got_kv.get(key) != want_kv.get(key):
            raise CheckpointMismatch(
                f"checkpoint {key}={got_kv.get(key)!r} does not match the "
                f"requested run ({key}={want_kv.get(key)!r})")


def load_checkpoint(path: str, digits: int, precision_ceiling: int) -> dict:
    """Records already in the file, as {n: record dict}.

    Raises CheckpointMismatch if the header disagrees with the requested
    settings on any semantic field.
    """
    done: dict[int, dict] = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header.strip():
            raise CheckpointMismatch(f"{path}: empty checkpoint")
        _check_header(header, digits, precision_ceiling)
        for raw in fh:
            raw = raw.strip()
            if not raw or raw.startswith("#"):
                continue
            rec = parse_record_line(raw)
            done[rec["n"]] = rec
    return done


def open_for_append(path: str, digits: int, precision_ceiling: int,
                    fresh: bool) -> TextIO:
    """Open a checkpoint for appending, writing the header if fresh."""
    fh = open(path, "a", encoding="utf-8")
    if fresh:
        fh.write(header_line(digits, precision_ceiling) + "\n")
        fh.flush()
    return fh


def append_record(fh: TextIO, rec: dict) -> None:
    fh.write(record_line(rec) + "\n")
    fh.flush()
