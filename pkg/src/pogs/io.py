"""Text formats for signals, labels and run reports.

Signals are single-column CSV with optional ``# key=value`` header lines
(``fs`` and ``channel`` are understood). Samples are written with the
shortest decimal repr that round-trips exactly. Labels and reports are
JSON documents carrying a ``schema_version`` field; readers reject
unknown fields.
"""
import io as _io
import json
import math
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import MissingMetadataError, ParseError
from .metrics import TransientLabels

__all__ = [
    "SCHEMA_VERSION",
    "SignalFile",
    "read_signal",
    "write_signal",
    "write_json",
    "read_json",
    "labels_document",
    "read_labels",
    "write_labels",
]

SCHEMA_VERSION = 1

_LABEL_FIELDS = {"schema_version", "kind", "n_samples", "fs", "transient_intervals", "sim_config", "rng"}


@dataclass
class SignalFile:
    samples: np.ndarray
    fs: Optional[float] = None
    channel_name: Optional[str] = None


def _open_text(path_or_stream, mode):
    if isinstance(path_or_stream, (str, os.PathLike)):
        return open(path_or_stream, mode, encoding="ascii", newline="\n"), True
    return path_or_stream, False


def read_signal(path_or_stream, fs_override=None, require_fs=True):
    """Parse a signal file.

    ``fs_override`` wins over the header. With ``require_fs`` a file that
    yields no sampling rate raises :class:`MissingMetadataError`.
    """
    fh, owned = _open_text(path_or_stream, "r")
    try:
        text = fh.read()
    finally:
        if owned:
            fh.close()
    fs = None
    channel = None
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].replace(",", " ").split():
                key, sep, val = token.partition("=")
                if not sep:
                    continue
                if key == "fs":
                    try:
                        fs = float(val)
                    except ValueError:
                        raise ParseError(f"bad sampling rate {val!r}", lineno) from None
                elif key == "channel":
                    channel = val
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ParseError(f"not a number: {line!r}", lineno) from None
    if fs_override is not None:
        fs = float(fs_override)
    if require_fs and fs is None:
        raise MissingMetadataError("sampling rate not found: add a '# fs=<Hz>' header or pass fs explicitly")
    if fs is not None and not (fs > 0 and math.isfinite(fs)):
        raise ParseError(f"sampling rate must be positive, got {fs!r}")
    return SignalFile(samples=np.array(values, dtype=float), fs=fs, channel_name=channel)


def write_signal(s, path_or_stream):
    """Write ``s`` with a header line and one exactly-round-tripping sample per line."""
    samples = np.asarray(s.samples, dtype=float)
    if not np.all(np.isfinite(samples)):
        raise ValueError("refusing to write non-finite samples")
    header = []
    if s.fs is not None:
        header.append(f"fs={float(s.fs)!r}")
    if s.channel_name:
        header.append(f"channel={s.channel_name}")
    buf = _io.StringIO()
    if header:
        buf.write("# " + " ".join(header) + "\n")
    for v in samples.tolist():
        buf.write(repr(v))
        buf.write("\n")
    fh, owned = _open_text(path_or_stream, "w")
    try:
        fh.write(buf.getvalue())
    finally:
        if owned:
            fh.close()


def write_json(obj, path_or_stream):
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
    fh, owned = _open_text(path_or_stream, "w")
    try:
        fh.write(text)
    finally:
        if owned:
            fh.close()


def read_json(path_or_stream):
    fh, owned = _open_text(path_or_stream, "r")
    try:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    finally:
        if owned:
            fh.close()


def labels_document(labels, fs=None, sim_config=None, rng=None):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "labels",
        "n_samples": labels.n_samples,
        "transient_intervals": [[s, e] for s, e in labels.intervals],
    }
    if fs is not None:
        doc["fs"] = float(fs)
    if sim_config is not None:
        doc["sim_config"] = sim_config
    if rng is not None:
        doc["rng"] = rng
    return doc


def write_labels(labels, path_or_stream, **meta):
    write_json(labels_document(labels, **meta), path_or_stream)


def read_labels(path_or_stream):
    """Load a labels document and return ``(TransientLabels, document)``."""
    doc = read_json(path_or_stream)
    if not isinstance(doc, dict):
        raise ParseError("labels document must be a JSON object")
    unknown = set(doc) - _LABEL_FIELDS
    if unknown:
        raise ParseError(f"unknown labels fields: {', '.join(sorted(unknown))}")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {doc.get('schema_version')!r}")
    if doc.get("kind", "labels") != "labels":
        raise ParseError(f"expected a labels document, got kind={doc.get('kind')!r}")
    try:
        labels = TransientLabels(
            intervals=[tuple(iv) for iv in doc["transient_intervals"]],
            n_samples=int(doc["n_samples"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed labels document: {exc}") from None
    return labels, doc
