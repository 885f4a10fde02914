"""CSV formats: long-format sequences, Gram matrices, feature matrices and
benchmark results.

Floats are written with ``repr`` (shortest round-trip form), so writing is
deterministic and reading back is exact.
"""
from __future__ import annotations

import csv
import io
import math
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .errors import ParseError
from .seq import SequenceDataset

__all__ = [
    "read_sequences_csv",
    "write_sequences_csv",
    "write_gram_csv",
    "read_gram_csv",
    "write_features_csv",
    "read_features_csv",
    "write_bench_csv",
    "write_slopes_csv",
]


@contextmanager
def _open(target, mode):
    if isinstance(target, (str, Path)):
        with open(target, mode, newline="", encoding="utf-8") as fh:
            yield fh
    else:
        yield target


def _fmt(v) -> str:
    return repr(float(v))


def _float(s, line):
    try:
        v = float(s)
    except ValueError:
        raise ParseError(f"not a number: {s!r}", line) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite value: {s!r}", line)
    return v


def read_sequences_csv(source):
    """Parse long-format ``seq_id,t,x1,...,xd`` rows.

    Rows of one ``seq_id`` must be contiguous with ``t = 1, 2, ...``.
    Returns ``(ids, dataset)``.
    """
    with _open(source, "r") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", 1) from None
        header = [h.strip() for h in header]
        if len(header) < 3 or header[0] != "seq_id" or header[1] != "t":
            raise ParseError("header must be 'seq_id,t,x1,...,xd'", 1)
        d = len(header) - 2
        expected = [f"x{k}" for k in range(1, d + 1)]
        if header[2:] != expected:
            raise ParseError(f"state columns must be named {','.join(expected)}", 1)

        ids, seqs, seen = [], [], set()
        current, rows, next_t = None, [], 1
        for lineno, rec in enumerate(reader, start=2):
            if not rec or all(not f.strip() for f in rec):
                continue
            if len(rec) != d + 2:
                raise ParseError(f"expected {d + 2} fields, got {len(rec)}", lineno)
            sid = rec[0].strip()
            try:
                t = int(rec[1])
            except ValueError:
                raise ParseError(f"time index must be an integer, got {rec[1]!r}", lineno) from None
            if sid != current:
                if current is not None:
                    ids.append(current)
                    seqs.append(rows)
                if sid in seen:
                    raise ParseError(f"rows of seq_id {sid!r} are not contiguous", lineno)
                seen.add(sid)
                current, rows, next_t = sid, [], 1
            if t != next_t:
                raise ParseError(f"seq_id {sid!r}: expected t={next_t}, got t={t}", lineno)
            rows.append([_float(v, lineno) for v in rec[2:]])
            next_t += 1
        if current is None:
            raise ParseError("no data rows", 2)
        ids.append(current)
        seqs.append(rows)
    return ids, SequenceDataset(np.array(s) for s in seqs)


def write_sequences_csv(target, dataset, ids=None) -> None:
    dataset = dataset if isinstance(dataset, SequenceDataset) else SequenceDataset(dataset)
    ids = [str(k) for k in range(len(dataset))] if ids is None else [str(i) for i in ids]
    with _open(target, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["seq_id", "t"] + [f"x{k}" for k in range(1, dataset.d + 1)])
        for sid, s in zip(ids, dataset):
            for t, row in enumerate(s, start=1):
                w.writerow([sid, t] + [_fmt(v) for v in row])


def write_gram_csv(target, gram) -> None:
    """Row-major ``i,j,value`` with 0-based indices."""
    gram = np.asarray(gram)
    with _open(target, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "j", "value"])
        for i in range(gram.shape[0]):
            for j in range(gram.shape[1]):
                w.writerow([i, j, _fmt(gram[i, j])])


def read_gram_csv(source) -> np.ndarray:
    with _open(source, "r") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["i", "j", "value"]:
            raise ParseError("header must be 'i,j,value'", 1)
        entries = []
        for lineno, rec in enumerate(reader, start=2):
            if len(rec) != 3:
                raise ParseError(f"expected 3 fields, got {len(rec)}", lineno)
            entries.append((int(rec[0]), int(rec[1]), _float(rec[2], lineno)))
    n = max(e[0] for e in entries) + 1
    m = max(e[1] for e in entries) + 1
    G = np.full((n, m), np.nan)
    for i, j, v in entries:
        G[i, j] = v
    return G


def write_features_csv(target, features, ids=None) -> None:
    """``seq_id,f1,...,fK`` with one row per sequence."""
    features = np.asarray(features)
    ids = [str(k) for k in range(features.shape[0])] if ids is None else [str(i) for i in ids]
    with _open(target, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["seq_id"] + [f"f{k}" for k in range(1, features.shape[1] + 1)])
        for sid, row in zip(ids, features):
            w.writerow([sid] + [_fmt(v) for v in row])


def read_features_csv(source):
    with _open(source, "r") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "seq_id":
            raise ParseError("header must start with 'seq_id'", 1)
        ids, rows = [], []
        for lineno, rec in enumerate(reader, start=2):
            if len(rec) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(rec)}", lineno)
            ids.append(rec[0])
            rows.append([_float(v, lineno) for v in rec[1:]])
    return ids, np.array(rows)


def write_bench_csv(target, result) -> None:
    with _open(target, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["method", "trunc", "rff_dim", "mse_mean", "mse_std", "n_eval"])
        for r in result.rows:
            w.writerow([r.method, r.trunc, r.rff_dim, _fmt(r.mse_mean), _fmt(r.mse_std), r.n_eval])


def write_slopes_csv(target, slopes) -> None:
    """``slopes`` maps ``(method, trunc)`` to the log-log slope."""
    with _open(target, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["method", "trunc", "slope"])
        for (method, trunc), s in slopes.items():
            w.writerow([method, trunc, _fmt(s)])


def to_string(writer, *args) -> str:
    buf = io.StringIO()
    writer(buf, *args)
    return buf.getvalue()
