"""File formats: lattice JSON, retraction traces, scan CSV, and PGM heatmaps.

Floats are serialized with repr (shortest round-trip decimal), so writing and
re-reading a file reproduces every matrix bit-exactly and identical inputs
produce byte-identical outputs.
"""

import json

import numpy as np

from latgeo.core import BasisMatrix, GramMatrix, as_gram, gram_of
from latgeo.siegel import UpperHalfPoint


class LatticeFileError(ValueError):
    """Malformed lattice file (missing fields, bad shapes, non-PD gram)."""


def _check_matrix(rows, n, what):
    if (
        not isinstance(rows, list)
        or len(rows) != n
        or any(not isinstance(r, list) or len(r) != n for r in rows)
    ):
        raise LatticeFileError("%s must be an %d x %d array of numbers" % (what, n, n))
    try:
        return np.array(rows, dtype=float)
    except (TypeError, ValueError):
        raise LatticeFileError("%s contains non-numeric entries" % what)


def read_lattice_file(path):
    """Load a lattice file; returns (GramMatrix, BasisMatrix or None, label)."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise LatticeFileError("cannot read lattice file: %s" % exc)
    if not isinstance(data, dict) or "n" not in data:
        raise LatticeFileError("lattice file must be an object with field 'n'")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise LatticeFileError("'n' must be a positive integer")
    has_basis = "basis" in data
    has_gram = "gram" in data
    if has_basis == has_gram:
        raise LatticeFileError("provide exactly one of 'basis' or 'gram'")
    label = data.get("label")
    try:
        if has_basis:
            basis = BasisMatrix(_check_matrix(data["basis"], n, "basis"))
            return gram_of(basis), basis, label
        gram = GramMatrix(_check_matrix(data["gram"], n, "gram"))
        return gram, None, label
    except ValueError as exc:
        raise LatticeFileError(str(exc))


def write_lattice_file(path, basis=None, gram=None, label=None):
    if (basis is None) == (gram is None):
        raise ValueError("provide exactly one of basis or gram")
    if basis is not None:
        data = {"n": basis.n, "basis": _matrix_rows(basis.entries)}
    else:
        gram = as_gram(gram)
        data = {"n": gram.n, "gram": _matrix_rows(gram.entries)}
    if label is not None:
        data["label"] = label
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def _matrix_rows(m):
    return [[float(x) for x in row] for row in np.asarray(m)]


def write_trace(path, trace):
    """Serialize a retraction trace with per-event Gram checkpoints."""
    data = {
        "start": _matrix_rows(trace.start.entries),
        "events": [
            {
                "t_star": float(e.t_star),
                "new_vectors": e.new_vectors.tolist(),
                "stratum_before": e.stratum_before,
                "stratum_after": e.stratum_after,
                "gram_after": _matrix_rows(c.entries),
            }
            for e, c in zip(trace.events, trace.checkpoints)
        ],
        "final": _matrix_rows(trace.final.entries),
    }
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def write_scan_csv(path, xs, ys, systoles, strata):
    """Rows ``re,im,systole_sq,stratum`` in grid order (y outer, x inner)."""
    lines = ["re,im,systole_sq,stratum"]
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            lines.append(
                "%s,%s,%s,%d" % (repr(float(x)), repr(float(y)), repr(float(systoles[iy, ix])), strata[iy, ix])
            )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_pgm(path, strata, maxval=4):
    """Binary PGM (P5) of stratum values; top row is the largest Im."""
    arr = np.asarray(strata, dtype=np.int64)
    if np.any(arr < 0) or np.any(arr > maxval):
        raise ValueError("stratum values exceed the PGM range")
    h, w = arr.shape
    header = ("P5\n%d %d\n%d\n" % (w, h, maxval)).encode("ascii")
    body = arr[::-1, :].astype(np.uint8).tobytes()
    with open(path, "wb") as fh:
        fh.write(header + body)


def parse_tau(token):
    """Parse 'x+yi' (e.g. '0.5+0.8660254i', '0+2i', '-0.3+1.1i')."""
    text = token.strip().replace(" ", "")
    if not text.endswith("i"):
        raise ValueError("tau token must end with 'i': %r" % token)
    body = text[:-1]
    split = None
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            split = pos
            break
    if split is None:
        raise ValueError("tau token needs both real and imaginary parts: %r" % token)
    try:
        x = float(body[:split])
        y = float(body[split:])
    except ValueError:
        raise ValueError("cannot parse tau token: %r" % token)
    if y <= 0:
        raise ValueError("imaginary part must be positive: %r" % token)
    return UpperHalfPoint(x, y)


def parse_tau_list(text):
    return [parse_tau(tok) for tok in text.split(",") if tok.strip()]
