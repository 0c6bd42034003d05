"""Atomic CSV/JSON writers for experiment outputs."""
import csv
import io
import json
import math
import os
import tempfile

import numpy as np

from .classify import _checkpoints


def fmt(x):
    """17 significant digits, enough to round-trip a double."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0:
        return "0"
    return format(x, ".17g")


def write_atomic(path, text):
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def json_text(obj):
    def clean(v):
        if isinstance(v, dict):
            return {str(k): clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        if isinstance(v, (float, np.floating)):
            v = float(v)
            return None if math.isnan(v) else float(fmt(v))
        if isinstance(v, np.integer):
            return int(v)
        return v
    return json.dumps(clean(obj), indent=2, sort_keys=True) + "\n"


DIAGNOSTICS = ("discarded", "stated_bound", "certified_bound", "complement_defect")


def records_table(records, k):
    exps = [f"exponent_{i}" for i in range(k + 2)]
    alphas = [f"alpha_{i}" for i in range(1, k + 1)]
    betas = [f"beta_{i}" for i in range(1, k + 2)]
    dim = records[0].x0.size if records else 0
    header = (["seed_index", "seed"] + [f"x{j}" for j in range(dim)] + exps + alphas + betas
              + ["label", "dist_empirical", "dist_candidate", *DIAGNOSTICS])
    rows = []
    for r in records:
        rows.append([r.seed_index, r.seed, *r.x0.tolist(), *r.exponents,
                     *(r.alpha_hat[i] for i in range(1, k + 1)),
                     *(r.beta_hat[i] for i in range(1, k + 2)),
                     str(r.label), r.distances["empirical"], r.distances["candidate"],
                     *(r.diagnostics[key] for key in DIAGNOSTICS)])
    return header, rows


def density_curves_table(records, k):
    """Running density ``d_c`` at checkpoints ``c`` per seed, profile and grid point."""
    header = ["seed_index", "kind", "index", "delta", "M", "n", "density"]
    rows = []
    for r in records:
        for prof in [*r.alpha.values(), *r.beta.values()]:
            cps = _checkpoints(prof.n)
            for a, d in enumerate(prof.deltas):
                for b, M in enumerate(prof.ms):
                    for c, v in zip(cps, prof.curves[a, b]):
                        rows.append([r.seed_index, prof.kind, prof.index, d, M, int(c), v])
    return header, rows


def exponent_histogram_table(records, k, bins=20):
    header = ["index", "bin_left", "bin_right", "count"]
    rows = []
    exps = np.array([r.exponents for r in records]).reshape(len(records), k + 2)
    for i in range(k + 2):
        lo, hi = exps[:, i].min(), exps[:, i].max()
        if hi - lo < 1e-12:
            lo, hi = lo - 0.5e-6, hi + 0.5e-6
        counts, edges = np.histogram(exps[:, i], bins=bins, range=(lo, hi))
        rows.extend([i, edges[j], edges[j + 1], int(counts[j])] for j in range(bins))
    return header, rows
