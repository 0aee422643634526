"""Deterministic CSV and JSON emitters.

Floats are written in shortest round-trip form so that identical computations give
byte-identical files; JSON keys are sorted.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .pvs_registry import PvsDescriptor
from .zeta_engine import DEFAULT_CONFIG, EtaVector, QuadConfig, ZetaValue, evaluate_grid


def fmt(x: float) -> str:
    return repr(float(x))


def zeta_grid_header(k: int) -> list[str]:
    head = ["lambda_re", "lambda_im"]
    for i in range(k):
        head += [f"orbit_{i}_re", f"orbit_{i}_im"]
    return head + ["total_re", "total_im", "err", "flags"]


def zeta_grid_rows(desc: PvsDescriptor, lambdas, results, mode: str = "zeta") -> list[list[str]]:
    rows = []
    nan = "nan"
    for lam, (res, problem) in zip(lambdas, results):
        lam = complex(lam)
        row = [fmt(lam.real), fmt(lam.imag)]
        if problem is not None:
            row += [nan, nan] * desc.k + [nan, nan, nan, f"{problem[0]}:{problem[1]}"]
        elif mode == "lz":
            row += ["", ""] * desc.k + [fmt(res.real), fmt(res.imag), "", "lz"]
        else:
            assert isinstance(res, ZetaValue)
            for v in res.orbit_breakdown:
                row += [fmt(v.real), fmt(v.imag)]
            row += [fmt(res.value.real), fmt(res.value.imag), fmt(res.abs_error_estimate), ";".join(res.flags)]
        rows.append(row)
    return rows


def zeta_grid_csv(desc: PvsDescriptor, eta: EtaVector, xi, lambdas, cfg: QuadConfig = DEFAULT_CONFIG,
                  mode: str = "zeta") -> str:
    """The grid evaluation as CSV text, rows in grid order."""
    lambdas = list(lambdas)
    results = evaluate_grid(desc, eta, xi, lambdas, cfg, mode)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(zeta_grid_header(desc.k))
    w.writerows(zeta_grid_rows(desc, lambdas, results, mode))
    return buf.getvalue()


def _plain(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"{type(o).__name__} is not JSON serializable")


def dumps_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_plain) + "\n"
