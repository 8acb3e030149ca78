"""Reference numbers next to their recomputed values.

Each row is a dict with keys item, reference, computed, tolerance, pass.
"""

from __future__ import annotations

from typing import List

import numpy as np

from . import inequality_lab as lab
from . import kernel_posdef as kp
from .scalar_means import ScalarPair

REFERENCE_TRIPLES = {
    "phi:r=2/3": (2.88404, 0.142344, -0.026381),
    "psi:s=1/4": (2.96626, 0.0436155, -0.00987773),
    "xi:s=3/4": (2.98432, 0.0182053, -0.00252532),
}
REFERENCE_ENTRIES = {"phi_2/3(1)": (1.0, 0.983295), "phi_2/3(2)": (2.0, 0.857656)}
HEINZ_BOUNDS = {0.5: (0.25, 0.75), 1 / 3: (0.125, 0.875), 0.0: (0.0, 1.0)}


def _row(item, reference, computed, tolerance, ok=None) -> dict:
    if ok is None:
        ok = abs(float(computed) - float(reference)) <= tolerance
    return {"item": item, "reference": reference, "computed": computed, "tolerance": tolerance, "pass": bool(ok)}


def _heinz_interval(s: float, step: float = 1e-6):
    """Boundary of {v : Hz_v dominated by H_s} located on both sides of 1/2."""
    th = min(1.0, lab.heinz_threshold(s))
    lo, hi = (1 - th) / 2, (1 + th) / 2
    inside = lab.heinz_heron_condition(s, lo) and lab.heinz_heron_condition(s, hi)
    outside = (lo - step < 0 or not lab.heinz_heron_condition(s, lo - step)) and (
        hi + step > 1 or not lab.heinz_heron_condition(s, hi + step)
    )
    return lo, hi, inside and outside


def reproduction_table(seed: int = 0) -> List[dict]:
    rows: List[dict] = []

    f = kp.phi(2 / 3)
    for name, (t, val) in REFERENCE_ENTRIES.items():
        rows.append(_row(name, val, float(f(t)), 1e-6))

    for spec, triple in REFERENCE_TRIPLES.items():
        rep = kp.gram(kp.parse_kernel(spec), [1.0, 2.0, 3.0])
        for k, (p, c) in enumerate(zip(triple, rep.eigenvalues)):
            rows.append(_row(f"{spec} eigenvalue {k + 1} on (1,2,3)", p, float(c), 1e-4))
        rows.append(_row(f"{spec} not PSD on (1,2,3)", False, rep.psd, 0.0, not rep.psd))

    for spec, n in (("phi:r=0.9", 5), ("eta:p=3/7", 7)):
        w = kp.search_counterexample(kp.parse_kernel(spec), n, "integer", seed=seed)
        rows.append(_row(f"{spec} negative on t=1..{n}", "negative",
                         None if w is None else w.min_eigenvalue, 0.0, w is not None))

    for x in (1 - 1e-9, 1 + 1e-9):
        rows.append(_row(f"log_ratio({x!r})", 2 / 3, float(lab.log_ratio(x)), 1e-9))
        rows.append(_row(f"diff_ratio({x!r})", 2 / 3, float(lab.diff_ratio(x)), 1e-9))

    t_scan, s_scan = lab.scan_sharp_constants()
    rows.append(_row("sup log_ratio", 2 / 3, t_scan.extremum, 1e-4,
                     2 / 3 - 1e-4 <= t_scan.extremum <= 2 / 3))
    rows.append(_row("inf diff_ratio", 2 / 3, s_scan.extremum, 1e-4,
                     2 / 3 <= s_scan.extremum <= 2 / 3 + 1e-4))

    lower, upper, holds = lab.bounds_with_parameters(2 / 3, 2 / 3, ScalarPair(4.0, 1.0))
    rows.append(_row("t = s = 2/3 bounds hold at (4, 1)", True, holds, 0.0, holds))

    for s, (vlo, vhi) in HEINZ_BOUNDS.items():
        lo, hi, sharp = _heinz_interval(s)
        ok = sharp and abs(lo - vlo) <= 1e-9 and abs(hi - vhi) <= 1e-9
        rows.append(_row(f"Heinz range for H_{s:.4g}", [vlo, vhi], [lo, hi], 1e-9, ok))

    return [{k: (v.item() if isinstance(v, np.generic) else v) for k, v in r.items()} for r in rows]
