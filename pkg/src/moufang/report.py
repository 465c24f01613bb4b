"""Machine-readable verification reports (JSON primary, CSV mirror).

Schema (report_version 1): metadata (loop, seed, samples, radius, tolerance,
conventions, tool), one entry per family with max / mean / pass / argmax
point(s), and the overall verdict.  Floats are serialized with shortest
round-trip precision (up to 17 significant digits), so identical runs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json

from moufang.suites import FamilyResidual
from moufang.tensors import ConventionLedger

__all__ = ["build_verify_report", "render_json", "render_csv", "write_report", "REPORT_VERSION"]

REPORT_VERSION = 1

_META_COLUMNS = [
    "loop",
    "seed",
    "samples",
    "radius",
    "tolerance",
    "bracket_sign",
    "lemma_sign",
    "integrability_h_jacobian",
]
_FAMILY_COLUMNS = ["family", "max", "mean", "pass", "argmax_g", "argmax_h", "argmax_k"]


def _coords(x) -> list | None:
    return None if x is None else [float(c) for c in x]


def build_verify_report(
    loop_spec: str,
    seed: int,
    samples: int,
    radius: float,
    tolerance: float,
    conventions: ConventionLedger,
    results: list[FamilyResidual],
    version: str,
) -> dict:
    families = [
        {
            "family": r.family,
            "max": r.max,
            "mean": r.mean,
            "pass": r.passed,
            "argmax": {
                "g": _coords(r.argmax_g),
                "h": _coords(r.argmax_h),
                "k": _coords(r.argmax_k),
            },
        }
        for r in results
    ]
    return {
        "report_version": REPORT_VERSION,
        "tool": {"name": "moufang", "version": version},
        "loop": loop_spec,
        "seed": seed,
        "samples": samples,
        "radius": radius,
        "tolerance": tolerance,
        "conventions": {
            "bracket_sign": conventions.bracket_sign,
            "lemma_sign": conventions.lemma_sign,
            # the transport-identity residual contracts the h-Jacobian in its
            # second term (the displayed g-Jacobian variant does not vanish)
            "integrability_h_jacobian": True,
        },
        "families": families,
        "pass": all(f["pass"] for f in families),
    }


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _pack(coords) -> str:
    return "" if coords is None else ";".join(repr(c) for c in coords)


def render_csv(report: dict) -> str:
    """Flat one-row-per-family rendering with the metadata repeated per row."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_META_COLUMNS + _FAMILY_COLUMNS)
    conv = report["conventions"]
    meta = [
        report["loop"],
        report["seed"],
        report["samples"],
        repr(report["radius"]),
        repr(report["tolerance"]),
        conv["bracket_sign"],
        conv["lemma_sign"],
        conv["integrability_h_jacobian"],
    ]
    for fam in report["families"]:
        writer.writerow(
            meta
            + [
                fam["family"],
                repr(fam["max"]),
                repr(fam["mean"]),
                fam["pass"],
                _pack(fam["argmax"]["g"]),
                _pack(fam["argmax"]["h"]),
                _pack(fam["argmax"]["k"]),
            ]
        )
    return out.getvalue()


def write_report(report: dict, path: str, fmt: str = "json"):
    text = render_json(report) if fmt == "json" else render_csv(report)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
