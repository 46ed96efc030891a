"""
Tables and report files for the CLI.

Every number is written with mp.nstr at the active digits, so identical runs
produce identical files.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Sequence

import pandas as pd
from mpmath import mp

from ..schemas import LimitStudyReport, OrthogonalityReport, TtrrReport
from ..utils import format_real

logger = logging.getLogger(__name__)

STUDY_COLUMNS = ["control", "n", "quantity", "error"]
CHECK_COLUMNS = ["suite", "family", "check", "residual", "passed"]


def _text(value) -> str:
    return format_real(value) if isinstance(value, mp.mpf) else str(value)


def study_frame(reports: Sequence[LimitStudyReport]) -> pd.DataFrame:
    """One row per (control value, n, quantity) across all studies."""
    rows = []
    for report in reports:
        for item in report.series:
            for control, error in zip(report.schedule, item.errors):
                rows.append(
                    {"control": _text(control), "n": item.n, "quantity": item.quantity, "error": _text(error)}
                )
    frame = pd.DataFrame(rows, columns=STUDY_COLUMNS)
    frame["n"] = frame["n"].astype("Int64")
    return frame


def study_payload(config: Dict, reports: Sequence[LimitStudyReport]) -> Dict:
    verdicts = {}
    for report in reports:
        for key, passed in report.verdicts.items():
            verdicts[f"{report.study}:{key}"] = passed
    flags = sorted({flag for report in reports for flag in report.flags})
    return {
        "config": config,
        "reports": [report.model_dump(mode="json") for report in reports],
        "verdicts": verdicts,
        "flags": flags,
        "passed": all(verdicts.values()),
    }


def values_frame(family: str, n: int, rows: List[Dict]) -> pd.DataFrame:
    """rows carry point, abscissa and value of p_n."""
    return pd.DataFrame(
        [{"family": family, "n": n, **{key: _text(value) for key, value in row.items()}} for row in rows],
        columns=["family", "n", "point", "abscissa", "value"],
    )


def check_row(suite: str, family: str, check: str, residual, tol: float) -> Dict:
    return {
        "suite": suite,
        "family": family,
        "check": check,
        "residual": residual,
        "passed": bool(residual < tol),
    }


def orthogonality_rows(suite: str, report: OrthogonalityReport, tol: float) -> List[Dict]:
    return [
        check_row(suite, report.family, "gram off-diagonal", report.max_off_diagonal, tol),
        check_row(suite, report.family, "gram diagonal vs norm", report.max_diagonal, tol),
    ]


def ttrr_rows(suite: str, report: TtrrReport, tol: float) -> List[Dict]:
    return [check_row(suite, report.family, f"ttrr n={n}", r, tol) for n, r in enumerate(report.residuals)]


def checks_frame(rows: List[Dict]) -> pd.DataFrame:
    return pd.DataFrame([{**row, "residual": _text(row["residual"])} for row in rows], columns=CHECK_COLUMNS)


def render(frame: pd.DataFrame, fmt: str, payload: Dict = None) -> str:
    if fmt == "csv":
        return frame.to_csv(index=False)
    if fmt == "json":
        body = payload if payload is not None else {"rows": json.loads(frame.to_json(orient="records"))}
        return json.dumps(body, indent=2, sort_keys=True) + "\n"
    if frame.empty:
        return "(no rows)\n"
    return frame.to_string(index=False) + "\n"


def write_report(out_dir: Path, stem: str, frame: pd.DataFrame, payload: Dict = None, formats=("csv", "json")) -> List[Path]:
    """Write <stem>.csv / <stem>.json / <stem>.txt under out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = {"csv": "csv", "json": "json", "text": "txt"}
    written = []
    for fmt in formats:
        path = out_dir / f"{stem}.{suffix[fmt]}"
        path.write_text(render(frame, fmt, payload))
        written.append(path)
        logger.info(f"wrote {path}")
    return written
