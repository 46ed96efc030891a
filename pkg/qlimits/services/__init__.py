from .reports import (
    check_row,
    checks_frame,
    orthogonality_rows,
    render,
    study_frame,
    study_payload,
    ttrr_rows,
    values_frame,
    write_report,
)
