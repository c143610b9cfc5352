"""Python access to the CHC benchmark pipeline core."""

from ._chccomp import (
    ChcCompError,
    categorize,
    fingerprint,
    format_script,
    normalize,
    ranking,
    read_job_csv,
    single_solver_take,
    two_solver_take,
)

__all__ = [
    "ChcCompError",
    "categorize",
    "fingerprint",
    "format_script",
    "normalize",
    "ranking",
    "read_job_csv",
    "single_solver_take",
    "two_solver_take",
]
