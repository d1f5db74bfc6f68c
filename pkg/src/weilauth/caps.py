"""Enumeration caps and deterministic work splitting.

Every exhaustive scan in this package is bounded by a cap so that a typo
in the parameters cannot turn a desk-scale check into an overnight job.
Caps are plain integers (maximum field size for the enumeration in
question) and can be overridden per call or from the CLI.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

DEFAULT_ENUM_CAP = 3 ** 10   # single full-field sums
DEFAULT_SCAN_CAP = 3 ** 8    # double scans: all (a, b) pairs or all (s, k) pairs
DEFAULT_PS_CAP = 3 ** 5      # four-parameter substitution scans
DEFAULT_PAIR_CAP = 3 ** 4    # message-pair entropy enumerations


class CapExceeded(Exception):
    """An enumeration would exceed the configured desk-scale cap."""


def check_cap(size: int, cap: int | None, what: str) -> None:
    if cap is not None and size > cap:
        raise CapExceeded(f"{what} over {size} elements exceeds cap {cap}")


def split_ranges(total: int, jobs: int) -> list[tuple[int, int]]:
    """Split range(total) into at most `jobs` contiguous chunks."""
    if total <= 0:
        return [(0, 0)]
    jobs = max(1, min(jobs, total))
    step = -(-total // jobs)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def run_chunks(fn, total: int, jobs: int) -> list:
    """Apply fn(lo, hi) per chunk, returning results in chunk order.

    Results are merged by the caller with exact integer arithmetic, so
    the outcome is independent of the chunking and of whether chunks ran
    on worker threads.
    """
    ranges = split_ranges(total, jobs)
    if jobs <= 1 or len(ranges) == 1:
        return [fn(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, lo, hi) for lo, hi in ranges]
        return [f.result() for f in futures]
