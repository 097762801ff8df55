"""Acceptance battery: one PASS/FAIL line per criterion with its runtime.

Run with ``pytest tests/test_acceptance.py`` or directly as a script.
"""

import contextlib
import io
import sys
import time

import pytest

from gerbeforge.acceptance import CRITERIA, run_criterion
from gerbeforge.cli import main

SEED = 0
DETERMINISM_LIMIT = 300.0


def report_line(ok: bool, number: int, title: str, seconds: float, limit: float, extra: str = "") -> str:
    mark = "PASS" if ok else "FAIL"
    return f"[{mark}] criterion {number}: {title} ({seconds:.2f}s, limit {limit:.0f}s){extra}"


def check_criterion(number: int):
    r = run_criterion(number, SEED)
    ok = r.passed and r.within_limit
    extra = f" {r.cases} cases"
    if r.error:
        extra += f" error: {r.error}"
    elif not r.within_limit:
        extra += " too slow"
    return ok, report_line(ok, number, r.title, r.seconds, r.limit_seconds, extra), r


def check_determinism(tmp_dir):
    paths = [tmp_dir / f"selftest_{i}.json" for i in range(2)]
    start = time.perf_counter()
    with contextlib.redirect_stdout(io.StringIO()):
        codes = [main(["selftest", "--seed", str(SEED), "--format", "json", "--report", str(p)]) for p in paths]
    seconds = time.perf_counter() - start
    same = paths[0].read_bytes() == paths[1].read_bytes()
    ok = same and codes == [0, 0] and seconds < DETERMINISM_LIMIT
    line = report_line(ok, 9, "selftest twice with one seed gives byte-identical reports", seconds,
                       DETERMINISM_LIMIT, f" identical={same} exit codes={codes}")
    return ok, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line, r = check_criterion(number)
    with capsys.disabled():
        print("\n" + line)
    assert r.error is None, r.error
    assert r.passed, r.details
    assert r.within_limit, f"{r.seconds:.1f}s exceeds {r.limit_seconds}s"


def test_criterion_9_determinism(tmp_path, capsys):
    ok, line = check_determinism(tmp_path)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    results = []
    for n in sorted(CRITERIA):
        ok, line, _ = check_criterion(n)
        print(line, flush=True)
        results.append(ok)
    with tempfile.TemporaryDirectory() as d:
        ok, line = check_determinism(Path(d))
    print(line)
    results.append(ok)
    sys.exit(0 if all(results) else 1)
