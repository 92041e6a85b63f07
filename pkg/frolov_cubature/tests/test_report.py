import json
import math

import pytest

from frolov_cubature.config import SweepConfig
from frolov_cubature.harness import ConvergenceReport, SweepRow, emit_report, parse_report
from frolov_cubature.harness.report import CSV_COLUMNS, write_report


def _report(rows=5) -> ConvergenceReport:
    report = ConvergenceReport(
        rule_family="frolov",
        modifier="cov",
        rows=[SweepRow(a=2.0**i, n=2**i + 1, error=10.0 ** -i) for i in reversed(range(1, rows + 1))],
        config=SweepConfig(modifier="cov").asdict(),
    )
    if rows >= 4:
        report.fit()
    return report


def test_rows_are_sorted_by_n():
    report = _report()
    assert list(report.ns) == sorted(report.ns)


def test_empty_report_is_header_only():
    report = ConvergenceReport(rule_family="gauss", modifier="none")
    assert emit_report(report, "csv") == ",".join(CSV_COLUMNS) + "\n"


def test_csv_layout():
    report = _report()
    lines = emit_report(report, "csv").splitlines()
    assert lines[0] == "n,error,log10_n,log10_error"
    assert len(lines) == 1 + 5 + 2

    n, error, log_n, log_error = lines[1].split(",")
    assert int(n) == 3
    assert float(error) == 0.1
    assert float(log_n) == pytest.approx(math.log10(3))
    assert float(log_error) == pytest.approx(-1.0)

    assert lines[-2] == f"# fitted_order={report.fitted_order!r}"
    assert json.loads(lines[-1][len("# config="):]) == report.config


def test_csv_without_fit():
    report = _report(rows=3)
    assert report.fitted_order is None
    assert "# fitted_order=none" in emit_report(report, "csv")


def test_json_round_trip():
    report = _report()
    restored = parse_report(emit_report(report, "json"))
    assert restored == report
    assert emit_report(restored, "json") == emit_report(report, "json")


def test_write_report(tmp_path):
    path = tmp_path / "report.csv"
    write_report(_report(), str(path), "csv")
    assert path.read_text() == emit_report(_report(), "csv")

    with pytest.raises(ValueError):
        emit_report(_report(), "xml")
