import csv
import io
import json
import math

from frolov_cubature.harness.sweep import ConvergenceReport, SweepRow


CSV_COLUMNS = ("n", "error", "log10_n", "log10_error")


def _log10(x: float) -> float:
    return math.log10(x) if x > 0 else float("-inf")


def _report_to_csv(report: ConvergenceReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    if not report.rows:
        return buffer.getvalue()

    for row in report.rows:
        writer.writerow(
            [row.n, repr(float(row.error)), repr(_log10(row.n)), repr(_log10(row.error))]
        )

    fitted = "none" if report.fitted_order is None else repr(report.fitted_order)
    buffer.write(f"# fitted_order={fitted}\n")
    buffer.write(f"# config={json.dumps(report.config, sort_keys=True)}\n")
    return buffer.getvalue()


def _report_to_json(report: ConvergenceReport) -> str:
    return json.dumps(report.asdict(), sort_keys=True, indent=2)


def emit_report(report: ConvergenceReport, format: str = "csv") -> str:
    if format == "csv":
        return _report_to_csv(report)
    if format == "json":
        return _report_to_json(report)
    raise ValueError(f"Unknown report format {format}. Expected csv or json.")


def parse_report(text: str) -> ConvergenceReport:
    """Inverse of `emit_report(report, "json")`."""
    d = json.loads(text)
    return ConvergenceReport(
        rule_family=d["rule_family"],
        modifier=d["modifier"],
        rows=[SweepRow(**row) for row in d["rows"]],
        fitted_order=d["fitted_order"],
        fit_residual=d["fit_residual"],
        config=d["config"],
    )


def write_report(report: ConvergenceReport, path: str, format: str = "csv"):
    with open(path, "w") as f:
        f.write(emit_report(report, format))
