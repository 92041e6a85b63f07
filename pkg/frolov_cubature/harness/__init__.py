from frolov_cubature.harness.integrands import TestFunction, get_test_function, registry, spline_family
from frolov_cubature.harness.report import emit_report, parse_report
from frolov_cubature.harness.sweep import ConvergenceReport, SweepRow, convergence_sweep, measure_error
