"""Persistence of run records and plot-ready exports."""

from optosqueeze.records.export import (
    write_average_pulse_csv,
    write_fixed_pulse_csv,
    write_histogram_csv,
    write_json,
    write_landscape_csv,
    write_report_csv,
    write_samples_csv,
    write_scan_csv,
    write_sidecar,
    write_sweep_csv,
)
from optosqueeze.records.store import (
    RunStore,
    record_from_lines,
    record_to_lines,
    run_name,
)

__all__ = [
    # Run files
    "RunStore",
    "run_name",
    "record_to_lines",
    "record_from_lines",
    # Exports
    "write_json",
    "write_sidecar",
    "write_landscape_csv",
    "write_sweep_csv",
    "write_histogram_csv",
    "write_average_pulse_csv",
    "write_samples_csv",
    "write_fixed_pulse_csv",
    "write_scan_csv",
    "write_report_csv",
]
