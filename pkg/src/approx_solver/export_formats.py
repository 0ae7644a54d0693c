"""
Export Formats Module
Writes run logs (CSV), run summaries (JSON) and stepsize tables (CSV)
"""
import csv
import json
import os
from datetime import datetime

from .errors import RunLogError
from .solver import RunLog

RUNLOG_COLUMNS = ["k", "elapsed_s", "objective"]
STEPSIZE_COLUMNS = ["tau", "l1_fr", "l1_rt", "l1_nc", "omega", "omega_bar"]
DISTANCE_COLUMNS = ["dist_fr", "dist_rt"]


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ExportFormatter:
    """Handles the on-disk formats of solver results"""

    def export_runlog(self, log: RunLog, path):
        """
        RunLog CSV:
            # key: value        (one metadata comment per line)
            k,elapsed_s,objective[,dist]
        Floats are written with repr so a read-back is exact.
        """
        columns = RUNLOG_COLUMNS + (["dist"] if log.has_dist else [])
        with open(path, 'w', newline='') as f:
            for key, value in log.metadata.items():
                f.write(f"# {key}: {value}\n")
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for record in log.records:
                row = [record.k, _fmt(record.elapsed_s), _fmt(record.objective)]
                if log.has_dist:
                    row.append(_fmt(record.dist))
                writer.writerow(row)
        return str(path)

    def import_runlog(self, path) -> RunLog:
        metadata = {}
        lines = []
        with open(path, 'r', newline='') as f:
            for line in f:
                if line.startswith('#'):
                    key, sep, value = line[1:].strip().partition(':')
                    if sep:
                        metadata[key.strip()] = value.strip()
                elif line.strip():
                    lines.append(line)
        if not lines:
            raise RunLogError(f"{path} has no header row")
        reader = csv.reader(lines)
        header = next(reader)
        if header[:3] != RUNLOG_COLUMNS:
            raise RunLogError(f"unexpected run log header {header}")
        has_dist = len(header) > 3 and header[3] == "dist"
        log = RunLog(metadata=metadata)
        for row in reader:
            try:
                dist = float(row[3]) if has_dist and row[3] != "" else None
                log.append(int(row[0]), float(row[1]), float(row[2]), dist)
            except (ValueError, IndexError) as exc:
                raise RunLogError(f"bad run log row {row}: {exc}") from None
        return log

    def export_summary(self, summary: dict, path):
        """Run summary as indented JSON with a creation timestamp"""
        data = {
            "info": {
                "description": "approx_solver run summary",
                "date_created": datetime.now().isoformat(),
            },
        }
        data.update(summary)
        folder = os.path.dirname(str(path))
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(path, 'w') as f:
            json.dump(data, f, indent=2)
        return str(path)

    def export_stepsize_table(self, records, path):
        """
        compare-stepsizes CSV; l1_nc is empty where nc does not apply.
        dist_fr, dist_rt are appended when the records carry them.
        """
        if hasattr(path, "write"):
            self._write_stepsize_rows(records, path)
            return None
        with open(path, 'w', newline='') as f:
            self._write_stepsize_rows(records, f)
        return str(path)

    def _write_stepsize_rows(self, records, stream):
        columns = STEPSIZE_COLUMNS
        if records and all(column in records[0] for column in DISTANCE_COLUMNS):
            columns = STEPSIZE_COLUMNS + DISTANCE_COLUMNS
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for record in records:
            writer.writerow([_fmt(record[column]) for column in columns])


_formatter = ExportFormatter()


def write_runlog(log: RunLog, path):
    return _formatter.export_runlog(log, path)


def read_runlog(path) -> RunLog:
    return _formatter.import_runlog(path)


def write_summary_json(path, summary: dict):
    return _formatter.export_summary(summary, path)


def write_stepsize_table(records, path):
    return _formatter.export_stepsize_table(records, path)
