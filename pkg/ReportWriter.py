#!python3

# from standard library
import csv
from datetime import datetime, timezone
from enum import Enum
import json
import logging
import math
import platform
import sys

# third party
import numpy as np
import scipy

# Definitions aka constants
FLOAT_FORMAT = ".17g"
TRUE_STRINGS = ("yes", "true", "1", "on")


def _plain(value):
    '''
    Turn numpy scalars and arrays, tuples, enums and dataclass dictionaries
    into values the json module writes. Non-finite floats become strings.
    '''
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, Enum):
        return _plain(value.value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def format_cell(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


class ReportWriter:
    '''
    Bind output settings in a class for reuse
    '''

    def __init__(self, settings):
        try:
            self.settings = dict(settings)
        except (TypeError, ValueError) as error:
            raise ValueError("Output settings must be a mapping, got {!r}".format(settings)) from error
        self.no_meta = str(self._setting("no_meta")).strip().lower() in TRUE_STRINGS


    def _setting(self, key):
        if key not in self.settings:
            raise ValueError("Output settings are missing '{}'".format(key))
        return self.settings[key]


    def document(self, subcommand, report, run_config=None):
        '''
        The JSON document of one run: the report, the resolved run
        configuration and, unless no_meta is set, when and with what it ran
        '''
        document = {"subcommand": subcommand, "report": report}
        if run_config is not None:
            document["run_config"] = run_config
        if not self.no_meta:
            document["meta"] = {
                "created": datetime.now(timezone.utc).isoformat(),
                "python": platform.python_version(),
                "numpy": np.__version__,
                "scipy": scipy.__version__,
            }
        return _plain(document)


    def write_json(self, subcommand, report, path=None, run_config=None):
        """
        Write a report as JSON.

        params:
            subcommand - name of the command that produced the report
            report - dictionary of results; numpy values are converted
            path - file to write, stdout when None or "-"
            run_config - dictionary of the resolved configuration to embed
        """
        text = json.dumps(self.document(subcommand, report, run_config), indent=2, allow_nan=False) + "\n"
        if path is None or path == "-":
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        logging.info("Wrote %s report to %s", subcommand, path)


    def write_csv(self, path, columns, rows):
        """
        Write a header row then one row per record, floats with 17
        significant digits.

        @return False when there is no path to write to
        """
        if not path:
            return False
        with open(path, "w", encoding="ascii", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                if len(row) != len(columns):
                    raise ValueError("Row {!r} does not match columns {!r}".format(row, columns))
                writer.writerow([format_cell(cell) for cell in row])
        logging.info("Wrote %d rows to %s", len(rows), path)
        return True


# Rest of this file is a smoke test. Use `python3 ReportWriter.py` to run
# check prevents running of test suite if loading (import) as a module
if __name__ == "__main__":
    # Init logging
    logging.basicConfig(format='%(message)s', level=logging.DEBUG)

    writer = ReportWriter({"no_meta": "false"})
    writer.write_json("smoke", {"values": np.linspace(0.0, 1.0, 3), "ok": np.bool_(True)})
