import io
import json
import os
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

from .context import PrepMode
from .context import ReportWriter as rw


class TestReportWriter(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.directory.cleanup()

    def path(self, name):
        return os.path.join(self.directory.name, name)

    def test_missing_setting_is_named(self):
        with self.assertRaises(ValueError) as context:
            rw.ReportWriter({})
        self.assertIn("no_meta", str(context.exception))

    def test_settings_must_be_a_mapping(self):
        with self.assertRaises(ValueError):
            rw.ReportWriter(5)

    def test_no_meta_leaves_out_timestamps(self):
        document = rw.ReportWriter({"no_meta": "True"}).document("runtime", {"slope": 1.5})
        self.assertNotIn("meta", document)
        document = rw.ReportWriter({"no_meta": "no"}).document("runtime", {"slope": 1.5})
        self.assertEqual(document["meta"]["numpy"], np.__version__)

    def test_numpy_values_become_plain(self):
        report = {
            "float": np.float64(0.25),
            "int": np.int64(3),
            "flag": np.bool_(True),
            "array": np.arange(3),
            "pair": (1, 2),
            "mode": PrepMode.PrepMode.G_PARA,
            "infinite": float("inf"),
            4: "key",
        }
        document = rw.ReportWriter({"no_meta": "true"}).document("x", report)["report"]
        self.assertEqual(document["float"], 0.25)
        self.assertIs(type(document["int"]), int)
        self.assertIs(document["flag"], True)
        self.assertEqual(document["array"], [0, 1, 2])
        self.assertEqual(document["pair"], [1, 2])
        self.assertEqual(document["mode"], "gpara")
        self.assertEqual(document["infinite"], "inf")
        self.assertEqual(document["4"], "key")

    @patch("sys.stdout", new_callable=io.StringIO)
    def test_json_goes_to_stdout_without_a_path(self, mock_stdout):
        rw.ReportWriter({"no_meta": "true"}).write_json("bounds", {"passed": True}, run_config={"threads": 1})
        document = json.loads(mock_stdout.getvalue())
        self.assertEqual(document, {"subcommand": "bounds", "report": {"passed": True}, "run_config": {"threads": 1}})

    def test_json_file_is_written(self):
        path = self.path("report.json")
        rw.ReportWriter({"no_meta": "true"}).write_json("emit", {"depth": 7}, path)
        with open(path) as handle:
            self.assertEqual(json.load(handle)["report"]["depth"], 7)

    def test_csv_has_header_and_17_digits(self):
        path = self.path("series.csv")
        written = rw.ReportWriter({"no_meta": "true"}).write_csv(path, ("n", "mean", "ok"),
            [(3, 0.1, True), (4, np.float64(2.0) / 3.0, False)])
        self.assertTrue(written)
        with open(path) as handle:
            lines = handle.read().splitlines()
        self.assertEqual(lines, ["n,mean,ok", "3,0.10000000000000001,true", "4,0.66666666666666663,false"])

    def test_csv_without_path_is_skipped(self):
        self.assertFalse(rw.ReportWriter({"no_meta": "true"}).write_csv(None, ("n",), [(1,)]))

    def test_csv_rejects_ragged_rows(self):
        with self.assertRaises(ValueError):
            rw.ReportWriter({"no_meta": "true"}).write_csv(self.path("bad.csv"), ("a", "b"), [(1,)])


if __name__ == "__main__":
    unittest.main()
