#!/usr/bin/env python3
import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import MagicMock, patch

import duckdb

from shape_nerve.axioms import AxiomSuite, check_axioms, random_family
from shape_nerve.errors import INVALID_ARGUMENT, ShapeNerveError
from shape_nerve.fixtures import hexagon_with_center, rng_for, square_complex
from shape_nerve.nerve import shape_nerve_complex
from shape_nerve.proximity import ProximityConfig
from shape_nerve.sql import (
    execute_sql_query,
    extract_tables_from_sql,
    get_table_schema,
    list_available_tables,
    split_table_file,
)
from shape_nerve.tables import export_tables, triangles_frame


class TestSQL(unittest.TestCase):
    """Exported tables queried through DuckDB"""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.data_dir = Path(self.temp_dir.name)
        self.env = patch.dict(os.environ, {"SHAPE_NERVE_DATA_DIR": str(self.data_dir)})
        self.env.start()

    def tearDown(self):
        self.env.stop()
        self.temp_dir.cleanup()

    def export_fixtures(self):
        square = square_complex()
        export_tables(self.data_dir, "square", square.complex, shape_nerve_complex(square))
        hexagon = hexagon_with_center()
        family = random_family(hexagon.complex, 5, rng_for(0))
        report = check_axioms(family, ProximityConfig(), AxiomSuite.CECH)
        return export_tables(self.data_dir, "hexagon", hexagon.complex, shape_nerve_complex(hexagon), report)

    def test_export_names(self):
        paths = self.export_fixtures()
        self.assertEqual(
            [Path(p).name for p in paths],
            [
                "hexagon__vertices.parquet",
                "hexagon__triangles.parquet",
                "hexagon__nerves.parquet",
                "hexagon__axioms.parquet",
            ],
        )
        tables = list_available_tables()
        self.assertEqual(len(tables), 7)
        self.assertEqual({t["dataset"] for t in tables}, {"square", "hexagon"})
        self.assertEqual({t["name"] for t in tables}, {"vertices", "triangles", "nerves", "axioms"})

    def test_bare_table_spans_datasets(self):
        self.export_fixtures()
        result = execute_sql_query("SELECT COUNT(*) AS n FROM triangles")
        self.assertTrue(result["success"], result)
        self.assertEqual(result["result"][0]["n"], 8)
        self.assertEqual(result["views"], ["triangles"])

    def test_dataset_qualified_table(self):
        self.export_fixtures()
        result = execute_sql_query("SELECT COUNT(*) AS n FROM square__triangles")
        self.assertEqual(result["result"][0]["n"], 2)

    def test_join(self):
        self.export_fixtures()
        query = (
            "SELECT n.nucleus, v.x, v.y FROM hexagon__nerves n "
            "JOIN hexagon__vertices v ON v.vertex = n.nucleus "
            "ORDER BY n.triangle_count DESC LIMIT 1"
        )
        result = execute_sql_query(query)
        self.assertTrue(result["success"], result)
        self.assertEqual(result["result"][0], {"nucleus": 3, "x": "0", "y": "0"})
        self.assertEqual(result["schema"]["columns"], ["nucleus", "x", "y"])

    def test_axioms_table(self):
        self.export_fixtures()
        result = execute_sql_query("SELECT SUM(failures) AS failures, COUNT(*) AS n FROM axioms")
        self.assertEqual(result["result"][0]["failures"], 0)
        self.assertEqual(result["result"][0]["n"], 4)

    def test_no_files(self):
        result = execute_sql_query("SELECT 1 FROM triangles")
        self.assertFalse(result["success"])
        self.assertEqual(result["code"], "INVALID_ARGUMENT")

    def test_query_error(self):
        self.export_fixtures()
        result = execute_sql_query("SELECT no_such_column FROM triangles")
        self.assertFalse(result["success"])
        self.assertEqual(result["code"], "INVALID_ARGUMENT")
        self.assertEqual(len(result["files_available"]), 7)

    @patch("shape_nerve.sql.create_connection")
    def test_connection_closed_on_error(self, mock_connect):
        self.export_fixtures()
        conn = MagicMock()
        conn.execute.side_effect = duckdb.Error("boom")
        mock_connect.return_value = conn
        result = execute_sql_query("SELECT * FROM triangles")
        self.assertFalse(result["success"])
        self.assertEqual(result["error"], "boom")
        conn.close.assert_called_once()

    def test_schema(self):
        paths = self.export_fixtures()
        schema = get_table_schema(paths[1])
        self.assertTrue(schema["success"])
        self.assertEqual(schema["row_count"], 6)
        names = [c["column_name"] for c in schema["columns"]]
        self.assertCountEqual(names, list(triangles_frame(hexagon_with_center().complex).columns))
        self.assertFalse(get_table_schema(str(self.data_dir / "missing.parquet"))["success"])

    def test_invalid_dataset(self):
        with self.assertRaises(ShapeNerveError) as ctx:
            export_tables(self.data_dir, "../escape", square_complex().complex)
        self.assertEqual(ctx.exception.code, INVALID_ARGUMENT)


class TestNames(unittest.TestCase):
    def test_extract_tables(self):
        query = "SELECT * FROM triangles t JOIN nerves n ON t.a = n.nucleus WHERE t.area > 0"
        self.assertEqual(extract_tables_from_sql(query), ["triangles", "nerves"])

    def test_split_table_file(self):
        self.assertEqual(split_table_file(Path("random-3__nerves.parquet")), {"dataset": "random-3", "table": "nerves"})
        self.assertIsNone(split_table_file(Path("nerves.parquet")))


if __name__ == "__main__":
    unittest.main()
