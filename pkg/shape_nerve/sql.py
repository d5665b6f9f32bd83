"""SQL over exported shape tables using DuckDB."""
import logging
import os
import re
from pathlib import Path
from typing import Any, Dict, List, Optional

import duckdb

logger = logging.getLogger(__name__)

# Default SQL query timeout in seconds
DEFAULT_QUERY_TIMEOUT = 30
DEFAULT_DATA_DIR = str(Path.home() / ".shape-nerve" / "data")

SQL_KEYWORDS = ("where", "select", "group", "order", "having", "limit", "offset")


def get_data_directory() -> Path:
    """Get the directory holding exported parquet tables."""
    return Path(os.environ.get("SHAPE_NERVE_DATA_DIR", DEFAULT_DATA_DIR))


def create_connection() -> duckdb.DuckDBPyConnection:
    """Create an in-memory DuckDB connection with conservative settings."""
    conn = duckdb.connect(database=":memory:", read_only=False)
    conn.execute("SET memory_limit='1GB'")
    conn.execute("SET max_expression_depth=10000")
    # not every DuckDB version knows this setting
    try:
        conn.execute(f"SET query_timeout_ms={DEFAULT_QUERY_TIMEOUT * 1000}")
    except duckdb.Error:
        pass
    return conn


def split_table_file(path: Path) -> Optional[Dict[str, str]]:
    """``<dataset>__<table>.parquet`` -> its dataset and table names."""
    if "__" not in path.stem:
        return None
    dataset, table = path.stem.rsplit("__", 1)
    return {"dataset": dataset, "table": table}


def list_available_tables(data_dir: Optional[Path] = None) -> List[Dict[str, Any]]:
    """List exported parquet files with their dataset and table names."""
    data_dir = data_dir or get_data_directory()
    tables = []
    for file_path in sorted(data_dir.glob("**/*.parquet")):
        names = split_table_file(file_path)
        if names is None:
            continue
        stats = file_path.stat()
        tables.append(
            {
                "name": names["table"],
                "dataset": names["dataset"],
                "path": str(file_path),
                "size_bytes": stats.st_size,
                "modified": stats.st_mtime,
            }
        )
    return tables


def extract_tables_from_sql(sql_query: str) -> List[str]:
    """Table names after FROM or JOIN that are not SQL keywords."""
    matches = re.findall(r"(?:FROM|JOIN)\s+([a-zA-Z_][a-zA-Z0-9_]*)", sql_query, re.IGNORECASE)
    seen: List[str] = []
    for match in matches:
        if match.lower() not in SQL_KEYWORDS and match not in seen:
            seen.append(match)
    return seen


def _files_for_table(table_name: str, parquet_files: List[Path]) -> List[Path]:
    matches = []
    for f in parquet_files:
        names = split_table_file(f)
        if names is None:
            continue
        # plain table names span all datasets; dataset__table picks one file
        if names["table"].lower() == table_name.lower() or f.stem.lower() == table_name.lower():
            matches.append(f)
    return matches


def execute_sql_query(
    query: str,
    files: Optional[List[str]] = None,
    include_schema: bool = True,
) -> Dict[str, Any]:
    """
    Execute a SQL query against exported parquet tables.

    Bare table names (``triangles``, ``nerves``, ...) are registered as views over
    every matching file; ``read_parquet('...')`` works as usual.

    Args:
        query: SQL query to execute
        files: Parquet files to expose. If None, every file in the data directory.
        include_schema: Whether to include column names and dtypes in the result

    Returns:
        Dictionary with query results and metadata
    """
    conn = create_connection()
    registered: List[str] = []
    try:
        parquet_files: List[Path] = []
        if files:
            for file_path in files:
                path = Path(file_path)
                if path.exists() and path.suffix == ".parquet":
                    parquet_files.append(path)
                else:
                    logger.warning("file not found or not a parquet file: %s", file_path)
        else:
            parquet_files = sorted(get_data_directory().glob("**/*.parquet"))

        if not parquet_files:
            return {
                "success": False,
                "error": "No parquet files available. Export tables first.",
                "code": "INVALID_ARGUMENT",
            }

        try:
            for table_name in extract_tables_from_sql(query):
                if "read_parquet" in query.lower() and table_name.lower() in query.lower():
                    continue
                matching = _files_for_table(table_name, parquet_files)
                if not matching:
                    continue
                conn.execute(f"DROP VIEW IF EXISTS {table_name}")
                union = " UNION ALL ".join(f"SELECT * FROM '{f}'" for f in matching)
                conn.execute(f"CREATE VIEW {table_name} AS {union}")
                registered.append(table_name)
                logger.debug("registered view %s over %d file(s)", table_name, len(matching))

            logger.debug("executing SQL query: %s", query)
            result = conn.execute(query).fetchdf()
            records = result.to_dict(orient="records")

            schema_info = None
            if include_schema and not result.empty:
                schema_info = {
                    "columns": list(result.columns),
                    "dtypes": {col: str(dtype) for col, dtype in result.dtypes.items()},
                }

            return {
                "success": True,
                "result": records,
                "row_count": len(records),
                "schema": schema_info,
                "files_used": [str(f) for f in parquet_files],
                "views": registered,
            }
        except duckdb.Error as e:
            logger.info("SQL query error: %s", e)
            return {
                "success": False,
                "error": str(e),
                "code": "INVALID_ARGUMENT",
                "files_available": [str(f) for f in parquet_files],
            }
    finally:
        conn.close()


def get_table_schema(file_path: str) -> Dict[str, Any]:
    """
    Get schema information for a parquet file.

    Args:
        file_path: Path to the parquet file

    Returns:
        Dictionary with columns, a few sample rows and the row count
    """
    path = Path(file_path)
    if not path.exists() or path.suffix != ".parquet":
        return {
            "success": False,
            "error": f"File not found or not a parquet file: {file_path}",
            "code": "INVALID_ARGUMENT",
        }
    conn = create_connection()
    try:
        conn.execute(f"CREATE VIEW temp_view AS SELECT * FROM '{file_path}'")
        schema_result = conn.execute(
            "SELECT column_name, data_type FROM information_schema.columns WHERE table_name='temp_view'"
        ).fetchdf()
        sample_data = conn.execute("SELECT * FROM temp_view LIMIT 5").fetchdf()
        row_count = conn.execute("SELECT COUNT(*) AS count FROM temp_view").fetchone()[0]
        return {
            "success": True,
            "file_path": file_path,
            "columns": schema_result.to_dict(orient="records"),
            "sample_data": sample_data.to_dict(orient="records"),
            "row_count": row_count,
        }
    except duckdb.Error as e:
        return {"success": False, "error": str(e), "code": "INVALID_ARGUMENT"}
    finally:
        conn.close()
