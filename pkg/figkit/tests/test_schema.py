from pathlib import Path

import pytest

from figkit import CSV_COLUMNS, SchemaError, read_rows

DATA = Path(__file__).parent / "data"


def test_reads_golden_strategy_comparison():
    rows = read_rows(DATA / "strategy_comparison.csv")
    assert len(rows) == 40
    assert {r.strategy for r in rows} == {"equal", "load_based"}
    for row in rows:
        assert 0.0 <= row.pr_analytical <= 1.0
        assert row.pr_analytical == pytest.approx(row.pr_m + row.pr_s, abs=1e-12)
        assert row.pr_mc is not None and row.mc_se is not None
        assert row.quad_flag == "ok"


def test_empty_mc_columns_read_as_none():
    rows = read_rows(DATA / "users_family.csv")
    assert all(r.pr_mc is None and r.mc_se is None for r in rows)


def test_missing_columns_are_named(tmp_path):
    path = tmp_path / "short.csv"
    cols = [c for c in CSV_COLUMNS if c not in ("pr_s", "quad_flag")]
    path.write_text(",".join(cols) + "\n" + ",".join("1" for _ in cols) + "\n")
    with pytest.raises(SchemaError, match="pr_s, quad_flag"):
        read_rows(path)


def test_header_only_and_empty_files(tmp_path):
    header_only = tmp_path / "header.csv"
    header_only.write_text(",".join(CSV_COLUMNS) + "\n")
    with pytest.raises(SchemaError, match="no data rows"):
        read_rows(header_only)
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(SchemaError, match="header"):
        read_rows(empty)


def test_non_numeric_cell_is_located(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(
        ",".join(CSV_COLUMNS)
        + "\nequal,0.5,3e8,5,5e7,0.4,0.3,0.1,,,ok"
        + "\nequal,oops,3e8,5,5e7,0.4,0.3,0.1,,,ok\n"
    )
    with pytest.raises(SchemaError, match="line 3.*eta"):
        read_rows(path)
