import csv
import io

import pytest

from ltlpar.bench import OUT_OF_RANGE, DifficultyClass, EmptySuiteError, SuiteReport, classify, ingest, run_suite
from ltlpar.formula import parse
from ltlpar.tableau import SAT, UNSAT, Budget


def test_ingest(tmp_path):
    (tmp_path / "a.ltl").write_text("p")
    (tmp_path / "b.ltl").write_text("p&~p")
    items = ingest(tmp_path)
    assert [i.name for i in items] == ["a.ltl", "b.ltl"]
    assert items[1].formula == parse("p & ~p")


def test_ingest_skips_bad_files(tmp_path, caplog):
    (tmp_path / "a.ltl").write_text("p")
    (tmp_path / "broken.ltl").write_text("p & (")
    (tmp_path / "bin.ltl").write_bytes(b"\xff\xfe\x00")
    (tmp_path / ".hidden").write_text("q")
    items = ingest(tmp_path)
    assert [i.name for i in items] == ["a.ltl"]
    assert "broken.ltl" in caplog.text


def test_ingest_expected_from_directories(tmp_path):
    (tmp_path / "sat").mkdir()
    (tmp_path / "unsat").mkdir()
    (tmp_path / "sat" / "x.ltl").write_text("Fp")
    (tmp_path / "unsat" / "y.ltl").write_text("Gp & F~p")
    assert {i.name: i.expected for i in ingest(tmp_path)} == {"sat/x.ltl": SAT, "unsat/y.ltl": UNSAT}


def test_ingest_empty(tmp_path):
    with pytest.raises(EmptySuiteError):
        ingest(tmp_path)


def test_classify_examples():
    assert classify(0.5, UNSAT) == DifficultyClass("U", 0)
    assert str(classify(150, SAT)) == "S3"
    assert classify(0.01, SAT) == OUT_OF_RANGE
    assert classify(1000, SAT) == OUT_OF_RANGE


def test_classify_bands_partition():
    edges = {0.1: 0, 0.999: 0, 1.0: 1, 9.99: 1, 10.0: 2, 99.9: 2, 100.0: 3, 999.0: 3}
    for t, k in edges.items():
        assert classify(t, UNSAT).decade == k, t



def _items(tmp_path):
    for name, text in [("a", "Gp & F~p"), ("b", "Xp&~Xp|XXq"), ("c", "G(Fq) & G~q"), ("d", "GFp & GF~p")]:
        (tmp_path / f"{name}.ltl").write_text(text)
    return ingest(tmp_path)


def test_run_suite_consistent(tmp_path):
    report = run_suite(_items(tmp_path), [1, 2], [2, 4], Budget(10**5, 10))
    assert report.inconsistent() == []
    assert {report.serial[n].outcome for n in report.names} == {SAT, UNSAT}
    rows = list(csv.reader(io.StringIO(report.items_table())))
    assert rows[0][:5] == ["name", "class", "serial_verdict", "serial_seconds", "serial_vertices"]
    assert len(rows) == 5
    report.write(tmp_path / "out")
    for name in ("items.csv", "speedups.csv", "cumulative_sat.csv", "summary.txt"):
        assert (tmp_path / "out" / name).exists()
    assert "verdicts consistent" in report.summary()


def test_report_columns_deterministic(tmp_path):
    items = _items(tmp_path)

    def stable(report):
        return [(n, report.serial[n].outcome, report.serial[n].vertices,
                 *((report.parallel[n, j, d].outcome, report.parallel[n, j, d].vertices) for j, d in report.configs))
                for n in report.names]

    assert stable(run_suite(items, [2], [3], Budget(10**5))) == stable(run_suite(items, [2], [3], Budget(10**5)))


def test_timeouts_and_lower_bounds():
    from ltlpar.bench import Cell
    r = SuiteReport([(2, 4)], ["x", "y"])
    r.serial = {"x": Cell("timeout", 60.0), "y": Cell(SAT, 2.0, 10)}
    r.parallel = {("x", 2, 4): Cell(SAT, 3.0, 5), ("y", 2, 4): Cell("timeout", 60.0)}
    r.classes = {"x": OUT_OF_RANGE, "y": classify(2.0, SAT)}
    assert r.speedup("x", 2, 4) == (20.0, True)
    assert r.speedup("y", 2, 4) is None
    assert ">20.00" in r.items_table()


def test_cumulative_curve_monotone(tmp_path):
    report = run_suite(_items(tmp_path), [1, 2], [2], Budget(10**5))
    rows = list(csv.reader(io.StringIO(report.cumulative_sat())))
    body = [[float(x) for x in row] for row in rows[1:]]
    for col in range(1, len(rows[0])):
        column = [row[col] for row in body]
        assert column == sorted(column)
    assert body[-1][1:] == [2, 2, 2]
