from ltlpar.cli import main
from ltlpar.profiler import read_trace


def test_solve_and_profile(tmp_path, capsys):
    trace = tmp_path / "run.trace"
    assert main(["solve", "-l", "GFp & GF~p", "--trace", str(trace), "--split-depth", "4"]) == 5
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "Satisfiable" and out[2] == "loop: {p};{}"
    assert read_trace(trace)[0].depth == 0

    assert main(["profile", "--trace", str(trace)]) == 0
    assert capsys.readouterr().out.startswith("depth,run\n0,1\n")
    assert main(["profile", "--trace", str(trace), "--estimate", "2,4"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "job,cost"
    assert main(["profile", "--trace", str(trace), "--sweep", "1,2", "4,6"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "jobs,d=4,d=6"


def test_solve_job_env(monkeypatch, capsys):
    monkeypatch.setenv("JOB_NO", "2/2@1")
    assert main(["solve", "-l", "Xp&~Xp|XXq"]) == 0
    monkeypatch.setenv("JOB_NO", "1/2@1")
    assert main(["solve", "-l", "Xp&~Xp|XXq"]) == 5
    monkeypatch.setenv("JOB_NO", "garbage")
    assert main(["solve", "-l", "p"]) == 1


def test_budget_exit(capsys):
    assert main(["solve", "-l", "XG((Fq U F(p | p)) U (~q & q))", "--max-vertices", "1000"]) == 1
    assert "budget" in capsys.readouterr().out


def test_gen_bench_oracle(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    assert main(["gen", "--length", "12", "--count", "3", "--seed", "9", "--out", str(corpus)]) == 0
    assert len(list(corpus.iterdir())) == 3
    capsys.readouterr()
    assert main(["bench", "--dir", str(corpus), "--jobs", "1,2", "--depths", "3", "--budget", "5s",
                 "--out", str(tmp_path / "rep")]) == 0
    assert "verdicts consistent" in capsys.readouterr().out
    assert (tmp_path / "rep" / "speedups.csv").exists()
    assert main(["oracle", "-l", "GFp & FG~p"]) == 0
    assert main(["oracle", "-l", "GFp"]) == 5


def test_file_input_and_parse_error(tmp_path, capsys):
    f = tmp_path / "f.ltl"
    f.write_text("Gp & F~p\n")
    assert main(["parallel", "-n", "3", "-d", "2", "--file", str(f)]) == 0
    assert capsys.readouterr().out == "VOTE: formula is unsatisfiable\n"
    assert main(["solve", "-l", "p U"]) == 1
    assert "position" in capsys.readouterr().err
