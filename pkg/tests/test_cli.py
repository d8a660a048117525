"""
Tests for the session language, the runner and the command-line entry point.
"""

import io
import json

import pytest

from src.algebra.errors import MissingUniformizer, NotAdmissible, RingMismatch
from src.cli.main import main
from src.cli.runner import RunOptions, SessionRunner, render_results
from src.cli.schemas import CheckModel, LiftModel
from src.cli.session import (
    Frac,
    IdealLit,
    Ref,
    SessionSyntaxError,
    UnboundName,
    parse_session,
    parse_statement,
)
from tests.conftest import CORPUS_DIR

CUSP = """\
ring A = vars[w, x] rels[x^2 - w^3] idef[w]
blowup At = A ideal(x, w)
check principal At
check closed A
point P = A e=2 x -> v^3
lift Q = P At
spc P x
spc P 1
"""


def run(text):
    return SessionRunner().run_session(parse_session(text))


class TestSessionParsing:
    """Grammar, canonical rendering and name resolution"""

    def test_corpus_round_trips(self, corpus_files):
        assert corpus_files
        for path in corpus_files:
            session = parse_session(path.read_text())
            again = parse_session(session.render())
            assert again.statements == session.statements
            assert again.render() == session.render()

    def test_statement_structure(self):
        s = parse_statement("extend K = L at x frac(w^2, 1), frac(w*x, 0)")
        assert s.keyword == "extend"
        assert s.target == "K"
        assert s.args[0] == Ref("L")
        assert s.args[3:] == (Frac("w^2", 1), Frac("w*x", 0))
        assert s.render() == "extend K = L at x frac(w^2, 1), frac(w*x, 0)"

    def test_ideal_shorthand(self):
        s = parse_statement("ideal J = A (x, w)")
        assert s.args[1] == IdealLit(("x", "w"))
        assert s.render() == "ideal J = A ideal(x, w)"

    def test_flags(self):
        s = parse_statement("normalize N = A --degree-bound 4")
        assert s.flag("degree-bound") == 4
        assert s.flag("max-steps") is None
        assert s.render() == "normalize N = A --degree-bound 4"

    def test_optional_binding(self):
        assert parse_statement("blowup A ideal(x, w)").target is None
        assert parse_statement("blowup At = A ideal(x, w)").target == "At"

    def test_comments_and_blank_lines(self):
        session = parse_session("# header\n\nring A = vars[w, x]  # the line\n")
        assert len(session.statements) == 1
        assert session.statements[0].line == 3
        assert session.bindings == {"A": "algebra"}

    def test_unknown_command(self):
        with pytest.raises(SessionSyntaxError) as info:
            parse_session("ring A = vars[w, x]\nfrobnicate A\n")
        assert (info.value.line, info.value.col) == (2, 1)

    def test_unclosed_bracket(self):
        with pytest.raises(SessionSyntaxError) as info:
            parse_session("ring A = vars[w, x\n")
        assert info.value.line == 1
        assert info.value.expected == "']'"

    def test_required_binding(self):
        with pytest.raises(SessionSyntaxError):
            parse_statement("ring vars[w, x]")

    def test_unbound_name(self):
        with pytest.raises(UnboundName) as info:
            parse_session("ring A = vars[w, x]\nblowup At = B ideal(x, w)\n")
        assert info.value.name == "B"
        assert info.value.line == 2

    def test_ring_without_uniformizer(self):
        with pytest.raises(MissingUniformizer):
            parse_session("ring A = vars[x, y]\n")


class TestRunner:
    """Statements executed against the environment"""

    def test_cusp_session(self):
        results = run(CUSP)
        assert [r.command for r in results][:2] == [
            "ring A = vars[w, x] rels[x^2 - w^3] idef[w]",
            "blowup At = A ideal(x, w)",
        ]
        principal, closed = results[2].result, results[3].result
        assert isinstance(principal, CheckModel) and principal.passed
        assert not closed.passed
        assert closed.items[0].detail == "x/w is integral"
        lift = results[5].result
        assert isinstance(lift, LiftModel)
        assert lift.chart == 1
        assert lift.point.values == {"w": "v^2", "x": "v^3", "t0": "v", "t1": "1"}
        assert results[6].result.value is True
        assert results[7].result.value is False

    def test_show_normalization(self):
        results = run("ring A = vars[w, x] rels[x^2 - w^3]\nnormalize N = A\nshow N\n")
        shown = results[2].result
        assert shown.closure.variables == ["w", "x", "z1"]
        assert [a.numerator for a in shown.adjoined] == ["x"]
        assert shown.complete

    def test_descent(self):
        results = run("ring L = vars[w, x]\nring M = vars[w, y]\ndescend L M frac(w*y, 1)\ndescend L M frac(y, 1)\n")
        assert results[2].result.map.images == {"w": "w", "x": "y"}
        assert results[3].result.needs_blowup == 0
        assert results[3].result.to_text() == "NeedsBlowup(0)"

    def test_cocycle_check_covers_all_triples(self):
        results = run("ring S = vars[w, x, y]\nblowup B = S ideal(x, y, w)\ncheck cocycle B\n")
        check = results[2].result
        assert len(check.items) == 6
        assert check.passed

    def test_transitivity(self):
        results = run("ring P = vars[w, x] idef[w, x]\ncheck transitivity P 3 2 1\n")
        assert results[1].result.passed

    def test_ideal_from_another_algebra(self):
        text = "ring A = vars[w, x]\nring B = vars[w, x] rels[x^2]\nideal J = A (x, w)\nblowup B J\n"
        with pytest.raises(RingMismatch):
            run(text)

    def test_lex_order(self):
        options = RunOptions.from_settings(order_name="lex")
        session = parse_session("ring A = vars[w, x, y]\ngb A ideal(x - w^2, y - w^3)\n")
        gb = SessionRunner(options).run_session(session)[1].result
        assert gb.order == "lex"
        assert "x^3 - y^2" in gb.basis

    def test_json_rendering(self):
        rendered = render_results(run(CUSP), as_json=True)
        documents = json.loads(rendered)
        assert all(doc["format"] == 1 for doc in documents)
        assert documents[2]["result"]["passed"] is True
        assert documents[3]["result"]["passed"] is False

    def test_text_rendering(self):
        rendered = render_results(run("ring A = vars[w, x] rels[x^2 - w^3]\ncheck adic A\n"))
        assert rendered.splitlines()[0] == "> ring A = vars[w, x] rels[x^2 - w^3] idef[]"
        assert "adic A: PASS" in rendered


class TestEntryPoint:
    """Exit codes and stream handling"""

    def test_corpus_runs(self, corpus_files):
        for path in corpus_files:
            assert main([str(path)]) == 0

    def test_output_is_deterministic(self, capsys):
        path = str(CORPUS_DIR / "cusp.session")
        main([path, "--json"])
        first = capsys.readouterr().out
        main([path, "--json"])
        assert capsys.readouterr().out == first

    def test_stdin(self, monkeypatch, capsys):
        monkeypatch.setattr("sys.stdin", io.StringIO("ring A = vars[w, x]\nempty? A\n"))
        assert main([]) == 0
        assert capsys.readouterr().out.endswith("false\n")

    def test_syntax_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.session"
        path.write_text("ring A = vars[w, x]\nblowup At = A\n")
        assert main([str(path)]) == 2
        assert capsys.readouterr().err.startswith("error[SyntaxError]: line 2")

    def test_polynomial_syntax_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.session"
        path.write_text("ring A = vars[w, x] rels[x +* w]\n")
        assert main([str(path)]) == 2
        assert capsys.readouterr().err.startswith("error[")

    def test_domain_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.session"
        path.write_text("ring P = vars[w, x] idef[w, x]\nblowup P ideal(x)\n")
        assert main([str(path)]) == 1
        assert capsys.readouterr().err.startswith(f"error[{NotAdmissible.code}]")

    def test_results_before_an_error_are_printed(self, tmp_path, capsys):
        path = tmp_path / "bad.session"
        path.write_text("ring P = vars[w, x] idef[w, x]\ncheck adic P\nblowup P ideal(x)\ncheck adic P\n")
        assert main([str(path)]) == 1
        captured = capsys.readouterr()
        assert captured.out.startswith("> ring P = vars[w, x]")
        assert "adic P" in captured.out
        assert len([line for line in captured.out.splitlines() if line.startswith("> ")]) == 2
        assert captured.err.startswith(f"error[{NotAdmissible.code}]")

    def test_json_output_before_an_error(self, tmp_path, capsys):
        path = tmp_path / "bad.session"
        path.write_text("ring P = vars[w, x] idef[w, x]\nblowup P ideal(x)\n")
        assert main([str(path), "--json"]) == 1
        documents = json.loads(capsys.readouterr().out)
        assert [d["command"].split()[0] for d in documents] == ["ring"]

    def test_missing_file(self, tmp_path, capsys):
        assert main([str(tmp_path / "missing.session")]) == 1
        assert capsys.readouterr().err.startswith("error[IOError]")

    def test_prime_field_option(self, tmp_path, capsys):
        path = tmp_path / "fp.session"
        path.write_text("ring A = vars[w, x] rels[3*x - w]\ngb A\n")
        assert main([str(path), "--field", "fp:3"]) == 0
        assert "grevlex: [w]" in capsys.readouterr().out
