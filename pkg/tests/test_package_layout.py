"""
Structural checks on the package layout.
These tests read the sources with `ast` and do not execute the algebra engine.
"""

import ast
from pathlib import Path

SRC = Path(__file__).parent.parent / "src"


def _imported_modules(path: Path):
    tree = ast.parse(path.read_text())
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom) and node.module:
            yield node.module
        elif isinstance(node, ast.Import):
            for alias in node.names:
                yield alias.name


class TestLayering:
    """Lower layers never import upper ones"""

    def test_algebra_does_not_import_geometry_or_cli(self):
        for path in (SRC / "algebra").glob("*.py"):
            for module in _imported_modules(path):
                assert not module.startswith(("src.geometry", "src.cli")), f"{path.name} imports {module}"

    def test_geometry_does_not_import_cli(self):
        for path in (SRC / "geometry").glob("*.py"):
            for module in _imported_modules(path):
                assert not module.startswith("src.cli"), f"{path.name} imports {module}"

    def test_modules_log_through_project_logger(self):
        """No module configures the logging package on its own"""
        for path in SRC.rglob("*.py"):
            if path.parent.name == "utils":
                continue
            assert "logging.basicConfig" not in path.read_text(), path.name


class TestErrorCodes:
    """Every domain error carries the code printed by the CLI"""

    def test_codes_match_class_names(self):
        tree = ast.parse((SRC / "algebra" / "errors.py").read_text())
        classes = [n for n in tree.body if isinstance(n, ast.ClassDef) and n.name != "ToolkitError"]
        assert classes
        for cls in classes:
            codes = [
                stmt.value.value
                for stmt in cls.body
                if isinstance(stmt, ast.Assign)
                and any(isinstance(t, ast.Name) and t.id == "code" for t in stmt.targets)
            ]
            assert codes == [cls.name], f"{cls.name} declares {codes}"

    def test_every_keyword_has_a_handler(self):
        from src.cli.runner import SessionRunner
        from src.cli.session import GRAMMAR

        assert set(SessionRunner()._handlers) == set(GRAMMAR)


class TestLogging:
    """Log lines name the project"""

    def test_format_carries_project_name(self):
        import logging

        from src.config.settings import settings
        from src.utils.logging import LOG_FORMAT

        record = logging.LogRecord("src.geometry.normal", logging.WARNING, __file__, 1, "message", None, None)
        formatted = logging.Formatter(LOG_FORMAT).format(record)
        assert f" - {settings.PROJECT_NAME} - src.geometry.normal - WARNING - message" in formatted
