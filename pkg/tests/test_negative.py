from __future__ import annotations

import pytest

from kit import NEG, cli, neg_cases
from notears.driver import check_files
from notears.errors import LoadError

CASES = neg_cases()


def test_corpus_is_large_enough():
    assert len(CASES) >= 10
    codes = {c.code for c in CASES}
    assert {"TypeMismatch", "UnboundIdentifier", "DuplicateDefinition", "ImportCycle"} <= codes


@pytest.mark.parametrize("case", CASES, ids=lambda c: c.path.stem)
def test_rejected_with_expected_diagnostic(case):
    proc = cli("check", str(case.path), cwd=NEG)
    assert proc.returncode == case.exit
    first = proc.stderr.splitlines()[0]
    assert first.startswith(f"{case.file}:{case.line}:")
    assert f": error: {case.code}: " in first


@pytest.mark.parametrize("case", CASES, ids=lambda c: c.path.stem)
def test_single_error_diagnostic(case):
    if case.exit == 2:
        with pytest.raises(LoadError) as info:
            check_files([case.path])
        assert info.value.code == case.code and info.value.span.line == case.line
        return
    result = check_files([case.path])
    assert not result.ok
    assert [d.code for d in result.diagnostics] == [case.code]
