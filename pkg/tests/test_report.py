from __future__ import annotations

import io
import json
import math

from zonalcycle.report import (
    Report,
    exit_code,
    render_csv,
    render_json,
    render_rows_csv,
    round_floats,
    write_text,
)


def test_round_floats() -> None:
    assert round_floats(math.pi) == 3.14159265358979
    assert round_floats({"a": [math.inf, 1, True]}) == {"a": ["inf", 1, True]}
    assert round_floats("text") == "text"


def test_numeric_reports() -> None:
    passing = Report.numeric("c", expected=2.0, computed=2.0 + 1e-9, tolerance=1e-6)
    assert passing.passed
    assert passing.details["abs_err"] < 1e-8

    failing = Report.numeric("c", expected=2.0, computed=2.1, tolerance=1e-6)
    assert failing.status == "fail"

    absolute = Report.numeric(
        "c", expected=0.0, computed=1e-10, tolerance=1e-9, relative=False
    )
    assert absolute.passed


def test_exact_and_flag_reports() -> None:
    assert Report.exact("e", expected=-1, computed=-1).computed == "-1"
    assert not Report.exact("e", expected=6, computed=5).passed
    assert Report.flag("f", holds=True).passed
    assert Report.flag("f", holds=False).status == "fail"


def test_exit_code() -> None:
    assert exit_code([Report.flag("f", holds=True)]) == 0
    warned = Report(check="w", status="warn")
    assert exit_code([Report.flag("f", holds=True), warned]) == 1
    assert exit_code([]) == 0


def test_render_json_envelope() -> None:
    text = render_json("braid", [Report.flag("f", holds=True, inputs={"n": 1})])
    envelope = json.loads(text)
    assert envelope["schema"] == 1
    assert envelope["command"] == "braid"
    (report,) = envelope["reports"]
    assert report["status"] == "pass"
    assert report["inputs"] == {"n": 1}


def test_render_csv() -> None:
    text = render_csv([Report.flag("f", holds=True, inputs={"n": 1})])
    header, row = text.splitlines()
    assert header.split(",") == list(Report.CSV_COLUMNS)
    assert row.startswith("f,pass,True,True,")


def test_render_rows_csv() -> None:
    rows = [{"marked": [1, 2], "length": 1}, {"marked": [1, 1], "length": 0}]
    assert render_rows_csv(rows).splitlines() == [
        "marked,length",
        '"[1, 2]",1',
        '"[1, 1]",0',
    ]
    assert render_rows_csv([]) == ""


def test_write_text() -> None:
    handle = io.StringIO()
    write_text("gram", [Report.flag("dimension", holds=True)], handle)
    assert "dimension" in handle.getvalue()
    assert "pass" in handle.getvalue()


def test_render_json_is_byte_identical_after_a_round_trip() -> None:
    reports = [
        Report.numeric(
            "constant",
            expected=math.pi,
            computed=math.pi * (1 + 1e-12),
            tolerance=1e-9,
            inputs={"n": 2, "k": 0.5},
        ),
        Report.exact("eigenvalue slot=1", expected=-1, computed=-1),
        Report.flag("diagonal-prefactor", holds=True, details={"blocks": []}),
    ]
    text = render_json("verify-constant", reports)
    envelope = json.loads(text)
    again = [Report(**report) for report in envelope["reports"]]
    assert render_json(envelope["command"], again) == text
