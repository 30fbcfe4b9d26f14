import json
import subprocess
import sys
from pathlib import Path

import pytest

from dgcat.cli import main
from dgcat.errors import StructureError
from dgcat.io_json import (
    emit_workspace,
    parse_text,
    render_document,
)
from dgcat.shipped import SHIPPED_BUILDERS, shipped_documents

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_text(name):
    return (FIXTURE_DIR / f"{name}.json").read_text(encoding="utf-8")


def test_shipped_files_match_builders():
    documents = shipped_documents()
    for name, text in documents.items():
        assert fixture_text(name) == text


def test_parse_emit_roundtrip_is_canonical():
    for name in SHIPPED_BUILDERS:
        text = fixture_text(name)
        workspace = parse_text(text)
        emitted = render_document(emit_workspace(workspace))
        assert emitted == text
        again = render_document(emit_workspace(parse_text(emitted)))
        assert again == emitted


def test_parse_rejects_bad_scalar():
    text = fixture_text("kkk").replace('"1"', '"1.5"', 1)
    with pytest.raises(StructureError):
        parse_text(text)


def test_parse_rejects_bad_json():
    with pytest.raises(StructureError):
        parse_text("{not json")


def test_d_squared_nonzero_parses_and_fails_validation(tmp_path):
    # A bad differential is a mathematical failure with a witness degree,
    # not a schema rejection.
    document = {
        "field": "Q",
        "categories": {
            "T": {
                "objects": ["t"],
                "hom": {
                    "t": {
                        "t": {
                            "dims": {"0": 1, "1": 1, "2": 1},
                            "d": {"0": [["1"]], "1": [["1"]]},
                        }
                    }
                },
                "comp": {"t": {"t": {"t": [[0, 0, 0, 0, 0, "1"]]}}},
                "id": {"t": ["1"]},
            }
        },
    }
    src = tmp_path / "dd.json"
    src.write_text(json.dumps(document), encoding="utf-8")
    code, text = run_cli(["validate", "--input", str(src)], tmp_path)
    assert code == 1
    report = json.loads(text)
    checks = {c["name"]: c for c in report["checks"]}
    bad = checks["category[T].d_squared"]
    assert bad["status"] == "FAIL"
    assert bad["witness"]["degree"] == 0


def run_cli(args, tmp_path, stdin_text=None):
    out_file = tmp_path / "out.json"
    argv = list(args) + ["--output", str(out_file)]
    code = main(argv)
    text = out_file.read_text(encoding="utf-8") if out_file.exists() else ""
    return code, text


def test_cli_validate_shipped(tmp_path):
    for name in SHIPPED_BUILDERS:
        src = tmp_path / f"{name}.json"
        src.write_text(fixture_text(name), encoding="utf-8")
        code, text = run_cli(["validate", "--input", str(src)], tmp_path)
        assert code == 0, text
        report = json.loads(text)
        assert report["passed"] is True


def test_cli_validate_negative_control(tmp_path):
    # corrupt the exterior fixture so that x . x = 1 is claimed, which is a
    # degree violation caught as a structural error at parse time; instead
    # corrupt an identity coordinate, a mathematical failure
    document = json.loads(fixture_text("kkk"))
    document["categories"]["T"]["id"]["t"] = ["2"]
    src = tmp_path / "bad.json"
    src.write_text(json.dumps(document), encoding="utf-8")
    code, text = run_cli(["validate", "--input", str(src)], tmp_path)
    assert code == 1
    report = json.loads(text)
    failing = [c["name"] for c in report["checks"] if c["status"] == "FAIL"]
    assert any("units" in name for name in failing)


def test_cli_check_equivalence_shipped(tmp_path):
    for name in SHIPPED_BUILDERS:
        src = tmp_path / f"{name}.json"
        src.write_text(fixture_text(name), encoding="utf-8")
        code, text = run_cli(
            ["check-equivalence", "--input", str(src), "--seed", "7"], tmp_path
        )
        assert code == 0, text
        report = json.loads(text)
        assert report["passed"] is True
        assert report["seed"] == 7


def test_cli_check_equivalence_deterministic(tmp_path):
    src = tmp_path / "kkk.json"
    src.write_text(fixture_text("kkk"), encoding="utf-8")
    _, first = run_cli(
        ["check-equivalence", "--input", str(src), "--seed", "11"], tmp_path
    )
    _, second = run_cli(
        ["check-equivalence", "--input", str(src), "--seed", "11"], tmp_path
    )
    assert first == second


def test_cli_check_equivalence_window_guard(tmp_path):
    src = tmp_path / "kkk.json"
    src.write_text(fixture_text("kkk"), encoding="utf-8")
    code = main(
        [
            "check-equivalence",
            "--input",
            str(src),
            "--degree-window",
            "0:0",
            "--output",
            str(tmp_path / "o.json"),
        ]
    )
    # the kkk shape window is exactly 0:0, so this is allowed
    assert code == 0
    code = main(
        [
            "check-equivalence",
            "--input",
            str(src),
            "--degree-window",
            "1:1",
            "--output",
            str(tmp_path / "o2.json"),
        ]
    )
    assert code == 2


def test_cli_corrupted_composition_fails_at_lambda_validation(tmp_path):
    document = json.loads(fixture_text("kkk"))
    # flip the sign of the only composition entry in T
    entry = document["categories"]["T"]["comp"]["t"]["t"]["t"][0]
    entry[5] = "-1"
    src = tmp_path / "bad.json"
    src.write_text(json.dumps(document), encoding="utf-8")
    code, text = run_cli(["check-equivalence", "--input", str(src)], tmp_path)
    assert code == 1
    report = json.loads(text)
    failing = [c["name"] for c in report["checks"] if c["status"] == "FAIL"]
    assert failing
    assert all(not name.startswith("full_faithful") for name in failing)
    assert any(name == "equivalence_verified" for name in failing)


def test_cli_oppose_and_tensor_roundtrip(tmp_path):
    src = tmp_path / "exterior.json"
    src.write_text(fixture_text("exterior"), encoding="utf-8")
    code, text = run_cli(
        ["oppose", "--input", str(src), "--category", "T"], tmp_path
    )
    assert code == 0
    opposed = parse_text(text)
    assert "T.op" in opposed.categories
    from dgcat.category import validate_dg_category

    assert validate_dg_category(opposed.categories["T.op"]).passed

    code, text = run_cli(
        ["tensor", "--input", str(src), "--left", "T", "--right", "U"], tmp_path
    )
    assert code == 0
    product = parse_text(text)
    name = "T.tensor.U"
    assert name in product.categories
    assert validate_dg_category(product.categories[name]).passed


def test_cli_lambda_emission_roundtrips(tmp_path):
    for name in SHIPPED_BUILDERS:
        src = tmp_path / f"{name}.json"
        src.write_text(fixture_text(name), encoding="utf-8")
        code, text = run_cli(
            [
                "lambda",
                "--input",
                str(src),
                "--t",
                "T",
                "--u",
                "U",
                "--bimodule",
                "M",
                "--name",
                "L",
            ],
            tmp_path,
        )
        assert code == 0
        emitted = parse_text(text)
        assert "L" in emitted.categories
        from dgcat.category import validate_dg_category

        assert validate_dg_category(emitted.categories["L"]).passed
        # byte-identical re-emission
        out = tmp_path / "again.json"
        out.write_text(text, encoding="utf-8")
        code2, text2 = run_cli(
            ["validate", "--input", str(out)], tmp_path
        )
        assert code2 == 0
        from dgcat.io_json import emit_workspace as _ew, render_document as _rd

        assert _rd(_ew(parse_text(text))) == text


def test_cli_lambda_kkk_dims(tmp_path):
    src = tmp_path / "kkk.json"
    src.write_text(fixture_text("kkk"), encoding="utf-8")
    code, text = run_cli(
        ["lambda", "--input", str(src), "--t", "T", "--u", "U", "--bimodule", "M"],
        tmp_path,
    )
    assert code == 0
    document = json.loads(text)
    cat = next(iter(document["categories"].values()))
    pair = "t|u"
    assert cat["hom"][pair][pair]["dims"] == {"0": 3}


def test_cli_unknown_name_is_structural(tmp_path):
    src = tmp_path / "kkk.json"
    src.write_text(fixture_text("kkk"), encoding="utf-8")
    code = main(
        [
            "oppose",
            "--input",
            str(src),
            "--category",
            "NOPE",
            "--output",
            str(tmp_path / "x.json"),
        ]
    )
    assert code == 2


def test_console_entry_point(tmp_path):
    src = tmp_path / "kkk.json"
    src.write_text(fixture_text("kkk"), encoding="utf-8")
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "dgcat.cli",
            "validate",
            "--input",
            str(src),
            "--output",
            "-",
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"] is True
    assert "wall time" in proc.stderr
