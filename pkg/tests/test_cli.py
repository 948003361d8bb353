import json
import subprocess
import sys

import pytest

from golden import EXAMPLES, GOLDEN, chdir, manifest, render, run_entry
from kfilt.cli import main, render_json, run
from kfilt.document import parse_document
from kfilt.errors import ParseError, ValidationError


@pytest.mark.parametrize("entry", manifest(), ids=lambda e: e["golden"])
def test_documented_examples_match_golden_reports(entry):
    expected = (GOLDEN / f"{entry['golden']}.json").read_text()
    got = run_entry(entry)
    assert got["exit"] == entry["exit"]
    assert render(got) == expected


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc, indent=2))
    return str(p)


P1_RING = {"variables": ["x", "y"], "relations": [], "dimension": 1}


def test_exit_codes(tmp_path, capsys):
    with chdir(EXAMPLES):
        assert main(["df", "p1_product.json"]) == 0
        assert main(["df", "bad_polynomial.json"]) == 2
        assert "line 6" in capsys.readouterr().err
        assert main(["specialize", "p1_product.json"]) == 2  # no torus block
        assert main(["df", "p1_opposite_products.json"]) == 2  # two filtrations
        assert main(["df", "appendix.json", "--kmax", "10"]) == 3  # period 3 needs a longer range
        assert main(["appendix", "--kmax", "2"]) == 2
        assert main(["df", "missing.json"]) == 2


def test_two_documents_and_ring_mismatch(tmp_path):
    a = _write(tmp_path, "a.json", {"ring": P1_RING, "filtration": {"type": "product", "weights": [0, -1]}})
    b = _write(tmp_path, "b.json", {"ring": P1_RING, "filtration": {"type": "product", "weights": [-1, 0]}})
    c = _write(tmp_path, "c.json", {"ring": {"projective": 2}, "filtration": {"type": "trivial"}})
    _, body, _, code = run(["pair", a, b])
    assert code == 0 and body["pairing"]["value"] == "-1/12" and body["distance"]["cosine"] == "-1"
    assert main(["pair", a, c]) == 2


def test_json_errors_carry_positions():
    with pytest.raises(ParseError) as info:
        parse_document('{"ring": {"projective": 1},\n "filtration": [}')
    assert info.value.line == 2
    text = '{\n "ring": {"variables": ["x", "y"], "relations": ["x*y +"]}\n}'
    with pytest.raises(ParseError) as info:
        parse_document(text)
    assert "line 2" in str(info.value)
    with pytest.raises(ValidationError):
        parse_document('{"ring": {"projective": 1}, "options": {"colour": 3}}')
    with pytest.raises(ValidationError):
        parse_document('{"ring": {"projective": 1}, "torus": {"cocharacters": [[1]]}}')


def test_command_line_overrides_document_options(tmp_path):
    doc = _write(tmp_path, "d.json", {"ring": P1_RING, "filtration": {"type": "product", "weights": [0, -1]},
                                       "options": {"kmax": 12, "window": 3}})
    _, body, _, _ = run(["df", doc])
    assert body["inputs"]["options"] == {"kmax": 12, "window": 3, "seed": 0}
    _, body, _, _ = run(["df", doc, "--kmax", "14"])
    assert body["inputs"]["options"]["kmax"] == 14
    assert len(body["weights"]["sequences"]["h"]) == 15


def test_text_format_and_out_file(tmp_path):
    out = tmp_path / "report.txt"
    with chdir(EXAMPLES):
        assert main(["df", "p1_product.json", "--format", "text", "--out", str(out)]) == 0
    text = out.read_text()
    assert "norm_sq: 1/12 (~0.083333333)" in text
    assert text.rstrip().splitlines()[-1].startswith("elapsed:")


def test_rationals_are_strings_in_json():
    with chdir(EXAMPLES):
        _, body, timing, _ = run(["pair", "p1_opposite_products.json"])
    doc = json.loads(render_json(body, timing))
    assert doc["body"]["pairing"]["value"] == "-1/12"
    assert all(isinstance(x, str) for x in doc["body"]["pairing"]["P"])
    assert set(doc) == {"body", "timing"}


@pytest.mark.parametrize("args", [["df", "p1_product.json"], ["distance", "p1_opposite_products.json"],
                                  ["appendix", "--max-degree", "5"], ["project", "p2_tilted.json", "--seed", "3"]])
def test_bodies_are_byte_identical_across_runs(args):
    with chdir(EXAMPLES):
        first = run(args)
        second = run(args)
    assert json.dumps(first[1]) == json.dumps(second[1])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kfilt", "df", "p1_product.json"], cwd=EXAMPLES,
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["body"]["norm_sq"] == "1/12"
