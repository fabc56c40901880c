import io
import json
import os
import shlex
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from ordclass import cli, oracle
from ordclass import ordinals as core

GOLDEN_DIR = Path(__file__).parent / "golden"
REGEN = os.environ.get("ORDCLASS_REGEN_GOLDEN") == "1"

K_PAIR = ["K(C(1,l_2),C(w_1*(w+1),l_2))", "K(C(1,l_2),C(w_1*w,l_2))"]

# name -> argv; each transcript records stdout and the exit status
GOLDEN = {
    "classify-cancellation": ["classify", "K(C(w,l_2),C(w^2,l_2))", "K(C(w^2,l_2),C(w^3,l_2))"],
    "psi-window": ["psi", "w", "w_1*w+5"],
    "classify-p-greater-than-q": ["classify", "K(C(w,l_2),C(w,l_3))", "K(C(w,l_3),C(w,l_2))"],
    "literal-canonical": ["--psi-mode", "literal", "--explain", "classify", *K_PAIR],
    "literal-abstract": ["--psi-mode", "literal", "--explain", "classify", "--method", "abstract", *K_PAIR],
    "repaired-canonical": ["--explain", "classify", *K_PAIR],
    "repaired-abstract": ["--explain", "classify", "--method", "abstract", *K_PAIR],
    "tagged-no-rvm": ["--explain", "classify", "K(C(w,l_2),C(w_1,l_2))", "K(C(w,l_2),C(w_1*w,l_2))"],
    "tagged-undecided": [
        "--explain", "--assume-no-rvm", "false",
        "classify", "K(C(w,l_2),C(w_1,l_2))", "K(C(w,l_2),C(w_1*w,l_2))",
    ],
    "calc": ["calc", "w^w*5+w^2"],
    "psi-json": ["--json", "psi", "w", "w_1*w+5"],
    "classify-json": ["--json", "classify", "C(w^w)", "C(w^w*3+w)"],
    "unicode-norm": ["--unicode", "norm", "w_1*w + w^w + 3"],
}


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    try:
        status = cli.main(list(argv), out=out, err=err)
    except SystemExit as exc:  # argparse usage errors
        status = exc.code
    return status, out.getvalue(), err.getvalue()


def transcript(argv):
    status, out, _ = run(argv)
    return f"$ ordclass {shlex.join(argv)}\n{out}[exit {status}]\n"


class TestSpecExamples:
    def test_cancellation(self):
        assert run(GOLDEN["classify-cancellation"])[:2] == (0, "Isomorphic\n")

    def test_psi(self):
        assert run(GOLDEN["psi-window"])[:2] == (0, "w_1*w\n")

    def test_out_of_scope(self):
        assert run(GOLDEN["classify-p-greater-than-q"])[:2] == (3, "OutOfScope\n")


class TestExitCodes:
    def test_parse_error(self):
        status, out, err = run(["norm", "w^^2"])
        assert status == cli.EXIT_PARSE
        assert out == "" and "offset 2" in err

    @pytest.mark.parametrize(
        "argv",
        [
            ["classify", "C(w,l_2)", "C(w,l_1)"],
            ["classify", "C(0)", "C(w)"],
            ["cmp", "w"],
            ["psi", "0", "w"],
            ["calc", "w", "--batch", "x"],
        ],
    )
    def test_domain_error(self, argv):
        status, out, err = run(argv)
        assert status == cli.EXIT_DOMAIN
        assert out == "" and err

    def test_usage_error_from_argparse(self):
        assert run(["frobnicate"])[0] == cli.EXIT_DOMAIN
        assert run(["--psi-mode", "other", "norm", "1"])[0] == cli.EXIT_DOMAIN

    def test_out_of_scope(self):
        assert run(["classify", "C(w)", "C(w,l_2)"])[0] == cli.EXIT_OUT_OF_SCOPE

    def test_selftest_ok(self):
        status, out, _ = run(["selftest", "--suite", "division"])
        assert status == cli.EXIT_OK
        assert out.splitlines()[-1] == "selftest: ok"

    def test_selftest_mismatch(self, monkeypatch):
        broken = (("add", lambda a, b: core.add(b, a), oracle._add),)
        monkeypatch.setattr(oracle, "_OPS", broken)
        status, out, _ = run(["selftest", "--suite", "arith"])
        assert status == cli.EXIT_SELFTEST
        assert out.splitlines()[-1] == "selftest: FAILED"

    def test_errors_go_to_stderr(self):
        status, out, err = run(["norm", "w +"])
        assert out == "" and err.startswith("syntax error")


class TestSubcommands:
    def test_norm_and_cmp(self):
        assert run(["norm", "1 + w + w*2"])[1] == "w*3\n"
        assert run(["cmp", "w*2", "w^2"])[1] == "less\n"
        assert run(["cmp", "w_1", "w^w"])[1] == "greater\n"
        assert run(["cmp", "1+w", "w"])[1] == "equal\n"

    def test_card_and_cof(self):
        assert run(["card", "w_1*w + 5"])[1] == "aleph_1\n"
        assert run(["card", "7"])[1] == "7\n"
        assert run(["cof", "w_[w]"])[1] == "w\n"
        assert run(["cof", "w_2"])[1] == "w_2\n"

    def test_calc_finite(self):
        out = run(["calc", "2^10"])[1]
        assert out == "value: 1024\ncardinality: 1024\ncofinality: 1\nkind: successor\n"

    def test_flags_before_or_after_subcommand(self):
        a = run(["--psi-mode", "literal", "psi", "1", "w_1*(w+1)"])
        b = run(["psi", "--psi-mode", "literal", "1", "w_1*(w+1)"])
        assert a == b and a[1] == "w_1*w\n"

    def test_explain_header_names_defaults(self):
        out = run(["--explain", "psi", "w", "w^2"])[1]
        assert out.startswith("# psi_mode: repaired (default)\n# assume_no_rvm: true (default)\n")


JSON_CASES = [
    ("norm", ["norm", "w+w"]),
    ("cmp", ["cmp", "w", "w_1"]),
    ("calc", ["calc", "w_[w]+1"]),
    ("calc", ["calc", "3"]),
    ("card", ["card", "w^w"]),
    ("cof", ["cof", "w_1"]),
    ("psi", ["psi", "w", "w_1*w+5"]),
    ("classify", ["classify", *K_PAIR]),
    ("classify", ["classify", "C(w)", "C(w,l_2)"]),
    ("selftest", ["selftest", "--suite", "gamma_min"]),
    ("error", ["norm", "w^^2"]),
    ("error", ["classify", "C(w,l_1)", "C(w)"]),
]


class TestJson:
    @pytest.mark.parametrize("schema, argv", JSON_CASES)
    def test_validates(self, schema, argv):
        status, out, _ = run(["--json", *argv])
        lines = out.splitlines()
        if schema == "error":
            # single-query errors only reach stderr
            assert lines == [] and status in (1, 2)
            status, out, _ = run(["--json", argv[0], "--batch", str(self._batch(argv[1:]))])
            lines = out.splitlines()
        assert len(lines) == 1
        jsonschema.validate(json.loads(lines[0]), cli.SCHEMAS[schema])

    @pytest.fixture(autouse=True)
    def _tmp(self, tmp_path):
        self.tmp = tmp_path

    def _batch(self, operands):
        path = self.tmp / "q.txt"
        path.write_text(shlex.join(operands) + "\n", encoding="utf-8")
        return path

    def test_every_subcommand_has_a_schema(self):
        assert set(cli.COMMANDS) <= set(cli.SCHEMAS)
        for schema in cli.SCHEMAS.values():
            jsonschema.Draft7Validator.check_schema(schema)


class TestBatch:
    def test_results_in_input_order(self, tmp_path):
        path = tmp_path / "q.txt"
        path.write_text(
            "# header comment\n"
            "'w + 1'   w\n"
            "\n"
            "w  'w + 1'  # trailing comment\n"
            "w_1 w_1\n",
            encoding="utf-8",
        )
        status, out, err = run(["cmp", "--batch", str(path)])
        assert status == 0 and err == ""
        assert out == "greater\nless\nequal\n"

    def test_status_is_the_worst_line(self, tmp_path):
        path = tmp_path / "q.txt"
        path.write_text(
            '"C(w)" "C(w*2)"\n"C(w)" "C(w,l_2)"\n"C(w" "C(w)"\n"C(w,l_1)" "C(w)"\n',
            encoding="utf-8",
        )
        status, out, err = run(["classify", "--batch", str(path)])
        assert out.splitlines() == ["Isomorphic", "OutOfScope", "error: parse", "error: domain"]
        assert status == 3
        assert err.splitlines()[0].startswith("line 3: ")
        assert err.splitlines()[1].startswith("line 4: ")

    def test_unicode_file(self, tmp_path):
        path = tmp_path / "q.txt"
        path.write_text("ω₁·ω + 5\n", encoding="utf-8")
        assert run(["norm", "--batch", str(path)])[1] == "w_1*w + 5\n"

    def test_one_operand_lines_need_no_quotes(self, tmp_path):
        path = tmp_path / "q.txt"
        path.write_text("w + 1 + w   # sum\n'w * 2'\n", encoding="utf-8")
        assert run(["norm", "--batch", str(path)])[1] == "w*2\nw*2\n"

    def test_missing_file(self, tmp_path):
        status, out, err = run(["norm", "--batch", str(tmp_path / "absent")])
        assert status == cli.EXIT_DOMAIN and "cannot read" in err

    def test_wrong_arity_line(self, tmp_path):
        path = tmp_path / "q.txt"
        path.write_text("w\nw w\n", encoding="utf-8")
        status, out, _ = run(["cmp", "--batch", str(path)])
        assert status == cli.EXIT_DOMAIN
        assert out.splitlines() == ["error: usage", "equal"]


class TestGolden:
    @pytest.mark.parametrize("name", sorted(GOLDEN))
    def test_transcript(self, name):
        path = GOLDEN_DIR / f"{name}.txt"
        got = transcript(GOLDEN[name])
        if REGEN:
            GOLDEN_DIR.mkdir(exist_ok=True)
            path.write_bytes(got.encode("utf-8"))
        assert path.read_bytes() == got.encode("utf-8")

    def test_deterministic_across_runs(self):
        for argv in GOLDEN.values():
            assert transcript(argv) == transcript(argv)

    def test_installed_entry_point_matches(self):
        argv = GOLDEN["literal-canonical"]
        proc = subprocess.run(
            [sys.executable, "-m", "ordclass", *argv], capture_output=True, check=False
        )
        assert proc.returncode == 0
        assert proc.stdout == run(argv)[1].encode("utf-8")
