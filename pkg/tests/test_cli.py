import io
import json
import subprocess
import sys

import pytest

from catkit.cli import build_parser, run

from conftest import cli_suite, data


def call(*argv, env_limit=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_categorify_dot_example():
    code, text, _ = call("categorify", "--flavor", "simplicial", "--group", data("z3.json"), "--emit", "dot")
    assert code == 0
    nodes = [l for l in text.splitlines() if "[label=" in l and " -> " not in l]
    edges = [l for l in text.splitlines() if " -> " in l]
    assert (len(nodes), len(edges)) == (3, 9)


def test_cohomology_example():
    code, text, _ = call("cohomology", "--n", "2", "--group", data("z2.json"), "--coeff", data("z2.json"))
    assert (code, text.strip()) == (0, "H^2 = Z/2")


def test_classify_example():
    code, text, _ = call("classify-ext", "--base", data("z2.json"), "--fiber", data("z2.json"))
    assert code == 0
    assert text.splitlines()[0] == "2 classes"
    assert "Z4" in text and "Z2xZ2" in text
    code, text, _ = call("classify-ext", "--base", "Z2", "--fiber", "Z2", "--emit", "json")
    assert sorted(c["middle_group"] for c in json.loads(text)) == ["Z2xZ2", "Z4"]


def test_exit_codes(monkeypatch):
    assert call("bogus")[0] == 1
    assert call()[0] == 1
    assert call("group-info")[0] == 1
    code, _, err = call("group-info", "--group", data("nonassoc.json"))
    assert code == 1 and "NotAssociative" in err
    code, _, err = call("bundle", "--extension", data("wrong_kernel.json"))
    assert code == 1 and "ImageKernelMismatch" in err
    code, _, err = call("--max-candidates", "10", "homs", "--source", "S3", "--target", "S3", "--brute")
    assert code == 2 and "size limit" in err
    monkeypatch.setenv("CATKIT_MAX_CANDIDATES", "10")
    assert call("homs", "--source", "S3", "--target", "S3", "--brute")[0] == 2
    assert call("--max-candidates", "100000", "homs", "--source", "S3", "--target", "S3", "--brute")[0] == 0


def test_truncation_error_exits_one():
    code, _, err = call("homology", "--group", "Z2", "--k", "2", "--n", "2")
    assert code == 1 and "TruncationTooShallow" in err


def test_every_subcommand_is_exercised():
    sub = next(a for a in build_parser()._actions if a.dest == "command")
    used = {argv[0] for argv, _ in cli_suite()}
    assert used == set(sub.choices)


@pytest.mark.parametrize("argv,code", cli_suite(), ids=lambda v: " ".join(v) if isinstance(v, list) else str(v))
def test_suite_runs_and_is_deterministic(argv, code):
    first = call(*argv)
    assert first[0] == code, first[2]
    again = call("--workers", "3", *argv)
    assert again[:2] == first[:2]
    if "json" in argv:
        json.loads(first[1])


def test_module_examples_through_cli():
    assert "|Out| = 1" in call("aut", "--group", "S3")[1]
    assert "|Out| via functor classes = 2" in call("aut", "--group", "Z3")[1]
    assert "functor homotopy classes: 2" in call("hom-classes", "--source", "Z2", "--target", "S3")[1]
    assert call("homs", "--source", "Z2xZ2", "--target", "S3")[1].startswith("10 homomorphisms")
    assert "morphisms: 8" in call("bundle", "--extension", data("z4_over_z2.json"))[1]
    assert "middle group: S3" in call("crossed-product", "--pair", data("s3_pair.json"))[1]
    assert "not weakly equivalent" in call("weak-equiv", "--pair", data("z2_split_pair.json"),
                                           "--other", data("z2_nontrivial_pair.json"))[1]
    assert "sets equal: True" in call("associators", "--group", "Z2")[1]
    assert "H_1 = Z/2" in call("homology", "--group", "S3", "--k", "3", "--n", "1")[1]
    assert "H_3 = Z/2" in call("homology", "--group", "Z2", "--k", "4", "--n", "3")[1]
    text = call("bar", "--group", "Z2", "--k", "3")[1]
    assert "EG/G = BG: True" in text and "H_1 = 0" in text
    assert "morphisms: 6" in call("open-cat", "--space", data("sierpinski.json"))[1]
    code, _, err = call("open-cat", "--space", data("discrete2.json"), "--target", data("sierpinski.json"),
                        "--map", "1,0")
    assert code == 0
    code, _, err = call("open-cat", "--space", data("sierpinski.json"), "--target", data("sierpinski.json"),
                        "--map", "1,0")
    assert code == 1 and "NotContinuous" in err
    assert "no refinement" in call("refine", "--space", data("sierpinski.json"), "--fine", "[[0,1]]",
                                   "--coarse", "[[0]]", "--partial")[1]
    assert "H^3 = Z/2" in call("cohomology", "--n", "3", "--group", "Z2", "--coeff", "Z2", "--method", "both")[1]
    assert "H^2 = 0" in call("cohomology", "--n", "2", "--group", "Z3", "--coeff", "Z2")[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "catkit", "cohomology", "--n", "2", "--group", "Z3",
                           "--coeff", "Z3"], capture_output=True, text=True, check=True)
    assert proc.stdout == "H^2 = Z/3\n"
