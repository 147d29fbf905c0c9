import subprocess
import sys

import pytest

from simpkit.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main
from simpkit.fixtures import CATEGORY_FIXTURES, COMPLEX_FIXTURES, complex_fixture, fixture_nerve, fixture_path
from simpkit.sset import boundary, horn, standard_simplex, validate
from simpkit.category import linear_order
from simpkit.subdivision import nonempty_subsets_poset
from simpkit.textio import (ParseError, ValidationFailed, describe_category, dump_complex, dump_poset,
                            format_word, parse_complex, parse_poset, parse_word)


def same_complex(X, Y):
    return (X.counts == Y.counts and X.is_simplicial == Y.is_simplicial
            and all((X.faces[n] == Y.faces[n]).all() for n in range(1, X.top_dim + 1))
            and (not X.is_simplicial or all((X.degens[n] == Y.degens[n]).all() for n in range(X.top_dim))))


def test_shipped_delta2_parses():
    X = complex_fixture("delta2")
    assert X.counts == (3, 6, 10)
    assert validate(X).ok


@pytest.mark.parametrize("name", COMPLEX_FIXTURES)
def test_complex_fixture_roundtrip(name):
    X = complex_fixture(name)
    assert same_complex(parse_complex(dump_complex(X)), X)


@pytest.mark.parametrize("X", [standard_simplex(3), boundary(3), horn(3, 2), fixture_nerve("z2_groupoid", 2),
                               fixture_nerve("square", 3).semisimplicial()])
def test_dump_parse_roundtrip(X):
    assert same_complex(parse_complex(dump_complex(X)), X)


def test_face_index_out_of_range_names_line():
    text = fixture_path("horn21.ssset").read_text().replace("face 1 1 2 1", "face 1 1 7 1")
    with pytest.raises(ParseError, match="line 6"):
        parse_complex(text)


@pytest.mark.parametrize("text,line", [
    ("sset 1\ndim 0 2\ndim 1 3\n", 3),
    ("sset x\n", 1),
    ("ssset 1\ndim 1 2\n", 2),
    ("ssset 1\ndim 0 2\ndim 1 1\nface 1 0 0\n", 4),
    ("ssset 1\ndim 0 2\ndim 1 1\nface 1 0 0 1\nbogus\n", 5),
])
def test_malformed_inputs(text, line):
    with pytest.raises(ParseError, match=f"line {line}"):
        parse_complex(text)


def test_identity_violation_is_reported():
    X = standard_simplex(2)
    text = dump_complex(X)
    lines = text.splitlines()
    k = next(i for i, l in enumerate(lines) if l.startswith("face 2 3 "))
    parts = lines[k].split()
    parts[3] = str((int(parts[3]) + 1) % X.count(1))
    lines[k] = " ".join(parts)
    with pytest.raises(ValidationFailed):
        parse_complex("\n".join(lines) + "\n")
    assert parse_complex("\n".join(lines) + "\n", check=False).counts == X.counts


def test_poset_roundtrip():
    for P in (linear_order(3), nonempty_subsets_poset(2)):
        Q = parse_poset(dump_poset(P))
        assert Q.size == P.size
        assert all(Q.le(a, b) == P.le(a, b) for a in range(P.size) for b in range(P.size))


def test_words():
    assert parse_word("g*f") == (("f", "g"), None)
    assert parse_word("id(a)") == ((), "a")
    assert format_word(("f", "g")) == "g*f"


def test_describe_category_lists_composites():
    from simpkit.fixtures import category
    text = describe_category(category("arrow"))
    assert "objects 2" in text and "arrows 3" in text
    assert "arr f 0 1" in text


# -- the command line --------------------------------------------------------------------

def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sd_counts(capsys):
    code, out, _ = run(capsys, "sd", "--n", "2")
    assert code == EXIT_PASS
    assert "nondegenerate 0 7" in out and "nondegenerate 2 6" in out


def test_sd_emit_parses(capsys):
    code, out, _ = run(capsys, "sd", "--n", "1", "--emit")
    assert code == EXIT_PASS and parse_complex(out).nondegenerate_counts() == (3, 2)


def test_check_kan_exit_codes(capsys):
    assert run(capsys, "check-kan", "--fixture", "arrow", "--inner-only", "--max-n", "3")[0] == EXIT_PASS
    code, out, _ = run(capsys, "check-kan", "--fixture", "arrow", "--max-n", "2", "--machine")
    assert code == EXIT_FAIL
    assert any(l.startswith("witness 2 0 ") for l in out.splitlines())
    path = str(fixture_path("boundary2.ssset"))
    assert run(capsys, "check-kan", path, "--inner-only", "--max-n", "2")[0] == EXIT_FAIL


def test_check_kan_category_file(capsys):
    path = str(fixture_path("square.cat"))
    assert run(capsys, "check-kan", "--category", path, "--inner-only")[0] == EXIT_PASS


def test_ex_command(capsys):
    code, out, _ = run(capsys, "ex", "--fixture", "iso", "--level", "1")
    assert code == EXIT_PASS and "result PASS" in out
    code, out, _ = run(capsys, "ex", "--fixture", "arrow", "--level", "1", "--equiv", "none")
    assert code == EXIT_PASS and "ex 1 count" in out


def test_localize_command(capsys):
    path = str(fixture_path("arrow.cat"))
    code, out, _ = run(capsys, "localize", path, "--invert", "f")
    assert code == EXIT_PASS
    assert "arrows 4" in out and "inverted 1" in out
    assert run(capsys, "localize", path, "--invert", "nope")[0] == EXIT_USAGE


def test_max_localization_command(capsys):
    path = str(fixture_path("iso.cat"))
    code, out, _ = run(capsys, "verify-max-localization", path, "--I", "0,1,2")
    assert code == EXIT_PASS and "equivalence 1" in out


def test_collar_command(capsys):
    code, out, _ = run(capsys, "collar-verify", "--chain", "0;0,1", "--samples", "10", "--steps", "16")
    assert code == EXIT_PASS
    assert any(l.startswith("coherence max_residual ") for l in out.splitlines())
    assert run(capsys, "collar-verify", "--chain", "0;0", "--samples", "4")[0] == EXIT_USAGE


def test_movie_command(capsys):
    code, out, _ = run(capsys, "movie-verify", "--h", "q*s", "--lambda", "p dq")
    assert code == EXIT_PASS
    assert "v = (p + s) d/dp + (q + sigma) d/dsigma" in out and "PASS" in out
    assert run(capsys, "movie-verify", "--h", "q +")[0] == EXIT_USAGE


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["check-kan", "--no-such-flag"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == EXIT_USAGE
    assert run(capsys, "check-kan")[0] == EXIT_USAGE
    assert run(capsys, "check-kan", "/no/such/file")[0] == EXIT_USAGE


def test_malformed_file_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.ssset"
    bad.write_text("ssset 1\ndim 0 1\ndim 1 1\nface 1 0 0 9\n")
    code, _, err = run(capsys, "check-kan", str(bad))
    assert code == EXIT_USAGE and "line 4" in err
    broken = tmp_path / "broken.sset"
    text = dump_complex(standard_simplex(1)).replace("degen 0 1 2", "degen 0 1 1")
    broken.write_text(text)
    assert run(capsys, "check-kan", str(broken))[0] == EXIT_FAIL


MACHINE_RUNS = [
    ["sd", "--n", "3", "--machine"],
    ["ex", "--fixture", "split_idempotent", "--level", "2", "--machine"],
    ["check-kan", "--fixture", "arrow", "--machine"],
    ["localize", str(fixture_path("span.cat")), "--invert", "f", "--machine"],
    ["verify-max-localization", str(fixture_path("iso.cat")), "--I", "0,1", "--machine"],
    ["collar-verify", "--chain", "0;0,1;0,1,2", "--samples", "16", "--steps", "32", "--seed", "7", "--machine"],
    ["movie-verify", "--h", "q^2*s^3", "--machine"],
]


@pytest.mark.parametrize("argv", MACHINE_RUNS, ids=lambda a: a[0])
def test_machine_output_is_deterministic(argv, capsys):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_seed_changes_samples(capsys):
    base = ["collar-verify", "--chain", "0;0,1;0,1,2", "--samples", "8", "--steps", "16", "--machine"]
    a = run(capsys, *base, "--seed", "1")[1]
    b = run(capsys, *base, "--seed", "2")[1]
    assert a != b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "simpkit", "movie-verify", "--h", "0", "--machine"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "result PASS"
