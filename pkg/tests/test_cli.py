import pytest

from abl.cli import main
from abl.corpus import parse_treebank
from abl.experiment import RunConfig, ConfigError, parse_manifest, trial_seeds

from test_hypothesis import FLIGHTS_PAIR, OVERLAP_CORPUS

GOLD = """(S (X Show me ) (X flights (X from Atlanta ) (X to Boston ) ) )
(S (X Show me ) (X the rates (X for flight 1943 ) ) )
(S (X Give me ) (X all flights (X from Dallas ) (X to Boston ) ) )
(S (X Give me ) (X help (X on classes ) ) )
(S (X Book (X Delta 128 ) ) (X from Dallas ) (X to Boston ) )
"""


@pytest.fixture
def files(tmp_path):
    (tmp_path / "pair.txt").write_text(FLIGHTS_PAIR)
    (tmp_path / "overlap.txt").write_text(OVERLAP_CORPUS)
    (tmp_path / "gold.txt").write_text(GOLD)
    return tmp_path


def run(*argv):
    return main([str(a) for a in argv])


def test_learn_flights_pair(files, capsys):
    assert run("learn", files / "pair.txt", "--output", files / "out") == 0
    table = (files / "out" / "space.tsv").read_text().splitlines()
    assert len(table) == 2
    cells = [line.split("\t")[1].split() for line in table]
    assert cells[0] == cells[1] == ["0:7:0", "2:7:1"]
    manifest = parse_manifest((files / "out" / "space.manifest").read_text())
    assert manifest["hypotheses"] == "4"
    assert manifest["pair_alignments"] == "1"
    assert "4 hypotheses" in capsys.readouterr().out


def test_select_then_eval(files, capsys):
    assert run("learn", files / "overlap.txt", "--output", files / "l") == 0
    assert run("select", files / "l" / "space.tsv", "--selection", "leaf", "--output", files / "s") == 0
    selected = parse_treebank((files / "s" / "selected.txt").read_text())
    assert len(selected) == 4
    assert run("eval", files / "s" / "selected.txt", files / "s" / "selected.txt", "--output", files / "e") == 0
    metrics = parse_manifest((files / "e" / "metrics.txt").read_text())
    assert metrics["zcs_mean"] == "100.00"
    assert "NCBP" in capsys.readouterr().out


def test_select_refuses_a_different_corpus(files, capsys):
    run("learn", files / "overlap.txt", "--output", files / "l")
    assert run("select", files / "l" / "space.tsv", "--corpus", files / "pair.txt", "--output", files / "s") == 2
    assert "not learned from" in capsys.readouterr().err


def test_select_refuses_tampered_space(files, capsys):
    run("learn", files / "overlap.txt", "--output", files / "l")
    space = files / "l" / "space.tsv"
    space.write_text(space.read_text().replace("Book", "Cook"))
    assert run("select", space, "--output", files / "s") == 2
    assert "does not match" in capsys.readouterr().err


def test_select_incr_on_crossing_space_is_a_data_error(files):
    run("learn", files / "overlap.txt", "--output", files / "l")
    assert run("select", files / "l" / "space.tsv", "--selection", "incr", "--output", files / "s") == 2
    run("learn", files / "overlap.txt", "--selection", "incr", "--output", files / "li")
    assert run("select", files / "li" / "space.tsv", "--selection", "incr", "--output", files / "si") == 0


def test_eval_reports_first_mismatch(files, capsys):
    other = files / "other.txt"
    lines = GOLD.splitlines()
    lines[2] = "(S (X Give us ) (X all flights ) )"
    other.write_text("\n".join(lines) + "\n")
    assert run("eval", other, files / "gold.txt") == 2
    assert "sentence 2 differs" in capsys.readouterr().err


def test_eval_bad_treebank_is_a_data_error(files, capsys):
    bad = files / "bad.txt"
    bad.write_text("(S a b\n")
    assert run("eval", bad, files / "gold.txt") == 2
    assert "line 1" in capsys.readouterr().err


def test_usage_errors(files, capsys):
    assert run("learn", files / "pair.txt", "--selection", "incr", "--mean", "geo", "--output", files / "o") == 1
    assert run("run", "--output", files / "o") == 1
    assert run("learn", files / "pair.txt") == 1
    assert main(["frobnicate"]) == 1
    assert main(["--help"]) == 0


def test_missing_input_is_a_data_error(files):
    assert run("learn", files / "missing.txt", "--output", files / "o") == 2


def test_baseline(files, capsys):
    assert run("baseline", files / "gold.txt", "--direction", "right", "--gold", files / "gold.txt",
               "--output", files / "b") == 0
    first = (files / "b" / "baseline-right.txt").read_text().splitlines()[0]
    assert first == "(0 Show (0 me (0 flights (0 from (0 Atlanta (0 to Boston ) ) ) ) ) )"
    assert (files / "b" / "metrics.txt").exists()
    assert run("baseline", files / "pair.txt", "--direction", "left", "--output", files / "b") == 0
    assert (files / "b" / "baseline-left.txt").read_text().startswith("(0 (0 (0 (0 (0 (0 Show me )")


def test_run_single_trial_has_zero_spread(files, capsys):
    assert run("run", "--gold", files / "gold.txt", "--trials", "1", "--output", files / "r") == 0
    metrics = parse_manifest((files / "r" / "metrics.txt").read_text())
    assert metrics["ncbp_std"] == metrics["ncbr_std"] == metrics["zcs_std"] == "0.00"
    assert (files / "r" / "trials" / "trial-01.txt").exists()
    assert "default:branch" in (files / "r" / "summary.txt").read_text()


def test_incr_shuffle_changes_results_across_trials(files):
    # the order decides which of the crossing analyses incr keeps
    gold = files / "gold6.txt"
    gold.write_text("(S (X Book Delta 128 ) (X from Dallas to Boston ) )\n"
                    "(S (X Give me all flights ) (X from Dallas to Boston ) )\n"
                    "(S (X Give me all flights ) (X from Dallas to Boston ) )\n"
                    "(S (X Give me ) (X help on classes ) )\n")
    assert run("run", "--gold", gold, "--selection", "incr", "--trials", "10", "--seed", "3",
               "--output", files / "r") == 0
    metrics = parse_manifest((files / "r" / "metrics.txt").read_text())
    assert float(metrics["zcs_std"]) > 0
    assert run("run", "--gold", gold, "--selection", "incr", "--trials", "10", "--no-shuffle",
               "--output", files / "r2") == 0
    assert parse_manifest((files / "r2" / "metrics.txt").read_text())["zcs_std"] == "0.00"


def test_run_from_manifest_reproduces(files):
    assert run("run", "--gold", files / "gold.txt", "--alignment", "all", "--selection", "leaf", "--mean", "geo+",
               "--trials", "3", "--seed", "11", "--output", files / "a") == 0
    assert run("run", "--manifest", files / "a" / "manifest.txt", "--output", files / "b") == 0
    for name in ("summary.txt", "metrics.txt", "manifest.txt", "trials/trial-03.txt"):
        assert (files / "a" / name).read_bytes() == (files / "b" / name).read_bytes()
    manifest = parse_manifest((files / "a" / "manifest.txt").read_text())
    assert manifest["trial_seeds"] == ",".join(map(str, trial_seeds(11, 3)))
    assert "all:leaf+" in (files / "a" / "summary.txt").read_text()


def test_run_manifest_detects_changed_gold(files, capsys):
    run("run", "--gold", files / "gold.txt", "--trials", "1", "--output", files / "a")
    (files / "gold.txt").write_text(GOLD.replace("Boston", "Denver"))
    assert run("run", "--manifest", files / "a" / "manifest.txt", "--output", files / "b") == 2
    assert "changed" in capsys.readouterr().err


def test_run_config_roundtrip():
    cfg = RunConfig(alignment="biased", selection="leaf", mean="geo+", trials=4, seed=9, shuffle=False)
    assert RunConfig.from_items(cfg.items()) == cfg
    assert cfg.name == "biased:leaf+"
    assert RunConfig(selection="branch").mean == "geo"
    assert RunConfig(selection="incr").name == "default:incr"
    with pytest.raises(ConfigError):
        RunConfig(trials=0)
    with pytest.raises(ConfigError):
        RunConfig(alignment="fuzzy")
