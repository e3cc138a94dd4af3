import json

import pytest

from webctf.cli import (
    EXIT_CONTRACT,
    EXIT_OK,
    EXIT_SCHEMA,
    EXIT_UNSOLVABLE,
    main,
)
from webctf.model import load_challenge, save_challenge, to_json_bytes

from helpers import chain_l1


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "generate", "--level", "1", "--n", "5", "--seed", "7",
               "-o", str(a))[0] == EXIT_OK
    assert run(capsys, "generate", "--level", "1", "--n", "5", "--seed", "7",
               "-o", str(b))[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_generate_prints_resolved_seed(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("AWM_SEED", "123")
    code, out, _ = run(capsys, "generate", "--level", "1", "--n", "3",
                       "-o", str(tmp_path / "c.json"))
    assert code == EXIT_OK
    assert "seed: 123" in out
    assert load_challenge(tmp_path / "c.json").seed == 123


def test_generate_count_writes_ordered_files(tmp_path, capsys):
    outdir = tmp_path / "batch"
    code, out, _ = run(capsys, "generate", "--level", "2", "--n", "4",
                       "--seed", "10", "--count", "3", "-o", str(outdir))
    assert code == EXIT_OK
    names = sorted(p.name for p in outdir.iterdir())
    assert names == [f"challenge_l2_{10 + i}.json" for i in range(3)]


def test_inspect_valid_and_invalid(tmp_path, capsys):
    path = tmp_path / "c.json"
    save_challenge(chain_l1(3), path)
    code, out, _ = run(capsys, "inspect", str(path))
    assert code == EXIT_OK and "valid: yes" in out

    broken = tmp_path / "broken.json"
    broken.write_bytes(to_json_bytes(chain_l1(3)).replace(b'"level":1', b'"level":9'))
    code, _, err = run(capsys, "inspect", str(broken))
    assert code == EXIT_SCHEMA and "level" in err


def test_solve_then_replay_verifies(tmp_path, capsys):
    challenge = tmp_path / "c.json"
    trace = tmp_path / "trace.jsonl"
    save_challenge(chain_l1(4), challenge)
    code, out, _ = run(capsys, "solve", str(challenge), "--trace", str(trace))
    assert code == EXIT_OK and "steps: 4" in out
    assert run(capsys, "replay", str(challenge), str(trace))[0] == EXIT_OK


def test_replay_detects_divergence(tmp_path, capsys):
    challenge = tmp_path / "c.json"
    trace = tmp_path / "trace.jsonl"
    save_challenge(chain_l1(3), challenge)
    run(capsys, "solve", str(challenge), "--trace", str(trace))
    records = [json.loads(line) for line in trace.read_text().splitlines()]
    records[1]["reward"] = 0.5
    trace.write_text("\n".join(json.dumps(r) for r in records) + "\n")
    code, _, err = run(capsys, "replay", str(challenge), str(trace))
    assert code == EXIT_CONTRACT and "divergence" in err


def test_solve_unsolvable_exit_code(tmp_path, capsys):
    ch = chain_l1(3)
    broken = ch.__class__(ch.level, 3, 0, 0, ch.links[:1], ch.flag, 0)
    path = tmp_path / "c.json"
    save_challenge(broken, path)
    assert run(capsys, "solve", str(path))[0] == EXIT_UNSOLVABLE


def test_complexity_paper_value(capsys):
    code, out, _ = run(capsys, "complexity", "--level", "3", "--n", "5",
                       "--m", "5", "--o", "5", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["actions"] == 390


def test_train_and_eval_round_trip(tmp_path, capsys):
    challenge = tmp_path / "c.json"
    policy = tmp_path / "policy.json"
    curve = tmp_path / "curve.csv"
    save_challenge(chain_l1(3), challenge)
    code, _, _ = run(capsys, "train", str(challenge), "--episodes", "400",
                     "--seed", "5", "--policy-out", str(policy),
                     "--curve-out", str(curve))
    assert code == EXIT_OK
    assert curve.read_text().splitlines()[0] == "episode,steps,reward"
    code, out, _ = run(capsys, "eval", str(challenge), "--policy", str(policy),
                       "--episodes", "1", "--seed", "0")
    assert code == EXIT_OK
    assert json.loads(out.splitlines()[-1])["solve_rate"] == 1.0


def test_eval_random_baseline(tmp_path, capsys):
    challenge = tmp_path / "c.json"
    save_challenge(chain_l1(3), challenge)
    code, out, _ = run(capsys, "eval", str(challenge), "--random",
                       "--episodes", "200", "--max-steps", "60", "--seed", "3")
    assert code == EXIT_OK
    stats = json.loads(out.splitlines()[-1])
    assert 0 < stats["solve_rate"] <= 1


def test_unknown_flag_rejected(tmp_path):
    with pytest.raises(SystemExit):
        main(["generate", "--level", "1", "--n", "3", "--bogus", "1",
              "-o", str(tmp_path / "c.json")])
