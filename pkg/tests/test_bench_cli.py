import json

import pytest

from compact_knapsack import cli
from compact_knapsack.bench import CSV_COLUMNS, PRESETS, ExperimentSpec, load_specs, run_experiment

SPEC = {"n": 20, "R": 40, "alphas": ["1", "1/2"], "m_list": [1, 3], "trials": 2, "master_seed": 7}


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec.from_dict({**SPEC, "trials": 0})
    with pytest.raises(ValueError):
        ExperimentSpec.from_dict({**SPEC, "m_list": []})
    with pytest.raises(ValueError):
        ExperimentSpec.from_dict({**SPEC, "n": 21})
    with pytest.raises(ValueError):
        ExperimentSpec.from_dict({**SPEC, "m_list": [20]})
    with pytest.raises(ValueError):
        ExperimentSpec.from_dict({**SPEC, "attack": "dnc", "m_list": [10]})
    with pytest.raises(ValueError):
        ExperimentSpec.from_dict({**SPEC, "bogus": 1})
    assert ExperimentSpec.from_dict(SPEC).entry_bits == 5


def test_presets_parse():
    for name in PRESETS:
        assert load_specs(name)


def test_report_is_deterministic_and_consistent():
    spec = ExperimentSpec.from_dict(SPEC)
    r1, r2 = run_experiment(spec), run_experiment(spec)
    assert r1.to_json(timing=False) == r2.to_json(timing=False)
    assert r1.to_csv(timing=False) == r2.to_csv(timing=False)
    assert [len(row.samples) for row in r1.rows] == [2, 2]
    rows = json.loads(r1.to_json())["rows"]
    csv_lines = r1.to_csv().strip().splitlines()
    assert csv_lines[0] == ",".join(CSV_COLUMNS)
    for row, line in zip(rows, csv_lines[1:]):
        # the space label contains commas and is quoted
        assert line.startswith(f'"{row["space"]}",{row["m"]},')
        assert line.split(",")[-4:-1] == [str(row["full_solution_rate"]), str(row["mean_coord_fraction"]), str(row["seed"])]
        assert 0 <= row["full_solution_rate"] <= 1 and 0 <= row["mean_coord_fraction"] <= 1


def test_single_trial():
    rep = run_experiment(ExperimentSpec.from_dict({**SPEC, "trials": 1, "m_list": [2]}))
    assert len(rep.rows) == 1 and len(rep.rows[0].samples) == 1


def test_parallel_matches_serial():
    spec = ExperimentSpec.from_dict(SPEC)
    assert run_experiment(spec, jobs=2).to_json(timing=False) == run_experiment(spec).to_json(timing=False)


def test_cli_sign_verify(tmp_path, capsys):
    pk, sk, sig, msg = (str(tmp_path / n) for n in ("pk", "sk", "sig", "msg"))
    (tmp_path / "msg").write_bytes(b"file contents")
    assert run(["keygen", "--params", "small", "--out-pk", pk, "--out-sk", sk, "--seed", "abcd"], capsys)[0] == 0
    assert run(["sign", "--sk", sk, "--msg-file", msg, "--out", sig], capsys)[0] == 0
    code, out, _ = run(["verify", "--pk", pk, "--msg-file", msg, "--sig", sig], capsys)
    assert code == 0 and out.strip() == "accept"
    (tmp_path / "msg").write_bytes(b"file contentz")
    code, out, _ = run(["verify", "--pk", pk, "--msg-file", msg, "--sig", sig], capsys)
    assert code == 1 and out.startswith("reject")
    (tmp_path / "sig").write_bytes(b"garbage")
    assert run(["verify", "--pk", pk, "--msg-file", msg, "--sig", sig], capsys)[0] == 2


def test_cli_keygen_params_file(tmp_path, capsys):
    params = tmp_path / "p.json"
    params.write_text(json.dumps({"n": 8, "m": 2, "R": 24, "alphas": ["1/2", "1"], "betas": ["1/4", "1/2"], "t": 16, "entry_bits": 8}))
    code, _, _ = run(["keygen", "--params", str(params), "--out-pk", str(tmp_path / "a"), "--out-sk", str(tmp_path / "b")], capsys)
    assert code == 0
    assert (tmp_path / "b").stat().st_size == 6 + 4 * 5 + 8 + 8 + 4 + 16


def test_cli_usage_errors(capsys):
    assert run([], capsys)[0] == 2
    assert run(["verify"], capsys)[0] == 2
    assert run(["keygen", "--params", "small", "--out-pk", "a", "--out-sk", "b", "--seed", "zz"], capsys)[0] == 2
    code, out, _ = run(["bench", "tables", "--spec", "/nonexistent.json", "--format", "json"], capsys)
    assert code == 2 and json.loads(out)["exit_code"] == 2
    code, out, _ = run(["params", "suggest", "--alphas", "1/4", "--R", "192", "--epsilon", "0.9", "--format", "json"], capsys)
    assert code == 2 and "error" in json.loads(out)


def test_cli_params_suggest(capsys):
    code, out, _ = run(["params", "suggest", "--alphas", "1/4,1/2", "--R", "192", "--epsilon", "1e-7",
                        "--n", "48", "--format", "json"], capsys)
    assert code == 0
    cands = json.loads(out)["candidates"]
    assert any(c["betas"] == ["1/8", "1/4"] for c in cands)
    assert all(c["completeness"] > 0.99999 for c in cands)


def test_cli_bench_and_attack(tmp_path, capsys):
    code, out, _ = run(["bench", "tables", "--spec", json.dumps(SPEC), "--format", "csv", "--no-timing"], capsys)
    assert code == 0 and out.splitlines()[0] == ",".join(CSV_COLUMNS) and len(out.splitlines()) == 3
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps(SPEC))
    code, out, _ = run(["bench", "tables", "--spec", str(spec), "--format", "json"], capsys)
    assert code == 0 and len(json.loads(out)["rows"]) == 2
    code, out, _ = run(["attack", "cvp", "--random", '{"n": 20, "m": 2, "R": 40, "alphas": ["1"], "seed": 1}',
                        "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["full_solution"] is True
    inst = tmp_path / "inst.json"
    from compact_knapsack.attacks import SolutionSpace, generate_instance
    from compact_knapsack.xof import XofStream
    inst.write_text(json.dumps(generate_instance(SolutionSpace(20, 40, ("1", "1/2")), 2, 5, XofStream(b"i")).to_dict()))
    code, out, _ = run(["attack", "dnc", "--instance", str(inst)], capsys)
    assert code == 0 and "coordinates" in out
    assert run(["attack", "cvp"], capsys)[0] == 2
