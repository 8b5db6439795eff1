import json

import pytest

from genprob.cli import main, parse_divisors
from genprob.errors import InvalidInputError
from genprob.serialize import validate, validate_payload


def run(capsys, *argv):
    code = main(list(argv))
    document = validate("document", json.loads(capsys.readouterr().out))
    if document["status"] == "ok":
        validate_payload(argv[0], document["payload"])
    return code, document


def rational(num, den):
    return {"num": str(num), "den": str(den)}


@pytest.fixture
def klein_instance(tmp_path):
    path = tmp_path / "klein.json"
    path.write_text(
        json.dumps(
            {
                "group": {"divisors": [2, 2]},
                "hidden_subgroup_generators": [[1, 0]],
            }
        )
    )
    return str(path)


def test_parse_divisors():
    assert parse_divisors("12, 2").moduli == (2, 4, 3)
    assert parse_divisors("").order == 1
    with pytest.raises(InvalidInputError):
        parse_divisors("a,2")


# phi


def test_phi_exact(capsys):
    code, document = run(capsys, "phi", "--divisors", "2,2", "--k", "2")
    assert code == 0
    assert document["payload"]["mode"] == "exact"
    assert document["payload"]["value"] == rational(3, 8)


def test_phi_trivial_group(capsys):
    code, document = run(capsys, "phi", "--divisors", "", "--k", "0")
    assert code == 0
    assert document["payload"]["value"] == rational(1, 1)


def test_phi_brute_force(capsys):
    code, document = run(
        capsys, "phi", "--divisors", "12", "--k", "2", "--brute-force"
    )
    assert code == 0
    payload = document["payload"]
    assert payload["count"] == "96"
    assert payload["tuples"] == "144"
    assert payload["value"] == rational(2, 3)


def test_phi_brute_force_cap(capsys):
    code, document = run(
        capsys,
        "phi",
        "--divisors",
        "1024",
        "--k",
        "3",
        "--brute-force",
        "--max-tuples",
        "1000",
    )
    assert code == 3
    assert document["status"] == "resource-limit"
    assert "payload" not in document


def test_phi_monte_carlo(capsys):
    argv = ["phi", "--divisors", "2", "--k", "1", "--monte-carlo"]
    argv += ["--trials", "2000", "--seed", "7"]
    code, document = run(capsys, *argv)
    assert code == 0
    estimate = document["payload"]["estimate"]
    assert estimate["trials"] == 2000
    assert estimate["seed"] == 7
    successes = estimate["successes"]
    assert abs(successes / 2000 - 0.5) < 0.05
    assert run(capsys, *argv)[1] == document


def test_phi_negative_k(capsys):
    code, document = run(capsys, "phi", "--divisors", "2", "--k", "-1")
    assert code == 2
    assert document["status"] == "invalid-input"


# bounds


def test_bounds_group(capsys):
    code, document = run(
        capsys,
        "bounds",
        "--divisors",
        "2,2,2",
        "--epsilon",
        "1/10",
        "--exact-min-k",
    )
    payload = document["payload"]
    assert code == 0
    assert payload["rank"] == 3
    assert payload["rank_bound_k"] == 8
    assert payload["len_bound_k"] == 7
    assert payload["exact_min_k"] == 7
    assert payload["epsilon"] == rational(1, 10)


def test_bounds_cyclic(capsys):
    _, document = run(
        capsys, "bounds", "--divisors", "12", "--epsilon", "1/2"
    )
    payload = document["payload"]
    assert payload["rank_bound_k"] == 3
    assert payload["len_bound_k"] == 4
    assert payload["pak_bound_k"] == 7
    assert payload["exact_min_k"] is None


def test_bounds_profile(capsys):
    _, document = run(
        capsys, "bounds", "--profile", "2:3:3", "--epsilon", "1/2"
    )
    payload = document["payload"]
    assert payload["rank_bound_k"] == 5
    assert payload["len_bound_k"] == 4
    assert payload["pak_bound_k"] is None


@pytest.mark.parametrize("epsilon", ["0.1", "1", "0", "3/2", "1/0"])
def test_bounds_invalid_epsilon(capsys, epsilon):
    code, document = run(
        capsys, "bounds", "--divisors", "2", "--epsilon", epsilon
    )
    assert code == 2
    assert document["status"] == "invalid-input"
    assert document["error"]


# tightness


@pytest.mark.parametrize(
    "mode, n, epsilon, k, phi",
    [
        ("len", "4", "1/4", 4, rational(315, 1024)),
        ("rank", "1", "1/2", 0, rational(0, 1)),
    ],
)
def test_tightness(capsys, mode, n, epsilon, k, phi):
    code, document = run(
        capsys, "tightness", "--mode", mode, "--n", n, "--epsilon", epsilon
    )
    assert code == 0
    payload = document["payload"]
    assert payload["k"] == k
    assert payload["phi"] == phi
    assert payload["claim_holds"] is True


def test_tightness_large(capsys):
    _, document = run(
        capsys, "tightness", "--mode", "len", "--n", "20", "--epsilon", "1/100"
    )
    assert document["payload"]["divisors"] == [2] * 20
    assert document["payload"]["claim_holds"] is True


# ahsp


def test_ahsp_len_strategy(capsys, klein_instance):
    argv = ["ahsp", klein_instance, "--epsilon", "1/2", "--strategy", "len"]
    code, document = run(capsys, *argv, "--trials", "500", "--seed", "3")
    assert code == 0
    payload = document["payload"]
    assert payload["plan"]["k"] == 2
    assert payload["hidden"]["order"] == "2"
    assert payload["hperp"]["order"] == "2"
    assert payload["simulation"]["trials"] == 500


def test_ahsp_rank_strategy(capsys, tmp_path):
    path = tmp_path / "cyclic.json"
    path.write_text(
        json.dumps(
            {"group": {"divisors": [8]}, "hidden_subgroup_generators": [[2]]}
        )
    )
    code, document = run(
        capsys, "ahsp", str(path), "--epsilon", "1/2", "--trials", "100"
    )
    assert code == 0
    assert document["payload"]["plan"] == {
        "strategy": "rank",
        "k": 3,
        "epsilon": rational(1, 2),
    }


def test_ahsp_missing_file(capsys, tmp_path):
    code, document = run(
        capsys, "ahsp", str(tmp_path / "none.json"), "--epsilon", "1/2"
    )
    assert code == 2
    assert document["status"] == "invalid-input"


# regev


@pytest.mark.parametrize(
    "argv, expected",
    [
        (
            ["--n-bits", "2048"],
            {"rank": 46, "repetitions": 48, "prior_repetitions": 50},
        ),
        (["--rank", "10"], {"repetitions": 12}),
        (["--n-bits", "1"], {"repetitions": 3}),
    ],
)
def test_regev(capsys, argv, expected):
    code, document = run(capsys, "regev", *argv)
    assert code == 0
    for key, value in expected.items():
        assert document["payload"][key] == value


def test_regev_invalid_rank(capsys):
    code, document = run(capsys, "regev", "--rank", "0")
    assert code == 2
    assert document["status"] == "invalid-input"


# Common behaviour


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    code = main(["regev", "--rank", "3", "--output", str(path)])
    assert code == 0
    assert capsys.readouterr().out == ""
    document = json.loads(path.read_text())
    assert document == {
        "status": "ok",
        "payload": {"rank": 3, "repetitions": 5},
    }


@pytest.mark.parametrize("target", [("no", "x.json"), ()])
def test_output_unwritable(capsys, tmp_path, target):
    path = tmp_path.joinpath(*target)
    code, document = run(capsys, "regev", "--rank", "3", "--output", str(path))
    assert code == 2
    assert document["status"] == "invalid-input"
    assert str(path) in document["error"]
    assert not (tmp_path / "no").exists()


def test_output_deterministic(capsys):
    argv = ["bounds", "--divisors", "4,2,9", "--epsilon", "1/4"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["phi", "--k", "1"],
        ["phi", "--divisors", "2", "--k", "1", "--exact", "--monte-carlo"],
        ["regev"],
        ["tightness", "--mode", "order", "--n", "2", "--epsilon", "1/2"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
