"""End-to-end checks over the bundled examples, mostly through the command line."""

import json

import numpy as np
import pytest

from novikov_numbers import corpus
from novikov_numbers.cli import cli
from novikov_numbers.hodge import INCONCLUSIVE, MATCH, kernel_vs_exact
from novikov_numbers.morse_bott import euler_poincare_check, morse_polynomial
from novikov_numbers.twisted import euler_characteristic, novikov_numbers


def test_circle_and_vanishing_degree_zero(runner, complexes):
    result = runner.invoke(cli, ["--format", "json", "novikov", "circle_xi1"])
    assert json.loads(result.output)["betti"] == [0, 0]
    for name in corpus.TWISTED_NAMES:
        assert novikov_numbers(complexes[name])[0] == 0


def test_circle_jump_set(runner):
    result = runner.invoke(
        cli,
        ["--format", "json", "jumps", "circle_xi1", "--probe", "1", "--probe", "2", "--probe", "3", "--probe", "-1"],
    )
    payload = json.loads(result.output)
    assert payload["jump_points"] == [["1"]]
    assert payload["probes"][0]["dims"] == [1, 1]
    assert payload["background"] == [0, 0]


@pytest.mark.parametrize("complex_name, quotient", [("torus_xi0", []), ("torus_xi10", [1, 1])])
def test_torus_certificates(runner, complex_name, quotient):
    result = runner.invoke(cli, ["--format", "json", "check", "torus_bott", complex_name])
    payload = json.loads(result.output)
    assert result.exit_code == 0
    assert payload["quotient_coefficients"] == quotient
    assert payload["holds"]


@pytest.mark.parametrize("morse_name, complex_name", corpus.MORSE_PAIRS)
def test_euler_poincare_on_bundled_pairs(morse_data, complexes, morse_name, complex_name):
    md, c = morse_data[morse_name], complexes[complex_name]
    chi_d = euler_characteristic(c)
    betti = novikov_numbers(c)
    assert morse_polynomial(md)(-1) == sum((-1) ** p * b for p, b in enumerate(betti)) == chi_d
    assert euler_poincare_check(md, chi_d)


@pytest.mark.parametrize("family", ["circle_linear_family", "torus_linear_family"])
def test_spectral_sequence_limits(runner, family):
    payload = json.loads(runner.invoke(cli, ["--format", "json", "ss", family]).output)
    assert payload["stabilized"]
    assert payload["limit"] == [0] * len(payload["pages"][0]["dims"])
    assert payload["first_differential_matches"]


@pytest.mark.parametrize("name", ["circle_xi1", "torus_xi10", "klein_like"])
def test_hodge_cross_oracle(complexes, name):
    s_values = np.random.default_rng(0).uniform(0.3, 3.0, size=20)
    cells = kernel_vs_exact(complexes[name], list(s_values), epsilon=1e-8)
    assert not [cell for cell in cells if cell.status == INCONCLUSIVE]
    assert all(cell.status == MATCH for cell in cells)


def test_alexander_examples(runner):
    companion = json.loads(
        runner.invoke(cli, ["--format", "json", "jumps", "alexander_trefoil_companion", "--probe", "1"]).output
    )
    assert companion["jump_points"] == [["1"]]
    assert [d // companion["field_degree"] for d in companion["probes"][0]["dims"]] == [1, 1]
    plain = json.loads(
        runner.invoke(
            cli, ["--format", "json", "jumps", "alexander_trefoil", "--probe", "2", "--probe", "3", "--probe", "-1"]
        ).output
    )
    assert plain["jump_points"] == []


@pytest.mark.parametrize(
    "args",
    [
        ["novikov", "circle_xi1"],
        ["jumps", "circle_xi1"],
        ["check", "torus_bott", "torus_xi10"],
        ["ss", "torus_linear_family"],
        ["spectrum", "klein_like", "--random-s", "20"],
        ["jumps", "alexander_trefoil_companion"],
    ],
)
@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_output_is_deterministic(runner, args, fmt):
    first = runner.invoke(cli, ["--seed", "3", "--format", fmt, *args])
    second = runner.invoke(cli, ["--seed", "3", "--format", fmt, *args])
    assert first.exit_code == second.exit_code == 0
    assert first.output == second.output
