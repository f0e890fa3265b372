"""Tests for the JSON state file format."""

import json

import numpy as np
import pytest

from coherence_bounds.errors import StateFileError
from coherence_bounds.fixtures import example2_state
from coherence_bounds.random_states import random_mixed
from coherence_bounds.statefile import dumps_state, load_state, loads_state, save_state


def _payload(**overrides):
    body = json.loads(dumps_state(example2_state()))
    body.update(overrides)
    return json.dumps(body)


def test_round_trip_is_exact(tmp_path):
    """A saved random state reloads bit for bit."""
    rng = np.random.default_rng(0)
    s = random_mixed(2, 3, rng)
    path = save_state(s, tmp_path / "state.json")
    loaded = load_state(path)
    assert (loaded.dim_a, loaded.dim_b) == (2, 3)
    assert np.array_equal(loaded.rho, s.rho)


def test_file_layout():
    body = json.loads(dumps_state(example2_state()))
    assert body["schema_version"] == 1
    assert len(body["matrix"]) == 16
    assert all(len(entry) == 2 for entry in body["matrix"])


def test_unknown_schema_version():
    with pytest.raises(StateFileError, match="schema_version"):
        loads_state(_payload(schema_version=2))


def test_wrong_matrix_length():
    body = json.loads(_payload())
    body["matrix"] = body["matrix"][:-1]
    with pytest.raises(StateFileError, match="expected"):
        loads_state(json.dumps(body))


def test_unphysical_matrix():
    """Trace two is rejected with a density-matrix message."""
    body = json.loads(_payload())
    body["matrix"] = [[2.0 * re, 2.0 * im] for re, im in body["matrix"]]
    with pytest.raises(StateFileError, match="density matrix"):
        loads_state(json.dumps(body))


def test_not_json():
    with pytest.raises(StateFileError):
        loads_state("not json at all")


def test_missing_file(tmp_path):
    with pytest.raises(StateFileError, match="Cannot read"):
        load_state(tmp_path / "missing.json")


@pytest.mark.parametrize("bad", [float("nan"), float("inf")])
def test_non_finite_entry_is_rejected(bad):
    body = json.loads(_payload())
    body["matrix"][1] = [bad, 0.0]
    with pytest.raises(StateFileError):
        loads_state(json.dumps(body))
