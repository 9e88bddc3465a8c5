# Copyright 2025 John Brosnihan
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Tests for flow file storage and the versioned flow document."""

import json

import pytest

from eulerflow.models import FLOW_SCHEMA
from eulerflow.services.arithmetic_flow import check_flow_consistency, verify_prime_integrals
from eulerflow.storage import (
    DEFAULT_FLOW_FILENAME,
    FlowFormatError,
    FlowStorageError,
    FlowStore,
    document_to_flow,
    document_to_poly,
    flow_to_document,
    poly_to_document,
)


@pytest.fixture
def store(tmp_path):
    return FlowStore(tmp_path)


@pytest.fixture
def saved(store, flow3):
    """Path of flow3 saved under the default name."""
    return store.save(flow3)


def _rewrite(path, **changes):
    data = json.loads(path.read_text())
    data.update(changes)
    path.write_text(json.dumps(data))


def test_save_uses_default_name(store, saved):
    assert saved == store.directory / DEFAULT_FLOW_FILENAME
    assert sorted(p.name for p in store.directory.iterdir()) == [DEFAULT_FLOW_FILENAME]


def test_saved_document_layout(saved, flow3):
    """Test the schema tag, decimal residues and construction log on disk."""
    data = json.loads(saved.read_text())

    assert data["schema"] == FLOW_SCHEMA
    assert data["p"] == 3
    assert data["N"] == 2
    assert data["a"] == ["0", "1", "2"]
    assert data["phi1"] is None
    assert data["delta3"]["denominator"] == [1, 0, 0, 0]
    assert data["construction"]["delta3"]["degree"] == 5
    for exps, coeff in data["delta3"]["numerator"]["terms"]:
        assert len(exps) == 3
        assert 0 < int(coeff) < 9


def test_load_restores_flow(store, saved, flow3):
    loaded = store.load()

    assert loaded == flow3
    assert verify_prime_integrals(loaded)
    assert check_flow_consistency(loaded).holds
    assert loaded.construction == flow3.construction


def test_load_missing_file(store):
    with pytest.raises(FlowStorageError, match="not found"):
        store.load("missing.json")


def test_load_rejects_invalid_json(store, saved):
    saved.write_text("not json")
    with pytest.raises(FlowFormatError):
        store.load()


def test_load_rejects_wrong_schema(store, saved):
    _rewrite(saved, schema="eulerflow.flow/v0")
    with pytest.raises(FlowFormatError):
        store.load()


def test_load_rejects_non_prime(store, saved):
    _rewrite(saved, p=9)
    with pytest.raises(FlowFormatError, match="invalid flow parameters"):
        store.load()


def test_load_rejects_congruent_coefficients(store, saved):
    _rewrite(saved, a=["0", "3", "2"])
    with pytest.raises(FlowFormatError, match="invalid flow parameters"):
        store.load()


def test_load_rejects_single_root(store, saved):
    data = json.loads(saved.read_text())
    _rewrite(saved, phi1=data["phi3"])
    with pytest.raises(FlowFormatError):
        store.load()


def test_load_rejects_precision_mismatch(store, saved):
    data = json.loads(saved.read_text())
    data["delta3"]["numerator"]["precision"] = 3
    saved.write_text(json.dumps(data))
    with pytest.raises(FlowFormatError, match="precision"):
        store.load()


def test_load_wraps_unparseable_coefficient(store, saved):
    """Test that a digit character int() rejects becomes a FlowFormatError."""
    data = json.loads(saved.read_text())
    data["delta3"]["numerator"]["terms"][0][1] = "\u00b2"
    saved.write_text(json.dumps(data))
    with pytest.raises(FlowFormatError, match="invalid flow component"):
        store.load()


def test_append_manifest(store, saved):
    document = store.append_manifest([("duality", "passed"), ("linearization", "skipped")])

    assert [entry.check for entry in document.manifest] == ["duality", "linearization"]
    loaded = store.load()
    assert [(e.check, e.status) for e in loaded.manifest] == [
        ("duality", "passed"),
        ("linearization", "skipped"),
    ]
    assert loaded.manifest[0].timestamp.endswith("+00:00")


def test_absolute_paths_are_kept(store, tmp_path, flow3):
    target = tmp_path / "nested" / "other.json"
    path = store.save(flow3, target)
    assert path == target
    assert store.load(target) == flow3


def test_polynomial_document_precision_check(flow3):
    doc = poly_to_document(flow3.delta3.numerator)
    assert doc.precision == 2
    with pytest.raises(FlowFormatError):
        document_to_poly(doc, flow3.params.context.with_precision(3))


def test_document_round_trip_keeps_roots(flow5_n2):
    """Test that extracted roots survive serialization."""
    flow = flow5_n2.replace(phi1=flow5_n2.phi3, phi2=flow5_n2.phi3)
    restored = document_to_flow(flow_to_document(flow))
    assert restored.has_roots
    assert restored.phi1 == flow.phi1
