"""Tests for the JSON report envelope and result conversions."""

import json

from chipfire.certificates import (
    BrambleCertificate,
    scramble_order,
    verify_bramble,
    verify_scramble,
    vertex_scramble,
)
from chipfire.gonality import gonality
from chipfire.graph import parse_text
from chipfire.reports import (
    SCHEMA_VERSION,
    AlphaResult,
    certificate_result,
    envelope,
    input_hash,
    search_result,
)


def test_envelope_layout(c4) -> None:
    body = envelope("alpha", AlphaResult(r=1, alpha=2, witness=[0, 2]), input_hash(c4), 0.5)
    data = json.loads(body.to_json())

    assert list(data) == ["schema", "command", "input_hash", "result", "timing"]
    assert data["schema"] == SCHEMA_VERSION
    assert data["result"] == {"r": 1, "alpha": 2, "witness": [0, 2]}
    assert data["timing"] == {"elapsed_seconds": 0.5}


def test_output_is_deterministic(c4) -> None:
    first = envelope("gon", search_result(gonality(c4, 2)), input_hash(c4)).to_json()
    second = envelope("gon", search_result(gonality(c4, 2)), input_hash(c4)).to_json()
    assert first == second


def test_search_result(c4) -> None:
    result = search_result(gonality(c4, 2))
    assert result.minimum_degree == 3
    assert result.witness == [3, 0, 0, 0]
    assert result.degrees_exhausted[0].candidates == 10


def test_input_hash_ignores_comments_and_tracks_extras(c4) -> None:
    commented = parse_text("# square\nn 4\n0 1 1\n1 2 1\n2 3 1\n0 3 1\n")
    assert input_hash(commented) == input_hash(c4)
    assert input_hash(c4, "1,1,1,0") != input_hash(c4, "1,1,0,1")
    assert input_hash(c4, "1,1,1,0") != input_hash(c4)


def test_infinite_egg_cut_is_spelled_out(banana3) -> None:
    cert = BrambleCertificate([(0, 1), (1, 2), (0, 1, 2)], 2)
    order = scramble_order(banana3, cert.as_scramble())
    result = certificate_result(cert, verify_bramble(banana3, cert), order, gonality=6)

    data = result.model_dump(mode="json")
    assert data["egg_cut"]["size"] == "infinite"
    assert data["treewidth_lower_bound"] == 0
    assert data["consistent"] is True


def test_certificate_without_order(c4) -> None:
    cert = BrambleCertificate([(0,), (2,)], 1)
    result = certificate_result(cert, verify_bramble(c4, cert))
    assert not result.valid
    assert result.violation == "sets 0 and 1: do not 1-touch"
    assert result.order is None


def test_scramble_has_no_treewidth_bound(c4) -> None:
    cert = vertex_scramble(c4, 1)
    result = certificate_result(cert, verify_scramble(c4, cert), scramble_order(c4, cert))
    assert result.kind == "scramble"
    assert result.treewidth_lower_bound is None
    assert result.egg_cut.size == 2
