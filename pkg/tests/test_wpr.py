import json

import pytest

from adict.field import QQ
from adict.modules import FPModule
from adict.rings import IdealSpec, RingMap, make_ring
from adict.wpr import (ConcreteRing, DescriptorError, Enlarged, FlatExtension, TensorOverField, Unknown,
                       certify, realize, verify_certificate, wpr_evidence)

A = make_ring(QQ, "x")
B = make_ring(QQ, "y", ["y^2"])


def leaf(R, gens, atts=("noetherian", "efft")):
    return ConcreteRing(R, IdealSpec.parse(R, gens), atts)


def tensor_instance():
    return TensorOverField(leaf(A, ["x"]), leaf(B, ["y"]))


def test_tensor_chain_of_rules():
    cert = certify(tensor_instance())
    assert cert.ok
    assert cert.rules() == ["R4", "R3", "R2", "R1", "R1"]
    R, I = realize(tensor_instance())
    assert cert.ring == R
    assert all(c["passed"] for c in cert.premises[0].side_checks)


def test_serialized_certificate_reverifies():
    js = json.loads(json.dumps(certify(tensor_instance()).to_json()))
    ok, log = verify_certificate(js)
    assert ok, log
    assert log[-1] == "R4: ok"


def test_tampered_certificate_fails():
    js = certify(tensor_instance()).to_json()
    # claim a smaller R3 conclusion than the tensor ideal
    js["premises"][0]["conclusion"]["ideal"] = ["y"]
    ok, log = verify_certificate(js)
    assert not ok
    assert any("R4 conclusion differs" in line for line in log)


def test_missing_attestations_give_unknown():
    assert isinstance(certify(ConcreteRing(A, IdealSpec.parse(A, ["x"]))), Unknown)
    d = TensorOverField(leaf(A, ["x"], ("noetherian",)), leaf(B, ["y"]))
    out = certify(d)
    assert isinstance(out, Unknown) and "efft" in out.reason


def test_polynomial_extension_is_flat():
    P = make_ring(QQ, "x z")
    phi = RingMap(A, P, [P.parse("x")])
    cert = certify(FlatExtension(leaf(A, ["x"]), phi))
    assert cert.ok and cert.rule == "R2"
    assert cert.side_checks[0]["name"] == "flat_polynomial_extension"


def test_unattested_quotient_map_is_not_flat():
    phi = RingMap(A, B, [B.parse("y")])
    assert isinstance(certify(FlatExtension(leaf(A, ["x"]), phi)), Unknown)


def test_enlarging_requires_containment():
    P = make_ring(QQ, "x z")
    good = certify(Enlarged(leaf(P, ["x"]), IdealSpec.parse(P, ["x", "z"])))
    assert good.ok and good.rule == "R3"
    bad = certify(Enlarged(leaf(P, ["x"]), IdealSpec.parse(P, ["z"])))
    assert isinstance(bad, Unknown)


def test_unknown_attestation_rejected():
    with pytest.raises(DescriptorError):
        ConcreteRing(A, IdealSpec.parse(A, ["x"]), {"regular"})


def test_evidence_is_labelled_as_such():
    ev = wpr_evidence(A, ["x"], [FPModule.cyclic(A, [A.parse("x^2")]), FPModule.free(A, [0])],
                      injective_like=(0,), window=(-2, 2))
    assert ev["kind"] == "EVIDENCE"
    assert ev["injective_like_vanish"]
    informational = [r for r in ev["rows"] if r["role"] == "informational"]
    # H^1 of the telescope against A is local cohomology, which does not vanish
    assert not informational[0]["vanishes"]
