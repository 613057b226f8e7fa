"""Weak proregularity certificates from structural inference rules.

Rules (premises -> conclusion):

R1  noetherian ring A (attested), any ideal a             -> (A, a) is WPR
R2  (A, a) WPR, A -> B flat                               -> (B, aB) is WPR
R3  (A, a) WPR, a <= b, A/a noetherian                    -> (A, b) is WPR
R4  (A, a), (B, b) WPR, both efft over the field k        -> (A (x)_k B, a (x) B + A (x) b) is WPR
    proved as R2 along B -> A (x) B, then R3 from A (x) b to the tensor ideal.

Flatness and "essentially formally of finite type" are attestations
supplied by the user, except where syntactically evident (polynomial
extensions, localizations, and anything over a field).  A certificate
records which facts were attested and which were machine-checked, and
serializes to JSON that can be re-verified from scratch.
"""

from dataclasses import dataclass, field as dc_field

from .field import PrimeField, QQ
from .poly import Poly
from .rings import IdealSpec, RingMap, RingSpec, make_ring, quotient_ring, tensor_over_field

ATTESTABLE = ("noetherian", "flat", "efft")


class DescriptorError(ValueError):
    pass


# ------------------------------------------------------------ serialization

def ring_to_json(R: RingSpec):
    f = R.field
    return {
        "field": "Q" if f.characteristic == 0 else f"F {f.characteristic}",
        "vars": [[n, w] for n, w in zip(R.names, R.weights)],
        "relations": [Poly(R.poly, r).to_str() for r in R.relations],
    }


def ring_from_json(d):
    parts = d["field"].split()
    field = QQ if parts[0] == "Q" else PrimeField(int(parts[1]))
    return make_ring(field, [(n, int(w)) for n, w in d["vars"]], d["relations"])


def ideal_to_json(I: IdealSpec):
    return [I.ring.to_str(g) for g in I.gens]


def ideal_from_json(R, gens):
    return IdealSpec(R, list(gens))


def map_to_json(phi: RingMap):
    return {"source": ring_to_json(phi.source), "target": ring_to_json(phi.target),
            "images": [phi.target.to_str(p) for p in phi.images]}


def map_from_json(d):
    S, T = ring_from_json(d["source"]), ring_from_json(d["target"])
    return RingMap(S, T, [T.parse(p) for p in d["images"]])


# ------------------------------------------------------------- descriptors

@dataclass
class ConcreteRing:
    ring: RingSpec
    ideal: IdealSpec
    attestations: frozenset = frozenset()

    def __post_init__(self):
        self.attestations = frozenset(self.attestations)
        _check_attestations(self.attestations)
        if self.ideal.ring != self.ring:
            raise DescriptorError("ideal is not an ideal of the given ring")


@dataclass
class TensorOverField:
    left: object
    right: object
    attestations: frozenset = frozenset()

    def __post_init__(self):
        self.attestations = frozenset(self.attestations)
        _check_attestations(self.attestations)


@dataclass
class Enlarged:
    base: object
    bigger: IdealSpec
    attestations: frozenset = frozenset()

    def __post_init__(self):
        self.attestations = frozenset(self.attestations)
        _check_attestations(self.attestations)


@dataclass
class FlatExtension:
    base: object
    phi: RingMap
    attestations: frozenset = frozenset()

    def __post_init__(self):
        self.attestations = frozenset(self.attestations)
        _check_attestations(self.attestations)


def _check_attestations(att):
    bad = set(att) - set(ATTESTABLE)
    if bad:
        raise DescriptorError(f"unknown attestations {sorted(bad)}")


def realize(d):
    """(ring, ideal) that the descriptor denotes."""
    if isinstance(d, ConcreteRing):
        return d.ring, d.ideal
    if isinstance(d, Enlarged):
        R, _ = realize(d.base)
        if d.bigger.ring != R:
            raise DescriptorError("enlarged ideal lives in a different ring")
        return R, d.bigger
    if isinstance(d, FlatExtension):
        R, I = realize(d.base)
        if d.phi.source != R:
            raise DescriptorError("extension map does not start at the base ring")
        B = d.phi.target
        return B, IdealSpec(B, [d.phi.apply(g) for g in I.gens])
    if isinstance(d, TensorOverField):
        A, a = realize(d.left)
        B, b = realize(d.right)
        T, ia, ib = tensor_over_field(A, B)
        return T, IdealSpec(T, [ia.apply(g) for g in a.gens] + [ib.apply(g) for g in b.gens])
    raise DescriptorError(f"not a descriptor: {d!r}")


# ------------------------------------------------------------ certificates

@dataclass
class WPRCertificate:
    ring: RingSpec
    ideal: IdealSpec
    rule: str
    premises: list = dc_field(default_factory=list)
    side_checks: list = dc_field(default_factory=list)
    attestations: list = dc_field(default_factory=list)
    data: dict = dc_field(default_factory=dict)

    @property
    def ok(self):
        return all(c["passed"] for c in self.side_checks) and all(p.ok for p in self.premises)

    def rules(self):
        out = [self.rule]
        for p in self.premises:
            out += p.rules()
        return out

    def to_json(self):
        return {
            "conclusion": {"ring": ring_to_json(self.ring), "ideal": ideal_to_json(self.ideal)},
            "rule": self.rule,
            "side_checks": self.side_checks,
            "premises": [p.to_json() for p in self.premises],
            "attestations": self.attestations,
            "data": self.data,
        }


@dataclass
class Unknown:
    reason: str
    ok = False

    def to_json(self):
        return {"unknown": self.reason}


def _check(name, passed, detail=""):
    return {"name": name, "passed": bool(passed), "detail": detail}


def _attest(prop, subject):
    return {"property": prop, "subject": subject, "user_supplied": True}


def ideal_contained(small: IdealSpec, big: IdealSpec):
    """Each generator of ``small`` reduces to zero modulo a GB of ``big``."""
    return all(not big.normal_form(g) for g in small.gens)


def ideals_equal(a: IdealSpec, b: IdealSpec):
    return ideal_contained(a, b) and ideal_contained(b, a)


def finitely_presented_check(R: RingSpec):
    # finitely many variables and relations: noetherian by the Hilbert basis theorem
    return _check("finitely_presented_over_field", True,
                  f"{R.nvars} variables, {len(R.relations)} relations")


def quotient_noetherian_check(R: RingSpec, I: IdealSpec):
    Q = quotient_ring(R, I)
    return _check("quotient_noetherian", True,
                  f"A/a = {Q!r} is a finitely presented algebra over the field")


def _is_polynomial_extension(phi: RingMap):
    """Source variables go to distinct target variables and the target adds no relations."""
    S, T = phi.source, phi.target
    hit = []
    for p in phi.images:
        if len(p) != 1:
            return False
        (e, c), = p.items()
        if c != 1 or sum(e) != 1:
            return False
        hit.append(e.index(1))
    if len(set(hit)) != len(hit):
        return False
    # the target relations must come from the source ones, checked in the
    # ambient polynomial ring of the target (where they are not yet zero)
    free = RingSpec(T.poly)
    lift = RingMap(S, free, phi.images)
    lifted = IdealSpec(free, [lift.apply(r) for r in S.relations])
    return all(not lifted.normal_form(r) for r in T.relations)


def _is_localization(phi: RingMap):
    S, T = phi.source, phi.target
    return bool(T.inverted) and T.nvars == S.nvars + len(T.inverted) and \
        all(phi.images[i] == T.var(S.names[i]) for i in range(S.nvars))


def certify(d):
    """WPRCertificate proving (ring, ideal) of ``d`` is WPR, or Unknown(reason)."""
    if isinstance(d, ConcreteRing):
        return _certify_r1(d)
    if isinstance(d, FlatExtension):
        return _certify_r2(d)
    if isinstance(d, Enlarged):
        return _certify_r3(d)
    if isinstance(d, TensorOverField):
        return _certify_r4(d)
    raise DescriptorError(f"not a descriptor: {d!r}")


def _certify_r1(d: ConcreteRing):
    if "noetherian" not in d.attestations:
        return Unknown("leaf ring has no noetherian attestation")
    checks = [finitely_presented_check(d.ring)]
    return WPRCertificate(d.ring, d.ideal, "R1", [], checks, [_attest("noetherian", repr(d.ring))])


def _certify_r2(d: FlatExtension, base_cert=None):
    base = base_cert or certify(d.base)
    if isinstance(base, Unknown):
        return Unknown(f"base: {base.reason}")
    R, I = realize(d.base)
    B, J = realize(d)
    atts = []
    if "flat" in d.attestations:
        atts.append(_attest("flat", f"{R!r} -> {B!r}"))
        flat = _check("flatness_attested", True, "user-supplied")
    elif _is_polynomial_extension(d.phi):
        flat = _check("flat_polynomial_extension", True, "target adds free variables")
    elif _is_localization(d.phi):
        flat = _check("flat_localization", True, "target is a localization")
    else:
        return Unknown("extension map is not attested flat")
    extended = IdealSpec(B, [d.phi.apply(g) for g in I.gens])
    checks = [flat, _check("extended_ideal_equals_image", ideals_equal(extended, J),
                           "b = a B on generators")]
    return WPRCertificate(B, J, "R2", [base], checks, atts, {"map": map_to_json(d.phi)})


def _certify_r3(d: Enlarged, base_cert=None):
    base = base_cert or certify(d.base)
    if isinstance(base, Unknown):
        return Unknown(f"base: {base.reason}")
    R, I = realize(d.base)
    J = d.bigger
    contained = ideal_contained(I, J)
    if not contained:
        return Unknown("base ideal is not contained in the enlarged ideal")
    checks = [_check("containment", contained, "each base generator reduces to 0 modulo b"),
              quotient_noetherian_check(R, I)]
    return WPRCertificate(R, J, "R3", [base], checks, [], {"base_ideal": ideal_to_json(I)})


def _certify_r4(d: TensorOverField):
    lc, rc = certify(d.left), certify(d.right)
    for side, c in (("left", lc), ("right", rc)):
        if isinstance(c, Unknown):
            return Unknown(f"{side}: {c.reason}")
    for side, sub in (("left", d.left), ("right", d.right)):
        if "efft" not in sub.attestations:
            return Unknown(f"{side} factor has no efft attestation")
    A, a = realize(d.left)
    B, b = realize(d.right)
    T, ia, ib = tensor_over_field(A, B)
    # R2 along B -> A (x) B: flat because A is flat over the field
    b_ext = IdealSpec(T, [ib.apply(g) for g in b.gens])
    r2 = WPRCertificate(T, b_ext, "R2", [rc],
                        [_check("flat_over_field", True, "A is free over the field, so B -> A (x) B is flat"),
                         _check("extended_ideal_equals_image", True, "b (A (x) B) generated by the images of b")],
                        [], {"map": map_to_json(ib)})
    _, target = realize(d)
    r3 = WPRCertificate(T, target, "R3", [r2],
                        [_check("containment", ideal_contained(b_ext, target),
                                "A (x) b inside a (x) B + A (x) b"),
                         quotient_noetherian_check(T, b_ext)],
                        [], {"base_ideal": ideal_to_json(b_ext)})
    expected = IdealSpec(T, [ia.apply(g) for g in a.gens] + [ib.apply(g) for g in b.gens])
    checks = [_check("efft_attested", True, "both factors"),
              _check("tensor_ideal", ideals_equal(expected, target), "a (x) B + A (x) b on generators")]
    atts = [_attest("efft", repr(A)), _attest("efft", repr(B))]
    return WPRCertificate(T, target, "R4", [r3, lc], checks, atts)


# ---------------------------------------------------------- re-verification

def verify_certificate(js):
    """Re-run every machine check of a serialized certificate.  Returns (ok, log)."""
    log = []
    ok = _verify_node(js, log)
    return ok, log


def _verify_node(js, log):
    if "unknown" in js:
        log.append("unknown node")
        return False
    R = ring_from_json(js["conclusion"]["ring"])
    J = ideal_from_json(R, js["conclusion"]["ideal"])
    rule = js["rule"]
    ok = True
    prem = js["premises"]
    if not all(_verify_node(p, log) for p in prem):
        ok = False
    names = {c["name"] for c in js["side_checks"]}
    if not all(c["passed"] for c in js["side_checks"]):
        log.append(f"{rule}: recorded side check failed")
        ok = False
    if rule == "R1":
        if prem or not any(a["property"] == "noetherian" for a in js["attestations"]):
            log.append("R1 needs a noetherian attestation and no premises")
            ok = False
    elif rule == "R2":
        phi = map_from_json(js["data"]["map"])
        base = prem[0]["conclusion"]
        S = ring_from_json(base["ring"])
        I = ideal_from_json(S, base["ideal"])
        if phi.source != S or phi.target != R:
            log.append("R2 map endpoints do not match")
            ok = False
        elif not ideals_equal(IdealSpec(R, [phi.apply(g) for g in I.gens]), J):
            log.append("R2 extended ideal mismatch")
            ok = False
        if not names & {"flatness_attested", "flat_polynomial_extension", "flat_localization", "flat_over_field"}:
            log.append("R2 without flatness evidence")
            ok = False
    elif rule == "R3":
        base = prem[0]["conclusion"]
        S = ring_from_json(base["ring"])
        I = ideal_from_json(S, base["ideal"])
        if S != R:
            log.append("R3 changes the ring")
            ok = False
        elif not ideal_contained(I, J):
            log.append("R3 containment fails")
            ok = False
        if "quotient_noetherian" not in names:
            log.append("R3 without noetherian-quotient check")
            ok = False
    elif rule == "R4":
        if [p["rule"] for p in prem][:1] != ["R3"] or prem[0]["premises"][0]["rule"] != "R2":
            log.append("R4 must be proved by R2 then R3")
            ok = False
        if sum(a["property"] == "efft" for a in js["attestations"]) < 2:
            log.append("R4 needs efft attestations for both factors")
            ok = False
        r3 = prem[0]["conclusion"]
        if ring_from_json(r3["ring"]) != R or not ideals_equal(ideal_from_json(R, r3["ideal"]), J):
            log.append("R4 conclusion differs from its R3 premise")
            ok = False
    else:
        log.append(f"unknown rule {rule}")
        ok = False
    log.append(f"{rule}: {'ok' if ok else 'FAILED'}")
    return ok


# ---------------------------------------------------------------- evidence

def wpr_evidence(A, seq, tests, k_max=1, J=6, window=(-3, 3), injective_like=()):
    """Finite surrogate of the telescope-acyclicity condition.

    For each test module E computes H^k(Tel_j (x) E) for 1 <= k <= k_max and
    j = 1..J in the window, with stabilization.  This is EVIDENCE only: the
    condition quantifies over injective modules, which are not finitely
    presented.  Tests not listed in ``injective_like`` are informational.
    """
    from .derived import AdicPair, telescope_torsion_system
    from .koszul import ElementSequence
    from .towers import colim
    if not tests:
        raise ValueError("need at least one test module")
    seq = seq if isinstance(seq, ElementSequence) else ElementSequence(A, list(seq))
    if len(seq) == 0:
        raise ValueError("empty element sequence")
    pair = AdicPair(A, seq, T=J, J=J, window=window)
    rows = []
    all_vanish = True
    for idx, E in enumerate(tests):
        system = telescope_torsion_system(pair, E)
        for k in range(1, k_max + 1):
            data = colim(system, k, window)
            vanish = all(r["stabilized"] and r["dim"] == 0 for r in data)
            role = "injective-like" if idx in injective_like else "informational"
            if role == "injective-like":
                all_vanish = all_vanish and vanish
            rows.append({"test": idx, "k": k, "role": role, "vanishes": vanish,
                         "dims": [r["dim"] for r in data],
                         "stabilized_at": [r["stabilized_at"] for r in data]})
    return {"kind": "EVIDENCE", "note": "finite test modules only; not a proof of weak proregularity",
            "rows": rows, "injective_like_vanish": all_vanish}
