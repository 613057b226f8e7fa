"""Discrete, complete, torsion and adic Hochschild (co)homology over a field.

Everything is computed over the enveloping ring A^e = A (x)_k A.  Bimodule
coefficients are A-modules restricted along the multiplication map, or
external tensor products M (x)_k N.  Complete rings are towers: the adic
side works with the stage rings A^e / (a^e)^t and never with a limit ring.
"""

from dataclasses import dataclass, field as dc_field

from . import linalg
from .complexes import (
    BoundedComplex,
    ChainMap,
    cohomology,
    tensor_chain_map,
    free_resolution,
    hom_complex,
    hom_postcompose,
    hom_precompose,
    tensor_complex,
)
from .derived import (
    AdicPair,
    _compare,
    _projection,
    as_complex,
    identity_chain_map,
    rewrap,
    koszul_completion_system,
    koszul_torsion_system,
    over_quotient,
    survival_certificate,
    theorem_report,
    tower_map_iso,
)
from .groebner import poly_to_vec
from .koszul import (
    ElementSequence,
    adic_quotient,
    e_map,
    e_unit_map,
    koszul,
    stable_koszul_stage,
    unit_complex,
)
from .modules import FPModule, ModuleMap, _present_submodule, direct_sum
from .rings import IdealSpec, RingMap, diagonal_generators, multiplication_map, quotient_ring, tensor_over_field
from .towers import DegreeWindow, IndSystem, ProSystem, colim, lim_lim1


# ------------------------------------------------------------ enveloping

class EnvelopingData:
    """A, a, A^e, mu: A^e -> A, the diagonal ideal I and a^e."""

    def __init__(self, A, a):
        self.A = A
        self.seq = a if isinstance(a, ElementSequence) else ElementSequence(A, list(a))
        self.Ae, self.iota1, self.iota2 = tensor_over_field(A, A)
        self.mu = multiplication_map(A, self.Ae)
        self.I = [g for g in diagonal_generators(A, self.Ae) if g]
        Ae = self.Ae
        self.seq_left = ElementSequence(Ae, [self.iota1.apply(g) for g in self.seq.elems])
        self.seq_e = ElementSequence(Ae, [self.iota1.apply(g) for g in self.seq.elems] +
                                     [self.iota2.apply(g) for g in self.seq.elems])
        self._regular = None

    @property
    def ideal_e(self):
        return IdealSpec(self.Ae, self.seq_e.elems)

    def check(self):
        """mu kills the generators of I; a^e comes from the two coprojections."""
        return all(not self.mu.apply(g) for g in self.I)

    @property
    def regular(self):
        """Is the chosen generating sequence of I regular (Koszul cohomology only at the top)?"""
        if self._regular is None:
            if not self.I:
                self._regular = True
            else:
                K = koszul(self.Ae, ElementSequence(self.Ae, self.I))
                self._regular = all(cohomology(K, i).is_zero() for i in range(K.lo, K.hi))
        return self._regular

    def diagonal_module(self):
        """A as the cyclic A^e-module A^e / I."""
        return FPModule.cyclic(self.Ae, self.I)

    def describe(self):
        return {"ring": repr(self.A), "ideal": [self.A.to_str(g) for g in self.seq.elems],
                "enveloping": repr(self.Ae)}


def enveloping(A, a):
    return EnvelopingData(A, a)


# ---------------------------------------------------------- base change

def _map_vec(phi, v):
    comps = {}
    for (k, e), c in v.items():
        comps.setdefault(k, {})[e] = c
    out = {}
    for k, p in comps.items():
        for e, c in phi.apply(p).items():
            out[(k, e)] = c
    return out


def base_change_module(M: FPModule, phi: RingMap):
    return FPModule(phi.target, list(M.shifts), [_map_vec(phi, r) for r in M.relations])


def base_change_complex(X: BoundedComplex, phi: RingMap):
    mods = {i: base_change_module(X[i], phi) for i in range(X.lo, X.hi + 1)}
    diffs = {}
    for i in range(X.lo, X.hi):
        f = X.diff(i)
        diffs[i] = ModuleMap(mods[i], mods[i + 1], [_map_vec(phi, c) for c in f.columns], check=False)
    return BoundedComplex(phi.target, mods, diffs, check=False)


def restrict_along_mu(env: EnvelopingData, M: FPModule):
    """An A-module as an A^e-module on which both copies of A act the same way."""
    Ae = env.Ae
    rels = [_map_vec(env.iota1, r) for r in M.relations]
    for k in range(M.rank):
        for g in env.I:
            rels.append({(k, e): c for e, c in g.items()})
    return FPModule(Ae, list(M.shifts), rels)


def restrict_complex_along_mu(env, X):
    X = as_complex(X)
    mods = {i: restrict_along_mu(env, X[i]) for i in range(X.lo, X.hi + 1)}
    diffs = {i: ModuleMap(mods[i], mods[i + 1], [_map_vec(env.iota1, c) for c in X.diff(i).columns], check=False)
             for i in range(X.lo, X.hi)}
    return BoundedComplex(env.Ae, mods, diffs, check=False)


def external_tensor(env: EnvelopingData, X, Y):
    """X (x)_k Y for complexes of A-modules, as a complex of A^e-modules."""
    X, Y = as_complex(X), as_complex(Y)
    return tensor_complex(base_change_complex(X, env.iota1), base_change_complex(Y, env.iota2))


# ------------------------------------------------------------ resolution

def diagonal_resolution(env: EnvelopingData, length):
    """Free resolution of A over A^e: Koszul on I when regular, else syzygies.

    Returns (complex with indices -L..0, strategy).
    """
    Ae = env.Ae
    if env.regular and env.I:
        K = koszul(Ae, ElementSequence(Ae, env.I))
        return hom_complex(K, unit_complex(Ae)), "koszul"
    if not env.I:
        return unit_complex(Ae), "koszul"
    F, _ = free_resolution(env.diagonal_module(), length)
    return F, "syzygy"


@dataclass
class HHTable:
    ring: str
    ideal: list
    coefficients: str
    strategy: str
    length: int
    entries: list = dc_field(default_factory=list)

    def to_json(self):
        return {"ring": self.ring, "ideal": self.ideal, "coefficients": self.coefficients,
                "resolution": {"strategy": self.strategy, "length": self.length},
                "entries": self.entries}

    def dims(self, n):
        for e in self.entries:
            if e["n"] == n:
                return e["dims"]
        raise KeyError(n)


def _window_or_total(X, i, window):
    if X.ring.graded:
        return X.h_dims(i, (window.lo, window.hi))
    return [X.h_piece(i, 0).dim]


def hh_complex(env, coef, length=None):
    """Hom_{A^e}(F, coef) with F the diagonal resolution."""
    coef = as_complex(coef)
    L = length if length is not None else 4
    F, strategy = diagonal_resolution(env, L)
    return hom_complex(F, coef), F, strategy


def hh_discrete(env: EnvelopingData, M, n_max, window=(-3, 3)):
    """HH^n(A|k; M) for n <= n_max; M an A^e-module or complex (A-modules are restricted along mu)."""
    coef = _coefficients(env, M)
    C, F, strategy = hh_complex(env, coef, n_max + 1 - coef.lo)
    window = DegreeWindow.coerce(window)
    tab = HHTable(repr(env.A), [env.A.to_str(g) for g in env.seq.elems], _describe_coef(M), strategy, -F.lo)
    for n in range(0, n_max + 1):
        dims = _window_or_total(C, n, window) if C.lo <= n <= C.hi else [0] * len(window)
        tab.entries.append({"n": n, "kind": "module", "window": window.as_list(), "dims": dims,
                            "total": sum(dims), "stabilized_at": None})
    return tab


def _coefficients(env, M):
    if isinstance(M, BoundedComplex):
        return M if M.ring == env.Ae else restrict_complex_along_mu(env, M)
    if M.ring == env.Ae:
        return as_complex(M)
    return as_complex(restrict_along_mu(env, M))


def _describe_coef(M):
    from .derived import describe_module
    return describe_module(M)


# ------------------------------------------------------ complete / torsion

def left_pair(env, T=6, J=6, window=(-3, 3)):
    """The adic pair (A^e, a (x) 1): a acting through the first factor."""
    return AdicPair(env.Ae, env.seq_left, T=T, J=J, window=window)


def _tower_table(env, system, kind, indices, window, coef, strategy, length):
    tab = HHTable(repr(env.A), [env.A.to_str(g) for g in env.seq.elems], coef, strategy, length)
    for n in indices:
        rows = colim(system, n, window) if kind == "ind" else lim_lim1(system, n, window)
        tab.entries.append({
            "n": n, "kind": "ind" if kind == "ind" else "tower", "window": DegreeWindow.coerce(window).as_list(),
            "dims": [r["dim"] if kind == "ind" else r["lim"] for r in rows],
            "stabilized_at": [r["stabilized_at"] for r in rows],
            "stage_dims": [r["stage_dims"] for r in rows],
        })
    return tab


def complete_dhc(env, M, N, n_max=2, T=6, J=6, window=(-3, 3)):
    """LLambda_a RHom_{A^e}(A, M (x)_k N) as a tower table."""
    C, F, strategy = hh_complex(env, external_tensor(env, M, N), n_max + 1)
    pair = left_pair(env, T, J, window)
    system = koszul_completion_system(pair, C)
    return _tower_table(env, system, "pro", range(0, n_max + 1), window, "M (x) N", strategy, -F.lo), system


def torsion_dhc(env, M, N, n_max=2, T=6, J=6, window=(-3, 3)):
    """RGamma_a RHom_{A^e}(A, M (x)_k N) as an ind table."""
    C, F, strategy = hh_complex(env, external_tensor(env, M, N), n_max + 1)
    pair = left_pair(env, T, J, window)
    system = koszul_torsion_system(pair, C)
    top = n_max + len(env.seq)
    return _tower_table(env, system, "ind", range(0, top + 1), window, "M (x) N", strategy, -F.lo), system


# ------------------------------------------------------------- adic side

class CompletedEnveloping:
    """Stage rings A^e / (a^e)^t with the diagonal resolution base-changed to each."""

    def __init__(self, env: EnvelopingData, T=6, length=4):
        self.env = env
        self.T = T
        self.F, self.strategy = diagonal_resolution(env, length)
        Ae = env.Ae
        self.rings = [quotient_ring(Ae, env.ideal_e.power(t)) for t in range(1, T + 1)]
        self.maps = [RingMap(Ae, S, [S.var(n) for n in Ae.names]) for S in self.rings]
        self.F_stages = [base_change_complex(self.F, phi) for phi in self.maps]

    def coefficient_stage(self, coef, t):
        """coef / (a^e)^t coef as a complex over the stage ring."""
        Q = adic_quotient(self.env.Ae, self.env.seq_e, coef, t)
        return base_change_complex(Q, self.maps[t - 1])

    def ext_system(self, coef):
        """Pro system Hom_{S_t}(F (x) S_t, coef / (a^e)^t)."""
        coef = as_complex(coef)
        stages = [hom_complex(self.F_stages[t - 1], self.coefficient_stage(coef, t)) for t in range(1, self.T + 1)]
        trans = [_projection(stages[t], stages[t - 1]) for t in range(1, self.T)]
        return ProSystem(stages, trans)

    def tor_system(self, coef):
        """Ind/pro-free data: (F (x) S_t) (x)_{S_t} coef / (a^e)^t as a pro system."""
        coef = as_complex(coef)
        stages = [tensor_complex(self.F_stages[t - 1], self.coefficient_stage(coef, t)) for t in range(1, self.T + 1)]
        trans = [_projection(stages[t], stages[t - 1]) for t in range(1, self.T)]
        return ProSystem(stages, trans)


def adic_hh(cenv: CompletedEnveloping, M, n_max=3, window=(-3, 3)):
    """Adic Hochschild cohomology: Ext over the completed enveloping tower."""
    env = cenv.env
    coef = _coefficients(env, M)
    system = cenv.ext_system(coef)
    tab = _tower_table(env, system, "pro", range(0, n_max + 1), window, _describe_coef(M), cenv.strategy, -cenv.F.lo)
    return tab, system


def verify_comparison(env, M, n_max=3, T=None, window=(0, 3)):
    """HH^n(A|k; M) completed (LLambda of the discrete complex) vs adic Hochschild cohomology."""
    T = T or adic_window_stages(window, n_max)
    coef = _coefficients(env, M)
    C, F, _ = hh_complex(env, coef, n_max + 1)
    pair = left_pair(env, T, T, window)
    left = koszul_completion_system(pair, C)
    cenv = CompletedEnveloping(env, T, n_max + 1)
    right = cenv.ext_system(coef)
    entries = []
    for n in range(0, n_max + 1):
        entries += _compare("comparison", n, window, [("completed_hh", "pro", left), ("adic_hh", "pro", right)])
    return theorem_report("comparison", pair, {"ring": repr(env.A), "coefficients": _describe_coef(M)}, entries)


def adic_window_stages(window, n_max=2):
    """Stage count that lets a tower stabilizing at window.hi + n_max + 1 be confirmed by two more stages."""
    return max(DegreeWindow.coerce(window).hi, 0) + max(n_max, 2) + 3


# --------------------------------------------------- complete formula

def _certificate(env):
    """WPR certificate for a^e on A (x)_k A; f.p. algebras over a field carry every attestation."""
    from .wpr import ConcreteRing, TensorOverField, certify

    att = frozenset({"noetherian", "flat", "efft"})
    factor = ConcreteRing(env.A, IdealSpec(env.A, env.seq.elems), att)
    return certify(TensorOverField(factor, factor))


def verify_cformula(env, M, N, n_max=2, T=None, window=(-2, 2)):
    """LLambda_a RHom_{A^e}(A, M (x) N) against Ext over the completed enveloping tower
    with coefficients (M (x) N) / (a^e)^t.  Dimension agreement per index and degree."""
    window = DegreeWindow.coerce(window)
    T = T or adic_window_stages(window)
    coef = external_tensor(env, M, N)
    C, F, strategy = hh_complex(env, coef, n_max + 1)
    pair = left_pair(env, T, T, window)
    left = koszul_completion_system(pair, C)
    cenv = CompletedEnveloping(env, T, n_max + 1)
    right = cenv.ext_system(coef)
    entries = []
    for n in range(0, n_max + 1):
        entries += _compare("cformula", n, window, [("complete_dhc", "pro", left), ("adic_ext", "pro", right)])
    cert = _certificate(env)
    report = theorem_report("complete_formula", pair,
                            {"ring": repr(env.A), "coefficients": [_describe_coef(M), _describe_coef(N)],
                             "resolution": strategy}, entries, {"wpr_certified": cert.ok})
    report["certificate"] = cert.to_json() if cert.ok else None
    report["banner"] = "certified" if cert.ok else "uncertified"
    return report


# ------------------------------------------------ domain of definition

def base_change_chain_map(f: ChainMap, phi, source=None, target=None):
    S = source or base_change_complex(f.source, phi)
    T = target or base_change_complex(f.target, phi)
    return ChainMap(S, T, {i: ModuleMap(S[i], T[i], [_map_vec(phi, c) for c in f[i].columns], check=False)
                           for i in range(S.lo, S.hi + 1)}, check=False)


def _ext_map(env, f, g):
    """f (x)_k g for chain maps of A-complexes, as a chain map of A^e-complexes."""
    return tensor_chain_map(base_change_chain_map(f, env.iota1), base_change_chain_map(g, env.iota2))


def verify_domain_of_def(env, M, N, T=None, window=(-2, 2), n_max=2):
    """LLambda HH(M, N) against LLambda HH(LLambda M, LLambda N) and LLambda HH(RGamma M, RGamma N).

    Completion side: the diagonal pro system over j with Hom(K_j, -) in all
    three slots, compared through the map induced by M -> Hom(K_j, M).
    Torsion side: for j in (J-1, J), the colimit over t of
    Hom(K_j, HH(K_t (x) M, K_t (x) N)) mapping to Hom(K_j, HH(M, N)),
    checked with a survival certificate.
    """
    A = env.A
    window = DegreeWindow.coerce(window)
    T = T or adic_window_stages(window)
    J = T
    Mc, Nc = as_complex(M), as_complex(N)
    F, strategy = diagonal_resolution(env, n_max + 1)
    pair = left_pair(env, T, J, window)
    base_pair = AdicPair(A, env.seq, T=T, J=J, window=window)
    seqA = env.seq
    P = external_tensor(env, Mc, Nc)
    C = hom_complex(F, P)
    base = koszul_completion_system(pair, C)
    idF = identity_chain_map(F)
    entries = []

    # completion in every slot
    lam_M = koszul_completion_system(base_pair, Mc)
    lam_N = koszul_completion_system(base_pair, Nc)
    coefs = [external_tensor(env, lam_M.stages[j], lam_N.stages[j]) for j in range(J)]
    inner = [hom_complex(F, P) for P in coefs]
    stages = [hom_complex(stable_koszul_stage(env.Ae, env.seq_left, j + 1)[0], inner[j]) for j in range(J)]
    trans = []
    for j in range(1, J):
        cmap = _ext_map(env, lam_M.transitions[j - 1], lam_N.transitions[j - 1])
        cmap = rewrap(cmap, coefs[j], coefs[j - 1])
        post = hom_postcompose(F, cmap, inner[j], inner[j - 1])
        Kj1, _ = stable_koszul_stage(env.Ae, env.seq_left, j + 1)
        _, fk = stable_koszul_stage(env.Ae, env.seq_left, j)
        step1 = hom_postcompose(Kj1, post, stages[j])
        step2 = hom_precompose(fk, inner[j - 1], step1.target, stages[j - 1])
        trans.append(step2.compose(step1))
    lam = ProSystem(stages, trans)
    tauM = hom_precompose(e_unit_map(A, seqA, J), Mc)
    tauN = hom_precompose(e_unit_map(A, seqA, J), Nc)
    tmap = rewrap(_ext_map(env, rewrap(tauM, Mc, lam_M.stages[-1]), rewrap(tauN, Nc, lam_N.stages[-1])),
                  P, coefs[-1])
    KJ, _ = stable_koszul_stage(env.Ae, env.seq_left, J)
    nat = hom_postcompose(KJ, hom_postcompose(F, tmap, C, inner[-1]), base.stages[-1], stages[-1])
    for n in range(0, n_max + 1):
        entries += _compare("llambda_slots", n, window, [("llambda_hh", "pro", base), ("llambda_hh_llambda", "pro", lam)],
                            [("llambda_hh", "llambda_hh_llambda", nat)])

    # torsion in every slot, colimit over t at fixed j
    gap = max(window.hi, 0) + 1
    for j in (J - 1, J):
        Kj, _ = stable_koszul_stage(env.Ae, env.seq_left, j)
        ts = list(range(j, 2 * j + gap + 3))
        gM = koszul_torsion_system(base_pair, Mc, T=ts[-1])
        gN = koszul_torsion_system(base_pair, Nc, T=ts[-1])
        coefs = {t: external_tensor(env, gM.stages[t - 1], gN.stages[t - 1]) for t in ts}
        inner = {t: hom_complex(F, coefs[t]) for t in ts}
        stages = [hom_complex(Kj, inner[t]) for t in ts]
        trans = []
        for k, t in enumerate(ts[:-1]):
            cmap = rewrap(_ext_map(env, gM.transitions[t - 1], gN.transitions[t - 1]), coefs[t], coefs[t + 1])
            trans.append(hom_postcompose(Kj, hom_postcompose(F, cmap, inner[t], inner[t + 1]), stages[k], stages[k + 1]))
        system = IndSystem(stages, trans, first=j)
        tl = ts[-1]
        eM = e_map(A, seqA, Mc, tl, gM.stages[-1])
        eN = e_map(A, seqA, Nc, tl, gN.stages[-1])
        emap = rewrap(_ext_map(env, eM, eN), coefs[tl], P)
        sig = hom_postcompose(Kj, hom_postcompose(F, emap, inner[tl], C), stages[-1], base.stages[j - 1])
        for n in range(0, n_max + 1):
            for d in window:
                k = survival_certificate(system, sig, n, d)
                dim = base.stages[j - 1].h_piece(n, d).dim
                entries.append({
                    "check": "llambda_hh_rgamma", "index": n, "degree": d, "stage_j": j,
                    "lhs_dims": [system.stages[-1].h_piece(n, d).dim], "rhs_dims": [dim],
                    "lhs_value": dim if k is not None else None, "rhs_value": dim,
                    "basis": "survival", "iso": k is not None, "stabilized_at": None,
                    "survival_stage": None if k is None else system.stage_number(k),
                })
    return theorem_report("domain_of_definition", pair,
                          {"ring": repr(env.A), "coefficients": [_describe_coef(M), _describe_coef(N)],
                           "resolution": strategy}, entries)


# --------------------------------------------------------- smooth example

def conormal_presentation(env):
    """I / I^2 presented over A: generators the chosen generators of I."""
    Ae = env.Ae
    free = FPModule.free(Ae, [0])
    gens = [poly_to_vec(g) for g in env.I]
    sub, used = _present_submodule(free, gens)
    rels = list(sub.relations)
    for k in range(sub.rank):
        for g in env.I:
            rels.append({(k, e): c for e, c in g.items()})
    pushed = [v for v in (_map_vec(env.mu, r) for r in rels) if v]
    return FPModule(env.A, list(sub.shifts), pushed)


def top_exterior_is_free(Q: FPModule, ring):
    """Lambda^r of a module on r generators is ring / (entries of the presentation); free iff they vanish."""
    stage = over_quotient(Q, ring)
    entries = [c for r in stage.relations for c in r.values()]
    return not entries


def vdb_check(m, n, window=(-2, 2), T=None, field=None):
    """A = k[y_1..y_m, x_1..x_n] along (x): LLambda RHom_{A^e}(A, A (x) A) against
    A (x)^L over the completed enveloping tower, shifted by m + n."""
    from .field import QQ
    from .rings import make_ring

    field = field or QQ
    names = [f"y{i}" for i in range(1, m + 1)] + [f"x{i}" for i in range(1, n + 1)]
    A = make_ring(field, " ".join(f"{v}:1" for v in names), [])
    env = enveloping(A, [A.var(f"x{i}") for i in range(1, n + 1)])
    window = DegreeWindow.coerce(window)
    T = T or adic_window_stages(window)
    r = m + n
    twist = sum(_degree(A, g, env.Ae) for g in env.I)
    unit = as_complex(FPModule.free(A, [0]))
    _, left = complete_dhc(env, unit, unit, n_max=r, T=T, J=T, window=window)
    cenv = CompletedEnveloping(env, T, r + 1)
    right = cenv.tor_system(unit_complex(env.Ae))
    entries = []
    left_nonzero, right_nonzero = set(), set()
    for i in range(0, r + 1):
        lrows = lim_lim1(left, i, window)
        rwin = (window.lo + twist, window.hi + twist)
        rrows = lim_lim1(right, i - r, rwin)
        for lr, rr in zip(lrows, rrows):
            both = lr["stabilized"] and rr["stabilized"]
            if lr["lim"]:
                left_nonzero.add(i)
            if rr["lim"]:
                right_nonzero.add(i - r)
            entries.append({
                "check": "vdb", "index": i, "degree": lr["degree"], "rhs_index": i - r, "rhs_degree": rr["degree"],
                "lhs_dims": lr["stage_dims"], "rhs_dims": rr["stage_dims"],
                "lhs_value": lr["lim"], "rhs_value": rr["lim"],
                "basis": "limit" if both else "tower-estimate",
                "iso": lr["lim"] == rr["lim"],
                "stabilized_at": max(lr["stabilized_at"], rr["stabilized_at"]) if both else None,
            })
    Q = conormal_presentation(env)
    tower = [quotient_ring(A, IdealSpec(A, env.seq.elems).power(t)) for t in range(1, T + 1)]
    side = {
        "conormal_rank": Q.rank == r,
        "top_exterior_free_rank_one": Q.rank == r and all(top_exterior_is_free(Q, S) for S in tower),
        "shift_matches": {i + (-r) for i in left_nonzero} == right_nonzero and bool(left_nonzero),
    }
    pair = left_pair(env, T, T, window)
    rep = theorem_report("smooth_duality", pair, {"m": m, "n": n, "ring": repr(A)}, entries, side)
    rep["shift"] = -r
    rep["internal_twist"] = twist
    rep["nonzero_indices"] = {"lhs": sorted(left_nonzero), "rhs": sorted(right_nonzero)}
    return rep


def _degree(A, g, ring):
    return max(sum(w * k for w, k in zip(ring.weights, e)) for e in g)


# ------------------------------------------------------------- homology

def module_from_representation(ring, degrees, actions):
    """The module with field basis e_b (degree ``degrees[b]``) and x_v e_b = sum_c actions[v][c][b] e_c."""
    field = ring.field
    one = ring.poly.zero_exp
    rels = []
    for v, mat in enumerate(actions):
        xv = tuple(1 if k == v else 0 for k in range(ring.nvars))
        for b in range(len(degrees)):
            rel = {(b, xv): field(1)}
            for c in range(len(degrees)):
                a = mat[c][b]
                if a:
                    rel[(c, one)] = field.add(rel.get((c, one), 0), field.neg(a))
            rels.append({k: a for k, a in rel.items() if a})
    return FPModule(ring, degrees, rels)


def _representation(M: FPModule):
    """Field basis of a finite-dimensional graded module and the matrices of the variables."""
    A = M.ring
    basis = []
    for t in M._total_basis():
        basis.append((M.vector_degree({t: 1}) if A.graded else 0, t))
    basis.sort(key=lambda b: (b[0], b[1]))
    pos = {t: k for k, (_, t) in enumerate(basis)}
    field = A.field
    acts = []
    for v in range(A.nvars):
        xv = tuple(1 if k == v else 0 for k in range(A.nvars))
        mat = [[field(0)] * len(basis) for _ in basis]
        for b, (_, (i, e)) in enumerate(basis):
            img = M.reduce({(i, tuple(a + c for a, c in zip(e, xv))): field(1)})
            for t, a in img.items():
                mat[pos[t]][b] = a
        acts.append(mat)
    return [d for d, _ in basis], acts


def graded_dual(M: FPModule):
    """Hom_k(M, k) for finite-dimensional M, degrees negated, action transposed."""
    degs, acts = _representation(M)
    tr = [[list(col) for col in zip(*mat)] for mat in acts]
    return module_from_representation(M.ring, [-d for d in degs], tr)


def truncate_above(M: FPModule, D):
    """M / M_{>D}: kill every monomial multiple of a generator landing above degree D."""
    A = M.ring
    maxw = max(A.weights) if A.weights else 1
    rels = list(M.relations)
    one = A.field(1)
    for i, s in enumerate(M.shifts):
        for w in range(max(D - s + 1, 0), max(D - s + 1, 0) + maxw):
            for e in A.monomials_of_weight(w):
                rels.append({(i, e): one})
    return FPModule(A, list(M.shifts), rels)


def hom_k(env, M: FPModule, N: FPModule, top=None):
    """Hom_k(M, N) = M^dual (x)_k N as an A^e-module; M is truncated above ``top`` first if given."""
    if top is not None:
        M = truncate_above(M, top)
    return external_tensor(env, graded_dual(M), N)


def hh_homology(env, M, N, n_max=3, window=(-3, 3), top=None):
    """HH_n(A|k; Hom_k(M, N)) = Tor_n^{A^e}(A, Hom_k(M, N)) via the diagonal resolution."""
    H = hom_k(env, M, N, top)
    F, strategy = diagonal_resolution(env, n_max + 1)
    X = tensor_complex(F, H)
    window = DegreeWindow.coerce(window)
    tab = HHTable(repr(env.A), [env.A.to_str(g) for g in env.seq.elems], "Hom_k(M, N)", strategy, -F.lo)
    for n in range(0, n_max + 1):
        dims = _window_or_total(X, -n, window) if X.lo <= -n <= X.hi else [0] * len(window)
        tab.entries.append({"n": n, "kind": "module", "window": window.as_list(), "dims": dims,
                            "total": sum(dims), "stabilized_at": None})
    return tab


def _torsion_systems(env, M, N, n_max, T, top):
    H = hom_k(env, M, N, top)
    F, strategy = diagonal_resolution(env, n_max + 1)
    Ae = env.Ae
    idF, idH = identity_chain_map(F), identity_chain_map(H)
    # RGamma_a of A (x)^L_{A^e} H: a acting through the first factor
    left_st, right_st = [], []
    for t in range(1, T + 1):
        Kl, _ = stable_koszul_stage(Ae, env.seq_left, t)
        Ke, _ = stable_koszul_stage(Ae, env.seq_e, t)
        left_st.append(tensor_complex(F, tensor_complex(Kl, H)))
        right_st.append(tensor_complex(F, tensor_complex(Ke, H)))
    left_tr, right_tr = [], []
    for t in range(1, T):
        _, fl = stable_koszul_stage(Ae, env.seq_left, t)
        _, fe = stable_koszul_stage(Ae, env.seq_e, t)
        left_tr.append(tensor_chain_map(idF, tensor_chain_map(fl, idH), left_st[t - 1], left_st[t]))
        right_tr.append(tensor_chain_map(idF, tensor_chain_map(fe, idH), right_st[t - 1], right_st[t]))
    left = IndSystem(left_st, left_tr)
    right = IndSystem(right_st, right_tr)
    # RGamma_{a^e} -> RGamma_{a (x) 1}: the unit on the second-factor Koszul stage
    Kl, _ = stable_koszul_stage(Ae, env.seq_left, T)
    Kr, _ = stable_koszul_stage(Ae, env.seq_e.elems[len(env.seq_left):] and
                                ElementSequence(Ae, env.seq_e.elems[len(env.seq_left):]), T)
    Ke, _ = stable_koszul_stage(Ae, env.seq_e, T)
    e2 = tensor_chain_map(identity_chain_map(Kl), e_unit_map(Ae, ElementSequence(Ae, env.seq_e.elems[len(env.seq_left):]), T))
    e2 = rewrap(rewrap(e2, e2.source, e2.source), Ke, e2.target)
    e2 = ChainMap(Ke, Kl, {i: ModuleMap(Ke[i], Kl[i], e2[i].columns, check=False) for i in range(Ke.lo, Ke.hi + 1)
                           if Kl.lo <= i <= Kl.hi}, check=False)
    nat = tensor_chain_map(idF, tensor_chain_map(e2, idH), right_st[-1], left_st[-1])
    return left, right, nat, F, strategy


def torsion_hh_homology(env, M, N, n_max=3, T=6, window=(-3, 3), top=None):
    """RGamma_a (A (x)^L_{A^e} Hom_k(M, N)) as an ind table."""
    left, _, _, F, strategy = _torsion_systems(env, M, N, n_max, T, top)
    tab = _tower_table(env, left, "ind", range(-n_max, len(env.seq) + 1), window, "Hom_k(M, N)", strategy, -F.lo)
    return tab


def verify_tformula_homology(env, M, N, n_max=3, T=None, window=(-3, 3), top=None):
    """RGamma_a(A (x)^L_{A^e} Hom_k(M, N)) against A (x)^L_{A^e} RGamma_{a^e} Hom_k(M, N)."""
    window = DegreeWindow.coerce(window)
    T = T or adic_window_stages(window)
    left, right, nat, F, strategy = _torsion_systems(env, M, N, n_max, T, top)
    entries = []
    for i in range(-n_max, len(env.seq_e) + 1):
        entries += _compare("tformula_homology", i, window,
                            [("rgamma_tor", "ind", left), ("tor_rgamma_e", "ind", right)],
                            [("tor_rgamma_e", "rgamma_tor", nat)])
    pair = left_pair(env, T, T, window)
    return theorem_report("torsion_homology_formula", pair,
                          {"ring": repr(env.A), "coefficients": [_describe_coef(M), _describe_coef(N)],
                           "truncation": top, "resolution": strategy}, entries)
