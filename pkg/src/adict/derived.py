"""Torsion and completion functors, their derived versions, and theorem checks.

Derived objects are towers of finite complexes:

* RGamma M  ~  ind system  K_t (x) M          (stable Koszul stages)
               ind system  Tel_j (x) M        (telescope stages)
               ind system  Hom(P_t, M)        (P_t a free resolution of A/a^t)
* LLambda M ~  pro system  Hom(Tel_j, M)
               pro system  Hom(K_j, M)
               pro system  F / a^j F          (F a free resolution of M)

Every check compares two or more such towers degreewise in a window and,
where a natural map exists at a finite stage, also checks that the map
is bijective on cohomology in the window.
"""

from dataclasses import dataclass, field as dc_field

from . import linalg
from .complexes import (
    BoundedComplex,
    ChainMap,
    free_resolution,
    hom_complex,
    hom_postcompose,
    hom_precompose,
    hom_tensor_adjunction,
    lift_to_resolutions,
    tensor_chain_map,
    tensor_complex,
)
from .groebner import Lifter
from .koszul import (
    ElementSequence,
    _torsion_submodule,
    adic_quotient,
    e_map,
    e_unit_map,
    stable_koszul_stage,
    tel_projection,
    telescope,
    u_map,
    torsion_stage,
    unit_complex,
    v_map,
    w_map,
)
from .modules import FPModule, ModuleMap
from .rings import IdealSpec
from .towers import DegreeWindow, IndSystem, ProSystem, TowerError, colim, lim_lim1


class AdicPair:
    """A ring with a finitely generated ideal given by a generator sequence."""

    def __init__(self, ring, seq, T=6, J=6, window=None, name=None):
        self.ring = ring
        self.seq = seq if isinstance(seq, ElementSequence) else ElementSequence(ring, list(seq))
        self.ideal = self.seq.ideal()
        if T < 2 or J < 2:
            raise ValueError("stage bounds T and J must be at least 2")
        self.T = T
        self.J = J
        n = len(self.seq)
        self.window = DegreeWindow.coerce(window) if window is not None else DegreeWindow(-(n + 3), n + 3)
        self.name = name

    @property
    def n(self):
        return len(self.seq)

    def describe(self):
        return f"({self.ring!r}, {self.seq!r})"

    def with_(self, **kw):
        args = dict(ring=self.ring, seq=self.seq, T=self.T, J=self.J, window=self.window, name=self.name)
        args.update(kw)
        return AdicPair(**args)


def as_complex(M):
    return M if isinstance(M, BoundedComplex) else BoundedComplex.concentrated(M)


def describe_module(M):
    if isinstance(M, BoundedComplex):
        return f"complex[{M.lo},{M.hi}] ranks {M.ranks()}"
    ring = M.ring
    if M.rank == 0:
        return "0"
    rels = []
    for r in M.relations:
        comps = {}
        for (k, e), c in r.items():
            comps.setdefault(k, {})[e] = c
        rels.append("(" + ", ".join(f"{k}:{ring.to_str(p)}" for k, p in sorted(comps.items())) + ")")
    base = f"A^{M.rank}{list(M.shifts)}"
    return base + ("/<" + ", ".join(rels) + ">" if rels else "")


def rewrap(f, S, T):
    """The same maps viewed between complexes S and T with identical presentations."""
    maps = {}
    for i in range(S.lo, S.hi + 1):
        maps[i] = ModuleMap(S[i], T[i], f[i].columns, check=False)
    return ChainMap(S, T, maps, check=False)


def identity_chain_map(X):
    return ChainMap(X, X, {i: ModuleMap.identity(X[i]) for i in range(X.lo, X.hi + 1)}, check=False)


# -------------------------------------------------------- underived

def gamma(pair: AdicPair, M: FPModule):
    """(Gamma_a M, inclusion, report) from the chain of kernels of a^t."""
    A = pair.ring
    prev = None
    for t in range(1, pair.T + 1):
        G, inc = _torsion_submodule(A, pair.seq, M, t)
        if prev is not None and _same_submodule(A, M, prev[1], inc):
            return prev[0], prev[1], {"stabilized": True, "stabilized_at": t - 1}
        prev = (G, inc)
    return prev[0], prev[1], {"stabilized": False, "stabilized_at": None}


def _same_submodule(A, M, inc_small, inc_big):
    if not inc_big.columns:
        return True
    lifter = Lifter(A.field, inc_small.columns, M.rank, M.relations, A.relations, A.nvars)
    return all(M.is_zero_vector(c) or lifter.lift(c) is not None for c in inc_big.columns)


def lambda_(pair: AdicPair, M: FPModule):
    """(pro system M/a^t M for t = 1..T, tau_t: M -> M/a^t M)."""
    A = pair.ring
    stages = [adic_quotient(A, pair.seq, M, t)[0] for t in range(1, pair.T + 1)]
    trans = [ModuleMap(stages[k + 1], stages[k], [stages[k].gen(i) for i in range(M.rank)], check=False)
             for k in range(pair.T - 1)]
    taus = [ModuleMap(M, S, [S.gen(i) for i in range(M.rank)], check=False) for S in stages]
    return ProSystem(stages, trans), taus


# ------------------------------------------------------------ routes

def koszul_torsion_system(pair, M, T=None):
    """IndSystem K_t (x) M."""
    A = pair.ring
    M = as_complex(M)
    T = T or pair.T
    stages, maps = [], []
    for t in range(1, T + 1):
        K, _ = stable_koszul_stage(A, pair.seq, t)
        stages.append(tensor_complex(K, M))
    ident = identity_chain_map(M)
    for t in range(1, T):
        _, f = stable_koszul_stage(A, pair.seq, t)
        maps.append(tensor_chain_map(f, ident, stages[t - 1], stages[t]))
    return IndSystem(stages, maps)


def telescope_torsion_system(pair, M, J=None):
    """IndSystem Tel_j (x) M."""
    A = pair.ring
    M = as_complex(M)
    J = J or pair.J
    stages, maps = [], []
    for j in range(1, J + 1):
        Tj, _ = telescope(A, pair.seq, j)
        stages.append(tensor_complex(Tj, M))
    ident = identity_chain_map(M)
    for j in range(1, J):
        _, inc = telescope(A, pair.seq, j)
        maps.append(tensor_chain_map(inc, ident, stages[j - 1], stages[j]))
    return IndSystem(stages, maps)


def _quotient_resolutions(pair, T, length):
    A = pair.ring
    out = []
    for t in range(1, T + 1):
        Q = FPModule.cyclic(A, pair.ideal.power(t).gens)
        F, _ = free_resolution(Q, length)
        out.append(F)
    lifts = []
    for t in range(1, T):
        F, G = out[t], out[t - 1]
        f0 = ModuleMap(F[0], G[0], [G[0].gen(0)], check=False)
        lifts.append(lift_to_resolutions(F, G, f0))
    return out, lifts


def ext_torsion_system(pair, M, T=None):
    """IndSystem Hom(P_t, M) with P_t a free resolution of A/a^t."""
    M = as_complex(M)
    T = T or pair.T
    length = pair.n + 1 + (M.hi - M.lo)
    res, lifts = _quotient_resolutions(pair, T, length)
    stages = [hom_complex(P, M) for P in res]
    maps = [hom_precompose(lifts[k], M, stages[k], stages[k + 1]) for k in range(T - 1)]
    return IndSystem(stages, maps)


def telescope_completion_system(pair, M, J=None):
    """ProSystem Hom(Tel_j, M)."""
    A = pair.ring
    M = as_complex(M)
    J = J or pair.J
    stages = [hom_complex(telescope(A, pair.seq, j)[0], M) for j in range(1, J + 1)]
    maps = [hom_precompose(telescope(A, pair.seq, j)[1], M, stages[j], stages[j - 1]) for j in range(1, J)]
    return ProSystem(stages, maps)


def koszul_completion_system(pair, M, J=None):
    """ProSystem Hom(K_j, M)."""
    A = pair.ring
    M = as_complex(M)
    J = J or pair.J
    stages = [hom_complex(stable_koszul_stage(A, pair.seq, j)[0], M) for j in range(1, J + 1)]
    maps = [hom_precompose(stable_koszul_stage(A, pair.seq, j)[1], M, stages[j], stages[j - 1])
            for j in range(1, J)]
    return ProSystem(stages, maps)


def module_resolution(M, length):
    """A free resolution of a module, or the complex itself if already free."""
    if isinstance(M, BoundedComplex):
        if all(not M[i].relations for i in range(M.lo, M.hi + 1)):
            return M
        raise ValueError("resolving complexes with non-free terms is not supported")
    F, _ = free_resolution(M, length)
    return F


def adic_completion_system(pair, M, J=None):
    """ProSystem F / a^j F with F a free resolution of M (derived quotients)."""
    A = pair.ring
    J = J or pair.J
    F = module_resolution(M, pair.n + 2)
    stages = [adic_quotient(A, pair.seq, F, j) for j in range(1, J + 1)]
    maps = []
    for j in range(1, J):
        S, T = stages[j], stages[j - 1]
        maps.append(ChainMap(S, T, {i: ModuleMap(S[i], T[i], [T[i].gen(g) for g in range(S[i].rank)], check=False)
                                    for i in range(S.lo, S.hi + 1)}, check=False))
    return ProSystem(stages, maps), F


# ------------------------------------------------------ derived objects

@dataclass
class TorsionObject:
    """RGamma_a M as an ind system with per-index colimit reports."""

    pair: AdicPair
    module: object
    system: IndSystem
    indices: tuple

    def report(self, window=None):
        window = DegreeWindow.coerce(window or self.pair.window)
        return {i: colim(self.system, i, window) for i in range(self.indices[0], self.indices[1] + 1)}

    def dims(self, i, window=None):
        return [r["dim"] for r in colim(self.system, i, window or self.pair.window)]


@dataclass
class CompleteObject:
    """LLambda_a M as a pro system with per-index lim / lim^1 reports."""

    pair: AdicPair
    module: object
    system: ProSystem
    indices: tuple

    def report(self, window=None):
        window = DegreeWindow.coerce(window or self.pair.window)
        return {i: lim_lim1(self.system, i, window) for i in range(self.indices[0], self.indices[1] + 1)}

    def dims(self, i, window=None):
        return [r["lim"] for r in lim_lim1(self.system, i, window or self.pair.window)]


def rgamma(pair: AdicPair, M, route="koszul"):
    M = as_complex(M)
    if route == "koszul":
        system = koszul_torsion_system(pair, M)
    elif route == "telescope":
        system = telescope_torsion_system(pair, M)
    elif route == "ext":
        system = ext_torsion_system(pair, M)
    else:
        raise ValueError(f"unknown route {route!r}")
    return TorsionObject(pair, M, system, (M.lo, M.hi + pair.n))


def llambda(pair: AdicPair, M, route="telescope"):
    Mc = as_complex(M)
    if route == "telescope":
        system = telescope_completion_system(pair, Mc)
    elif route == "koszul":
        system = koszul_completion_system(pair, Mc)
    elif route == "adic":
        system, _ = adic_completion_system(pair, M)
    else:
        raise ValueError(f"unknown route {route!r}")
    return CompleteObject(pair, Mc, system, (Mc.lo - pair.n, Mc.hi))


# ------------------------------------------------------- verification

def bijective_in(f: ChainMap, i, d):
    """Is H^i(f) bijective in internal degree d?"""
    mat, m, n = f.induced(i, d)
    if m != n:
        return False
    return linalg.rank(mat, f.source.ring.field) == m


def _tower_rows(system, kind, i, window):
    return colim(system, i, window) if kind == "ind" else lim_lim1(system, i, window)


def _value(row):
    return row["dim"] if "dim" in row else row["lim"]


def _composite(system, k, i, d):
    """H^i_d matrix of the structure map between stage index k and the last stage.

    Ind systems: X_k -> X_last.  Pro systems: X_last -> X_k.  None means identity.
    """
    p = linalg.modulus(system.stages[0].ring.field)
    last = len(system.stages) - 1
    cur = None
    if system.direction == "ind":
        for m in range(k, last):
            mat = system.transitions[m].induced(i, d)[0]
            cur = mat if cur is None else linalg.compose(cur, mat, p)
    else:
        for m in range(last - 1, k - 1, -1):
            mat = system.transitions[m].induced(i, d)[0]
            cur = mat if cur is None else linalg.compose(cur, mat, p)
    return cur


def _rank(mat, dim, field):
    return dim if mat is None else linalg.rank(mat, field)


def tower_map_iso(V, W, f_last, i, d, kv=None, kw=None):
    """Does a map of towers, given at the last stage, induce an iso on colim or lim of H^i_d?

    With stable stage indices kv, kw (or the last stage when a tower did not
    stabilize) the colimit is the image of X_k in X_last and the limit is the
    image of X_last in X_k; naturality reduces the check to ranks of
    composites through f_last.
    """
    field = V.stages[0].ring.field
    p = linalg.modulus(field)
    last_v, last_w = len(V.stages) - 1, len(W.stages) - 1
    kv = last_v if kv is None else kv
    kw = last_w if kw is None else kw
    fm, dv, dw = f_last.induced(i, d)
    if V.direction == "ind":
        cv = _composite(V, kv, i, d)
        cw = _composite(W, kw, i, d)
        rv = _rank(cv, dv, field)
        rw = _rank(cw, dw, field)
        both = fm if cv is None else linalg.compose(cv, fm, p)
        return rv == rw == linalg.rank(both, field)
    pv = _composite(V, kv, i, d)
    pw = _composite(W, kw, i, d)
    rv = _rank(pv, V.stages[kv].h_piece(i, d).dim, field)
    rw = _rank(pw, W.stages[kw].h_piece(i, d).dim, field)
    both = fm if pw is None else linalg.compose(fm, pw, p)
    return rv == rw == linalg.rank(both, field)


def _stab_index(system, i, d):
    return system.degree_report(i, d)[3]


def _compare(check, i, window, towers, maps=(), matched=None):
    """Entries comparing several towers for index i across the window.

    ``towers`` is a list of (label, kind, system); the first is the left-hand
    side.  ``maps`` are (source label, target label, map at the last stage)
    and must induce isomorphisms on the stable parts.  ``matched`` optionally
    gives (label, map at the last stage, dims-by-stage function) for a
    right-hand side that is a single complex per stage rather than a tower.
    """
    rows = {label: _tower_rows(sys_, kind, i, window) for label, kind, sys_ in towers}
    systems = {label: sys_ for label, _, sys_ in towers}
    entries = []
    for k, d in enumerate(DegreeWindow.coerce(window)):
        rs = [rows[label][k] for label, _, _ in towers]
        all_stable = all(r["stabilized"] for r in rs)
        if all_stable:
            values = [_value(r) for r in rs]
            basis = "limit"
        else:
            # the estimate lim/colim report: transients born at the last
            # stages are not counted
            values = [_value(r) for r in rs]
            basis = "tower-estimate"
        agree = len(set(values)) == 1
        if all_stable:
            stab = {label: _stab_index(systems[label], i, d) for label in systems}
            maps_ok = all(tower_map_iso(systems[a], systems[b], f, i, d, stab[a], stab[b]) for a, b, f in maps)
        elif maps:
            # no stabilization: compare images of early stages, where transient
            # classes born at stage k have had time to die by the last stage
            stab = {label: None for label in systems}
            basis = "stage-images"
            agree = True
            maps_ok = all(tower_map_iso(systems[a], systems[b], f, i, d, k, k)
                          for a, b, f in maps for k in _early_stages(systems[a]))
        else:
            stab = {label: None for label in systems}
            maps_ok = True
        matched_dims = matched_value = None
        if matched is not None:
            _, f, dims_fn = matched
            matched_dims = dims_fn(i, d)
            V = systems[towers[0][0]]
            # a matched right-hand side is one complex per stage: it must agree
            # with the last stage, and its value is the image of the stable part
            agree = agree and matched_dims[-1] == rs[0]["stage_dims"][-1]
            iso, matched_value = _matched_iso(V, f, i, d, stab[towers[0][0]])
            maps_ok = maps_ok and iso
        lhs = rs[0]
        rhs = rs[1] if len(rs) > 1 else None
        entry = {
            "check": check,
            "index": i,
            "degree": d,
            "lhs_dims": lhs["stage_dims"],
            "rhs_dims": rhs["stage_dims"] if rhs is not None else matched_dims,
            "lhs_value": values[0],
            "rhs_value": values[1] if len(values) > 1 else matched_value,
            "basis": basis,
            "iso": bool(agree and maps_ok),
            "stabilized_at": max(r["stabilized_at"] for r in rs) if all_stable else None,
        }
        if len(rs) > 2:
            entry["other_dims"] = {label: rows[label][k]["stage_dims"] for label, _, _ in towers[2:]}
        entries.append(entry)
    return entries


def _early_stages(system):
    return range(0, (len(system.stages) - 2) // 2 + 1)


def _matched_iso(V, f_last, i, d, kv):
    """Map from the stable part of tower V (last stage) onto a single complex.

    The single complex is a stage-T model, so f_last must be bijective on
    H^i_d and carry the stable image injectively.  Returns (ok, image rank).
    """
    field = V.stages[0].ring.field
    p = linalg.modulus(field)
    last = len(V.stages) - 1
    kv = last if kv is None else kv
    fm, dv, dt = f_last.induced(i, d)
    if V.direction != "ind":
        raise TowerError("matched comparison expects an ind system")
    c = _composite(V, kv, i, d)
    rv = _rank(c, dv, field)
    both = fm if c is None else linalg.compose(c, fm, p)
    rb = linalg.rank(both, field)
    return dv == dt == linalg.rank(fm, field) and rv == rb, rb


def survival_certificate(system, f_last, i, d):
    """First stage index k such that the image of X_k and of X_(k+1) in X_last maps
    isomorphically onto the target of f_last, or None.

    This is the finite-stage evidence for an isomorphism colim H^i_d -> target
    when every stage carries classes that only die some steps later.
    """
    field = system.stages[0].ring.field
    p = linalg.modulus(field)
    last = len(system.stages) - 1
    fm, dv, dt = f_last.induced(i, d)

    def ok(k):
        c = _composite(system, k, i, d)
        rv = _rank(c, dv, field)
        both = fm if c is None else linalg.compose(c, fm, p)
        return rv == dt == linalg.rank(both, field)

    for k in range(0, last - 1):
        if ok(k) and ok(k + 1):
            return k
    return None


def theorem_report(theorem, pair, instance, entries, side_checks=None):
    side_checks = side_checks or {}
    return {
        "theorem": theorem,
        "instance": instance,
        "window": pair.window.as_list(),
        "stages": {"T": pair.T, "J": pair.J},
        "per_degree": entries,
        "side_checks": side_checks,
        "pass": all(e["iso"] for e in entries) and all(side_checks.values()),
    }


def _maps_equal(f, g):
    return all(f[i].equals(g[i]) for i in range(f.source.lo, f.source.hi + 1))


def _instance(pair, *mods):
    return {"pair": pair.describe(), "modules": [describe_module(M) for M in mods]}


def _projection(S, T):
    """Chain map between complexes with the same generators, identity on generators."""
    return ChainMap(S, T, {i: ModuleMap(S[i], T[i], [T[i].gen(g) for g in range(S[i].rank)], check=False)
                           for i in range(S.lo, S.hi + 1)}, check=False)


def verify_formulas(pair: AdicPair, M):
    """RGamma via Ext / stable Koszul / telescope, LLambda via adic quotients / telescope / Koszul."""
    A = pair.ring
    Mc = as_complex(M)
    n = pair.n
    window = pair.window
    ext = ext_torsion_system(pair, Mc)
    kos = koszul_torsion_system(pair, Mc)
    tel = telescope_torsion_system(pair, Mc)
    maps = []
    if pair.T == pair.J:
        w = w_map(A, pair.seq, pair.J)
        maps.append(("telescope", "koszul", tensor_chain_map(w, identity_chain_map(Mc), tel.stages[-1],
                                                              kos.stages[-1])))
    entries = []
    for i in range(Mc.lo, Mc.hi + n + 1):
        entries += _compare("rgamma", i, window,
                            [("ext", "ind", ext), ("koszul", "ind", kos), ("telescope", "ind", tel)], maps)

    adic, F = adic_completion_system(pair, M)
    telc = telescope_completion_system(pair, F)
    kosc = koszul_completion_system(pair, Mc)
    tp = tel_projection(A, pair.seq, F, pair.J, H=telc.stages[-1], target=adic.stages[-1])
    for i in range(Mc.lo - n, Mc.hi + 1):
        entries += _compare("llambda", i, window,
                            [("adic", "pro", adic), ("telescope", "pro", telc), ("koszul", "pro", kosc)],
                            [("telescope", "adic", tp)])

    side = {}
    ok = True
    for t in range(1, pair.T + 1):
        v, sigma = v_map(A, pair.seq, Mc, t)
        e = e_map(A, pair.seq, Mc, t, v.target)
        ok = ok and _maps_equal(e.compose(v), sigma)
    side["e_v_equals_sigma"] = ok
    ok = True
    for j in range(1, pair.J + 1):
        tpj = tel_projection(A, pair.seq, Mc, j)
        hu = hom_precompose(u_map(A, pair.seq, j), Mc, target=tpj.source)
        ok = ok and _maps_equal(tpj.compose(hu), _projection(hu.source, tpj.target))
    side["tel_hom_u_equals_tau"] = ok
    return theorem_report("formulas", pair, _instance(pair, M), entries, side)


def _tau_koszul(A, seq, M, j):
    """tau_j: M = Hom(A, M) -> Hom(K_j, M), i.e. Hom(e, 1)."""
    return hom_precompose(e_unit_map(A, seq, j), M)


def mgm_gap(pair):
    """Offset j(t) - n t so that K_t (x) Hom(K_j, M) has no transient classes in the window.

    The classes that die in the pro-limit over j sit in degrees >= j - n t.
    """
    return max(pair.window.hi, 0) + 1


def verify_mgm(pair: AdicPair, M):
    """MGM equivalence and idempotence of RGamma and LLambda.

    RGamma(tau) is compared at matched stages (t, n t + gap).  LLambda(sigma)
    at fixed j takes the colimit over t first, since its stages carry
    classes that only die in that colimit; the evidence there is a
    survival certificate.
    """
    A = pair.ring
    Mc = as_complex(M)
    seq = pair.seq
    n = pair.n
    window = pair.window
    T, J = pair.T, pair.J
    gap = mgm_gap(pair)
    entries = []

    # RGamma(tau): K_t (x) M -> K_t (x) Hom(K_j, M), j = n t + gap
    kos = koszul_torsion_system(pair, Mc)
    matched_rg = {}

    def rg_stage(t):
        if t not in matched_rg:
            K, _ = stable_koszul_stage(A, seq, t)
            tau = _tau_koszul(A, seq, Mc, n * t + gap)
            src = kos.stages[t - 1]
            tgt = tensor_complex(K, tau.target)
            f = tensor_chain_map(identity_chain_map(K), rewrap(tau, Mc, tau.target),
                                 tensor_complex(K, Mc), tgt)
            matched_rg[t] = rewrap(f, src, tgt)
        return matched_rg[t]

    def rg_dims(i, d):
        return [rg_stage(t).target.h_piece(i, d).dim for t in range(1, T + 1)]

    for i in range(Mc.lo, Mc.hi + n + 1):
        entries += _compare("rgamma_of_tau", i, window, [("rgamma", "ind", kos)],
                            matched=("rgamma_llambda", rg_stage(T), rg_dims))

    # LLambda(sigma): colim_t Hom(K_j, K_t (x) M) -> Hom(K_j, M)
    kosc = koszul_completion_system(pair, Mc)
    per_j = {}
    for j in (J - 1, J):
        Kj, _ = stable_koszul_stage(A, seq, j)
        ts = range(j, max(n, 2) * j + gap + 3)
        big = koszul_torsion_system(pair, Mc, T=ts[-1])
        stages = [hom_complex(Kj, big.stages[t - 1]) for t in ts]
        trans = [hom_postcompose(Kj, big.transitions[t - 1], stages[k], stages[k + 1])
                 for k, t in enumerate(ts[:-1])]
        e = e_map(A, seq, Mc, ts[-1], big.stages[-1])
        sig = rewrap(hom_postcompose(Kj, e, stages[-1]), stages[-1], kosc.stages[j - 1])
        per_j[j] = (IndSystem(stages, trans, first=j), sig)
    for i in range(Mc.lo - n, Mc.hi + n + 1):
        for d in window:
            certs, ok = [], True
            for j in (J - 1, J):
                system, sig = per_j[j]
                k = survival_certificate(system, sig, i, d)
                certs.append(None if k is None else system.stage_number(k))
                ok = ok and k is not None
            target = [kosc.stages[j - 1].h_piece(i, d).dim for j in range(1, J + 1)]
            lim_row = lim_lim1(kosc, i, (d, d))[0]
            entries.append({
                "check": "llambda_of_sigma", "index": i, "degree": d,
                "lhs_dims": [per_j[j][0].stages[-1].h_piece(i, d).dim for j in (J - 1, J)],
                "rhs_dims": target,
                "lhs_value": target[-1] if ok else None, "rhs_value": target[-1],
                "basis": "survival", "iso": bool(ok),
                "stabilized_at": lim_row["stabilized_at"], "survival_stage": certs,
            })

    # idempotence of RGamma: K_t (x) K_t (x) M -> K_t (x) M
    stages, trans = [], []
    for t in range(1, T + 1):
        K, _ = stable_koszul_stage(A, seq, t)
        stages.append(tensor_complex(K, kos.stages[t - 1]))
    for t in range(1, T):
        _, f = stable_koszul_stage(A, seq, t)
        trans.append(tensor_chain_map(f, kos.transitions[t - 1], stages[t - 1], stages[t]))
    e = e_unit_map(A, seq, T)
    sig = rewrap(tensor_chain_map(e, identity_chain_map(kos.stages[-1]), stages[-1]), stages[-1], kos.stages[-1])
    rr = IndSystem(stages, trans)
    for i in range(Mc.lo, Mc.hi + 2 * n + 1):
        entries += _compare("rgamma_idempotent", i, window,
                            [("rgamma_rgamma", "ind", rr), ("rgamma", "ind", kos)],
                            [("rgamma_rgamma", "rgamma", sig)])

    # idempotence of LLambda: Hom(K_j, M) -> Hom(K_j (x) K_j, M)
    stages, trans = [], []
    for j in range(1, J + 1):
        K, _ = stable_koszul_stage(A, seq, j)
        stages.append(hom_complex(tensor_complex(K, K), Mc))
    for j in range(1, J):
        K, f = stable_koszul_stage(A, seq, j)
        trans.append(hom_precompose(tensor_chain_map(f, f), Mc, stages[j], stages[j - 1]))
    K, _ = stable_koszul_stage(A, seq, J)
    e1 = tensor_chain_map(e_unit_map(A, seq, J), identity_chain_map(K), tensor_complex(K, K))
    tau = rewrap(hom_precompose(e1, Mc, target=stages[-1]), kosc.stages[-1], stages[-1])
    ll = ProSystem(stages, trans)
    for i in range(Mc.lo - 2 * n, Mc.hi + 1):
        entries += _compare("llambda_idempotent", i, window,
                            [("llambda", "pro", kosc), ("llambda_llambda", "pro", ll)],
                            [("llambda", "llambda_llambda", tau)])
    return theorem_report("MGM", pair, _instance(pair, M), entries)


def verify_gm(pair: AdicPair, M, N):
    """RHom(RGamma M, N) vs RHom(M, LLambda N) vs RHom(M, completion of N)."""
    A = pair.ring
    seq = pair.seq
    n = pair.n
    Nc = as_complex(N)
    F = module_resolution(M, n + 2)
    G = Nc if isinstance(N, BoundedComplex) else module_resolution(N, n + 2)
    T, J = pair.T, pair.J

    lhs_st = [hom_complex(tensor_complex(F, stable_koszul_stage(A, seq, t)[0]), Nc) for t in range(1, T + 1)]
    idF = identity_chain_map(F)
    lhs_tr = [hom_precompose(tensor_chain_map(idF, stable_koszul_stage(A, seq, t)[1]), Nc, lhs_st[t], lhs_st[t - 1])
              for t in range(1, T)]
    lhs = ProSystem(lhs_st, lhs_tr)

    rhs_st = [hom_complex(F, hom_complex(telescope(A, seq, j)[0], Nc)) for j in range(1, J + 1)]
    rhs_tr = [hom_postcompose(F, hom_precompose(telescope(A, seq, j)[1], Nc), rhs_st[j], rhs_st[j - 1])
              for j in range(1, J)]
    rhs = ProSystem(rhs_st, rhs_tr)

    quo = [adic_quotient(A, seq, G, j) for j in range(1, J + 1)]
    ind_st = [hom_complex(F, Q) for Q in quo]
    ind_tr = [hom_postcompose(F, _projection(quo[j], quo[j - 1]), ind_st[j], ind_st[j - 1]) for j in range(1, J)]
    ind = ProSystem(ind_st, ind_tr)

    maps = []
    if T == J:
        Tj, _ = telescope(A, seq, J)
        w = tensor_chain_map(idF, w_map(A, seq, J))
        h = hom_precompose(w, Nc, source=lhs_st[-1])
        adj = hom_tensor_adjunction(F, Tj, Nc)
        comp = adj.compose(rewrap(h, h.source, adj.source))
        maps.append(("rhom_rgamma", "rhom_llambda", rewrap(comp, lhs_st[-1], rhs_st[-1])))

    lo = min(X.lo for X in (lhs_st[0], rhs_st[0], ind_st[0]))
    hi = max(X.hi for X in (lhs_st[0], rhs_st[0], ind_st[0]))
    entries = []
    for i in range(lo, hi + 1):
        entries += _compare("gm", i, pair.window, [("rhom_rgamma", "pro", lhs), ("rhom_llambda", "pro", rhs),
                                                    ("rhom_completion", "pro", ind)], maps)
    return theorem_report("GM", pair, _instance(pair, M, N), entries)


# ------------------------------------------------------- completion lemmas

class AdicRingTower:
    """The completed ring as the pro system of rings A/a^t with surjective transitions."""

    def __init__(self, pair: AdicPair, T=None):
        from .rings import quotient_ring
        self.pair = pair
        T = T or pair.T
        self.stages = [quotient_ring(pair.ring, pair.ideal.power(t)) for t in range(1, T + 1)]

    def __len__(self):
        return len(self.stages)

    def transition(self, t):
        """The ring map A/a^(t+1) -> A/a^t (identity on variables)."""
        from .rings import RingMap
        S, Tg = self.stages[t], self.stages[t - 1]
        return RingMap(S, Tg, [Tg.parse(v) for v in S.poly.names])


def constant_system(X, count, direction):
    ident = identity_chain_map(X)
    cls = IndSystem if direction == "ind" else ProSystem
    return cls([X] * count, [ident] * (count - 1))


def over_quotient(M: FPModule, C):
    """An A-module killed by ker(A -> C) presented over the quotient ring C."""
    rels = [v for v in (_reduce_vec(C, r) for r in M.relations) if v]
    return FPModule(C, list(M.shifts), rels)


def _reduce_vec(C, v):
    out = {}
    for (k, e), c in v.items():
        out.setdefault(k, {})[e] = c
    res = {}
    for k, p in out.items():
        for e, c in C.reduce(p).items():
            res[(k, e)] = c
    return res


def verify_completion_lemmas(pair: AdicPair, M, swap=None, stage=2):
    """The completion of a torsion object and RHom(completion, complete object) are trivial.

    Torsion side: N = K_stage (x) M; lim_s H(P_s (x) N) against H(N), with
    P_s a free resolution of A/a^s and the map induced by A -> P_s.
    Complete side: N = Hom(K_stage, M); RHom(completion of A, N) is
    evaluated as RHom(RGamma A, N) = lim_t Hom(K_t, N), against H(N).
    ``swap`` = (C ring, B-module M') adds the base-change swap check for the
    quotient ring C of A.
    """
    A = pair.ring
    seq = pair.seq
    n = pair.n
    Mc = as_complex(M)
    T = pair.T
    window = pair.window
    entries = []

    # torsion side
    K, _ = stable_koszul_stage(A, seq, stage)
    N = tensor_complex(K, Mc)
    U = unit_complex(A)
    UN = tensor_complex(U, N)
    res, lifts = _quotient_resolutions(pair, T, n + 1 + (N.hi - N.lo))
    stages = [tensor_complex(P, N) for P in res]
    idN = identity_chain_map(N)
    trans = [tensor_chain_map(lifts[k], idN, stages[k + 1], stages[k]) for k in range(T - 1)]
    W = ProSystem(stages, trans)
    V = constant_system(UN, T, "pro")
    P = res[-1]
    unit = ChainMap(U, P, {0: ModuleMap(U[0], P[0], [P[0].gen(0)], check=False)}, check=False)
    f = tensor_chain_map(unit, idN, UN, stages[-1])
    for i in range(N.lo - n - 1, N.hi + 1):
        entries += _compare("torsion_completion", i, window,
                            [("completed_tensor", "pro", W), ("torsion_object", "pro", V)],
                            [("torsion_object", "completed_tensor", f)])

    # complete side
    N2 = hom_complex(K, Mc)
    HU = hom_complex(U, N2)
    st2 = [hom_complex(stable_koszul_stage(A, seq, t)[0], N2) for t in range(1, T + 1)]
    tr2 = [hom_precompose(stable_koszul_stage(A, seq, t)[1], N2, st2[t], st2[t - 1]) for t in range(1, T)]
    W2 = ProSystem(st2, tr2)
    V2 = constant_system(HU, T, "pro")
    g = hom_precompose(e_unit_map(A, seq, T), N2, source=HU, target=st2[-1])
    for i in range(N2.lo - n, N2.hi + n + 1):
        entries += _compare("rhom_completion", i, window,
                            [("rhom_completed", "pro", W2), ("complete_object", "pro", V2)],
                            [("complete_object", "rhom_completed", g)])

    if swap is not None:
        entries += _swap_entries(pair, *swap)
    return theorem_report("completion_lemmas", pair, _instance(pair, M), entries)


def _swap_entries(pair: AdicPair, C, M):
    """LLambda_c RHom_B(C, M) vs RHom_B(C, LLambda_b M) for a quotient C of B.

    Left: when RHom_B(C, M) has a single nonzero cohomology H^q (a C-module),
    it is completed over C itself with Koszul stages of the image sequence;
    otherwise the B-side complex is completed.  Right: Hom_B(P, Hom_B(K_j, M))
    with P a free resolution of C over B.
    """
    B = pair.ring
    seq = pair.seq
    n = pair.n
    J = pair.J
    window = pair.window
    Mc = as_complex(M)
    kernel_gens = [g for g in C.relations if B.reduce(g)]
    Cmod = FPModule.cyclic(B, kernel_gens)
    P = module_resolution(Cmod, B.nvars + 1)
    R = hom_complex(P, Mc)
    nonzero = [i for i in range(R.lo, R.hi + 1) if not _cohomology_zero(R, i)]
    if len(nonzero) == 1:
        from .complexes import cohomology
        q = nonzero[0]
        H = over_quotient(cohomology(R, q), C)
        cseq = ElementSequence(C, [C.reduce(g) for g in seq.elems])
        Hc = BoundedComplex.concentrated(H, q)
        st = [hom_complex(stable_koszul_stage(C, cseq, j)[0], Hc) for j in range(1, J + 1)]
        tr = [hom_precompose(stable_koszul_stage(C, cseq, j)[1], Hc, st[j], st[j - 1]) for j in range(1, J)]
        left_label = "completion_over_quotient"
    else:
        st = [hom_complex(stable_koszul_stage(B, seq, j)[0], R) for j in range(1, J + 1)]
        tr = [hom_precompose(stable_koszul_stage(B, seq, j)[1], R, st[j], st[j - 1]) for j in range(1, J)]
        left_label = "completion_of_rhom"
    left = ProSystem(st, tr)
    rst = [hom_complex(P, hom_complex(stable_koszul_stage(B, seq, j)[0], Mc)) for j in range(1, J + 1)]
    rtr = [hom_postcompose(P, hom_precompose(stable_koszul_stage(B, seq, j)[1], Mc), rst[j], rst[j - 1])
           for j in range(1, J)]
    right = ProSystem(rst, rtr)
    lo = min(left.stages[0].lo, right.stages[0].lo)
    hi = max(left.stages[0].hi, right.stages[0].hi)
    entries = []
    for i in range(lo, hi + 1):
        entries += _compare("swap", i, window, [(left_label, "pro", left), ("rhom_of_completion", "pro", right)])
    return entries


def _cohomology_zero(X, i):
    from .complexes import cohomology
    return cohomology(X, i).is_zero()
