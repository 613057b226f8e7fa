"""Ind/pro systems of complexes and their degreewise colim, lim and lim^1.

Nothing here materializes a colimit or limit as a module.  For each
cohomological index and internal degree in a window we look at the
finite-dimensional pieces along the tower and report where the transition
maps become bijective.
"""

from dataclasses import dataclass

from . import linalg
from .complexes import BoundedComplex, ChainMap


class TowerError(ValueError):
    pass


@dataclass(frozen=True)
class DegreeWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise TowerError(f"empty degree window [{self.lo}, {self.hi}]")

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def __len__(self):
        return self.hi - self.lo + 1

    def as_list(self):
        return [self.lo, self.hi]

    @classmethod
    def coerce(cls, w):
        if isinstance(w, DegreeWindow):
            return w
        lo, hi = w
        return cls(int(lo), int(hi))


def _as_complex(X):
    if isinstance(X, BoundedComplex):
        return X
    return BoundedComplex.concentrated(X)


def _as_chain_map(f, src, tgt):
    if isinstance(f, ChainMap):
        return f
    return ChainMap(src, tgt, {0: f}, check=False)


class _System:
    direction = None

    def __init__(self, stages, transitions, first=1, check=False):
        self.stages = [_as_complex(X) for X in stages]
        if len(transitions) != len(self.stages) - 1:
            raise TowerError("need one transition between consecutive stages")
        self.first = first
        self.transitions = []
        for k, f in enumerate(transitions):
            a, b = self.stages[k], self.stages[k + 1]
            src, tgt = (a, b) if self.direction == "ind" else (b, a)
            f = _as_chain_map(f, src, tgt)
            if check:
                f.certify()
            self.transitions.append(f)

    def __len__(self):
        return len(self.stages)

    def stage_number(self, k):
        return self.first + k

    def _transition_matrix(self, k, i, d):
        mat, m, n = self.transitions[k].induced(i, d)
        return mat, m, n

    def degree_report(self, i, d):
        """Stage dims, transition ranks and the stable-rank analysis for H^i_d.

        For an ind system C_k = rank(V_k -> V_last) and C'_k = rank(V_k ->
        V_(last-1)); for a pro system the same with arrows reversed.  The
        tower counts as stabilized at k when C_k = C'_k (the image or kernel
        no longer moves) and C_k = C_(k+1) = C_(k+2).  On a tower whose
        transitions become bijective this is "two consecutive bijective
        transitions"; it also detects pro-zero and ind-zero towers.
        """
        field = self.stages[0].ring.field
        p = linalg.modulus(field)
        dims = [X.h_piece(i, d).dim for X in self.stages]
        mats = [self._transition_matrix(k, i, d)[0] for k in range(len(self.transitions))]
        ranks = [linalg.rank(m, field) for m in mats]
        last = len(self.stages) - 1
        reach = self._reach(mats, dims, last, field, p)
        reach_prev = self._reach(mats, dims, last - 1, field, p) if last >= 1 else reach
        stab = None
        for k in range(0, last - 1):
            if all(reach[k2] == reach[k] for k2 in range(k, last + 1)) and \
                    all(reach[k2] == reach_prev[k2] for k2 in range(k, last)):
                stab = k
                break
        if stab is None:
            stab = self._zero_witness(mats, dims, field, p)
        return dims, ranks, reach, stab

    def _span(self, mats, k, j, p):
        """matrix of the structure map across transitions k .. k+j-1."""
        cur = None
        for m in range(k, k + j):
            if self.direction == "ind":
                cur = mats[m] if cur is None else linalg.compose(cur, mats[m], p)
            else:
                cur = mats[m] if cur is None else linalg.compose(mats[m], cur, p)
        return cur

    def _zero_witness(self, mats, dims, field, p):
        """First stage k0 from which the tower is visibly essentially zero.

        Stage dims are constant from k0, the rank of every composite of j
        transitions starting at k >= k0 depends only on j, and composites of
        some length s vanish, observed from at least two starting stages.  The
        returned index satisfies k0 + s <= last, so its reach is zero.
        """
        last = len(dims) - 1
        for k0 in range(0, last - 1):
            if any(dims[k] != dims[k0] for k in range(k0, last + 1)):
                continue
            table = {}
            for k in range(k0, last):
                for j in range(1, last - k + 1):
                    table[k, j] = linalg.rank(self._span(mats, k, j, p), field)
            if any(table[k, j] != table[k0, j] for (k, j) in table):
                continue
            s = next((j for j in range(1, last - k0 + 1) if table[k0, j] == 0), None)
            if s is not None and last - k0 >= s + 1:
                return k0
        return None

    def _reach(self, mats, dims, end, field, p):
        """rank of the composite between each stage k <= end and stage ``end``."""
        out = [None] * (end + 1)
        out[end] = dims[end]
        cur = None
        for k in range(end - 1, -1, -1):
            m = mats[k]
            if self.direction == "ind":
                # V_k -> V_(k+1) -> ... -> V_end
                cur = m if cur is None else linalg.compose(m, cur, p)
            else:
                # V_end -> ... -> V_(k+1) -> V_k
                cur = m if cur is None else linalg.compose(cur, m, p)
            out[k] = linalg.rank(cur, field)
        return out

    def certify(self):
        for f in self.transitions:
            f.certify()
        return True


class IndSystem(_System):
    """Stages X_1 -> X_2 -> ... with transitions t -> t+1."""

    direction = "ind"

    def colim(self, i, window):
        return colim(self, i, window)


class ProSystem(_System):
    """Stages X_1 <- X_2 <- ... with transitions t+1 -> t."""

    direction = "pro"

    def lim_lim1(self, i, window):
        return lim_lim1(self, i, window)


def colim(system: IndSystem, i, window):
    """Per-degree colimit dims of H^i along an ind system (see degree_report)."""
    window = DegreeWindow.coerce(window)
    out = []
    for d in window:
        dims, ranks, reach, stab = system.degree_report(i, d)
        value = reach[stab] if stab is not None else reach[0 if len(reach) < 3 else -3]
        out.append({"degree": d, "dim": value, "stabilized": stab is not None,
                    "stabilized_at": system.stage_number(stab) if stab is not None else None,
                    "stage_dims": dims, "transition_ranks": ranks})
    return out


def lim_lim1(system: ProSystem, i, window):
    """Per-degree lim and lim^1 dims of H^i along a pro system.

    Pieces are finite-dimensional, so the tower is Mittag-Leffler and lim^1
    vanishes; ``mittag_leffler`` records whether eventual surjectivity of
    the last transitions was also observed directly.
    """
    window = DegreeWindow.coerce(window)
    out = []
    for d in window:
        dims, ranks, reach, stab = system.degree_report(i, d)
        tail = range(max(0, len(ranks) - 2), len(ranks))
        surj_tail = bool(ranks) and all(ranks[k] == dims[k] for k in tail)
        value = reach[stab] if stab is not None else reach[-3 if len(reach) >= 3 else 0]
        out.append({"degree": d, "lim": value, "lim1": 0,
                    "mittag_leffler": "surjective" if surj_tail else "finite-dimensional",
                    "stabilized": stab is not None,
                    "stabilized_at": system.stage_number(stab) if stab is not None else None,
                    "stage_dims": dims, "transition_ranks": ranks})
    return out
