"""Hochschild cohomology of structure-constant algebras via the bar complex.

Cochains are maps from tensor powers of the augmentation complement
(normalized complex) into a two-sided coefficient module; when no
augmentation is available the full algebra is used instead.  Differential
ranks are taken exactly over the cyclotomic base field, or modulo several
independent large primes with a consensus check.  On graded inputs the
differential preserves total degree, so ranks are computed block by block,
which keeps the elimination workspaces small.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor

from .algebra import Echelon, StructureAlgebra, _acc, _clean
from .errors import EngineError
from .kernels import rank_mod_p
from .scalars import CycScalar, euler_phi, is_prime, root_of_unity_mod, to_prime_field

__all__ = [
    "Bimodule",
    "CohomologyReport",
    "check_bimodule",
    "trivial_bimodule",
    "self_bimodule",
    "bar_differential",
    "BarMatrix",
    "cohomology_dims",
    "sample_modular_primes",
]


# =====================================================================
# Bimodule
# =====================================================================

class Bimodule:
    """Two-sided module over a StructureAlgebra, with a distinguished basis.

    left:  dict i -> dict m -> dict m' -> CycScalar   (e_i . u_m)
    right: dict i -> dict m -> dict m' -> CycScalar   (u_m . e_i)
    weights: optional degree per module basis vector; enables graded
      block decomposition of the bar complex when the algebra is graded.
    """

    def __init__(self, A: StructureAlgebra, dim: int, left, right,
                 weights=None, name=None):
        self.A = A
        self.dim = dim
        self.left = left
        self.right = right
        self.weights = list(weights) if weights is not None else None
        self.name = name

    def act_left(self, i: int, vec: dict) -> dict:
        """e_i . vec for vec a coordinate dict over the module basis."""
        out: dict = {}
        rows = self.left.get(i)
        if rows:
            for m, c in vec.items():
                for m2, d in rows.get(m, _E).items():
                    _acc(out, m2, c * d)
        return _clean(out)

    def act_right(self, i: int, vec: dict) -> dict:
        out: dict = {}
        rows = self.right.get(i)
        if rows:
            for m, c in vec.items():
                for m2, d in rows.get(m, _E).items():
                    _acc(out, m2, c * d)
        return _clean(out)

    def __repr__(self):
        tag = self.name or "Bimodule"
        return f"<{tag} dim={self.dim} over {self.A!r}>"


_E: dict = {}


def check_bimodule(M: Bimodule):
    """First failing invariant as a witness tuple, or None.

    Checks: the unit acts as the identity on both sides, both actions are
    associative, and the left and right actions commute.
    """
    A = M.A
    for m in range(M.dim):
        e = {m: A.one}
        lu: dict = {}
        ru: dict = {}
        for u, cu in A.unit.items():
            for m2, c in M.act_left(u, e).items():
                _acc(lu, m2, cu * c)
            for m2, c in M.act_right(u, e).items():
                _acc(ru, m2, cu * c)
        if _clean(lu) != e or _clean(ru) != e:
            return ("unit", m)
    for i in range(A.dim):
        for j in range(A.dim):
            row = A.row(i, j)
            for m in range(M.dim):
                e = {m: A.one}
                prod_l: dict = {}
                prod_r: dict = {}
                for k, c in row.items():
                    for m2, d in M.act_left(k, e).items():
                        _acc(prod_l, m2, c * d)
                    for m2, d in M.act_right(k, e).items():
                        _acc(prod_r, m2, c * d)
                if _clean(prod_l) != M.act_left(i, M.act_left(j, e)):
                    return ("left_associative", i, j, m)
                if _clean(prod_r) != M.act_right(j, M.act_right(i, e)):
                    return ("right_associative", i, j, m)
                if M.act_right(j, M.act_left(i, e)) != M.act_left(i, M.act_right(j, e)):
                    return ("actions_commute", i, j, m)
    return None


def trivial_bimodule(Q) -> Bimodule:
    """One-dimensional module with both actions through the counit.

    Accepts a QuasiHopfDatum (counit) or an augmented StructureAlgebra.
    """
    if isinstance(Q, StructureAlgebra):
        A = Q
        if A.augmentation is None:
            raise EngineError("BAD_PARAMETER",
                              "trivial_bimodule needs an augmentation")
        eps = dict(A.augmentation)
    else:
        A = Q.A
        eps = {}
        for i, col in Q.counit.cols.items():
            c = col.get(())
            if c is not None and not c.is_zero():
                eps[i] = c
    left = {i: {0: {0: c}} for i, c in eps.items() if not c.is_zero()}
    right = {i: {0: {0: c}} for i, c in eps.items() if not c.is_zero()}
    return Bimodule(A, 1, left, right, weights=[0], name="trivial")


def self_bimodule(A) -> Bimodule:
    """The algebra acting on itself by multiplication on both sides."""
    if not isinstance(A, StructureAlgebra):
        A = A.A
    left: dict = {}
    right: dict = {}
    for i in range(A.dim):
        li: dict = {}
        ri: dict = {}
        for m in range(A.dim):
            row = A.row(i, m)
            if row:
                li[m] = dict(row)
            row = A.row(m, i)
            if row:
                ri[m] = dict(row)
        left[i] = li
        right[i] = ri
    return Bimodule(A, A.dim, left, right, weights=A.grading, name="self")


# =====================================================================
# Bar complex plumbing
# =====================================================================

class _BarData:
    """Reduced multiplication and action tables for one (A, M) pair.

    With an augmentation (normalized complex) the cochain argument space
    is ker eps with basis v_i = e_i - (eps_i/eps_i0) e_i0, i != i0; the
    augmentation ideal is closed under multiplication, so products expand
    in the same basis by dropping the i0 coordinate.  Without one, the
    argument space is A itself.
    """

    def __init__(self, A: StructureAlgebra, M: Bimodule, normalized: bool):
        self.A = A
        self.M = M
        aug = A.augmentation if normalized else None
        if aug is not None and not any(not c.is_zero() for c in aug.values()):
            raise EngineError("BAD_PARAMETER", "augmentation is identically zero")
        if aug is None:
            idx = list(range(A.dim))
            corr = [A.zero] * A.dim
            i0 = None
        else:
            i0 = next(i for i in range(A.dim)
                      if not aug.get(i, A.zero).is_zero())
            e0 = aug[i0]
            idx = [i for i in range(A.dim) if i != i0]
            corr = [aug.get(i, A.zero) * e0.inv() for i in range(A.dim)]
        self.normalized = aug is not None
        self.idx = idx
        self.nbar = len(idx)
        self.mdim = M.dim

        # reduced multiplication: position pair -> {position: scalar}
        mult: dict = {}
        pos_of = {b: p for p, b in enumerate(idx)}
        for p, a in enumerate(idx):
            ca = corr[a]
            for q, b in enumerate(idx):
                cb = corr[b]
                prod = dict(A.row(a, b))
                if i0 is not None:
                    if not ca.is_zero():
                        for k, c in A.row(i0, b).items():
                            _acc(prod, k, -(ca * c))
                    if not cb.is_zero():
                        for k, c in A.row(a, i0).items():
                            _acc(prod, k, -(cb * c))
                    if not ca.is_zero() and not cb.is_zero():
                        for k, c in A.row(i0, i0).items():
                            _acc(prod, k, ca * cb * c)
                red = {pos_of[k]: c for k, c in _clean(prod).items() if k != i0}
                if red:
                    mult[(p, q)] = red
        self.mult = mult
        rev: dict = {}
        for (p, q), row in mult.items():
            for r, c in row.items():
                rev.setdefault(r, []).append((p, q, c))
        self.rev = rev

        # reduced actions: position -> {m: {m': scalar}}
        self.left = [self._reduced_action(M.left, a, corr[a], i0) for a in idx]
        self.right = [self._reduced_action(M.right, a, corr[a], i0) for a in idx]

        # degrees for graded block decomposition (None disables it)
        self.weights = None
        self.mweights = None
        if A.grading is not None and M.weights is not None:
            g = A.grading
            if all(corr[a].is_zero() or g[a] == g[i0] for a in idx):
                self.weights = [g[a] for a in idx]
                self.mweights = list(M.weights)

    @staticmethod
    def _reduced_action(side: dict, a: int, ca: CycScalar, i0):
        mat: dict = {}
        for m, row in side.get(a, _E).items():
            mat[m] = dict(row)
        if i0 is not None and not ca.is_zero():
            for m, row in side.get(i0, _E).items():
                dst = mat.setdefault(m, {})
                for m2, c in row.items():
                    _acc(dst, m2, -(ca * c))
        out = {}
        for m, row in mat.items():
            r = _clean(row)
            if r:
                out[m] = r
        return out

    # -- index codecs ---------------------------------------------------
    def cochain_dim(self, k: int) -> int:
        return self.nbar ** k * self.mdim

    def decode(self, k: int, j: int):
        m = j % self.mdim
        rest = j // self.mdim
        t = [0] * k
        for pos in range(k - 1, -1, -1):
            t[pos] = rest % self.nbar
            rest //= self.nbar
        return tuple(t), m

    def encode(self, t, m: int) -> int:
        j = 0
        for v in t:
            j = j * self.nbar + v
        return j * self.mdim + m

    def weight_of(self, k: int, j: int):
        t, m = self.decode(k, j)
        return sum(self.weights[v] for v in t) + self.mweights[m]

    # -- one column of d^k ------------------------------------------------
    def column(self, k: int, j: int) -> dict:
        """(d^k f_j) as a coordinate dict over the C^{k+1} basis."""
        t, m = self.decode(k, j)
        col: dict = {}
        for u0 in range(self.nbar):
            act = self.left[u0].get(m)
            if act:
                for m2, c in act.items():
                    _acc(col, self.encode((u0,) + t, m2), c)
        sign_last = 1 if (k + 1) % 2 == 0 else -1
        for ul in range(self.nbar):
            act = self.right[ul].get(m)
            if act:
                for m2, c in act.items():
                    v = c if sign_last > 0 else -c
                    _acc(col, self.encode(t + (ul,), m2), v)
        for i in range(1, k + 1):
            neg = i % 2 == 1
            for (a, b, c) in self.rev.get(t[i - 1], ()):
                u = t[: i - 1] + (a, b) + t[i:]
                _acc(col, self.encode(u, m), -c if neg else c)
        return _clean(col)


class BarMatrix:
    """Sparse matrix of one bar differential, materialized column by column.

    Columns index C^k basis functionals, rows index C^{k+1}; ``col(j)``
    returns a fresh coordinate dict.  Ranks and composition never hold more
    than one column at a time beyond the elimination state.
    """

    def __init__(self, data: _BarData, k: int):
        self._data = data
        self.k = k
        self.ncols = data.cochain_dim(k)
        self.nrows = data.cochain_dim(k + 1)
        self.level = data.A.level

    def col(self, j: int) -> dict:
        return self._data.column(self.k, j)

    def columns(self):
        return (self._data.column(self.k, j) for j in range(self.ncols))

    def compose(self, other: "BarMatrix") -> list:
        """Columns of self . other (small fixtures only)."""
        out = []
        for j in range(other.ncols):
            acc: dict = {}
            for r, c in other.col(j).items():
                for r2, d in self.col(r).items():
                    _acc(acc, r2, c * d)
            out.append(_clean(acc))
        return out

    def is_zero(self) -> bool:
        return all(not self.col(j) for j in range(self.ncols))

    # -- rank: graded blocks, then elimination ------------------------
    def _column_blocks(self):
        d = self._data
        if d.weights is None:
            return {None: range(self.ncols)}
        blocks: dict = {}
        for j in range(self.ncols):
            blocks.setdefault(d.weight_of(self.k, j), []).append(j)
        return blocks

    def rank_exact(self) -> int:
        rank = 0
        for _, js in sorted(self._column_blocks().items(),
                            key=lambda kv: (kv[0] is None, kv[0])):
            ech = Echelon()
            for j in js:
                ech.add(self.col(j))
            rank += ech.rank()
        return rank

    def rank_mod(self, p: int, root: int) -> int:
        level = self.level
        memo: dict = {}

        def red(c):
            v = memo.get(c)
            if v is None:
                v = to_prime_field(c, p, level, root)
                memo[c] = v
            return v

        rank = 0
        for _, js in sorted(self._column_blocks().items(),
                            key=lambda kv: (kv[0] is None, kv[0])):
            rows = ({r: red(c) for r, c in self.col(j).items()} for j in js)
            rank += rank_mod_p(rows, self.nrows, p)
        return rank


def bar_differential(A: StructureAlgebra, M: Bimodule, k: int, *,
                     normalized: bool = True) -> BarMatrix:
    """Matrix of the Hochschild differential C^k -> C^{k+1}.

    (df)(a_1,..,a_{k+1}) = a_1 f(a_2,..) + sum_i (-1)^i f(.., a_i a_{i+1}, ..)
    + (-1)^{k+1} f(a_1,..,a_k) a_{k+1}, with arguments running over the
    augmentation complement when A is augmented and ``normalized`` is left
    on, and over all of A otherwise.
    """
    if k < 0:
        raise EngineError("BAD_PARAMETER", "cochain degree must be >= 0")
    return BarMatrix(_BarData(A, M, normalized), k)


# =====================================================================
# Prime sampling for modular ranks
# =====================================================================

_PRIME_LO = 2 ** 30
_PRIME_HI = 2 ** 31


def sample_modular_primes(level: int, count: int = 5, seed=None) -> list:
    """``count`` distinct primes p with 2^30 < p < 2^31 and p = 1 (mod level),
    deterministic given the seed (default: QHOPF_PRIME_SEED or 0)."""
    if seed is None:
        seed = int(os.environ.get("QHOPF_PRIME_SEED", "0"))
    rng = random.Random(f"qhopf-modular-primes:{seed}:{level}")
    tlo = _PRIME_LO // level + 1
    thi = (_PRIME_HI - 2) // level
    if thi < tlo:
        raise EngineError("NO_SUITABLE_PRIME", f"level {level} too large")
    found: list = []
    seen = set()
    for _ in range(200000):
        p = level * rng.randrange(tlo, thi + 1) + 1
        if p in seen:
            continue
        seen.add(p)
        if is_prime(p):
            found.append(p)
            if len(found) == count:
                return found
    raise EngineError("NO_SUITABLE_PRIME",
                      f"could not find {count} primes = 1 mod {level} below 2^31")


# =====================================================================
# Cohomology dimensions
# =====================================================================

class CohomologyReport:
    """Per-degree bar-complex bookkeeping.

    dims[k] = cochain_dims[k] - rank_out[k] - rank_in[k] where rank_out[k]
    is the rank of d^k and rank_in[k] = rank_out[k-1].  Truncated Euler
    consistency: sum (-1)^k cochain_dims[k] = sum (-1)^k dims[k]
    + (-1)^kmax rank_out[kmax].
    """

    def __init__(self, *, algebra, coefficients, kmax, rank_mode, normalized,
                 cochain_dims, rank_out, dims, primes=None, prime_ranks=None,
                 escalated=(), failure_bound=None):
        self.algebra = algebra
        self.coefficients = coefficients
        self.kmax = kmax
        self.rank_mode = rank_mode
        self.normalized = normalized
        self.cochain_dims = list(cochain_dims)
        self.rank_out = list(rank_out)
        self.rank_in = [0] + self.rank_out[:-1]
        self.dims = list(dims)
        self.primes = list(primes) if primes else None
        self.prime_ranks = {p: list(r) for p, r in prime_ranks.items()} if prime_ranks else None
        self.escalated = list(escalated)
        self.failure_bound = failure_bound

    def check(self) -> bool:
        """Internal consistency of the recorded numbers."""
        for k in range(self.kmax + 1):
            if self.dims[k] != self.cochain_dims[k] - self.rank_out[k] - self.rank_in[k]:
                return False
        chi_c = sum((-1) ** k * self.cochain_dims[k] for k in range(self.kmax + 1))
        chi_h = sum((-1) ** k * self.dims[k] for k in range(self.kmax + 1))
        return chi_c == chi_h + (-1) ** self.kmax * self.rank_out[self.kmax]

    def to_obj(self) -> dict:
        obj = {
            "algebra": self.algebra,
            "coefficients": self.coefficients,
            "kmax": self.kmax,
            "rank_mode": self.rank_mode,
            "normalized": self.normalized,
            "cochain_dims": self.cochain_dims,
            "rank_out": self.rank_out,
            "rank_in": self.rank_in,
            "dims": self.dims,
        }
        if self.primes is not None:
            obj["primes"] = self.primes
            obj["escalated"] = self.escalated
            obj["failure_bound"] = self.failure_bound
            obj["note"] = ("modular dims are upper bounds on the exact ones; "
                           "equality holds unless every sampled prime divides "
                           "a fixed nonzero minor, probability <= failure_bound")
        return obj

    def __repr__(self):
        return (f"<CohomologyReport {self.algebra}/{self.coefficients} "
                f"kmax={self.kmax} {self.rank_mode} dims={self.dims}>")


def _estimate_failure_bound(level: int, nnz: int, trials: int) -> float:
    """Crude upper estimate for all-primes-bad probability: a bad prime must
    divide the norm of a fixed nonzero minor, whose bit size is generously
    bounded by phi(level) * 64 bits per stored entry; the pool holds about
    2^30/ln(2^31) primes spread over phi(level) residue classes."""
    bad = max(1, euler_phi(level) * nnz * 64 // 30)
    pool = max(1, int(2 ** 30 / 21.5 / euler_phi(level)))
    ratio = min(1.0, bad / pool)
    return ratio ** trials


def cohomology_dims(A: StructureAlgebra, M: Bimodule, kmax: int,
                    rank_mode: str = "exact", *, trials: int = 5,
                    normalized: bool = True, seed=None,
                    workers=None) -> CohomologyReport:
    """Hochschild cohomology dimensions H^0..H^kmax of A with coefficients M.

    rank_mode "exact" eliminates over the cyclotomic field; "modular"
    reduces at ``trials`` independent primes p = 1 (mod level) above 2^30
    and takes the consensus, escalating any degree on which the primes
    disagree back to an exact rank.  Deterministic given the prime seed
    (QHOPF_PRIME_SEED or ``seed``).
    """
    if rank_mode not in ("exact", "modular"):
        raise EngineError("BAD_PARAMETER", f"unknown rank_mode {rank_mode!r}")
    if kmax < 0:
        raise EngineError("BAD_PARAMETER", "kmax must be >= 0")
    data = _BarData(A, M, normalized)
    mats = [BarMatrix(data, k) for k in range(kmax + 1)]
    cdims = [m.ncols for m in mats]
    primes = prime_ranks = None
    escalated: list = []
    failure_bound = None

    if rank_mode == "exact":
        rank_out = [m.rank_exact() for m in mats]
    else:
        primes = sample_modular_primes(A.level, trials, seed)
        roots = {p: root_of_unity_mod(p, A.level) for p in primes}
        if workers is None:
            workers = min(trials, os.cpu_count() or 1)

        def ranks_at(p):
            return [m.rank_mod(p, roots[p]) for m in mats]

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                results = list(ex.map(ranks_at, primes))
        else:
            results = [ranks_at(p) for p in primes]
        prime_ranks = dict(zip(primes, results))
        rank_out = []
        for k in range(kmax + 1):
            vals = {r[k] for r in results}
            if len(vals) == 1:
                rank_out.append(vals.pop())
            else:
                escalated.append(k)
                rank_out.append(mats[k].rank_exact())
        nnz_est = 0
        for m in mats:
            step = max(1, m.ncols // 64)
            sampled = [len(m.col(j)) for j in range(0, m.ncols, step)]
            if sampled:
                nnz_est += sum(sampled) * m.ncols // len(sampled)
        failure_bound = _estimate_failure_bound(A.level, nnz_est, trials)

    dims = [cdims[k] - rank_out[k] - (rank_out[k - 1] if k else 0)
            for k in range(kmax + 1)]
    report = CohomologyReport(
        algebra=A.name or repr(A), coefficients=M.name or "bimodule",
        kmax=kmax, rank_mode=rank_mode, normalized=data.normalized,
        cochain_dims=cdims, rank_out=rank_out, dims=dims, primes=primes,
        prime_ranks=prime_ranks, escalated=escalated,
        failure_bound=failure_bound)
    if not report.check():
        raise EngineError("INTERNAL", "cohomology report failed its own consistency check")
    return report
