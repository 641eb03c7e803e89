"""Cohomology of cyclic groups with root-of-unity coefficients.

Cochains are stored as exponent tables: a degree-k cochain on Z_N with
modulus M assigns to each k-tuple an exponent in Z_M, standing for the
multiplicative cochain zeta_M^value.  Everything stays in Z_M-linear algebra
until cochain_to_tensor converts a table into an actual tensor over a cyclic
group-like's idempotents.

solve_coboundary works prime-power by prime-power (Gaussian elimination over
Z_{p^e} with minimal-valuation pivoting, free variables set to zero) and
recombines by CRT, which decides solvability exactly over the non-field
modulus M.
"""

from __future__ import annotations

from .algebra import Element
from .errors import EngineError
from .scalars import CycScalar, Q as Q_, _factorize, make_root

__all__ = [
    "ExpCochain",
    "differential",
    "assoc_cocycle_Aq",
    "inflate",
    "solve_coboundary",
    "cochain_to_tensor",
    "tensor_to_cochain",
    "grouplike_idempotents",
]


class ExpCochain:
    """Exponent-valued group cochain: table Z_N^k -> Z_M, flat row-major."""

    __slots__ = ("N", "k", "M", "values")

    def __init__(self, N, k, M, values):
        if N < 1 or k < 0 or M < 1:
            raise EngineError("BAD_PARAMETER", "ExpCochain needs N, M >= 1 and k >= 0")
        values = [v % M for v in values]
        if len(values) != N ** k:
            raise EngineError("BAD_PARAMETER",
                              f"expected {N ** k} values, got {len(values)}")
        self.N = N
        self.k = k
        self.M = M
        self.values = values

    @staticmethod
    def zero(N, k, M):
        return ExpCochain(N, k, M, [0] * (N ** k))

    @staticmethod
    def from_function(N, k, M, fn):
        vals = [fn(*t) for t in _tuples(N, k)]
        return ExpCochain(N, k, M, vals)

    def idx(self, args):
        x = 0
        for a in args:
            x = x * self.N + (a % self.N)
        return x

    def __call__(self, *args):
        if len(args) != self.k:
            raise EngineError("BAD_PARAMETER", f"degree-{self.k} cochain called with {len(args)} args")
        return self.values[self.idx(args)]

    def is_normalized(self):
        return all(self.values[self.idx(t)] == 0
                   for t in _tuples(self.N, self.k) if 0 in t)

    def is_zero(self):
        return all(v == 0 for v in self.values)

    def __eq__(self, other):
        if not isinstance(other, ExpCochain):
            return NotImplemented
        return (self.N, self.k, self.M, self.values) == \
            (other.N, other.k, other.M, other.values)

    def to_obj(self):
        return {"N": self.N, "k": self.k, "M": self.M, "values": list(self.values)}

    @staticmethod
    def from_obj(obj):
        return ExpCochain(obj["N"], obj["k"], obj["M"], list(obj["values"]))

    def __repr__(self):
        return f"<ExpCochain N={self.N} k={self.k} M={self.M}>"


def _tuples(N, k):
    out = [()]
    for _ in range(k):
        out = [t + (i,) for t in out for i in range(N)]
    return out


def differential(c: ExpCochain) -> ExpCochain:
    """(dc)(g1,...,g_{k+1}) = c(g2,...) + sum (-1)^i c(..., g_i + g_{i+1}, ...)
    + (-1)^{k+1} c(g1,...,g_k), exponent arithmetic mod M."""
    N, k, M = c.N, c.k, c.M
    vals = []
    for g in _tuples(N, k + 1):
        v = c.values[c.idx(g[1:])]
        for i in range(k):
            merged = g[:i] + ((g[i] + g[i + 1]) % N,) + g[i + 2:]
            term = c.values[c.idx(merged)]
            v = v - term if i % 2 == 0 else v + term
        last = c.values[c.idx(g[:k])]
        v = v + last if (k + 1) % 2 == 0 else v - last
        vals.append(v % M)
    return ExpCochain(N, k + 1, M, vals)


def assoc_cocycle_Aq(n: int, r: int) -> ExpCochain:
    """Exponent table of the diagonal associator on Z_n, modulus n^2:
    omega(i,j,k) = -r*n*i*[j+k >= n].  The multiplicative coefficient is
    zeta_{n^2}^omega; the carry factor picks up a full n-th power of the root,
    which is what makes d(omega) = 0 mod n^2 (checked in tests by brute force).
    """
    import math
    if math.gcd(r, n * n) != 1:
        raise EngineError("NOT_PRIMITIVE", f"r={r} not a unit mod {n * n}")
    M = n * n
    return ExpCochain.from_function(
        n, 3, M, lambda i, j, k: (-r * n * i) % M if j + k >= n else 0)


def inflate(c: ExpCochain, Np: int) -> ExpCochain:
    """Pull back along the reduction Z_{Np} -> Z_N (N must divide Np)."""
    if Np % c.N != 0:
        raise EngineError("NOT_DIVISIBLE", f"{c.N} does not divide {Np}")
    out = ExpCochain.zero(Np, c.k, c.M)
    vals = []
    for t in _tuples(Np, c.k):
        vals.append(c.values[c.idx(tuple(a % c.N for a in t))])
    return ExpCochain(Np, c.k, c.M, vals)


# ---------------------------------------------------------------------
# coboundary solving over Z_M
# ---------------------------------------------------------------------

def _solve_mod_prime_power(rows, rhs, nunk, p, e):
    """Solve rows . x = rhs over Z_{p^e}; rows are dicts col -> coeff.
    Minimal-valuation pivoting; free variables are set to 0.
    Returns a solution list or None."""
    q = p ** e

    def val(a):
        a %= q
        if a == 0:
            return e
        v = 0
        while a % p == 0:
            a //= p
            v += 1
        return v

    rows = [dict((c, a % q) for c, a in r.items() if a % q) for r in rows]
    rhs = [b % q for b in rhs]
    m = len(rows)
    pivots = []          # (row, col, pivot value) in elimination order
    used_rows = set()
    used_cols = set()
    while True:
        best = None
        for ri in range(m):
            if ri in used_rows:
                continue
            for cj, a in rows[ri].items():
                if cj in used_cols:
                    continue
                v = val(a)
                if v < e and (best is None or (v, ri, cj) < best[:3]):
                    best = (v, ri, cj, a)
        if best is None:
            break
        v, ri, cj, a = best
        # unit part of the pivot: a = u * p^v with u invertible mod p^{e}
        u = a // (p ** v)
        uinv = pow(u, -1, q)
        for rk in range(m):
            if rk == ri or cj not in rows[rk]:
                continue
            b = rows[rk][cj]
            # val(b) >= v by minimality, so the quotient is exact
            factor = (b // (p ** v)) * uinv % q
            new = dict(rows[rk])
            for c2, a2 in rows[ri].items():
                new[c2] = (new.get(c2, 0) - factor * a2) % q
            rows[rk] = {c2: a2 for c2, a2 in new.items() if a2}
            rhs[rk] = (rhs[rk] - factor * rhs[ri]) % q
        used_rows.add(ri)
        used_cols.add(cj)
        pivots.append((ri, cj, v, u))
    # rows never pivoted must have zero rhs of sufficient valuation: their
    # remaining coefficients all have valuation e (i.e. are 0 mod q)
    for ri in range(m):
        if ri not in used_rows:
            if any(a % q for a in rows[ri].values()):
                # all remaining entries have val >= e by loop exit; defensive
                pass
            if rhs[ri] % q != 0:
                return None
    x = [0] * nunk
    for ri, cj, v, u in reversed(pivots):
        s = rhs[ri]
        for c2, a2 in rows[ri].items():
            if c2 != cj:
                s = (s - a2 * x[c2]) % q
        if val(s) < v:
            return None
        uinv = pow(u, -1, q)
        x[cj] = (s // (p ** v)) * uinv % q
    return x


def solve_coboundary(omega: ExpCochain):
    """Normalized 2-cochain c with dc = omega, or None if the class of the
    normalized 3-cocycle omega is nontrivial.  Deterministic."""
    if omega.k != 3:
        raise EngineError("BAD_PARAMETER", "solve_coboundary expects a degree-3 cochain")
    if not omega.is_normalized():
        raise EngineError("NOT_A_COCYCLE", "solver works in the normalized complex")
    if not differential(omega).is_zero():
        raise EngineError("NOT_A_COCYCLE", "d(omega) != 0")
    N, M = omega.N, omega.M
    nz = list(range(1, N))
    unknowns = {(u, v): i for i, (u, v) in enumerate(
        (u, v) for u in nz for v in nz)}
    rows = []
    rhs = []
    for g1 in nz:
        for g2 in nz:
            for g3 in nz:
                # dc(g1,g2,g3) = c(g2,g3) - c(g1+g2,g3) + c(g1,g2+g3) - c(g1,g2)
                row = {}

                def put(u, v, sign):
                    if u % N == 0 or v % N == 0:
                        return
                    col = unknowns[(u % N, v % N)]
                    row[col] = (row.get(col, 0) + sign) % M

                put(g2, g3, 1)
                put(g1 + g2, g3, -1)
                put(g1, g2 + g3, 1)
                put(g1, g2, -1)
                row = {c: a for c, a in row.items() if a % M}
                rows.append(row)
                rhs.append(omega.values[omega.idx((g1, g2, g3))])
    nunk = len(unknowns)
    sols = []
    mods = []
    for p, e in sorted(_factorize(M).items()):
        x = _solve_mod_prime_power(rows, rhs, nunk, p, e)
        if x is None:
            return None
        sols.append(x)
        mods.append(p ** e)
    # CRT combine
    x = [0] * nunk
    for i in range(nunk):
        r, mod = 0, 1
        for xk, mk in zip(sols, mods):
            # solve r' = r mod mod, r' = xk[i] mod mk
            t = ((xk[i] - r) * pow(mod, -1, mk)) % mk
            r = r + mod * t
            mod *= mk
        x[i] = r % M
    vals = []
    for (u, v) in _tuples(N, 2):
        vals.append(x[unknowns[(u, v)]] if u and v else 0)
    c = ExpCochain(N, 2, M, vals)
    if differential(c) != omega:
        raise EngineError("NOT_A_COCYCLE", "internal: solver produced a non-solution")
    return c


# ---------------------------------------------------------------------
# tensors over cyclic group-like idempotents
# ---------------------------------------------------------------------

def grouplike_order(g: Element) -> int:
    A = g.parent
    unit = A.unit_element(1)
    cur = g
    for n in range(1, A.dim + 1):
        if cur == unit:
            return n
        cur = cur * g
    raise EngineError("ORDER_MISMATCH", "element has no finite multiplicative order <= dim")


def grouplike_idempotents(g: Element, N: int) -> list:
    """E_y = (1/N) sum_k zeta_N^{-yk} g^k for the order-N group-like g."""
    A = g.parent
    if A.level % N != 0:
        raise EngineError("ORDER_MISMATCH", f"level {A.level} not divisible by {N}")
    zeta = make_root(A.level, A.level // N)
    powers = [A.unit_element(1)]
    for _ in range(N - 1):
        powers.append(powers[-1] * g)
    out = []
    invN_scalar = CycScalar.from_rational(Q_(1, N), A.level)
    for y in range(N):
        acc = A.element({}, 1)
        for k in range(N):
            acc = acc + powers[k].scale(zeta ** ((-y * k) % N))
        out.append(acc.scale(invN_scalar))
    return out


def cochain_to_tensor(c: ExpCochain, Q, grouplike: Element) -> Element:
    """sum zeta_M^{c(y1..yk)} E_{y1} (x) ... (x) E_{yk} over the idempotents
    of the cyclic group-like."""
    A = grouplike.parent
    if Q is not None and grouplike.parent is not Q.A:
        raise EngineError("BAD_PARAMETER", "grouplike must live in Q's algebra")
    if grouplike_order(grouplike) != c.N:
        raise EngineError("ORDER_MISMATCH",
                          f"group-like order != {c.N}")
    if A.level % c.M != 0:
        raise EngineError("ORDER_MISMATCH", f"level {A.level} not divisible by M={c.M}")
    zM = make_root(A.level, A.level // c.M)
    idem = grouplike_idempotents(grouplike, c.N)
    out = A.element({}, c.k)
    for t in _tuples(c.N, c.k):
        coeff_pow = c.values[c.idx(t)]
        term = None
        for y in t:
            term = idem[y] if term is None else term.tensor(idem[y])
        if term is None:
            term = A.unit_element(0)
        out = out + term.scale(zM ** coeff_pow)
    return out


def tensor_to_cochain(T: Element, N: int, M: int, power_of_index) -> ExpCochain:
    """Exponent table of a tensor diagonal over the idempotents of an order-N
    group-like, given that every basis index in T's support is the
    power_of_index(i)-th power of that group-like.

    The coefficient on E_{y1} (x) ... (x) E_{yk} is
    sum_t T[t] zeta_N^{sum_l y_l * power(t_l)}; it must be an exact power of
    zeta_M or the tensor is not of the assumed shape (ORDER_MISMATCH).
    """
    A = T.parent
    L = A.level
    if L % N != 0 or L % M != 0:
        raise EngineError("ORDER_MISMATCH", "level not divisible by N or M")
    zN = make_root(L, L // N)
    zM = make_root(L, L // M)
    zM_pows = [zM ** j for j in range(M)]
    k = T.arity
    vals = []
    items = list(T.coords.items())
    pows = {t: tuple(power_of_index(i) for i in t) for t, _ in items}
    for y in _tuples(N, k):
        lam = CycScalar.zero(L)
        for t, cc in items:
            expo = sum(yl * pl for yl, pl in zip(y, pows[t])) % N
            lam = lam + cc * (zN ** expo)
        hit = None
        for j in range(M):
            if lam == zM_pows[j]:
                hit = j
                break
        if hit is None:
            raise EngineError("ORDER_MISMATCH",
                              f"coefficient at {y} is not a power of zeta_{M}")
        vals.append(hit)
    return ExpCochain(N, k, M, vals)
