"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A CycScalar is a polynomial in zeta_N with exact rational coefficients,
kept reduced modulo the N-th cyclotomic polynomial.  That representation is
canonical, so equality is coefficient-wise — which is what lets every axiom
check in the rest of the engine be a literal `==`.

No floating point anywhere.  Rationals are gmpy2.mpq when available (much
faster), else fractions.Fraction; both expose .numerator/.denominator.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import EngineError

try:  # pragma: no cover - exercised implicitly by every test
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

__all__ = ["Q", "CycScalar", "make_root", "arith", "lift_level", "euler_phi",
           "cyclotomic_poly", "is_prime", "root_of_unity_mod", "to_prime_field"]


# =====================================================================
# Integer / polynomial utilities
# =====================================================================

def _factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (levels here are tiny)."""
    fac: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        fac[n] = fac.get(n, 0) + 1
    return fac


def euler_phi(n: int) -> int:
    if n < 1:
        raise EngineError("BAD_PARAMETER", f"euler_phi({n})")
    out = 1
    for p, e in _factorize(n).items():
        out *= (p - 1) * p ** (e - 1)
    return out


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Exact division of rational-coefficient polynomials (lists, degree-increasing)."""
    num = list(num)
    out = [Q(0)] * (max(len(num) - len(den) + 1, 0))
    inv_lead = Q(1) / den[-1]
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1] * inv_lead
        out[k] = c
        if c != 0:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return out, num


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Coefficients of the n-th cyclotomic polynomial, degree-increasing, monic.

    Computed by exact division of x^n - 1 by all lower cyclotomic factors.

    >>> cyclotomic_poly(1)
    (mpq(-1,1), mpq(1,1))
    >>> [int(c) for c in cyclotomic_poly(4)]
    [1, 0, 1]
    >>> [int(c) for c in cyclotomic_poly(9)]
    [1, 0, 0, 1, 0, 0, 1]
    """
    num = [Q(-1)] + [Q(0)] * (n - 1) + [Q(1)]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_poly(d)))
            assert rem == [Q(0)] or rem == [0], f"x^{n}-1 not divisible by Phi_{d}"
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_tables(n: int):
    """Per-level tables: (deg, powers, reds).

    powers[k] = coeff tuple of zeta_n^k for 0 <= k < n.
    reds[e]   = coeff tuple of x^(deg+e) mod Phi_n for 0 <= e <= deg-2,
                used to fold the upper half of a product.
    """
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    # x^deg = -(phi[0] + phi[1] x + ... + phi[deg-1] x^{deg-1})
    base = tuple(-c for c in phi[:deg])
    reds = [base]
    for _ in range(deg - 2):
        prev = reds[-1]
        # multiply by x, reduce the overflow term
        top = prev[-1]
        nxt = [Q(0)] + list(prev[:-1])
        if top != 0:
            nxt = [a + top * b for a, b in zip(nxt, base)]
        reds.append(tuple(nxt))
    powers = []
    cur = tuple([Q(1)] + [Q(0)] * (deg - 1))
    for _ in range(n):
        powers.append(cur)
        top = cur[-1]
        nxt = [Q(0)] + list(cur[:-1])
        if top != 0:
            nxt = [a + top * b for a, b in zip(nxt, base)]
        cur = tuple(nxt)
    return deg, tuple(powers), tuple(reds)


# =====================================================================
# CycScalar
# =====================================================================

class CycScalar:
    """Element of Q(zeta_N), reduced mod Phi_N.  Immutable and hashable.

    level  -- N
    coeffs -- tuple of exact rationals, length deg(Phi_N)
    """

    __slots__ = ("level", "coeffs", "_hash")

    def __init__(self, level: int, coeffs):
        deg = _reduction_tables(level)[0]
        coeffs = tuple(coeffs)
        assert len(coeffs) == deg, f"need {deg} coeffs at level {level}, got {len(coeffs)}"
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):  # immutability guard
        raise AttributeError("CycScalar is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_rational(x, level: int = 1) -> "CycScalar":
        deg = _reduction_tables(level)[0]
        return CycScalar(level, (Q(x),) + (Q(0),) * (deg - 1))

    @staticmethod
    def zero(level: int = 1) -> "CycScalar":
        return CycScalar.from_rational(0, level)

    @staticmethod
    def one(level: int = 1) -> "CycScalar":
        return CycScalar.from_rational(1, level)

    # -- basic predicates ---------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self):
        if not self.is_rational():
            raise EngineError("NOT_RATIONAL", f"{self!r}")
        return self.coeffs[0]

    # -- hashing / equality -------------------------------------------
    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.level, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if isinstance(other, CycScalar):
            if other.level == self.level:
                return self.coeffs == other.coeffs
            a, b = _common_level(self, other)
            return a.coeffs == b.coeffs
        if isinstance(other, (int, type(Q(0)))):
            return self == CycScalar.from_rational(other, self.level)
        return NotImplemented

    def __repr__(self):
        deg = len(self.coeffs)
        if self.is_zero():
            return f"Cyc({self.level}; 0)"
        parts = []
        for e, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if e == 0:
                parts.append(str(c))
            else:
                zc = f"z{e}" if e > 1 else "z"
                parts.append(zc if c == 1 else f"{c}*{zc}")
        return f"Cyc({self.level}; {' + '.join(parts)})"

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = _coerce(other, self.level)
        a, b = _common_level(self, other)
        return CycScalar(a.level, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.level, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        return self + (-_coerce(other, self.level))

    def __rsub__(self, other):
        return _coerce(other, self.level) - self

    def __mul__(self, other):
        other = _coerce(other, self.level)
        a, b = _common_level(self, other)
        return CycScalar(a.level, _mul_coeffs(a.level, a.coeffs, b.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other, self.level)
        return self * other.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = CycScalar.one(self.level)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inv(self) -> "CycScalar":
        """Multiplicative inverse via extended Euclid against Phi_N."""
        if self.is_zero():
            raise EngineError("DIVISION_BY_ZERO", "inv(0)")
        phi = list(cyclotomic_poly(self.level))
        a = list(self.coeffs)
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        # extended euclid: find u with u*a == gcd (mod phi); gcd is a nonzero constant
        r0, r1 = phi, a
        s0, s1 = [Q(0)], [Q(1)]
        while any(c != 0 for c in r1):
            q, r = _poly_divmod(r0, r1)
            s = _poly_sub(s0, _poly_mul(q, s1))
            r0, r1, s0, s1 = r1, r, s1, s
            while len(r1) > 1 and r1[-1] == 0:
                r1.pop()
        assert len(r0) == 1 and r0[0] != 0, "Phi_N not coprime to nonzero element?"
        c = Q(1) / r0[0]
        u = [x * c for x in s0]
        deg = len(self.coeffs)
        # reduce u mod phi (may exceed degree)
        if len(u) > deg:
            _, u = _poly_divmod(u, phi)
        u = u + [Q(0)] * (deg - len(u))
        return CycScalar(self.level, tuple(u[:deg]))

    # -- serialization --------------------------------------------------
    def to_obj(self):
        """JSON-ready form: {"level": N, "coeffs": [[num, den], ...]}."""
        return {
            "level": self.level,
            "coeffs": [[int(c.numerator), int(c.denominator)] for c in self.coeffs],
        }

    @staticmethod
    def from_obj(obj) -> "CycScalar":
        return CycScalar(obj["level"], tuple(Q(n, d) for n, d in obj["coeffs"]))


def _poly_mul(a: list, b: list) -> list:
    out = [Q(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = a + [Q(0)] * (n - len(a))
    b = b + [Q(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


@lru_cache(maxsize=1 << 18)
def _mul_coeffs(level: int, ca: tuple, cb: tuple) -> tuple:
    """Product of two reduced coefficient tuples, reduced mod Phi_level.

    Cached: the engine multiplies the same handful of root-of-unity scalars
    millions of times during axiom verification.
    """
    deg, _, reds = _reduction_tables(level)
    if deg == 1:
        return (ca[0] * cb[0],)
    prod = [Q(0)] * (2 * deg - 1)
    for i, x in enumerate(ca):
        if x == 0:
            continue
        for j, y in enumerate(cb):
            if y != 0:
                prod[i + j] += x * y
    out = prod[:deg]
    for e in range(deg, 2 * deg - 1):
        c = prod[e]
        if c != 0:
            red = reds[e - deg]
            for t in range(deg):
                if red[t] != 0:
                    out[t] += c * red[t]
    return tuple(out)


def _coerce(x, level: int) -> CycScalar:
    if isinstance(x, CycScalar):
        return x
    return CycScalar.from_rational(x, level)


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def _common_level(a: CycScalar, b: CycScalar) -> tuple[CycScalar, CycScalar]:
    if a.level == b.level:
        return a, b
    m = _lcm(a.level, b.level)
    return lift_level(a, m), lift_level(b, m)


# =====================================================================
# Public operations
# =====================================================================

def make_root(N: int, k: int) -> CycScalar:
    """zeta_N^k in canonical form.

    >>> make_root(1, 0) == CycScalar.one()
    True
    >>> make_root(4, 2) == CycScalar.from_rational(-1, 4)
    True
    """
    if N < 1:
        raise EngineError("BAD_PARAMETER", f"make_root level {N}")
    _, powers, _ = _reduction_tables(N)
    return CycScalar(N, powers[k % N])


def arith(op: str, a: CycScalar, b: CycScalar | None = None) -> CycScalar:
    """Named arithmetic with strict level checking (dunder ops auto-lift)."""
    if op in ("add", "mul") and (b is None or a.level != b.level):
        if b is None:
            raise EngineError("BAD_PARAMETER", f"{op} needs two operands")
        raise EngineError("LEVEL_MISMATCH", f"{a.level} vs {b.level}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    raise EngineError("BAD_PARAMETER", f"unknown op {op!r}")


def lift_level(a: CycScalar, M: int) -> CycScalar:
    """Image of a under the embedding zeta_N -> zeta_M^(M/N)."""
    if M % a.level != 0:
        raise EngineError("NOT_DIVISIBLE", f"level {a.level} does not divide {M}")
    if M == a.level:
        return a
    step = M // a.level
    deg, powers, _ = _reduction_tables(M)
    out = [Q(0)] * deg
    for e, c in enumerate(a.coeffs):
        if c == 0:
            continue
        p = powers[(e * step) % M]
        for t in range(deg):
            if p[t] != 0:
                out[t] += c * p[t]
    return CycScalar(M, tuple(out))


@lru_cache(maxsize=None)
def _root_log_table(level: int) -> dict:
    return {make_root(level, e).coeffs: e for e in range(level)}


def as_root_power(s: CycScalar) -> int | None:
    """Exponent e with s = zeta_level^e, or None if s is not a root of unity
    at its own level."""
    return _root_log_table(s.level).get(s.coeffs)


# =====================================================================
# Reduction to prime fields (for modular rank computations)
# =====================================================================

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n < 3.3e24 with the
    fixed base set used here (far beyond the < 2**31 primes we sample)."""
    if n < 2:
        return False
    for a in _MR_BASES:
        if n % a == 0:
            return n == a
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def root_of_unity_mod(p: int, level: int) -> int:
    """Element of exact multiplicative order `level` in F_p, i.e. a root of
    the level-th cyclotomic polynomial mod p.  Requires p prime with
    p = 1 (mod level).  Deterministic: smallest generator candidate wins."""
    if level == 1:
        return 1
    if (p - 1) % level != 0:
        raise EngineError("NO_SUITABLE_PRIME",
                          f"p = {p} is not 1 mod {level}")
    cofactor = (p - 1) // level
    checks = [level // q for q in _factorize(level)]
    for g in range(2, p):
        w = pow(g, cofactor, p)
        if w != 1 and all(pow(w, e, p) != 1 for e in checks):
            return w
    raise EngineError("NO_SUITABLE_PRIME", f"no order-{level} element mod {p}")


def to_prime_field(x: CycScalar, p: int, level: int, root: int) -> int:
    """Image of x under the ring map sending zeta_level to `root` in F_p.

    `root` must have exact order `level` mod p (see root_of_unity_mod) and
    x.level must divide `level`; zeta_{x.level} maps to root**(level/x.level).
    NO_SUITABLE_PRIME if a denominator of x vanishes mod p.
    """
    if level % x.level != 0:
        raise EngineError("NOT_DIVISIBLE", f"level {x.level} does not divide {level}")
    w = pow(root, level // x.level, p)
    acc = 0
    rp = 1
    for c in x.coeffs:
        if c != 0:
            den = c.denominator % p
            if den == 0:
                raise EngineError("NO_SUITABLE_PRIME",
                                  f"denominator {c.denominator} vanishes mod {p}")
            acc = (acc + c.numerator * pow(den, -1, p) * rp) % p
        rp = rp * w % p
    return acc
