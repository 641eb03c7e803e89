"""Exact constructors for the catalog of quasi-Hopf and Hopf data.

Each builder generates structure constants from a PBW-style monomial basis
(ordered generator powers with scalar swap rules), assembles the coproduct,
counit and antipode columns by element arithmetic on the generator images,
and returns a QuasiHopfDatum carrying a presentation (generators, relations,
basis words), the cyclic group-like used for diagonal twists, and its
idempotents.
"""

from __future__ import annotations

import math

from .algebra import Element, LinearMap, StructureAlgebra
from .errors import EngineError
from .groupcoh import (
    ExpCochain,
    assoc_cocycle_Aq,
    differential,
    grouplike_idempotents,
)
from .quasihopf import Presentation, QuasiHopfDatum, dual_algebra, hopf_datum
from .scalars import CycScalar, Q as Q_, make_root

__all__ = [
    "build_Aq",
    "build_H32",
    "build_taft",
    "build_book",
    "build_book64",
    "build_cyclic_cocycle",
    "parse_instance",
    "instance_names",
]


# =====================================================================
# PBW scaffolding
# =====================================================================

def _pbw_tuples(orders):
    tuples = [()]
    for o in orders:
        tuples = [t + (e,) for e in range(o) for t in tuples]
    # index = e0 + e1*o0 + e2*o0*o1 + ...  (first generator minor)
    tuples.sort(key=lambda t: _pbw_index(t, orders))
    return tuples


def _pbw_index(t, orders):
    x = 0
    stride = 1
    for e, o in zip(t, orders):
        x += e * stride
        stride *= o
    return x


def _pbw_algebra(level, gen_names, orders, cyclic, swaps, weights, name):
    """Monomial algebra on ordered generator powers.

    orders[i]: exponent bound of generator i; cyclic[i] says whether powers
    wrap (group-like) or truncate to zero (nilpotent).  swaps[(b, a)] for
    b > a is the scalar s with G_b G_a = s * G_a G_b.  weights gives the
    grading degree of each generator.
    """
    one = CycScalar.one(level)
    tuples = _pbw_tuples(orders)
    ng = len(orders)
    index = {t: i for i, t in enumerate(tuples)}
    mult = {}
    for ti, e in enumerate(tuples):
        for tj, f in enumerate(tuples):
            scal = one
            dead = False
            for b in range(ng):
                if e[b] == 0:
                    continue
                for a in range(b):
                    if f[a]:
                        scal = scal * (swaps[(b, a)] ** (e[b] * f[a]))
            g = []
            for i in range(ng):
                s = e[i] + f[i]
                if cyclic[i]:
                    s %= orders[i]
                elif s >= orders[i]:
                    dead = True
                    break
                g.append(s)
            if dead or scal.is_zero():
                continue
            mult[(ti, tj)] = {index[tuple(g)]: scal}
    grading = [sum(w * e for w, e in zip(weights, t)) for t in tuples]
    names = []
    for t in tuples:
        bits = [f"{gn}^{e}" if e > 1 else gn
                for gn, e in zip(gen_names, t) if e > 0]
        names.append("*".join(bits) if bits else "1")
    A = StructureAlgebra(len(tuples), level, mult, {0: one},
                         grading=grading, basis_names=names, name=name)
    return A, tuples, index


def _gen_element(A, tuples, index, orders, g):
    t = tuple(1 if i == g else 0 for i in range(len(orders)))
    return A.basis_element(index[t])


def _cols_from_gen_images(A, tuples, images, reverse=False):
    """Column map sending the monomial with exponents e to the ordered product
    of images[i]**e[i] (reversed order if reverse, for anti-homomorphisms)."""
    ng = len(images)
    maxp = [max(t[i] for t in tuples) for i in range(ng)]
    pows = []
    for i in range(ng):
        ps = [None] * (maxp[i] + 1)
        arity = images[i].arity
        ps[0] = A.unit_element(arity)
        for p in range(1, maxp[i] + 1):
            ps[p] = ps[p - 1] * images[i]
        pows.append(ps)
    cols = {}
    for idx, t in enumerate(tuples):
        order = range(ng - 1, -1, -1) if reverse else range(ng)
        acc = None
        for i in order:
            fac = pows[i][t[i]]
            acc = fac if acc is None else acc * fac
        if acc.coords:
            cols[idx] = acc.coords
    return cols


def _counit_cols(A, tuples, eps_values):
    cols = {}
    for idx, t in enumerate(tuples):
        c = A.one
        for v, e in zip(eps_values, t):
            if e == 0:
                continue
            if v.is_zero():
                c = A.zero
                break
            c = c * (v ** e)
        if not c.is_zero():
            cols[idx] = {(): c}
    return cols


def _basis_words(tuples, gen_names):
    words = []
    for t in tuples:
        words.append(tuple((gn, e) for gn, e in zip(gen_names, t) if e > 0))
    return words


def _augmentation_from_counit(counit_cols, zero):
    out = {}
    for i, col in counit_cols.items():
        c = col.get(())
        if c is not None and not c.is_zero():
            out[i] = c
    return out


# =====================================================================
# The diagonal quasi-Hopf family
# =====================================================================

def build_Aq(n: int, r: int) -> QuasiHopfDatum:
    """Quasi-Hopf datum of dimension n^3: group-like a of order n, nilpotent x
    with x^{n^2} = 0 and ax = q^n xa (q a primitive n^2-th root), diagonal
    associator supported on the idempotents of a."""
    if n < 2:
        raise EngineError("BAD_PARAMETER", "need n >= 2")
    N2 = n * n
    if math.gcd(r, N2) != 1:
        raise EngineError("NOT_PRIMITIVE", f"zeta_{N2}^{r} is not primitive")
    level = N2
    q = make_root(level, r)
    one = CycScalar.one(level)
    gen_names = ["a", "x"]
    orders = [n, N2]
    cyclic = [True, False]
    swaps = {(1, 0): q ** (level - n)}       # x a = q^{-n} a x
    A, tuples, index = _pbw_algebra(level, gen_names, orders, cyclic, swaps,
                                    weights=[0, 1], name=f"Aq(n={n},r={r})")
    a = _gen_element(A, tuples, index, orders, 0)
    x = _gen_element(A, tuples, index, orders, 1)
    unit = A.unit_element(1)

    # idempotents 1_y of the group-like a, indexed so that a * 1_y = q^{n y} 1_y
    # (the same root q that the coproduct and associator exponents use)
    invn = CycScalar.from_rational(Q_(1, n), level)
    apow = [unit]
    for _ in range(1, n):
        apow.append(apow[-1] * a)
    idem = []
    for y in range(n):
        e = A.element({}, 1)
        for j in range(n):
            e = e + apow[j].scale((q ** ((-n * y * j) % level)) * invn)
        idem.append(e)

    # coproducts
    da = a.tensor(a)
    T = A.element({}, 1)
    for y in range(n):
        T = T + idem[y].scale(q ** y)
    e0x = idem[0] * x
    dx = x.tensor(T) + unit.tensor(x - e0x) + (a ** (n - 1)).tensor(e0x)
    delta_cols = _cols_from_gen_images(A, tuples, [da, dx])

    # counit
    counit_cols = _counit_cols(A, tuples, [one, A.zero])

    # antipode
    sa = a ** (n - 1)
    W = A.element({}, 1)
    for z in range(n):
        W = W + idem[z].scale(q ** ((n - z) % level))
    sx = (x * W).scale(-1)
    s_cols = _cols_from_gen_images(A, tuples, [sa, sx], reverse=True)

    # associator: sum q^{-n*i*carry(j,k)} over idempotent triples
    phi = {}
    phiinv = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                carry = 1 if j + k >= n else 0
                cpow = (-n * i * carry) % level
                cplus = q ** cpow
                cminus = q ** ((n * i * carry) % level)
                for u, cu in idem[i].coords.items():
                    for v, cv in idem[j].coords.items():
                        for w, cw in idem[k].coords.items():
                            key = (u[0], v[0], w[0])
                            term = cu * cv * cw
                            cur = phi.get(key)
                            phi[key] = cplus * term if cur is None else cur + cplus * term
                            cur = phiinv.get(key)
                            phiinv[key] = cminus * term if cur is None else cur + cminus * term
    Phi = A.element(phi, 3)
    PhiInv = A.element(phiinv, 3)

    pres = Presentation(
        {"a": a, "x": x},
        [
            ([(one, (("a", n),))], [(one, ())]),
            ([(one, (("x", N2),))], []),
            ([(one, (("a", 1), ("x", 1)))], [(q ** n, (("x", 1), ("a", 1)))]),
        ],
        _basis_words(tuples, gen_names),
    )
    A.augmentation = _augmentation_from_counit(counit_cols, A.zero)
    Qd = QuasiHopfDatum(
        A,
        LinearMap(A, A, 2, delta_cols),
        LinearMap(A, A, 0, counit_cols),
        Phi, PhiInv,
        LinearMap(A, A, 1, s_cols),
        a,                                  # alpha
        unit,                               # beta
        presentation=pres,
        name=f"Aq(n={n},r={r})",
        group_idempotents=idem,
    )
    Qd.twist_grouplike = a
    return Qd


def build_H32() -> QuasiHopfDatum:
    """The 32-dimensional quasi-Hopf datum: an involution a, two order-4
    nilpotents x, y with xy = -i yx, and associator 1 - 2 p- (x) p- (x) p-."""
    level = 4
    i4 = make_root(4, 1)
    one = CycScalar.one(level)
    gen_names = ["a", "x", "y"]
    orders = [2, 4, 4]
    cyclic = [True, False, False]
    swaps = {
        (1, 0): CycScalar.from_rational(-1, level),   # x a = -a x
        (2, 0): CycScalar.from_rational(-1, level),   # y a = -a y
        (2, 1): i4,                                   # y x = i x y
    }
    A, tuples, index = _pbw_algebra(level, gen_names, orders, cyclic, swaps,
                                    weights=[0, 1, 1], name="H32")
    a = _gen_element(A, tuples, index, orders, 0)
    x = _gen_element(A, tuples, index, orders, 1)
    y = _gen_element(A, tuples, index, orders, 2)
    unit = A.unit_element(1)

    idem = grouplike_idempotents(a, 2)
    pp, pm = idem[0], idem[1]

    da = a.tensor(a)
    dx = x.tensor(pp + pm.scale(i4)) + unit.tensor(pp * x) + a.tensor(pm * x)
    dy = y.tensor(pp - pm.scale(i4)) + unit.tensor(pp * y) + a.tensor(pm * y)
    delta_cols = _cols_from_gen_images(A, tuples, [da, dx, dy])

    counit_cols = _counit_cols(A, tuples, [one, A.zero, A.zero])

    sa = a
    sx = (x * (pp + pm.scale(i4))).scale(-1)
    sy = (y * (pp - pm.scale(i4))).scale(-1)
    s_cols = _cols_from_gen_images(A, tuples, [sa, sx, sy], reverse=True)

    P = pm.tensor(pm).tensor(pm)
    Phi = A.unit_element(3) - P.scale(2)
    PhiInv = Phi

    mi = CycScalar.from_rational(-1, level)
    pres = Presentation(
        {"a": a, "x": x, "y": y},
        [
            ([(one, (("a", 2),))], [(one, ())]),
            ([(one, (("x", 4),))], []),
            ([(one, (("y", 4),))], []),
            ([(one, (("a", 1), ("x", 1)))], [(mi, (("x", 1), ("a", 1)))]),
            ([(one, (("a", 1), ("y", 1)))], [(mi, (("y", 1), ("a", 1)))]),
            ([(one, (("x", 1), ("y", 1)))],
             [(mi * i4, (("y", 1), ("x", 1)))]),     # xy = -i yx
        ],
        _basis_words(tuples, gen_names),
    )
    A.augmentation = _augmentation_from_counit(counit_cols, A.zero)
    Qd = QuasiHopfDatum(
        A,
        LinearMap(A, A, 2, delta_cols),
        LinearMap(A, A, 0, counit_cols),
        Phi, PhiInv,
        LinearMap(A, A, 1, s_cols),
        a, unit,
        presentation=pres,
        name="H32",
        group_idempotents=idem,
    )
    Qd.twist_grouplike = a
    return Qd


# =====================================================================
# Hopf members
# =====================================================================

def build_taft(N: int, r: int) -> QuasiHopfDatum:
    """Taft-type Hopf datum of dimension N^2: g group-like of order N,
    g x = q x g, Delta(x) = x (x) g + 1 (x) x."""
    if N < 2:
        raise EngineError("BAD_PARAMETER", "need N >= 2")
    if math.gcd(r, N) != 1:
        raise EngineError("NOT_PRIMITIVE", f"zeta_{N}^{r} is not primitive")
    level = N
    q = make_root(level, r)
    one = CycScalar.one(level)
    gen_names = ["g", "x"]
    orders = [N, N]
    cyclic = [True, False]
    swaps = {(1, 0): q.inv()}               # x g = q^{-1} g x
    A, tuples, index = _pbw_algebra(level, gen_names, orders, cyclic, swaps,
                                    weights=[0, 1], name=f"taft(N={N},r={r})")
    g = _gen_element(A, tuples, index, orders, 0)
    x = _gen_element(A, tuples, index, orders, 1)
    unit = A.unit_element(1)

    dg = g.tensor(g)
    dx = x.tensor(g) + unit.tensor(x)
    delta_cols = _cols_from_gen_images(A, tuples, [dg, dx])
    counit_cols = _counit_cols(A, tuples, [one, A.zero])
    sg = g ** (N - 1)
    sx = (x * sg).scale(-1)
    s_cols = _cols_from_gen_images(A, tuples, [sg, sx], reverse=True)

    pres = Presentation(
        {"g": g, "x": x},
        [
            ([(one, (("g", N),))], [(one, ())]),
            ([(one, (("x", N),))], []),
            ([(one, (("g", 1), ("x", 1)))], [(q, (("x", 1), ("g", 1)))]),
        ],
        _basis_words(tuples, gen_names),
    )
    A.augmentation = _augmentation_from_counit(counit_cols, A.zero)
    Qd = hopf_datum(A, delta_cols, counit_cols, s_cols, presentation=pres,
                    name=f"taft(N={N},r={r})",
                    group_idempotents=grouplike_idempotents(g, N))
    Qd.twist_grouplike = g
    return Qd


def build_book(p: int, r: int, m: int) -> QuasiHopfDatum:
    """Book-type Hopf datum of dimension p^3: a of order p, two commuting
    nilpotents with ax = q xa, ay = q^m ya."""
    if p < 2:
        raise EngineError("BAD_PARAMETER", "need p >= 2")
    if math.gcd(r, p) != 1:
        raise EngineError("NOT_PRIMITIVE", f"zeta_{p}^{r} is not primitive")
    if m % p == 0:
        raise EngineError("BAD_PARAMETER", "m must be nonzero mod p")
    level = p
    q = make_root(level, r)
    one = CycScalar.one(level)
    gen_names = ["a", "x", "y"]
    orders = [p, p, p]
    cyclic = [True, False, False]
    swaps = {
        (1, 0): q.inv(),                    # x a = q^{-1} a x
        (2, 0): (q ** m).inv(),             # y a = q^{-m} a y
        (2, 1): one,                        # y x = x y
    }
    A, tuples, index = _pbw_algebra(level, gen_names, orders, cyclic, swaps,
                                    weights=[0, 1, 1],
                                    name=f"book(p={p},r={r},m={m})")
    a = _gen_element(A, tuples, index, orders, 0)
    x = _gen_element(A, tuples, index, orders, 1)
    y = _gen_element(A, tuples, index, orders, 2)
    unit = A.unit_element(1)

    da = a.tensor(a)
    dx = x.tensor(a) + unit.tensor(x)
    dy = y.tensor(unit) + (a ** (m % p)).tensor(y)
    delta_cols = _cols_from_gen_images(A, tuples, [da, dx, dy])
    counit_cols = _counit_cols(A, tuples, [one, A.zero, A.zero])
    sa = a ** (p - 1)
    sx = (x * sa).scale(-1)
    sy = ((a ** ((p - m) % p)) * y).scale(-1)
    s_cols = _cols_from_gen_images(A, tuples, [sa, sx, sy], reverse=True)

    pres = Presentation(
        {"a": a, "x": x, "y": y},
        [
            ([(one, (("a", p),))], [(one, ())]),
            ([(one, (("x", p),))], []),
            ([(one, (("y", p),))], []),
            ([(one, (("a", 1), ("x", 1)))], [(q, (("x", 1), ("a", 1)))]),
            ([(one, (("a", 1), ("y", 1)))], [(q ** m, (("y", 1), ("a", 1)))]),
            ([(one, (("x", 1), ("y", 1)))], [(one, (("y", 1), ("x", 1)))]),
        ],
        _basis_words(tuples, gen_names),
    )
    A.augmentation = _augmentation_from_counit(counit_cols, A.zero)
    Qd = hopf_datum(A, delta_cols, counit_cols, s_cols, presentation=pres,
                    name=f"book(p={p},r={r},m={m})",
                    group_idempotents=grouplike_idempotents(a, p))
    Qd.twist_grouplike = a
    return Qd


def build_book64() -> QuasiHopfDatum:
    """64-dimensional book-type Hopf datum: g of order 4, x+ and x- commuting
    order-4 nilpotents with g x+ g^{-1} = i x+, g x- g^{-1} = -i x-,
    Delta(x+) = x+ (x) g + 1 (x) x+, Delta(x-) = x- (x) 1 + g^{-1} (x) x-."""
    level = 4
    i4 = make_root(4, 1)
    one = CycScalar.one(level)
    gen_names = ["g", "xp", "xm"]
    orders = [4, 4, 4]
    cyclic = [True, False, False]
    swaps = {
        (1, 0): -i4,                        # x+ g = -i g x+
        (2, 0): i4,                         # x- g = i g x-
        (2, 1): one,                        # x- x+ = x+ x-
    }
    A, tuples, index = _pbw_algebra(level, gen_names, orders, cyclic, swaps,
                                    weights=[0, 1, 1], name="book64")
    g = _gen_element(A, tuples, index, orders, 0)
    xp = _gen_element(A, tuples, index, orders, 1)
    xm = _gen_element(A, tuples, index, orders, 2)
    unit = A.unit_element(1)

    dg = g.tensor(g)
    dxp = xp.tensor(g) + unit.tensor(xp)
    dxm = xm.tensor(unit) + (g ** 3).tensor(xm)
    delta_cols = _cols_from_gen_images(A, tuples, [dg, dxp, dxm])
    counit_cols = _counit_cols(A, tuples, [one, A.zero, A.zero])
    sg = g ** 3
    sxp = (xp * sg).scale(-1)
    sxm = (g * xm).scale(-1)
    s_cols = _cols_from_gen_images(A, tuples, [sg, sxp, sxm], reverse=True)

    pres = Presentation(
        {"g": g, "xp": xp, "xm": xm},
        [
            ([(one, (("g", 4),))], [(one, ())]),
            ([(one, (("xp", 4),))], []),
            ([(one, (("xm", 4),))], []),
            ([(one, (("g", 1), ("xp", 1)))], [(i4, (("xp", 1), ("g", 1)))]),
            ([(one, (("g", 1), ("xm", 1)))], [(-i4, (("xm", 1), ("g", 1)))]),
            ([(one, (("xp", 1), ("xm", 1)))], [(one, (("xm", 1), ("xp", 1)))]),
        ],
        _basis_words(tuples, gen_names),
    )
    A.augmentation = _augmentation_from_counit(counit_cols, A.zero)
    Qd = hopf_datum(A, delta_cols, counit_cols, s_cols, presentation=pres,
                    name="book64",
                    group_idempotents=grouplike_idempotents(g, 4))
    Qd.twist_grouplike = g
    return Qd


# =====================================================================
# Cyclic group algebra with prescribed associator class
# =====================================================================

def build_cyclic_cocycle(N: int, omega: ExpCochain) -> QuasiHopfDatum:
    """C[Z_N] on its idempotent basis with associator coefficients
    zeta_M^{omega(i,j,k)}; semisimple quasi-Hopf datum of dimension N."""
    if N < 1:
        raise EngineError("BAD_PARAMETER", "need N >= 1")
    if omega.k != 3 or omega.N != N:
        raise EngineError("BAD_PARAMETER", "omega must be a degree-3 cochain on Z_N")
    if not omega.is_normalized() or not differential(omega).is_zero():
        raise EngineError("NOT_A_COCYCLE", "omega is not a normalized 3-cocycle")
    level = math.lcm(N, omega.M)
    one = CycScalar.one(level)
    zM = make_root(level, level // omega.M)
    zN = make_root(level, level // N)
    mult = {(i, i): {i: one} for i in range(N)}
    unit = {i: one for i in range(N)}
    A = StructureAlgebra(N, level, mult, unit, grading=[0] * N,
                         basis_names=[f"E{i}" for i in range(N)],
                         augmentation={0: one},
                         name=f"cyclic(N={N})")
    delta_cols = {k: {(u, (k - u) % N): one for u in range(N)} for k in range(N)}
    counit_cols = {0: {(): one}}
    s_cols = {k: {((-k) % N,): one} for k in range(N)}
    phi = {}
    phiinv = {}
    for i in range(N):
        for j in range(N):
            for k in range(N):
                e = omega.values[omega.idx((i, j, k))]
                phi[(i, j, k)] = zM ** e
                phiinv[(i, j, k)] = zM ** ((-e) % omega.M)
    alpha = {}
    for k in range(N):
        e = omega.values[omega.idx((k, (-k) % N, k))]
        alpha[(k,)] = zM ** ((-e) % omega.M)
    idem = [A.basis_element(i) for i in range(N)]
    Qd = QuasiHopfDatum(
        A,
        LinearMap(A, A, 2, delta_cols),
        LinearMap(A, A, 0, counit_cols),
        A.element(phi, 3),
        A.element(phiinv, 3),
        LinearMap(A, A, 1, s_cols),
        A.element(alpha, 1),
        A.unit_element(1),
        presentation=None,
        name=f"cyclic(N={N})",
        group_idempotents=idem,
    )
    grouplike = A.element({(y,): zN ** y for y in range(N)}, 1)
    Qd.twist_grouplike = grouplike
    return Qd


def carry_cocycle(N: int, s: int) -> ExpCochain:
    """The standard degree-3 exponent cocycle s*i*[j+k >= N] mod N on Z_N."""
    return ExpCochain.from_function(
        N, 3, N, lambda i, j, k: (s * i) % N if j + k >= N else 0)


# =====================================================================
# instance strings
# =====================================================================

def instance_names():
    return ["Aq:n=<n>,r=<r>", "H32", "taft:N=<N>,r=<r>",
            "book:p=<p>,r=<r>,m=<m>", "book64", "cyclic:N=<N>,s=<s>",
            "dual:<hopf instance>"]


def parse_instance(spec: str):
    """Build a catalog instance from a string like "Aq:n=2,r=1" or "H32".

    A "dual:" prefix wraps any Hopf instance and returns the dual algebra
    (a StructureAlgebra with the evaluation-at-1 augmentation) instead of a
    quasi-Hopf datum."""
    name, _, rest = spec.partition(":")
    if name == "dual":
        if not rest:
            raise EngineError("BAD_PARAMETER", "dual: needs an inner instance")
        return dual_algebra(parse_instance(rest))
    params = {}
    if rest:
        for kv in rest.split(","):
            k, _, v = kv.partition("=")
            if not v.lstrip("-").isdigit():
                raise EngineError("BAD_PARAMETER", f"bad parameter {kv!r}")
            params[k.strip()] = int(v)
    try:
        if name == "Aq":
            return build_Aq(params.pop("n"), params.pop("r"))
        if name == "H32":
            return build_H32()
        if name == "taft":
            return build_taft(params.pop("N"), params.pop("r"))
        if name == "book":
            return build_book(params.pop("p"), params.pop("r"), params.pop("m"))
        if name == "book64":
            return build_book64()
        if name == "cyclic":
            N = params.pop("N")
            s = params.pop("s")
            return build_cyclic_cocycle(N, carry_cocycle(N, s))
    except KeyError as e:
        raise EngineError("BAD_PARAMETER", f"missing parameter {e} for {name!r}")
    raise EngineError("BAD_PARAMETER", f"unknown instance {name!r}")
