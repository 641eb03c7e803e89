"""Quasi-Hopf structure data and the exact axiom verifier.

A QuasiHopfDatum bundles an algebra with coproduct, counit, associator,
antipode and the distinguished elements alpha/beta.  verify_axioms checks the
defining axioms exactly, basis element by basis element; twist applies a
gauge transformation by an invertible counital 2-tensor; dual_algebra,
sub-datum extraction/verification and presented-isomorphism checking round
out the toolkit.
"""

from __future__ import annotations

from .algebra import (
    Echelon,
    Element,
    LinearMap,
    StructureAlgebra,
    TrackedEchelon,
    _acc,
    check_associativity,
    check_augmentation,
    check_grading,
    check_unit,
    invert,
)
from .errors import EngineError
from .scalars import CycScalar

__all__ = [
    "Presentation",
    "AxiomReport",
    "QuasiHopfDatum",
    "verify_axioms",
    "twist",
    "antipode_power",
    "dual_algebra",
    "verify_sub_quasihopf",
    "restrict_datum",
    "verify_iso",
    "normalize_antipode",
    "antipode_gauge",
    "datum_equal",
]


# =====================================================================
# Presentation (generators / relations / basis words)
# =====================================================================

class Presentation:
    """Generators-and-relations description of the underlying algebra.

    gens: ordered dict name -> Element (each a coefficient-1 basis monomial).
    relations: list of (lhs, rhs); each side is a list of (scalar, word) terms
      and a word is a tuple of (gen_name, power) pairs.
    basis_words: one word per basis index; evaluating word m must give e_m.
    """

    def __init__(self, gens, relations, basis_words):
        self.gens = dict(gens)
        self.relations = list(relations)
        self.basis_words = list(basis_words)

    def eval_word(self, word, images=None, _memo=None):
        """Product of generator powers, evaluated in the images' algebra."""
        images = self.gens if images is None else images
        memo = _memo if _memo is not None else {}
        some = next(iter(images.values()))
        unit = some.parent.unit_element()
        cur = unit
        for g, p in word:
            img = images[g]
            for _ in range(p):
                cur = cur * img
        return cur

    def eval_side(self, side, images=None):
        images = self.gens if images is None else images
        some = next(iter(images.values()))
        out = some.parent.element({}, 1)
        for coeff, word in side:
            out = out + self.eval_word(word, images).scale(coeff)
        return out

    def validate(self, A: StructureAlgebra):
        """None if coherent with A, else a witness tuple."""
        for name, el in self.gens.items():
            if el.parent is not A or el.arity != 1:
                return ("gen_parent", name)
            if len(el.coords) != 1 or next(iter(el.coords.values())) != A.one:
                return ("gen_not_basis_monomial", name)
        if len(self.basis_words) != A.dim:
            return ("basis_words_count", len(self.basis_words))
        for m, word in enumerate(self.basis_words):
            if self.eval_word(word) != A.basis_element(m):
                return ("basis_word", m)
        for idx, (lhs, rhs) in enumerate(self.relations):
            if self.eval_side(lhs) != self.eval_side(rhs):
                return ("relation", idx)
        return None


# =====================================================================
# AxiomReport
# =====================================================================

AXIOM_ORDER = [
    "algebra_associative",
    "algebra_unit",
    "grading",
    "presentation",
    "phi_invertible",
    "a_coproduct_multiplicative",
    "a_counit_multiplicative",
    "b_counit_coproduct",
    "c_coassociativity_up_to_phi",
    "d_pentagon",
    "e_phi_counit",
    "f_antipode_alpha",
    "f_antipode_beta",
    "g_zigzag_forward",
    "g_zigzag_backward",
    "h_antipode_antihom",
]


class AxiomReport:
    """Ordered pass/fail per axiom with first counterexample witnesses."""

    def __init__(self, mode):
        self.mode = mode
        self.results = {}

    def record(self, name, ok, witness=None):
        self.results[name] = (bool(ok), None if ok else witness)

    @property
    def all_pass(self):
        return all(ok for ok, _ in self.results.values())

    def failures(self):
        return [name for name, (ok, _) in self.results.items() if not ok]

    def to_obj(self):
        out = []
        for name in AXIOM_ORDER:
            if name in self.results:
                ok, wit = self.results[name]
                out.append({"axiom": name, "pass": ok,
                            "witness": _witness_obj(wit)})
        return out

    def __repr__(self):
        bad = self.failures()
        return f"<AxiomReport {'PASS' if not bad else 'FAIL ' + ','.join(bad)}>"


def _witness_obj(w):
    if w is None:
        return None
    if isinstance(w, tuple):
        return list(w)
    return w


# =====================================================================
# QuasiHopfDatum
# =====================================================================

class QuasiHopfDatum:
    """Algebra + (Delta, counit, Phi, S, alpha, beta)."""

    def __init__(self, A, Delta, counit, Phi, PhiInv, S, alpha, beta,
                 presentation=None, name=None, group_idempotents=None):
        self.A = A
        self.Delta = Delta
        self.counit = counit
        self.Phi = Phi
        self.PhiInv = PhiInv
        self.S = S
        self.alpha = alpha
        self.beta = beta
        self.presentation = presentation
        self.name = name or A.name
        # idempotent basis of a commutative group-like-spanned subalgebra,
        # counit-1 idempotent first; used to build counital twist tensors
        self.group_idempotents = group_idempotents
        # distinguished group-like element (set by constructors that have
        # one); the default source of crossed-product folding data
        self.twist_grouplike = None
        self._delta_cache = None

    def delta_elems(self):
        if self._delta_cache is None:
            self._delta_cache = [self.Delta.of(self.A.basis_element(i))
                                 for i in range(self.A.dim)]
        return self._delta_cache

    def counit_scalar(self, u: Element) -> CycScalar:
        return self.counit.of(u).coords.get((), self.A.zero)

    def is_hopf(self):
        return self.Phi == self.A.unit_element(3)

    def __repr__(self):
        return f"<QuasiHopfDatum {self.name} dim={self.A.dim}>"


def hopf_datum(A, delta_cols, counit_cols, s_cols, presentation=None,
               name=None, group_idempotents=None):
    """Convenience constructor for ordinary Hopf data (Phi = 1, alpha = beta = 1)."""
    return QuasiHopfDatum(
        A,
        LinearMap(A, A, 2, delta_cols),
        LinearMap(A, A, 0, counit_cols),
        A.unit_element(3),
        A.unit_element(3),
        LinearMap(A, A, 1, s_cols),
        A.unit_element(1),
        A.unit_element(1),
        presentation=presentation,
        name=name,
        group_idempotents=group_idempotents,
    )


def datum_equal(Q1: QuasiHopfDatum, Q2: QuasiHopfDatum) -> bool:
    """Structural equality: same structure constants and same datum
    components, coefficient by coefficient.  The two data may live on
    distinct (but equal) algebra objects."""
    A1, A2 = Q1.A, Q2.A
    if A1 is not A2:
        if (A1.dim, A1.level) != (A2.dim, A2.level):
            return False
        if A1.mult != A2.mult or A1.unit != A2.unit:
            return False
    return (Q1.Delta.cols == Q2.Delta.cols
            and Q1.counit.cols == Q2.counit.cols
            and Q1.S.cols == Q2.S.cols
            and Q1.Phi.coords == Q2.Phi.coords
            and Q1.PhiInv.coords == Q2.PhiInv.coords
            and Q1.alpha.coords == Q2.alpha.coords
            and Q1.beta.coords == Q2.beta.coords)


# =====================================================================
# verify_axioms
# =====================================================================

def verify_axioms(Q: QuasiHopfDatum, mode: str = "basis") -> AxiomReport:
    """Exact check of the defining axioms.

    mode="basis" iterates every basis element / pair (the default and the
    normative setting).  mode="generators" uses the datum's validated
    presentation to cut the multiplicative checks down to (basis x generator)
    pairs and the comultiplicative ones down to generators; this is complete,
    not a sampling shortcut: an algebra map (or anti-map) determined on
    monomial generators is determined everywhere, and the reduction is only
    applied to checks whose two sides are such maps once (a) holds.
    """
    if mode not in ("basis", "generators"):
        raise EngineError("BAD_PARAMETER", f"unknown mode {mode!r}")
    A = Q.A
    rep = AxiomReport(mode)
    one1 = A.unit_element(1)
    one2 = A.unit_element(2)
    one3 = A.unit_element(3)

    w = check_associativity(A)
    rep.record("algebra_associative", w is None, w)
    w = check_unit(A)
    rep.record("algebra_unit", w is None, w)
    w = check_grading(A)
    rep.record("grading", w is None, w)

    gens = None
    if mode == "generators":
        if Q.presentation is None:
            raise EngineError("BAD_PARAMETER", "generators mode needs a presentation")
        w = Q.presentation.validate(A)
        rep.record("presentation", w is None, w)
        if w is not None:
            return rep
        gens = list(Q.presentation.gens.items())

    rep.record("phi_invertible",
               Q.Phi * Q.PhiInv == one3 and Q.PhiInv * Q.Phi == one3)

    d = Q.delta_elems()
    eps = [Q.counit_scalar(A.basis_element(i)) for i in range(A.dim)]

    # (a) Delta and counit are unital algebra maps
    ok, wit = True, None
    if Q.Delta.of(one1) != one2:
        ok, wit = False, ("unit",)
    if ok:
        if mode == "basis":
            pair_iter = (((i,), (j,), d[i], d[j])
                         for i in range(A.dim) for j in range(A.dim))
        else:
            pair_iter = (((i,), (gname,), d[i], Q.Delta.of(gel))
                         for i in range(A.dim) for gname, gel in gens)
        for li, rj, du, dv in pair_iter:
            if mode == "basis":
                prod = A.basis_element(li[0]) * A.basis_element(rj[0])
            else:
                prod = A.basis_element(li[0]) * Q.presentation.gens[rj[0]]
            if Q.Delta.of(prod) != du * dv:
                ok, wit = False, (li[0], rj[0])
                break
    rep.record("a_coproduct_multiplicative", ok, wit)

    ok, wit = True, None
    if Q.counit_scalar(one1) != A.one:
        ok, wit = False, ("unit",)
    if ok:
        for i in range(A.dim):
            for j in range(A.dim):
                s = A.zero
                for k, c in A.row(i, j).items():
                    s = s + c * eps[k]
                if s != eps[i] * eps[j]:
                    ok, wit = False, (i, j)
                    break
            if not ok:
                break
    rep.record("a_counit_multiplicative", ok, wit)

    # (b) (eps (x) id) Delta = id = (id (x) eps) Delta
    ok, wit = True, None
    targets = range(A.dim) if mode == "basis" else None
    if mode == "basis":
        for i in range(A.dim):
            e = A.basis_element(i)
            if d[i].apply_leg(Q.counit, 0) != e or d[i].apply_leg(Q.counit, 1) != e:
                ok, wit = False, (i,)
                break
    else:
        for gname, gel in gens:
            dg = Q.Delta.of(gel)
            if dg.apply_leg(Q.counit, 0) != gel or dg.apply_leg(Q.counit, 1) != gel:
                ok, wit = False, (gname,)
                break
    rep.record("b_counit_coproduct", ok, wit)

    # (c) (Delta (x) id)Delta(h) = PhiInv . (id (x) Delta)Delta(h) . Phi
    ok, wit = True, None
    citer = ((i, d[i]) for i in range(A.dim)) if mode == "basis" \
        else ((gname, Q.Delta.of(gel)) for gname, gel in gens)
    for tag, dh in citer:
        lhs = dh.apply_leg(Q.Delta, 0)
        rhs = Q.PhiInv * dh.apply_leg(Q.Delta, 1) * Q.Phi
        if lhs != rhs:
            ok, wit = False, (tag,)
            break
    rep.record("c_coassociativity_up_to_phi", ok, wit)

    # (d) pentagon
    lhs = Q.Phi.apply_leg(Q.Delta, 2) * Q.Phi.apply_leg(Q.Delta, 0)
    rhs = (Q.Phi.promote((1, 2, 3), 4)
           * Q.Phi.apply_leg(Q.Delta, 1)
           * Q.Phi.promote((0, 1, 2), 4))
    rep.record("d_pentagon", lhs == rhs)

    # (e) (id (x) eps (x) id)(Phi) = 1 (x) 1
    rep.record("e_phi_counit", Q.Phi.apply_leg(Q.counit, 1) == one2)

    # (f) sum S(h1) alpha h2 = eps(h) alpha ; sum h1 beta S(h2) = eps(h) beta
    s_el = [Q.S.of(A.basis_element(i)) for i in range(A.dim)]
    s_alpha = {}
    beta_s = {}

    def _salpha(i):
        if i not in s_alpha:
            s_alpha[i] = s_el[i] * Q.alpha
        return s_alpha[i]

    def _betas(i):
        if i not in beta_s:
            beta_s[i] = Q.beta * s_el[i]
        return beta_s[i]

    ok, wit = True, None
    for i in range(A.dim):
        acc = A.element({}, 1)
        for (s, t), c in d[i].coords.items():
            acc = acc + (_salpha(s) * A.basis_element(t)).scale(c)
        if acc != Q.alpha.scale(eps[i]):
            ok, wit = False, (i,)
            break
    rep.record("f_antipode_alpha", ok, wit)

    ok, wit = True, None
    for i in range(A.dim):
        acc = A.element({}, 1)
        for (s, t), c in d[i].coords.items():
            acc = acc + (A.basis_element(s) * _betas(t)).scale(c)
        if acc != Q.beta.scale(eps[i]):
            ok, wit = False, (i,)
            break
    rep.record("f_antipode_beta", ok, wit)

    # (g) zig-zags through Phi and PhiInv
    acc = A.element({}, 1)
    for (u, v, t), c in Q.Phi.coords.items():
        acc = acc + (A.basis_element(u) * _betas(v) * Q.alpha
                     * A.basis_element(t)).scale(c)
    rep.record("g_zigzag_forward", acc == one1)

    acc = A.element({}, 1)
    for (u, v, t), c in Q.PhiInv.coords.items():
        acc = acc + (_salpha(u) * A.basis_element(v) * _betas(t)).scale(c)
    rep.record("g_zigzag_backward", acc == one1)

    # (h) S is a unital anti-homomorphism
    ok, wit = True, None
    if Q.S.of(one1) != one1:
        ok, wit = False, ("unit",)
    if ok:
        if mode == "basis":
            for i in range(A.dim):
                ei = A.basis_element(i)
                for j in range(A.dim):
                    if Q.S.of(ei * A.basis_element(j)) != s_el[j] * s_el[i]:
                        ok, wit = False, (i, j)
                        break
                if not ok:
                    break
        else:
            for i in range(A.dim):
                ei = A.basis_element(i)
                si = s_el[i]
                for gname, gel in gens:
                    if Q.S.of(ei * gel) != Q.S.of(gel) * si:
                        ok, wit = False, (i, gname)
                        break
                if not ok:
                    break
    rep.record("h_antipode_antihom", ok, wit)
    return rep


# =====================================================================
# Twisting
# =====================================================================

def twist(Q: QuasiHopfDatum, J: Element) -> QuasiHopfDatum:
    """Gauge transformation by an invertible counital 2-tensor J.

    Delta'(h) = J Delta(h) J^{-1};
    Phi'      = (1 (x) J) (id (x) Delta)(J) Phi (Delta (x) id)(J^{-1}) (J^{-1} (x) 1);
    alpha'    = sum S(j1) alpha j2   (J^{-1} = sum j1 (x) j2);
    beta'     = sum J1 beta S(J2)    (J   = sum J1 (x) J2);
    S and the counit unchanged.
    """
    A = Q.A
    if J.parent is not A or J.arity != 2:
        raise EngineError("BAD_PARAMETER", "twist needs an arity-2 element of the algebra")
    one1 = A.unit_element(1)
    if J.apply_leg(Q.counit, 0) != one1 or J.apply_leg(Q.counit, 1) != one1:
        raise EngineError("COUNIT_CONDITION_FAILED",
                          "(eps (x) id)(J) and (id (x) eps)(J) must equal 1")
    Jinv = invert(J)

    cols = {}
    for i in range(A.dim):
        w = J * Q.Delta.of(A.basis_element(i)) * Jinv
        if w.coords:
            cols[i] = w.coords
    Delta2 = LinearMap(A, A, 2, cols)

    Phi2 = (J.promote((1, 2), 3)
            * J.apply_leg(Q.Delta, 1)
            * Q.Phi
            * Jinv.apply_leg(Q.Delta, 0)
            * Jinv.promote((0, 1), 3))
    PhiInv2 = (J.promote((0, 1), 3)
               * J.apply_leg(Q.Delta, 0)
               * Q.PhiInv
               * Jinv.apply_leg(Q.Delta, 1)
               * Jinv.promote((1, 2), 3))

    alpha2 = A.element({}, 1)
    for (s, t), c in Jinv.coords.items():
        alpha2 = alpha2 + (Q.S.of(A.basis_element(s)) * Q.alpha
                           * A.basis_element(t)).scale(c)
    beta2 = A.element({}, 1)
    for (s, t), c in J.coords.items():
        beta2 = beta2 + (A.basis_element(s) * Q.beta
                         * Q.S.of(A.basis_element(t))).scale(c)

    return QuasiHopfDatum(A, Delta2, Q.counit, Phi2, PhiInv2, Q.S, alpha2, beta2,
                          presentation=Q.presentation,
                          name=f"{Q.name}^J" if Q.name else None,
                          group_idempotents=Q.group_idempotents)


def antipode_gauge(Q: QuasiHopfDatum, U: Element) -> QuasiHopfDatum:
    """The antipode-uniqueness gauge: S' = U S(.) U^{-1}, alpha' = U alpha,
    beta' = beta U^{-1}, everything else unchanged.

    For any invertible counital U this preserves all axioms; two antipode
    triples (S, alpha, beta) for the same quasi-bialgebra differ by exactly
    one such U.
    """
    A = Q.A
    if U.parent is not A or U.arity != 1:
        raise EngineError("BAD_PARAMETER", "gauge element must be an arity-1 element")
    if Q.counit_scalar(U) != A.one:
        raise EngineError("COUNIT_CONDITION_FAILED", "gauge element must be counital")
    Uinv = invert(U)
    cols = {}
    for i in range(A.dim):
        w = U * Q.S.of(A.basis_element(i)) * Uinv
        if w.coords:
            cols[i] = w.coords
    S2 = LinearMap(A, A, 1, cols)
    out = QuasiHopfDatum(A, Q.Delta, Q.counit, Q.Phi, Q.PhiInv, S2,
                         U * Q.alpha, Q.beta * Uinv,
                         presentation=Q.presentation,
                         name=Q.name,
                         group_idempotents=Q.group_idempotents)
    out.twist_grouplike = Q.twist_grouplike
    return out


def antipode_power(Q: QuasiHopfDatum, k: int) -> LinearMap:
    return Q.S.power(k)


# =====================================================================
# Dual algebra (Hopf case only)
# =====================================================================

def dual_algebra(Q: QuasiHopfDatum) -> StructureAlgebra:
    """Algebra on the dual basis: mu*(i,j)^k = coeff of e_i (x) e_j in Delta(e_k).

    Only meaningful when the coproduct is strictly coassociative, i.e. Phi = 1.
    The dual carries the evaluation-at-1 augmentation (used by cohomology).
    """
    A = Q.A
    if not Q.is_hopf():
        raise EngineError("NOT_COASSOCIATIVE", "dual_algebra requires Phi = 1")
    mult = {}
    for k, col in Q.Delta.cols.items():
        for (i, j), c in col.items():
            mult.setdefault((i, j), {})[k] = c
    unit = {}
    for i, col in Q.counit.cols.items():
        c = col.get(())
        if c is not None and not c.is_zero():
            unit[i] = c
    grading = None
    if A.grading is not None:
        g = A.grading
        graded = all(g[i] + g[j] == g[k]
                     for (i, j), row in mult.items() for k in row)
        if graded:
            grading = list(g)
    augmentation = {k: c for k, c in A.unit.items()}
    dual = StructureAlgebra(A.dim, A.level, mult, unit, grading=grading,
                            augmentation=augmentation,
                            name=f"dual({Q.name})" if Q.name else "dual")
    if check_associativity(dual) is not None:
        raise EngineError("NOT_COASSOCIATIVE", "coproduct transpose is not associative")
    if check_unit(dual) is not None:
        raise EngineError("NOT_COASSOCIATIVE", "counit transpose is not a unit")
    if check_augmentation(dual) is not None:
        raise EngineError("NOT_COASSOCIATIVE", "evaluation at 1 is not an algebra map")
    return dual


# =====================================================================
# Sub-data
# =====================================================================

def _span_projector(A: StructureAlgebra, basis: list) -> LinearMap:
    """Projection of A onto a complement of span(basis) along span(basis);
    kernel is exactly the span, so pi(v) == 0 tests membership."""
    ech = Echelon()
    for b in basis:
        if b.parent is not A or b.arity != 1:
            raise EngineError("BAD_PARAMETER", "sub-basis must be arity-1 elements of A")
        if not ech.add(b.coords):
            raise EngineError("BAD_PARAMETER", "sub-basis is linearly dependent")
    cols = {}
    for i in range(A.dim):
        r = ech.reduce({(i,): A.one})
        if r:
            cols[i] = r
    return LinearMap(A, A, 1, cols)


def verify_sub_quasihopf(Q: QuasiHopfDatum, basis: list, report: dict = None) -> bool:
    """Is span(basis) a quasi-Hopf subalgebra of Q?

    Checks closure under multiplication, the coproduct (into span (x) span),
    the antipode, and membership of 1, alpha, beta and all three legs of Phi
    and PhiInv.  Failures are recorded in `report` (if given) as
    {"code": "NOT_CLOSED", "witness": ...} and return False.
    """
    A = Q.A
    pi = _span_projector(A, basis)

    def fail(witness):
        if report is not None:
            report["code"] = "NOT_CLOSED"
            report["witness"] = witness
        return False

    for tag, el in (("unit", A.unit_element(1)), ("alpha", Q.alpha), ("beta", Q.beta)):
        if not pi.of(el).is_zero():
            return fail((tag,))
    for iu, u in enumerate(basis):
        for iv, v in enumerate(basis):
            if not pi.of(u * v).is_zero():
                return fail(("mult", iu, iv))
    for iu, u in enumerate(basis):
        w = Q.Delta.of(u)
        if not w.apply_leg(pi, 0).is_zero() or not w.apply_leg(pi, 1).is_zero():
            return fail(("delta", iu))
        if not pi.of(Q.S.of(u)).is_zero():
            return fail(("antipode", iu))
    for tag, t in (("phi", Q.Phi), ("phi_inv", Q.PhiInv)):
        for leg in range(3):
            if not t.apply_leg(pi, leg).is_zero():
                return fail((tag, leg))
    return True


def _express_tensor(coords: dict, arity: int, tr: TrackedEchelon):
    """Rewrite an ambient tensor's coordinates in sub-basis indices, leg by leg.
    Returns None if some slice is outside the span."""
    cur = coords
    for leg in range(arity):
        groups = {}
        for t, c in cur.items():
            key = (t[:leg], t[leg + 1:])
            vec = groups.setdefault(key, {})
            _acc(vec, (t[leg],), c)
        out: dict = {}
        for (pre, suf), vec in groups.items():
            vec = {k: v for k, v in vec.items() if not v.is_zero()}
            sub = tr.coords_of(vec)
            if sub is None:
                return None
            for m, c in sub.items():
                _acc(out, pre + (m,) + suf, c)
        cur = {t: c for t, c in out.items() if not c.is_zero()}
    return cur


def restrict_datum(Q: QuasiHopfDatum, basis: list, name=None) -> QuasiHopfDatum:
    """The induced quasi-Hopf datum on span(basis).

    Assumes verify_sub_quasihopf(Q, basis) holds; raises NOT_CLOSED otherwise.
    """
    A = Q.A
    tr = TrackedEchelon()
    for b in basis:
        if not tr.add(b.coords):
            raise EngineError("BAD_PARAMETER", "sub-basis is linearly dependent")
    m = len(basis)

    def c1(el: Element) -> dict:
        sub = tr.coords_of(el.coords)
        if sub is None:
            raise EngineError("NOT_CLOSED", "element leaves the span")
        return {(k,): v for k, v in sub.items() if not v.is_zero()}

    def ck(el: Element, k: int) -> dict:
        sub = _express_tensor(el.coords, k, tr)
        if sub is None:
            raise EngineError("NOT_CLOSED", "tensor leaves the span")
        return sub

    mult = {}
    for i in range(m):
        for j in range(m):
            row = c1(basis[i] * basis[j])
            if row:
                mult[(i, j)] = {k[0]: v for k, v in row.items()}
    unit = {k[0]: v for k, v in c1(A.unit_element(1)).items()}
    grading = None
    if A.grading is not None:
        degs = []
        homogeneous = True
        for b in basis:
            ds = {A.grading[t[0]] for t in b.coords}
            if len(ds) != 1:
                homogeneous = False
                break
            degs.append(ds.pop())
        if homogeneous:
            grading = degs
    names = None
    sub = StructureAlgebra(m, A.level, mult, unit, grading=grading,
                           basis_names=names, name=name or f"sub({Q.name})")
    delta_cols = {i: ck(Q.Delta.of(basis[i]), 2) for i in range(m)}
    counit_cols = {}
    for i in range(m):
        c = Q.counit_scalar(basis[i])
        if not c.is_zero():
            counit_cols[i] = {(): c}
    s_cols = {i: c1(Q.S.of(basis[i])) for i in range(m)}
    return QuasiHopfDatum(
        sub,
        LinearMap(sub, sub, 2, delta_cols),
        LinearMap(sub, sub, 0, counit_cols),
        sub.element(ck(Q.Phi, 3), 3),
        sub.element(ck(Q.PhiInv, 3), 3),
        LinearMap(sub, sub, 1, s_cols),
        sub.element(ck(Q.alpha, 1), 1),
        sub.element(ck(Q.beta, 1), 1),
        name=name or f"sub({Q.name})",
    )


# =====================================================================
# Isomorphism checking via presentations
# =====================================================================

def verify_iso(Q1: QuasiHopfDatum, Q2: QuasiHopfDatum, gen_map: dict,
               report: dict = None) -> bool:
    """Does gen_map extend to an isomorphism of quasi-Hopf data Q1 -> Q2?

    Q1 must carry a validated presentation whose generators are basis
    monomials.  The extension L sends basis word m to the corresponding
    product of images.  Checks: relations on images; bijectivity of L;
    multiplicativity on (basis x generator) pairs, which by induction on
    word length forces multiplicativity everywhere; coproduct/counit/antipode
    compatibility on generators (complete, since both sides are then algebra
    maps agreeing on generators); and alpha, beta, Phi on the nose.
    """

    def fail(code, witness):
        if report is not None:
            report["code"] = code
            report["witness"] = witness
        return False

    pres = Q1.presentation
    if pres is None:
        raise EngineError("BAD_PARAMETER", "verify_iso needs a presentation on Q1")
    w = pres.validate(Q1.A)
    if w is not None:
        raise EngineError("BAD_PARAMETER", f"invalid presentation: {w}")
    if set(gen_map) != set(pres.gens):
        raise EngineError("BAD_PARAMETER", "gen_map keys must match presentation generators")
    for gname, el in gen_map.items():
        if el.parent is not Q2.A or el.arity != 1:
            raise EngineError("BAD_PARAMETER", f"image of {gname} not an element of Q2")

    for idx, (lhs, rhs) in enumerate(pres.relations):
        if pres.eval_side(lhs, gen_map) != pres.eval_side(rhs, gen_map):
            return fail("RELATIONS_FAIL", ("relation", idx))

    if Q1.A.dim != Q2.A.dim:
        return fail("NOT_BIJECTIVE", ("dim", Q1.A.dim, Q2.A.dim))
    cols = {}
    ech = Echelon()
    rank = 0
    for mdx, word in enumerate(pres.basis_words):
        img = pres.eval_word(word, gen_map)
        cols[mdx] = img.coords
        if ech.add(img.coords):
            rank += 1
    if rank != Q1.A.dim:
        return fail("NOT_BIJECTIVE", ("rank", rank))
    L = LinearMap(Q1.A, Q2.A, 1, cols)

    for i in range(Q1.A.dim):
        ei = Q1.A.basis_element(i)
        Li = L.of(ei)
        for gname, gel in pres.gens.items():
            if L.of(ei * gel) != Li * gen_map[gname]:
                return fail("NOT_MULTIPLICATIVE", (i, gname))

    if L.of(Q1.A.unit_element(1)) != Q2.A.unit_element(1):
        return fail("NOT_MULTIPLICATIVE", ("unit",))

    for gname, gel in pres.gens.items():
        img = gen_map[gname]
        if Q2.Delta.of(img) != Q1.Delta.of(gel).apply_all_legs(L):
            return fail("COPRODUCT_MISMATCH", (gname,))
        if Q2.counit.of(img).coords != Q1.counit.of(gel).coords:
            return fail("COUNIT_MISMATCH", (gname,))
        if Q2.S.of(img) != L.of(Q1.S.of(gel)):
            return fail("ANTIPODE_MISMATCH", (gname,))

    if L.of(Q1.alpha) != Q2.alpha:
        return fail("ALPHA_MISMATCH", None)
    if L.of(Q1.beta) != Q2.beta:
        return fail("BETA_MISMATCH", None)
    if Q1.Phi.apply_all_legs(L) != Q2.Phi:
        return fail("PHI_MISMATCH", None)
    return True


# =====================================================================
# Antipode normalization (Hopf case)
# =====================================================================

def normalize_antipode(Q: QuasiHopfDatum) -> QuasiHopfDatum:
    """Gauge the antipode of a Phi = 1 datum so that alpha = beta = 1.

    With Phi = 1 the zig-zag axioms force beta = alpha^{-1}; conjugating
    S by U = alpha^{-1} (S' = U S(.) U^{-1}, alpha' = U alpha = 1,
    beta' = beta U^{-1} = 1) preserves all axioms.
    """
    A = Q.A
    if not Q.is_hopf():
        raise EngineError("BAD_PARAMETER", "normalize_antipode requires Phi = 1")
    one1 = A.unit_element(1)
    if Q.alpha == one1 and Q.beta == one1:
        return Q
    U = invert(Q.alpha)
    if Q.counit_scalar(U) != A.one:
        raise EngineError("BAD_PARAMETER", "alpha^{-1} is not counital")
    Uinv = Q.alpha
    cols = {}
    for i in range(A.dim):
        w = U * Q.S.of(A.basis_element(i)) * Uinv
        if w.coords:
            cols[i] = w.coords
    S2 = LinearMap(A, A, 1, cols)
    alpha2 = U * Q.alpha
    beta2 = Q.beta * Uinv
    out = QuasiHopfDatum(A, Q.Delta, Q.counit, Q.Phi, Q.PhiInv, S2, alpha2, beta2,
                         presentation=Q.presentation,
                         name=f"{Q.name}~" if Q.name else None,
                         group_idempotents=Q.group_idempotents)
    out.twist_grouplike = Q.twist_grouplike
    return out
