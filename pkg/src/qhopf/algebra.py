"""Finite-dimensional associative algebras by structure constants.

Everything downstream (axiom checks, twists, cohomology) reduces to sparse
exact arithmetic over these objects:

* StructureAlgebra -- multiplication table mu(i,j) as sparse CycScalar rows,
  a unit vector, an optional nonnegative grading and an optional augmentation.
* Element          -- sparse vector in A^{otimes k}, coords keyed by k-tuples
  of basis indices.  Products are componentwise via the base table, so tensor
  powers never have to be materialized for arithmetic.
* LinearMap        -- sparse matrix A -> A'^{otimes m} (source arity 1),
  which is all the engine needs (coproducts, counits, antipodes,
  automorphisms, embeddings).

Also here: exact row reduction (Echelon / TrackedEchelon), Jacobson radical
via the characteristic-zero trace-form criterion, the radical filtration, the
associated graded algebra, and element inversion by minimal polynomial.
"""

from __future__ import annotations

from .errors import EngineError
from .scalars import CycScalar, Q, lift_level

__all__ = [
    "StructureAlgebra",
    "Element",
    "LinearMap",
    "Echelon",
    "TrackedEchelon",
    "multiply",
    "invert",
    "tensor_elem",
    "apply",
    "tensor_power",
    "jacobson_radical",
    "radical_filtration",
    "associated_graded",
    "nullspace",
    "check_associativity",
    "check_unit",
    "check_grading",
]


# =====================================================================
# StructureAlgebra
# =====================================================================

class StructureAlgebra:
    """Associative algebra with a distinguished basis e_0 .. e_{dim-1}.

    mult: dict (i, j) -> dict k -> CycScalar, missing pairs/entries are zero.
    unit: dict k -> CycScalar (coordinates of 1).
    grading: optional list of nonnegative degrees per basis index.
    augmentation: optional algebra map to scalars, as dict k -> CycScalar.
    basis_names: optional printable names, for diagnostics only.
    """

    def __init__(self, dim, level, mult, unit, grading=None, basis_names=None,
                 augmentation=None, name=None):
        self.dim = dim
        self.level = level
        self.mult = mult
        self.unit = dict(unit)
        self.grading = list(grading) if grading is not None else None
        self.basis_names = list(basis_names) if basis_names is not None else None
        self.augmentation = dict(augmentation) if augmentation is not None else None
        self.name = name
        self.one = CycScalar.one(level)
        self.zero = CycScalar.zero(level)
        self._assoc_ok = None  # cache for check_associativity

    # -- element constructors -------------------------------------------
    def basis_element(self, i, arity=1):
        if arity == 1:
            return Element(self, 1, {(i,): self.one})
        raise EngineError("BAD_PARAMETER", "basis_element is arity 1")

    def element(self, coords, arity=1):
        return Element(self, arity, coords)

    def unit_element(self, arity=1):
        coords = {(): self.one}
        for _ in range(arity):
            coords = {
                t + (k,): c * ck for t, c in coords.items() for k, ck in self.unit.items()
            }
        return Element(self, arity, coords)

    def scalar(self, x):
        return CycScalar.from_rational(x, self.level) if not isinstance(x, CycScalar) \
            else lift_level(x, self.level)

    def row(self, i, j):
        return self.mult.get((i, j), _EMPTY)

    def name_of(self, i):
        return self.basis_names[i] if self.basis_names else f"e{i}"

    def __repr__(self):
        tag = self.name or "StructureAlgebra"
        return f"<{tag} dim={self.dim} level={self.level}>"


_EMPTY: dict = {}


def check_associativity(A: StructureAlgebra):
    """First failing triple (i, j, k), or None if associative.  Result cached."""
    if A._assoc_ok is True:
        return None
    for i in range(A.dim):
        for j in range(A.dim):
            rij = A.row(i, j)
            for k in range(A.dim):
                lhs: dict = {}
                for m, c in rij.items():
                    for t, d in A.row(m, k).items():
                        _acc(lhs, t, c * d)
                rhs: dict = {}
                for m, c in A.row(j, k).items():
                    for t, d in A.row(i, m).items():
                        _acc(rhs, t, c * d)
                if _clean(lhs) != _clean(rhs):
                    return (i, j, k)
    A._assoc_ok = True
    return None


def check_unit(A: StructureAlgebra):
    """First basis index where 1*e_i or e_i*1 fails, or None."""
    for i in range(A.dim):
        left: dict = {}
        right: dict = {}
        for u, cu in A.unit.items():
            for t, d in A.row(u, i).items():
                _acc(left, t, cu * d)
            for t, d in A.row(i, u).items():
                _acc(right, t, cu * d)
        want = {i: A.one}
        if _clean(left) != want or _clean(right) != want:
            return i
    return None


def check_grading(A: StructureAlgebra):
    """First (i, j, k) where the product leaves the expected degree, or None."""
    if A.grading is None:
        return None
    g = A.grading
    for (i, j), row in A.mult.items():
        for k, c in row.items():
            if not c.is_zero() and g[k] != g[i] + g[j]:
                return (i, j, k)
    return None


def check_augmentation(A: StructureAlgebra):
    """Verify the augmentation is a unital algebra map; None if absent/ok."""
    if A.augmentation is None:
        return None
    aug = A.augmentation
    z = A.zero

    def of(i):
        return aug.get(i, z)

    s = z
    for u, cu in A.unit.items():
        s = s + cu * of(u)
    if s != A.one:
        return ("unit",)
    for (i, j), row in A.mult.items():
        s = z
        for k, c in row.items():
            s = s + c * of(k)
        if s != of(i) * of(j):
            return (i, j)
    return None


def _acc(d: dict, key, val):
    cur = d.get(key)
    d[key] = val if cur is None else cur + val


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if not v.is_zero()}


# =====================================================================
# Element of A^{otimes k}
# =====================================================================

class Element:
    """Sparse vector in A^{otimes k}; coords keyed by k-tuples of indices."""

    __slots__ = ("parent", "arity", "coords")

    def __init__(self, parent, arity, coords, *, clean=True):
        self.parent = parent
        self.arity = arity
        self.coords = _clean(coords) if clean else coords

    # -- linear structure ---------------------------------------------
    def __add__(self, other):
        self._check_peer(other)
        out = dict(self.coords)
        for t, c in other.coords.items():
            _acc(out, t, c)
        return Element(self.parent, self.arity, out)

    def __sub__(self, other):
        self._check_peer(other)
        out = dict(self.coords)
        for t, c in other.coords.items():
            _acc(out, t, -c)
        return Element(self.parent, self.arity, out)

    def __neg__(self):
        return Element(self.parent, self.arity,
                       {t: -c for t, c in self.coords.items()}, clean=False)

    def scale(self, s):
        s = self.parent.scalar(s)
        if s.is_zero():
            return Element(self.parent, self.arity, {}, clean=False)
        return Element(self.parent, self.arity,
                       {t: s * c for t, c in self.coords.items()})

    def __rmul__(self, s):
        if isinstance(s, (int, CycScalar, type(Q(0)))):
            return self.scale(s)
        return NotImplemented

    # -- products --------------------------------------------------------
    def __mul__(self, other):
        if isinstance(other, (int, CycScalar, type(Q(0)))):
            return self.scale(other)
        self._check_peer(other)
        A = self.parent
        mult = A.mult
        k = self.arity
        out: dict = {}
        for tu, cu in self.coords.items():
            for tv, cv in other.coords.items():
                rows = []
                ok = True
                for a, b in zip(tu, tv):
                    row = mult.get((a, b))
                    if not row:
                        ok = False
                        break
                    rows.append(row)
                if not ok:
                    continue
                partial = [((), cu * cv)]
                for row in rows:
                    if len(row) == 1:
                        ((b, s),) = row.items()
                        partial = [(t + (b,), c * s) for t, c in partial]
                    else:
                        partial = [
                            (t + (b,), c * s) for t, c in partial for b, s in row.items()
                        ]
                for t, c in partial:
                    _acc(out, t, c)
        return Element(A, k, out)

    def __pow__(self, n: int):
        if n < 0:
            return invert(self) ** (-n)
        out = self.parent.unit_element(self.arity)
        for _ in range(n):
            out = out * self
        return out

    def tensor(self, other):
        if other.parent is not self.parent:
            raise EngineError("ARITY_MISMATCH", "tensor of elements over different algebras")
        out = {
            t + s: c * d
            for t, c in self.coords.items()
            for s, d in other.coords.items()
        }
        return Element(self.parent, self.arity + other.arity, out)

    # -- predicates ------------------------------------------------------
    def is_zero(self):
        return not self.coords

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (self.parent is other.parent and self.arity == other.arity
                and self.coords == other.coords)

    def __hash__(self):
        raise TypeError("Element is not hashable")

    def _check_peer(self, other):
        if self.parent is not other.parent or self.arity != other.arity:
            raise EngineError("ARITY_MISMATCH",
                              f"arity {self.arity} vs {getattr(other, 'arity', '?')}")

    # -- leg application ---------------------------------------------------
    def apply_leg(self, lin: "LinearMap", leg: int):
        """Apply an arity-1 -> arity-m map to one tensor leg (same algebra)."""
        if lin.source is not self.parent or lin.target is not self.parent:
            raise EngineError("ARITY_MISMATCH", "apply_leg needs an endomap of the parent")
        out: dict = {}
        for t, c in self.coords.items():
            col = lin.cols.get(t[leg])
            if not col:
                continue
            head, tail = t[:leg], t[leg + 1:]
            for s, d in col.items():
                _acc(out, head + s + tail, c * d)
        return Element(self.parent, self.arity - 1 + lin.target_arity, out)

    def apply_all_legs(self, lin: "LinearMap"):
        """Apply the same arity-1 -> arity-m map to every leg (may change algebra)."""
        if lin.source is not self.parent:
            raise EngineError("ARITY_MISMATCH", "map source does not match element parent")
        m = lin.target_arity
        out: dict = {}
        for t, c in self.coords.items():
            partial = [((), c)]
            ok = True
            for idx in t:
                col = lin.cols.get(idx)
                if not col:
                    ok = False
                    break
                if len(col) == 1:
                    ((s, d),) = col.items()
                    partial = [(u + s, cc * d) for u, cc in partial]
                else:
                    partial = [(u + s, cc * d) for u, cc in partial for s, d in col.items()]
            if not ok:
                continue
            for u, cc in partial:
                _acc(out, u, cc)
        return Element(lin.target, self.arity * m, out)

    def promote(self, positions: tuple, arity: int):
        """Embed into arity `arity` by tensoring with units at the other legs:
        positions[i] = leg occupied by my i-th leg."""
        A = self.parent
        unit_items = list(A.unit.items())
        out: dict = {}
        for t, c in self.coords.items():
            partial = [([None] * arity, c)]
            for pos, idx in zip(positions, t):
                for slots, _ in partial:
                    slots[pos] = idx
            for leg in range(arity):
                if leg in positions:
                    continue
                nxt = []
                for slots, cc in partial:
                    for u, cu in unit_items:
                        s2 = list(slots)
                        s2[leg] = u
                        nxt.append((s2, cc * cu))
                partial = nxt
            for slots, cc in partial:
                _acc(out, tuple(slots), cc)
        return Element(A, arity, out)

    def __repr__(self):
        if not self.coords:
            return "0"
        A = self.parent
        bits = []
        for t in sorted(self.coords):
            name = "(x)".join(A.name_of(i) for i in t) if t else "1(scalar)"
            bits.append(f"{self.coords[t]!r}*{name}")
        return " + ".join(bits)


def multiply(u: Element, v: Element) -> Element:
    return u * v


def tensor_elem(u: Element, v: Element) -> Element:
    return u.tensor(v)


# =====================================================================
# LinearMap (source arity always 1)
# =====================================================================

class LinearMap:
    """Sparse linear map A -> B^{otimes m}, stored by columns.

    cols: dict i -> dict (m-tuple) -> CycScalar; missing columns are zero.
    Covers coproducts (m=2), counits (m=0), antipodes/automorphisms (m=1)
    and embeddings between different algebras.
    """

    __slots__ = ("source", "target", "target_arity", "cols")

    def __init__(self, source, target, target_arity, cols):
        self.source = source
        self.target = target
        self.target_arity = target_arity
        self.cols = {i: _clean(col) for i, col in cols.items() if col}

    @staticmethod
    def identity(A):
        return LinearMap(A, A, 1, {i: {(i,): A.one} for i in range(A.dim)})

    def of(self, u: Element) -> Element:
        """Apply to an arity-1 element."""
        if u.arity != 1 or u.parent is not self.source:
            raise EngineError("ARITY_MISMATCH", "LinearMap.of needs arity-1 element of source")
        out: dict = {}
        for (i,), c in u.coords.items():
            col = self.cols.get(i)
            if not col:
                continue
            for t, d in col.items():
                _acc(out, t, c * d)
        return Element(self.target, self.target_arity, out)

    def compose(self, inner: "LinearMap") -> "LinearMap":
        """self o inner; inner must have target arity 1."""
        if inner.target_arity != 1 or inner.target is not self.source:
            raise EngineError("ARITY_MISMATCH", "compose needs inner: X -> source^1")
        cols = {}
        for i, col in inner.cols.items():
            out: dict = {}
            for (j,), c in col.items():
                mid = self.cols.get(j)
                if not mid:
                    continue
                for t, d in mid.items():
                    _acc(out, t, c * d)
            cols[i] = out
        return LinearMap(inner.source, self.target, self.target_arity, cols)

    def power(self, k: int) -> "LinearMap":
        if self.target_arity != 1 or self.target is not self.source:
            raise EngineError("ARITY_MISMATCH", "power needs an endomap")
        out = LinearMap.identity(self.source)
        for _ in range(k):
            out = self.compose(out)
        return out

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and self.target_arity == other.target_arity and self.cols == other.cols)

    def is_invertible(self) -> bool:
        if self.target_arity != 1:
            return False
        ech = Echelon()
        rank = 0
        for i, col in self.cols.items():
            if ech.add(col):
                rank += 1
        return rank == self.source.dim

    def inverse(self) -> "LinearMap":
        """Inverse of an invertible endomap, by expressing each basis vector
        in the span of the columns."""
        if self.target_arity != 1 or self.target is not self.source:
            raise EngineError("ARITY_MISMATCH", "inverse needs an endomap")
        A = self.source
        tr = TrackedEchelon()
        for i in range(A.dim):
            tr.add(self.cols.get(i, {}))
        cols = {}
        for j in range(A.dim):
            combo = tr.coords_of({(j,): A.one})
            if combo is None:
                raise EngineError("NOT_INVERTIBLE", "linear map is singular")
            cols[j] = {(g,): c for g, c in combo.items()}
        return LinearMap(A, A, 1, cols)

    def __repr__(self):
        return (f"<LinearMap {self.source!r} -> {self.target!r}^{self.target_arity}, "
                f"{len(self.cols)} cols>")


def apply(lin: LinearMap, u: Element) -> Element:
    return lin.of(u)


def is_inner(f: LinearMap, b: Element) -> bool:
    """Does f equal conjugation z -> b z b^{-1}?  b must be invertible."""
    A = b.parent
    binv = invert(b)
    for i in range(A.dim):
        e = A.basis_element(i)
        if f.of(e) != b * e * binv:
            return False
    return True


# =====================================================================
# Exact row reduction
# =====================================================================

class Echelon:
    """Gauss-Jordan reduced span of sparse vectors over Q(zeta_N).

    Keys may be ints or tuples (one kind per instance).  Rows are kept fully
    reduced with pivot coefficient 1, so membership tests are a single sweep.
    """

    def __init__(self):
        self.rows: dict = {}  # pivot_key -> vector dict

    def rank(self):
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        """Residual of vec modulo the span (projection along the span onto
        the complement spanned by non-pivot coordinates)."""
        v = _clean(dict(vec))
        while True:
            hit = None
            for key in v:
                if key in self.rows:
                    hit = key
                    break
            if hit is None:
                return v
            c = v[hit]
            for k2, s2 in self.rows[hit].items():
                _acc(v, k2, -(c * s2))
            v = _clean(v)

    def add(self, vec: dict) -> bool:
        """Insert vec; True iff it enlarged the span."""
        r = self.reduce(vec)
        if not r:
            return False
        pivot = min(r)
        inv = r[pivot].inv()
        row = {k: inv * c for k, c in r.items()}
        # keep existing rows reduced against the new pivot
        for p, old in list(self.rows.items()):
            c = old.get(pivot)
            if c is not None:
                new = dict(old)
                for k2, s2 in row.items():
                    _acc(new, k2, -(c * s2))
                self.rows[p] = _clean(new)
        self.rows[pivot] = row
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


class TrackedEchelon:
    """Echelon that remembers each row as a combination of the inserted
    generators, so vectors in the span can be expressed in those generators."""

    def __init__(self):
        self.rows: dict = {}  # pivot -> (vector, combo dict gen_index -> CycScalar)
        self.ngens = 0

    def rank(self):
        return len(self.rows)

    def _reduce(self, vec, combo):
        v = _clean(dict(vec))
        cb = dict(combo)
        while True:
            hit = None
            for key in v:
                if key in self.rows:
                    hit = key
                    break
            if hit is None:
                return v, _clean(cb)
            c = v[hit]
            rvec, rcombo = self.rows[hit]
            for k2, s2 in rvec.items():
                _acc(v, k2, -(c * s2))
            for g, s2 in rcombo.items():
                _acc(cb, g, -(c * s2))
            v = _clean(v)

    def add(self, vec: dict) -> bool:
        idx = self.ngens
        one = None
        for c in vec.values():
            one = CycScalar.one(c.level)
            break
        if one is None:
            self.ngens += 1
            return False
        r, cb = self._reduce(vec, {idx: one})
        self.ngens += 1
        if not r:
            return False
        pivot = min(r)
        inv = r[pivot].inv()
        row = {k: inv * c for k, c in r.items()}
        rcb = {g: inv * c for g, c in cb.items()}
        for p, (ov, ocb) in list(self.rows.items()):
            c = ov.get(pivot)
            if c is not None:
                nv = dict(ov)
                ncb = dict(ocb)
                for k2, s2 in row.items():
                    _acc(nv, k2, -(c * s2))
                for g, s2 in rcb.items():
                    _acc(ncb, g, -(c * s2))
                self.rows[p] = (_clean(nv), _clean(ncb))
        self.rows[pivot] = (row, rcb)
        return True

    def coords_of(self, vec: dict):
        """Combination of the inserted generators equal to vec, or None."""
        r, cb = self._reduce(vec, {})
        if r:
            return None
        return {g: -c for g, c in cb.items()}


def nullspace(rows: list, n: int, one: CycScalar) -> list:
    """Basis of {x : row . x = 0 for all rows}; rows are dicts int -> CycScalar."""
    ech = Echelon()
    for r in rows:
        ech.add(r)
    free = [j for j in range(n) if j not in ech.rows]
    out = []
    for f in free:
        vec = {f: one}
        for p, rvec in ech.rows.items():
            c = rvec.get(f)
            if c is not None and not c.is_zero():
                vec[p] = -c
        out.append(vec)
    return out


# =====================================================================
# Inversion by minimal polynomial
# =====================================================================

def invert(u: Element) -> Element:
    """Inverse of u in A^{otimes arity}.

    Row-reduces the powers 1, u, u^2, ... until the first linear dependence;
    a zero constant term in that dependence exhibits u as a zero divisor
    (NOT_INVERTIBLE), otherwise the inverse is read off as a polynomial in u.
    """
    A = u.parent
    one_el = A.unit_element(u.arity)
    powers = [one_el]
    ech = TrackedEchelon()
    ech.add(one_el.coords)
    cur = one_el
    bound = A.dim ** u.arity + 1
    for m in range(1, bound + 1):
        cur = cur * u
        if not ech.add(cur.coords):
            combo = ech.coords_of(cur.coords)
            # u^m = sum_j combo[j] u^j  =>  u^m - sum combo = 0
            c0 = combo.get(0)
            if c0 is None or c0.is_zero():
                raise EngineError("NOT_INVERTIBLE", "zero divisor (constant term vanishes)")
            inv_c0 = c0.inv()
            # 1 = (u^m - sum_{j>=1} combo_j u^j) / (-combo_0) ... rearranged:
            # c0 * 1 = u * (u^{m-1} - sum_{j>=1} combo_j u^{j-1})
            out = powers[m - 1]
            for j, c in combo.items():
                if j >= 1:
                    out = out - powers[j - 1].scale(c)
            return out.scale(inv_c0)
        powers.append(cur)
    raise EngineError("NOT_INVERTIBLE", "no dependence found (should be impossible)")


# =====================================================================
# Tensor powers (materialized; small algebras only)
# =====================================================================

def tensor_power(A: StructureAlgebra, k: int) -> StructureAlgebra:
    """The algebra A^{otimes k} on the lexicographic basis
    i_1 * dim^{k-1} + ... + i_k.  Materializes the full table; intended for
    small examples (use Element arithmetic for anything big)."""
    dim = A.dim ** k
    if dim * dim > 1 << 20:
        raise EngineError("BAD_PARAMETER", f"tensor_power({A.dim}^{k}) too large to materialize")

    def flat(t):
        x = 0
        for i in t:
            x = x * A.dim + i
        return x

    tuples = [()]
    for _ in range(k):
        tuples = [t + (i,) for t in tuples for i in range(A.dim)]
    mult = {}
    for tu in tuples:
        for tv in tuples:
            rows = []
            ok = True
            for a, b in zip(tu, tv):
                row = A.row(a, b)
                if not row:
                    ok = False
                    break
                rows.append(row)
            if not ok:
                continue
            partial = [((), A.one)]
            for row in rows:
                partial = [(t + (b,), c * s) for t, c in partial for b, s in row.items()]
            out: dict = {}
            for t, c in partial:
                _acc(out, flat(t), c)
            out = _clean(out)
            if out:
                mult[(flat(tu), flat(tv))] = out
    unit_el = A.unit_element(k)
    unit = {flat(t): c for t, c in unit_el.coords.items()}
    grading = None
    if A.grading is not None:
        grading = [sum(A.grading[i] for i in t) for t in tuples]
    names = None
    if A.basis_names is not None:
        names = ["(x)".join(A.name_of(i) for i in t) for t in tuples]
    return StructureAlgebra(dim, A.level, mult, unit, grading=grading,
                            basis_names=names, name=f"{A.name or 'A'}^(x){k}")


# =====================================================================
# Radical, filtration, associated graded
# =====================================================================

def jacobson_radical(A: StructureAlgebra) -> list:
    """Basis (list of coordinate dicts) of the Jacobson radical.

    Characteristic-zero criterion: J(A) = kernel of the trace form
    (u, v) -> trace(L_{uv}) where L is left multiplication.
    """
    # T[k] = trace of left multiplication by e_k
    T = [A.zero] * A.dim
    for (k, i), row in A.mult.items():
        c = row.get(i)
        if c is not None:
            T[k] = T[k] + c
    rows = []
    for i in range(A.dim):
        r: dict = {}
        for j in range(A.dim):
            row = A.row(i, j)
            s = A.zero
            for k, c in row.items():
                if not T[k].is_zero():
                    s = s + c * T[k]
            if not s.is_zero():
                r[j] = s
        rows.append(r)
    return nullspace(rows, A.dim, A.one)


def _products_span(A, left_basis, right_basis):
    """Echelon of {u*v : u in left, v in right} (coordinate dicts, arity 1)."""
    ech = Echelon()
    basis = []
    for u in left_basis:
        for v in right_basis:
            prod: dict = {}
            for i, cu in u.items():
                for j, cv in v.items():
                    row = A.row(i, j)
                    if row:
                        c = cu * cv
                        for k, d in row.items():
                            _acc(prod, k, c * d)
            prod = _clean(prod)
            if prod and ech.add(prod):
                basis.append(prod)
    return basis


def radical_filtration(A: StructureAlgebra) -> list:
    """Bases of J^0 >= J^1 >= J^2 >= ... down to (and including) 0."""
    full = [{i: A.one} for i in range(A.dim)]
    rad = jacobson_radical(A)
    chain = [full, rad]
    while chain[-1]:
        nxt = _products_span(A, rad, chain[-1])
        if len(nxt) >= len(chain[-1]):
            # no longer strictly decreasing: must have hit a non-nilpotent step
            raise EngineError("BAD_PARAMETER", "radical filtration is not strictly decreasing")
        chain.append(nxt)
    return chain


def associated_graded(A: StructureAlgebra) -> StructureAlgebra:
    """Associated graded algebra of the radical filtration.

    Degree-k part = pivot-chosen complement of J^{k+1} in J^k; products of
    representatives are truncated to their expected degree.  Deterministic.
    """
    chain = radical_filtration(A)
    # complements, chosen by extending the echelon of J^{k+1} with J^k vectors;
    # representatives are rescaled so their leading residual coefficient is 1,
    # which makes the construction deterministic and keeps monomial bases fixed
    new_basis = []  # list of (vector dict, degree)
    for k in range(len(chain) - 1):
        ech = Echelon()
        for v in chain[k + 1]:
            ech.add(v)
        for v in chain[k]:
            r = ech.reduce(v)
            if not r:
                continue
            inv = r[min(r)].inv()
            rep = {key: inv * c for key, c in v.items()}
            ech.add(rep)
            new_basis.append((rep, k))
    assert len(new_basis) == A.dim
    tracked = TrackedEchelon()
    for v, _ in new_basis:
        tracked.add(v)
    degrees = [d for _, d in new_basis]
    mult = {}
    for i, (u, du) in enumerate(new_basis):
        for j, (v, dv) in enumerate(new_basis):
            prod: dict = {}
            for a, cu in u.items():
                for b, cv in v.items():
                    row = A.row(a, b)
                    if row:
                        c = cu * cv
                        for k2, d in row.items():
                            _acc(prod, k2, c * d)
            prod = _clean(prod)
            if not prod:
                continue
            coords = tracked.coords_of(prod)
            assert coords is not None
            keep = {m: c for m, c in coords.items()
                    if degrees[m] == du + dv and not c.is_zero()}
            if keep:
                mult[(i, j)] = keep
    unit_coords = tracked.coords_of(dict(A.unit))
    assert unit_coords is not None
    unit = {m: c for m, c in unit_coords.items() if not c.is_zero()}
    gr = StructureAlgebra(A.dim, A.level, mult, unit, grading=degrees,
                          name=f"gr({A.name or 'A'})")
    gr.gr_representatives = [v for v, _ in new_basis]
    return gr
