"""Quotient CDGAs and their bigraded cohomology, slice by slice.

A :class:`Presentation` is a free graded-commutative algebra (an
:class:`~cdgacalc.algebra.AlgebraContext`) together with a finite list of
homogeneous relations and a degree +1, weight 0 differential given on
generators (zero on the base).  Because the algebra is graded-commutative,
one-sided products relation*monomial span each graded piece of the
two-sided ideal, so no Groebner machinery is needed: the normal form in
every (degree, weight) slice is plain exact linear algebra.

The cohomology of the quotient in one slice is

    dim H^d = dim Q(d,k) - rank D(d,k) - rank D(d-1,k)

with Q the quotient slice and D the induced differential matrix; the
differential preserves the weight k, so slices at different weights never
interact.  Passing ``weight=None`` everywhere computes with whole-degree
slices instead (used to check that the weight splitting is genuine).

All computations are cached per presentation and keyed by (degree,
weight); the cache is lock-guarded so slices may be filled concurrently.
Results are deterministic regardless of scheduling because the reduced
row echelon form and the monomial order are canonical.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .algebra import (AlgebraContext, AlgebraError, AlgebraMap, Element,
                      Monomial)
from .linalg import SparseMatrix, rank_with_modular_prescreen, rref
from .rat import ONE, Rational


class PresentationError(AlgebraError):
    """Malformed presentation: inhomogeneous relation or differential."""


class Presentation:
    """Free context + homogeneous relations + generator differential."""

    __slots__ = ("context", "relations", "differential", "name", "params",
                 "_cache", "_lock")

    def __init__(self, context: AlgebraContext, relations: Sequence[Element],
                 differential: dict[int, Element], name: str = "",
                 params: Optional[dict] = None):
        self.context = context
        self.relations = tuple(relations)
        self.differential = {g: img for g, img in differential.items()
                             if img is not None and not img.is_zero()}
        self.name = name or "presentation"
        self.params = dict(params or {})
        self._cache: dict = {}
        self._lock = threading.Lock()
        for rel in self.relations:
            if rel.is_zero():
                raise PresentationError("zero relation")
            try:
                rel.degree(), rel.weight()
            except AlgebraError:
                raise PresentationError(
                    f"relation not homogeneous: {rel!r}") from None
        for g, img in self.differential.items():
            spec = context.generators[g]
            try:
                d, w = img.degree(), img.weight()
            except AlgebraError:
                raise PresentationError(
                    f"d({spec.label}) not degree- and weight-homogeneous; "
                    "malformed presentation") from None
            if d != spec.degree + 1:
                raise PresentationError(
                    f"d({spec.label}) has degree {d}, expected "
                    f"{spec.degree + 1}")
            if w != spec.weight:
                raise PresentationError(
                    f"d not weight-homogeneous on {spec.label}: image has "
                    f"weight {w}, generator has weight {spec.weight}")

    # -- caching ------------------------------------------------------------

    def _cached(self, key, builder: Callable):
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        value = builder()
        with self._lock:
            return self._cache.setdefault(key, value)

    # -- differential -------------------------------------------------------

    def differential_of(self, e: Element) -> Element:
        """Leibniz extension of the generator differential (d = 0 on base)."""
        ctx = self.context
        if e.context is not ctx:
            raise AlgebraError("context mismatch: element not in this "
                               "presentation's algebra")
        gdeg = ctx.gen_degrees
        acc: dict[Monomial, object] = {}
        ngen = len(ctx.generators)
        for m, c in e.terms.items():
            sign_par = ctx.base.degrees[m.base] % 2
            for i in range(ngen):
                exp = m.exps[i]
                if exp:
                    dg = self.differential.get(i)
                    if dg is not None:
                        prefix = Monomial(m.base, tuple(
                            m.exps[j] if j < i else 0 for j in range(ngen)))
                        suffix = Monomial(ctx.base.unit, tuple(
                            exp - 1 if j == i else (m.exps[j] if j > i else 0)
                            for j in range(ngen)))
                        coeff = Rational(exp) * c
                        if sign_par:
                            coeff = -coeff
                        step: dict[Monomial, object] = {}
                        for mg, cg in dg.terms.items():
                            ctx.mul_term_into(step, prefix, coeff, mg, cg)
                        for m1, c1 in step.items():
                            ctx.mul_term_into(acc, m1, c1, suffix, ONE)
                    sign_par ^= (exp * gdeg[i]) & 1
        return Element(ctx, {m: v for m, v in acc.items() if v})


@dataclass(frozen=True)
class SliceBasis:
    """Monomial basis of one (degree, weight) slice of the quotient.

    ``quotient`` lists the free monomials surviving as a basis (the
    non-pivot columns of the rref of the ideal slice); ``rewrite`` is the
    normal-form projector sending each pivot monomial to its expansion in
    surviving monomials.
    """

    degree: int
    weight: Optional[int]
    free_monomials: tuple[Monomial, ...]
    pivots: tuple[int, ...]
    quotient: tuple[Monomial, ...]
    rewrite: dict
    index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.quotient)

    def reduce(self, terms: dict) -> dict:
        """Normal form of a free-slice element, as Monomial -> Q."""
        out: dict[Monomial, object] = {}
        for m, c in terms.items():
            if not c:
                continue
            rw = self.rewrite.get(m)
            if rw is None:
                if m not in self.index:
                    raise AlgebraError(
                        f"monomial outside slice (degree {self.degree}, "
                        f"weight {self.weight})")
                v = out.get(m)
                v = c if v is None else v + c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
            else:
                for m2, c2 in rw.items():
                    v = out.get(m2)
                    v = c * c2 if v is None else v + c * c2
                    if v:
                        out[m2] = v
                    else:
                        out.pop(m2, None)
        return out

    def coords(self, terms: dict) -> dict[int, object]:
        """Normal form in coordinates of the quotient basis."""
        reduced = self.reduce(terms)
        return {self.index[m]: c for m, c in reduced.items()}


def ideal_slice(p: Presentation, degree: int,
                weight: Optional[int] = None) -> SparseMatrix:
    """Matrix whose rows span the (degree, weight) piece of the ideal.

    Rows are the products relation * monomial over all relations and all
    free monomials of complementary degree (and weight), expressed in the
    canonical monomial basis of the slice.
    """
    if degree < 0:
        raise AlgebraError("ideal_slice: degree must be >= 0")

    def build():
        ctx = p.context
        cols = ctx.monomials_of(degree, weight)
        colmap = {m: i for i, m in enumerate(cols)}
        rows: list[dict[int, object]] = []
        for rel in p.relations:
            rd, rw = rel.degree(), rel.weight()
            md = degree - rd
            if md < 0:
                continue
            if weight is None:
                mons = ctx.monomials_of(md)
            else:
                mw = weight - rw
                if mw < 0:
                    continue
                mons = ctx.monomials_of(md, mw)
            for mono in mons:
                acc: dict[Monomial, object] = {}
                for mr, cr in rel.terms.items():
                    ctx.mul_term_into(acc, mr, cr, mono, ONE)
                row = {colmap[m]: c for m, c in acc.items() if c}
                if row:
                    rows.append(row)
        return SparseMatrix.from_rows(len(rows), len(cols), rows)

    return p._cached(("ideal", degree, weight), build)


def quotient_slice(p: Presentation, degree: int,
                   weight: Optional[int] = None) -> SliceBasis:
    """Deterministic basis + projector for one slice of the quotient."""

    def build():
        ctx = p.context
        free = ctx.monomials_of(degree, weight)
        res = rref(ideal_slice(p, degree, weight))
        pivot_set = set(res.pivots)
        quotient = tuple(m for i, m in enumerate(free) if i not in pivot_set)
        rewrite: dict[Monomial, dict[Monomial, object]] = {}
        for ri, pcol in enumerate(res.pivots):
            row = res.reduced.rows[ri]
            rewrite[free[pcol]] = {free[c]: -v for c, v in row.items()
                                   if c != pcol}
        index = {m: i for i, m in enumerate(quotient)}
        return SliceBasis(degree, weight, free, res.pivots, quotient,
                          rewrite, index)

    return p._cached(("slice", degree, weight), build)


def differential_matrix(p: Presentation, degree: int,
                        weight: Optional[int] = None) -> SparseMatrix:
    """Matrix of d from slice (degree, weight) to (degree+1, weight).

    Row i holds the coordinates of d(basis monomial i) in the target
    quotient basis.
    """

    def build():
        src = quotient_slice(p, degree, weight)
        tgt = quotient_slice(p, degree + 1, weight)
        mat = SparseMatrix(src.dim, tgt.dim)
        if tgt.dim:
            ctx = p.context
            for i, mono in enumerate(src.quotient):
                dm = p.differential_of(Element(ctx, {mono: ONE}))
                if dm.terms:
                    mat.rows[i] = tgt.coords(dm.terms)
        return mat

    return p._cached(("diff", degree, weight), build)


def differential_rank(p: Presentation, degree: int,
                      weight: Optional[int] = None) -> int:
    def build():
        src = quotient_slice(p, degree, weight)
        if src.dim == 0 or quotient_slice(p, degree + 1, weight).dim == 0:
            return 0
        return rank_with_modular_prescreen(differential_matrix(p, degree, weight))

    return p._cached(("rank", degree, weight), build)


def map_matrix(p: Presentation, phi: AlgebraMap, degree: int,
               weight: Optional[int] = None) -> SparseMatrix:
    """Matrix of a degree/weight-preserving algebra map on one slice."""
    src = quotient_slice(p, degree, weight)
    mat = SparseMatrix(src.dim, src.dim)
    ctx = p.context
    for i, mono in enumerate(src.quotient):
        img = phi.apply(Element(ctx, {mono: ONE}))
        mat.rows[i] = src.coords(img.terms)
    return mat


class CohomologyTable:
    """dim Gr_k^W H^i as a map (degree, weight) -> nonnegative integer.

    ``weight`` is None throughout when computed without the weight
    refinement.  Only the computed range [0, max_degree] is recorded;
    higher degrees are simply absent rather than guessed to be zero.
    """

    def __init__(self, entries: dict, max_degree: int, by_weight: bool,
                 model: dict):
        self.entries = {k: v for k, v in entries.items() if v}
        self.max_degree = max_degree
        self.by_weight = by_weight
        self.model = dict(model)

    def dim(self, degree: int, weight: Optional[int] = None) -> int:
        if weight is not None:
            return self.entries.get((degree, weight), 0)
        return sum(v for (d, _), v in self.entries.items() if d == degree)

    def dims(self) -> list[int]:
        return [self.dim(i) for i in range(self.max_degree + 1)]

    def weights_at(self, degree: int) -> list[int]:
        return sorted(k for (d, k) in self.entries
                      if d == degree and k is not None)

    def rows(self) -> list[tuple[int, Optional[int], int]]:
        order = lambda t: (t[0], -1 if t[1] is None else t[1])
        return [(d, k, self.entries[(d, k)])
                for (d, k) in sorted(self.entries, key=order)]

    def __eq__(self, other):
        return (isinstance(other, CohomologyTable)
                and self.entries == other.entries
                and self.max_degree == other.max_degree)

    def __repr__(self):
        return (f"CohomologyTable({self.model.get('name', '?')}, "
                f"dims={self.dims()})")


def _slice_weights(p: Presentation, degree: int) -> list[int]:
    ctx = p.context
    return sorted({ctx.monomial_weight(m) for m in ctx.monomials_of(degree)})


def cohomology(p: Presentation, max_degree: int, by_weight: bool = True,
               threads: int = 1) -> CohomologyTable:
    """Bigraded cohomology dimensions of the quotient CDGA up to max_degree.

    With ``by_weight`` the computation runs one weight at a time (the
    differential preserves weights); otherwise whole-degree slices are
    used and entries carry weight None.
    """
    if max_degree < 0:
        raise AlgebraError("cohomology: max_degree must be >= 0")
    keys: list[tuple[int, Optional[int]]] = []
    for d in range(max_degree + 1):
        if by_weight:
            keys.extend((d, k) for k in _slice_weights(p, d))
        else:
            keys.append((d, None))

    def task(key):
        d, k = key
        q = quotient_slice(p, d, k).dim
        if q == 0:
            return key, 0
        r_out = differential_rank(p, d, k)
        r_in = differential_rank(p, d - 1, k) if d > 0 else 0
        return key, q - r_out - r_in

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = dict(pool.map(task, keys))
    else:
        results = dict(map(task, keys))
    entries = {key: results[key] for key in keys if results[key]}
    model = {"name": p.name, **p.params}
    return CohomologyTable(entries, max_degree, by_weight, model)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the d^2 = 0 and d(ideal) <= ideal checks."""

    ok: bool
    slices_checked: int
    failure_kind: Optional[str] = None
    degree: Optional[int] = None
    weight: Optional[int] = None
    witness: Optional[str] = None
    detail: Optional[str] = None

    def message(self) -> str:
        if self.ok:
            return (f"ok: d^2 = 0 and d(ideal) in ideal on "
                    f"{self.slices_checked} slices")
        return (f"FAIL[{self.failure_kind}] at degree {self.degree}, "
                f"weight {self.weight}: witness {self.witness}; "
                f"{self.detail}")


def verify_d_squared(p: Presentation, max_degree: int,
                     by_weight: bool = True) -> VerificationReport:
    """Well-definedness check of the quotient CDGA.

    Asserts that d of every relation reduces to zero (so d descends to
    the quotient) and that the induced differential squares to zero on
    every quotient slice with source degree <= max_degree.  Failures are
    reported, not raised; the first failing slice and a witness element
    are returned.
    """
    checked = 0
    ctx = p.context
    for rel in p.relations:
        drel = p.differential_of(rel)
        if drel.is_zero():
            checked += 1
            continue
        d, w = drel.degree(), drel.weight()
        sl = quotient_slice(p, d, w if by_weight else None)
        residual = sl.reduce(drel.terms)
        checked += 1
        if residual:
            witness = repr(rel)
            detail = "d(relation) not in ideal: " + repr(
                Element(ctx, residual))
            return VerificationReport(False, checked, "relation", d, w,
                                      witness, detail)
    for d in range(max_degree + 1):
        weights = _slice_weights(p, d) if by_weight else [None]
        for k in weights:
            src = quotient_slice(p, d, k)
            if src.dim == 0:
                continue
            first = differential_matrix(p, d, k)
            second = differential_matrix(p, d + 1, k)
            checked += 1
            prod = first.matmul(second)
            if not prod.is_zero():
                bad = next(i for i, row in enumerate(prod.rows) if row)
                witness = ctx.monomial_label(src.quotient[bad])
                mid = quotient_slice(p, d + 2, k)
                residual = Element(ctx, {
                    mid.quotient[j]: c for j, c in prod.rows[bad].items()})
                return VerificationReport(False, checked, "d_squared", d, k,
                                          witness,
                                          f"d(d(m)) = {residual!r}")
    return VerificationReport(True, checked)
