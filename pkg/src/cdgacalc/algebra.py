"""Graded-commutative algebras of the shape ``B (x) Sym_gr(generators)``.

``B`` is a finite-dimensional graded-commutative algebra over Q given by
structure constants on an ordered basis, carrying a second (weight)
grading and a nondegenerate Poincare pairing into its top degree.  On top
of ``B`` sits a free graded-commutative algebra on finitely many
generators of positive degree: odd-degree generators are exterior
(square zero), even-degree ones polynomial.

Monomials are pairs (base-basis index, generator exponent vector); every
element is a finite Q-linear combination of monomials.  Products follow
the Koszul rule: transposing homogeneous factors u, v costs
``(-1)^{|u||v|}``.  The canonical monomial order (generator-degree, then
exponent vector, then base index) is fixed here once and relied on by
every other module for determinism.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .linalg import SparseMatrix, rref
from .rat import ONE, Rational, rat_from_str, rat_to_str


class AlgebraError(ValueError):
    """A violated algebra law or an ill-formed construction."""


# ---------------------------------------------------------------------------
# Base algebras
# ---------------------------------------------------------------------------

class BaseAlgebra:
    """Finite-dimensional graded-commutative algebra with Poincare pairing.

    The basis is ordered; products are stored as sparse structure
    constants ``basis_i * basis_j = sum_k c^k_{ij} basis_k``.  Weights
    default to degrees (the pure case).  Instances are immutable after
    construction and validated against all algebra laws unless
    ``validate=False`` (used internally for algebras correct by
    construction whose checks were already paid for elsewhere).
    """

    __slots__ = ("name", "n", "labels", "degrees", "weights", "unit",
                 "fundamental", "table", "dim", "_by_degree",
                 "_by_deg_weight", "_label_index")

    def __init__(self, name: str, n: int, labels: Sequence[str],
                 degrees: Sequence[int], unit: int, fundamental: int,
                 table: dict, weights: Optional[Sequence[int]] = None,
                 validate: bool = True):
        self.name = name
        self.n = n
        self.labels = tuple(labels)
        self.degrees = tuple(int(d) for d in degrees)
        self.weights = (tuple(int(w) for w in weights) if weights is not None
                        else self.degrees)
        self.unit = unit
        self.fundamental = fundamental
        self.dim = len(self.labels)
        # normalize the table: drop zero coefficients and empty products
        tbl: dict[tuple[int, int], dict[int, object]] = {}
        for (i, j), prod in table.items():
            clean = {k: Rational(c) for k, c in prod.items() if c}
            if clean:
                tbl[(i, j)] = clean
        self.table = tbl
        self._by_degree: dict[int, tuple[int, ...]] = {}
        self._by_deg_weight: dict[tuple[int, int], tuple[int, ...]] = {}
        for idx, d in enumerate(self.degrees):
            self._by_degree.setdefault(d, ())
            self._by_degree[d] += (idx,)
            key = (d, self.weights[idx])
            self._by_deg_weight.setdefault(key, ())
            self._by_deg_weight[key] += (idx,)
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._label_index) != self.dim:
            raise AlgebraError("duplicate basis labels")
        if validate:
            self.validate()

    # -- lookups ---------------------------------------------------------

    def product(self, i: int, j: int) -> dict[int, object]:
        return self.table.get((i, j), {})

    def index_of(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise AlgebraError(f"unknown basis label {label!r}") from None

    def basis_of_degree(self, d: int, weight: Optional[int] = None):
        if weight is None:
            return self._by_degree.get(d, ())
        return self._by_deg_weight.get((d, weight), ())

    def betti(self, i: int) -> int:
        return len(self._by_degree.get(i, ()))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d for d in self.degrees)

    def positive_degree_indices(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.degrees) if d > 0)

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        """Check every algebra law; raise naming the first violated one."""
        deg, wt, lab = self.degrees, self.weights, self.labels
        if not (0 <= self.unit < self.dim):
            raise AlgebraError("unit label: not a basis element")
        if not (0 <= self.fundamental < self.dim):
            raise AlgebraError("fundamental label: not a basis element")
        if deg[self.unit] != 0:
            raise AlgebraError(f"unit degree: {lab[self.unit]} has degree "
                               f"{deg[self.unit]}, expected 0")
        if deg[self.fundamental] != 2 * self.n:
            raise AlgebraError(
                f"fundamental class degree: {lab[self.fundamental]} has "
                f"degree {deg[self.fundamental]}, expected {2 * self.n}")
        if any(d < 0 for d in deg) or any(w < 0 for w in wt):
            raise AlgebraError("degree positivity: negative degree or weight")
        for i in range(self.dim):
            if self.product(self.unit, i) != {i: ONE} \
                    or self.product(i, self.unit) != {i: ONE}:
                raise AlgebraError(f"unit law: 1*{lab[i]} or {lab[i]}*1 "
                                   f"is not {lab[i]}")
        for (i, j), prod in self.table.items():
            for k in prod:
                if deg[k] != deg[i] + deg[j]:
                    raise AlgebraError(
                        f"degree additivity: {lab[i]}*{lab[j]} hits "
                        f"{lab[k]} of degree {deg[k]} != {deg[i]}+{deg[j]}")
                if wt[k] != wt[i] + wt[j]:
                    raise AlgebraError(
                        f"weight additivity: {lab[i]}*{lab[j]} hits "
                        f"{lab[k]} of weight {wt[k]} != {wt[i]}+{wt[j]}")
        for i in range(self.dim):
            for j in range(i, self.dim):
                sign = -ONE if (deg[i] % 2 and deg[j] % 2) else ONE
                forward = self.product(i, j)
                back = {k: sign * c for k, c in self.product(j, i).items()}
                if forward != back:
                    raise AlgebraError(
                        f"graded commutativity: {lab[i]}*{lab[j]} != "
                        f"(-1)^(|{lab[i]}||{lab[j]}|) {lab[j]}*{lab[i]}")
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.product(i, j)
                for k in range(self.dim):
                    left: dict[int, object] = {}
                    for m, c in ij.items():
                        for t, c2 in self.product(m, k).items():
                            left[t] = left.get(t, Rational(0)) + c * c2
                    right: dict[int, object] = {}
                    for m, c in self.product(j, k).items():
                        for t, c2 in self.product(i, m).items():
                            right[t] = right.get(t, Rational(0)) + c * c2
                    left = {t: c for t, c in left.items() if c}
                    right = {t: c for t, c in right.items() if c}
                    if left != right:
                        raise AlgebraError(
                            f"associativity: ({lab[i]}*{lab[j]})*{lab[k]} "
                            f"!= {lab[i]}*({lab[j]}*{lab[k]})")
        self._validate_pairing()

    def _validate_pairing(self) -> None:
        top = self.fundamental
        for d in sorted(set(self.degrees)):
            rows_idx = self.basis_of_degree(d)
            cols_idx = self.basis_of_degree(2 * self.n - d)
            if len(rows_idx) != len(cols_idx):
                raise AlgebraError(
                    f"Poincaré pairing nondegeneracy: degree block "
                    f"({d}, {2 * self.n - d}) has sizes "
                    f"{len(rows_idx)} != {len(cols_idx)}")
            mat = SparseMatrix(len(rows_idx), len(cols_idx))
            for a, i in enumerate(rows_idx):
                for b, j in enumerate(cols_idx):
                    c = self.product(i, j).get(top)
                    if c:
                        mat.rows[a][b] = c
            if rref(mat).rank != len(rows_idx):
                raise AlgebraError(
                    f"Poincaré pairing nondegeneracy: singular pairing on "
                    f"degree block ({d}, {2 * self.n - d})")

    def __repr__(self):
        return f"BaseAlgebra({self.name!r}, n={self.n}, dim={self.dim})"


class TensorAlgebra(BaseAlgebra):
    """Tensor product of base algebras, with factor bookkeeping.

    Basis elements are tuples of factor basis elements (encoded row-major
    into a flat index); structure constants carry the Koszul signs of the
    interleaving.  ``pullback`` implements the algebra map induced by
    projecting onto one factor.
    """

    __slots__ = ("factors", "_strides")

    def __init__(self, factors: Sequence[BaseAlgebra], name=None,
                 validate=True):
        factors = tuple(factors)
        dims = [f.dim for f in factors]
        strides = [1] * len(factors)
        for i in range(len(factors) - 2, -1, -1):
            strides[i] = strides[i + 1] * dims[i + 1]
        self.factors = factors
        self._strides = tuple(strides)

        combos = [()]
        for f in factors:
            combos = [c + (i,) for c in combos for i in range(f.dim)]
        labels = ["⊗".join(f.labels[c[i]] for i, f in enumerate(factors))
                  for c in combos]
        degrees = [sum(f.degrees[c[i]] for i, f in enumerate(factors))
                   for c in combos]
        weights = [sum(f.weights[c[i]] for i, f in enumerate(factors))
                   for c in combos]
        table: dict[tuple[int, int], dict[int, object]] = {}
        for u in combos:
            for v in combos:
                prod = self._slotwise_product(u, v)
                if prod:
                    table[(self._enc(u), self._enc(v))] = prod
        unit = self._enc(tuple(f.unit for f in factors))
        fund = self._enc(tuple(f.fundamental for f in factors))
        super().__init__(
            name or "⊗".join(f.name for f in factors),
            sum(f.n for f in factors), labels, degrees, unit, fund, table,
            weights=weights, validate=validate)

    def _enc(self, combo: tuple[int, ...]) -> int:
        return sum(c * s for c, s in zip(combo, self._strides))

    def encode(self, combo: Sequence[int]) -> int:
        return self._enc(tuple(combo))

    def decode(self, idx: int) -> tuple[int, ...]:
        out = []
        for s, f in zip(self._strides, self.factors):
            out.append(idx // s % f.dim)
        return tuple(out)

    def _slotwise_product(self, u, v) -> dict[int, object]:
        # Koszul sign: each v_i moves left past u_j for all j > i.
        sign_exp = 0
        for i in range(len(u)):
            vp = self.factors[i].degrees[v[i]] % 2
            if vp:
                sign_exp += sum(self.factors[j].degrees[u[j]] % 2
                                for j in range(i + 1, len(u)))
        coeff = -ONE if sign_exp % 2 else ONE
        acc: list[tuple[tuple[int, ...], object]] = [((), coeff)]
        for i, f in enumerate(self.factors):
            prod = f.product(u[i], v[i])
            if not prod:
                return {}
            acc = [(partial + (k,), c * c2)
                   for partial, c in acc for k, c2 in prod.items()]
        out: dict[int, object] = {}
        for combo, c in acc:
            k = self._enc(combo)
            out[k] = out.get(k, Rational(0)) + c
        return {k: c for k, c in out.items() if c}

    def pullback(self, slot: int, coeffs: dict[int, object]) -> dict[int, object]:
        """Embed a factor element into the tensor algebra (units elsewhere)."""
        out: dict[int, object] = {}
        units = [f.unit for f in self.factors]
        for idx, c in coeffs.items():
            combo = list(units)
            combo[slot] = idx
            out[self._enc(tuple(combo))] = Rational(c)
        return {k: c for k, c in out.items() if c}


def tensor_many(factors: Sequence[BaseAlgebra], name: Optional[str] = None,
                validate: bool = True) -> TensorAlgebra:
    if not factors:
        raise AlgebraError("tensor product needs at least one factor")
    return TensorAlgebra(factors, name=name, validate=validate)


def tensor_power(base: BaseAlgebra, r: int, validate: bool = True) -> TensorAlgebra:
    """r-fold tensor power with Koszul signs (Kunneth model of X^r)."""
    if r < 1:
        raise AlgebraError("tensor power needs r >= 1")
    return tensor_many([base] * r, name=f"{base.name}^⊗{r}",
                       validate=validate)


# ---------------------------------------------------------------------------
# Free generators over a base
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    """A free graded-commutative generator; odd degree means exterior."""
    label: str
    degree: int
    weight: int

    def __post_init__(self):
        if self.degree < 1:
            raise AlgebraError(
                f"generator {self.label!r} has degree {self.degree}; "
                "generators must have degree >= 1 so slices stay finite")
        if self.weight < 0:
            raise AlgebraError(f"generator {self.label!r} has negative weight")

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class Monomial(NamedTuple):
    """Base basis element times a generator exponent vector."""
    base: int
    exps: tuple[int, ...]


class AlgebraContext:
    """``base (x) Sym_gr(generators)``: the ambient free algebra.

    Immutable after construction; monomial enumeration is cached per
    (degree, weight) behind a lock so contexts can be shared across
    threads.
    """

    __slots__ = ("base", "generators", "gen_degrees", "gen_weights",
                 "gen_parities", "_label_index", "_mono_cache", "_lock")

    def __init__(self, base: BaseAlgebra, generators: Sequence[GeneratorSpec]):
        self.base = base
        self.generators = tuple(generators)
        self.gen_degrees = tuple(g.degree for g in self.generators)
        self.gen_weights = tuple(g.weight for g in self.generators)
        self.gen_parities = tuple(d % 2 for d in self.gen_degrees)
        self._label_index = {g.label: i for i, g in enumerate(self.generators)}
        if len(self._label_index) != len(self.generators):
            raise AlgebraError("duplicate generator labels")
        self._mono_cache: dict = {}
        self._lock = threading.Lock()

    # -- basic constructors ----------------------------------------------

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return self.base_element({self.base.unit: ONE})

    def monomial(self, base_idx: int, exps: Optional[Sequence[int]] = None) -> Monomial:
        if exps is None:
            exps = (0,) * len(self.generators)
        return Monomial(base_idx, tuple(exps))

    def base_element(self, coeffs: dict[int, object]) -> "Element":
        zero_exps = (0,) * len(self.generators)
        return Element(self, {Monomial(i, zero_exps): Rational(c)
                              for i, c in coeffs.items() if c})

    def gen_element(self, gen: int | str) -> "Element":
        if isinstance(gen, str):
            gen = self.gen_index(gen)
        exps = [0] * len(self.generators)
        exps[gen] = 1
        return Element(self, {Monomial(self.base.unit, tuple(exps)): ONE})

    def gen_index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise AlgebraError(f"unknown generator label {label!r}") from None

    def element(self, terms: dict[Monomial, object]) -> "Element":
        return Element(self, {m: Rational(c) for m, c in terms.items() if c})

    # -- grading ----------------------------------------------------------

    def monomial_degree(self, m: Monomial) -> int:
        return self.base.degrees[m.base] + sum(
            e * d for e, d in zip(m.exps, self.gen_degrees))

    def monomial_weight(self, m: Monomial) -> int:
        return self.base.weights[m.base] + sum(
            e * w for e, w in zip(m.exps, self.gen_weights))

    def monomial_key(self, m: Monomial):
        """Canonical order: generator-part degree, exponents, base index."""
        gdeg = sum(e * d for e, d in zip(m.exps, self.gen_degrees))
        return (gdeg, m.exps, m.base)

    def monomial_label(self, m: Monomial) -> str:
        parts = []
        if m.base != self.base.unit or not any(m.exps):
            parts.append(self.base.labels[m.base])
        for g, e in zip(self.generators, m.exps):
            if e == 1:
                parts.append(g.label)
            elif e > 1:
                parts.append(f"{g.label}^{e}")
        return "·".join(parts)

    # -- multiplication ----------------------------------------------------

    def mul_term_into(self, acc: dict, m1: Monomial, c1, m2: Monomial, c2) -> None:
        """Accumulate ``(c1 m1) * (c2 m2)`` into ``acc`` (dict Monomial->Q)."""
        e1, e2 = m1.exps, m2.exps
        par = self.gen_parities
        exps = []
        for i, (a, b) in enumerate(zip(e1, e2)):
            s = a + b
            if s > 1 and par[i]:
                return
            exps.append(s)
        # Koszul sign of merging the two generator words ...
        sign = 0
        suffix = 0
        for i in range(len(par) - 1, -1, -1):
            if e2[i] and par[i] and (e2[i] % 2):
                sign += suffix
            if e1[i] and par[i]:
                suffix += e1[i]
        # ... plus the base part of m2 moving past the generators of m1.
        if self.base.degrees[m2.base] % 2:
            sign += suffix
        coeff = c1 * c2
        if sign % 2:
            coeff = -coeff
        exps_t = tuple(exps)
        for k, cb in self.base.product(m1.base, m2.base).items():
            mono = Monomial(k, exps_t)
            v = acc.get(mono)
            v = coeff * cb if v is None else v + coeff * cb
            if v:
                acc[mono] = v
            else:
                acc.pop(mono, None)

    # -- monomial bases -----------------------------------------------------

    def monomials_of(self, degree: int, weight: Optional[int] = None
                     ) -> tuple[Monomial, ...]:
        """All monomials of the given degree (and weight), canonical order.

        The list is complete and duplicate-free; it is finite because
        every generator has degree >= 1.
        """
        if degree < 0:
            raise AlgebraError("monomials_of: degree must be >= 0")
        key = (degree, weight)
        with self._lock:
            cached = self._mono_cache.get(key)
        if cached is not None:
            return cached
        ngen = len(self.generators)
        out: list[Monomial] = []
        exps = [0] * ngen

        def descend(i: int, rem_deg: int, rem_wt):
            if i == ngen:
                basis = (self.base.basis_of_degree(rem_deg) if rem_wt is None
                         else self.base.basis_of_degree(rem_deg, rem_wt))
                tail = tuple(exps)
                for b in basis:
                    out.append(Monomial(b, tail))
                return
            d, w = self.gen_degrees[i], self.gen_weights[i]
            top = rem_deg // d if (self.gen_parities[i] == 0) else min(1, rem_deg // d)
            for e in range(top + 1):
                exps[i] = e
                nw = rem_wt - e * w if rem_wt is not None else None
                if nw is not None and nw < 0:
                    break
                descend(i + 1, rem_deg - e * d, nw)
            exps[i] = 0

        descend(0, degree, weight)
        result = tuple(sorted(out, key=self.monomial_key))
        with self._lock:
            self._mono_cache[key] = result
        return result

    def __repr__(self):
        gens = ",".join(g.label for g in self.generators)
        return f"AlgebraContext({self.base.name}; [{gens}])"


class Element:
    """Finite Q-linear combination of monomials in one context."""

    __slots__ = ("context", "terms")

    def __init__(self, context: AlgebraContext, terms: dict[Monomial, object]):
        self.context = context
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Element") -> None:
        if self.context is not other.context:
            raise AlgebraError("context mismatch: elements live in "
                               "different algebras")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Element(self.context, out)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.context, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "Element":
        c = Rational(c)
        if not c:
            return Element(self.context, {})
        return Element(self.context, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        acc: dict[Monomial, object] = {}
        ctx = self.context
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                ctx.mul_term_into(acc, m1, c1, m2, c2)
        return Element(ctx, acc)

    def __rmul__(self, other):
        return self.scale(other)

    def degree(self) -> Optional[int]:
        """Common degree of all terms; raises if inhomogeneous."""
        degs = {self.context.monomial_degree(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError(f"inhomogeneous element (degrees {sorted(degs)})")
        return degs.pop()

    def weight(self) -> Optional[int]:
        wts = {self.context.monomial_weight(m) for m in self.terms}
        if not wts:
            return None
        if len(wts) > 1:
            raise AlgebraError(f"inhomogeneous element (weights {sorted(wts)})")
        return wts.pop()

    def is_homogeneous(self) -> bool:
        try:
            self.degree()
            self.weight()
            return True
        except AlgebraError:
            return False

    def __eq__(self, other):
        return (isinstance(other, Element) and self.context is other.context
                and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        ctx = self.context
        bits = []
        for m in sorted(self.terms, key=ctx.monomial_key):
            c = self.terms[m]
            lab = ctx.monomial_label(m)
            bits.append(f"{rat_to_str(c)}·{lab}" if c != 1 else lab)
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# Generator-defined homomorphisms
# ---------------------------------------------------------------------------

class AlgebraMap:
    """Endomorphism defined on the base basis and on generators.

    Extends multiplicatively with Koszul signs: a monomial maps to the
    ordered product of the images of its factors.  Images must be
    homogeneous of the same (degree, weight) as their source; the
    homomorphism property on the base can be verified on demand.
    """

    __slots__ = ("context", "base_images", "gen_images")

    def __init__(self, context: AlgebraContext,
                 gen_images: dict[int, Element],
                 base_images: Optional[dict[int, Element]] = None):
        self.context = context
        self.gen_images = dict(gen_images)
        self.base_images = dict(base_images) if base_images is not None else None
        for g, img in self.gen_images.items():
            spec = context.generators[g]
            if img.is_zero():
                continue
            try:
                d, w = img.degree(), img.weight()
            except AlgebraError:
                raise AlgebraError(
                    f"non-homogeneous image for generator {spec.label}")
            if d != spec.degree or w != spec.weight:
                raise AlgebraError(
                    f"non-homogeneous image: generator {spec.label} of "
                    f"(degree,weight)=({spec.degree},{spec.weight}) mapped "
                    f"to ({d},{w})")
        if self.base_images is not None:
            for b, img in self.base_images.items():
                if img.is_zero():
                    continue
                d = img.degree()
                w = img.weight()
                if d != context.base.degrees[b] or w != context.base.weights[b]:
                    raise AlgebraError(
                        f"non-homogeneous image for base element "
                        f"{context.base.labels[b]}")

    def apply_base(self, idx: int) -> Element:
        if self.base_images is None:
            return self.context.base_element({idx: ONE})
        img = self.base_images.get(idx)
        if img is None:
            return self.context.base_element({idx: ONE})
        return img

    def apply_gen(self, g: int) -> Element:
        img = self.gen_images.get(g)
        if img is None:
            return self.context.gen_element(g)
        return img

    def apply(self, e: Element) -> Element:
        if e.context is not self.context:
            raise AlgebraError("context mismatch: element not in this algebra")
        ctx = self.context
        out = ctx.zero()
        for m, c in e.terms.items():
            img = self.apply_base(m.base).scale(c)
            for g, exp in enumerate(m.exps):
                if not exp:
                    continue
                gimg = self.apply_gen(g)
                for _ in range(exp):
                    img = img * gimg
                    if img.is_zero():
                        break
                if img.is_zero():
                    break
            out = out + img
        return out

    def verify_multiplicative(self) -> None:
        """Check phi(b_i b_j) == phi(b_i) phi(b_j) on all base pairs."""
        ctx = self.context
        base = ctx.base
        for i in range(base.dim):
            fi = self.apply_base(i)
            for j in range(base.dim):
                lhs = ctx.base_element(dict(base.product(i, j)))
                lhs = self.apply(lhs)
                rhs = fi * self.apply_base(j)
                if lhs != rhs:
                    raise AlgebraError(
                        f"homomorphism property fails on base pair "
                        f"({base.labels[i]}, {base.labels[j]})")


def apply_homomorphism(gen_images: dict[int, Element],
                       base_images: Optional[dict[int, Element]],
                       e: Element) -> Element:
    """One-shot multiplicative extension of a generator-defined map."""
    return AlgebraMap(e.context, gen_images, base_images).apply(e)


# ---------------------------------------------------------------------------
# Textual base-algebra format
# ---------------------------------------------------------------------------

def base_algebra_from_dict(data: dict) -> BaseAlgebra:
    """Build a BaseAlgebra from the JSON document structure.

    Required fields: ``name``, ``n``, ``basis`` (list of objects with
    ``label``, ``degree`` and optional ``weight``), ``unit``,
    ``fundamental``, ``products`` (list of {left, right, value} with
    value a list of [label, "p/q"] pairs).  Omitted products default to
    zero, except that products with the unit are implied and a product
    stated in only one order is completed by graded commutativity.  All
    algebra laws are then validated; the first violated law is named in
    the raised error.
    """
    try:
        name = str(data["name"])
        n = int(data["n"])
        basis = data["basis"]
        unit_label = str(data["unit"])
        fund_label = str(data["fundamental"])
    except KeyError as missing:
        raise AlgebraError(f"missing field {missing.args[0]!r}") from None
    labels, degrees, weights = [], [], []
    for entry in basis:
        labels.append(str(entry["label"]))
        degrees.append(int(entry["degree"]))
        weights.append(int(entry.get("weight", entry["degree"])))
    index = {lab: i for i, lab in enumerate(labels)}
    if len(index) != len(labels):
        raise AlgebraError("duplicate basis labels")
    if unit_label not in index:
        raise AlgebraError(f"unit label: {unit_label!r} is not a basis element")
    if fund_label not in index:
        raise AlgebraError(
            f"fundamental label: {fund_label!r} is not a basis element")
    unit = index[unit_label]
    fund = index[fund_label]

    table: dict[tuple[int, int], dict[int, object]] = {}
    stated: set[tuple[int, int]] = set()
    for entry in data.get("products", []):
        if isinstance(entry, dict):
            left, right, val = entry["left"], entry["right"], entry["value"]
        else:  # triple form [left, right, [[label, "p/q"], ...]]
            left, right, val = entry
        i = index.get(str(left))
        j = index.get(str(right))
        if i is None or j is None:
            raise AlgebraError(
                f"product references unknown label {left!r} or {right!r}")
        value: dict[int, object] = {}
        for lab, coeff in val:
            k = index.get(str(lab))
            if k is None:
                raise AlgebraError(f"product value references unknown "
                                   f"label {lab!r}")
            value[k] = value.get(k, Rational(0)) + rat_from_str(str(coeff))
        table[(i, j)] = {k: c for k, c in value.items() if c}
        stated.add((i, j))
    # implied products: unit action, then graded-commutative mirrors
    for i in range(len(labels)):
        if (unit, i) not in stated:
            table[(unit, i)] = {i: ONE}
        if (i, unit) not in stated:
            table[(i, unit)] = {i: ONE}
    for (i, j) in list(stated):
        if (j, i) not in stated and (j, i) not in table:
            sign = -ONE if (degrees[i] % 2 and degrees[j] % 2) else ONE
            table[(j, i)] = {k: sign * c for k, c in table[(i, j)].items()}
    return BaseAlgebra(name, n, labels, degrees, unit, fund, table,
                       weights=weights, validate=True)


def load_base_algebra(path: str) -> BaseAlgebra:
    """Load and validate a base algebra from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as err:
            raise AlgebraError(f"invalid algebra file {path}: {err}") from None
    return base_algebra_from_dict(data)
