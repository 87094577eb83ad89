"""Generating functions and symmetric-group refinements.

Series conventions.  All series are truncated integer-coefficient power
series in one variable; nothing is ever represented as a rational
function.  Two gradings appear:

* degree series (variable ``t``): the Poincare-type product
  ``P(t) = prod_{i<2n} (1 - (-t)^{i+1})^{(-1)^i beta_i}``, the series of
  the free graded algebra on the shifted classes of H^{*<2n}(X).
* weight series (variable ``w``): weightwise Euler characteristics.  A
  shifted class sb of a degree-i base class sits in weight i + 2, so the
  closed form for the free algebra on all shifted classes is
  ``P_U(w) = prod_i (1 - w^{i+2})^{(-1)^i beta_i}``; the point-constraint
  sectors contribute ``((1 - w^{2n}) / (1 - w^{2n+2}))^r`` (alpha_i odd of
  weight 2n, eta_i even of weight 2n + 2).

Weightwise Euler characteristics are computed from quotient slices alone,
without differentials; since every generator (and base class) has weight
>= degree, weight-k classes live in degrees <= k and each coefficient is
a finite alternating sum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .algebra import AlgebraContext, AlgebraError, BaseAlgebra, GeneratorSpec
from .engine import (CohomologyTable, Presentation, cohomology,
                     differential_matrix, map_matrix, quotient_slice,
                     _slice_weights)
from .linalg import SparseMatrix, rank_with_modular_prescreen, rref
from .models import configuration_model, symmetric_action
from .rat import ONE, Rational


# ---------------------------------------------------------------------------
# Truncated series
# ---------------------------------------------------------------------------

class BigradedSeries:
    """Truncated formal power series with integer coefficients."""

    __slots__ = ("coeffs", "truncation", "variable")

    def __init__(self, coeffs: dict, truncation: int, variable: str = "w"):
        if truncation < 0:
            raise AlgebraError("series truncation must be >= 0")
        clean = {}
        for k, v in coeffs.items():
            if not (0 <= k <= truncation):
                raise AlgebraError(f"exponent {k} outside [0, {truncation}]")
            v = int(v)
            if v:
                clean[k] = v
        self.coeffs = clean
        self.truncation = truncation
        self.variable = variable

    @classmethod
    def one(cls, truncation: int, variable: str = "w") -> "BigradedSeries":
        return cls({0: 1}, truncation, variable)

    @classmethod
    def from_list(cls, values: Sequence[int], truncation: int,
                  variable: str = "w") -> "BigradedSeries":
        return cls(dict(enumerate(values[:truncation + 1])), truncation,
                   variable)

    def coefficient(self, k: int) -> int:
        return self.coeffs.get(k, 0)

    def coefficients(self) -> list[int]:
        return [self.coefficient(k) for k in range(self.truncation + 1)]

    def _compat(self, other: "BigradedSeries") -> None:
        if self.variable != other.variable:
            raise AlgebraError(
                f"series variable mismatch: {self.variable} vs "
                f"{other.variable}")
        if self.truncation != other.truncation:
            raise AlgebraError("series truncation mismatch")

    def __add__(self, other: "BigradedSeries") -> "BigradedSeries":
        self._compat(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return BigradedSeries(out, self.truncation, self.variable)

    def __neg__(self) -> "BigradedSeries":
        return BigradedSeries({k: -v for k, v in self.coeffs.items()},
                              self.truncation, self.variable)

    def __sub__(self, other: "BigradedSeries") -> "BigradedSeries":
        return self + (-other)

    def __mul__(self, other: "BigradedSeries") -> "BigradedSeries":
        self._compat(other)
        out: dict[int, int] = {}
        for a, va in self.coeffs.items():
            for b, vb in other.coeffs.items():
                k = a + b
                if k <= self.truncation:
                    out[k] = out.get(k, 0) + va * vb
        return BigradedSeries(out, self.truncation, self.variable)

    def power(self, exponent: int) -> "BigradedSeries":
        if exponent < 0:
            return self.reciprocal().power(-exponent)
        result = BigradedSeries.one(self.truncation, self.variable)
        for _ in range(exponent):
            result = result * self
        return result

    def reciprocal(self) -> "BigradedSeries":
        """Multiplicative inverse; needs constant term +-1 for integrality."""
        a0 = self.coefficient(0)
        if a0 not in (1, -1):
            raise AlgebraError(
                f"series reciprocal needs constant term +-1, got {a0}")
        inv = {0: a0}
        for k in range(1, self.truncation + 1):
            acc = 0
            for i, ai in self.coeffs.items():
                if 1 <= i <= k:
                    acc += ai * inv.get(k - i, 0)
            inv[k] = -a0 * acc
        return BigradedSeries(inv, self.truncation, self.variable)

    def evaluate_at_one(self) -> int:
        return sum(self.coeffs.values())

    def __eq__(self, other):
        return (isinstance(other, BigradedSeries)
                and self.variable == other.variable
                and self.truncation == other.truncation
                and self.coeffs == other.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        v = self.variable
        bits = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            term = "1" if k == 0 else (v if k == 1 else f"{v}^{k}")
            if k == 0:
                bits.append(str(c))
            elif c == 1:
                bits.append(term)
            elif c == -1:
                bits.append(f"-{term}")
            else:
                bits.append(f"{c}{term}")
        return " + ".join(bits).replace("+ -", "- ")


def _one_minus_power(exp: int, truncation: int, variable: str,
                     sign: int = -1) -> BigradedSeries:
    """The series 1 + sign*x^exp (default 1 - x^exp), truncated."""
    coeffs = {0: 1}
    if exp <= truncation:
        coeffs[exp] = coeffs.get(exp, 0) + sign
    return BigradedSeries(coeffs, truncation, variable)


# ---------------------------------------------------------------------------
# Series of the built-in models
# ---------------------------------------------------------------------------

def poincare_series_U(base: BaseAlgebra, max_exp: int,
                      variable: str = "w") -> BigradedSeries:
    """Euler-type series of the free algebra on shifted base classes.

    Weight variable (``"w"``): each degree-i class contributes a shifted
    generator of weight i + 2, giving prod_i (1 - w^{i+2})^{(-1)^i b_i}
    over all i = 0..2n.  Degree variable (``"t"``): the Poincare series
    of the free algebra on the shifted classes *below* the top degree,
    prod_{i<2n} (1 - (-t)^{i+1})^{(-1)^i b_i}.
    """
    series = BigradedSeries.one(max_exp, variable)
    top = 2 * base.n
    for i in range(0, top + 1):
        b = base.betti(i)
        if not b:
            continue
        if variable == "w":
            factor = _one_minus_power(i + 2, max_exp, variable)
        elif variable == "t":
            if i >= top:
                continue
            sign = -1 if i % 2 else 1
            factor = _one_minus_power(i + 1, max_exp, variable, sign=sign)
        else:
            raise AlgebraError(f"unknown series variable {variable!r}")
        series = series * factor.power(b if i % 2 == 0 else -b)
    return series


def _check_weight_bounds(p: Presentation) -> None:
    ctx = p.context
    for g in ctx.generators:
        if g.weight < g.degree:
            raise AlgebraError(
                f"generator {g.label} has weight {g.weight} < degree "
                f"{g.degree}: weightwise sums cannot be bounded")
    for i in range(ctx.base.dim):
        if ctx.base.weights[i] < ctx.base.degrees[i]:
            raise AlgebraError(
                f"base class {ctx.base.labels[i]} has weight < degree: "
                "weightwise sums cannot be bounded")


def weightwise_euler(p: Presentation, w_max: int) -> BigradedSeries:
    """Weightwise Euler characteristic of the quotient algebra.

    Coefficient of w^k is sum_i (-1)^i dim of the (degree i, weight k)
    quotient slice; no differentials enter.  Because weight >= degree
    throughout, only degrees i <= k contribute.
    """
    _check_weight_bounds(p)
    coeffs: dict[int, int] = {}
    for k in range(w_max + 1):
        acc = 0
        for i in range(k + 1):
            if p.context.monomials_of(i, k):
                dim = quotient_slice(p, i, k).dim
                if dim:
                    acc += dim if i % 2 == 0 else -dim
        if acc:
            coeffs[k] = acc
    return BigradedSeries(coeffs, w_max, "w")


def p_r_closed_form(base: BaseAlgebra, r: int, w_max: int) -> BigradedSeries:
    """Closed form for the weightwise Euler series of the r-marked model.

    The model is, as a bigraded vector space, the configuration model
    tensor the free algebra on the shifted classes tensor the free
    algebra on alpha_i, eta_i; Euler series multiply, giving
    P_Fr(w) * P_U(w) * ((1 - w^{2n}) / (1 - w^{2n+2}))^r with P_Fr
    computed from the engine (one source of truth, and a configuration
    model test in its own right).
    """
    if r < 0:
        raise AlgebraError("p_r_closed_form needs r >= 0")
    if r == 0:
        p_fr = BigradedSeries.one(w_max, "w")
    else:
        p_fr = weightwise_euler(configuration_model(base, r), w_max)
    p_u = poincare_series_U(base, w_max, "w")
    n = base.n
    marks = (_one_minus_power(2 * n, w_max, "w")
             * _one_minus_power(2 * n + 2, w_max, "w").reciprocal()).power(r)
    return p_fr * p_u * marks


def rho_bracket(base: BaseAlgebra, t_max: int) -> BigradedSeries:
    """The Betti-number bracket of :func:`rho_series`.

    sum_{i=0}^{n} b_{i+n-1} t^i - sum_{i=1}^{n-1} b_{i+n+1} t^i
    + sum_{i=n+1}^{2n+1} b_{i-n} t^i - sum_{i=n+2}^{2n} b_{i-n-2} t^i.
    """
    n = base.n
    bracket: dict[int, int] = {}

    def add(i, value):
        if value and 0 <= i <= t_max:
            bracket[i] = bracket.get(i, 0) + value

    for i in range(0, n + 1):
        add(i, base.betti(i + n - 1))
    for i in range(1, n):
        add(i, -base.betti(i + n + 1))
    for i in range(n + 1, 2 * n + 2):
        add(i, base.betti(i - n))
    for i in range(n + 2, 2 * n + 1):
        add(i, -base.betti(i - n - 2))
    return BigradedSeries(bracket, t_max, "t")


def rho_series(base: BaseAlgebra, t_max: int) -> BigradedSeries:
    """Stable twisted Betti series: P(t) times the Betti-number bracket."""
    return poincare_series_U(base, t_max, "t") * rho_bracket(base, t_max)


def r1_stable_series(base: BaseAlgebra, t_max: int) -> BigradedSeries:
    """Poincare series of the one-marked-point stable cohomology.

    Computed as (series of the nonvanishing-derivative factor) times
    (series of the free algebra on shifted classes below the top degree).
    The first factor is the cohomology of the one-generator model
    (H^*(X)[alpha], d(alpha) = [X]), the generic nonvanishing Euler class
    normalized to the fundamental class; its dimensions are read off the
    engine rather than from a formula.
    """
    n = base.n
    ctx = AlgebraContext(base, [GeneratorSpec("alpha", 2 * n - 1, 2 * n)])
    pres = Presentation(
        ctx, [], {0: ctx.base_element({base.fundamental: ONE})},
        name=f"punctured-derivative({base.name})",
        params={"model": "omega", "space": base.name})
    table = cohomology(pres, t_max, by_weight=True)
    factor = BigradedSeries(
        {i: table.dim(i) for i in range(t_max + 1)}, t_max, "t")
    return factor * poincare_series_U(base, t_max, "t")


# ---------------------------------------------------------------------------
# Permutations, class functions, characters
# ---------------------------------------------------------------------------

Perm = tuple


def all_permutations(r: int) -> list[Perm]:
    return [tuple(p) for p in itertools.permutations(range(r))]


def compose(sigma: Perm, tau: Perm) -> Perm:
    """(sigma . tau)(i) = sigma(tau(i))."""
    return tuple(sigma[tau[i]] for i in range(len(sigma)))


def inverse(sigma: Perm) -> Perm:
    out = [0] * len(sigma)
    for i, v in enumerate(sigma):
        out[v] = i
    return tuple(out)


def cycle_type(sigma: Perm) -> tuple[int, ...]:
    seen = [False] * len(sigma)
    lengths = []
    for i in range(len(sigma)):
        if seen[i]:
            continue
        ln = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            ln += 1
        lengths.append(ln)
    return tuple(sorted(lengths, reverse=True))


def generated_subgroup(generators: Iterable[Perm], r: int) -> list[Perm]:
    """Closure of a set of permutations under composition."""
    elems = {tuple(range(r))}
    frontier = [tuple(g) for g in generators]
    for g in frontier:
        if sorted(g) != list(range(r)):
            raise AlgebraError(f"{g} is not a permutation of 0..{r - 1}")
    elems.update(frontier)
    while frontier:
        new = []
        for a in list(elems):
            for b in frontier:
                c = compose(a, b)
                if c not in elems:
                    elems.add(c)
                    new.append(c)
        frontier = new
    return sorted(elems)


def check_subgroup_closed(subgroup: Sequence[Perm]) -> list[Perm]:
    elems = [tuple(s) for s in subgroup]
    seen = set(elems)
    if len(seen) != len(elems):
        raise AlgebraError("subgroup contains duplicate permutations")
    r = len(elems[0])
    if tuple(range(r)) not in seen:
        raise AlgebraError("subgroup not closed: missing the identity")
    for a in elems:
        for b in elems:
            if compose(a, b) not in seen:
                raise AlgebraError(
                    f"subgroup not closed: {a} . {b} missing")
    return elems


@dataclass(frozen=True)
class ClassFunction:
    """A rational value per conjugacy class (partition) of S_r."""

    r: int
    values: dict

    def __post_init__(self):
        for part in self.values:
            if sum(part) != self.r:
                raise AlgebraError(
                    f"{part} is not a partition of {self.r}")

    def __call__(self, sigma: Perm):
        part = cycle_type(sigma)
        try:
            return self.values[part]
        except KeyError:
            raise AlgebraError(f"no value for cycle type {part}") from None


def _partitions(n: int, largest: Optional[int] = None):
    if n == 0:
        yield ()
        return
    top = min(n, largest) if largest is not None else n
    for first in range(top, 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def trivial_character(r: int) -> ClassFunction:
    return ClassFunction(r, {p: Fraction(1) for p in _partitions(r)})


def sign_character(r: int) -> ClassFunction:
    vals = {}
    for p in _partitions(r):
        transpositions = sum(c - 1 for c in p)
        vals[p] = Fraction(-1 if transpositions % 2 else 1)
    return ClassFunction(r, vals)


def regular_character(r: int) -> ClassFunction:
    vals = {p: Fraction(0) for p in _partitions(r)}
    vals[(1,) * r] = Fraction(math.factorial(r))
    return ClassFunction(r, vals)


# ---------------------------------------------------------------------------
# Invariants and isotypic pieces
# ---------------------------------------------------------------------------

def _invariant_basis(matrix_sum: SparseMatrix):
    """Row-space basis (rref rows) of an averaging projector."""
    res = rref(matrix_sum)
    return res


def _restrict_map(basis_rows, pivots, image_rows):
    """Coordinates of each image row in an rref basis; exact, verified."""
    out_rows = []
    for w in image_rows:
        coords = {}
        residual = dict(w)
        for t, p in enumerate(pivots):
            c = residual.get(p)
            if c:
                coords[t] = c
                for col, v in basis_rows[t].items():
                    nv = residual.get(col, Rational(0)) - c * v
                    if nv:
                        residual[col] = nv
                    else:
                        residual.pop(col, None)
        if residual:
            raise AlgebraError(
                "internal error: image does not lie in the invariant "
                "subspace")
        out_rows.append(coords)
    return out_rows


def isotypic_cohomology(p: Presentation, subgroup: Sequence[Perm],
                        character: ClassFunction,
                        max_degree: int) -> CohomologyTable:
    """Cohomology of the image of the character-averaging projector.

    The projector (char(1)/|G|) sum_sigma char(sigma^{-1}) M_sigma
    commutes with d (the action is d-equivariant, verified when each
    action map is built), so d restricts to the isotypic subcomplex.
    For the trivial character this is the subcomplex of invariants.
    """
    elems = check_subgroup_closed(subgroup)
    actions = {sig: symmetric_action(p, sig) for sig in elems}
    order = len(elems)
    dim_char = character(tuple(range(len(elems[0]))))

    def projector(degree: int, weight: int) -> SparseMatrix:
        sl = quotient_slice(p, degree, weight)
        total = SparseMatrix(sl.dim, sl.dim)
        for sig in elems:
            weight_c = Rational(Fraction(dim_char * character(inverse(sig))
                                         / order))
            if not weight_c:
                continue
            mat = map_matrix(p, actions[sig], degree, weight)
            for i, row in enumerate(mat.rows):
                acc = total.rows[i]
                for j, v in row.items():
                    nv = acc.get(j, Rational(0)) + weight_c * v
                    if nv:
                        acc[j] = nv
                    else:
                        acc.pop(j, None)
        return total

    bases: dict = {}

    def basis_at(degree: int, weight: int):
        key = (degree, weight)
        if key not in bases:
            if quotient_slice(p, degree, weight).dim == 0:
                bases[key] = None
            else:
                bases[key] = _invariant_basis(projector(degree, weight))
        return bases[key]

    def restricted_rank(degree: int, weight: int) -> int:
        src = basis_at(degree, weight)
        if src is None or src.rank == 0:
            return 0
        tgt = basis_at(degree + 1, weight)
        if tgt is None or tgt.rank == 0:
            return 0
        dmat = differential_matrix(p, degree, weight)
        image_rows = []
        for row in src.reduced.rows:
            w: dict[int, object] = {}
            for i, c in row.items():
                for j, v in dmat.rows[i].items():
                    nv = w.get(j, Rational(0)) + c * v
                    if nv:
                        w[j] = nv
                    else:
                        w.pop(j, None)
            image_rows.append(w)
        coords = _restrict_map(tgt.reduced.rows, tgt.pivots, image_rows)
        mat = SparseMatrix.from_rows(len(coords), tgt.rank, coords)
        return rank_with_modular_prescreen(mat)

    entries: dict = {}
    for d in range(max_degree + 1):
        for k in _slice_weights(p, d):
            src = basis_at(d, k)
            q = 0 if src is None else src.rank
            if q == 0:
                continue
            r_out = restricted_rank(d, k)
            r_in = restricted_rank(d - 1, k) if d > 0 else 0
            value = q - r_out - r_in
            if value:
                entries[(d, k)] = value
    model = {"name": p.name, **p.params, "subgroup_order": order}
    return CohomologyTable(entries, max_degree, True, model)


def invariant_cohomology(p: Presentation, subgroup: Sequence[Perm],
                         max_degree: int) -> CohomologyTable:
    """Cohomology of the subcomplex of subgroup invariants."""
    elems = check_subgroup_closed(subgroup)
    r = len(elems[0])
    return isotypic_cohomology(p, elems, trivial_character(r), max_degree)


def character_euler(p: Presentation, chi: ClassFunction,
                    w_max: int) -> BigradedSeries:
    """Character-weighted weightwise Euler characteristic.

    Coefficient of w^k is (1/r!) sum_sigma chi(sigma) sum_i (-1)^i
    trace(sigma | slice(i, k)).  For the trivial character this is the
    weightwise Euler characteristic of the invariants; for the character
    of the regular representation it collapses to the plain weightwise
    Euler characteristic.
    """
    _check_weight_bounds(p)
    r = p.params.get("r")
    if r is None:
        raise AlgebraError("presentation carries no point count r")
    if chi.r != r:
        raise AlgebraError(f"class function is on S_{chi.r}, model has r={r}")
    perms = all_permutations(r)
    actions = {sig: symmetric_action(p, sig) for sig in perms}
    factorial = 1
    for i in range(2, r + 1):
        factorial *= i
    coeffs: dict[int, int] = {}
    for k in range(w_max + 1):
        total = Fraction(0)
        for i in range(k + 1):
            if not p.context.monomials_of(i, k):
                continue
            if quotient_slice(p, i, k).dim == 0:
                continue
            sign = 1 if i % 2 == 0 else -1
            for sig in perms:
                c = chi(sig)
                if not c:
                    continue
                mat = map_matrix(p, actions[sig], i, k)
                tr = sum((mat.rows[a].get(a, Rational(0))
                          for a in range(mat.nrows)), Rational(0))
                if tr:
                    total += Fraction(c) * Fraction(int(tr.numerator),
                                                    int(tr.denominator)) * sign
        total = total / factorial
        if total:
            if total.denominator != 1:
                raise AlgebraError(
                    f"non-integral character Euler coefficient {total} at "
                    f"w^{k}; the class function is not a virtual character")
            coeffs[k] = int(total)
    return BigradedSeries(coeffs, w_max, "w")


def stable_range_bound(i: int, r: int, chi_X: int, k: int) -> int:
    """Least twist exponent certified for degree-i stability.

    Returns max(|chi_X|, k (2 i + 2 r + 3)) + 1 for a k-jet-ampleness
    step; inputs other than chi_X must be nonnegative.
    """
    if i < 0 or r < 0 or k < 0:
        raise AlgebraError("stable_range_bound needs i, r, k >= 0")
    return max(abs(chi_X), k * (2 * i + 2 * r + 3)) + 1
