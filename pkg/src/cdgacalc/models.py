"""Built-in base algebras and the model CDGAs over them.

Base presets: projective spaces P^n (Q[x]/x^{n+1}, |x| = 2), closed
orientable surfaces of genus g (a_i b_i = [X] = -b_i a_i), products via
Kunneth, and user-supplied algebras from JSON files.

Model families over a base X with H^2-class c:

* ``configuration_model(X, r)``: the Kriz-Totaro algebra for the ordered
  configuration space of r points.  Generators G_ab (a < b, degree
  2n - 1, weight 2n; G_ba is normalized to G_ab on input), the Arnold
  three-term relations, the pullback relations (pi_a^* x - pi_b^* x) G_ab,
  and d(G_ab) = pi_ab^*(Delta) for Delta the diagonal class.
* ``section_model(X, c, r)``: the configuration model tensored with free
  generators s[b] (one per basis element b, degree |b| + 1, weight
  |b| + 2), alpha_i (degree 2n - 1, weight 2n) and eta_i (degree 2n,
  weight 2n + 2), with d(alpha_i) = pi_i^*[X] and
  d(eta_i) = sum_j pi_i^*(b_j^dual) s[b_j] - pi_i^*(c) alpha_i.
* ``twisted_section_model(X, chern, d, r)``: same underlying algebra; the
  differential uses the Euler class of the twisted cotangent bundle,
  d(alpha_i) = pi_i^*(e) with e = sum_i c_i(Omega^1) c_1(L)^{n-i} d^{n-i},
  and d*c_1(L) in place of c.

The diagonal class is Delta = sum_j (-1)^{|b_j|} b_j (x) b_j^dual; the
sign convention is pinned operationally by (x (x) 1 - 1 (x) x) Delta = 0
for every basis x together with the self-intersection identity (the
coefficient of [X] (x) [X] in Delta^2 equals chi(X)).  Both are verified
at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence, Union

from .algebra import (AlgebraContext, AlgebraError, AlgebraMap, BaseAlgebra,
                      Element, GeneratorSpec, TensorAlgebra,
                      load_base_algebra, tensor_many, tensor_power)
from .engine import Presentation, quotient_slice
from .linalg import SparseMatrix, rref
from .rat import ONE, Rational, rat_from_str, rat_to_str


# ---------------------------------------------------------------------------
# Space specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectiveSpace:
    n: int


@dataclass(frozen=True)
class Surface:
    genus: int


@dataclass(frozen=True)
class Product:
    left: "SpaceSpec"
    right: "SpaceSpec"


@dataclass(frozen=True)
class Custom:
    path: str


SpaceSpec = Union[ProjectiveSpace, Surface, Product, Custom]


def parse_space(text: str) -> SpaceSpec:
    """Parse CLI space strings: ``P2``, ``S1``, ``P1xP1``, ``custom:<path>``."""
    s = text.strip()
    if s.startswith("custom:"):
        path = s[len("custom:"):]
        if not path:
            raise AlgebraError("custom space needs a file path")
        return Custom(path)
    tokens = s.split("x")
    specs: list[SpaceSpec] = []
    for tok in tokens:
        tok = tok.strip()
        if len(tok) >= 2 and tok[0] == "P" and tok[1:].isdigit():
            n = int(tok[1:])
            if n < 1:
                raise AlgebraError(f"projective space needs n >= 1: {tok!r}")
            specs.append(ProjectiveSpace(n))
        elif len(tok) >= 2 and tok[0] == "S" and tok[1:].isdigit():
            specs.append(Surface(int(tok[1:])))
        else:
            raise AlgebraError(f"cannot parse space token {tok!r} "
                               f"(expected P<n>, S<g>, or custom:<path>)")
    if not specs:
        raise AlgebraError(f"empty space specification {text!r}")
    spec = specs[0]
    for nxt in specs[1:]:
        spec = Product(spec, nxt)
    return spec


def build_base(spec: SpaceSpec) -> BaseAlgebra:
    """Resolve a space specification to a validated BaseAlgebra."""
    if isinstance(spec, ProjectiveSpace):
        n = spec.n
        if n < 1:
            raise AlgebraError("projective space needs n >= 1")
        labels = ["1", "x"] + [f"x^{i}" for i in range(2, n + 1)]
        table = {(i, j): {i + j: ONE}
                 for i in range(n + 1) for j in range(n + 1) if i + j <= n}
        return BaseAlgebra(f"P{n}", n, labels, [2 * i for i in range(n + 1)],
                           0, n, table)
    if isinstance(spec, Surface):
        g = spec.genus
        if g < 0:
            raise AlgebraError("surface needs genus >= 0")
        labels = (["1"] + [f"a{i}" for i in range(1, g + 1)]
                  + [f"b{i}" for i in range(1, g + 1)] + ["X"])
        degrees = [0] + [1] * (2 * g) + [2]
        dim = len(labels)
        top = dim - 1
        table = {(0, i): {i: ONE} for i in range(dim)}
        table.update({(i, 0): {i: ONE} for i in range(1, dim)})
        for i in range(1, g + 1):
            table[(i, g + i)] = {top: ONE}
            table[(g + i, i)] = {top: -ONE}
        return BaseAlgebra(f"S{g}", 1, labels, degrees, 0, top, table)
    if isinstance(spec, Product):
        left = build_base(spec.left)
        right = build_base(spec.right)
        return tensor_many([left, right], name=f"{left.name}x{right.name}")
    if isinstance(spec, Custom):
        return load_base_algebra(spec.path)
    raise AlgebraError(f"unknown space specification {spec!r}")


# ---------------------------------------------------------------------------
# Degree-2 classes
# ---------------------------------------------------------------------------

def degree_two_class(base: BaseAlgebra, coords: Sequence) -> dict:
    """Coefficients on the degree-2 basis (basis order) -> base element."""
    deg2 = base.basis_of_degree(2)
    if len(coords) != len(deg2):
        raise AlgebraError(
            f"{base.name} has H^2 of rank {len(deg2)}; got "
            f"{len(coords)} coordinates")
    out = {}
    for idx, c in zip(deg2, coords):
        c = Rational(c)
        if c:
            out[idx] = c
    return out


def parse_ample_class(base: BaseAlgebra, text: str) -> dict:
    """Parse ``"1"`` (rank-1 H^2) or ``"[p:q]"`` into a degree-2 class.

    Ampleness is never enforced; any rational coordinates are accepted.
    """
    s = text.strip()
    if s.startswith("[") and s.endswith("]"):
        parts = [rat_from_str(tok) for tok in s[1:-1].split(":")]
        return degree_two_class(base, parts)
    return degree_two_class(base, [rat_from_str(s)])


def class_label(base: BaseAlgebra, coeffs: dict) -> str:
    if not coeffs:
        return "0"
    bits = []
    for idx in sorted(coeffs):
        c = coeffs[idx]
        lab = base.labels[idx]
        bits.append(lab if c == 1 else f"{rat_to_str(c)}{lab}")
    return "+".join(bits)


def _base_mul(base: BaseAlgebra, u: dict, v: dict) -> dict:
    out: dict[int, object] = {}
    for i, ci in u.items():
        for j, cj in v.items():
            for k, c in base.product(i, j).items():
                val = out.get(k, Rational(0)) + ci * cj * c
                if val:
                    out[k] = val
                else:
                    out.pop(k, None)
    return out


# ---------------------------------------------------------------------------
# Poincare duality data
# ---------------------------------------------------------------------------

def dual_basis(base: BaseAlgebra) -> list[dict]:
    """Dual basis under the Poincare pairing: b_i . dual(b_j) = delta_ij [X].

    Entry j is the element dual to basis element j, as coefficients on the
    complementary-degree basis.
    """
    top = base.fundamental
    duals: list[dict] = [dict() for _ in range(base.dim)]
    for d in sorted(set(base.degrees)):
        rows_idx = base.basis_of_degree(d)
        cols_idx = base.basis_of_degree(2 * base.n - d)
        m = len(rows_idx)
        aug = SparseMatrix(m, 2 * m)
        for a, i in enumerate(rows_idx):
            for b, j in enumerate(cols_idx):
                c = base.product(i, j).get(top)
                if c:
                    aug.rows[a][b] = c
            aug.rows[a][m + a] = ONE
        res = rref(aug)
        if res.pivots[:m] != tuple(range(m)):
            raise AlgebraError(
                f"singular pairing block at degree ({d}, {2 * base.n - d})")
        # reduced = [I | P^{-1}]; dual of rows_idx[a] is column a of P^{-1}
        for a in range(m):
            for b in range(m):
                c = res.reduced.rows[b].get(m + a)
                if c:
                    duals[rows_idx[a]][cols_idx[b]] = c
    return duals


def _diagonal_triples(base: BaseAlgebra) -> list[tuple[int, int, object]]:
    duals = dual_basis(base)
    triples = []
    for j in range(base.dim):
        sign = -ONE if base.degrees[j] % 2 else ONE
        for idx, c in duals[j].items():
            triples.append((j, idx, sign * c))
    _verify_diagonal(base, triples)
    return triples


def _verify_diagonal(base: BaseAlgebra, triples) -> None:
    square = tensor_many([base, base], name=f"{base.name}^⊗2",
                         validate=False)
    ctx = AlgebraContext(square, [])
    terms = {}
    for p, q, c in triples:
        k = square.encode((p, q))
        terms[k] = terms.get(k, Rational(0)) + c
    delta = ctx.base_element(terms)
    for idx in base.positive_degree_indices():
        left = ctx.base_element({square.encode((idx, base.unit)): ONE})
        right = ctx.base_element({square.encode((base.unit, idx)): ONE})
        if not ((left - right) * delta).is_zero():
            raise AlgebraError(
                f"diagonal class verification failed: "
                f"(x⊗1 - 1⊗x)·Δ != 0 for x = {base.labels[idx]}")
    top_sq = square.encode((base.fundamental, base.fundamental))
    self_int = (delta * delta).terms
    coeff = Rational(0)
    for m, c in self_int.items():
        if m.base == top_sq:
            coeff = c
    if coeff != base.euler_characteristic():
        raise AlgebraError(
            f"diagonal class verification failed: Δ·Δ has "
            f"[X]⊗[X]-coefficient {coeff}, expected Euler characteristic "
            f"{base.euler_characteristic()}")


def diagonal_class(base: BaseAlgebra) -> Element:
    """The diagonal class as an element of base (x) base (no generators)."""
    triples = _diagonal_triples(base)
    square = tensor_many([base, base], name=f"{base.name}^⊗2",
                         validate=False)
    ctx = AlgebraContext(square, [])
    terms = {}
    for p, q, c in triples:
        k = square.encode((p, q))
        terms[k] = terms.get(k, Rational(0)) + c
    return ctx.base_element(terms)


# ---------------------------------------------------------------------------
# Model builders
# ---------------------------------------------------------------------------

def _gen_label(a: int, b: int, r: int) -> str:
    return f"G{a}{b}" if r <= 9 else f"G{a}_{b}"


@dataclass(frozen=True)
class ModelLayout:
    """Generator index bookkeeping shared by the model builders."""
    r: int
    n_pairs: int
    base_dim: int
    has_marks: bool

    def g_index(self, a: int, b: int) -> int:
        # pairs (1,2),(1,3),...,(1,r),(2,3),... in lexicographic order
        if a > b:
            a, b = b, a
        if a == b:
            raise AlgebraError("G_ab needs a != b")
        prior = sum(self.r - i for i in range(1, a))
        return prior + (b - a - 1)

    def s_index(self, j: int) -> int:
        return self.n_pairs + j

    def alpha_index(self, i: int) -> int:
        return self.n_pairs + self.base_dim + (i - 1)

    def eta_index(self, i: int) -> int:
        return self.n_pairs + self.base_dim + self.r + (i - 1)


def _layout(p: Presentation) -> ModelLayout:
    r = p.params.get("r")
    kind = p.params.get("model")
    if r is None or kind not in ("C", "A", "AL"):
        raise AlgebraError(
            "presentation was not built by the model builders")
    base_dim = p.context.base.factors[0].dim if isinstance(
        p.context.base, TensorAlgebra) else p.context.base.dim
    return ModelLayout(r, r * (r - 1) // 2, base_dim, kind != "C")


def _configuration_generators(base: BaseAlgebra, r: int) -> list[GeneratorSpec]:
    n = base.n
    return [GeneratorSpec(_gen_label(a, b, r), 2 * n - 1, 2 * n)
            for a in range(1, r + 1) for b in range(a + 1, r + 1)]


def _configuration_relations(ctx: AlgebraContext, tensor: TensorAlgebra,
                             layout: ModelLayout) -> list[Element]:
    base = tensor.factors[0]
    r = layout.r

    def gelem(a: int, b: int) -> Element:
        return ctx.gen_element(layout.g_index(a, b))

    def pull(slot: int, idx: int) -> Element:
        return ctx.base_element(tensor.pullback(slot - 1, {idx: ONE}))

    relations: list[Element] = []
    for a in range(1, r + 1):
        for b in range(a + 1, r + 1):
            for c in range(b + 1, r + 1):
                rel = (gelem(a, b) * gelem(a, c)
                       + gelem(b, c) * gelem(b, a)
                       + gelem(c, a) * gelem(c, b))
                relations.append(rel)
    for a in range(1, r + 1):
        for b in range(a + 1, r + 1):
            gab = gelem(a, b)
            for idx in base.positive_degree_indices():
                relations.append((pull(a, idx) - pull(b, idx)) * gab)
    return relations


def _configuration_differential(ctx: AlgebraContext, tensor: TensorAlgebra,
                                layout: ModelLayout,
                                triples) -> dict[int, Element]:
    units = [f.unit for f in tensor.factors]
    diff: dict[int, Element] = {}
    for a in range(1, layout.r + 1):
        for b in range(a + 1, layout.r + 1):
            terms: dict[int, object] = {}
            for p_idx, q_idx, c in triples:
                combo = list(units)
                combo[a - 1] = p_idx
                combo[b - 1] = q_idx
                enc = tensor.encode(tuple(combo))
                terms[enc] = terms.get(enc, Rational(0)) + c
            diff[layout.g_index(a, b)] = ctx.base_element(terms)
    return diff


def configuration_model(base: BaseAlgebra, r: int) -> Presentation:
    """Model for the ordered configuration space of r points on X."""
    if r < 1:
        raise AlgebraError("configuration model needs r >= 1")
    tensor = tensor_power(base, r)
    layout = ModelLayout(r, r * (r - 1) // 2, base.dim, False)
    ctx = AlgebraContext(tensor, _configuration_generators(base, r))
    relations = _configuration_relations(ctx, tensor, layout)
    triples = _diagonal_triples(base) if r >= 2 else []
    diff = _configuration_differential(ctx, tensor, layout, triples)
    return Presentation(ctx, relations, diff, name=f"C{r}({base.name})",
                        params={"model": "C", "r": r, "space": base.name})


def _marked_generators(base: BaseAlgebra, r: int) -> list[GeneratorSpec]:
    n = base.n
    gens = _configuration_generators(base, r)
    for j in range(base.dim):
        gens.append(GeneratorSpec(f"s[{base.labels[j]}]",
                                  base.degrees[j] + 1, base.weights[j] + 2))
    gens.extend(GeneratorSpec(f"alpha{i}", 2 * n - 1, 2 * n)
                for i in range(1, r + 1))
    gens.extend(GeneratorSpec(f"eta{i}", 2 * n, 2 * n + 2)
                for i in range(1, r + 1))
    return gens


def _marked_context(base: BaseAlgebra, r: int):
    tensor = tensor_power(base, r)
    layout = ModelLayout(r, r * (r - 1) // 2, base.dim, True)
    ctx = AlgebraContext(tensor, _marked_generators(base, r))
    return tensor, layout, ctx


def _marked_differential(ctx: AlgebraContext, tensor: TensorAlgebra,
                         layout: ModelLayout, alpha_image: dict,
                         eta_class: dict) -> dict[int, Element]:
    """d(alpha_i) = pi_i^*(alpha_image); d(eta_i) = eps_i - pi_i^*(c) alpha_i."""
    base = tensor.factors[0]
    duals = dual_basis(base)
    triples = _diagonal_triples(base) if layout.r >= 2 else []
    diff = _configuration_differential(ctx, tensor, layout, triples)
    for i in range(1, layout.r + 1):
        slot = i - 1
        diff[layout.alpha_index(i)] = ctx.base_element(
            tensor.pullback(slot, alpha_image))
        eps = ctx.zero()
        for j in range(base.dim):
            dual_j = ctx.base_element(tensor.pullback(slot, duals[j]))
            eps = eps + dual_j * ctx.gen_element(layout.s_index(j))
        c_alpha = ctx.base_element(tensor.pullback(slot, eta_class)) \
            * ctx.gen_element(layout.alpha_index(i))
        diff[layout.eta_index(i)] = eps - c_alpha
    return diff


def section_model(base: BaseAlgebra, c: dict, r: int) -> Presentation:
    """Stable model with r point constraints and H^2-class c.

    ``c`` is a degree-2 base element (any rational coordinates; nothing
    about positivity is assumed or used).
    """
    if r < 1:
        raise AlgebraError("section model needs r >= 1")
    for idx in c:
        if base.degrees[idx] != 2:
            raise AlgebraError(
                f"c must be homogeneous of degree 2; {base.labels[idx]} "
                f"has degree {base.degrees[idx]}")
    tensor, layout, ctx = _marked_context(base, r)
    relations = _configuration_relations(ctx, tensor, layout)
    fund = {base.fundamental: ONE}
    diff = _marked_differential(ctx, tensor, layout, fund, dict(c))
    cname = class_label(base, c)
    return Presentation(
        ctx, relations, diff, name=f"A{r}({base.name}, c={cname})",
        params={"model": "A", "r": r, "space": base.name, "c": cname})


# ---------------------------------------------------------------------------
# Chern data and the twisted model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChernData:
    """Chern classes of the cotangent bundle plus c_1 of the line bundle.

    ``cotangent[i]`` holds c_i(Omega^1_X) as base coefficients, i = 0..n
    with c_0 = 1; ``c1_line`` holds c_1(L).
    """
    base: BaseAlgebra
    cotangent: tuple
    c1_line: dict

    def __post_init__(self):
        if len(self.cotangent) != self.base.n + 1:
            raise AlgebraError(
                f"need c_0..c_{self.base.n} of the cotangent bundle")
        if dict(self.cotangent[0]) != {self.base.unit: ONE}:
            raise AlgebraError("c_0 of the cotangent bundle must be 1")
        for i, cl in enumerate(self.cotangent):
            for idx in cl:
                if self.base.degrees[idx] != 2 * i:
                    raise AlgebraError(f"c_{i} must have degree {2 * i}")
        for idx in self.c1_line:
            if self.base.degrees[idx] != 2:
                raise AlgebraError("c_1(L) must have degree 2")


def cotangent_chern(spec: SpaceSpec,
                    c1_line: Optional[dict] = None) -> ChernData:
    """Cotangent Chern data for the built-in spaces.

    P^n: c(T) = (1+x)^{n+1} so c_i(Omega^1) = (-1)^i binom(n+1, i) x^i;
    surfaces: c_1(Omega^1) = (2g - 2)[X]; products by the Whitney formula.
    The default line class is the ample generator (sum of the factor
    generators on products).
    """
    base = build_base(spec)
    if isinstance(spec, ProjectiveSpace):
        n = spec.n
        cot = []
        for i in range(n + 1):
            coeff = Rational((-1) ** i * comb(n + 1, i))
            cot.append({i: coeff} if coeff else {})
        default_c1 = {1: ONE}
    elif isinstance(spec, Surface):
        chi = 2 - 2 * spec.genus
        cot = [{base.unit: ONE},
               {base.fundamental: Rational(-chi)} if chi else {}]
        default_c1 = {base.fundamental: ONE}
    elif isinstance(spec, Product):
        left = cotangent_chern(spec.left)
        right = cotangent_chern(spec.right)
        assert isinstance(base, TensorAlgebra)
        cot = []
        for k in range(base.n + 1):
            acc: dict[int, object] = {}
            for i in range(len(left.cotangent)):
                j = k - i
                if not (0 <= j < len(right.cotangent)):
                    continue
                for u, cu in left.cotangent[i].items():
                    for v, cv in right.cotangent[j].items():
                        enc = base.encode((u, v))
                        acc[enc] = acc.get(enc, Rational(0)) + cu * cv
            cot.append({kk: c for kk, c in acc.items() if c})
        default_c1 = {}
        for u, cu in left.c1_line.items():
            default_c1[base.encode((u, base.factors[1].unit))] = cu
        for v, cv in right.c1_line.items():
            enc = base.encode((base.factors[0].unit, v))
            default_c1[enc] = default_c1.get(enc, Rational(0)) + cv
    else:
        raise AlgebraError(
            "cotangent data for custom spaces must be supplied explicitly")
    if c1_line is None:
        c1_line = default_c1
    return ChernData(base, tuple(cot), dict(c1_line))


def euler_class_twist(chern: ChernData, d: int):
    """Euler class of the twisted cotangent bundle and its top coefficient.

    Returns ``(e, m)`` with ``e = sum_i c_i(Omega^1) c_1(L)^{n-i} d^{n-i}``
    as base coefficients and ``m = e[X]`` the coefficient on the
    fundamental class.
    """
    if d < 0:
        raise AlgebraError("twist exponent must be >= 0")
    base = chern.base
    n = base.n
    e: dict[int, object] = {}
    power = {base.unit: ONE}
    powers = [power]
    for _ in range(n):
        power = _base_mul(base, power, chern.c1_line)
        powers.append(power)
    for i in range(n + 1):
        scale = Rational(d) ** (n - i)
        if not scale:
            continue
        term = _base_mul(base, chern.cotangent[i], powers[n - i])
        for k, c in term.items():
            val = e.get(k, Rational(0)) + scale * c
            if val:
                e[k] = val
            else:
                e.pop(k, None)
    m = e.get(base.fundamental, Rational(0))
    return e, m


def twisted_section_model(base: BaseAlgebra, chern: ChernData, d: int,
                          r: int) -> Presentation:
    """Section model with the honest degree-d differential.

    Identical underlying algebra to :func:`section_model`; only the
    differential changes: d(alpha_i) uses the twisted Euler class and the
    eta differential uses d * c_1(L).
    """
    if r < 1:
        raise AlgebraError("section model needs r >= 1")
    if chern.base is not base and chern.base.labels != base.labels:
        raise AlgebraError("Chern data belongs to a different base algebra")
    tensor, layout, ctx = _marked_context(base, r)
    relations = _configuration_relations(ctx, tensor, layout)
    e, m = euler_class_twist(chern, d)
    scaled_c1 = {k: Rational(d) * v for k, v in chern.c1_line.items()
                 if Rational(d) * v}
    diff = _marked_differential(ctx, tensor, layout, e, scaled_c1)
    return Presentation(
        ctx, relations, diff,
        name=f"A{r}({base.name}, L^{d})",
        params={"model": "AL", "r": r, "space": base.name, "d": d,
                "m": rat_to_str(m)})


# ---------------------------------------------------------------------------
# Symmetric group action
# ---------------------------------------------------------------------------

def _check_permutation(sigma: Sequence[int], r: int) -> tuple[int, ...]:
    sig = tuple(sigma)
    if sorted(sig) != list(range(r)):
        raise AlgebraError(
            f"{sig} is not a permutation of 0..{r - 1}")
    return sig


def symmetric_action(p: Presentation, sigma: Sequence[int]) -> AlgebraMap:
    """Action of a permutation on a model presentation, verified.

    ``sigma`` is 0-indexed: point i moves to slot sigma[i].  The base map
    permutes tensor factors with Koszul signs, G_ab goes to
    G_{sigma(a) sigma(b)} (normalized), alpha and eta indices follow
    sigma, the s[b] generators stay fixed.  The returned map is checked
    to be multiplicative, to commute with d, and to preserve the
    relations; any failure raises.
    """
    layout = _layout(p)
    r = layout.r
    sig = _check_permutation(sigma, r)
    ctx = p.context
    tensor = ctx.base
    if not isinstance(tensor, TensorAlgebra):
        raise AlgebraError("model base is not a tensor power")
    factors = tensor.factors

    base_images: dict[int, Element] = {}
    for idx in range(tensor.dim):
        combo = tensor.decode(idx)
        target = [0] * r
        for i in range(r):
            target[sig[i]] = combo[i]
        sign = 0
        for i in range(r):
            if factors[i].degrees[combo[i]] % 2:
                for j in range(i + 1, r):
                    if sig[i] > sig[j] and factors[j].degrees[combo[j]] % 2:
                        sign ^= 1
        coeff = -ONE if sign else ONE
        base_images[idx] = ctx.base_element(
            {tensor.encode(tuple(target)): coeff})

    gen_images: dict[int, Element] = {}
    for a in range(1, r + 1):
        for b in range(a + 1, r + 1):
            sa, sb = sig[a - 1] + 1, sig[b - 1] + 1
            gen_images[layout.g_index(a, b)] = ctx.gen_element(
                layout.g_index(sa, sb))
    if layout.has_marks:
        for i in range(1, r + 1):
            gen_images[layout.alpha_index(i)] = ctx.gen_element(
                layout.alpha_index(sig[i - 1] + 1))
            gen_images[layout.eta_index(i)] = ctx.gen_element(
                layout.eta_index(sig[i - 1] + 1))
    phi = AlgebraMap(ctx, gen_images, base_images)
    _verify_action(p, phi)
    return phi


def _verify_action(p: Presentation, phi: AlgebraMap) -> None:
    phi.verify_multiplicative()
    ctx = p.context
    for g in range(len(ctx.generators)):
        lhs = phi.apply(p.differential_of(ctx.gen_element(g)))
        rhs = p.differential_of(phi.apply(ctx.gen_element(g)))
        if lhs != rhs:
            raise AlgebraError(
                f"action verification failure: does not commute with d on "
                f"{ctx.generators[g].label}")
    for rel in p.relations:
        img = phi.apply(rel)
        sl = quotient_slice(p, rel.degree(), rel.weight())
        if sl.reduce(img.terms):
            raise AlgebraError(
                "action verification failure: relation not preserved: "
                f"{rel!r}")
