"""Exterior-algebra cohomology of a principally polarized Jacobian.

H^*(J) is modeled as the exterior algebra on 2g odd generators
xi_1, eta_1, ..., xi_g, eta_g (a symplectic basis of H^1), with

* the theta class  Theta = sum_i xi_i eta_i,
* the volume class xi_1 eta_1 ... xi_g eta_g (so Theta^g = g! vol),
* the Poincaré pairing <a, b> = coefficient of vol in a b.

Homology is carried in Poincaré-dual coordinates: the class of
H_k(J) with PD-coordinate beta in H^(2g-k) is beta ∩ [J], and the cap
action of a cohomology class is plain multiplication of coordinates
(cup-then-PD, one multiplication table for everything).

The same machinery provides H^*(C) for the curve, Koszul-signed product
algebras H^*(X) ⊗ H^*(Y) for the two-factor spaces, the cohomological
Fourier transform computed from exp(c1) of the Poincaré bundle, and the
Riemann-Roch pushforward that produces the Picard-bundle Chern character.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .rational_linalg import Matrix, Q, inverse

__all__ = [
    "ExteriorAlgebra",
    "ExtElement",
    "ExteriorModel",
    "CurveCohomology",
    "ProductAlgebra",
    "ProductElement",
    "fourier_matrix",
    "picard_chern_character",
    "chern_classes_from_character",
]


class ExteriorAlgebra:
    """Exterior algebra over Q on named odd generators, basis = bitmasks."""

    def __init__(self, gen_names: list[str]):
        self.gen_names = list(gen_names)
        self.ngens = len(gen_names)
        self.dim = 1 << self.ngens
        self.top_mask = self.dim - 1

    def __eq__(self, other):
        return isinstance(other, ExteriorAlgebra) and self.gen_names == other.gen_names

    def __hash__(self):
        return hash(tuple(self.gen_names))

    def degree(self, mask: int) -> int:
        return bin(mask).count("1")

    def mul_basis(self, a: int, b: int) -> tuple[Fraction, int] | None:
        """Product of two basis monomials: (sign, mask), or None when zero."""
        if a & b:
            return None
        # count inversions: pairs (i in a, j in b) with i > j
        inv = 0
        rest = a
        while rest:
            low = rest & -rest
            inv += bin(b & (low - 1)).count("1")
            rest ^= low
        return (Q(-1) if inv % 2 else Q(1)), a | b

    def label(self, mask: int) -> str:
        if mask == 0:
            return "1"
        return ".".join(self.gen_names[i] for i in range(self.ngens)
                        if mask & (1 << i))

    def monomials_of_degree(self, p: int) -> list[int]:
        return [m for m in range(self.dim) if self.degree(m) == p]

    def all_monomials(self) -> list[int]:
        return sorted(range(self.dim), key=lambda m: (self.degree(m), m))


@dataclass(frozen=True)
class ExtElement:
    """Element of an exterior algebra: sparse {mask: coefficient} map."""

    algebra: ExteriorAlgebra
    coeffs: tuple[tuple[int, Fraction], ...]

    @staticmethod
    def make(algebra: ExteriorAlgebra, data: dict[int, Fraction]) -> "ExtElement":
        items = tuple(sorted((m, Q(c)) for m, c in data.items() if c != 0))
        return ExtElement(algebra, items)

    @staticmethod
    def zero(algebra: ExteriorAlgebra) -> "ExtElement":
        return ExtElement(algebra, ())

    @staticmethod
    def unit(algebra: ExteriorAlgebra) -> "ExtElement":
        return ExtElement.make(algebra, {0: Q(1)})

    @staticmethod
    def gen(algebra: ExteriorAlgebra, i: int) -> "ExtElement":
        return ExtElement.make(algebra, {1 << i: Q(1)})

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.coeffs)

    def __add__(self, other: "ExtElement") -> "ExtElement":
        d = self.as_dict()
        for m, c in other.coeffs:
            d[m] = d.get(m, Q(0)) + c
        return ExtElement.make(self.algebra, d)

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        return self + other.scale(-1)

    def scale(self, c) -> "ExtElement":
        c = Q(c)
        return ExtElement.make(self.algebra,
                               {m: c * x for m, x in self.coeffs})

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other: "ExtElement") -> "ExtElement":
        out: dict[int, Fraction] = {}
        for ma, ca in self.coeffs:
            for mb, cb in other.coeffs:
                hit = self.algebra.mul_basis(ma, mb)
                if hit is None:
                    continue
                sign, m = hit
                out[m] = out.get(m, Q(0)) + sign * ca * cb
        return ExtElement.make(self.algebra, out)

    def power(self, k: int) -> "ExtElement":
        result = ExtElement.unit(self.algebra)
        for _ in range(k):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree_part(self, p: int) -> "ExtElement":
        return ExtElement.make(self.algebra, {
            m: c for m, c in self.coeffs if self.algebra.degree(m) == p})

    def is_homogeneous(self) -> int | None:
        degs = {self.algebra.degree(m) for m, _ in self.coeffs}
        return degs.pop() if len(degs) == 1 else None

    def coefficient(self, mask: int) -> Fraction:
        return dict(self.coeffs).get(mask, Q(0))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{self.algebra.label(m)}" for m, c in self.coeffs)


class ExteriorModel:
    """H^*(J) of a genus-g Jacobian with theta class and Poincaré pairing."""

    def __init__(self, g: int):
        if g < 1:
            raise ValueError("genus must be >= 1")
        self.g = g
        names = []
        for i in range(1, g + 1):
            names += [f"xi{i}", f"eta{i}"]
        self.algebra = ExteriorAlgebra(names)
        theta = ExtElement.zero(self.algebra)
        for i in range(g):
            theta = theta + ExtElement.gen(self.algebra, 2 * i) * \
                ExtElement.gen(self.algebra, 2 * i + 1)
        self.theta = theta
        self.vol_mask = self.algebra.top_mask

    def xi(self, i: int) -> ExtElement:
        return ExtElement.gen(self.algebra, 2 * (i - 1))

    def eta(self, i: int) -> ExtElement:
        return ExtElement.gen(self.algebra, 2 * (i - 1) + 1)

    def unit(self) -> ExtElement:
        return ExtElement.unit(self.algebra)

    def integrate(self, elt: ExtElement) -> Fraction:
        """Evaluation against the fundamental class: coefficient of vol."""
        return elt.coefficient(self.vol_mask)

    def pairing(self, a: ExtElement, b: ExtElement) -> Fraction:
        return self.integrate(a * b)

    def monomial(self, mask: int) -> ExtElement:
        return ExtElement.make(self.algebra, {mask: Q(1)})

    def basis_of_degree(self, p: int) -> list[int]:
        return self.algebra.monomials_of_degree(p)

    def pairing_matrix(self, p: int) -> Matrix:
        """Matrix of <H^p, H^(2g-p)> in the monomial bases."""
        rows = []
        for a in self.basis_of_degree(p):
            row = []
            for b in self.basis_of_degree(2 * self.g - p):
                row.append(self.pairing(self.monomial(a), self.monomial(b)))
            rows.append(row)
        return Matrix.from_rows(rows, cols=len(self.basis_of_degree(2 * self.g - p)))

    def theta_matrix(self, p: int) -> Matrix:
        """Matrix of cup-with-theta from H^p to H^(p+2)."""
        src = self.basis_of_degree(p)
        dst = self.basis_of_degree(p + 2)
        index = {m: i for i, m in enumerate(dst)}
        cols = []
        for m in src:
            img = self.theta * self.monomial(m)
            col = [Q(0)] * len(dst)
            for mm, c in img.coeffs:
                col[index[mm]] = c
            cols.append(col)
        return Matrix.from_rows(zip(*cols), cols=len(src)) if src and dst else \
            Matrix.zero(len(dst), len(src))

    def element_from_coords(self, degree: int, coords) -> ExtElement:
        basis = self.basis_of_degree(degree)
        return ExtElement.make(self.algebra,
                               {m: Q(c) for m, c in zip(basis, coords)})

    def coords_of(self, elt: ExtElement, degree: int) -> tuple[Fraction, ...]:
        basis = self.basis_of_degree(degree)
        index = {m: i for i, m in enumerate(basis)}
        out = [Q(0)] * len(basis)
        for m, c in elt.coeffs:
            if self.algebra.degree(m) != degree:
                raise ValueError("element not homogeneous of the stated degree")
            out[index[m]] = c
        return tuple(out)


class CurveCohomology:
    """H^*(C) of a genus-g curve: 1, a_1..a_g, b_1..b_g, pt.

    The only nonzero products of positive-degree classes follow the
    symplectic intersection form: a_i b_i = pt = -b_i a_i.  The point
    class is the first Chern class of O_C(x) for the marked smooth point.
    """

    def __init__(self, g: int):
        self.g = g
        self.dim = 2 * g + 2
        self.top_index = 2 * g + 1

    def degree(self, i: int) -> int:
        if i == 0:
            return 0
        if i == self.top_index:
            return 2
        return 1

    def label(self, i: int) -> str:
        if i == 0:
            return "1"
        if i == self.top_index:
            return "pt"
        if 1 <= i <= self.g:
            return f"a{i}"
        return f"b{i - self.g}"

    def mul_basis(self, i: int, j: int) -> tuple[Fraction, int] | None:
        if i == 0:
            return Q(1), j
        if j == 0:
            return Q(1), i
        if self.degree(i) + self.degree(j) > 2:
            return None
        # both degree 1 from here on
        if 1 <= i <= self.g and j == i + self.g:
            return Q(1), self.top_index
        if 1 <= j <= self.g and i == j + self.g:
            return Q(-1), self.top_index
        return None

    def a(self, i: int) -> int:
        return i

    def b(self, i: int) -> int:
        return self.g + i

    def monomials_of_degree(self, p: int) -> list[int]:
        return [i for i in range(self.dim) if self.degree(i) == p]


@dataclass(frozen=True)
class ProductElement:
    """Element of H^*(X) ⊗ H^*(Y) with Koszul-sign-correct multiplication."""

    parent: "ProductAlgebra"
    coeffs: tuple[tuple[tuple[int, int], Fraction], ...]

    def as_dict(self):
        return dict(self.coeffs)

    def __add__(self, other):
        d = self.as_dict()
        for key, c in other.coeffs:
            d[key] = d.get(key, Q(0)) + c
        return self.parent.element(d)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Q(c)
        return self.parent.element({k: c * x for k, x in self.coeffs})

    def __mul__(self, other):
        left, right = self.parent.left, self.parent.right
        out = {}
        for (la, ra), ca in self.coeffs:
            for (lb, rb), cb in other.coeffs:
                lhit = left.mul_basis(la, lb)
                if lhit is None:
                    continue
                rhit = right.mul_basis(ra, rb)
                if rhit is None:
                    continue
                # (x ⊗ y)(x' ⊗ y') = (-1)^{|y||x'|} xx' ⊗ yy'
                sign = Q(-1) if (right.degree(ra) * left.degree(lb)) % 2 else Q(1)
                ls, lm = lhit
                rs, rm = rhit
                key = (lm, rm)
                out[key] = out.get(key, Q(0)) + sign * ls * rs * ca * cb
        return self.parent.element(out)

    def power(self, k: int):
        result = self.parent.unit()
        for _ in range(k):
            result = result * self
        return result

    def is_zero(self):
        return not self.coeffs


class ProductAlgebra:
    """Tensor product of two graded algebras with the Koszul sign rule."""

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def element(self, data: dict[tuple[int, int], Fraction]) -> ProductElement:
        items = tuple(sorted(((k, Q(c)) for k, c in data.items() if c != 0)))
        return ProductElement(self, items)

    def zero(self) -> ProductElement:
        return self.element({})

    def unit(self) -> ProductElement:
        return self.element({(self._unit_left(), self._unit_right()): Q(1)})

    def _unit_left(self):
        return 0

    def _unit_right(self):
        return 0

    def from_left(self, idx: int, coeff=1) -> ProductElement:
        return self.element({(idx, self._unit_right()): Q(coeff)})

    def from_right(self, idx: int, coeff=1) -> ProductElement:
        return self.element({(self._unit_left(), idx): Q(coeff)})

    def lift_left(self, elt: ExtElement) -> ProductElement:
        return self.element({(m, self._unit_right()): c for m, c in elt.coeffs})

    def lift_right(self, elt: ExtElement) -> ProductElement:
        return self.element({(self._unit_left(), m): c for m, c in elt.coeffs})

    def exp(self, elt: ProductElement, max_terms: int | None = None) -> ProductElement:
        """exp of a nilpotent element with no scalar part."""
        if any(self.left.degree(l) + self.right.degree(r) == 0
               for (l, r), _ in elt.coeffs):
            raise ValueError("exp needs a positive-degree (nilpotent) argument")
        result = self.unit()
        term = self.unit()
        k = 1
        while True:
            term = term * elt
            if term.is_zero():
                break
            result = result + term.scale(Q(1, _factorial(k)))
            k += 1
            if max_terms is not None and k > max_terms:
                break
        return result

    def integrate_right(self, elt: ProductElement, top_right: int) -> dict[int, Fraction]:
        """Pushforward along the first projection: coefficient of the right top class."""
        out = {}
        for (l, r), c in elt.coeffs:
            if r == top_right:
                out[l] = out.get(l, Q(0)) + c
        return out

    def integrate_left(self, elt: ProductElement, top_left: int) -> dict[int, Fraction]:
        """Pushforward along the second projection: coefficient of the left top class."""
        out = {}
        for (l, r), c in elt.coeffs:
            if l == top_left:
                out[r] = out.get(r, Q(0)) + c
        return out


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def fourier_matrix(model: ExteriorModel) -> Matrix:
    """Cohomological Fourier transform of H^*(J) as one exact matrix.

    Computed honestly from the Poincaré bundle: with
    c1(P) = sum_i (xi_i ⊗ eta'_i - eta_i ⊗ xi'_i) on J x J,

        F(beta) = q_{1,*}( exp(c1(P)) ∪ q_2^*(beta) ),

    where q_{1,*} integrates the second factor.  Rows and columns are
    indexed by the degree-sorted monomial basis of H^*(J); the matrix
    maps H^p into H^(2g-p) and is invertible.
    """
    alg = model.algebra
    prod = ProductAlgebra(alg, alg)
    c1p = prod.zero()
    for i in range(model.g):
        xi, eta = 1 << (2 * i), 1 << (2 * i + 1)
        c1p = c1p + prod.element({(xi, eta): Q(1), (eta, xi): Q(-1)})
    ch = prod.exp(c1p)
    basis = alg.all_monomials()
    index = {m: i for i, m in enumerate(basis)}
    n = len(basis)
    cols = []
    for beta in basis:
        img = ch * prod.from_right(beta)
        flat = prod.integrate_right(img, alg.top_mask)
        col = [Q(0)] * n
        for m, c in flat.items():
            col[index[m]] = c
        cols.append(col)
    return Matrix.from_rows(zip(*cols), cols=n)


def picard_chern_character(g: int, n: int) -> ExtElement:
    """Chern character of the Picard bundle, by Riemann-Roch on C x J.

    Pushes (1 + n x)(1 + (1-g) x) · exp(c1(F)) down the second projection,
    with c1(F) = sum_i (a_i ⊗ eta_i - b_i ⊗ xi_i) and no pt ⊗ (-) term --
    the normalization that makes the fiber of F at the marked point
    trivial.  Valid for n >= 2g - 1 (a warning is issued below that).
    """
    if n < 2 * g - 1:
        import warnings
        warnings.warn(f"Picard bundle needs n >= 2g-1 = {2 * g - 1}; got n={n}",
                      stacklevel=2)
    curve = CurveCohomology(g)
    jac = ExteriorModel(g)
    prod = ProductAlgebra(curve, jac.algebra)
    c1f = prod.zero()
    for i in range(1, g + 1):
        c1f = c1f + prod.element({
            (curve.a(i), 1 << (2 * (i - 1) + 1)): Q(1),   # a_i ⊗ eta_i
            (curve.b(i), 1 << (2 * (i - 1))): Q(-1),      # -b_i ⊗ xi_i
        })
    chf = prod.exp(c1f)
    x = prod.from_left(curve.top_index)
    unit = prod.unit()
    twist = (unit + x.scale(n)) * (unit + x.scale(1 - g))
    total = twist * chf
    pushed = prod.integrate_left(total, curve.top_index)
    return ExtElement.make(jac.algebra, pushed)


def chern_classes_from_character(ch: ExtElement, g: int) -> list[ExtElement]:
    """Chern classes c_0..c_g from a Chern character via Newton's identities."""
    alg = ch.algebra
    p = [ExtElement.zero(alg)]  # power sums p_i = i! ch_i
    for i in range(1, g + 1):
        p.append(ch.degree_part(2 * i).scale(_factorial(i)))
    c = [ExtElement.unit(alg)]
    for i in range(1, g + 1):
        acc = ExtElement.zero(alg)
        for k in range(1, i + 1):
            term = c[i - k] * p[k]
            acc = acc + (term if k % 2 == 1 else term.scale(-1))
        c.append(acc.scale(Q(1, i)))
    return c
