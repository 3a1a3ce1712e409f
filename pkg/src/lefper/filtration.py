"""Weight filtrations of nilpotent operators and their sl2 companions.

Three independent routes to the same structure live here:

* :func:`weight_filtration` builds the unique increasing filtration of a
  nilpotent operator L directly from kernels and images of its powers,
  via ``W_{c+m} = sum_b  im L^b  ∩  ker L^{b+m+1}``, and re-verifies the
  two defining properties on the output before returning.
* :func:`jacobson_morozov` completes a nilpotent e to an exact sl2-triple
  (e, h, f) by decomposing the space into e-chains; the filtration by
  h-eigenvalues (:func:`h_eigenvalue_filtration`) must reproduce
  :func:`weight_filtration` — two algorithms, one answer.
* :func:`lambda_from_duality` builds the lowering operator from the
  Poincaré pairing and the hard-Lefschetz isomorphisms.

:func:`check_opposite` compares an increasing filtration pair against the
oppositeness condition ``W_k ∩ P_{<=m} = 0 whenever m + k < total``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graded import (
    BigradedSpace,
    Component,
    Filtration,
    GradedOperator,
    Sl2Triple,
    commutator,
    compose,
)
from .rational_linalg import (
    DimensionMismatchError,
    Matrix,
    Q,
    Subspace,
    integer_eigenspaces,
    intersect,
    inverse,
    kernel,
    subspace_sum,
)

__all__ = [
    "NilpotencyError",
    "CenterError",
    "PairingError",
    "ModelError",
    "InternalConsistencyError",
    "WeightFiltrationResult",
    "weight_filtration",
    "jacobson_morozov",
    "h_eigenvalue_filtration",
    "PairingData",
    "lambda_from_duality",
    "OppositenessReport",
    "check_opposite",
]


class NilpotencyError(ValueError):
    """The supplied operator is not nilpotent."""


class CenterError(ValueError):
    """The requested center cannot accommodate the operator's chain lengths."""


class PairingError(ValueError):
    """The supplied Poincaré pairing is not perfect."""


class ModelError(ValueError):
    """A model-level hypothesis (e.g. hard Lefschetz) fails on the input."""


class InternalConsistencyError(RuntimeError):
    """Output re-verification failed; this firing is a bug, never expected."""


def _nilpotency_index(m: Matrix) -> int:
    """Least d with m^d = 0, or raise NilpotencyError (checked up to dim)."""
    if not m.is_square():
        raise DimensionMismatchError("nilpotent operators must be square")
    if m.rows == 0:
        return 0
    power = Matrix.identity(m.rows)
    for d in range(m.rows + 1):
        if power.is_zero():
            return d
        power = power @ m
    raise NilpotencyError("operator is not nilpotent (no power up to dim vanishes)")


def _power_table(m: Matrix, up_to: int) -> list[Matrix]:
    powers = [Matrix.identity(m.rows)]
    for _ in range(up_to):
        powers.append(powers[-1] @ m)
    return powers


@dataclass(frozen=True)
class WeightFiltrationResult:
    """The weight filtration of a nilpotent operator, with its certificate.

    ``graded_dims`` lists dim Gr_j for j = 0..2*center.  ``verified``
    records the two defining properties, re-checked on the output:
    ``shift`` for L W_k ⊆ W_{k-2} and ``graded_iso`` for the isomorphisms
    L^j : Gr_{center+j} -> Gr_{center-j}.
    """

    filtration: Filtration
    center: int
    graded_dims: tuple[int, ...]
    verified: dict[str, bool]


def _flat(op) -> Matrix:
    return op.flat_matrix() if isinstance(op, GradedOperator) else op


def weight_filtration(op, center: int) -> WeightFiltrationResult:
    """Deligne's unique increasing filtration of a nilpotent operator.

    ``op`` may be a square :class:`Matrix` or a :class:`GradedOperator`
    endomorphism (flattened internally).  The filtration is indexed
    0..2*center and satisfies (1) L W_k ⊆ W_{k-2} and (2) L^j induces an
    isomorphism Gr_{center+j} -> Gr_{center-j}; both properties are
    re-verified before returning and a failure raises
    InternalConsistencyError.

    The zero operator is legal and concentrates all weight at the center.
    The center must satisfy center >= d-1 where d is the nilpotency
    index, otherwise the longest chains do not fit in [0, 2*center].
    """
    m = _flat(op)
    d = _nilpotency_index(m)
    n = m.rows
    if center < 0:
        raise CenterError("center must be nonnegative")
    if center < d - 1:
        raise CenterError(
            f"center {center} too small: nilpotency index {d} needs center >= {d - 1}")
    powers = _power_table(m, d)

    def ker_pow(e: int) -> Subspace:
        if e <= 0:
            return Subspace.zero(n)
        if e >= d:
            return Subspace.full(n)
        return kernel(powers[e])

    def im_pow(e: int) -> Subspace:
        if e <= 0:
            return Subspace.full(n)
        if e >= d:
            return Subspace.zero(n)
        return Subspace.from_spanning(
            [powers[e].column(j) for j in range(n)], n)

    steps = {}
    for k in range(0, 2 * center + 1):
        shift = k - center
        acc = Subspace.zero(n)
        for b in range(0, d + 1):
            piece = intersect(im_pow(b), ker_pow(b + shift + 1))
            acc = subspace_sum(acc, piece)
        steps[k] = acc
    filt = Filtration(n, steps)

    shift_ok = True
    for k in range(0, 2 * center + 1):
        target = filt.step(k - 2)
        for v in filt.step(k).basis_vectors():
            if not target.contains(m.apply(v)):
                shift_ok = False
    iso_ok = True
    for j in range(0, center + 1):
        hi, lo = filt.step(center + j), filt.step(center - j)
        below_hi, below_lo = filt.step(center + j - 1), filt.step(center - j - 1)
        if hi.dim - below_hi.dim != lo.dim - below_lo.dim:
            iso_ok = False
            continue
        mapped = subspace_sum(
            Subspace.from_spanning(
                [powers[j].apply(v) for v in hi.basis_vectors()], n),
            below_lo)
        if not mapped.contains_subspace(lo):
            iso_ok = False
    verified = {"shift": shift_ok, "graded_iso": iso_ok}
    if not (shift_ok and iso_ok):
        raise InternalConsistencyError(
            f"weight filtration failed its own re-verification: {verified}")
    graded = tuple(filt.step(k).dim - filt.step(k - 1).dim
                   for k in range(0, 2 * center + 1))
    return WeightFiltrationResult(filt, center, graded, verified)


# --------------------------------------------------------------------- sl2


def _as_graded(op) -> GradedOperator:
    if isinstance(op, GradedOperator):
        return op
    space = BigradedSpace(
        "flat", {(0, 0): tuple(f"e{i}" for i in range(op.rows))})
    return GradedOperator.from_blocks("e", space, space, (0, 0), {(0, 0): op})


def jacobson_morozov(op) -> Sl2Triple:
    """Complete a nilpotent e to an exact sl2-triple (e, h, f).

    The space is split into e-chains (Jordan strings).  Along a chain of
    length L the h-weights are 1-L, 3-L, ..., L-1 going up the chain, and
    f acts by f(e^t u) = t (L - t) e^(t-1) u, the irreducible-string
    coefficients.  Chain generators are chosen per graded component, so
    for a bidegree-homogeneous e the returned h and f are homogeneous of
    bidegree (0,0) and -bidegree(e).

    Returns a verified :class:`Sl2Triple`; raises NilpotencyError when e
    is not nilpotent.
    """
    e = _as_graded(op)
    if e.source.components != e.target.components:
        raise DimensionMismatchError("jacobson_morozov needs an endomorphism")
    space = e.source
    flat = e.flat_matrix()
    d = _nilpotency_index(flat)
    total = space.total_dim

    # per-component image of e (local coordinates in each target component)
    im_local: dict[Component, list] = {c: [] for c in space.components}
    for c in space.components:
        t, m = e.block(c)
        if m is not None:
            for j in range(m.cols):
                im_local[t].append(m.column(j))
    running = {c: Subspace.from_spanning(im_local[c], space.dim(c))
               for c in space.components}

    # per-component blocks of e^l
    e_pows = [GradedOperator.identity(space)]
    for _ in range(d):
        e_pows.append(compose(e, e_pows[-1]))

    chains: list[list[dict]] = []  # chain = list of {comp, vec(local), weight}
    for length in range(1, d + 1):
        for c in space.sorted_components():
            blk = e_pows[length].block(c)[1]
            ker_c = (Subspace.full(space.dim(c)) if blk is None
                     else kernel(blk))
            for u in ker_c.basis_vectors():
                if running[c].contains(u):
                    continue
                running[c] = subspace_sum(
                    running[c], Subspace.from_spanning([u], space.dim(c)))
                chain = []
                comp, vec = c, dict({c: u})
                for t in range(length):
                    (cc, vv), = ((k, v) for k, v in vec.items()
                                 if any(x != 0 for x in v))
                    chain.append({"comp": cc, "vec": tuple(vv),
                                  "weight": 2 * t - (length - 1)})
                    vec = e.apply({cc: vv})
                if any(any(x != 0 for x in v) for v in vec.values()):
                    raise InternalConsistencyError(
                        "chain does not terminate at its declared length")
                chains.append(chain)

    flat_vectors = [space.flatten({link["comp"]: link["vec"]})
                    for chain in chains for link in chain]
    if len(flat_vectors) != total or (
            total and Subspace.from_spanning(flat_vectors, total).dim != total):
        raise InternalConsistencyError("chain vectors do not form a basis")

    # assemble h and f blockwise from the chain basis
    by_comp: dict[Component, list[tuple[dict, dict | None]]] = {
        c: [] for c in space.components}
    for chain in chains:
        for t, link in enumerate(chain):
            prev = chain[t - 1] if t > 0 else None
            coeff = Q(t * (len(chain) - t))
            by_comp[link["comp"]].append((link, (prev, coeff) if prev else None))

    h_blocks, f_blocks = {}, {}
    bid = e.bidegree if e.bidegree is not None else (0, 0)
    f_bid = (-bid[0], -bid[1])
    for c in space.components:
        entries = by_comp[c]
        dim_c = space.dim(c)
        if dim_c == 0:
            continue
        p = Matrix.from_rows(zip(*[link["vec"] for link, _ in entries]),
                             cols=dim_c)
        p_inv = inverse(p)
        h_diag = Matrix.from_rows(
            [[Q(entries[i][0]["weight"]) if i == j else Q(0)
              for j in range(dim_c)] for i in range(dim_c)])
        h_blocks[c] = p @ h_diag @ p_inv
        tgt = (c[0] + f_bid[0], c[1] + f_bid[1])
        if any(pr is not None for _, pr in entries):
            cols = []
            for link, pr in entries:
                if pr is None:
                    cols.append(tuple(Q(0) for _ in range(space.dim(tgt))))
                else:
                    prev, coeff = pr
                    cols.append(tuple(coeff * x for x in prev["vec"]))
            f_img = Matrix.from_rows(zip(*cols), cols=dim_c)
            f_blocks[c] = f_img @ p_inv
    h = GradedOperator.from_blocks("h", space, space, (0, 0), h_blocks)
    f = GradedOperator.from_blocks("f", space, space, f_bid, f_blocks)
    return Sl2Triple.build(e, h, f)


def h_eigenvalue_filtration(h: GradedOperator, center: int) -> Filtration:
    """Increasing filtration W_k = span{h-eigenvectors of weight >= center-k}.

    This is the filtration attached to an sl2-triple whose raising
    operator is the nilpotent under study; it must coincide with
    :func:`weight_filtration` of that operator at the same center.
    """
    m = h.flat_matrix()
    n = m.rows
    bound = max(1, n)
    pairs, complete = integer_eigenspaces(m, range(-bound, bound + 1))
    if not complete:
        raise ModelError("h has no complete integer eigen-decomposition")
    steps = {}
    for k in range(0, 2 * center + 1):
        acc = Subspace.zero(n)
        for lam, eig in pairs:
            if lam >= center - k:
                acc = subspace_sum(acc, eig)
        steps[k] = acc
    if steps[2 * center].dim != n or (
            center > 0 and any(lam < -center or lam > center for lam, _ in pairs)):
        raise CenterError("h-spectrum does not fit the requested center")
    return Filtration(n, steps)


# ------------------------------------------------------------------- duality


@dataclass(frozen=True)
class PairingData:
    """Poincaré pairing of a cohomology-like graded space.

    ``space`` must be graded as (0, p) with p the cohomological degree,
    0 <= p <= 2*center.  ``pairing[p]`` is the matrix of the perfect
    pairing H^p x H^(2*center-p) -> Q in the component bases.
    """

    space: BigradedSpace
    center: int
    pairing: dict[int, Matrix]

    def block(self, p: int) -> Matrix:
        return self.pairing[p]


def lambda_from_duality(L: GradedOperator, pd: PairingData) -> GradedOperator:
    """The degree-lowering member of the Lefschetz sl2-triple, from duality.

    Built as the pairing-adjoint of L twisted by the hard-Lefschetz
    isomorphisms: on H^p the operator is PD~^{-1} ∘ L^T ∘ PD~ where
    PD~(a)(b) integrates a against b through the appropriate power of L.
    The overall sign is fixed, once and globally, so that
    (L, [L, Lambda], Lambda) verifies as an sl2-triple with [L, Lambda]
    acting on H^(center+j) with eigenvalue j; the opposite global sign
    would negate the bracket and fail verification.

    Raises PairingError for a degenerate pairing and ModelError when a
    hard-Lefschetz power fails to be an isomorphism (only smooth-type
    models satisfy the hypothesis).
    """
    space = pd.space
    nn = pd.center
    degrees = sorted(k for (_, k) in space.components)
    if L.source.components != space.components:
        raise DimensionMismatchError("operator and pairing live on different spaces")

    # perfect pairing per degree
    for p in degrees:
        mat = pd.pairing.get(p)
        q = 2 * nn - p
        if mat is None or mat.rows != space.dim((0, p)) or mat.cols != space.dim((0, q)):
            raise PairingError(f"missing or misshaped pairing block at degree {p}")
        if mat.rows != mat.cols:
            raise PairingError(
                f"pairing at degree {p} cannot be perfect: dims "
                f"{mat.rows} vs {mat.cols}")
        if mat.rows > 0 and _is_singular(mat):
            raise PairingError(f"pairing degenerate at degree {p}")

    def l_power_block(p: int, j: int) -> Matrix:
        mat = Matrix.identity(space.dim((0, p)))
        cur = p
        for _ in range(j):
            blk = L.block((0, cur))[1]
            if blk is None:
                blk = Matrix.zero(space.dim((0, cur + 2)), space.dim((0, cur)))
            mat = blk @ mat
            cur += 2
        return mat

    pd_tilde: dict[int, Matrix] = {}
    for p in degrees:
        dim_p = space.dim((0, p))
        if dim_p == 0:
            continue
        if p <= nn:
            a = l_power_block(p, nn - p)
            if a.rows and _is_singular(a):
                raise ModelError(
                    f"hard-Lefschetz power L^{nn - p} is not an isomorphism at degree {p}")
            pd_tilde[p] = a.transpose() @ pd.pairing[2 * nn - p]
        else:
            b = l_power_block(2 * nn - p, p - nn)
            if b.rows != b.cols or _is_singular(b):
                raise ModelError(
                    f"hard-Lefschetz power L^{p - nn} is not an isomorphism "
                    f"onto degree {p}")
            pd_tilde[p] = pd.pairing[p] @ inverse(b)

    lam_blocks = {}
    for p in degrees:
        if p - 2 not in pd_tilde or p not in pd_tilde:
            continue
        l_up = L.block((0, p - 2))[1]
        if l_up is None:
            continue
        lam_blocks[(0, p)] = inverse(pd_tilde[p - 2]) @ l_up.transpose() @ pd_tilde[p]
    lam = GradedOperator.from_blocks("Lambda", space, space, (0, -2), lam_blocks)

    h = commutator(L, lam, name="[L,Lambda]")
    Sl2Triple.build(L, h, lam)  # raises Sl2VerificationError on failure
    return lam


def _is_singular(m: Matrix) -> bool:
    from .rational_linalg import rank as _rank
    return m.rows != m.cols or _rank(m) != m.rows


# -------------------------------------------------------------- oppositeness


@dataclass(frozen=True)
class OppositenessReport:
    """All pairwise intersection dimensions of two increasing filtrations.

    ``table`` maps (k, m) to dim(W_k ∩ P_{<=m}).  ``violations`` lists the
    pairs with m + k < total but a nonzero intersection.  The
    complementary-dimension identity dim W_k + dim P_{<=m} = ambient at
    m + k = total - 1 is recorded in ``complement_identity`` but never
    asserted.
    """

    total: int
    table: dict[tuple[int, int], int]
    violations: tuple[tuple[int, int], ...]
    complement_identity: dict[tuple[int, int], bool]

    @property
    def is_opposite(self) -> bool:
        return not self.violations


def check_opposite(w: Filtration, p: Filtration, total: int) -> OppositenessReport:
    """Test W_k ∩ P_{<=m} = 0 for all m + k < total, reporting every pair."""
    if w.ambient_dim != p.ambient_dim:
        raise DimensionMismatchError(
            f"filtrations live in different spaces: {w.ambient_dim} vs {p.ambient_dim}")
    table = {}
    violations = []
    complement = {}
    for k, m in itertools.product(range(w.lo, w.hi + 1), range(p.lo, p.hi + 1)):
        dim = intersect(w.step(k), p.step(m)).dim
        table[(k, m)] = dim
        if m + k < total and dim > 0:
            violations.append((k, m))
        if m + k == total - 1:
            complement[(k, m)] = (w.step(k).dim + p.step(m).dim == w.ambient_dim)
    return OppositenessReport(total, table, tuple(violations), complement)
