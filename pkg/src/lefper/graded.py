"""Bigraded vector spaces and bidegree-homogeneous block operators.

A :class:`BigradedSpace` is a finite family of components indexed by
``(n, k)`` where ``n`` is the Hilbert index and ``k`` the homological
degree.  It is the common language for the full Hilbert-scheme homology
``V = (+) H_k(C^[n])`` and for ``H_*(J)`` (the latter with the ``n``
index collapsed to a single slot).

Operators store one matrix block per source component.  Most operators
are homogeneous of a fixed bidegree ``(dn, dk)``; the Fourier transform
is the one resident that is not (it flips the homological degree), so
blocks always carry their target component explicitly and ``bidegree``
may be ``None``.

Spaces may be truncated in the Hilbert direction at ``n_max``.  The
truncation is never silent: applying or composing operators through a
component above the window raises :class:`WindowTruncationError`, and the
verification drivers downgrade such checks to "untested" rather than
extrapolating.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .rational_linalg import (
    DimensionMismatchError,
    Matrix,
    Q,
    Subspace,
    integer_eigenspaces,
)

Component = tuple[int, int]

__all__ = [
    "BigradedSpace",
    "GradedOperator",
    "Filtration",
    "Sl2Triple",
    "CompositionError",
    "WindowTruncationError",
    "InvarianceError",
    "Sl2VerificationError",
    "compose",
    "commutator",
    "restrict",
]


class CompositionError(ValueError):
    """Spaces or bidegrees of two operators do not fit together."""


class WindowTruncationError(RuntimeError):
    """An operation needs a component above the modeled window n <= n_max."""


class InvarianceError(ValueError):
    """An operator fails to map a subspace family into itself."""


class Sl2VerificationError(ValueError):
    """A claimed (e, h, f) triple violates one of the bracket relations."""


@dataclass(frozen=True)
class BigradedSpace:
    """Finite-dimensional Q-vector space graded by (n, k), with named bases.

    ``components`` maps (n, k) to the tuple of basis labels of that
    component; absent components have dimension zero.  ``n_max`` bounds the
    modeled window in the Hilbert direction (``None`` = the space is
    complete, e.g. H_*(J)).
    """

    name: str
    components: Mapping[Component, tuple[str, ...]]
    n_max: int | None = None

    def __post_init__(self):
        comps = {tuple(c): tuple(labels) for c, labels in self.components.items()}
        for (n, k), labels in comps.items():
            if n < 0 or k < 0:
                raise ValueError(f"negative grading ({n},{k}) in {self.name}")
            if self.n_max is not None and n > self.n_max:
                raise ValueError(f"component ({n},{k}) beyond window {self.n_max}")
        object.__setattr__(self, "components", comps)

    def dim(self, comp: Component) -> int:
        return len(self.components.get(comp, ()))

    def labels(self, comp: Component) -> tuple[str, ...]:
        return self.components.get(comp, ())

    def sorted_components(self) -> list[Component]:
        return sorted(self.components)

    @property
    def total_dim(self) -> int:
        return sum(len(v) for v in self.components.values())

    def has(self, comp: Component) -> bool:
        return comp in self.components

    def in_window(self, comp: Component) -> bool:
        return self.n_max is None or comp[0] <= self.n_max

    def slice_components(self, n: int) -> list[Component]:
        return sorted(c for c in self.components if c[0] == n)

    # -------------------------------------------------------------- flattening
    def offsets(self) -> dict[Component, int]:
        off, pos = {}, 0
        for c in self.sorted_components():
            off[c] = pos
            pos += self.dim(c)
        return off

    def flatten(self, by_component: Mapping[Component, Sequence]) -> tuple[Fraction, ...]:
        off = self.offsets()
        out = [Q(0)] * self.total_dim
        for c, vec in by_component.items():
            if c not in self.components:
                if any(Q(x) != 0 for x in vec):
                    raise DimensionMismatchError(f"component {c} not in {self.name}")
                continue
            if len(vec) != self.dim(c):
                raise DimensionMismatchError(f"bad vector length at {c}")
            base = off[c]
            for i, x in enumerate(vec):
                out[base + i] = Q(x)
        return tuple(out)

    def unflatten(self, vec: Sequence) -> dict[Component, tuple[Fraction, ...]]:
        if len(vec) != self.total_dim:
            raise DimensionMismatchError("flat vector length mismatch")
        out = {}
        pos = 0
        for c in self.sorted_components():
            d = self.dim(c)
            out[c] = tuple(Q(x) for x in vec[pos:pos + d])
            pos += d
        return out

    def basis_vector(self, comp: Component, i: int) -> dict[Component, tuple[Fraction, ...]]:
        d = self.dim(comp)
        return {comp: tuple(Q(1) if j == i else Q(0) for j in range(d))}

    def label_of_flat(self, index: int) -> str:
        for c in self.sorted_components():
            d = self.dim(c)
            if index < d:
                return f"({c[0]},{c[1]}):{self.labels(c)[index]}"
            index -= d
        raise IndexError(index)


def _describe(vec: Sequence[Fraction], labels: Sequence[str]) -> str:
    parts = [f"{x}*{lab}" for x, lab in zip(vec, labels) if x != 0]
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GradedOperator:
    """Block-matrix linear map between bigraded spaces.

    ``blocks`` maps a source component to ``(target component, matrix)``;
    the matrix takes column vectors in the source component's basis to the
    target component's basis.  Absent blocks act as zero, except that a
    homogeneous operator whose nominal target would fall above the source
    window is *truncated*, which is reported rather than treated as zero.
    """

    name: str
    source: BigradedSpace
    target: BigradedSpace
    blocks: Mapping[Component, tuple[Component, Matrix]]
    bidegree: tuple[int, int] | None = None
    truncated: frozenset[Component] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "truncated", frozenset(
            tuple(c) for c in self.truncated))
        blocks = {}
        for c, (t, m) in self.blocks.items():
            c, t = tuple(c), tuple(t)
            if not self.source.has(c):
                raise DimensionMismatchError(
                    f"{self.name}: source component {c} not in {self.source.name}")
            if not self.target.has(t):
                raise DimensionMismatchError(
                    f"{self.name}: target component {t} not in {self.target.name}")
            if m.cols != self.source.dim(c) or m.rows != self.target.dim(t):
                raise DimensionMismatchError(
                    f"{self.name}: block {c}->{t} has shape {m.rows}x{m.cols}, "
                    f"expected {self.target.dim(t)}x{self.source.dim(c)}")
            if self.bidegree is not None:
                dn, dk = self.bidegree
                if t != (c[0] + dn, c[1] + dk):
                    raise DimensionMismatchError(
                        f"{self.name}: block {c}->{t} violates bidegree {self.bidegree}")
            blocks[c] = (t, m)
        object.__setattr__(self, "blocks", blocks)

    # ---------------------------------------------------------------- builders
    @staticmethod
    def identity(space: BigradedSpace, name: str = "id") -> "GradedOperator":
        blocks = {c: (c, Matrix.identity(space.dim(c)))
                  for c in space.components}
        return GradedOperator(name, space, space, blocks, (0, 0))

    @staticmethod
    def zero(source: BigradedSpace, target: BigradedSpace | None = None,
             bidegree: tuple[int, int] | None = (0, 0),
             name: str = "0") -> "GradedOperator":
        return GradedOperator(name, source, target or source, {}, bidegree)

    @staticmethod
    def from_blocks(name, source, target, bidegree, blocks_by_source):
        """Homogeneous operator from a {source component: matrix} mapping."""
        dn, dk = bidegree
        blocks = {c: ((c[0] + dn, c[1] + dk), m)
                  for c, m in blocks_by_source.items()}
        return GradedOperator(name, source, target, blocks, bidegree)

    # ------------------------------------------------------------- application
    def truncated_at(self, comp: Component) -> bool:
        """True when the action on ``comp`` is unknown due to the window.

        This happens for composites routed through unmodeled components
        (recorded in ``truncated``) and for homogeneous operators whose
        nominal target from ``comp`` lies above ``n_max``.
        """
        if comp in self.truncated:
            return True
        if comp in self.blocks or self.bidegree is None:
            return False
        n, k = comp[0] + self.bidegree[0], comp[1] + self.bidegree[1]
        if n < 0 or k < 0 or (n, k) in self.target.components:
            return False
        return self.target.n_max is not None and n > self.target.n_max

    def target_of(self, comp: Component) -> Component | None:
        """Nominal target component, or None when the map is genuinely zero.

        Raises WindowTruncationError when the action is unmodeled rather
        than zero.
        """
        if self.truncated_at(comp):
            raise WindowTruncationError(
                f"{self.name} is not modeled on component {comp} "
                f"(window n_max={self.target.n_max})")
        if comp in self.blocks:
            return self.blocks[comp][0]
        if self.bidegree is None:
            return None  # non-homogeneous operators carry all blocks explicitly
        n, k = comp[0] + self.bidegree[0], comp[1] + self.bidegree[1]
        if n < 0 or k < 0 or (n, k) not in self.target.components:
            return None
        return (n, k)

    def block(self, comp: Component) -> tuple[Component | None, Matrix | None]:
        if comp in self.blocks:
            return self.blocks[comp]
        t = self.target_of(comp)
        if t is None:
            return None, None
        return t, Matrix.zero(self.target.dim(t), self.source.dim(comp))

    def apply(self, by_component: Mapping[Component, Sequence]
              ) -> dict[Component, tuple[Fraction, ...]]:
        out: dict[Component, list[Fraction]] = {}
        for c, vec in by_component.items():
            if all(Q(x) == 0 for x in vec):
                continue
            t, m = self.block(c)
            if m is None:
                continue
            img = m.apply(vec)
            if t in out:
                out[t] = [a + b for a, b in zip(out[t], img)]
            else:
                out[t] = list(img)
        return {c: tuple(v) for c, v in out.items()}

    def flat_matrix(self) -> Matrix:
        """The operator as one matrix over the flattened source/target bases."""
        soff, toff = self.source.offsets(), self.target.offsets()
        rows, cols = self.target.total_dim, self.source.total_dim
        grid = [[Q(0)] * cols for _ in range(rows)]
        for c in self.source.components:
            t, m = self.block(c)  # raises on truncated components
            if m is None:
                continue
            r0, c0 = toff[t], soff[c]
            for i in range(m.rows):
                for j in range(m.cols):
                    grid[r0 + i][c0 + j] = m.entries[i][j]
        return Matrix(rows, cols, tuple(tuple(r) for r in grid))

    # ----------------------------------------------------------------- algebra
    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, lambda a, b: a + b, f"({self.name}+{other.name})")

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, lambda a, b: a - b, f"({self.name}-{other.name})")

    def _combine(self, other, op, name):
        if self.source is not other.source and self.source.components != other.source.components:
            raise CompositionError(f"source spaces differ: {self.name} vs {other.name}")
        if self.target is not other.target and self.target.components != other.target.components:
            raise CompositionError(f"target spaces differ: {self.name} vs {other.name}")
        blocks = {}
        truncated = set()
        for c in self.source.components:
            if self.truncated_at(c) or other.truncated_at(c):
                truncated.add(c)
                continue
            t1, m1 = self.block(c)
            t2, m2 = other.block(c)
            if m1 is None and m2 is None:
                continue
            if m1 is None:
                t1, m1 = t2, Matrix.zero(m2.rows, m2.cols)
            if m2 is None:
                t2, m2 = t1, Matrix.zero(m1.rows, m1.cols)
            if t1 != t2:
                raise CompositionError(
                    f"blocks from {c} land in different components {t1} vs {t2}")
            blocks[c] = (t1, op(m1, m2))
        bid = self.bidegree if self.bidegree == other.bidegree else None
        return GradedOperator(name, self.source, self.target, blocks, bid,
                              frozenset(truncated))

    def scale(self, c) -> "GradedOperator":
        return GradedOperator(f"{c}*{self.name}", self.source, self.target,
                              {s: (t, m.scale(c)) for s, (t, m) in self.blocks.items()},
                              self.bidegree, self.truncated)

    def dualize(self, name: str | None = None) -> "GradedOperator":
        """Formal dual: transpose every block and negate the bidegree.

        The result acts on the same component family, read as the dual
        bases; this is the single dualization hook used to state the
        cohomology-side corollaries without a parallel model.
        """
        blocks = {t: (c, m.transpose()) for c, (t, m) in self.blocks.items()}
        bid = None if self.bidegree is None else (-self.bidegree[0], -self.bidegree[1])
        return GradedOperator(name or f"{self.name}^T", self.target, self.source,
                              blocks, bid)

    def is_effectively_zero(self) -> bool:
        return all(m.is_zero() for _, m in self.blocks.values())

    def equal_action(self, other: "GradedOperator") -> bool:
        """True when both operators act identically on every modeled component.

        Components where either side is window-truncated must be truncated
        on both sides to compare equal.
        """
        if self.source.components != other.source.components:
            return False
        for c in self.source.components:
            tr1, tr2 = self.truncated_at(c), other.truncated_at(c)
            if tr1 or tr2:
                if tr1 != tr2:
                    return False
                continue
            t1, m1 = self.block(c)
            t2, m2 = other.block(c)
            z1 = m1 is None or m1.is_zero()
            z2 = m2 is None or m2.is_zero()
            if z1 and z2:
                continue
            if z1 != z2 or t1 != t2 or m1 != m2:
                return False
        return True


def compose(a: GradedOperator, b: GradedOperator, name: str | None = None
            ) -> GradedOperator:
    """Blockwise composite ``a (after) b``; bidegrees add when both are fixed.

    Raises CompositionError when the inner spaces disagree and
    WindowTruncationError when an intermediate component is unmodeled.
    """
    if a.source.components != b.target.components:
        raise CompositionError(
            f"cannot compose {a.name} after {b.name}: "
            f"{b.name} lands in {b.target.name}, {a.name} eats {a.source.name}")
    blocks = {}
    truncated = set()
    for c in b.source.components:
        if b.truncated_at(c):
            truncated.add(c)
            continue
        t1, m1 = b.block(c)
        if m1 is None:
            continue
        if a.truncated_at(t1):
            truncated.add(c)
            continue
        t2, m2 = a.block(t1)
        if m2 is None:
            continue
        blocks[c] = (t2, m2 @ m1)
    if a.bidegree is not None and b.bidegree is not None:
        bid = (a.bidegree[0] + b.bidegree[0], a.bidegree[1] + b.bidegree[1])
    else:
        # recover homogeneity when every explicit block agrees on one shift
        shifts = {(t[0] - c[0], t[1] - c[1]) for c, (t, _) in blocks.items()}
        bid = shifts.pop() if len(shifts) == 1 else None
    return GradedOperator(name or f"{a.name}*{b.name}", b.source, a.target,
                          blocks, bid, frozenset(truncated))


def commutator(a: GradedOperator, b: GradedOperator, name: str | None = None
               ) -> GradedOperator:
    """The operator ``a b - b a``; both composites must be well-formed."""
    ab = compose(a, b)
    ba = compose(b, a)
    return ab._combine(ba, lambda x, y: x - y, name or f"[{a.name},{b.name}]")


def restrict(a: GradedOperator, sub: Mapping[Component, Subspace],
             name: str | None = None) -> GradedOperator:
    """Express ``a`` in bases of an invariant graded subspace family.

    ``sub`` assigns a subspace to each source component (missing components
    count as zero).  Invariance is checked vector by vector; a violation
    raises InvarianceError naming the offending basis vector.  The
    restricted operator lives on a fresh space with one basis label per
    subspace basis vector; it is accessible as ``result.source``.
    """
    comps = {}
    for c, s in sub.items():
        if s.ambient_dim != a.source.dim(c):
            raise DimensionMismatchError(f"subspace at {c} has wrong ambient dim")
        if s.dim:
            comps[c] = tuple(f"s{i}@{c}" for i in range(s.dim))
    space = BigradedSpace(f"{a.source.name}|sub", comps, a.source.n_max)
    blocks = {}
    for c in comps:
        s = sub[c]
        t, m = a.block(c)
        if m is None:
            continue
        images = [m.apply(v) for v in s.basis_vectors()]
        if all(all(x == 0 for x in img) for img in images):
            continue
        ts = sub.get(t, Subspace.zero(a.target.dim(t)))
        cols = []
        for i, img in enumerate(images):
            coords = ts.coords_of(img)
            if coords is None:
                v = s.basis_vectors()[i]
                raise InvarianceError(
                    f"{a.name} does not preserve the subspace family: image of "
                    f"basis vector #{i} of {c} ({_describe(v, a.source.labels(c))}) "
                    f"leaves the subspace at {t}")
            cols.append(coords)
        m_sub = Matrix.from_rows(zip(*cols), cols=len(cols))
        blocks[c] = (t, m_sub)
    return GradedOperator(name or f"{a.name}|sub", space, space, blocks, a.bidegree)


@dataclass(frozen=True)
class Filtration:
    """Increasing chain of subspaces of one flattened graded space.

    ``steps`` maps contiguous integer indices to subspaces; the accessor
    clamps below the range to the zero subspace and above it to the last
    step.  The final step must be the full ambient space.
    """

    ambient_dim: int
    steps: Mapping[int, Subspace]

    def __post_init__(self):
        steps = dict(self.steps)
        if not steps:
            raise ValueError("a filtration needs at least one step")
        idx = sorted(steps)
        if idx != list(range(idx[0], idx[-1] + 1)):
            raise ValueError("filtration indices must be contiguous")
        prev = None
        for i in idx:
            s = steps[i]
            if s.ambient_dim != self.ambient_dim:
                raise DimensionMismatchError(f"step {i} in wrong ambient space")
            if prev is not None and not s.contains_subspace(prev):
                raise ValueError(f"filtration not increasing at step {i}")
            prev = s
        if steps[idx[-1]].dim != self.ambient_dim:
            raise ValueError("last filtration step must be the whole space")
        object.__setattr__(self, "steps", steps)

    @property
    def lo(self) -> int:
        return min(self.steps)

    @property
    def hi(self) -> int:
        return max(self.steps)

    def step(self, k: int) -> Subspace:
        if k < self.lo:
            return Subspace.zero(self.ambient_dim)
        if k > self.hi:
            return self.steps[self.hi]
        return self.steps[k]

    def step_dims(self) -> dict[int, int]:
        return {k: s.dim for k, s in sorted(self.steps.items())}

    def graded_dims(self) -> dict[int, int]:
        out = {}
        for k in sorted(self.steps):
            out[k] = self.step(k).dim - self.step(k - 1).dim
        return out

    def __eq__(self, other):
        if not isinstance(other, Filtration):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim:
            return False
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return all(self.step(k) == other.step(k) for k in range(lo, hi + 1))


@dataclass(frozen=True)
class Sl2Triple:
    """Operators (e, h, f) with the verified bracket relations.

    Construction re-checks [h,e] = 2e, [h,f] = -2f and [e,f] = h as exact
    block-matrix identities and refuses anything that violates one of
    them, naming the first failing bracket.
    """

    e: GradedOperator
    h: GradedOperator
    f: GradedOperator

    @staticmethod
    def build(e: GradedOperator, h: GradedOperator, f: GradedOperator) -> "Sl2Triple":
        checks = [
            ("[h,e] = 2e", commutator(h, e), e.scale(2)),
            ("[h,f] = -2f", commutator(h, f), f.scale(-2)),
            ("[e,f] = h", commutator(e, f), h),
        ]
        for label, got, want in checks:
            if not got.equal_action(want):
                raise Sl2VerificationError(f"bracket {label} fails")
        return Sl2Triple(e, h, f)

    def h_spectrum(self) -> list[tuple[int, int]]:
        """Integer h-eigenvalues with multiplicities, from the flat matrix."""
        hm = self.h.flat_matrix()
        bound = max(1, hm.rows)
        pairs, complete = integer_eigenspaces(hm, range(-bound, bound + 1))
        if not complete:
            raise Sl2VerificationError("h is not diagonalizable with integer spectrum")
        return [(lam, s.dim) for lam, s in pairs]
