"""Bigraded spaces, block operators, window semantics, sl2 bracket checks."""

import pytest

from lefper.graded import (
    BigradedSpace,
    CompositionError,
    Filtration,
    GradedOperator,
    InvarianceError,
    Sl2Triple,
    Sl2VerificationError,
    WindowTruncationError,
    commutator,
    compose,
    restrict,
)
from lefper.rational_linalg import Matrix, Q, Subspace


def two_chain_space():
    # one generator at (0,0), its raising image at (1,0); window n_max = 1
    return BigradedSpace("T", {(0, 0): ("u",), (1, 0): ("v",)}, n_max=1)


def raising(space):
    return GradedOperator.from_blocks(
        "up", space, space, (1, 0), {(0, 0): Matrix.from_rows([[1]])})


def lowering(space):
    return GradedOperator.from_blocks(
        "down", space, space, (-1, 0), {(1, 0): Matrix.from_rows([[1]])})


def test_compose_identity_and_zero():
    sp = two_chain_space()
    up = raising(sp)
    ident = GradedOperator.identity(sp)
    zero = GradedOperator.zero(sp, bidegree=(0, 0))
    assert compose(ident, up).equal_action(up)
    assert compose(up, ident).equal_action(up)
    assert compose(zero, up).is_effectively_zero()


def test_compose_bidegrees_add():
    sp = two_chain_space()
    c = compose(lowering(sp), raising(sp))
    assert c.bidegree == (0, 0)


def test_compose_space_mismatch():
    sp = two_chain_space()
    other = BigradedSpace("O", {(0, 0): ("w",)})
    a = GradedOperator.identity(other)
    with pytest.raises(CompositionError):
        compose(a, raising(sp))


def test_window_truncation_is_loud():
    sp = two_chain_space()
    up = raising(sp)
    with pytest.raises(WindowTruncationError):
        up.apply({(1, 0): (Q(1),)})


def test_negative_degree_target_is_zero():
    sp = two_chain_space()
    down = lowering(sp)
    assert down.apply({(0, 0): (Q(1),)}) == {}


def test_commutator_self_is_zero():
    sp = two_chain_space()
    ident = GradedOperator.identity(sp)
    assert commutator(ident, ident).is_effectively_zero()


def test_commutator_canonical_pair():
    # [down, up] = id on the bottom component of a truncated ladder;
    # at the top the composite needs n=2, which is marked truncated, never zero.
    sp = two_chain_space()
    up, down = raising(sp), lowering(sp)
    c = commutator(down, up)
    assert c.block((0, 0))[1] == Matrix.identity(1)
    assert c.truncated_at((1, 0))
    with pytest.raises(WindowTruncationError):
        c.block((1, 0))


def test_restrict_identity():
    sp = two_chain_space()
    sub = {(0, 0): Subspace.full(1)}
    r = restrict(GradedOperator.identity(sp), sub)
    assert r.block((0, 0))[1] == Matrix.identity(1)


def test_restrict_invariance_violation_names_vector():
    sp = BigradedSpace("S", {(0, 0): ("x", "y")})
    swap = GradedOperator.from_blocks(
        "swap", sp, sp, (0, 0), {(0, 0): Matrix.from_rows([[0, 1], [1, 0]])})
    sub = {(0, 0): Subspace.from_spanning([[1, 0]], 2)}
    with pytest.raises(InvarianceError) as err:
        restrict(swap, sub)
    assert "basis vector #0" in str(err.value)
    assert "x" in str(err.value)


def test_restrict_expresses_in_sub_coordinates():
    sp = BigradedSpace("S", {(0, 0): ("x", "y")})
    double = GradedOperator.from_blocks(
        "d", sp, sp, (0, 0), {(0, 0): Matrix.from_rows([[2, 0], [0, 3]])})
    sub = {(0, 0): Subspace.from_spanning([[0, 1]], 2)}
    r = restrict(double, sub)
    assert r.block((0, 0))[1] == Matrix.from_rows([[3]])


def test_flatten_roundtrip():
    sp = BigradedSpace("S", {(0, 0): ("a", "b"), (1, 2): ("c",)})
    v = {(0, 0): (Q(1), Q(2)), (1, 2): (Q(3),)}
    assert sp.unflatten(sp.flatten(v)) == v
    assert sp.total_dim == 3
    assert sp.label_of_flat(2) == "(1,2):c"


def test_dualize_transposes_and_negates():
    sp = two_chain_space()
    up = raising(sp)
    down = up.dualize()
    assert down.bidegree == (-1, 0)
    assert down.block((1, 0))[1] == Matrix.from_rows([[1]])


# ------------------------------------------------------------------ filtration

def test_filtration_validation():
    s0 = Subspace.zero(2)
    s1 = Subspace.from_spanning([[1, 0]], 2)
    s2 = Subspace.full(2)
    f = Filtration(2, {0: s0, 1: s1, 2: s2})
    assert f.step_dims() == {0: 0, 1: 1, 2: 2}
    assert f.graded_dims() == {0: 0, 1: 1, 2: 1}
    assert f.step(-5).is_zero()
    assert f.step(99) == s2
    with pytest.raises(ValueError):
        Filtration(2, {0: s2, 1: s1, 2: s2})  # not increasing
    with pytest.raises(ValueError):
        Filtration(2, {0: s0, 1: s1})  # never reaches the ambient space


# ------------------------------------------------------------------ sl2 triples

def ladder_space(dim):
    return BigradedSpace("L", {(0, 0): tuple(f"v{i}" for i in range(dim))})


def op(space, rows, bidegree=(0, 0), name="op"):
    return GradedOperator.from_blocks(
        name, space, space, bidegree, {(0, 0): Matrix.from_rows(rows)})


def test_sl2_accepts_defining_representation():
    sp = ladder_space(2)
    e = op(sp, [[0, 1], [0, 0]], name="e")
    f = op(sp, [[0, 0], [1, 0]], name="f")
    h = op(sp, [[1, 0], [0, -1]], name="h")
    t = Sl2Triple.build(e, h, f)
    assert t.h_spectrum() == [(-1, 1), (1, 1)]


def test_sl2_refuses_wrong_bracket():
    sp = ladder_space(2)
    e = op(sp, [[0, 1], [0, 0]], name="e")
    f = op(sp, [[0, 0], [1, 0]], name="f")
    bad_h = op(sp, [[2, 0], [0, -2]], name="h")
    with pytest.raises(Sl2VerificationError) as err:
        Sl2Triple.build(e, bad_h, f)
    assert "[h,e]" in str(err.value) or "[e,f]" in str(err.value)
