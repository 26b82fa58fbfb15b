import random

import pytest

from hkatomic.errors import InvalidPeriod
from hkatomic.exactalg import GaussRat, Mat
from hkatomic.hodge import (
    HodgeData,
    bracket_degree_check,
    eigenspace,
    hodge_grading,
    ht2_space,
    in_so_span,
    is_hodge_type,
    so_h2_subalgebra,
    zero_eigenspace,
)
from hkatomic.llv import SymVector, sym_power
from hkatomic.mukai import QuadSpace, grading_operator, make_mukai
from hkatomic.presets import lattice_preset
from hkatomic.suite import random_space


def _diag_space(b2):
    space = make_mukai(QuadSpace(Mat.diag([2, 2] + [-2] * (b2 - 2))))
    return space, HodgeData.create(space, [1, 0] + [0] * (b2 - 2), [0, 1] + [0] * (b2 - 2))


def _apply(op, v):
    return tuple(sum((op[i, j] * v[j] for j in range(len(v))), GaussRat(0)) for i in range(len(v)))


def test_grading_examples():
    space, hd = _diag_space(3)
    hp = hodge_grading(space, hd).matrix
    i = GaussRat(0, 1)
    assert _apply(hp, space.basis_vector(1)) == tuple(-2 * i * c for c in space.basis_vector(2))
    assert _apply(hp, space.basis_vector(2)) == tuple(2 * i * c for c in space.basis_vector(1))
    assert all(c == 0 for c in _apply(hp, space.alpha))
    assert all(c == 0 for c in _apply(hp, space.beta))
    assert all(c == 0 for c in _apply(hp, space.basis_vector(3)))
    sigma = hd.sigma()
    assert _apply(hp, sigma) == tuple(-2 * c for c in sigma)
    sb = hd.sigma_bar()
    assert _apply(hp, sb) == tuple(2 * c for c in sb)


def test_invalid_periods():
    space, _ = _diag_space(3)
    with pytest.raises(InvalidPeriod):
        HodgeData.create(space, [1, 0, 0], [0, 0, 1])
    with pytest.raises(InvalidPeriod):
        HodgeData.create(space, [1, 0, 0], [1, 1, 1])
    with pytest.raises(InvalidPeriod):
        HodgeData.create(space, [1, 0, 0], [1, 0, 0])
    with pytest.raises(InvalidPeriod):
        HodgeData((1, 1, 0, 0, 0), (0, 0, 1, 0, 0)).validate(space)


def test_grading_is_skew_and_conjugation_flips_it():
    space, hd = _diag_space(4)
    hp = hodge_grading(space, hd).matrix
    g = space.gram
    assert (hp.T @ g + g @ hp).is_zero()
    conj = Mat([[c.conjugate() for c in row] for row in hp.tolist()])
    assert conj == hp * -1
    assert in_so_span(hodge_grading(space, hd))


@pytest.mark.parametrize("b2", range(2, 7))
def test_ht2_dimension_and_eigen_property(b2):
    space, hd = random_space(random.Random(b2), b2)
    hp = hodge_grading(space, hd).matrix
    ops = ht2_space(space, hd)
    assert len(ops) == b2
    for g in ops:
        ad = hp @ g.matrix - g.matrix @ hp
        assert ad == g.matrix * 2
        assert hp @ ad - ad @ hp == g.matrix * 4
    assert len(eigenspace(space, [(hp, 2)])) == b2


def test_ht2_at_k3n_size():
    space = make_mukai(lattice_preset("k3n"))
    e = [1, 1] + [0] * 21
    f = [0, 0, 1, 1] + [0] * 19
    hd = HodgeData.create(space, e, f)
    ops = ht2_space(space, hd)
    assert len(ops) == 23
    hp = hodge_grading(space, hd).matrix
    g = ops[5].matrix
    assert hp @ g - g @ hp == g * 2


def test_zero_eigenspace_contains_alpha_beta():
    space, hd = _diag_space(5)
    Z = zero_eigenspace(space, hd)
    assert Z[0] == space.alpha and Z[-1] == space.beta
    assert len(Z) == space.b2


@pytest.mark.parametrize("b2", [2, 3, 4])
def test_so_h2_block(b2):
    space, _ = _diag_space(b2)
    ops = so_h2_subalgebra(space)
    assert len(ops) == b2 * (b2 - 1) // 2
    v = space.vector(3, [0] * b2, -7)
    for g in ops:
        assert g(space.alpha) == (0,) * space.dim
        assert g(space.beta) == (0,) * space.dim
        assert g(v) == (0,) * space.dim


@pytest.mark.parametrize("b2,dim", [(3, 1), (4, 2)])
def test_bracket_degree_check(b2, dim):
    space, hd = _diag_space(b2)
    v = bracket_degree_check(space, hd)
    assert v.outcome
    assert v.data["dim_source"] == v.data["dim_target"] == dim == b2 - 2
    assert v.data["image_rank"] == dim
    assert v.data["second_application_rank"] == 0


def test_hodge_type():
    space, hd = _diag_space(3)
    assert is_hodge_type(space, hd, sym_power(space, space.alpha, 2))
    assert is_hodge_type(space, hd, sym_power(space, space.basis_vector(3), 2))
    assert not is_hodge_type(space, hd, SymVector.linear(space, space.basis_vector(1)))


def test_sl2_relation_with_grading():
    space, _ = _diag_space(3)
    h = grading_operator(space)
    assert h.matrix.T @ space.gram + space.gram @ h.matrix == Mat.zeros(5, 5)
