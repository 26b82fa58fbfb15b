from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkatomic.errors import DegenerateForm, NotDegreeZero, NotIsometry
from hkatomic.exactalg import Mat
from hkatomic.mukai import (
    Isometry,
    QuadSpace,
    cup_matrix,
    exp_cup,
    grading_operator,
    is_skew,
    make_mukai,
    reflection,
    signature,
)
from hkatomic.presets import lattice_preset

D22 = make_mukai(QuadSpace(Mat([[2, 0], [0, -2]])))


def test_block_structure():
    sp = D22
    assert sp.dim == 4
    assert sp.q(sp.alpha, sp.beta) == -1
    assert sp.q(sp.alpha, sp.alpha) == sp.q(sp.beta, sp.beta) == 0
    assert sp.q(sp.basis_vector(1), sp.basis_vector(1)) == 2
    assert sp.q(sp.alpha, sp.basis_vector(2)) == 0


def test_hyperbolic_base_gives_two_planes():
    sp = make_mukai(QuadSpace(Mat([[0, 1], [1, 0]])))
    assert signature(sp) == (2, 2)


def test_k3n_preset_has_four_positive_directions():
    sp = make_mukai(lattice_preset("k3n"))
    assert sp.dim == 25
    assert signature(sp) == (4, 21)


def test_degenerate_base_rejected():
    with pytest.raises(DegenerateForm):
        QuadSpace(Mat([[1, 1], [1, 1]]))
    with pytest.raises(DegenerateForm):
        QuadSpace(Mat([[1, 2], [0, 1]]))


def test_exp_cup_examples():
    sp = D22
    assert exp_cup(sp, [0, 0]).matrix == Mat.identity(4)
    g = exp_cup(sp, [1, 0])
    assert g(sp.alpha) == (1, 1, 0, 1)
    assert g(sp.beta) == sp.beta
    assert (exp_cup(sp, [1, 0]) @ exp_cup(sp, [-1, 0])).matrix == Mat.identity(4)


def test_exp_cup_rejects_alpha_component():
    with pytest.raises(NotDegreeZero):
        exp_cup(D22, [1, 1, 0, 0])


def test_cup_matrix_action():
    sp = D22
    e = cup_matrix(sp, [3, 1])
    assert e @ sp.alpha == (0, 3, 1, 0)
    assert e @ sp.basis_vector(1) == (0, 0, 0, 6)
    assert e @ sp.beta == (0, 0, 0, 0)
    assert (e @ e @ e).is_zero()


def test_grading_operator():
    sp = D22
    h = grading_operator(sp)
    assert h(sp.alpha) == (-2, 0, 0, 0)
    assert h(sp.beta) == (0, 0, 0, 2)
    assert h(sp.basis_vector(1)) == (0, 0, 0, 0)
    assert is_skew(h.matrix, sp.gram)


vec2 = st.lists(st.integers(-5, 5), min_size=2, max_size=2)


@settings(max_examples=100, deadline=None)
@given(vec2, vec2)
def test_exp_cup_group_law_and_isotropy(w1, w2):
    sp = D22
    lhs = exp_cup(sp, w1) @ exp_cup(sp, w2)
    assert lhs.matrix == exp_cup(sp, [a + b for a, b in zip(w1, w2)]).matrix
    image = exp_cup(sp, w1)(sp.alpha)
    assert sp.q(image, image) == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_reflections_are_isometries(v):
    sp = D22
    if sp.q(v, v) == 0:
        return
    r = reflection(sp, v)
    assert (r @ r).matrix == Mat.identity(4)
    assert r.inverse().matrix == r.matrix


def test_non_isometry_rejected():
    with pytest.raises(NotIsometry):
        Isometry(Mat.diag([1, 2, 1, 1]), D22)


def test_labels_and_vector_assembly():
    sp = D22
    assert sp.labels == ("alpha", "e1", "e2", "beta")
    assert sp.vector(2, [1, 0], Fraction(1, 2)) == (2, 1, 0, Fraction(1, 2))
