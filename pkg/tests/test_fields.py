"""Differential and integral operators on closed-form fields."""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from riccati3d.biquat import Biquaternion, conj_h, max_component_diff, mul
from riccati3d.errors import DomainError, QuadratureFailure
from riccati3d.fields import (
    BoxDomain,
    DiffScheme,
    Point3,
    QuadratureSpec,
    ScalarField,
    VectorField,
    QuaternionField,
    diff,
    dirac_left,
    dirac_right,
    div,
    grad,
    laplacian,
    operator_A,
    operator_B,
    rot,
)

S = DiffScheme()


def test_dirac_of_y_e1_is_minus_e3():
    F = VectorField(lambda p: np.array([p.y, 0, 0], complex))
    out = dirac_left(F, Point3(0.3, -0.7, 1.1), S)
    assert max_component_diff(out, Biquaternion(0, 0, 0, -1)) < 1e-10


def test_dirac_of_x_e1_is_minus_one():
    F = VectorField(lambda p: np.array([p.x, 0, 0], complex))
    out = dirac_left(F, Point3(0.4, 0.2, -0.9), S)
    assert max_component_diff(out, Biquaternion(-1)) < 1e-10


def test_grad_of_x_squared():
    f = ScalarField(lambda p: complex(p.x * p.x))
    g = grad(f, Point3(3, 0, 0), S)
    assert np.max(np.abs(g - np.array([6.0, 0, 0]))) < 1e-10


def test_diff_dispatcher_matches_named_ops():
    f = ScalarField(lambda p: complex(math.sin(p.x) * p.y))
    F = VectorField(lambda p: np.array([p.y * p.z, p.x, p.z * p.z], complex))
    p = Point3(0.5, 0.7, -0.2)
    assert diff("grad", f, p, S) == pytest.approx(grad(f, p, S))
    assert diff("div", F, p, S) == pytest.approx(div(F, p, S))
    assert np.allclose(diff("rot", F, p, S), rot(F, p, S))
    assert diff("laplacian", f, p, S) == pytest.approx(laplacian(f, p, S))
    assert max_component_diff(diff("dirac_left", F, p, S), dirac_left(F, p, S)) == 0
    with pytest.raises(ValueError):
        diff("curl", F, p, S)


def test_dirac_equals_div_grad_rot_decomposition():
    field = QuaternionField(lambda p: Biquaternion(
        p.x * p.y, p.y * p.z, math.sin(p.x), p.z * p.z))
    p = Point3(0.4, -0.3, 0.8)
    vec_part = VectorField(lambda t: field(t).vector)
    sc_part = ScalarField(lambda t: field(t).scalar)
    expect = Biquaternion.from_scalar_vector(
        -div(vec_part, p, S), grad(sc_part, p, S) + rot(vec_part, p, S))
    assert max_component_diff(dirac_left(field, p, S), expect) < 1e-9
    expect_r = Biquaternion.from_scalar_vector(
        -div(vec_part, p, S), grad(sc_part, p, S) - rot(vec_part, p, S))
    assert max_component_diff(dirac_right(field, p, S), expect_r) < 1e-9


def test_dirac_square_is_minus_laplacian_on_harmonic():
    f = ScalarField(lambda p: complex(math.sin(p.x) * math.exp(p.y)))
    p = Point3(0.3, 0.4, 0.1)
    Df = QuaternionField(lambda t: Biquaternion.from_vector(grad(f, t, S)))
    once_more = dirac_left(Df, p, S)
    assert once_more.max_abs() < 1e-6
    assert abs(laplacian(f, p, S)) < 1e-6


def test_conjugation_intertwines_left_right_dirac():
    field = QuaternionField(lambda p: Biquaternion(
        p.x * p.x, p.y, p.x * p.z, math.cos(p.y)))
    conj_field = QuaternionField(lambda p: conj_h(field(p)))
    p = Point3(-0.2, 0.6, 0.9)
    lhs = conj_h(dirac_left(field, p, S))
    rhs = -dirac_right(conj_field, p, S)
    assert max_component_diff(lhs, rhs) < 1e-9


def test_quaternionic_leibniz_rule():
    from riccati3d.fields import _d1
    phi = QuaternionField(lambda p: Biquaternion(p.x, p.y * p.z, 0.5 * p.x, p.z))
    psi = QuaternionField(lambda p: Biquaternion(p.z, p.x, p.x * p.y, 1.0))
    p = Point3(0.7, -0.4, 0.3)
    prod = QuaternionField(lambda t: mul(phi(t), psi(t)))
    lhs = dirac_left(prod, p, S)
    rhs = mul(dirac_left(phi, p, S), psi(p)) + mul(conj_h(phi(p)), dirac_left(psi, p, S))
    for k in range(3):
        rhs = rhs - 2.0 * phi(p).vector[k] * _d1(psi, p, k, S)
    assert max_component_diff(lhs, rhs) < 1e-8


def test_stencil_domain_error():
    dom = BoxDomain.box((0, 0, 0), (1, 1, 1))
    f = ScalarField(lambda p: complex(p.x), dom)
    with pytest.raises(DomainError):
        grad(f, Point3(0.9999, 0.5, 0.5), S)
    excl = BoxDomain.unbounded(lambda p: abs(p.x - 0.5) < 1e-2)
    g = ScalarField(lambda p: complex(p.x), excl)
    with pytest.raises(DomainError):
        grad(g, Point3(0.505, 0.5, 0.5), S)


def test_order2_scheme_works():
    s2 = DiffScheme(h=1e-5, order=2)
    f = ScalarField(lambda p: complex(p.x ** 2 + p.y))
    g = grad(f, Point3(1.0, 2.0, 0.0), s2)
    assert np.max(np.abs(g - np.array([2.0, 1.0, 0.0]))) < 1e-8


def test_scheme_validation():
    with pytest.raises(ValueError):
        DiffScheme(order=3)
    with pytest.raises(ValueError):
        DiffScheme(h=-1.0)
    with pytest.raises(ValueError):
        QuadratureSpec(line_rule="midpoint")


# -- operator A -------------------------------------------------------------

def test_A_reconstructs_xyz_potential():
    F = VectorField(lambda p: np.array([p.y * p.z, p.x * p.z, p.x * p.y], complex))
    A = operator_A(F, Point3(0, 0, 0), 0j)
    assert abs(A(Point3(1, 2, 3)) - 6.0) < 1e-9


def test_A_reconstructs_radial_potential():
    F = VectorField(lambda p: np.array([2 * p.x, 2 * p.y, 0], complex))
    A = operator_A(F, Point3(0, 0, 0), 0j)
    p = Point3(0.7, -1.2, 0.4)
    assert abs(A(p) - (p.x ** 2 + p.y ** 2)) < 1e-9


def test_A_base_value_is_constant():
    F = VectorField(lambda p: np.array([1.0, 0, 0], complex))
    A = operator_A(F, Point3(0.5, 0.5, 0.5), 3.25 + 1j)
    assert A(Point3(0.5, 0.5, 0.5)) == pytest.approx(3.25 + 1j)


def test_A_gauss_rule_matches_adaptive():
    F = VectorField(lambda p: np.array(
        [math.exp(0.3 * p.x), 0.5 * p.y, math.sin(p.z)], complex))
    base = Point3(0, 0, 0)
    A1 = operator_A(F, base, 0j, QuadratureSpec())
    A2 = operator_A(F, base, 0j, QuadratureSpec(line_rule="gauss", gauss_order=32))
    p = Point3(1.2, -0.8, 0.9)
    assert abs(A1(p) - A2(p)) < 1e-10


def test_A_path_crossing_excluded_raises():
    dom = BoxDomain.unbounded(lambda p: abs(p.x - 0.5) < 0.05 and abs(p.y) < 0.01)
    F = VectorField(lambda p: np.array([1.0, 0, 0], complex), dom)
    A = operator_A(F, Point3(0, 0, 0), 0j)
    with pytest.raises(DomainError):
        A(Point3(1.0, 0.0, 0.0))


def test_A_warns_on_rotational_input():
    F = VectorField(lambda p: np.array([-p.y, p.x, 0], complex))
    A = operator_A(F, Point3(0, 0, 0), 0j, curl_check=True)
    with pytest.warns(UserWarning):
        A(Point3(1.0, 1.0, 0.0))


def test_adaptive_budget_exhaustion():
    # an integrand with a non-integrable kink defeats the subdivision budget
    F = VectorField(lambda p: np.array(
        [1.0 / (abs(p.x - 0.37) + 1e-14), 0, 0], complex))
    A = operator_A(F, Point3(0, 0, 0), 0j, QuadratureSpec(line_tol=1e-14))
    with pytest.raises(QuadratureFailure):
        A(Point3(1.0, 0, 0))


# -- operator B -------------------------------------------------------------

@pytest.fixture(scope="module")
def ball_potential():
    region = BoxDomain.box((-1, -1, -1), (1, 1, 1))
    chi = VectorField(lambda p: np.array(
        [1.0 if p.x ** 2 + p.y ** 2 + p.z ** 2 <= 1.0 else 0.0, 0, 0], complex))
    return operator_B(chi, region, QuadratureSpec(volume_grid=64))


def test_B_uniform_ball_center(ball_potential):
    # solid unit ball: potential at the center is R^2/2
    val = ball_potential(Point3(0, 0, 0))
    assert abs(val[0] - 0.5) / 0.5 < 0.02
    assert abs(val[1]) < 1e-12 and abs(val[2]) < 1e-12


def test_B_uniform_ball_exterior(ball_potential):
    # exterior potential R^3/(3 r) at r = 2
    val = ball_potential(Point3(2, 0, 0))
    assert abs(val[0] - 1.0 / 6.0) * 6.0 < 0.02


def test_B_zero_field_is_zero():
    region = BoxDomain.box((-1, -1, -1), (1, 1, 1))
    zero = VectorField(lambda p: np.zeros(3, complex))
    B = operator_B(zero, region, QuadratureSpec(volume_grid=8))
    assert np.all(B(Point3(0.2, 0.1, 0)) == 0)


def test_B_resolution_floor():
    region = BoxDomain.box((-1, -1, -1), (1, 1, 1))
    F = VectorField(lambda p: np.ones(3, complex))
    with pytest.raises(QuadratureFailure):
        operator_B(F, region, QuadratureSpec(volume_grid=7))
    with pytest.raises(QuadratureFailure):
        operator_B(F, BoxDomain.unbounded(), QuadratureSpec(volume_grid=16))


def test_B_softened_kernel_matches_far_field():
    region = BoxDomain.box((-1, -1, -1), (1, 1, 1))
    F = VectorField(lambda p: np.array([1.0, 0, 0], complex))
    hard = operator_B(F, region, QuadratureSpec(volume_grid=16))
    soft = operator_B(F, region, QuadratureSpec(volume_grid=16), kernel="softened")
    far = Point3(3.0, 0.5, 0.2)
    assert abs(hard(far)[0] - soft(far)[0]) < 1e-12


def test_B_anisotropic_cells():
    region = BoxDomain.box((0, -0.5, -0.5), (4, 0.5, 0.5))
    F = VectorField(lambda p: np.array([1.0, 0, 0], complex))
    B = operator_B(F, region, kernel="softened", cells=(40, 10, 10))
    # total mass 4*1*1 = 4: far-field behaves like 4/(4 pi r)
    far = Point3(2.0, 0.0, 12.0)
    r = math.sqrt(2.0 ** 2 + 12.0 ** 2)  # distance to the slab center (2,0,0)
    approx = 4.0 / (4.0 * math.pi * math.hypot(0.0, 12.0))
    assert abs(B(far)[0] - approx) / approx < 0.05


def test_parallel_grid_evaluation_bitwise_identical(ball_potential):
    pts = [Point3(0.1 * i, 0.05 * i, -0.02 * i) for i in range(12)]
    seq = [ball_potential(p) for p in pts]
    with ThreadPoolExecutor(max_workers=4) as pool:
        par = list(pool.map(ball_potential, pts))
    for a, b in zip(seq, par):
        assert np.array_equal(a, b)


def test_box_domain_validation():
    with pytest.raises(ValueError):
        BoxDomain.box((0, 0, 0), (1, -1, 1))
    dom = BoxDomain.box((0, 0, 0), (1, 1, 1), excluded=lambda p: p.x > 0.9)
    assert dom.ok(Point3(0.5, 0.5, 0.5))
    assert not dom.ok(Point3(0.95, 0.5, 0.5))
    assert not dom.ok(Point3(1.5, 0.5, 0.5))
    inter = dom.intersect(BoxDomain.box((0.25, 0.25, 0.25), (2, 2, 2)))
    assert inter.lower == Point3(0.25, 0.25, 0.25)
    assert inter.upper == Point3(1, 1, 1)
