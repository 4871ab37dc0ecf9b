import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gconv import (
    DimensionMismatchError,
    Mul,
    ScalarSmul,
    Tensor3,
    TransposeOf,
    lift,
    transpose,
)
from gconv.pairings import assoc_compatible

unit_floats = st.floats(-10.0, 10.0)


def random_tensor(rng, dims=(2, 3, 2)):
    return Tensor3(rng.uniform(-1.0, 1.0, dims))


def all_kinds(rng):
    return [
        Mul(),
        ScalarSmul(3),
        random_tensor(rng),
        transpose(ScalarSmul(2)),
        lift(ScalarSmul(2), 3),
    ]


def test_basic_values():
    assert Mul().apply(2.0, 5.0)[0] == 10.0
    assert np.array_equal(ScalarSmul(2).apply(3.0, [1.0, -1.0]), [3.0, -3.0])
    assert np.array_equal(transpose(ScalarSmul(2)).apply([1.0, -1.0], 3.0), [3.0, -3.0])
    # lift of the 1-d scalar action: column j scaled independently
    L = lift(ScalarSmul(1), 2)
    assert np.array_equal(L.apply(2.0, [1.0, 3.0]), [2.0, 6.0])


def test_dims_and_validation():
    t = Tensor3(np.zeros((4, 2, 3)))
    assert (t.dim_left, t.dim_right, t.dim_out) == (2, 3, 4)
    with pytest.raises(DimensionMismatchError):
        Tensor3(np.zeros((2, 2)))
    with pytest.raises(DimensionMismatchError):
        ScalarSmul(0)
    with pytest.raises(DimensionMismatchError):
        lift(Mul(), 0)
    with pytest.raises(DimensionMismatchError):
        Mul().apply([1.0, 2.0], 1.0)
    with pytest.raises(DimensionMismatchError):
        ScalarSmul(2).apply(1.0, [1.0, 2.0, 3.0])


def test_bilinearity_random_sampling(rng):
    for L in all_kinds(rng):
        for _ in range(25):
            a, b = rng.uniform(-3, 3, 2)
            x1 = rng.uniform(-1, 1, L.dim_left)
            x2 = rng.uniform(-1, 1, L.dim_left)
            y1 = rng.uniform(-1, 1, L.dim_right)
            y2 = rng.uniform(-1, 1, L.dim_right)
            left = L.apply(a * x1 + b * x2, y1)
            split = a * L.apply(x1, y1) + b * L.apply(x2, y1)
            assert np.max(np.abs(left - split)) <= 1e-12 * (1 + np.max(np.abs(split)))
            right = L.apply(x1, a * y1 + b * y2)
            split = a * L.apply(x1, y1) + b * L.apply(x1, y2)
            assert np.max(np.abs(right - split)) <= 1e-12 * (1 + np.max(np.abs(split)))


def test_norm_bound_holds_on_samples(rng):
    for L in all_kinds(rng):
        for _ in range(50):
            x = rng.uniform(-2, 2, L.dim_left)
            y = rng.uniform(-2, 2, L.dim_right)
            v = L.apply(x, y)
            bound = L.norm_bound * np.linalg.norm(x) * np.linalg.norm(y)
            assert np.linalg.norm(v) <= bound * (1 + 1e-12)


def test_mul_and_smul_norm_bounds_are_one():
    assert Mul().norm_bound == 1.0
    assert ScalarSmul(5).norm_bound == 1.0
    assert transpose(ScalarSmul(5)).norm_bound == 1.0


def test_tensor_default_norm_bound_is_frobenius():
    c = np.arange(12, dtype=float).reshape(2, 3, 2)
    assert Tensor3(c).norm_bound == pytest.approx(np.sqrt(np.sum(c * c)))
    assert Tensor3(c, norm_bound=50.0).norm_bound == 50.0


def test_transpose_swaps_arguments(rng):
    t = random_tensor(rng)
    tt = transpose(t)
    for _ in range(20):
        x = rng.uniform(-1, 1, t.dim_left)
        y = rng.uniform(-1, 1, t.dim_right)
        assert np.array_equal(tt.apply(y, x), t.apply(x, y))


def test_transpose_is_an_involution(rng):
    t = random_tensor(rng)
    back = transpose(transpose(t))
    assert back is t  # unwrapping makes the involution exact
    wrapped = TransposeOf(TransposeOf(t))
    x = rng.uniform(-1, 1, t.dim_left)
    y = rng.uniform(-1, 1, t.dim_right)
    assert np.array_equal(wrapped.apply(x, y), t.apply(x, y))


def test_lift_shapes_and_column_semantics(rng):
    inner = ScalarSmul(2)
    L = lift(inner, 3)
    assert (L.dim_left, L.dim_right, L.dim_out) == (1, 6, 6)
    assert L.norm_bound == inner.norm_bound
    x = rng.uniform(-1, 1, 1)
    M = rng.uniform(-1, 1, (2, 3))
    flat = M.reshape(6, order="F")
    out = L.apply(x, flat).reshape(2, 3, order="F")
    for j in range(3):
        assert np.array_equal(out[:, j], inner.apply(x, M[:, j]))


def test_lift_composes_with_matvec(rng):
    # defining identity: lift(L,d).apply(x, M) @ v == L.apply(x, M @ v)
    inner = random_tensor(rng, (2, 2, 3))
    L = lift(inner, 4)
    for _ in range(10):
        x = rng.uniform(-1, 1, 2)
        M = rng.uniform(-1, 1, (3, 4))
        v = rng.uniform(-1, 1, 4)
        lifted = L.apply(x, M.reshape(-1, order="F")).reshape(2, 4, order="F")
        want = inner.apply(x, M @ v)
        assert np.max(np.abs(lifted @ v - want)) <= 1e-12 * (1 + np.max(np.abs(want)))


def test_assoc_compatible_families(rng):
    mul = Mul()
    assert assoc_compatible(mul, mul, mul, mul)
    m = 3
    sm = ScalarSmul(m)
    assert assoc_compatible(mul, sm, sm, sm)
    dot = Tensor3(np.eye(m)[None, :, :])
    assert assoc_compatible(dot, mul, dot, transpose(sm))
    # scaling one slot breaks the chain
    assert not assoc_compatible(mul, mul, mul, Tensor3([[[2.0]]]))
    with pytest.raises(DimensionMismatchError):
        assoc_compatible(mul, sm, mul, mul)
