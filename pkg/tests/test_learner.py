import numpy as np
import pytest

from alh.dataset import encode_labels
from alh.errors import ValidationError
from alh.kernel import gram
from alh.learner import accuracy, fit, predict


def test_fit_scalar_case():
    model = fit([[1.0]], [[1.0, -1.0]], 0.1)
    np.testing.assert_allclose(model.theta, [[1 / 1.1, -1 / 1.1]], rtol=1e-14)


def test_fit_strong_regularization_vanishes(rng):
    X = rng.normal(size=(6, 2))
    Y = encode_labels(rng.integers(0, 3, 6), [0, 1, 2])
    assert np.abs(fit(gram(X, X, 0.5), Y, 1e12).theta).max() < 1e-9


def test_fit_identity_kernel():
    Y = encode_labels([0, 2, 1], [0, 1, 2])
    np.testing.assert_allclose(fit(np.eye(3), Y, 0.25).theta, Y / 1.25, rtol=0, atol=1e-15)


def test_fit_rejects_bad_input():
    with pytest.raises(ValidationError):
        fit(np.eye(2), np.ones((3, 2)), 0.1)
    with pytest.raises(ValidationError):
        fit(np.eye(2), np.ones((2, 2)), 0.0)


def test_fit_permutation_equivariant(rng):
    X = rng.normal(size=(7, 3))
    Y = encode_labels(rng.integers(0, 3, 7), [0, 1, 2])
    perm = rng.permutation(7)
    K = gram(X, X, 1 / 3)
    a = fit(K, Y, 0.1).theta
    b = fit(K[np.ix_(perm, perm)], Y[perm], 0.1).theta
    np.testing.assert_allclose(b, a[perm], atol=1e-10)


def test_training_residual_monotone_in_lambda(rng):
    X = rng.normal(size=(10, 2))
    Y = encode_labels(rng.integers(0, 3, 10), [0, 1, 2])
    K = gram(X, X, 0.5)
    res = [np.linalg.norm(Y - K @ fit(K, Y, lam).theta) for lam in (10, 1, 0.1, 0.01, 0.001)]
    assert all(b <= a + 1e-12 for a, b in zip(res, res[1:]))


def test_predict_examples():
    model = fit([[1.0]], [[1.0, -1.0]], 0.1)
    assert predict(model, [[1.0]]).tolist() == [0]
    zero = fit([[1.0]], [[0.0, 0.0]], 0.1)
    assert predict(zero, [[1.0, 0.5]]).tolist() == [0, 0]


def test_predict_class_permutation(rng):
    X = rng.normal(size=(8, 2))
    Y = encode_labels(rng.integers(0, 4, 8), [0, 1, 2, 3])
    K = gram(X, X, 0.5)
    Kx = gram(X, rng.normal(size=(20, 2)), 0.5)
    perm = rng.permutation(4)
    base = predict(fit(K, Y, 0.1), Kx)
    permuted = predict(fit(K, Y[:, perm], 0.1), Kx)
    # column j of the permuted problem is original class perm[j]
    np.testing.assert_array_equal(perm[permuted], base)


def test_two_point_separable():
    X = np.array([[0.0], [3.0]])
    K = gram(X, X, 1.0)
    Y = encode_labels([0, 1], [0, 1])
    assert predict(fit(K, Y, 1e-3), K).tolist() == [0, 1]


def test_accuracy():
    assert accuracy([1, 2, 3], [1, 2, 3]) == 1.0
    assert accuracy([1, 2], [0, 0]) == 0.0
    assert accuracy([1, 2, 3, 4], [1, 2, 3, 0]) == 0.75
    with pytest.raises(ValidationError):
        accuracy([1], [1, 2])
