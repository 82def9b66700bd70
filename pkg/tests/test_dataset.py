import numpy as np
import pytest

from gcsim import dataset


def test_generate_sizes_and_determinism():
    train, test = dataset.generate_synthetic(1000, 2000, 400, seed=3)
    assert train.size == 2000 and test.size == 400
    assert train.dim == test.dim == 1000
    again, _ = dataset.generate_synthetic(1000, 2000, 400, seed=3)
    np.testing.assert_array_equal(train.features, again.features)
    np.testing.assert_array_equal(train.labels, again.labels)


def test_generate_one_point_per_batch():
    K = 7
    train, _ = dataset.generate_synthetic(1, K, 1, seed=0)
    batches = dataset.partition(train, K)
    assert all(len(b.members) == 1 for b in batches)


def test_generate_rejects_bad_sizes():
    with pytest.raises(ValueError):
        dataset.generate_synthetic(0, 10, 10, seed=0)
    with pytest.raises(ValueError):
        dataset.generate_synthetic(3, 0, 10, seed=0)


def test_partition_shapes():
    train, _ = dataset.generate_synthetic(4, 2000, 10, seed=1)
    batches = dataset.partition(train, 20)
    assert len(batches) == 20
    assert all(len(b.members) == 100 for b in batches)
    # disjoint and covering
    joined = np.concatenate([b.members for b in batches])
    assert len(joined) == len(set(joined.tolist())) == 2000


def test_partition_singletons():
    train, _ = dataset.generate_synthetic(2, 12, 2, seed=1)
    assert all(len(b.members) == 1 for b in dataset.partition(train, 12))


def test_partition_rejects_non_divisible():
    train, _ = dataset.generate_synthetic(2, 10, 2, seed=1)
    with pytest.raises(ValueError):
        dataset.partition(train, 3)


def test_partial_gradient_single_point():
    # l = (y - x.theta)^2 at theta = 0 gives -2*y*x
    x = np.array([1.5, -2.0, 0.5])
    y = 3.0
    data = dataset.Dataset(features=x[None, :], labels=np.array([y]))
    batch = dataset.partition(data, 1)[0]
    got = dataset.partial_gradient(data, batch, np.zeros(3))
    np.testing.assert_allclose(got, -2.0 * y * x)


def test_partial_gradient_averages_points():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(2, 4))
    y = rng.normal(size=2)
    theta = rng.normal(size=4)
    data = dataset.Dataset(features=X, labels=y)
    both = dataset.partition(data, 1)[0]
    single = [
        dataset.partial_gradient(dataset.Dataset(X[i : i + 1], y[i : i + 1]),
                                 dataset.MiniBatch(1, np.array([0])), theta)
        for i in range(2)
    ]
    np.testing.assert_allclose(
        dataset.partial_gradient(data, both, theta), np.mean(single, axis=0)
    )


def test_partial_gradient_zero_at_optimum():
    rng = np.random.default_rng(2)
    w = rng.normal(size=6)
    X = rng.normal(size=(30, 6))
    data = dataset.Dataset(features=X, labels=X @ w)  # no noise
    batch = dataset.partition(data, 3)[0]
    np.testing.assert_allclose(
        dataset.partial_gradient(data, batch, w), np.zeros(6), atol=1e-12
    )


def test_full_gradient_matches_centralized():
    train, _ = dataset.generate_synthetic(5, 20, 4, seed=11)
    batches = dataset.partition(train, 4)
    theta = np.linspace(-1, 1, 5)
    full = dataset.full_gradient(train, batches, theta)
    direct = dataset.centralized_gradient(train, theta)
    assert np.linalg.norm(full - direct) <= 1e-12 * np.linalg.norm(direct)


def test_full_gradient_cancellation():
    # two points at theta=0 with gradients -2*y*x = (-2, +2)
    X = np.array([[1.0], [1.0]])
    y = np.array([1.0, -1.0])
    data = dataset.Dataset(features=X, labels=y)
    batches = dataset.partition(data, 2)
    grads = [dataset.partial_gradient(data, b, np.zeros(1)) for b in batches]
    np.testing.assert_allclose(grads[0], -grads[1])
    np.testing.assert_allclose(
        dataset.full_gradient(data, batches, np.zeros(1)), np.zeros(1), atol=1e-15
    )


def test_full_gradient_requires_batches():
    train, _ = dataset.generate_synthetic(2, 4, 2, seed=0)
    with pytest.raises(ValueError):
        dataset.full_gradient(train, [], np.zeros(2))


def test_gd_step_hand_case():
    model = dataset.ModelState(theta=np.array([1.0, 1.0]), eta=0.1)
    stepped = dataset.gd_step(model, np.array([2.0, -2.0]))
    np.testing.assert_allclose(stepped.theta, [0.8, 1.2])
    assert stepped.iteration == 1


def test_gd_step_identity_cases():
    model = dataset.ModelState(theta=np.array([1.0, -1.0]), eta=0.1)
    np.testing.assert_array_equal(
        dataset.gd_step(model, np.zeros(2)).theta, model.theta
    )
    frozen = dataset.ModelState(theta=np.array([1.0, -1.0]), eta=0.0)
    np.testing.assert_array_equal(
        dataset.gd_step(frozen, np.ones(2)).theta, frozen.theta
    )


def test_training_loss_non_increasing():
    train, _ = dataset.generate_synthetic(8, 64, 8, seed=4)
    batches = dataset.partition(train, 8)
    model = dataset.ModelState(theta=np.zeros(8), eta=0.02)
    losses = [dataset.mse_loss(train, model.theta)]
    for _ in range(25):
        model = dataset.gd_step(model, dataset.full_gradient(train, batches, model.theta))
        losses.append(dataset.mse_loss(train, model.theta))
    assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))
