import numpy as np
import pytest

import whitenrec as wr


def random_binary(rng, users, items, p=0.4):
    x = (rng.random((users, items)) < p).astype(float)
    x[0, 0] = 1.0
    return x


def test_interaction_matrix_round_trip():
    x = wr.InteractionMatrix([[0, 2], [1]], 3, ["a", "b"], ["i", "j", "k"])
    assert (x.n_users, x.n_items, x.nnz) == (2, 3, 3)
    assert x.row(0) == [0, 2]
    np.testing.assert_array_equal(x.to_dense(), [[1, 0, 1], [0, 1, 0]])
    with pytest.raises(wr.DimensionError):
        wr.InteractionMatrix([[5]], 3)


def test_ridge_matches_numpy_in_both_forms():
    rng = np.random.default_rng(1)
    for users, items in [(30, 8), (6, 20)]:
        dense = random_binary(rng, users, items)
        x = wr.InteractionMatrix.from_dense(dense)
        g = dense.T @ dense
        expected = np.linalg.solve(g + 2.0 * np.eye(items), g)
        for form in ("primal", "dual"):
            np.testing.assert_allclose(wr.ridge(x, 2.0, form), expected, atol=1e-10)
        np.testing.assert_allclose(wr.zca_similarity(x, 2.0), expected, atol=1e-10)


def test_ease_hand_example():
    b, alpha = wr.ease(wr.InteractionMatrix([[0, 1], [0, 1]], 2), 2.0)
    np.testing.assert_allclose(b, [[0, 0.5], [0.5, 0]], atol=1e-12)
    np.testing.assert_allclose(alpha, [1, 1], atol=1e-12)
    with pytest.raises(wr.ConfigError):
        wr.ease(wr.InteractionMatrix([[0]], 1), -1.0)


def test_whitening_gives_identity_covariance():
    rng = np.random.default_rng(2)
    m = rng.standard_normal((4, 12))
    w = wr.whiten(m, 0.0)
    np.testing.assert_allclose(w @ w.T, np.eye(4), atol=1e-10)
    np.testing.assert_allclose(wr.covariance(m), m @ m.T, atol=1e-12)
    p = wr.zca_matrix(m, 0.0)
    np.testing.assert_allclose(p, p.T, atol=1e-12)


def test_embedding_forms_agree():
    rng = np.random.default_rng(3)
    x = wr.InteractionMatrix.from_dense(random_binary(rng, 40, 15))
    e, sigma = wr.svd_embed(x, 6)
    assert e.shape == (6, 15)
    assert list(sigma) == sorted(sigma, reverse=True)
    g = e.T @ e
    np.testing.assert_allclose(wr.embed_dot(e), g, atol=1e-10)
    np.testing.assert_allclose(wr.embed_ridge(e, 1.5), np.linalg.solve(g + 1.5 * np.eye(15), g), atol=1e-10)
    assert np.all(np.diag(wr.embed_ease(e, 1.5)) == 0.0)


def test_recommend_and_metrics():
    b = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert wr.recommend(b, wr.InteractionMatrix([[0]], 2), 1) == [[1]]
    assert wr.top_n([0.9, 0.1, 0.5], [0], 2) == [(2, 0.5), (1, 0.1)]
    assert wr.recall_at_r([0, 2, 3], [0, 1], 3) == 0.5
    assert wr.ndcg_at_r([1, 7, 2], [7], 3) == pytest.approx(0.63093, abs=1e-5)
    report = wr.evaluate(b, wr.InteractionMatrix([[0], [1]], 2), [[1], []], [1])
    assert report["recall"][1] == 1.0
    assert report["excluded_users"] == 1


def test_model_file_round_trip(tmp_path):
    rng = np.random.default_rng(4)
    b = rng.standard_normal((5, 5))
    path = tmp_path / "m.wrec"
    wr.save_model(path, b, "ease", 3.0, list("abcde"))
    loaded = wr.load_model(path)
    assert loaded["kind"] == "ease"
    assert loaded["lam"] == 3.0
    assert loaded["item_ids"] == list("abcde")
    np.testing.assert_array_equal(loaded["b"], b)
