import numpy as np
import pytest

import softzca


def test_soft_zca_diagonal():
    stats = softzca.FitStatistics()
    stats.mean = np.zeros(2)
    stats.covariance = np.diag([4.0, 1.0])
    stats.sample_count = 10
    t = softzca.build_transform(stats, softzca.Method.SOFT_ZCA, 0.01)
    np.testing.assert_allclose(t.matrix, np.diag([4.01**-0.5, 1.01**-0.5]), atol=1e-12)


def test_zca_whitens_against_numpy():
    x = softzca.generate_anisotropic_gaussian(3, 1500, [50.0, 10.0, 2.0, 0.5, 0.1])
    t = softzca.build_transform(softzca.fit_statistics(x), softzca.Method.ZCA, 0.0)
    y = softzca.apply_transform(t, x)
    np.testing.assert_allclose(np.cov(y, rowvar=False, bias=True), np.eye(5), atol=1e-9)
    np.testing.assert_allclose(y.mean(axis=0), 0.0, atol=1e-9)
    assert softzca.isoscore(y).score >= 0.999


def test_covariance_matches_numpy():
    x = softzca.generate_anisotropic_gaussian(4, 200, [3.0, 2.0, 1.0])
    stats = softzca.fit_statistics(x)
    np.testing.assert_allclose(stats.covariance, np.cov(x, rowvar=False, bias=True), atol=1e-12)
    np.testing.assert_allclose(stats.mean, x.mean(axis=0), atol=1e-12)


def test_isoscore_anchor():
    x = np.array([[2.0, 0.0], [-2.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    assert softzca.isoscore(x).score == pytest.approx(8.0 / 17.0, abs=1e-12)


def test_reciprocal_ranks():
    s = np.array([[0.9, 0.1, 0.2], [0.8, 0.5, 0.1], [0.7, 0.6, 0.3]])
    np.testing.assert_allclose(softzca.reciprocal_ranks(s), [1.0, 0.5, 1.0 / 3.0])


def test_evaluate_and_sweep():
    comments, code = softzca.generate_paired_corpus(seed=7, pairs=500)
    assert comments.shape == code.shape == (500, 64)
    base = softzca.evaluate(comments, code)
    ct = softzca.build_transform(softzca.fit_statistics(code), softzca.Method.SOFT_ZCA, 1e-2)
    qt = softzca.build_transform(softzca.fit_statistics(comments), softzca.Method.SOFT_ZCA, 1e-2)
    white = softzca.evaluate(comments, code, ct, qt)
    assert white.mrr > base.mrr
    assert white.method == softzca.Method.SOFT_ZCA
    assert base.method is None

    rows = softzca.sweep(comments, code, grid=[1.0, 0.0, 1e-2])
    assert [r[0] for r in rows] == [0.0, 1e-2, 1.0]
    assert rows[1][3] == pytest.approx(white.mrr, abs=1e-15)


def test_npy_interop(tmp_path):
    x = np.random.default_rng(0).normal(size=(7, 3))
    np.save(tmp_path / "a.npy", x)
    np.testing.assert_array_equal(softzca.read_npy(tmp_path / "a.npy"), x)
    softzca.write_npy(tmp_path / "b.npy", x)
    np.testing.assert_array_equal(np.load(tmp_path / "b.npy"), x)
    assert (tmp_path / "a.npy").read_bytes() == (tmp_path / "b.npy").read_bytes()


def test_transform_file_round_trip(tmp_path):
    x = softzca.generate_anisotropic_gaussian(5, 100, [4.0, 2.0, 1.0])
    t = softzca.build_transform(softzca.fit_statistics(x), softzca.Method.PCA, 0.1)
    softzca.write_transform(tmp_path / "t.bin", t)
    back = softzca.read_transform(tmp_path / "t.bin")
    assert back.method == softzca.Method.PCA
    assert back.epsilon == 0.1
    np.testing.assert_array_equal(back.matrix, t.matrix)
    np.testing.assert_array_equal(back.mean, t.mean)


def test_errors_raise():
    with pytest.raises(softzca.SoftZcaError, match="rank"):
        softzca.build_transform(softzca.fit_statistics(np.ones((3, 2))), softzca.Method.ZCA, 0.0)
    with pytest.raises(ValueError):
        softzca.cosine_similarity_matrix(np.zeros((1, 2)), np.ones((1, 2)))
    with pytest.raises(ValueError):
        softzca.isoscore(np.array([[1.0, np.nan], [0.0, 1.0]]))
