import numpy as np
import pytest

import aopt


def two_point():
    eye = np.eye(2)
    return aopt.DesignProblem(eye, eye, eye, 1.0)


def test_phi_and_gradient_on_symmetric_instance():
    p = two_point()
    w = np.array([0.5, 0.5])
    assert aopt.phi(p, w) == pytest.approx(4.0 / 3.0, rel=1e-15)
    np.testing.assert_allclose(aopt.grad_phi(p, w), [4.0 / 9.0, 4.0 / 9.0], rtol=1e-15)
    cert = aopt.certificate(p, w)
    assert cert["eps"] == pytest.approx(0.0, abs=1e-15)


def test_prox_examples():
    X, k, _ = aopt.prox_g(np.array([[3.0, 1.0]]), 1.0)
    assert k == 1
    np.testing.assert_allclose(X, [[1.5, 0.0]], atol=1e-15)
    X, k, _ = aopt.prox_g(np.array([[3.0, 3.0]]), 1.0)
    assert k == 2
    np.testing.assert_allclose(X, [[1.0, 1.0]], atol=1e-15)
    rng = np.random.default_rng(0)
    V = rng.standard_normal((3, 6))
    np.testing.assert_allclose(aopt.prox_g(V, 0.7)[0], aopt.prox_oracle(V, 0.7), atol=1e-6)


def test_all_solvers_agree_with_reference():
    p = aopt.gen_random(12, 3, 4)
    ref = aopt.reference_rho(p)
    assert ref["rho_lower"] <= ref["rho"]
    for algo in ["fb", "fista", "abcd-cy", "abcd-rp", "mul"]:
        r = aopt.solve(p, algo, tol=1e-8, max_iter=500000)
        assert r["converged"], algo
        assert r["phi"] == pytest.approx(ref["rho"], rel=1e-6)
        assert r["w"].sum() == pytest.approx(1.0, abs=1e-12)
        trace = r["trace"]
        assert trace["iter"][-1] == r["iterations"]
    vdm = aopt.solve(p, "vdm", tol=1e-6, max_iter=20000, l0=1000.0)
    assert vdm["phi"] == pytest.approx(ref["rho"], rel=1e-4)


def test_estimator_space_results_carry_X():
    p = aopt.gen_random(10, 2, 1)
    r = aopt.solve(p, "fista", tol=1e-8)
    X = r["X"]
    assert X.shape == (2, 10)
    w, degenerate = aopt.design_from_estimator(X)
    assert not degenerate
    np.testing.assert_allclose(w, r["w"])
    assert r["composite"] == pytest.approx(aopt.composite_objective(p, X))
    assert aopt.solve(p, "mul")["X"] is None


def test_zero_target_and_errors():
    A = np.arange(6.0).reshape(3, 2)
    p = aopt.DesignProblem(A, np.zeros((2, 1)), np.eye(2), 0.01)
    r = aopt.solve(p, "fista")
    assert r["iterations"] == 1 and r["phi"] == 0.0
    with pytest.raises(ValueError):
        aopt.DesignProblem(A, np.zeros((2, 1)), np.eye(2), -1.0)
    with pytest.raises(ValueError):
        aopt.solve(p, "newton")


def test_instances_and_imse():
    p = aopt.gen_quadreg(2, 3)
    assert (p.m, p.n) == (9, 6)
    np.testing.assert_array_equal(aopt.quadreg_features(np.array([1.0, -1.0])),
                                  [1, 1, -1, 1, -1, 1])
    rng = np.random.default_rng(1)
    nodes = rng.standard_normal((7, 4))
    mu = rng.random(7)
    K = aopt.imse_to_K(nodes, mu)
    np.testing.assert_allclose(K @ K.T, nodes.T @ np.diag(mu) @ nodes, atol=1e-12)


def test_instance_file_round_trip(tmp_path):
    p = aopt.gen_random(8, 3, 2)
    path = tmp_path / "inst.json"
    aopt.save_instance(path, p, "smoke")
    q = aopt.load_instance(path)
    np.testing.assert_array_equal(p.A, q.A)
    assert q.sigma2N == p.sigma2N
    assert set(aopt.algorithms()) == {"fb", "fista", "abcd-cy", "abcd-rp", "vdm", "mul"}
