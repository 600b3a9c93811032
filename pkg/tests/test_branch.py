"""Branch continuation: residual structure, Newton behavior, small branches."""

import math

import numpy as np
import pytest

from serrinband import SpectralCurve, branch_record, continue_branch, lambda_star, residual
from serrinband.branch import _Residual, newton_step
from serrinband.errors import AdmissibilityError, SolverError
from serrinband.harmonics import make_basis, make_grid

DIM, J, M, NA, NT = 2, 2, 8, 48, 48


@pytest.fixture(scope="module")
def res():
    grid = make_grid(DIM, NA)
    basis = make_basis(DIM, M)
    return _Residual(DIM, J, M, grid, basis, NT)


@pytest.fixture(scope="module")
def lam_star():
    return lambda_star(SpectralCurve(DIM, J)).lambda_star


def test_residual_trivial_branch(res):
    # G(lambda, 0) = 0 up to discretization error at any lambda; the projected
    # component carries an extra sqrt(|S^1|) factor from the constant mode
    for lam in (0.4, 0.8):
        proj, sup = res.projected(lam, 0.0, np.zeros(M))
        assert sup < 5e-4
        assert np.max(np.abs(proj)) < 3e-3


def test_residual_linearization_at_root(res, lam_star):
    # at lambda_j the Y_j component of G(lambda_j, eps Y_j) is o(eps)
    eps = 1e-3
    proj, _ = res.projected(lam_star, eps, np.zeros(M))
    grid_floor = res.projected(lam_star, 0.0, np.zeros(M))[0]
    assert abs(proj[J] - grid_floor[J]) < 20 * eps**2


def test_residual_linearization_off_root(res):
    lam, eps = 0.5, 1e-3
    sig = SpectralCurve(DIM, J).sigma(lam)
    proj, _ = res.projected(lam, eps, np.zeros(M))
    base = res.projected(lam, 0.0, np.zeros(M))[0]
    assert (proj[J] - base[J]) / eps == pytest.approx(sig, rel=2e-2)


def test_residual_inadmissible_shape(res):
    with pytest.raises(AdmissibilityError):
        res.projected(0.05, 0.5, np.zeros(M))


def test_residual_top_level_function():
    coeffs = np.zeros(M + 1)
    proj, sup = residual(DIM, J, 0.6, coeffs, NA, NT, max_degree=M)
    assert proj.shape == (M + 1,)
    assert sup < 5e-4


def test_newton_step_fixed_point_at_zero(res, lam_star):
    # starting from (lambda_j, 0) at s = 0 the iteration stays put
    lam, w = lam_star, np.zeros(M)
    for _ in range(2):
        lam, w, r, sup = newton_step(res, lam, 0.0, w)
    assert abs(lam - lam_star) < 5e-4
    assert np.linalg.norm(w) < 5e-4


def test_newton_step_converges_small_amplitude(res, lam_star):
    s = 0.02
    lam, w = lam_star, np.zeros(M)
    r, _ = res.projected(lam, s, w)
    for _ in range(4):
        lam, w, r, sup = newton_step(res, lam, s, w, r)
        if np.linalg.norm(r) < 1e-10:
            break
    assert np.linalg.norm(r) < 1e-9
    assert abs(lam - lam_star) < 0.05
    assert np.linalg.norm(w) == pytest.approx(0.0, abs=0.1 * s)


def test_branch_small_run():
    br = continue_branch(DIM, J, s_max=0.02, n_steps=2, max_degree=M, n_alpha=NA, n_t=NT)
    assert br.status == "ok"
    assert len(br.points) == 5
    ss = [p.s for p in br.points]
    assert ss == sorted(ss)
    mid = br.points[2]
    assert mid.s == 0.0 and np.all(mid.w_coeffs == 0.0)
    assert mid.lambda_s == pytest.approx(lambda_star(SpectralCurve(DIM, J)).lambda_star)
    for p in br.points:
        assert p.residual_sup <= br.tol
        assert len(p.w_coeffs) == M  # Y_j coefficient structurally excluded


def test_branch_tangent_recovery():
    """phi_s / s approaches Y_j in discrete L^2: the w-part vanishes linearly."""
    br = continue_branch(DIM, J, s_max=0.03, n_steps=3, max_degree=M, n_alpha=NA, n_t=NT)
    assert br.status == "ok"
    pos = [p for p in br.points if p.s > 0]
    norms = {p.s: float(np.linalg.norm(p.w_coeffs)) for p in pos}
    ss = sorted(norms)
    # ||phi_s/s - Y_j||_{L^2} = ||w_s|| by orthonormality; decreasing toward 0
    assert norms[ss[0]] < norms[ss[1]] < norms[ss[2]]
    fit = np.polyfit(ss, [norms[s] for s in ss], 1)
    assert abs(fit[1]) < 0.5 * norms[ss[0]]  # intercept compatible with w_0 = 0


def test_branch_nonconstant_profiles():
    br = continue_branch(DIM, J, s_max=0.02, n_steps=1, max_degree=M, n_alpha=NA, n_t=NT)
    from serrinband.branch import point_shape

    p = br.points[-1]
    shape = point_shape(br, p)
    phi = np.asarray(shape.phi(shape.grid.nodes))
    assert float(phi.max() - phi.min()) > 0.01  # pinned Y_j coefficient forces nonconstancy


def test_branch_early_stop_on_large_amplitude():
    # amplitudes near pi/2 - lambda_j leave the admissible band; the branch
    # truncates and reports the attained range
    br = continue_branch(DIM, J, s_max=3.0, n_steps=3, max_degree=M, n_alpha=NA, n_t=NT)
    assert "stopped_at_s" in br.status
    assert len(br.points) >= 1


def test_branch_guard_low_degree():
    with pytest.raises(SolverError):
        continue_branch(2, 1, s_max=0.01, n_steps=1)


def test_branch_record_roundtrip():
    br = continue_branch(DIM, J, s_max=0.015, n_steps=1, max_degree=M, n_alpha=NA, n_t=NT)
    rec = branch_record(br)
    assert rec["dim"] == DIM and rec["j"] == J and rec["M"] == M
    assert rec["grid"] == {"n_alpha": NA, "n_t": NT}
    assert len(rec["points"]) == len(br.points)
    for prec, p in zip(rec["points"], br.points):
        assert prec["s"] == p.s
        assert len(prec["w_coeffs"]) == M
