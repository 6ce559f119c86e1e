import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplexstat.characterize import (
    DEFAULT_TOL,
    ToleranceConfig,
    Verdict,
    analyze,
    backward_distance_recovery,
    classify,
    equidistance_stats,
    gram_over_scale,
    is_equidistant,
    projection_checks,
    sphericity,
)
from simplexstat.linalg import apply_motion, distance_matrix, make_rng, random_rotation
from simplexstat.simplex import SimplexSpec, construct

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def simplex(p, sigma2=1.0, method="incremental"):
    return construct(SimplexSpec(dim=p, sigma2=sigma2, method=method))


def test_tolerance_validation():
    with pytest.raises(ValueError):
        ToleranceConfig(equidist_rel=0.0)
    with pytest.raises(ValueError):
        ToleranceConfig(ortho_cos=1.0)
    assert DEFAULT_TOL.sphericity_rel == 1e-8


def test_is_equidistant_examples():
    assert is_equidistant(simplex(3, 1.0)) == pytest.approx(1.0, abs=1e-9)
    assert is_equidistant(SQUARE) is None
    assert is_equidistant([[1.0, 2.0], [1.0, 2.0]]) is None
    with pytest.raises(ValueError):
        is_equidistant([[1.0, 2.0]])


def test_equidistance_stats_square():
    # distances {1,1,1,1,2,2}: mean 4/3, worst deviation 2/3 -> relative 1/2
    m, resid = equidistance_stats(SQUARE)
    assert m == pytest.approx(4 / 3)
    assert resid == pytest.approx(0.5)


def test_sphericity_examples():
    s2, resid = sphericity(simplex(4, 2.0))
    assert resid <= 1e-10
    assert s2 == pytest.approx(2.0, rel=1e-10)

    # (+-1/sqrt2, 0), (0, +-1) has scatter diag(1, 2)
    h = 1 / math.sqrt(2)
    u = np.array([[h, 0.0], [-h, 0.0], [0.0, 1.0], [0.0, -1.0]])
    s2, resid = sphericity(u)
    assert s2 == pytest.approx(1.5, rel=1e-14)
    assert resid == pytest.approx(math.sqrt(0.5) / math.sqrt(5), rel=1e-14)
    assert resid == pytest.approx(0.31623, abs=1e-5)

    assert sphericity(np.ones((3, 2))) == (0.0, 0.0)


def test_sphericity_residual_is_minimal():
    rng = make_rng(5)
    x = rng.standard_normal((5, 4))
    s2, resid = sphericity(x)
    xc = x - x.mean(axis=0)
    b = xc.T @ xc
    nb = np.linalg.norm(b)
    for c in np.linspace(s2 * 0.5, s2 * 1.5, 41):
        assert np.linalg.norm(b - c * np.eye(4)) / nb >= resid - 1e-15


def test_projection_checks_triangle():
    u = simplex(2, 0.5)
    rep = projection_checks(u, 0.5)
    assert rep.passed
    for value in (rep.symmetry, rep.idempotence, rep.trace_error, rep.null_residual, rep.centering_error):
        assert value <= 1e-10
    a = gram_over_scale(u, 0.5)
    np.testing.assert_allclose(np.diag(a), 2 / 3, rtol=1e-12)
    np.testing.assert_allclose(a[~np.eye(3, dtype=bool)], -1 / 3, rtol=1e-12)


def test_projection_checks_wrong_scale():
    p = 6
    rep = projection_checks(simplex(p, 1.2), 2.4)
    assert not rep.passed
    assert rep.trace_error == pytest.approx(p / 2, rel=1e-10)
    assert not rep.checks["idempotence"]
    assert rep.checks["symmetry"]


def test_projection_checks_gaussian_cloud():
    p = 5
    x = make_rng(2024).standard_normal((p + 1, p))
    s2, _ = sphericity(x)
    rep = projection_checks(x, s2)
    assert rep.idempotence > 0.1
    assert not rep.passed


def test_projection_checks_domain():
    with pytest.raises(ValueError):
        projection_checks(simplex(2), 0.0)


def test_classify_examples():
    for p in (1, 2, 3, 9):
        u = simplex(p, 3.0)
        moved = apply_motion(u, random_rotation(p, p).with_translation(np.arange(p) - 4.0))
        rep = classify(moved)
        assert rep.verdict is Verdict.REGULAR_SIMPLEX
        assert rep.sigma2_from_trace == pytest.approx(3.0, rel=1e-8)
        assert rep.equidistant and not rep.inconsistent

    rep = classify(SQUARE)
    assert rep.verdict is Verdict.NOT_APPLICABLE
    assert not rep.theorem_applicable
    assert rep.sphericity_residual == 0.0  # the square is spherical but n != p + 1

    u = simplex(4, 2.0)
    noisy = u + 1e-2 * math.sqrt(2.0) * make_rng(1).standard_normal(u.shape)
    rep = classify(noisy)
    assert rep.verdict is Verdict.NOT_SPHERICAL
    assert not rep.equidistant
    assert not rep.inconsistent


def test_classify_duplicates():
    rep = classify(np.zeros((3, 2)))
    assert rep.verdict is Verdict.NOT_EQUIDISTANT
    assert not rep.equidistant
    assert rep.sphericity_residual == 0.0 and rep.sigma2_from_trace == 0.0


def test_classify_domain():
    with pytest.raises(ValueError):
        classify([[0.0, 1.0]])


def test_report_fields_finite():
    for u in (SQUARE, simplex(3), np.zeros((3, 2)), make_rng(0).standard_normal((4, 3))):
        d = classify(u).to_dict()
        assert d["verdict"] in {v.value for v in Verdict}
        for key in ("sigma2_from_distances", "sigma2_from_trace", "equidist_residual", "sphericity_residual"):
            assert math.isfinite(d[key]) and d[key] >= 0


def test_backward_recovery_examples():
    u = simplex(7, 1.1, method="projection")
    d = backward_distance_recovery(u, 1.1)
    off = d[~np.eye(8, dtype=bool)]
    np.testing.assert_allclose(off, 2.2, rtol=1e-10)
    np.testing.assert_allclose(backward_distance_recovery([[0.5], [-0.5]], 0.5), [[0, 1], [1, 0]], atol=1e-15)
    moved = apply_motion(u, random_rotation(7, 3).with_translation(np.ones(7)))
    assert np.max(np.abs(backward_distance_recovery(moved, 1.1) - distance_matrix(moved))) <= 1e-12


def test_backward_recovery_preconditions():
    with pytest.raises(ValueError):
        backward_distance_recovery(SQUARE + [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]], 1.0)
    with pytest.raises(ValueError):
        backward_distance_recovery(simplex(3, 1.0), 2.0)
    with pytest.raises(ValueError):
        backward_distance_recovery(simplex(3, 1.0), -1.0)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 12),
    st.floats(0.01, 100.0),
    st.floats(1e-3, 1e3),
    st.integers(0, 2**31),
)
def test_scale_equivariance(p, sigma2, c, seed):
    u = apply_motion(simplex(p, sigma2), random_rotation(p, seed))
    noisy = u + 1e-3 * make_rng(seed).standard_normal(u.shape)
    for v in (u, noisy):
        a, b = classify(v), classify(c * v)
        assert b.sigma2_from_trace == pytest.approx(c * c * a.sigma2_from_trace, rel=1e-12)
        assert abs(b.sphericity_residual - a.sphericity_residual) <= 1e-10
        assert abs(b.equidist_residual - a.equidist_residual) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**31), st.sampled_from([0.0, 1e-4, 1e-2]))
def test_rigid_invariance(p, seed, noise):
    u = simplex(p, 1.7) + noise * make_rng(seed).standard_normal((p + 1, p))
    m = random_rotation(p, seed + 1).with_translation(make_rng(seed + 2).standard_normal(p) * 5)
    a, b = classify(u), classify(apply_motion(u, m))
    assert a.verdict == b.verdict
    assert abs(a.sphericity_residual - b.sphericity_residual) <= 1e-9
    assert abs(a.equidist_residual - b.equidist_residual) <= 1e-9


def test_monotone_degradation():
    p, sigma2 = 6, 1.4
    u = simplex(p, sigma2)
    medians = []
    for eps in (1e-6, 1e-4, 1e-2):
        resid = [
            sphericity(u + eps * math.sqrt(sigma2) * make_rng(s).standard_normal(u.shape))[1]
            for s in range(50)
        ]
        medians.append(np.median(resid))
    assert medians[0] < medians[1] < medians[2]


def test_analyze_triangle():
    out = analyze(simplex(2, 0.5))
    np.testing.assert_allclose(out["covariance"], np.array(out["scatter"]) / 3)
    np.testing.assert_allclose(out["covariance"], np.eye(2) / 6, atol=1e-15)
    a = np.array(out["A"])
    np.testing.assert_allclose(np.diag(a), 2 / 3, rtol=1e-12)
    np.testing.assert_allclose(a[~np.eye(3, dtype=bool)], -1 / 3, rtol=1e-12)
    assert out["lemma"]["r_expected"] == pytest.approx(1 / math.sqrt(3))
    assert out["diagnostics"]["verdict"] == "regular_simplex"


def test_analyze_degenerate_inputs():
    out = analyze([[3.0, 4.0]])
    assert out["covariance"] == [[0.0, 0.0], [0.0, 0.0]]
    assert out["distance_matrix"] == [[0.0]]
    assert out["diagnostics"] is None
    out = analyze(SQUARE)
    assert out["diagnostics"]["theorem_applicable"] is False
    assert "sphericity_residual" in out["diagnostics"]
    assert out["lemma"] is None


def test_iff_property_desk_scale():
    accepted = []
    for p in range(1, 31):
        for k in range(7):
            u = simplex(p, 0.3 + k, method=("incremental", "projection")[k % 2])
            moved = apply_motion(u, random_rotation(p, 97 * p + k).with_translation(np.full(p, k - 3.0)))
            rep = classify(moved)
            assert rep.verdict is Verdict.REGULAR_SIMPLEX
            accepted.append(rep)
    for seed in range(200):
        p = 1 + seed % 30
        rep = classify(make_rng(seed).standard_normal((p + 1, p)) * (1 + seed % 5))
        if rep.verdict is Verdict.REGULAR_SIMPLEX:
            accepted.append(rep)
    assert all(r.equidist_residual <= 1e-6 for r in accepted)
