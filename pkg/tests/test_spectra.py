"""Tests for spectral diagnostics and the parabolic eigenvalue spiral."""

import numpy as np
import pytest

from wcolab.errors import InputError
from wcolab.mobius import parabolic_from, rotation
from wcolab.opmat import build_block, composition
from wcolab.series import taylor
from wcolab.space import bergman, hardy
from wcolab.spectra import (
    DEFAULT_BETA_GRID,
    eigen_residual,
    eigenvector_max_cosine,
    parabolic_eigenpair,
    rotation_spectrum,
    spectral_radius_estimate,
    spiral_curve,
    truncation_eigenvalues,
)


def test_truncation_eigenvalues_of_rotation_block():
    lam = np.exp(2j * np.pi / 5)
    blk = build_block(composition(rotation(lam)), hardy(), 8, 64)
    eigs = truncation_eigenvalues(blk)
    expected = sorted([lam**j for j in range(9)], key=lambda z: -abs(z))
    assert len(eigs) == 9
    got = np.sort_complex(np.round(eigs, 10))
    want = np.sort_complex(np.round(np.array(expected), 10))
    assert np.max(np.abs(got - want)) < 1e-10


def test_truncation_eigenvalues_sorted_by_modulus():
    blk = build_block(composition(rotation(0.5)), hardy(), 6, 48)
    eigs = truncation_eigenvalues(blk)
    mods = np.abs(eigs)
    assert np.all(mods[:-1] >= mods[1:] - 1e-15)


def test_spiral_curve_matches_exponential():
    t = 1 + 0.5j
    pts = spiral_curve(t, (0.0, 0.5, 1.0, 2.0))
    for beta, lam in pts:
        assert abs(lam - np.exp(-beta * t)) < 1e-15
    assert abs(pts[0][1] - 1.0) < 1e-15


def test_spiral_curve_rejects_negative_real_part():
    with pytest.raises(InputError):
        spiral_curve(-1.0)


def test_parabolic_eigenpair_eigenvalue_and_residual():
    zeta, t, beta = 1.0, 1.0, 0.5
    expr, lam = parabolic_eigenpair(zeta, t, beta)
    assert abs(lam - np.exp(-beta * t)) < 1e-15
    # residual of C_phi f = lam f at series level
    assert eigen_residual(zeta, t, beta, 200) < 1e-12
    # beta = 0 gives the constant eigenfunction with eigenvalue 1
    expr0, lam0 = parabolic_eigenpair(zeta, t, 0.0)
    assert abs(lam0 - 1.0) < 1e-15
    coeffs = taylor(expr0, 8).coeffs
    assert np.max(np.abs(coeffs - np.eye(9)[0])) < 1e-14


def test_eigen_residual_small_on_grid():
    for zeta in (1.0, 1j):
        for t in (1.0, 1 + 0.5j):
            for beta in DEFAULT_BETA_GRID:
                assert eigen_residual(zeta, t, beta, 256) < 1e-10


def test_rotation_spectrum_kinds():
    four = rotation_spectrum(1j)
    assert four.kind == "finite-cyclic"
    assert len(four.points) == 4

    dil = rotation_spectrum(0.5)
    assert dil.kind == "powers-with-zero"
    assert any(abs(p) < 1e-15 for p in dil.points)
    assert any(abs(p - 0.25) < 1e-15 for p in dil.points)

    irr = rotation_spectrum(np.exp(1j * np.pi * np.sqrt(2.0)))
    assert irr.kind == "unit-circle"
    # the full circle is reported through unimodular sample points
    assert all(abs(abs(p) - 1.0) < 1e-12 for p in irr.points)


def test_rotation_spectrum_rejects_expanding_lambda():
    with pytest.raises(InputError):
        rotation_spectrum(2.0)


def test_spectral_radius_estimate_rotation_is_one():
    vals = spectral_radius_estimate(composition(rotation(1j)), hardy(), 8, 6, M=64)
    assert len(vals) == 6
    assert np.max(np.abs(np.array(vals) - 1.0)) < 1e-12


def test_spectral_radius_estimate_contraction_decays():
    # W = C_(z/2): operator norm 1 but spectral radius 1; powers stay bounded
    vals = spectral_radius_estimate(
        composition(rotation(0.5)), hardy(), 8, 8, M=64
    )
    assert all(v <= 1.0 + 1e-12 for v in vals)


def test_spectral_radius_estimate_validates_orders():
    with pytest.raises(InputError):
        spectral_radius_estimate(composition(rotation(1j)), hardy(), 8, 0)


def test_eigenvector_max_cosine_diagnostic_range():
    blk = build_block(composition(parabolic_from(1.0, 1.0)), hardy(), 10, 80)
    val = eigenvector_max_cosine(blk)
    assert 0.0 <= val <= 1.0 + 1e-12
