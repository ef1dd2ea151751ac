"""Tests for truncated operator blocks, words, and Gram matrices."""

import numpy as np
import pytest

from wcolab.errors import (
    InputError,
    NotSelfMapError,
    OrderPolicyError,
    UnboundedWeightError,
)
from wcolab.mobius import MoebiusMap, rotation
from wcolab.opmat import (
    OperatorSpec,
    adjoint_block,
    adjoint_letter,
    block_header,
    block_to_csv,
    build_block,
    composition,
    cowen_adjoint_word,
    default_internal_order,
    gram_blocks,
    is_boundary_touching,
    operator_norm_estimate,
    plain,
    toeplitz,
    weighted,
    wide_block,
    word_block,
)
from wcolab.series import Exp, Poly, PrecomposeMoebius, Product, Rational, taylor
from wcolab.space import bergman, hardy

HALF_SHIFT = MoebiusMap(1, 0, -1, 2)   # z/(2-z)
AFFINE_HALF = MoebiusMap(1, 1, 0, 2)   # (z+1)/2
INTERIOR_MAP = MoebiusMap(0.5, 0, 0, 1)  # z/2, image well inside the disk
PSI_HALF = Rational(Poly((2,)), Poly((2, -1)))  # 2/(2-z)

ALL_SPACES = (hardy(), bergman(0.0), bergman(1.0))


def compose_poly_with_map(p_coeffs, m, order):
    """Oracle: Taylor coefficients of psi * (p o phi) via direct sampling."""
    ks = np.arange(1024)
    zs = 0.8 * np.exp(2j * np.pi * ks / 1024)
    vals = np.array(
        [sum(c * m.apply(z) ** n for n, c in enumerate(p_coeffs)) for z in zs]
    )
    out = np.fft.fft(vals) / 1024
    return out[: order + 1] / 0.8 ** np.arange(order + 1)


def test_block_action_matches_series_composition():
    # the tall matrix acting on weighted coefficients is exactly
    # p -> psi * (p o phi) in the weighted coefficient frame
    rng = np.random.default_rng(11)
    N, M = 12, 64
    for sp in ALL_SPACES:
        b_cols = np.sqrt(sp.basis_norms_sq(N))
        b_rows = np.sqrt(sp.basis_norms_sq(M))
        for op in (
            composition(HALF_SHIFT),
            weighted(PSI_HALF, HALF_SHIFT),
            weighted(Poly((1, 0.5j)), AFFINE_HALF),
        ):
            blk = build_block(op, sp, N, M)
            p = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
            image = blk.entries @ (p * b_cols)
            target = Product((op.weight, Poly(tuple(p))))
            if op.symbol is not None:
                target = Product(
                    (op.weight, PrecomposeMoebius(Poly(tuple(p)), op.symbol))
                )
            expected = taylor(target, M).coeffs * b_rows
            assert np.max(np.abs(image - expected)) < 1e-10 * max(
                1.0, np.max(np.abs(expected))
            )


def test_entries_independent_of_row_order():
    # a taller block only appends rows; the shared rows are identical
    N = 10
    for sp in (hardy(), bergman(1.0)):
        op = weighted(PSI_HALF, HALF_SHIFT)
        a = build_block(op, sp, N, 80).entries
        b = build_block(op, sp, N, 320).entries
        assert np.max(np.abs(a - b[: a.shape[0], :])) < 1e-14


def test_toeplitz_block_is_weighted_toeplitz():
    psi = Poly((1, 2, 3))
    N = 6
    blk = build_block(toeplitz(psi), hardy(), N, 64)
    m = blk.entries
    # hardy weights are 1 so this is a plain lower-triangular Toeplitz matrix
    for i in range(N + 1):
        for j in range(N + 1):
            expect = 0.0
            if 0 <= i - j <= 2:
                expect = (1, 2, 3)[i - j]
            assert abs(m[i, j] - expect) < 1e-14


def test_composition_block_columns_are_symbol_powers():
    N, M = 8, 64
    blk = build_block(composition(HALF_SHIFT), hardy(), N, M)
    for j in (0, 1, 3, 8):
        oracle = compose_poly_with_map([0] * j + [1], HALF_SHIFT, M)
        assert np.max(np.abs(blk.entries[:, j] - oracle)) < 1e-9


def test_wide_block_matches_tall_block():
    op = weighted(PSI_HALF, HALF_SHIFT)
    for sp in (hardy(), bergman(0.0)):
        wide = wide_block(op, sp, 6, 40)
        tall = build_block(op, sp, 40, 80)
        assert wide.entries.shape == (7, 41)
        assert np.max(np.abs(wide.entries - tall.entries[:7, :])) < 1e-12


def test_adjoint_block_is_conjugate_transpose():
    blk = build_block(weighted(PSI_HALF, HALF_SHIFT), bergman(0.0), 8, 64)
    adj = adjoint_block(blk)
    assert np.array_equal(adj.entries, blk.entries.conj().T)


def test_word_single_plain_letter_matches_block():
    op = weighted(PSI_HALF, HALF_SHIFT)
    for sp in ALL_SPACES:
        w = word_block((plain(op),), sp, 8, 64)
        direct = build_block(op, sp, 8, 8)
        assert np.max(np.abs(w.entries - direct.entries)) < 1e-12


def test_word_toeplitz_times_composition_is_weighted_op():
    # T_psi . C_phi = W_(psi,phi); compression is exact for this word
    for sp in ALL_SPACES:
        w = word_block(
            (plain(toeplitz(PSI_HALF)), plain(composition(HALF_SHIFT))), sp, 10, 80
        )
        direct = build_block(weighted(PSI_HALF, HALF_SHIFT), sp, 10, 10)
        assert np.max(np.abs(w.entries - direct.entries)) < 1e-11


def test_word_block_enforces_order_policy():
    with pytest.raises(OrderPolicyError):
        word_block((plain(composition(HALF_SHIFT)),), hardy(), 16, 24)


def test_cowen_adjoint_word_residual_small():
    # the compressed three-letter word reproduces the adjoint block exactly
    N, M = 12, 96
    maps = (HALF_SHIFT, MoebiusMap(0.25, 0, -0.75, 1))
    for sp in (hardy(), bergman(0.0), bergman(1.0), bergman(0.4)):
        for m in maps:
            direct = adjoint_block(build_block(composition(m), sp, N, N))
            word = word_block(cowen_adjoint_word(m, sp), sp, N, M)
            resid = np.linalg.norm(direct.entries - word.entries, 2)
            assert resid < 1e-10


def test_cowen_word_invariant_under_rescaling():
    N, M = 10, 80
    base = MoebiusMap(1, 0, -1, 2)
    for k in (2.0, 1 + 2j, 0.5 - 0.5j):
        scaled = MoebiusMap(k * base.a, k * base.b, k * base.c, k * base.d)
        for sp in (hardy(), bergman(0.4)):
            w1 = word_block(cowen_adjoint_word(base, sp), sp, N, M)
            w2 = word_block(cowen_adjoint_word(scaled, sp), sp, N, M)
            assert np.max(np.abs(w1.entries - w2.entries)) < 1e-10


def test_gram_blocks_identity_for_rotation():
    for sp in ALL_SPACES:
        pair = gram_blocks(composition(rotation(1j)), sp, 8, 64)
        eye = np.eye(9)
        assert np.max(np.abs(pair.g1 - eye)) < 1e-12
        assert np.max(np.abs(pair.g2 - eye)) < 1e-12


def test_gram_blocks_hermitian_psd():
    pair = gram_blocks(weighted(PSI_HALF, HALF_SHIFT), bergman(0.0), 10, 160)
    for g in (pair.g1, pair.g2):
        assert np.max(np.abs(g - g.conj().T)) < 1e-12
        eigs = np.linalg.eigvalsh(g)
        assert eigs.min() > -1e-10


def test_gram_blocks_converge_with_order():
    op = weighted(PSI_HALF, HALF_SHIFT)
    a = gram_blocks(op, hardy(), 8, 160)
    b = gram_blocks(op, hardy(), 8, 640)
    assert np.max(np.abs(a.g1 - b.g1)) < 1e-10
    assert np.max(np.abs(a.g2 - b.g2)) < 1e-8
    assert b.tail_bound <= a.tail_bound + 1e-15


def test_operator_norm_estimates():
    assert abs(operator_norm_estimate(build_block(composition(rotation(1j)), hardy(), 8, 64)) - 1.0) < 1e-12
    blk = build_block(toeplitz(Poly((2.5,))), bergman(0.0), 8, 64)
    assert abs(operator_norm_estimate(blk) - 2.5) < 1e-12


def test_boundary_touching_and_order_policy():
    assert is_boundary_touching(composition(HALF_SHIFT))
    assert is_boundary_touching(composition(AFFINE_HALF))
    assert not is_boundary_touching(composition(INTERIOR_MAP))
    n = 16
    inner = default_internal_order(n, (composition(INTERIOR_MAP),))
    touching = default_internal_order(n, (composition(HALF_SHIFT),))
    assert inner >= 2 * n
    assert touching == 2 * inner


def test_operator_spec_validation():
    with pytest.raises(NotSelfMapError):
        composition(MoebiusMap(2, 0, 0, 1))
    with pytest.raises(InputError):
        weighted(PSI_HALF, "not a map")
    with pytest.raises(UnboundedWeightError):
        toeplitz(Exp(Rational(Poly((1, 1)), Poly((1, -1)))))


def test_operator_spec_json_roundtrip():
    op = weighted(PSI_HALF, HALF_SHIFT)
    again = OperatorSpec.from_json(op.to_json())
    assert again.symbol is not None
    blk1 = build_block(op, hardy(), 6, 48).entries
    blk2 = build_block(again, hardy(), 6, 48).entries
    assert np.array_equal(blk1, blk2)
    assert composition(HALF_SHIFT).describe() == "composition"
    assert toeplitz(PSI_HALF).describe() == "toeplitz"
    assert op.describe() == "weighted-composition"


def test_block_csv_and_header():
    blk = build_block(composition(HALF_SHIFT), hardy(), 4, 40)
    text = block_to_csv(blk)
    lines = text.strip().splitlines()
    heads = lines[0].split(",")
    assert heads[0] == "i"
    assert heads[1] == "re_0" and heads[2] == "im_0"
    assert len(lines) == 42  # header + 41 rows
    parsed = np.array(
        [[float(x) for x in line.split(",")[1:]] for line in lines[1:]]
    )
    rebuilt = parsed[:, 0::2] + 1j * parsed[:, 1::2]
    assert np.max(np.abs(rebuilt - blk.entries)) < 1e-15
    hdr = block_header(blk)
    assert hdr["row_order"] == 40
    assert hdr["col_order"] == 4
    assert hdr["space"] == hardy().to_json()


def test_adjoint_letter_flag():
    t = toeplitz(PSI_HALF)
    assert not plain(t).adjoint
    assert adjoint_letter(t).adjoint
