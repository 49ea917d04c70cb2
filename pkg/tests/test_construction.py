import numpy as np
import pytest

from msrr import CodeParams, Codec, build_constants, build_parity_check
from msrr.field import FieldCtx

from conftest import P1, P1_DEGENERATE, P3


def test_p1_constants_frozen_values(p1_codec):
    consts = p1_codec.constants
    assert consts.locators == ((1, 10), (2, 9), (4, 7), (8, 3))
    assert consts.rack_points == (1, 4, 5, 9)
    assert consts.extra_points == (2,)


def test_degenerate_code_has_no_extra_points(degenerate_codec):
    assert degenerate_codec.constants.extra_points == ()


def test_locators_are_distinct_and_rack_points_are_uth_powers(p3_codec):
    consts = p3_codec.constants
    flat = [x for row in consts.locators for x in row]
    assert len(set(flat)) == p3_codec.params.n
    p, u = p3_codec.p, p3_codec.params.u
    for e, row in enumerate(consts.locators):
        for lam in row:
            assert pow(lam, u, p) == consts.rack_points[e]
    assert not set(consts.extra_points) & set(consts.rack_points)
    assert 0 not in consts.extra_points


def test_row_entries_frozen_examples(p1_codec):
    pcm = p1_codec.pcm
    assert pcm.row_entries(0, 0, 0, 0) == [(0, 1), (1, 1)]
    assert pcm.row_entries(2, 0, 0, 0) == [(0, 1), (1, 2)]
    assert pcm.row_entries(0, 0, 1, 0) == [(0, 1), (1, 1)]
    assert pcm.row_entries(2, 2, 0, 1) == [(1, 5), (3, 2)]
    # No off-diagonals anywhere in block 1 for rack 0 (1 != residue 0 mod u).
    for g in range(2):
        for a in range(4):
            assert len(pcm.row_entries(1, 0, g, a)) == 1


def test_rows_with_nonzero_owned_digit_are_diagonal_only(p3_codec):
    params, pcm = p3_codec.params, p3_codec.pcm
    for t in range(params.r):
        for e in range(params.n_bar):
            tau = params.rack_digit(e)
            for g in range(params.u):
                for a in range(params.alpha):
                    entries = pcm.row_entries(t, e, g, a)
                    assert entries[0] == (a, int(pcm.diag[t, e, g]))
                    if params.digits(a)[tau] != 0:
                        assert len(entries) == 1


def test_off_diagonal_shape_invariants(p2_codec):
    params, pcm = p2_codec.params, p2_codec.pcm
    for t in range(params.r):
        for e in range(params.n_bar):
            expects_offs = t % params.u == params.rack_residue(e)
            for g in range(params.u):
                for a in range(params.alpha):
                    offs = len(pcm.row_entries(t, e, g, a)) - 1
                    assert offs in (0, params.s_bar - 1)
                    if offs and not expects_offs:
                        pytest.fail(f"off-diagonals in foreign block t={t}, e={e}")
                    assert offs + 1 <= params.s_bar


def test_diagonal_subsystem_is_vandermonde_on_weightless_rows(p3_codec):
    # Rows whose coordinate has no zero digit reduce to pure powers of the
    # locators, one Vandermonde system per coordinate.
    params, pcm = p3_codec.params, p3_codec.pcm
    p = p3_codec.p
    nodes = params.nodes()
    lams = [p3_codec.constants.locators[e][g] for e, g in nodes]
    for a in range(params.alpha):
        if params.zero_digit_count(a) != 0:
            continue
        for t in range(params.r):
            row = []
            for e, g in nodes:
                entries = dict(pcm.row_entries(t, e, g, a))
                assert set(entries) == {a}
                row.append(entries[a])
            assert row == [pow(lam, t, p) for lam in lams]


def test_dense_node_matches_row_entries(p2_codec):
    params, pcm = p2_codec.params, p2_codec.pcm
    alpha = params.alpha
    for e, g in ((0, 0), (1, 2), (3, 1)):
        dense = pcm.dense_node(e, g)
        rebuilt = np.zeros_like(dense)
        for t in range(params.r):
            for a in range(alpha):
                for col, coeff in pcm.row_entries(t, e, g, a):
                    rebuilt[t * alpha + a, col] = coeff
        assert np.array_equal(dense, rebuilt)


@pytest.mark.parametrize("tail", [(), (3,)])
def test_apply_node_matches_dense_product(p3_codec, tail):
    params, pcm = p3_codec.params, p3_codec.pcm
    rng = np.random.default_rng(5)
    vec = rng.integers(0, p3_codec.p, size=(params.alpha,) + tail)
    for e, g in ((0, 0), (2, 1), (5, 0)):
        dense = pcm.dense_node(e, g)
        expected = dense @ vec.reshape(params.alpha, -1) % p3_codec.p
        got = pcm.apply_node(e, g, vec).reshape(params.r * params.alpha, -1)
        assert np.array_equal(got, expected)


def test_degenerate_blocks_are_scaled_identities(degenerate_codec):
    params, pcm = degenerate_codec.params, degenerate_codec.pcm
    for t in range(params.r):
        for e in range(params.n_bar):
            for g in range(params.u):
                assert pcm.row_entries(t, e, g, 0) == [(0, int(pcm.diag[t, e, g]))]


@pytest.mark.parametrize("params", [P1, P3, P1_DEGENERATE])
def test_rebuild_is_bit_identical(params):
    a = Codec(params)
    b = Codec(params)
    assert a.constants == b.constants
    assert a.pcm.diag.tobytes() == b.pcm.diag.tobytes()
    assert a.pcm.off_values.tobytes() == b.pcm.off_values.tobytes()
    assert a.pcm.off_mask.tobytes() == b.pcm.off_mask.tobytes()


def test_constants_reject_mismatched_field():
    from msrr.errors import InternalError
    field = FieldCtx.create(11, 2)
    with pytest.raises(InternalError):
        build_constants(CodeParams(n_bar=4, u=3, u0=1, k_bar=2, d_bar=3), field)
    small = FieldCtx.create(7, 2)  # not above n = 8
    with pytest.raises(InternalError):
        build_constants(P1, small)


def test_parity_check_row_bounds(p1_codec):
    pcm = p1_codec.pcm
    with pytest.raises(IndexError):
        pcm.row_entries(4, 0, 0, 0)
    with pytest.raises(IndexError):
        pcm.row_entries(0, 0, 0, 4)
    with pytest.raises(IndexError):
        pcm.row_entries(0, 4, 0, 0)
