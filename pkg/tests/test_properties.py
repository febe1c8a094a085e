import io
import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from riscsm.analysis import (
    BoundInputs,
    f_zeta,
    partition_penalty_ratio,
    ser_union_bound,
    ser_union_bound_via_pmf,
    truncated_binomial_pmf,
)
from riscsm.harness import Record, SweepResult, emit, read_results
from riscsm.hadamard import difference_profile, hadamard_row, pattern_set, sylvester
from riscsm.modem import ErrorCounters, IndexVector, SystemConfig, demap_bits, map_bits
from riscsm.numerics import psd_sqrt

pow2 = st.integers(0, 10).map(lambda e: 2**e)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 8))
def test_hadamard_orthogonal(e):
    H = sylvester(2**e).astype(np.int64)
    assert np.array_equal(H @ H.T, 2**e * np.eye(2**e, dtype=np.int64))


@given(st.integers(1, 10), st.data())
def test_distinct_patterns_differ_in_half(e, data):
    n = 2**e
    K = 2 ** data.draw(st.integers(1, min(e, 6)))
    m = data.draw(st.integers(0, K - 1))
    l = data.draw(st.integers(0, K - 1).filter(lambda v: v != m))
    assert difference_profile(pattern_set(n, K), m, l) == (n // 2, n // 2)


@given(st.integers(0, 10), st.data())
def test_row_formula(e, data):
    n = 2**e
    i = data.draw(st.integers(0, n - 1))
    j = data.draw(st.integers(0, n - 1))
    assert hadamard_row(n, i)[j] == (-1) ** bin(i & j).count("1")


@given(st.integers(1, 8), st.integers(1, 6))
def test_pmf_sums_to_one(N_Q, logK):
    K = 2**logK
    assert abs(math.fsum(truncated_binomial_pmf(N_Q, K, z) for z in range(1, N_Q + 1)) - 1) < 1e-12


def _configs():
    return st.tuples(st.integers(0, 3), st.integers(0, 4), st.integers(0, 3), st.integers(0, 3)).map(
        lambda t: SystemConfig(N=2 ** (t[0] + t[1]), N_Q=2 ** t[0], K=2 ** min(t[2], t[1]), M=2 ** t[3])
    )


@given(_configs(), st.data())
def test_bits_round_trip(cfg, data):
    bits = tuple(data.draw(st.lists(st.integers(0, 1), min_size=cfg.rate, max_size=cfg.rate)))
    iv = map_bits(bits, cfg)
    assert tuple(demap_bits(iv, cfg)) == bits
    assert IndexVector.from_candidate(iv.candidate(cfg), cfg) == iv


@settings(deadline=None)
@given(
    st.integers(0, 3),
    st.integers(1, 4),
    st.integers(1, 4),
    st.floats(-20, 50),
)
def test_bound_paths_agree(logNQ, logK, n_R, snr_db):
    N_Q, K = 2**logNQ, 2**logK
    inp = BoundInputs(max(N_Q * K, 64), N_Q, K, n_R, 10 ** (snr_db / 10))
    a, b = ser_union_bound(inp), ser_union_bound_via_pmf(inp)
    assert abs(a - b) <= 1e-12 * max(1.0, a)


@given(st.integers(1, 4), st.integers(1, 4), st.floats(-20, 40), st.floats(0.5, 10))
def test_bound_decreases_with_snr(logK, n_R, snr_db, step):
    K = 2**logK
    lo = ser_union_bound(BoundInputs(64, 1, K, n_R, 10 ** (snr_db / 10)))
    hi = ser_union_bound(BoundInputs(64, 1, K, n_R, 10 ** ((snr_db + step) / 10)))
    assert hi < lo


@given(st.integers(1, 4), st.integers(1, 4), st.floats(0, 1e6))
def test_pep_is_a_probability(zeta, n_R, snr):
    assert 0 <= f_zeta(zeta, BoundInputs(64, 4, 4, n_R, snr)) <= 0.5 + 1e-15


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_partition_never_helps(n_R, N_Q, logK):
    assert partition_penalty_ratio(n_R, N_Q, 2**logK) >= 1 - 1e-12


@settings(deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_psd_sqrt_squares_back(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    R = A @ A.conj().T
    S = psd_sqrt(R)
    assert np.max(np.abs(S @ S - R)) < 1e-9 * max(1.0, np.max(np.abs(R)))


counters = st.builds(
    lambda t, s, g, b: ErrorCounters(t, s, g, b, 2, 3),
    st.integers(1, 10**6),
    st.integers(0, 10**3),
    st.integers(0, 10**3),
    st.integers(0, 10**3),
)


@given(counters, counters, counters)
def test_counter_merge_order_free(a, b, c):
    assert (a + b) + c == a + (b + c) == (c + b) + a


records = st.builds(
    Record,
    scheme=st.sampled_from(["ris-csm", "ris-cim"]),
    N=pow2,
    N_Q=pow2,
    K=pow2,
    n_R=st.integers(1, 8),
    M=pow2,
    snr_db=st.floats(-100, 100, allow_nan=False),
    metric=st.sampled_from(["ber", "capacity"]),
    value=st.floats(0, 1e3, allow_nan=False),
    trials=st.integers(0, 10**9),
    errors=st.integers(0, 10**9),
    std_err=st.floats(0, 1, allow_nan=False),
    seed=st.integers(0, 2**63),
)


@given(st.lists(records, max_size=5))
def test_csv_round_trip(tmp_path_factory, recs):
    path = tmp_path_factory.mktemp("rt") / "r.csv"
    emit(SweepResult(recs), "csv", path)
    assert read_results(path).records == recs
    buf = io.StringIO()
    emit(SweepResult(recs), "json", buf)
    assert buf.getvalue().count('"scheme"') == len(recs)
