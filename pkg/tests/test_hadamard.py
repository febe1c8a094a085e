import numpy as np
import pytest

from riscsm.errors import IndexOutOfRange, InvalidDimensions, NotPowerOfTwo
from riscsm.hadamard import difference_profile, hadamard_row, pattern_set, sylvester


def test_small_sylvester():
    assert np.array_equal(sylvester(1), [[1]])
    assert np.array_equal(sylvester(2), [[1, 1], [1, -1]])


@pytest.mark.parametrize("n", [4, 8, 64])
def test_rows_orthogonal(n):
    H = sylvester(n).astype(np.int64)
    assert np.array_equal(H @ H.T, n * np.eye(n, dtype=np.int64))


def test_sylvester_rejects_non_power():
    with pytest.raises(NotPowerOfTwo):
        sylvester(12)


def test_row_formula_matches_matrix():
    H = sylvester(32)
    for i in range(32):
        assert np.array_equal(hadamard_row(32, i), H[i])
    with pytest.raises(IndexOutOfRange):
        hadamard_row(32, 32)


def test_four_patterns_of_sixteen():
    # bit pairs 00, 01, 10, 11 select these reflection patterns
    ps = pattern_set(16, 4)
    expected = [
        [1] * 16,
        [1, -1] * 8,
        [1, 1, -1, -1] * 4,
        [1, -1, -1, 1] * 4,
    ]
    assert np.array_equal(ps.patterns, expected)


def test_single_pattern_all_ones():
    assert np.array_equal(pattern_set(8, 1).patterns, np.ones((1, 8)))


def test_patterns_are_leading_rows():
    assert np.array_equal(pattern_set(256, 8).patterns, sylvester(256)[:8])


def test_patterns_read_only():
    ps = pattern_set(8, 4)
    with pytest.raises(ValueError):
        ps.patterns[0, 0] = -1


def test_pattern_set_bad_dims():
    with pytest.raises(InvalidDimensions):
        pattern_set(8, 16)


def test_difference_profile_examples():
    ps = pattern_set(16, 4)
    assert difference_profile(ps, 1, 1) == (0, 16)
    assert difference_profile(ps, 0, 1) == (8, 8)


def test_difference_profile_exhaustive():
    ps = pattern_set(32, 32)
    for m in range(32):
        for l in range(32):
            if m != l:
                assert difference_profile(ps, m, l) == (16, 16)


def test_difference_profile_bad_index():
    with pytest.raises(IndexOutOfRange):
        difference_profile(pattern_set(8, 4), 0, 4)


def test_column_classes_reconstruct():
    ps = pattern_set(16, 4)
    cols, counts = ps.column_classes()
    assert counts.sum() == 16
    # every element's column appears among the classes
    for j in range(16):
        assert any(np.array_equal(ps.patterns[:, j], cols[:, c]) for c in range(cols.shape[1]))
