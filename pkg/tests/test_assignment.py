from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pilotreuse.assignment import (
    PilotAssignmentVector,
    c_net,
    c_sum,
    check_length,
    chi,
    is_valid,
    n_pil,
    optimal_fixed_length,
    order_of,
    require_group,
)
from pilotreuse.channel import linear_rate_model
from pilotreuse.errors import GroupMismatchError, InvalidLengthError, InvalidParameterError, ShapeError
from pilotreuse.oracle import enumerate_valid


def V(entries, K, L=81):
    return PilotAssignmentVector(tuple(entries), K, L)


class TestValidity:
    def test_examples(self):
        assert is_valid(V((10, 0, 0, 0), 10))
        assert is_valid(V((1, 3, 0, 0), 2))
        assert not is_valid(V((1, 2, 0, 0), 2))

    def test_bounds_and_length(self):
        assert not is_valid(V((0, 0, 0, 55), 2))  # p_3 <= K 3^3 = 54
        assert not is_valid(V((2, 0, 0), 2))  # wrong length for L = 81
        assert not is_valid(V((3, -3, 0, 0), 2))

    @pytest.mark.parametrize("L", [8, 3, 1, 10, 0])
    def test_order(self, L):
        with pytest.raises(InvalidParameterError):
            order_of(L)

    def test_n_pil(self):
        assert n_pil(V((10, 0, 0, 0), 10)) == 10
        assert n_pil(V((1, 3, 0, 0), 2)) == 4

    @pytest.mark.parametrize("L", [9, 27])
    @pytest.mark.parametrize("K", range(1, 7))
    def test_parity(self, L, K):
        for p in enumerate_valid(L, K):
            assert is_valid(p)
            assert (n_pil(p) - K) % 2 == 0
            assert K <= n_pil(p) <= L * K // 3


class TestChi:
    def test_examples(self):
        assert chi(10, 10) == 0
        assert chi(14, 2) == 1
        assert chi(54, 2) == 3

    @pytest.mark.parametrize("n,K,L", [(9, 10, 81), (11, 10, 81), (272, 10, 81), (5, 2, 9)])
    def test_invalid_length(self, n, K, L):
        with pytest.raises(InvalidLengthError):
            chi(n, K, L)

    def test_check_length_needs_positive_K(self):
        with pytest.raises(InvalidParameterError):
            check_length(2, 0)


class TestFixedLength:
    def test_examples(self):
        assert optimal_fixed_length(4, 2, 81).entries == (1, 3, 0, 0)
        assert optimal_fixed_length(10, 8, 81).entries == (7, 3, 0, 0)
        assert optimal_fixed_length(10, 10, 81).entries == (10, 0, 0, 0)
        assert optimal_fixed_length(270, 10, 81).entries == (0, 0, 0, 270)

    @pytest.mark.parametrize("L", [9, 27, 81, 243])
    @pytest.mark.parametrize("K", [1, 2, 5, 8])
    def test_shape_and_neighbour_relation(self, L, K):
        prev = None
        for n in range(K, L * K // 3 + 1, 2):
            p = optimal_fixed_length(n, K, L)
            assert is_valid(p) and n_pil(p) == n
            nz = [i for i, e in enumerate(p.entries) if e]
            assert len(nz) <= 2 and (len(nz) < 2 or nz[1] == nz[0] + 1)
            assert nz[0] == chi(n, K, L)
            if prev is not None:
                # toss one leaf from the left-most non-zero entry three ways one level down
                i = next(i for i, e in enumerate(prev.entries) if e)
                step = list(prev.entries)
                step[i] -= 1
                step[i + 1] += 3
                assert tuple(step) == p.entries
            prev = p


class TestRates:
    def test_c_sum(self, lin4):
        assert c_sum(V((10, 0, 0, 0), 10), lin4) == 10 * 2
        assert c_sum(V((1, 3, 0, 0), 2), lin4) == 10

    def test_c_sum_shape(self, lin4):
        with pytest.raises(ShapeError):
            c_sum(PilotAssignmentVector((1, 3), 2, 9), lin4)

    @pytest.mark.parametrize("L", [9, 27])
    def test_deeper_leaf_increases_sum(self, L):
        m = order_of(L)
        r = linear_rate_model(Fraction(39, 10), Fraction(11, 2), m)
        for p in enumerate_valid(L, 3):
            for i in range(m - 1):
                if p.entries[i]:
                    q = list(p.entries)
                    q[i] -= 1
                    q[i + 1] += 3
                    q = PilotAssignmentVector(tuple(q), 3, L)
                    if is_valid(q):
                        assert c_sum(q, r) - c_sum(p, r) == Fraction(1, 3 ** i) * (r[i + 1] - r[i])

    def test_c_net(self, lin4):
        p = V((10, 0, 0, 0), 10)
        s = c_sum(p, lin4)
        assert c_net(p, lin4, 10) == 0
        assert c_net(p, lin4, 100) == Fraction(9, 10) * s
        assert c_net(p, lin4, 5) < 0
        assert float(c_net(p, lin4, 10 ** 9)) == pytest.approx(float(s), rel=1e-6)

    @pytest.mark.parametrize("n", [0, -3])
    def test_c_net_nonpositive(self, lin4, n):
        with pytest.raises(InvalidParameterError):
            c_net(V((10, 0, 0, 0), 10), lin4, n)

    def test_group_mismatch(self):
        p = V((2, 0, 0, 0), 2)
        require_group(p, 2, 81)
        with pytest.raises(GroupMismatchError):
            require_group(p, 8, 81)
        with pytest.raises(TypeError):
            require_group(p, 2, 27)


@given(st.integers(1, 20), st.integers(2, 5), st.data())
def test_fixed_length_always_valid(K, m, data):
    L = 3 ** m
    n = data.draw(st.integers(0, (L * K // 3 - K) // 2)) * 2 + K
    p = optimal_fixed_length(n, K, L)
    assert is_valid(p)
    assert n_pil(p) == n
