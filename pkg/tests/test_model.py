from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codedswitch import (
    Instance,
    Solution,
    bipartite_view,
    empty_solution,
    muset,
    throughput,
    validate_instance,
    validate_solution,
)
from codedswitch.errors import (
    BadParams,
    CardinalityMismatch,
    DuplicateIndex,
    IndexOutOfRange,
    NotCyclicArc,
    NotSubset,
    Overlap,
    RhoMismatch,
    WrongCardinality,
)

from conftest import CONTENTION_PACKETS


def test_muset_sorts():
    assert muset([3, 1, 2]) == (1, 2, 3)


def test_muset_rejects_duplicates():
    with pytest.raises(DuplicateIndex):
        muset([1, 1, 2])


@given(st.lists(st.integers(0, 100), unique=True, max_size=20))
@settings(max_examples=100, deadline=None)
def test_muset_is_sorted_permutation(xs):
    out = muset(xs)
    assert list(out) == sorted(xs)


def test_validate_instance_ok(contention_instance):
    validate_instance(contention_instance)


def test_validate_instance_index_out_of_range():
    inst = Instance(N=5, k=1, n=3, packets=((0, 1, 5),))
    with pytest.raises(IndexOutOfRange):
        validate_instance(inst)


def test_validate_instance_not_cyclic_arc():
    inst = Instance(N=5, k=1, n=3, packets=((0, 2, 4),), placement="cyclic")
    with pytest.raises(NotCyclicArc):
        validate_instance(inst)


def test_validate_instance_cyclic_wraparound_ok():
    inst = Instance(N=5, k=1, n=3, packets=((0, 3, 4),), placement="cyclic")
    validate_instance(inst)


def test_validate_instance_cardinality():
    inst = Instance(N=5, k=1, n=3, packets=((0, 1),))
    with pytest.raises(CardinalityMismatch):
        validate_instance(inst)


def test_validate_instance_bad_k():
    inst = Instance(N=5, k=4, n=3, packets=((0, 1, 2),))
    with pytest.raises(BadParams):
        validate_instance(inst)


def test_validate_solution_ok(contention_instance):
    sol = Solution(assignments=((0, 1), (3, 4), None))
    validate_solution(contention_instance, sol)
    assert sol.l_star == 2


def test_validate_solution_overlap(contention_instance):
    sol = Solution(assignments=((0, 1), (1, 3), None))
    with pytest.raises(Overlap):
        validate_solution(contention_instance, sol)


def test_validate_solution_not_subset(contention_instance):
    sol = Solution(assignments=((0, 3), None, None))
    with pytest.raises(NotSubset):
        validate_solution(contention_instance, sol)


def test_validate_solution_wrong_cardinality(contention_instance):
    sol = Solution(assignments=((0,), None, None))
    with pytest.raises(WrongCardinality):
        validate_solution(contention_instance, sol)


def test_empty_solution_is_valid(contention_instance):
    sol = empty_solution(contention_instance)
    validate_solution(contention_instance, sol)
    assert sol.l_star == 0
    assert throughput(contention_instance, sol) == 0.0


def test_throughput_values(contention_instance):
    sol = Solution(assignments=((0, 1), (3, 4), None))
    assert throughput(contention_instance, sol) == pytest.approx(0.8)
    inst1 = Instance(N=5, k=1, n=3, packets=CONTENTION_PACKETS)
    sol1 = Solution(assignments=((0,), (1,), (2,)))
    assert throughput(inst1, sol1) == pytest.approx(0.6)


def test_rho_exact_is_rational(contention_instance):
    sol = Solution(assignments=((0, 1), (3, 4), None))
    assert sol.rho_exact(contention_instance) == Fraction(4, 5)


def test_rho_monotone_in_l_star(contention_instance):
    sols = [
        empty_solution(contention_instance),
        Solution(assignments=((0, 1), None, None)),
        Solution(assignments=((0, 1), (3, 4), None)),
    ]
    rhos = [throughput(contention_instance, s) for s in sols]
    assert rhos == sorted(rhos)


def test_assigned_mu_budget(contention_instance):
    sol = Solution(assignments=((0, 1), (3, 4), None))
    total = sum(len(a) for a in sol.assignments if a is not None)
    assert total == sol.l_star * contention_instance.k <= contention_instance.N


def test_instance_json_roundtrip(contention_instance):
    text = contention_instance.to_json()
    again = Instance.from_json(text)
    assert again == contention_instance
    assert again.to_json() == text


def test_solution_json_roundtrip():
    sol = Solution(assignments=((0, 1), None, (3, 4)))
    text = sol.to_json()
    again = Solution.from_json(text)
    assert again == sol
    assert again.to_json() == text


def test_solution_json_declared_l_star_checked():
    with pytest.raises(RhoMismatch):
        Solution.from_json('{"assignments": [[0,1], null], "l_star": 2}')


def test_bipartite_view_edges(contention_instance):
    view = bipartite_view(contention_instance)
    assert len(view.edges) == contention_instance.n * contention_instance.L
    for i, p in enumerate(contention_instance.packets):
        for m in p:
            assert (i, m) in view.edges
    assert view.packet_count == 3 and view.mu_count == 5


@given(st.integers(2, 9), st.integers(1, 8), st.data())
@settings(max_examples=60, deadline=None)
def test_instance_json_roundtrip_random(N, n, data):
    n = min(n, N)
    L = data.draw(st.integers(1, 4))
    packets = tuple(
        tuple(sorted(data.draw(st.sets(st.integers(0, N - 1), min_size=n, max_size=n))))
        for _ in range(L)
    )
    inst = Instance(N=N, k=1, n=n, packets=packets)
    assert Instance.from_json(inst.to_json()) == inst
