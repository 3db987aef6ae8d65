from fractions import Fraction

import numpy as np
import pytest

from conftest import random_regular, random_signs
from oracles import exhaustive_Y, exhaustive_Z, trace_power, z_count
from hdxlift.complex import build_from_top_faces, complete_complex
from hdxlift.derand import (
    DerandParams,
    DerandState,
    connected_pairs,
    decimal_str,
    expected_Q,
    expected_Y,
    expected_Z,
    greedy_derand_lift,
    incremental_Q_update,
)
from hdxlift.errors import AdmissibilityError, HypothesisError, ParameterError, SetError, StateError
from hdxlift.graph import Graph, complete_graph, cycle_graph
from hdxlift.lifting import Signing, link_edge_signing
from hdxlift.spectral import signed_walk_operator, spectral_norm


def test_triangle_r2_is_three_halves(rng):
    g = complete_graph(3)
    for _ in range(5):
        assert expected_Y(g, random_signs(3, rng, zeros=True), 2) == Fraction(3, 2)


def test_k4_r4_against_all_signings():
    g = complete_graph(4)
    assert expected_Y(g, [0] * 6, 4) == exhaustive_Y(g, [0] * 6, 4)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("r", [2, 4, 6])
def test_complete_signing_equals_matrix_power(seed, r):
    rng = np.random.default_rng(seed)
    g = random_regular(10, 3, seed)
    s = random_signs(len(g.edges), rng)
    assert expected_Y(g, s, r) == trace_power(g, s, r)


@pytest.mark.parametrize("g", [complete_graph(4), cycle_graph(5), cycle_graph(8), Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])])
@pytest.mark.parametrize("r", [2, 4, 6])
def test_partial_signing_against_completions(g, r, rng):
    for _ in range(4):
        s = random_signs(len(g.edges), rng, zeros=True)
        assert expected_Y(g, s, r) == exhaustive_Y(g, s, r)


def test_odd_r_rejected():
    with pytest.raises(ParameterError):
        expected_Y(cycle_graph(4), [1] * 4, 3)


def test_z_deterministic_cases():
    g = cycle_graph(4)  # edges 0-1, 0-3, 1-2, 2-3
    S, T = [0], [1, 3]
    assert expected_Z(g, [1, -1, 1, 1], S, T, 0.5, 7) == 0
    assert expected_Z(g, [1, 1, 1, 1], S, T, 0.5, 7) == 7


def test_z_two_free_edges_half_tail():
    g = cycle_graph(4)
    # c = 0, bound 0.5 * sqrt(2) < 2/d = 1, so only w = +-2 exceed
    assert expected_Z(g, [0, 0, 1, 1], [0], [1, 3], 0.5, 10) == 5


@pytest.mark.parametrize("seed", range(6))
def test_z_against_enumeration(seed):
    rng = np.random.default_rng(seed)
    g = random_regular(12, 5, seed)
    s = random_signs(len(g.edges), rng, zeros=True)
    S, T = [0, 1, 2], [3, 4, 5, 6]
    for beta in (0.1, 0.3, 0.6):
        assert expected_Z(g, s, S, T, beta, 3) == exhaustive_Z(g, s, S, T, beta, 3)


def test_z_overlap_rejected():
    with pytest.raises(SetError):
        expected_Z(cycle_graph(4), [1] * 4, [0, 1], [1, 2], 0.5, 1)


def test_connected_pairs_enumerate_all_bipartitions():
    pairs = connected_pairs(cycle_graph(5), 3)
    # 5 paths of 3 vertices, each split 3 ways
    assert len(pairs) == 15 and len(set(pairs)) == 15
    assert all(min(S + T) in S for S, T in pairs)


def test_params_defaults():
    X = complete_complex(8, 2)
    p = DerandParams.for_complex(X, 0.5)
    assert p.r == p.r_default == 6
    assert p.gamma == (Fraction(8) * Fraction(p.beta_prime) * 6 ** 12) ** 6
    assert not p.r_overridden
    assert DerandParams.for_complex(X, 0.5, r=4).r_overridden
    with pytest.raises(ParameterError):
        DerandParams.for_complex(X, 0.5, r=3)
    with pytest.raises(ParameterError):
        DerandParams.for_complex(X, 0.5, gamma=0)
    assert decimal_str(Fraction(1, 3), 5) == "0.33333"


def test_incremental_equals_from_scratch(rng):
    X = complete_complex(6, 2)
    params = DerandParams.for_complex(X, 0.5, r=4)
    state = DerandState(X, params)
    order = rng.permutation(len(X.top_faces))
    for tau in order:
        value = int(rng.choice([-1, 1]))
        incremental_Q_update(state, int(tau), value)
        assert state.expected_q() == expected_Q(X, state.values, params)
    with pytest.raises(StateError):
        state.assign(int(order[0]), 1)


def test_complete_signing_q_by_oracles(rng):
    X = complete_complex(6, 2)
    params = DerandParams.for_complex(X, 0.3, r=4, gamma=1000)
    f = Signing.random(X, rng)
    want = Fraction(0)
    for sigma in X.faces(0):
        g = X.link(sigma).graph()
        s = link_edge_signing(X, f, sigma)
        want += trace_power(g, s, 4) + params.gamma * z_count(g, s, 0.3)
    assert expected_Q(X, f, params) == want


def test_martingale_step_is_an_average(rng):
    X = complete_complex(6, 2)
    state = DerandState(X, DerandParams.for_complex(X, 0.5, r=4))
    for tau in range(5):
        cur = state.expected_q()
        plus = state.conditional_q(tau, 1, cur)
        minus = state.conditional_q(tau, -1, cur)
        assert (plus + minus) / 2 == cur
        assert min(plus, minus) <= cur
        state.assign(tau, 1 if plus <= minus else -1)


def test_greedy_gates():
    X = complete_complex(8, 2)
    with pytest.raises(HypothesisError):
        greedy_derand_lift(X, DerandParams.for_complex(X, 0.5, r=2))
    with pytest.raises(AdmissibilityError) as info:
        greedy_derand_lift(X, DerandParams.for_complex(X, 0.5, r=2, gamma=Fraction(1, 10)), override_hypotheses=True)
    assert info.value.expected_q >= info.value.gamma


def _q_complete(X, f, params):
    return expected_Q(X, f, params)


def test_cycle_k1_greedy_beats_the_mean():
    g = cycle_graph(8)
    X = build_from_top_faces(1, g.edges)
    # beta = 0.5 is inadmissible on C8 (E[Q] is 10 gamma); 0.8 is not
    params = DerandParams.for_complex(X, 0.8)
    f, stats = greedy_derand_lift(X, params, override_hypotheses=True)
    assert "hypotheses-overridden" in stats.flags
    values = []
    for bits in range(2**8):
        s = [1 if bits >> i & 1 else -1 for i in range(8)]
        values.append(_q_complete(X, Signing(X, s), params))
    mean = sum(values, Fraction(0)) / len(values)
    final = stats.exact["trace"][-1]
    assert stats.exact["trace"][0] == mean
    assert final == _q_complete(X, f, params) <= mean
    assert all(z == 0 for z in stats.exact["final_z"])
    r = params.r
    norm = spectral_norm(signed_walk_operator(g, f.values))
    y = stats.exact["final_y"][0]
    assert norm <= float(y) ** (1 / r) + 1e-12


def test_greedy_small_complex(rng):
    X = complete_complex(6, 2)
    params = DerandParams.for_complex(X, 0.5, r=4)
    f, stats = greedy_derand_lift(X, params, override_hypotheses=True)
    trace = stats.exact["trace"]
    assert len(trace) == len(X.top_faces) + 1
    assert all(b <= a for a, b in zip(trace, trace[1:]))
    assert all(z == 0 for z in stats.exact["final_z"])
    assert f.complete
    again, _ = greedy_derand_lift(X, params, override_hypotheses=True)
    assert again == f
