import math

import numpy as np
import pytest

from hdxlift.complex import build_from_top_faces, complete_complex
from hdxlift.errors import NicenessError, NonTerminationError, PartialSigningError, RegularityError
from hdxlift.lifting import Signing, graph_induced_lift, link_edge_signing
from hdxlift.lll import (
    LLLConfig,
    bad_event_holds,
    dependency_bound,
    dependency_neighbors,
    is_nice,
    moser_tardos_lift,
    niceness_from_degrees,
    random_lift_signing,
)
from hdxlift.spectral import is_sparse, signed_walk_operator, spectral_norm


def test_niceness_small_profile():
    rep = niceness_from_degrees(2, 2, 2)
    assert rep.lhs == 0.125
    assert rep.rhs == pytest.approx(2 / (math.e * 12 + 1))
    assert not rep.nice


def test_niceness_of_complete_complexes():
    assert not is_nice(complete_complex(5, 3)).nice
    assert is_nice(complete_complex(6, 3)).nice
    assert is_nice(complete_complex(30, 2)).nice


def test_niceness_log_space_handles_huge_degrees():
    rep = niceness_from_degrees(3, 10**6, 10**5)
    assert rep.nice and rep.lhs == 0.0


def test_niceness_needs_regularity():
    with pytest.raises(RegularityError):
        is_nice(build_from_top_faces(2, [[0, 1, 2], [1, 2, 3]]))


def _config(X, **kw):
    base = dict(beta=0.9, seed=1, lambda_prime_target=0.9, sparsity_t=3)
    base.update(kw)
    return LLLConfig.for_complex(X, **base)


def test_config_defaults_and_flags():
    X = complete_complex(8, 2)
    c = LLLConfig.for_complex(X, beta=0.5, seed=3)
    assert c.sparsity_t == int(math.floor(math.log2(2 * 7)))
    assert c.max_resamples == 100 * 8
    assert c.lambda_prime_target >= 4 * 0.5 * 2
    assert "beta-below-alpha" in c.flags(X)
    assert "partly-vacuous-thresholds" in c.flags(X)
    assert "vacuous-thresholds" in _config(X, beta=1.0, lambda_prime_target=1.0).flags(X)


def test_bad_event_causes(rng):
    X = complete_complex(8, 2)
    f = Signing.random(X, rng)
    sigma = (0,)
    hit = bad_event_holds(X, f, sigma, _config(X, lambda_prime_target=0.01))
    assert hit.cause == "spectral_norm_exceeded"
    norm = spectral_norm(signed_walk_operator(X.link(sigma).graph(), link_edge_signing(X, f, sigma)))
    assert hit.witness == pytest.approx(norm)
    hit = bad_event_holds(X, f, sigma, _config(X, lambda_prime_target=1.0, beta=0.05))
    assert hit.cause == "sparseness_violated"
    g = graph_induced_lift(X.link(sigma).graph(), hit.lift_sign * link_edge_signing(X, f, sigma))
    assert is_sparse(g, 0.05, 3) == hit.witness
    assert set(hit.to_json()) == {"sigma", "cause", "witness", "lift_sign"}


def test_bad_event_needs_a_complete_signing():
    X = complete_complex(6, 2)
    with pytest.raises(PartialSigningError):
        bad_event_holds(X, Signing(X), (0,), _config(X))


@pytest.mark.parametrize("n,k", [(6, 2), (6, 3), (7, 3)])
def test_dependency_neighbours_by_brute_force(n, k):
    X = complete_complex(n, k)
    for s in X.faces(k - 2):
        want = sorted(
            o for o in X.faces(k - 2) if o != s and any(set(s) | set(o) <= set(t) for t in X.top_faces)
        )
        assert dependency_neighbors(X, s) == want
        # each event shares top faces with at most D others
        assert len(want) <= dependency_bound(X)


def test_mt_terminates_with_no_bad_event():
    X = complete_complex(10, 2)
    config = _config(X, lambda_prime_target=0.8, beta=0.7, seed=11)
    f, stats = moser_tardos_lift(X, config)
    assert f.complete
    assert all(bad_event_holds(X, f, s, config) is None for s in X.faces(0))
    assert stats.event_checks >= len(X.faces(0))
    assert stats.total_resamples == stats.iterations
    assert set(stats.to_json()) >= {"mode", "iterations", "total_resamples", "resamples", "eigensolves"}
    assert "wall_time" not in stats.to_json()


def test_mt_is_seeded():
    X = complete_complex(10, 2)
    a, sa = moser_tardos_lift(X, _config(X, lambda_prime_target=0.8, beta=0.7, seed=5))
    b, sb = moser_tardos_lift(X, _config(X, lambda_prime_target=0.8, beta=0.7, seed=5))
    assert a == b and sa.to_json() == sb.to_json()


def test_mt_resample_cap():
    X = complete_complex(8, 2)
    with pytest.raises(NonTerminationError) as info:
        moser_tardos_lift(X, _config(X, lambda_prime_target=0.01, max_resamples=4))
    assert info.value.stats.total_resamples == 4


def test_mt_niceness_gate():
    X = complete_complex(5, 3)
    config = LLLConfig.for_complex(X, beta=1.0, seed=0, lambda_prime_target=1.0, sparsity_t=2)
    with pytest.raises(NicenessError):
        moser_tardos_lift(X, config)
    forced = LLLConfig.for_complex(X, beta=1.0, seed=0, lambda_prime_target=1.0, sparsity_t=2, override_nice=True)
    f, stats = moser_tardos_lift(X, forced)
    assert "not-nice-override" in stats.flags and f.complete


def test_random_lift_signing_is_uniform_draw():
    X = complete_complex(7, 2)
    f = random_lift_signing(X, 9)
    assert f == random_lift_signing(X, 9)
    assert set(np.unique(f.values)) <= {-1, 1}
