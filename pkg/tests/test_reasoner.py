"""Inference: MaxSAT oracle, Gibbs search, descent, conditionals, verify."""
import numpy as np
import pytest

import logicrbm as L
from logicrbm import formula as fm
from logicrbm.errors import SizeLimitError
from logicrbm.normal_forms import all_assignments
from logicrbm.reasoner import (
    DeterministicConfig, GibbsConfig, Query, brute_force_maxsat,
    infer_conditional, infer_deterministic, infer_gibbs, verify_equivalence,
)
from logicrbm.rbm import Rbm, energy_rank

from conftest import random_kb, random_rbm


@pytest.fixture
def xor():
    kb = fm.parse_kb("(x ^ y) <-> z")
    m, _ = L.compile_kb(kb)
    return kb, m


@pytest.fixture
def nixon(kb_dir):
    kb = L.load_kb(kb_dir / "nixon.kb")
    m, _ = L.compile_kb(kb)
    return kb, m


class TestBruteForceMaxsat:
    def test_nixon_given_n(self, nixon):
        kb, _ = nixon
        winners, best = brute_force_maxsat(kb, fm.Assignment({0: True}, 4))
        assert best == 2010.0
        assert winners == [(1, 1, 1, 0), (1, 1, 1, 1)]  # p is the tie variable

    def test_empty_kb_all_tie(self):
        kb = fm.KnowledgeBase(fm.PropositionTable(["x", "y"]))
        winners, best = brute_force_maxsat(kb, fm.Assignment({}, 2))
        assert best == 0.0 and len(winners) == 4

    def test_xor_completion(self, xor):
        kb, _ = xor
        winners, best = brute_force_maxsat(kb, fm.Assignment({0: True, 1: True}, 3))
        assert best == 1.0 and winners == [(1, 1, 0)]

    def test_size_limit(self):
        kb = fm.KnowledgeBase(fm.PropositionTable([f"v{i}" for i in range(30)]))
        with pytest.raises(SizeLimitError):
            brute_force_maxsat(kb, fm.Assignment({}, 30))


class TestQueryValidation:
    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            Query(evidence=fm.Assignment({0: True}, 3), targets=(0,))


class TestInferGibbs:
    def test_all_clamped_echo(self, xor):
        _, m = xor
        q = Query(evidence=fm.Assignment.total([1, 1, 0]))
        rep = infer_gibbs(m, q)
        assert rep.assignment == {0: True, 1: True, 2: False}
        assert rep.energy_rank == pytest.approx(-0.5)

    def test_xor_completes_to_model(self, xor):
        _, m = xor
        q = Query(evidence=fm.Assignment({0: True, 1: True}, 3))
        rep = infer_gibbs(m, q, GibbsConfig(steps=100, restarts=5, seed=0))
        assert rep.assignment[2] is False
        assert rep.energy_rank == pytest.approx(-0.5)
        assert rep.weighted_sat == pytest.approx(1.0)

    def test_nixon_given_n(self, nixon):
        kb, m = nixon
        q = Query(evidence=fm.Assignment({0: True}, 4))
        rep = infer_gibbs(m, q)
        _, best = brute_force_maxsat(kb, q.evidence)
        assert rep.weighted_sat == pytest.approx(best)

    def test_seed_reproducible(self, nixon):
        _, m = nixon
        q = Query(evidence=fm.Assignment({0: True}, 4))
        r1 = infer_gibbs(m, q, GibbsConfig(seed=5))
        r2 = infer_gibbs(m, q, GibbsConfig(seed=5))
        assert r1.assignment == r2.assignment
        assert r1.energy_trace == r2.energy_trace

    def test_trace_is_best_so_far(self, nixon):
        _, m = nixon
        q = Query(evidence=fm.Assignment({0: True}, 4))
        rep = infer_gibbs(m, q)
        assert all(b <= a + 1e-12 for a, b in zip(rep.energy_trace,
                                                  rep.energy_trace[1:]))


class TestInferDeterministic:
    def test_global_minimizer_is_fixed_point(self, xor):
        _, m = xor
        m0 = m.copy()
        m0.tau = 0.0
        from logicrbm.rbm import gibbs_step
        x = np.array([1.0, 1.0, 0.0])
        out = gibbs_step(m0, fm.Assignment({}, 3), x, np.random.default_rng(0))
        assert np.array_equal(out, x)

    def test_xor_clamp_x(self, xor):
        _, m = xor
        q = Query(evidence=fm.Assignment({0: True}, 3), mode="deterministic")
        rep = infer_deterministic(m, q)
        assert rep.energy_rank == pytest.approx(-0.5)
        assert (rep.assignment[1], rep.assignment[2]) in {(False, True), (True, False)}

    def test_traces_non_increasing_random(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            m = random_rbm(rng, int(rng.integers(2, 7)), int(rng.integers(1, 5)))
            clamp = {int(i): bool(rng.random() < 0.5)
                     for i in rng.permutation(m.n_visible)[: rng.integers(0, m.n_visible)]}
            q = Query(evidence=fm.Assignment(clamp, m.n_visible), mode="deterministic")
            rep = infer_deterministic(m, q, DeterministicConfig(sweeps=20, restarts=3,
                                                                seed=int(rng.integers(1e6))))
            for trace in rep.energy_trace:
                assert all(b <= a + 1e-9 for a, b in zip(trace, trace[1:]))


class TestInferConditional:
    def test_zero_weights_uniform(self):
        m = Rbm(W=np.zeros((3, 2)), a=np.zeros(3), b=np.zeros(2))
        rep = infer_conditional(m, fm.Assignment({0: True}, 3), (1, 2))
        np.testing.assert_allclose(rep.probabilities, 0.25)

    def test_xor_prefers_model(self, xor):
        _, m = xor
        rep = infer_conditional(m, fm.Assignment({0: True, 1: True}, 3), (2,))
        assert rep.marginals[2] < 0.5
        assert rep.decision[2] is False
        assert rep.map_config == (0,)

    def test_agrees_with_maxsat_on_random_kbs(self):
        rng = np.random.default_rng(19)
        done = 0
        while done < 10:
            kb = random_kb(rng, n_vars=4, n_formulas=3, w_low=0.5, w_high=5.0)
            m, _ = L.compile_kb(kb)
            evidence = fm.Assignment({0: bool(rng.random() < 0.5)}, 4)
            winners, _ = brute_force_maxsat(kb, evidence)
            if len(winners) != 1:
                continue
            m.tau = 0.05  # sharpen so the conditional concentrates on the MAP
            rep = infer_conditional(m, evidence, (1, 2, 3))
            assert tuple(winners[0][1:]) == rep.map_config
            done += 1

    def test_coverage_required(self, xor):
        _, m = xor
        with pytest.raises(ValueError):
            infer_conditional(m, fm.Assignment({0: True}, 3), (1,))

    def test_target_limit(self):
        m = Rbm(W=np.zeros((18, 1)), a=np.zeros(18), b=np.zeros(1))
        with pytest.raises(SizeLimitError):
            infer_conditional(m, fm.Assignment({0: True}, 18), tuple(range(1, 18)))

    def test_probabilities_normalize(self, nixon):
        _, m = nixon
        rep = infer_conditional(m, fm.Assignment({0: True}, 4), (1, 2, 3))
        assert rep.probabilities.sum() == pytest.approx(1.0)


class TestVerifyEquivalence:
    def test_nixon_zero_deviation(self, nixon):
        kb, m = nixon
        rep = verify_equivalence(m, kb, m.epsilon)
        assert rep.ok() and rep.max_deviation <= 1e-9
        assert rep.n_assignments == 16

    def test_xor_zero_deviation(self, xor):
        kb, m = xor
        assert verify_equivalence(m, kb, m.epsilon).ok()

    def test_perturbation_detected(self, xor):
        kb, m = xor
        m.b[0] += 0.1  # raises the active net input of unit 0 at its model
        rep = verify_equivalence(m, kb, m.epsilon)
        assert not rep.ok() and rep.max_deviation > 0.01
        assert set(rep.witness) == {0, 1, 2}

    def test_size_limit(self):
        kb = fm.KnowledgeBase(fm.PropositionTable([f"v{i}" for i in range(17)]))
        m = Rbm(W=np.zeros((17, 0)), a=np.zeros(17), b=np.zeros(0))
        with pytest.raises(SizeLimitError):
            verify_equivalence(m, kb, 0.5)

    def test_argmin_argmax_duality(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            kb = random_kb(rng, n_vars=4, n_formulas=3)
            m, _ = L.compile_kb(kb)
            X = all_assignments(4)
            s = fm.weighted_sat_batch(kb, X)
            e = energy_rank(m, X)
            assert set(map(tuple, X[np.isclose(s, s.max())])) \
                == set(map(tuple, X[np.isclose(e, e.min())]))
