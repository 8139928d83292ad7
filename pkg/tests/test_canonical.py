import math

import numpy as np
import pytest

from qw1d.canonical import (
    CLASSES,
    COMPLETE_TWO_PHASE,
    GENERAL,
    ONE_DEFECT,
    TI,
    TWO_PHASE_DEFECT,
    CanonicalCompleteTwoPhase,
    CanonicalGeneral,
    CanonicalTwoPhaseDefect,
    GaugeTransform,
    canonical_from_dict,
    canonical_to_dict,
    canonicalize,
    canonicalize_complete_two_phase,
    canonicalize_general,
    canonicalize_one_defect,
    canonicalize_ti,
    canonicalize_two_phase_defect,
    canonicalize_with_state,
    classify,
    gauge_residual,
    general_derivation,
)
from qw1d.core import CoeffSite, WalkSpec, build_window_operator, phase_distance, phase_equal
from qw1d.equivalence import equivalent_params, gauge_search
from qw1d.errors import NotInClass, NotUnitState, WindowTooSmall
from walkgen import HADAMARD, SHIFT, form_spec, gauged_copy, random_site, random_spec, random_state

SQ = 1 / math.sqrt(2)
PI = math.pi


def assert_phases(actual, expected, tol=1e-9):
    for x, y in zip(actual, expected, strict=True):
        assert phase_distance(x, y) <= tol, (actual, expected)


class TestGeneral:
    def test_hadamard(self):
        form, gauge = canonicalize_general(WalkSpec.uniform(HADAMARD), 4)
        assert all(t == 0.0 for t in form.theta.values())
        assert all(r == pytest.approx(SQ) for r in form.r.values())
        assert phase_distance(form.left_slope, 0) < 1e-12
        assert gauge_residual(WalkSpec.uniform(HADAMARD), gauge, form, 4) < 1e-12

    def test_hadamard_derivation_by_hand(self):
        der = general_derivation(WalkSpec.uniform(HADAMARD), 4)
        for n in range(-4, 5):
            assert phase_equal(der.g[n], 0.0)
            assert phase_equal(der.h[n], n * PI)
            assert phase_equal(der.k[n], n * PI)
        assert der.ell == pytest.approx(PI / 2)

    def test_already_canonical_is_fixed(self, rng):
        theta = {n: rng.uniform(0, 2 * PI) for n in range(-3, 4)}
        theta[0] = theta[1] = 0.0
        r = {n: rng.uniform(0.1, 0.9) for n in range(-3, 4)}
        site = {n: CoeffSite(r[n], 0.0, theta[n], PI - theta[n], 0.0) for n in theta}
        spec = WalkSpec(site[-3], site[3], site)
        form, gauge = canonicalize_general(spec, 6)
        for n in range(-3, 4):
            assert phase_equal(form.theta[n], theta[n])
            assert form.r[n] == r[n]
        assert gauge.isclose(GaugeTransform.identity())

    def test_random_spec(self, rng):
        for _ in range(20):
            spec = random_spec(rng, GENERAL)
            form, gauge = canonicalize_general(spec, 6)
            assert form.theta[0] == 0.0 and form.theta[1] == 0.0
            assert gauge_residual(spec, gauge, form, form.window) < 1e-10
            # the extrapolated tails are also reached by the same gauge extended affinely
            assert gauge_residual(spec, gauge, form, form.window) < 1e-10

    def test_window_widened_to_cover_exceptions(self, rng):
        spec = WalkSpec(HADAMARD, HADAMARD, {5: random_site(rng)})
        form, _ = canonicalize_general(spec, 2)
        assert form.window == 7

    def test_small_window(self):
        with pytest.raises(WindowTooSmall):
            canonicalize_general(WalkSpec.uniform(HADAMARD), 1)

    def test_phase_k_read_off_two_ways(self, rng):
        spec = random_spec(rng, GENERAL)
        N = 6
        der = general_derivation(spec, N)
        # gauge by (g, h) alone: the e_2 -> e_1 hop at site n becomes s_n e^{-i k_n}
        op = GaugeTransform(0.0, der.g, der.h).apply_window(build_window_operator(spec, N))
        form, gauge = canonicalize_general(spec, N)
        full = gauge.apply_window(build_window_operator(spec, N))
        k1 = der.k[1]
        for n in range(-N + 1, N + 1):
            s = spec.site(n).s
            k_read = -np.angle(op.matrix[op.index(n - 1, 1), op.index(n, 2)] / s)
            theta_read = -np.angle(full.matrix[full.index(n - 1, 1), full.index(n, 2)] / s)
            assert phase_equal(k_read, der.k[n])
            assert phase_equal(theta_read, der.k[n] - n * k1)
            assert phase_equal(theta_read, form.theta[n])

    def test_tail_slopes_extrapolate(self, rng):
        spec = random_spec(rng, GENERAL)
        small, _ = canonicalize_general(spec, 5)
        big, _ = canonicalize_general(spec, 12)
        for n in range(-12, 13):
            assert phase_equal(small.theta_at(n), big.theta[n])
            assert small.r_at(n) == big.r[n]


class TestTwoPhaseDefect:
    def test_translation_invariant(self, rng):
        form, _ = canonicalize_two_phase_defect(WalkSpec.uniform(random_site(rng)))
        assert_phases(form.phases(), (0, 0, 0))

    def test_one_defect_has_no_mu3(self, rng):
        left = random_site(rng)
        form, _ = canonicalize_two_phase_defect(WalkSpec(left, left, {0: random_site(rng)}))
        assert phase_distance(form.mu3, 0) < 1e-9

    def test_closed_forms(self, rng):
        minus, plus, zero = (random_site(rng) for _ in range(3))
        form, _ = canonicalize_two_phase_defect(WalkSpec(minus, plus, {0: zero}))
        assert_phases(
            form.phases(),
            (zero.b - minus.b, plus.b - minus.b + zero.c - minus.c,
             plus.b - minus.b + plus.c - minus.c),
        )
        assert (form.r_plus, form.r_minus, form.r_0) == (plus.r, minus.r, zero.r)

    def test_other_mu2_candidate_fails_identity(self, rng):
        # with c_+ != c_- the alternative c_0 - c_+ closed form does not realize the walk
        minus, plus, zero = (random_site(rng) for _ in range(3))
        spec = WalkSpec(minus, plus, {0: zero})
        form, gauge = canonicalize_two_phase_defect(spec)
        alt = CanonicalTwoPhaseDefect(form.r_plus, form.r_minus, form.r_0, form.mu1,
                                      plus.b - minus.b + zero.c - plus.c, form.mu3)
        assert gauge_residual(spec, gauge, form, 6) < 1e-10
        assert gauge_residual(spec, gauge, alt, 6) > 1e-3

    def test_agrees_with_general_and_oracle(self, rng):
        for _ in range(10):
            spec = random_spec(rng, TWO_PHASE_DEFECT)
            form, _ = canonicalize_two_phase_defect(spec)
            assert gauge_search(spec, form, 8) is not None
            g1, _ = canonicalize_general(spec, 8)
            g2, _ = canonicalize_general(form_spec(form), 8)
            assert equivalent_params(g1, g2)

    def test_not_in_class(self, rng):
        with pytest.raises(NotInClass):
            canonicalize_two_phase_defect(random_spec(rng, GENERAL))


class TestCompleteTwoPhase:
    def test_translation_invariant(self, rng):
        form, _ = canonicalize_complete_two_phase(WalkSpec.uniform(random_site(rng)))
        assert_phases(form.phases(), (0, 0))

    def test_tails_differing_in_c(self):
        r, a, b = 0.6, 0.4, 1.3

        def tail(c):
            return CoeffSite(r, a, b, c, c - a + b + PI)

        spec = WalkSpec(tail(0.3), tail(1.0))
        form, gauge = canonicalize_complete_two_phase(spec)
        assert_phases(form.phases(), (0.7, 0.0))
        assert gauge_residual(spec, gauge, form, 8) < 1e-10

    def test_random(self, rng):
        for _ in range(20):
            spec = random_spec(rng, COMPLETE_TWO_PHASE)
            form, gauge = canonicalize_complete_two_phase(spec)
            assert gauge_residual(spec, gauge, form, 8) < 1e-10

    def test_not_in_class(self, rng):
        with pytest.raises(NotInClass):
            canonicalize_complete_two_phase(random_spec(rng, TWO_PHASE_DEFECT))


class TestOneDefect:
    def test_shift_with_hadamard_defect(self):
        form, gauge = canonicalize_one_defect(WalkSpec(SHIFT, SHIFT, {0: HADAMARD}))
        assert form.r_pm == 1.0 and form.r_0 == pytest.approx(SQ)
        # site 0 already has the canonical shape; the dead shift phases give c_- = pi
        assert_phases(form.phases(), (0.0, PI))

    def test_translation_invariant(self, rng):
        site = random_site(rng)
        form, _ = canonicalize_one_defect(WalkSpec.uniform(site))
        assert_phases(form.phases(), (0, 0))
        assert form.r_0 == form.r_pm == site.r

    def test_not_in_class(self, rng):
        with pytest.raises(NotInClass):
            canonicalize_one_defect(random_spec(rng, COMPLETE_TWO_PHASE))


class TestTI:
    @pytest.mark.parametrize("site, r", [
        (HADAMARD, SQ),
        (SHIFT, 1.0),
        (CoeffSite(0.0, 0.0, 0.7, 1.9, 0.0), 0.0),
    ])
    def test_radius(self, site, r):
        form, gauge = canonicalize_ti(WalkSpec.uniform(site))
        assert form.r == pytest.approx(r)
        assert gauge_residual(WalkSpec.uniform(site), gauge, form, 6) < 1e-10

    def test_not_in_class(self, rng):
        with pytest.raises(NotInClass):
            canonicalize_ti(random_spec(rng, ONE_DEFECT))

    def test_consistent_with_two_phase_defect(self, rng):
        spec = random_spec(rng, TI)
        ti, _ = canonicalize_ti(spec)
        mu, _ = canonicalize_two_phase_defect(spec)
        assert mu.r_plus == mu.r_minus == mu.r_0 == ti.r


class TestClassify:
    def test_examples(self, rng):
        a, b = random_site(rng), random_site(rng)
        assert classify(WalkSpec(a, a)) == TI
        assert classify(WalkSpec(a, b)) == COMPLETE_TWO_PHASE
        assert classify(WalkSpec(a, a, {0: b})) == ONE_DEFECT
        assert classify(WalkSpec(a, b, {0: a})) == TWO_PHASE_DEFECT
        assert classify(WalkSpec(a, b, {0: a, 2: a})) == GENERAL
        assert classify(WalkSpec(a, a, {3: a})) == TI

    @pytest.mark.parametrize("cls", CLASSES)
    def test_random_specs(self, rng, cls):
        assert classify(random_spec(rng, cls)) == cls


# a General form with nonzero tail slopes is not eventually constant, so it
# has no WalkSpec image; test_already_canonical_is_fixed covers that class
@pytest.mark.parametrize("cls", [c for c in CLASSES if c != GENERAL])
def test_idempotent(rng, cls):
    for _ in range(5):
        form, _ = canonicalize(random_spec(rng, cls), cls)
        again, _ = canonicalize(form_spec(form, K=3), cls)
        assert equivalent_params(form, again)
        assert_phases(again.phases()[:len(form.phases())], form.phases()[:len(again.phases())])


@pytest.mark.parametrize("cls", CLASSES)
def test_invariant_under_gauge(rng, cls):
    for _ in range(5):
        spec = random_spec(rng, cls)
        copy, _ = gauged_copy(rng, spec, cls)
        assert classify(copy) == cls
        f1, _ = canonicalize(spec, cls)
        f2, _ = canonicalize(copy, cls)
        assert equivalent_params(f1, f2)


@pytest.mark.parametrize("cls", CLASSES)
def test_json_round_trip(rng, cls):
    form, _ = canonicalize(random_spec(rng, cls), cls)
    data = canonical_to_dict(form)
    assert data["class"] == cls
    back = canonical_from_dict(data)
    assert back == form


class TestWithState:
    def test_e2_on_canonical_walk(self):
        form = CanonicalCompleteTwoPhase(0.6, 0.7, 0.3, 1.2)
        _, st, gauge = canonicalize_with_state(form_spec(form), [0, 1])
        assert (st.alpha, st.theta) == (0.0, 0.0)

    def test_balanced_state_on_canonical_walk(self):
        form = CanonicalCompleteTwoPhase(0.6, 0.7, 0.3, 1.2)
        spec = form_spec(form)
        _, st, gauge = canonicalize_with_state(spec, np.array([1, 1]) * SQ)
        # the realizing gauge lies in the commutant of the canonical walk
        assert gauge_residual(spec, gauge, spec, 6) < 1e-12
        assert st.alpha == pytest.approx(SQ)
        assert st.theta == pytest.approx(0.0, abs=1e-12)

    def test_e1_on_hadamard(self):
        _, st, gauge = canonicalize_with_state(WalkSpec.uniform(HADAMARD), [1, 0], GENERAL)
        assert gauge.u[0] == 0.0
        assert (st.alpha, st.theta) == (1.0, 0.0)

    def test_not_unit(self):
        with pytest.raises(NotUnitState):
            canonicalize_with_state(WalkSpec.uniform(HADAMARD), [1, 1])

    def test_invariant_under_gauge(self, rng):
        for cls in CLASSES:
            spec = random_spec(rng, cls)
            phi = random_state(rng)
            copy, (lam, u, v) = gauged_copy(rng, spec, cls)
            phi_copy = np.array([np.exp(1j * u(0)), np.exp(1j * v(0))]) * phi
            _, s1, _ = canonicalize_with_state(spec, phi)
            _, s2, _ = canonicalize_with_state(copy, phi_copy)
            assert s1.alpha == pytest.approx(s2.alpha, abs=1e-12)
            assert phase_equal(s1.theta, s2.theta)


class TestGaugeTransform:
    def test_compose_and_inverse(self, rng):
        spec = random_spec(rng, GENERAL)
        g1 = GaugeTransform(0.3, {n: rng.uniform(0, 6) for n in range(-5, 6)},
                            {n: rng.uniform(0, 6) for n in range(-5, 6)})
        g2 = GaugeTransform(1.1, {n: rng.uniform(0, 6) for n in range(-5, 6)},
                            {n: rng.uniform(0, 6) for n in range(-5, 6)})
        op = build_window_operator(spec, 5)
        both = g2.apply_window(g1.apply_window(op)).matrix
        assert np.allclose(g1.compose(g2).apply_window(op).matrix, both, atol=1e-13)
        back = g1.inverse().apply_window(g1.apply_window(op)).matrix
        assert np.allclose(back, op.matrix, atol=1e-13)

    def test_dict_round_trip(self):
        g = GaugeTransform(0.5, {0: 0.1, 1: 0.2}, {0: 0.3, 1: 0.4})
        assert GaugeTransform.from_dict(g.to_dict()) == g


def test_general_form_sites_past_window():
    form = CanonicalGeneral(2, {n: 0.5 for n in range(-2, 3)},
                            {n: 0.0 for n in range(-2, 3)}, 0.4, 0.6, 0.1, 0.2)
    assert form.r_at(3) == 0.6 and form.r_at(-3) == 0.4
    assert form.theta_at(4) == pytest.approx(0.4)
    assert phase_equal(form.theta_at(-4), -0.2)
