#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dakit/errors.hpp"
#include "dakit/nilsim.hpp"
#include "support/random.hpp"

using namespace dakit;
using namespace dakit::testing;

namespace {

const std::vector<MultiIndex> kSquare = {{2, 0}, {1, 1}, {0, 2}};

CVector unit(int n, int k) {
    CVector e = CVector::Zero(n);
    e(k) = 1.0;
    return e;
}

}  // namespace

TEST_CASE("hypotheses of the square-of-maximal-ideal model") {
    const auto m = monomial_model(kSquare, 2);
    const auto h = check_hypotheses(m.Z, m.cyclic);
    CHECK(h.epsilon == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(h.epsilon) < 1e-12);
    CHECK(h.gamma == 1.0);
    CHECK(h.gauge_unitary);
    CHECK(h.top_degree == 1);
    CHECK(h.card == 3);
    CHECK(h.support == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}});
    CHECK(h.admissible);
}

TEST_CASE("hypotheses of the scaled corner pair") {
    for (double t : {0.1, 0.2, 0.3, 1.0}) {
        const double f = corner_scale(t);
        const auto R = scaled_corner_pair(t);
        const auto h = check_hypotheses(R, unit(3, 0));
        REQUIRE(h.weighted_norms.size() == 3);
        CHECK(h.weighted_norms[1] == doctest::Approx(1.0 / (f * f)).epsilon(1e-14));
        CHECK(h.weighted_norms[2] == doctest::Approx((1.0 + t * t) / (f * f)).epsilon(1e-14));
        CHECK(h.epsilon == doctest::Approx(1.0 - 1.0 / (f * f)).epsilon(1e-14));
        // f^2 >= 2 makes epsilon >= 1/2, so epsilon * 3 > 1
        CHECK(h.epsilon * h.card > 1.0);
        CHECK_FALSE(h.admissible);
        CHECK(h.gauge_verified);
    }
}

TEST_CASE("scaling a model scales the weighted norms by powers") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 1 + trial % 3;
        const auto gens = random_monomial_ideal(rng, d, 1 + trial % 3);
        const auto m = monomial_model(gens, d);
        const auto h = check_hypotheses(scaled(m.Z, 0.9), m.cyclic);
        for (std::size_t k = 0; k < h.support.size(); ++k)
            CHECK(h.weighted_norms[k] == doctest::Approx(std::pow(0.81, h.support[k].degree())).epsilon(1e-13));
        CHECK(h.epsilon == doctest::Approx(1.0 - std::pow(0.81, h.top_degree)).epsilon(1e-13));
        CHECK(h.gamma == 1.0);
    }
}

TEST_CASE("certificate on the model itself is the identity") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 15; ++trial) {
        const int d = 1 + trial % 3;
        const auto gens = random_monomial_ideal(rng, d, 1 + trial % 4);
        const auto m = monomial_model(gens, d);
        const auto s = build_similarity(m.Z, m.cyclic, gens);
        CHECK((s.X - CMatrix::Identity(m.size(), m.size())).norm() < 1e-12);
        CHECK(s.cond == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.pass);
        CHECK(std::abs(s.hypotheses.epsilon) < 1e-12);
        CHECK(s.hypotheses.gamma == 1.0);
    }
}

TEST_CASE("certificates on scaled and perturbed models meet both bounds") {
    std::mt19937_64 rng(23);
    int admissible = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + trial % 3;
        const auto gens = random_monomial_ideal(rng, d, 1 + trial % 2);
        const auto m = monomial_model(gens, d);
        const Compressed in = trial % 2 ? Compressed{scaled(m.Z, 0.9), m.cyclic} : perturbed_model(rng, m, 0.01);
        const auto h = check_hypotheses(in.T, in.xi);
        if (!h.admissible) {
            CHECK_THROWS_AS(build_similarity(in.T, in.xi, gens), ValidationError);
            continue;
        }
        ++admissible;
        const auto s = build_similarity(in.T, in.xi, gens);
        CHECK(s.pass_residual);
        CHECK(s.norm_X <= s.bound_X + 1e-7);
        CHECK(s.norm_Xinv <= s.bound_Xinv + 1e-7);
        const auto nc = necessity_check(in.T, in.xi, s.X, s.model);
        CHECK(nc.pass);
        CHECK(nc.xi_alignment == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(admissible >= 20);
}

TEST_CASE("0.9-scaled model certificate is the inverse degree scaling") {
    const auto m = monomial_model(kSquare, 2);
    const auto s = build_similarity(scaled(m.Z, 0.9), m.cyclic, kSquare);
    CHECK(std::abs(s.X(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(s.X(1, 1) - 1.0 / 0.9) < 1e-13);
    CHECK(std::abs(s.X(2, 2) - 1.0 / 0.9) < 1e-13);
    CHECK(s.hypotheses.epsilon == doctest::Approx(0.19).epsilon(1e-13));
    CHECK(s.bound_X == doctest::Approx(2.0 / std::sqrt(1.0 - 0.57)).epsilon(1e-12));
}

TEST_CASE("scaled corner pair is inadmissible but has the explicit intertwiner") {
    for (double t : {0.1, 0.3}) {
        const auto R = scaled_corner_pair(t);
        CHECK_THROWS_AS(build_similarity(R, unit(3, 0), kSquare), ValidationError);
        const auto s = explicit_similarity(R, unit(3, 0), kSquare);
        CHECK_FALSE(s.bounds_apply);
        CHECK(s.pass_residual);
        // X^{-1} is the a = 1, b = c = 0 member of the family [[a,0,0],[b,a/f,a/f],[c,0,a t/f]]
        const double f = corner_scale(t);
        CMatrix expect = CMatrix::Zero(3, 3);
        expect(0, 0) = 1.0;
        expect(1, 1) = expect(1, 2) = 1.0 / f;
        expect(2, 2) = t / f;
        CHECK((s.Xinv - expect).norm() < 1e-14);
        CHECK(s.norm_Xinv <= s.bound_Xinv + 1e-7);
        const auto nc = necessity_check(R, unit(3, 0), s.X, s.model);
        CHECK(nc.pass);
        // the smallest weighted norm sits at x1 and forces cond >= f
        CHECK(nc.min_weighted == doctest::Approx(1.0 / (f * f)).epsilon(1e-13));
        CHECK(nc.cond >= f - 1e-12);
    }
}

TEST_CASE("non-direct layers leave the gauge unverified") {
    // N1 shift e0 -> e1 -> e2, N2 = N1^2: level two repeats level one
    CMatrix S = CMatrix::Zero(3, 3);
    S(1, 0) = S(2, 1) = 1.0;
    const auto N = validate({S / std::sqrt(2.0), S * S / std::sqrt(2.0)});
    const auto h = check_hypotheses(N, unit(3, 0));
    CHECK_FALSE(h.layers_direct);
    CHECK_FALSE(h.gauge_verified);
    CHECK(std::isnan(h.gamma));
    CHECK_FALSE(h.admissible);
    CHECK_THROWS_AS(layer_gauge(h, 0.3), ValidationError);
}

TEST_CASE("layer gauge twists the tuple and fixes xi") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 2 + trial % 2;
        const auto c = compressed_model(rng, random_monomial_ideal(rng, d, 2), d, 0.95);
        const auto h = check_hypotheses(c.T, c.xi);
        if (!h.gauge_verified) continue;
        CHECK(h.gamma >= 1.0 - 1e-12);
        CHECK(h.gamma >= h.gamma_grid);
        for (double t : {0.4, 1.7, 3.0}) {
            const CMatrix Y = layer_gauge(h, t);
            const CMatrix Yi = layer_gauge(h, -t);
            CHECK((Y * Yi - CMatrix::Identity(c.T.size(), c.T.size())).norm() < 1e-9);
            CHECK((Yi * c.xi - c.xi).norm() < 1e-9);
            for (int j = 0; j < d; ++j)
                CHECK((Y * c.T[j] * Yi - std::polar(1.0, t) * c.T[j]).norm() < 1e-9);
            CHECK(operator_norm(Y) <= h.gamma + 1e-9);
        }
    }
}

TEST_CASE("hypothesis input errors") {
    const auto m = monomial_model(kSquare, 2);
    CHECK_THROWS_AS(check_hypotheses(m.Z, 2.0 * m.cyclic), InputError);
    CHECK_THROWS_AS(check_hypotheses(m.Z, CVector::Ones(2)), InputError);
    CHECK_THROWS_AS(check_hypotheses(m.Z, unit(3, 1)), ValidationError);  // not cyclic
    CHECK_THROWS_AS(check_hypotheses(validate({CMatrix::Identity(2, 2) * 0.5}), unit(2, 0)), ValidationError);
    CHECK_THROWS_AS(check_hypotheses(scaled(m.Z, 1.5), m.cyclic), ValidationError);
    // annihilator of the pair is m^2, not m^3
    CHECK_THROWS_AS(build_similarity(m.Z, m.cyclic, {{3, 0}, {2, 1}, {1, 2}, {0, 3}}), ValidationError);
}

TEST_CASE("necessity lower bound, exact on the model") {
    const auto m = monomial_model(kSquare, 2);
    const auto r = necessity_check(m.Z, m.cyclic, CMatrix::Identity(3, 3), m);
    CHECK(r.min_weighted == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.lower_bound == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.pass);
}

TEST_CASE("necessity bound holds with the square of the condition number only") {
    // Z = E21 for x^2, N = E21 / s and X = diag(1, s): weighted norm 1/s^2 = 1/cond^2
    const auto m = monomial_model(std::vector<MultiIndex>{{2}}, 1);
    for (double s : {2.0, 4.0, 10.0}) {
        CMatrix N = CMatrix::Zero(2, 2);
        N(1, 0) = 1.0 / s;
        CMatrix X = CMatrix::Zero(2, 2);
        X(0, 0) = 1.0;
        X(1, 1) = s;
        const auto r = necessity_check(validate({N}), unit(2, 0), X, m);
        CHECK(r.cond == doctest::Approx(s).epsilon(1e-14));
        CHECK(r.min_weighted == doctest::Approx(1.0 / (s * s)).epsilon(1e-14));
        CHECK(r.pass_lower);
        CHECK_FALSE(r.pass_literal);
    }
}

TEST_CASE("necessity on random intertwiners of the model") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + trial % 3;
        const auto m = monomial_model(random_monomial_ideal(rng, d, 2), d);
        const CMatrix X = random_conditioned(rng, m.size(), 1.0 + trial);
        const CommutingTuple N = conjugate(m.Z.T, X.inverse());
        const auto r = necessity_check(N, unit(m.size(), 0), X, m);
        CHECK(r.pass);
        CHECK(r.min_weighted >= r.lower_bound * (1.0 - 1e-12));
        CHECK(r.gauge_max_norm <= r.cond * (1.0 + 1e-9));
    }
    const auto m = monomial_model(kSquare, 2);
    CMatrix X = CMatrix::Identity(3, 3);
    X(2, 1) = 1.0;  // does not intertwine
    CHECK_THROWS_AS(necessity_check(m.Z, m.cyclic, X, m), ValidationError);
}

TEST_CASE("lemma checks on the model have orthogonal equal-length images") {
    const auto m = monomial_model(kSquare, 2);
    const auto r = lemma_checks(m.Z, m.cyclic, 0.0);
    CHECK(r.pairs == 1);
    CHECK(r.pair_worst == 0.0);
    CHECK(r.sandwich_applicable);
    CHECK(r.pass);
}

TEST_CASE("lemma checks on the scaled corner pair") {
    const double t = 0.2;
    const auto R = scaled_corner_pair(t);
    const double eps = check_hypotheses(R, unit(3, 0)).epsilon;
    const auto r = lemma_checks(R, unit(3, 0), eps);
    CHECK(r.pairs == 1);
    // weighted inner product of R1 xi and R2 xi is 1/f^2, below eps = 1 - 1/f^2
    const double f = corner_scale(t);
    CHECK(r.pair_worst == doctest::Approx(1.0 / (f * f) - eps).epsilon(1e-13));
    CHECK(r.pairs_pass);
    CHECK(r.level_pass);
    CHECK(r.pass);
}

TEST_CASE("lemma checks on random compressed models") {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + trial % 3;
        std::uniform_real_distribution<double> u(0.6, 1.0);
        const auto c = compressed_model(rng, random_monomial_ideal(rng, d, 1 + trial % 3), d, u(rng));
        const auto h = check_hypotheses(c.T, c.xi);
        const auto r = lemma_checks(c.T, c.xi, h.epsilon, static_cast<std::uint64_t>(trial));
        CHECK(r.pass);
        CHECK(r.level_samples > 0);
        CHECK(r.sandwich_applicable == h.gauge_verified);
    }
}
