#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dakit/errors.hpp"
#include "dakit/models.hpp"
#include "dakit/spectral.hpp"
#include "support/random.hpp"

using namespace dakit;
using namespace dakit::testing;

namespace {

Polynomial shifted_var(int d, int j, cplx c) {
    return Polynomial::variable(d, j) - Polynomial::constant(d, c);
}

double dist(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a[j] - b[j]);
    return std::sqrt(s);
}

/// Random monomial ideal containing pure powers of every variable.
std::vector<MultiIndex> random_monomial_ideal(std::mt19937_64& rng, int d) {
    std::uniform_int_distribution<int> pw(1, 3), extra(0, 3), ex(0, 2);
    std::vector<MultiIndex> g;
    for (int j = 0; j < d; ++j) {
        MultiIndex a(d);
        a[j] = pw(rng);
        g.push_back(a);
    }
    const int k = extra(rng);
    for (int i = 0; i < k; ++i) {
        MultiIndex a(d);
        for (int j = 0; j < d; ++j) a[j] = ex(rng);
        if (a.degree() > 0) g.push_back(a);
    }
    return g;
}

}  // namespace

TEST_CASE("monomial model of x^2 in one variable") {
    const auto m = monomial_model(std::vector<MultiIndex>{MultiIndex{2}}, 1);
    REQUIRE(m.size() == 2);
    CHECK(operator_norm(m.Z[0] - two_by_two(0.0, 0.0, 1.0, 0.0)) == 0.0);
}

TEST_CASE("monomial model of the square of the maximal ideal in two variables") {
    const auto m = monomial_model(std::vector<MultiIndex>{{2, 0}, {1, 1}, {0, 2}}, 2);
    REQUIRE(m.size() == 3);
    CHECK(m.standard_monomials == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}});
    const auto N = corner_pair();
    CHECK(operator_norm(m.Z[0] - N[0]) == 0.0);
    CHECK(operator_norm(m.Z[1] - N[1]) == 0.0);
}

TEST_CASE("monomial model of the maximal ideal is the zero point") {
    for (int d = 1; d <= 4; ++d) {
        std::vector<MultiIndex> g;
        for (int j = 0; j < d; ++j) {
            MultiIndex a(d);
            a[j] = 1;
            g.push_back(a);
        }
        const auto m = monomial_model(g, d);
        CHECK(m.size() == 1);
        for (int j = 0; j < d; ++j) CHECK(m.Z[j].norm() == 0.0);
    }
}

TEST_CASE("monomial model input errors") {
    CHECK_THROWS_AS(monomial_model(std::vector<MultiIndex>{{1, 1}, {2, 0}}, 2), InputError);
    CHECK_THROWS_AS(monomial_model(std::vector<MultiIndex>{{0, 0}}, 2), InputError);
    const std::vector<Polynomial> nonmono = {Polynomial::variable(2, 0) + Polynomial::variable(2, 1),
                                             Polynomial::monomial({0, 3})};
    CHECK_THROWS_AS(monomial_model(nonmono, 2), InputError);
    const std::vector<Polynomial> mono = {Polynomial::monomial({2, 0}, 3.0), Polynomial::monomial({0, 1})};
    CHECK(monomial_model(mono, 2).size() == 2);
}

TEST_CASE("gauge unitary") {
    const auto m = monomial_model(std::vector<MultiIndex>{{2, 0}, {1, 1}, {0, 2}}, 2);
    CHECK(operator_norm(gauge_unitary(m, 0.0) - CMatrix::Identity(3, 3)) == 0.0);
    const double t = std::numbers::pi / 3.0;
    const CMatrix W = gauge_unitary(m, t);
    for (int j = 0; j < 2; ++j)
        CHECK(operator_norm(W * m.Z[j] * W.adjoint() - std::polar(1.0, t) * m.Z[j]) < 1e-15);
    CHECK((W * m.cyclic - m.cyclic).norm() == 0.0);
}

TEST_CASE("monomial model properties on random ideals") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + trial % 3;
        const auto g = random_monomial_ideal(rng, d);
        const auto m = monomial_model(g, d);
        CHECK(m.Z.is_commuting(1e-14));
        CHECK(m.Z.is_row_contraction(1e-9));
        CHECK(krylov(m.Z, m.cyclic, m.size()).is_cyclic);
        // gauge relation
        PowerTable pw(m.Z);
        for (const auto& a : m.standard_monomials) {
            const double w = static_cast<double>(a.multinomial());
            CHECK(w * (pw(a) * m.cyclic).squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
        }
        // the model annihilates exactly the ideal
        std::vector<Polynomial> gp;
        for (const auto& a : g) gp.push_back(Polynomial::monomial(a));
        const int top = m.standard_monomials.back().degree() + 1;
        for (int D = 1; D <= top + 1; ++D)
            CHECK(annihilator_slice(m.Z, D).same_slice(PolyIdeal::from_generators(d, gp, D)));
    }
}

TEST_CASE("jet model of the origin with the maximal ideal") {
    const std::vector<LocalIdealData> data = {{{0.0, 0.0}, maximal_ideal_power({0.0, 0.0}, 1)}};
    const auto m = jet_model(data);
    REQUIRE(m.size() == 1);
    CHECK(m.Z[0].norm() < 1e-15);
    CHECK(m.Z[1].norm() < 1e-15);
}

TEST_CASE("jet model of a single point is the point") {
    const Point z = {cplx(0.3, -0.1), cplx(0.0, 0.4)};
    const auto m = jet_model({{z, maximal_ideal_power(z, 1)}});
    REQUIRE(m.size() == 1);
    for (int j = 0; j < 2; ++j) CHECK(std::abs(m.Z[j](0, 0) - z[static_cast<std::size_t>(j)]) < 1e-12);
}

TEST_CASE("order-zero jet models match the kernel Gram closed form") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<LocalIdealData> data;
        std::vector<Point> pts;
        for (int i = 0; i < 4; ++i) {
            pts.push_back(random_point(rng, 2, 0.7));
            data.push_back({pts.back(), maximal_ideal_power(pts.back(), 1)});
        }
        const auto m = jet_model(data);
        CMatrix G(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) G(i, k) = kernel(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(k)]);
        for (int j = 0; j < 2; ++j) {
            CMatrix Dz = CMatrix::Zero(4, 4);
            for (int i = 0; i < 4; ++i) Dz(i, i) = pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            CHECK(operator_norm(m.Z[j] - inv_sqrt(G) * Dz * sqrt_pd(G)) < 1e-10);
        }
        CHECK(m.tail_bound <= 1e-8);
    }
}

TEST_CASE("two-point order-zero jet model") {
    const Point a = {0.0, 0.0}, b = {0.5, 0.0};
    const auto m = jet_model({{a, maximal_ideal_power(a, 1)}, {b, maximal_ideal_power(b, 1)}});
    REQUIRE(m.size() == 2);
    const auto sp = joint_eigenvalues(m.Z);
    REQUIRE(sp.clusters.size() == 2);
    CHECK(dist(sp.clusters[0].z, a) < 1e-10);
    CHECK(dist(sp.clusters[1].z, b) < 1e-10);
    for (const auto& c : verify_localizations(m, {{a, maximal_ideal_power(a, 1)}, {b, maximal_ideal_power(b, 1)}}))
        CHECK(c.pass);
}

TEST_CASE("jet model of a squared maximal ideal") {
    const Point z = {0.0, 0.0};
    const std::vector<LocalIdealData> data = {{z, maximal_ideal_power(z, 2)}};
    const auto m = jet_model(data);
    CHECK(m.size() == 3);
    CHECK(m.orders[0] == 1);
    const auto checks = verify_localizations(m, data);
    CHECK(checks[0].pass);
    // at the origin the inverse system is spanned by 1, x1, x2: the model is the corner pair
    const auto N = corner_pair();
    for (int j = 0; j < 2; ++j) CHECK(operator_norm(m.Z[j] - N[static_cast<std::size_t>(j)]) < 1e-12);
}

TEST_CASE("jet model with mixed local ideals") {
    const Point z1 = {cplx(0.3, 0.0), cplx(0.0, 0.2)};
    const Point z2 = {cplx(-0.2, 0.1), cplx(0.1, 0.0)};
    const Point z3 = {cplx(0.0, -0.4), cplx(-0.3, 0.0)};
    // m^2 + <x1 - z1>: local quotient spanned by 1, x2 - z2
    auto b1 = maximal_ideal_power(z1, 2);
    b1.push_back(shifted_var(2, 0, z1[0]));
    const std::vector<LocalIdealData> data = {
        {z1, b1}, {z2, maximal_ideal_power(z2, 1)}, {z3, maximal_ideal_power(z3, 2)}};
    const auto m = jet_model(data);
    CHECK(m.multiplicities == std::vector<int>{2, 1, 3});
    CHECK(m.size() == 6);
    CHECK(m.Z.is_commuting(1e-9));
    CHECK(m.Z.is_row_contraction(1e-9));
    CHECK(krylov(m.Z, m.cyclic, m.size()).is_cyclic);
    for (const auto& c : verify_localizations(m, data)) CHECK(c.pass);
    const auto sp = joint_eigenvalues(m.Z, 1e-6);
    REQUIRE(sp.clusters.size() == 3);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& c = sp.clusters[static_cast<std::size_t>(sp.nearest(data[i].z))];
        CHECK(dist(c.z, data[i].z) < 1e-8);
        CHECK(c.multiplicity == m.multiplicities[i]);
    }
}

TEST_CASE("localization mismatch is reported") {
    const Point z = {0.2, 0.0};
    const auto m = jet_model({{z, maximal_ideal_power(z, 2)}});
    const auto checks = verify_localizations(m, {{z, maximal_ideal_power(z, 1)}});
    CHECK_FALSE(checks[0].pass);
    CHECK_FALSE(checks[0].offending.empty());
}

TEST_CASE("jet model input errors") {
    const Point z = {0.2, 0.0};
    CHECK_THROWS_AS(jet_model({{z, maximal_ideal_power(z, 1)}, {z, maximal_ideal_power(z, 1)}}), InputError);
    CHECK_THROWS_AS(jet_model({{{1.0, 0.0}, maximal_ideal_power({1.0, 0.0}, 1)}}), InputError);
    // generators that miss the point
    CHECK_THROWS_AS(jet_model({{z, maximal_ideal_power({0.0, 0.0}, 1)}}), InputError);
    // a single generator in two variables never contains a power of the maximal ideal
    CHECK_THROWS_AS(jet_model({{z, {shifted_var(2, 0, 0.2)}}}), InputError);
    // explicit truncation too small for the tails
    CHECK_THROWS_AS(jet_model({{{0.9, 0.0}, maximal_ideal_power({0.9, 0.0}, 1)}}, 5), NumericalError);
}

TEST_CASE("similarity to the diagonal degrades as two points merge") {
    double last = 1.0;
    for (double r : {0.5, 0.2, 0.05, 0.01}) {
        const Point a = {0.0, 0.0}, b = {r, 0.0};
        const auto m = jet_model({{a, maximal_ideal_power(a, 1)}, {b, maximal_ideal_power(b, 1)}});
        const auto J = jordan_decompose(m.Z);
        CHECK(J.cond > last);
        last = J.cond;
    }
}
