// Acceptance suite: one PASS/FAIL line per criterion with its runtime against the limit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dakit/errors.hpp"
#include "dakit/interp.hpp"
#include "dakit/models.hpp"
#include "dakit/nilsim.hpp"
#include "dakit/polyideal.hpp"
#include "dakit/repro.hpp"
#include "dakit/spectral.hpp"
#include "support/random.hpp"

using namespace dakit;

namespace {

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

int failures = 0;

void criterion(int id, const std::string& name, double limit, const std::function<void(Verdict&)>& body) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.check(secs < limit, "runtime " + fmt(secs) + " s over the " + fmt(limit) + " s limit");
    std::printf("%s  %d. %s  (%.2f s, limit %g s)\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), secs, limit);
    for (const auto& n : v.notes) std::printf("        %s\n", n.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
}

double dist(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a[j] - b[j]);
    return std::sqrt(s);
}

const ReproRow* find_row(const ReproReport& r, const std::string& q, double param) {
    for (const auto& x : r.rows)
        if (x.quantity == q && std::abs(x.parameter - param) <= 1e-15 * std::max(1.0, std::abs(param))) return &x;
    return nullptr;
}

/// Every monomial ideal containing all monomials of degree 4 (order at most 3) in d variables
/// with a complement of dimension at most 20, as minimal generators.
std::vector<std::vector<MultiIndex>> small_monomial_ideals(int d) {
    const std::vector<MultiIndex> low = enumerate(d, 3);
    const std::vector<MultiIndex> all = enumerate(d, 4);
    std::vector<std::vector<MultiIndex>> out;
    std::set<MultiIndex> kept;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == low.size()) {
            if (kept.empty() || kept.size() > 20) return;
            std::vector<MultiIndex> gens;
            for (const auto& a : all) {
                if (kept.count(a)) continue;
                bool minimal = true;
                for (int j = 0; j < d && minimal; ++j)
                    if (a[j] > 0) minimal = kept.count(a - MultiIndex(d).raised(j)) > 0;
                if (minimal) gens.push_back(a);
            }
            out.push_back(std::move(gens));
            return;
        }
        rec(i + 1);
        const MultiIndex& a = low[i];
        for (int j = 0; j < d; ++j)
            if (a[j] > 0 && !kept.count(a - MultiIndex(d).raised(j))) return;
        kept.insert(a);
        rec(i + 1);
        kept.erase(a);
    };
    rec(0);
    return out;
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");

    criterion(1, "model identity for the square of the maximal ideal", 1.0, [](Verdict& v) {
        const std::vector<MultiIndex> gens{{2, 0}, {1, 1}, {0, 2}};
        const ModelTuple m = monomial_model(gens, 2);
        const auto N = testing::corner_pair();
        double worst = 0.0;
        for (int j = 0; j < 2; ++j) worst = std::max(worst, (m.Z[j] - N[static_cast<std::size_t>(j)]).cwiseAbs().maxCoeff());
        v.check(m.size() == 3 && worst <= 1e-12, "model matrices differ from (E21, E31) by " + fmt(worst));
        const CommutingTuple T = validate(N);
        CMatrix want = CMatrix::Zero(3, 3);
        want(1, 1) = want(2, 2) = 1.0;
        v.check((row_gram(T) - want).cwiseAbs().maxCoeff() <= 1e-12, "row Gram is not diag(0, 1, 1)");
        v.check(T.commutator_defect == 0.0, "corner pair does not commute");
        std::vector<Polynomial> gp;
        for (const auto& a : gens) gp.push_back(Polynomial::monomial(a));
        v.check(annihilator_slice(T, 2).same_slice(PolyIdeal::from_generators(2, gp, 2)),
                "degree-2 annihilator slice differs from the three quadratic monomials");
        v.note("max entry deviation " + fmt(worst));
    });

    criterion(2, "one-variable intertwiner condition equals 1/eps within 1%", 5.0, [](Verdict& v) {
        const std::vector<double> eps{0.1, 0.01, 0.001};
        const ReproReport r = example_one_variable({0.0}, eps);
        for (double e : eps) {
            const ReproRow* row = find_row(r, "min cond vs 1/eps", e);
            v.check(row != nullptr, "missing row for eps " + fmt(e));
            if (!row) continue;
            const double rel = std::abs(row->measured - 1.0 / e) * e;
            v.check(rel <= 1e-2, "eps " + fmt(e) + ": measured " + fmt(row->measured));
            v.note("eps " + fmt(e) + ": min cond " + fmt(row->measured) + ", relative error " + fmt(rel));
        }
    });

    criterion(3, "two-variable corner pair: family, determinant, bounds, scale values", 10.0, [](Verdict& v) {
        const std::vector<double> eps{0.1, 0.01, 0.001};
        const ReproReport r = example_two_variable(eps, {});
        for (double e : eps) {
            const ReproRow* dim = find_row(r, "intertwiner dimension", e);
            const ReproRow* form = find_row(r, "family form distance", e);
            const ReproRow* det = find_row(r, "determinant identity", e);
            const ReproRow* low = find_row(r, "min cond lower bound", e);
            v.check(dim && form && det && low, "missing rows for eps " + fmt(e));
            if (!(dim && form && det && low)) continue;
            v.check(dim->measured == 3.0, "eps " + fmt(e) + ": intertwiner dimension " + fmt(dim->measured));
            v.check(form->measured <= 1e-9, "eps " + fmt(e) + ": parametric form distance " + fmt(form->measured));
            v.check(det->error <= 1e-9, "eps " + fmt(e) + ": determinant relative error " + fmt(det->error));
            v.check(low->measured >= low->formula - 1e-6,
                    "eps " + fmt(e) + ": min cond " + fmt(low->measured) + " below " + fmt(low->formula));
            v.note("eps " + fmt(e) + ": min cond " + fmt(low->measured) + " >= " + fmt(low->formula) +
                   ", det error " + fmt(det->error));
        }
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        v.check(std::abs(corner_scale(1.0) - golden) <= 1e-10, "f(1) is not the golden ratio");
        v.check(std::abs(corner_scale(0.001) - std::sqrt(2.0)) <= 1e-5, "f(0.001) is not sqrt 2 within 1e-5");
        v.note("f(1) - golden = " + fmt(corner_scale(1.0) - golden) + ", f(0.001) - sqrt 2 = " +
               fmt(corner_scale(0.001) - std::sqrt(2.0)));
    });

    criterion(4, "Jordan round trip on 50 conjugated block tuples", 30.0, [](Verdict& v) {
        double worst_eig = 0.0, worst_res = 0.0, worst_cond = 0.0;
        int max_size = 0;
        for (int trial = 0; trial < 50; ++trial) {
            std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(trial));
            const int d = 1 + trial % 3;
            const int k = 1 + static_cast<int>(rng() % 4);
            std::vector<Point> pts;
            while (static_cast<int>(pts.size()) < k) {
                const Point z = testing::random_point(rng, d, 0.8);
                bool far = true;
                for (const auto& q : pts) far = far && dist(q, z) >= 0.1;
                if (far) pts.push_back(z);
            }
            std::vector<std::vector<CMatrix>> nil;
            int total = 0;
            for (int b = 0; b < k; ++b) {
                ModelTuple m = monomial_model(testing::random_monomial_ideal(rng, d, 1 + static_cast<int>(rng() % 2)), d);
                if (total + m.size() > 30) m = monomial_model(enumerate_homogeneous(d, 1), d);
                const int n = m.size();
                const CMatrix S = testing::random_conditioned(rng, n, 2.0);
                const CMatrix Si = S.inverse();
                std::vector<CMatrix> N;
                for (int j = 0; j < d; ++j) N.push_back(0.5 * S * m.Z[j] * Si);
                nil.push_back(std::move(N));
                total += n;
            }
            std::vector<CMatrix> blocks;
            for (int j = 0; j < d; ++j) {
                std::vector<CMatrix> parts;
                for (int b = 0; b < k; ++b) {
                    const auto& N = nil[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)];
                    parts.push_back(N + pts[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)] *
                                            CMatrix::Identity(N.rows(), N.rows()));
                }
                blocks.push_back(testing::direct_sum(parts));
            }
            const CMatrix G = testing::random_conditioned(rng, total, 10.0);
            worst_cond = std::max(worst_cond, condition_number(G));
            max_size = std::max(max_size, total);
            const CommutingTuple T = testing::conjugate(blocks, G);
            const std::string tag = "tuple " + std::to_string(trial) + ": ";
            const JordanDecomposition J = jordan_decompose(T, 1e-3, static_cast<std::uint64_t>(trial));
            v.check(static_cast<int>(J.blocks.size()) == k, tag + "found " + std::to_string(J.blocks.size()) + " clusters");
            if (static_cast<int>(J.blocks.size()) != k) continue;
            worst_res = std::max(worst_res, J.residual / T.norm());
            v.check(J.residual <= 1e-7 * T.norm(), tag + "residual " + fmt(J.residual));
            for (int b = 0; b < k; ++b) {
                const Point& z = pts[static_cast<std::size_t>(b)];
                const auto& blk = J.blocks[static_cast<std::size_t>(J.spectrum.nearest(z))];
                worst_eig = std::max(worst_eig, dist(blk.z, z));
                v.check(dist(blk.z, z) <= 1e-8, tag + "eigenvalue error " + fmt(dist(blk.z, z)));
                const auto& N = nil[static_cast<std::size_t>(b)];
                v.check(blk.size == N.front().rows(), tag + "block size mismatch");
                if (blk.size != N.front().rows()) continue;
                const int D = blk.size + 1;
                v.check(annihilator_slice(validate(N), D).same_slice(annihilator_slice(validate(blk.nilpotent), D)),
                        tag + "local annihilator slice mismatch");
            }
        }
        v.note("max eigenvalue error " + fmt(worst_eig) + ", max relative residual " + fmt(worst_res) +
               ", max cond G " + fmt(worst_cond) + ", max size " + std::to_string(max_size));
    });

    criterion(5, "similarity certificates: monomial models and 20 perturbed inputs", 20.0, [](Verdict& v) {
        int models = 0;
        double worst_eps = 0.0, worst_gamma = 0.0, worst_x = 0.0;
        for (int d = 1; d <= 3; ++d)
            for (const auto& gens : small_monomial_ideals(d)) {
                const ModelTuple m = monomial_model(gens, d);
                const SimilarityCertificate s = build_similarity(m.Z, m.cyclic, gens);
                const double ex = (s.X - CMatrix::Identity(m.size(), m.size())).cwiseAbs().maxCoeff();
                worst_eps = std::max(worst_eps, s.hypotheses.epsilon);
                worst_gamma = std::max(worst_gamma, std::abs(s.hypotheses.gamma - 1.0));
                worst_x = std::max(worst_x, ex);
                ++models;
            }
        v.check(worst_eps <= 1e-12, "model epsilon " + fmt(worst_eps));
        v.check(worst_gamma <= 1e-9, "model gamma deviation " + fmt(worst_gamma));
        v.check(worst_x <= 1e-12, "model X deviates from I by " + fmt(worst_x));
        v.note(std::to_string(models) + " monomial models: max epsilon " + fmt(worst_eps) + ", max |gamma - 1| " +
               fmt(worst_gamma) + ", max |X - I| " + fmt(worst_x));

        struct Input {
            std::string name;
            CommutingTuple T;
            CVector xi;
            std::vector<MultiIndex> gens;
        };
        std::vector<Input> inputs;
        const std::vector<MultiIndex> square{{2, 0}, {1, 1}, {0, 2}};
        for (double t : {0.1, 0.2, 0.3}) {
            CVector e = CVector::Zero(3);
            e(0) = 1.0;
            inputs.push_back({"R(" + fmt(t) + ")", scaled_corner_pair(t), e, square});
        }
        // scaling by 0.9 gives epsilon = 1 - 0.81^L, admissible only for L = 1 and card at most 5
        const std::vector<std::vector<MultiIndex>> linear{
            {{2}},
            {{2, 0}, {1, 1}, {0, 2}},
            {{2, 0}, {0, 1}},
            {{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}},
            {{2, 0, 0}, {1, 1, 0}, {0, 2, 0}, {0, 0, 1}},
        };
        for (std::size_t i = 0; i < linear.size(); ++i) {
            const int d = linear[i][0].dim();
            const ModelTuple m = monomial_model(linear[i], d);
            inputs.push_back({"0.9-scaled model " + std::to_string(i), testing::scaled(m.Z, 0.9), m.cyclic, linear[i]});
        }
        std::mt19937_64 rng(5);
        for (int attempt = 0; inputs.size() < 20 && attempt < 500; ++attempt) {
            const int d = 1 + attempt % 3;
            const auto gens = testing::random_monomial_ideal(rng, d, 1 + attempt % 2);
            const ModelTuple m = monomial_model(gens, d);
            const auto p = testing::perturbed_model(rng, m, 0.01);
            if (!check_hypotheses(p.T, p.xi).admissible) continue;
            inputs.push_back({"perturbed model " + std::to_string(attempt), p.T, p.xi, gens});
        }
        v.check(inputs.size() == 20, "only " + std::to_string(inputs.size()) + " inputs");
        int ok = 0;
        for (const auto& in : inputs) {
            const NilsimHypotheses h = check_hypotheses(in.T, in.xi);
            if (!h.admissible) {
                const SimilarityCertificate s = explicit_similarity(in.T, in.xi, in.gens);
                const NecessityReport nc = necessity_check(in.T, in.xi, s.X, s.model);
                std::ostringstream os;
                os << in.name << ": epsilon * card = " << fmt(h.epsilon * h.card)
                   << " >= 1, so the ||X|| bound (L+1) gamma / sqrt(1 - epsilon card) is undefined; ||X|| = "
                   << fmt(s.norm_X) << ", ||X^-1|| = " << fmt(s.norm_Xinv) << " <= " << fmt(s.bound_Xinv)
                   << ", necessity " << (nc.pass ? "passes" : "fails");
                v.check(false, os.str());
                continue;
            }
            const SimilarityCertificate s = build_similarity(in.T, in.xi, in.gens);
            const NecessityReport nc = necessity_check(in.T, in.xi, s.X, s.model);
            const bool pass = s.bound_X - s.norm_X >= 0.0 && s.bound_Xinv - s.norm_Xinv >= 0.0 && s.pass_residual && nc.pass;
            v.check(pass, in.name + ": ||X|| " + fmt(s.norm_X) + " vs " + fmt(s.bound_X) + ", ||X^-1|| " +
                              fmt(s.norm_Xinv) + " vs " + fmt(s.bound_Xinv) + ", necessity " + (nc.pass ? "ok" : "fails"));
            ok += pass;
        }
        v.note(std::to_string(ok) + " of " + std::to_string(inputs.size()) + " perturbed inputs meet both bounds and necessity");
    });

    criterion(6, "interpolation constants and order-zero similarity trend", 5.0, [](Verdict& v) {
        const std::vector<Point> pts{{0.0}, {0.5}};
        const SeparationReport s = separation_constants(pts);
        v.check(std::abs(s.delta_weak - 0.25) <= 1e-12, "delta_weak " + fmt(s.delta_weak));
        v.check(std::abs(s.gamma_carleson - (1.0 + std::sqrt(3.0) / 2.0)) <= 1e-10, "gamma_carleson " + fmt(s.gamma_carleson));
        const PickResult p = pick_min_norm(pts, {0.0, 1.0});
        v.check(std::abs(p.c_star - 2.0) <= 1e-6, "pick constant " + fmt(p.c_star));
        v.note("delta_weak " + fmt(s.delta_weak) + ", gamma_carleson " + fmt(s.gamma_carleson) + ", pick " + fmt(p.c_star));

        auto order_zero = [](double r) {
            const Point a{0.0}, b{r};
            return jet_model({{a, maximal_ideal_power(a, 1)}, {b, maximal_ideal_power(b, 1)}});
        };
        const ModelTuple m = order_zero(0.5);
        const JordanDecomposition J = jordan_decompose(m.Z);
        CMatrix D = CMatrix::Zero(2, 2);
        D(1, 1) = 0.5;
        bool diag_ok = J.blocks.size() == 2 && std::isfinite(J.cond) &&
                       operator_norm(J.X * m.Z[0] * J.Xinv - J.block_diagonal(0)) <= 1e-7;
        for (const auto& b : J.blocks) diag_ok = diag_ok && b.size == 1;
        v.check(diag_ok, "order-zero model at {0, 1/2} is not similar to diag(0, 1/2)");
        std::string trend;
        double last = 0.0;
        for (double r : {0.5, 0.2, 0.1, 0.05, 0.01}) {
            const double c = jordan_decompose(order_zero(r).Z).cond;
            v.check(c > last && std::isfinite(c), "cond not increasing at distance " + fmt(r));
            last = c;
            trend += (trend.empty() ? "" : ", ") + fmt(c);
        }
        v.note("cond at distances 0.5, 0.2, 0.1, 0.05, 0.01: " + trend);
    });

    criterion(7, "lemma inequalities on 200 compressed models and the model gauge identity", 30.0, [](Verdict& v) {
        int pass = 0, sandwich = 0;
        for (int trial = 0; trial < 200; ++trial) {
            std::mt19937_64 rng(7000 + static_cast<std::uint64_t>(trial));
            const int d = 1 + trial % 3;
            std::uniform_real_distribution<double> u(0.6, 1.0);
            const auto gens = testing::random_monomial_ideal(rng, d, 1 + trial % 3);
            const auto c = testing::compressed_model(rng, gens, d, u(rng));
            const NilsimHypotheses h = check_hypotheses(c.T, c.xi);
            const LemmaReport r = lemma_checks(c.T, c.xi, h.epsilon, static_cast<std::uint64_t>(trial));
            v.check(r.pass, "model " + std::to_string(trial) + ": pairs " + fmt(r.pair_worst) + ", level " +
                                fmt(r.level_worst) + ", sandwich " + fmt(r.sandwich_lower_worst) + "/" +
                                fmt(r.sandwich_upper_worst));
            pass += r.pass;
            sandwich += r.sandwich_applicable;
        }
        v.note(std::to_string(pass) + " of 200 pass; sandwich bounds applicable on " + std::to_string(sandwich));
        double worst = 0.0;
        int models = 0;
        for (int d = 1; d <= 3; ++d)
            for (const auto& gens : small_monomial_ideals(d)) {
                const ModelTuple m = monomial_model(gens, d);
                for (int k = 0; k < 8; ++k) {
                    const double t = 2.0 * std::numbers::pi * k / 8.0 + 0.1;
                    const CMatrix W = gauge_unitary(m, t);
                    for (int j = 0; j < d; ++j)
                        worst = std::max(worst, operator_norm(W * m.Z[j] * W.adjoint() - std::polar(1.0, t) * m.Z[j]));
                }
                ++models;
            }
        v.check(worst <= 1e-14, "gauge identity defect " + fmt(worst));
        v.note("gauge identity on " + std::to_string(models) + " models at 8 angles: max defect " + fmt(worst));
    });

    criterion(8, "localization oracle and two-point jet model", 2.0, [](Verdict& v) {
        const Polynomial x = Polynomial::variable(1, 0);
        const PolyIdeal I = PolyIdeal::from_generators(1, {x * x * (x - Polynomial::constant(1, 1.0))}, 6);
        const Point zero{0.0}, one{1.0};
        const auto jets = [](const Point& z, int k) { return local_ideal_from_generators(maximal_ideal_power(z, k), z, 3); };
        v.check(localize(I, zero, 3) == jets(zero, 2), "localization at 0 is not the square of the maximal ideal");
        v.check(localize(I, one, 3) == jets(one, 1),
                "localization at 1 is not the maximal ideal");

        const Point a{0.0, 0.0}, b{0.5, 0.0};
        std::vector<Polynomial> at_a = maximal_ideal_power(a, 2);
        at_a.push_back(Polynomial::variable(2, 0) - Polynomial::constant(2, a[0]));
        const std::vector<LocalIdealData> data{{a, at_a}, {b, maximal_ideal_power(b, 1)}};
        const ModelTuple m = jet_model(data);
        const auto checks = verify_localizations(m, data);
        bool all = checks.size() == 2;
        for (const auto& c : checks) all = all && c.pass;
        v.check(all, "verify_localizations failed on the two-point model");
        v.note("two-point model dimension " + std::to_string(m.size()) + " (local quotients 2 and 1)");
        v.check(m.size() == 3, "model dimension " + std::to_string(m.size()));
    });

    std::printf("%s: %d criterion failure(s)\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
