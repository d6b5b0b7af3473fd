#include "dakit/nilsim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "dakit/errors.hpp"
#include "dakit/polyideal.hpp"

namespace dakit {

namespace {

constexpr double kZeroPower = 1e-10;

double weight(const MultiIndex& a) { return static_cast<double>(a.multinomial()); }

void require_shapes(const CommutingTuple& N, const CVector& xi) {
    if (N.dim() < 1 || N.size() < 1) throw InputError("nilsim: empty tuple");
    if (xi.size() != N.size()) throw InputError("nilsim: vector length does not match the tuple");
    if (std::abs(xi.norm() - 1.0) > 1e-9) throw InputError("nilsim: xi must be a unit vector");
}

void require_nilpotent(const CommutingTuple& N) {
    if (!N.is_commuting()) {
        std::ostringstream os;
        os << "nilsim: tuple does not commute (defect " << N.commutator_defect << ")";
        throw ValidationError(os.str());
    }
    if (!N.is_row_contraction()) {
        std::ostringstream os;
        os << "nilsim: not a row contraction (defect " << N.row_defect << ")";
        throw ValidationError(os.str());
    }
    const int n = N.size();
    for (int j = 0; j < N.dim(); ++j) {
        CMatrix P = CMatrix::Identity(n, n);
        for (int k = 0; k < n; ++k) P = N[j] * P;
        if (P.norm() > kZeroPower) {
            std::ostringstream os;
            os << "nilsim: N_" << (j + 1) << " is not nilpotent (||N^n|| = " << P.norm() << ")";
            throw ValidationError(os.str());
        }
    }
}

// {alpha : N^alpha != 0} by raising from 0; the set is closed under taking divisors.
std::vector<MultiIndex> nonzero_support(const CommutingTuple& N, PowerTable& pow) {
    const int d = N.dim();
    std::set<MultiIndex> seen{MultiIndex(d)};
    std::vector<MultiIndex> frontier{MultiIndex(d)}, out{MultiIndex(d)};
    while (!frontier.empty()) {
        std::vector<MultiIndex> next;
        for (const auto& a : frontier)
            for (int j = 0; j < d; ++j) {
                const MultiIndex b = a.raised(j);
                if (!seen.insert(b).second) continue;
                if (pow(b).norm() > kZeroPower) {
                    next.push_back(b);
                    out.push_back(b);
                }
            }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end(), graded_lex_less);
    return out;
}

double golden_max(const std::function<double(double)>& f, double a, double b, int iters) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

}  // namespace

NilsimHypotheses check_hypotheses(const CommutingTuple& N, const CVector& xi, int grid) {
    require_shapes(N, xi);
    if (grid < 1) throw InputError("nilsim: grid must be positive");
    require_nilpotent(N);
    const int n = N.size();

    NilsimHypotheses h;
    h.grid = grid;
    PowerTable pow(N);
    h.support = nonzero_support(N, pow);
    h.card = static_cast<int>(h.support.size());
    for (const auto& a : h.support) {
        h.top_degree = std::max(h.top_degree, a.degree());
        const double w = weight(a) * (pow(a) * xi).squaredNorm();
        h.weighted_norms.push_back(w);
        h.epsilon = std::max(h.epsilon, 1.0 - w);
    }
    if (!krylov(N, xi, h.top_degree).is_cyclic) throw ValidationError("nilsim: xi is not cyclic");

    // Layer bases and the oblique projections onto them.
    std::vector<CMatrix> bases;
    int total = 0;
    for (int l = 0; l <= h.top_degree; ++l) {
        std::vector<CVector> cols;
        for (const auto& a : h.support)
            if (a.degree() == l) cols.push_back(pow(a) * xi);
        CMatrix M(n, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) M.col(static_cast<Eigen::Index>(k)) = cols[k];
        bases.push_back(rank_split(M, 1e-9, false, 1e-12).range);
        total += static_cast<int>(bases.back().cols());
    }
    CMatrix B(n, total);
    int c = 0;
    for (const auto& b : bases) {
        B.middleCols(c, b.cols()) = b;
        c += static_cast<int>(b.cols());
    }
    h.layers_direct = rank_split(B, 1e-9, false, 1e-12).rank == total;
    h.layers_total = h.layers_direct && total == n;
    if (!h.layers_total) {
        h.gamma = std::numeric_limits<double>::quiet_NaN();
        return h;
    }
    const CMatrix Binv = inverse(B);
    c = 0;
    bool orthogonal = true;
    for (const auto& b : bases) {
        const auto r = b.cols();
        CMatrix P = B.middleCols(c, r) * Binv.middleRows(c, r);
        orthogonal = orthogonal && (P - P.adjoint()).norm() <= 1e-12;
        h.layer_projections.push_back(std::move(P));
        c += static_cast<int>(r);
    }
    h.gauge_verified = true;
    h.gauge_unitary = orthogonal;
    if (orthogonal) {
        h.gamma = h.gamma_grid = 1.0;
    } else {
        auto norm_at = [&](double t) { return operator_norm(layer_gauge(h, t)); };
        const double step = 2.0 * std::numbers::pi / grid;
        for (int k = 0; k < grid; ++k) {
            const double v = norm_at(k * step);
            if (v > h.gamma_grid) {
                h.gamma_grid = v;
                h.gamma_t = k * step;
            }
        }
        h.gamma = std::max(h.gamma_grid, golden_max(norm_at, h.gamma_t - step, h.gamma_t + step, 60));
    }
    h.admissible = h.epsilon * h.card < 1.0;
    return h;
}

CMatrix layer_gauge(const NilsimHypotheses& h, double t) {
    if (!h.gauge_verified) throw ValidationError("nilsim: gauge unverified, layers not direct");
    const auto n = h.layer_projections.front().rows();
    CMatrix Y = CMatrix::Zero(n, n);
    for (std::size_t l = 0; l < h.layer_projections.size(); ++l)
        Y += std::polar(1.0, static_cast<double>(l) * t) * h.layer_projections[l];
    return Y;
}

namespace {

SimilarityCertificate assemble(const CommutingTuple& N, const CVector& xi,
                               const std::vector<MultiIndex>& generators, int grid,
                               bool require_admissible) {
    SimilarityCertificate s;
    s.hypotheses = check_hypotheses(N, xi, grid);
    const auto& h = s.hypotheses;
    const int d = N.dim();
    s.model = monomial_model(generators, d);

    std::vector<Polynomial> gens;
    for (const auto& g : generators) gens.push_back(Polynomial::monomial(g));
    const int D = h.top_degree + 1;
    if (!annihilator_slice(N, D).same_slice(PolyIdeal::from_generators(d, gens, D)))
        throw ValidationError("nilsim: annihilator mismatch with the monomial ideal");
    if (s.model.standard_monomials != h.support)
        throw ValidationError("nilsim: annihilator mismatch, nonzero monomials differ from the complement");

    s.bounds_apply = h.admissible;
    if (require_admissible && !h.admissible) {
        std::ostringstream os;
        if (!h.gauge_verified)
            os << "nilsim: hypotheses inadmissible, gauge unverified (layers not direct)";
        else
            os << "nilsim: hypotheses inadmissible, epsilon * card = " << h.epsilon * h.card << " >= 1";
        throw ValidationError(os.str());
    }

    // V maps the orthonormal model basis e_alpha to (|alpha|!/alpha!)^{1/2} N^alpha xi.
    const int n = N.size();
    PowerTable pow(N);
    CMatrix V(n, n);
    for (int k = 0; k < n; ++k) {
        const MultiIndex& a = h.support[static_cast<std::size_t>(k)];
        V.col(k) = std::sqrt(weight(a)) * (pow(a) * xi);
    }
    s.Xinv = V;
    s.X = inverse(V);
    s.norm_X = operator_norm(s.X);
    s.norm_Xinv = operator_norm(s.Xinv);
    s.cond = s.norm_X * s.norm_Xinv;
    for (int j = 0; j < d; ++j)
        s.residual = std::max(s.residual, operator_norm(s.X * N[j] * s.Xinv - s.model.Z[j]));
    s.pass_residual = s.residual <= 1e-8 * N.norm();
    s.bound_Xinv = h.top_degree + 1.0;
    s.bound_X = h.admissible ? (h.top_degree + 1.0) * h.gamma / std::sqrt(1.0 - h.epsilon * h.card)
                             : std::numeric_limits<double>::infinity();
    s.pass_X = s.norm_X <= s.bound_X + 1e-7;
    s.pass_Xinv = s.norm_Xinv <= s.bound_Xinv + 1e-7;
    s.pass = s.pass_residual && (!s.bounds_apply || (s.pass_X && s.pass_Xinv));
    return s;
}

}  // namespace

SimilarityCertificate build_similarity(const CommutingTuple& N, const CVector& xi,
                                       const std::vector<MultiIndex>& generators, int grid) {
    return assemble(N, xi, generators, grid, true);
}

SimilarityCertificate explicit_similarity(const CommutingTuple& N, const CVector& xi,
                                          const std::vector<MultiIndex>& generators, int grid) {
    return assemble(N, xi, generators, grid, false);
}

NecessityReport necessity_check(const CommutingTuple& N, const CVector& xi, const CMatrix& X,
                                const ModelTuple& model, double tol, int grid) {
    const int n = N.size();
    if (X.rows() != n || X.cols() != n || model.size() != n || model.Z.dim() != N.dim())
        throw InputError("necessity_check: dimension mismatch");
    if (xi.size() != n) throw InputError("necessity_check: vector length does not match the tuple");
    NecessityReport r;
    const CMatrix Xinv = inverse(X);
    r.cond = operator_norm(X) * operator_norm(Xinv);
    const double scale = std::max(1.0, N.norm());
    for (int j = 0; j < N.dim(); ++j)
        r.residual = std::max(r.residual, operator_norm(X * N[j] * Xinv - model.Z[j]));
    if (r.residual > tol * r.cond * scale) {
        std::ostringstream os;
        os << "necessity_check: intertwining residual " << r.residual << " too large";
        throw ValidationError(os.str());
    }
    const CVector v = Xinv * model.cyclic;
    r.xi = v / v.norm();
    r.xi_alignment = xi.norm() > 0.0 ? std::abs(r.xi.dot(xi)) / xi.norm() : 0.0;

    PowerTable pow(N);
    r.min_weighted = std::numeric_limits<double>::infinity();
    for (const auto& a : model.standard_monomials) {
        const double w = weight(a) * (pow(a) * r.xi).squaredNorm();
        r.monomials.push_back(a);
        r.weighted_norms.push_back(w);
        r.min_weighted = std::min(r.min_weighted, w);
    }
    r.lower_bound = 1.0 / (r.cond * r.cond);
    r.literal_bound = 1.0 / r.cond;
    r.pass_lower = r.min_weighted >= r.lower_bound * (1.0 - 1e-9);
    r.pass_literal = r.min_weighted >= r.literal_bound * (1.0 - 1e-9);

    for (int k = 0; k < grid; ++k) {
        const double t = 2.0 * std::numbers::pi * k / grid;
        const CMatrix W = gauge_unitary(model, t);
        const CMatrix Y = Xinv * W * X;
        const CMatrix Yinv = Xinv * W.adjoint() * X;
        r.gauge_max_norm = std::max(r.gauge_max_norm, operator_norm(Y));
        r.gauge_fix_defect = std::max(r.gauge_fix_defect, (Yinv * r.xi - r.xi).norm());
        for (int j = 0; j < N.dim(); ++j)
            r.gauge_twist_defect = std::max(
                r.gauge_twist_defect, operator_norm(Y * N[j] * Yinv - std::polar(1.0, t) * N[j]));
    }
    const double c2 = r.cond * r.cond;
    r.pass_gauge = r.gauge_max_norm <= r.cond * (1.0 + 1e-9) && r.gauge_fix_defect <= tol * c2 &&
                   r.gauge_twist_defect <= tol * c2 * scale;
    r.pass = r.pass_lower && r.pass_gauge;
    return r;
}

LemmaReport lemma_checks(const CommutingTuple& T, const CVector& xi, double epsilon,
                         std::uint64_t seed, int samples, int max_degree) {
    if (xi.size() != T.size()) throw InputError("lemma_checks: vector length does not match the tuple");
    LemmaReport r;
    r.epsilon = epsilon;
    r.max_degree = max_degree >= 0 ? max_degree : T.size();
    const int d = T.dim();
    PowerTable pow(T);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::bernoulli_distribution coin(0.5);
    r.pair_worst = -std::numeric_limits<double>::infinity();

    for (int l = 0; l <= r.max_degree; ++l) {
        // members of the level meeting the norm hypothesis, with scaled images
        std::vector<CVector> img;
        for (const auto& a : enumerate_homogeneous(d, l)) {
            const CVector v = std::sqrt(weight(a)) * (pow(a) * xi);
            if (v.squaredNorm() >= 1.0 - epsilon) img.push_back(v);
        }
        for (std::size_t i = 0; i < img.size(); ++i)
            for (std::size_t k = i + 1; k < img.size(); ++k) {
                ++r.pairs;
                r.pair_worst = std::max(r.pair_worst, std::abs(img[i].dot(img[k])) - epsilon);
            }
        if (img.empty()) continue;
        for (int s = 0; s < samples; ++s) {
            CVector sum = CVector::Zero(T.size());
            double c2 = 0.0;
            int card = 0;
            for (const auto& v : img) {
                if (!coin(rng)) continue;
                const cplx c(g(rng), g(rng));
                sum += c * v;
                c2 += std::norm(c);
                ++card;
            }
            if (card == 0) continue;
            ++r.level_samples;
            r.level_worst = std::max(r.level_worst, ((1.0 - epsilon * card) * c2 - sum.squaredNorm()) / c2);
        }
    }
    if (r.pairs == 0) r.pair_worst = 0.0;
    r.pairs_pass = r.pair_worst <= 1e-12;
    r.level_pass = r.level_worst <= 1e-12;

    NilsimHypotheses h;
    try {
        h = check_hypotheses(T, xi);
        r.sandwich_applicable = h.gauge_verified && epsilon >= h.epsilon;
    } catch (const ValidationError&) {
        r.sandwich_applicable = false;
    }
    if (r.sandwich_applicable) {
        const double L1 = h.top_degree + 1.0;
        for (int s = 0; s < samples; ++s) {
            CVector hv = CVector::Zero(T.size());
            double c2 = 0.0;
            for (const auto& a : h.support) {
                const cplx c(g(rng), g(rng));
                hv += c * std::sqrt(weight(a)) * (pow(a) * xi);
                c2 += std::norm(c);
            }
            const double hn = hv.squaredNorm();
            const double lower = (1.0 - epsilon * h.card) / (L1 * h.gamma * h.gamma) * c2;
            r.sandwich_lower_worst = std::max(r.sandwich_lower_worst, (lower - hn) / c2);
            r.sandwich_upper_worst = std::max(r.sandwich_upper_worst, (hn - L1 * c2) / c2);
            ++r.sandwich_samples;
        }
        r.sandwich_pass = r.sandwich_lower_worst <= 1e-10 && r.sandwich_upper_worst <= 1e-10;
    }
    r.pass = r.pairs_pass && r.level_pass && r.sandwich_pass;
    return r;
}

}  // namespace dakit
