#include "dakit/repro.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include <gsl/gsl_blas.h>
#include <gsl/gsl_multimin.h>

#include "dakit/errors.hpp"
#include "dakit/interp.hpp"
#include "dakit/models.hpp"
#include "dakit/polyideal.hpp"
#include "dakit/spectral.hpp"

namespace dakit {

namespace {

ReproRow equal_row(std::string q, double param, double formula, double measured, double tol,
                   bool relative) {
    ReproRow r;
    r.quantity = std::move(q);
    r.parameter = param;
    r.formula = formula;
    r.measured = measured;
    r.relative = relative;
    r.tolerance = tol;
    const double diff = std::abs(measured - formula);
    r.error = relative ? diff / std::max(std::abs(formula), std::numeric_limits<double>::min()) : diff;
    r.pass = r.error <= tol;
    return r;
}

ReproRow bound_row(std::string q, double param, double bound, double measured, double tol) {
    ReproRow r;
    r.quantity = std::move(q);
    r.parameter = param;
    r.formula = bound;
    r.measured = measured;
    r.lower_bound = true;
    r.tolerance = tol;
    r.error = std::max(0.0, bound - measured);
    r.pass = measured >= bound - tol;
    return r;
}

void finish(ReproReport& rep) {
    rep.pass = true;
    for (const auto& r : rep.rows) rep.pass = rep.pass && r.pass;
}

// Runs task(i) for i < count with at most `jobs` in flight; results keep index order.
std::vector<std::vector<ReproRow>> run_rows(std::size_t count, int jobs,
                                            const std::function<std::vector<ReproRow>(std::size_t)>& task) {
    std::vector<std::vector<ReproRow>> out(count);
    const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
    for (std::size_t start = 0; start < count; start += width) {
        std::vector<std::future<std::vector<ReproRow>>> batch;
        const std::size_t stop = std::min(count, start + width);
        for (std::size_t i = start; i < stop; ++i)
            batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async, task, i));
        for (std::size_t i = start; i < stop; ++i) out[i] = batch[i - start].get();
    }
    return out;
}

CMatrix vec_columns(const std::vector<CMatrix>& ms) {
    CMatrix V(ms.front().size(), static_cast<Eigen::Index>(ms.size()));
    for (std::size_t k = 0; k < ms.size(); ++k) V.col(static_cast<Eigen::Index>(k)) = vec(ms[k]);
    return V;
}

CMatrix diag2(cplx a, cplx b) {
    CMatrix D = CMatrix::Zero(2, 2);
    D(0, 0) = a;
    D(1, 1) = b;
    return D;
}

CMatrix unit_matrix(int n, int i, int j) {
    CMatrix E = CMatrix::Zero(n, n);
    E(i, j) = 1.0;
    return E;
}

std::uint64_t row_seed(std::uint64_t seed, std::size_t i) { return seed * 1000003ULL + i; }

struct CondContext {
    const std::vector<CMatrix>* family;
};

double cond_at(const gsl_vector* p, void* params) {
    const auto& fam = *static_cast<CondContext*>(params)->family;
    CMatrix X = CMatrix::Zero(fam.front().rows(), fam.front().cols());
    for (std::size_t k = 0; k < fam.size(); ++k)
        X += cplx(gsl_vector_get(p, 2 * k), gsl_vector_get(p, 2 * k + 1)) * fam[k];
    const double c = condition_number(X);
    return std::isfinite(c) ? c : 1e300;
}

std::vector<double> nelder_mead(CondContext& ctx, std::vector<double> x0, double step, double& value) {
    const std::size_t n = x0.size();
    gsl_multimin_function fn{&cond_at, n, &ctx};
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* ss = gsl_vector_alloc(n);
    for (std::size_t k = 0; k < n; ++k) gsl_vector_set(x, k, x0[k]);
    gsl_vector_set_all(ss, step);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &fn, x, ss);
    for (int it = 0; it < 5000; ++it) {
        if (gsl_multimin_fminimizer_iterate(s)) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-10 * gsl_blas_dnrm2(s->x)) == GSL_SUCCESS) break;
    }
    value = s->fval;
    std::vector<double> best(n);
    for (std::size_t k = 0; k < n; ++k) best[k] = gsl_vector_get(s->x, k);
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(ss);
    gsl_vector_free(x);
    return best;
}

}  // namespace

std::string format_table(const ReproReport& report) {
    std::ostringstream os;
    os << report.name << (report.pass ? "  PASS" : "  FAIL") << "\n";
    os << std::left << std::setw(34) << "quantity" << std::right << std::setw(12) << "parameter"
       << std::setw(20) << "formula" << std::setw(20) << "measured" << std::setw(12) << "error"
       << std::setw(6) << "" << "\n";
    for (const auto& r : report.rows) {
        os << std::left << std::setw(34) << r.quantity << std::right << std::setprecision(6)
           << std::setw(12) << r.parameter << std::setprecision(12) << std::setw(20) << r.formula
           << std::setw(20) << r.measured << std::setprecision(3) << std::setw(12) << r.error
           << std::setw(6) << (r.pass ? "ok" : "FAIL") << (r.lower_bound ? "  (>=)" : "") << "\n";
    }
    return os.str();
}

double corner_scale(double t) { return std::sqrt(1.0 + t * t / 2.0 + std::sqrt(1.0 + std::pow(t, 4) / 4.0)); }

CommutingTuple corner_pair() { return validate({unit_matrix(3, 1, 0), unit_matrix(3, 2, 0)}); }

CommutingTuple scaled_corner_pair(double t) {
    const double f = corner_scale(t);
    const CMatrix N1 = unit_matrix(3, 1, 0), N2 = unit_matrix(3, 2, 0);
    return validate({N1 / f, (N1 + t * N2) / f});
}

CMatrix intertwiner_space(const CommutingTuple& A, const CommutingTuple& B) {
    if (A.dim() != B.dim() || A.dim() == 0) throw InputError("intertwiner_space: tuples of different length");
    const int n = A.size(), m = B.size();
    // vec(X A) = (A^T kron I_m) vec X and vec(B X) = (I_n kron B) vec X
    CMatrix M = CMatrix::Zero(static_cast<Eigen::Index>(A.dim()) * m * n, m * n);
    for (int j = 0; j < A.dim(); ++j) {
        auto blk = M.middleRows(static_cast<Eigen::Index>(j) * m * n, m * n);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                const cplx a = A[j](q, p);
                if (a != 0.0) blk.block(p * m, q * m, m, m) += a * CMatrix::Identity(m, m);
            }
        for (int p = 0; p < n; ++p) blk.block(p * m, p * m, m, m) -= B[j];
    }
    return rank_split(M, 1e-9, true, 1e-12).kernel;
}

std::vector<CMatrix> unvec_columns(const CMatrix& basis, int n) {
    std::vector<CMatrix> out;
    for (Eigen::Index k = 0; k < basis.cols(); ++k)
        out.push_back(Eigen::Map<const CMatrix>(basis.col(k).data(), n, basis.rows() / n));
    return out;
}

FamilyMinimum minimize_condition(const std::vector<CMatrix>& family, std::uint64_t seed, int starts) {
    if (family.empty()) throw InputError("minimize_condition: empty family");
    CondContext ctx{&family};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    FamilyMinimum best;
    best.cond = std::numeric_limits<double>::infinity();
    std::vector<double> arg;
    for (int s = 0; s < starts; ++s) {
        std::vector<double> x0(2 * family.size());
        for (auto& v : x0) v = g(rng);
        double val = 0.0;
        auto x = nelder_mead(ctx, x0, 0.5, val);
        // cond is constant along rays: rescale to unit length, then restart at the optimum
        for (int r = 0; r < 2; ++r) {
            double norm = 0.0;
            for (double v : x) norm += v * v;
            for (auto& v : x) v /= std::sqrt(norm);
            x = nelder_mead(ctx, x, 0.05, val);
        }
        if (val < best.cond) {
            best.cond = val;
            arg = x;
        }
        ++best.starts;
    }
    best.X = CMatrix::Zero(family.front().rows(), family.front().cols());
    for (std::size_t k = 0; k < family.size(); ++k) best.X += cplx(arg[2 * k], arg[2 * k + 1]) * family[k];
    best.cond = condition_number(best.X);
    return best;
}

namespace {

CMatrix one_variable_block(cplx l, double s) {
    CMatrix M(2, 2);
    M << l, s * (1.0 - std::abs(l)), 0.0, l;
    return M;
}

std::vector<ReproRow> one_variable_rows(cplx l, double eps, std::uint64_t seed) {
    std::vector<ReproRow> rows;
    const CommutingTuple S = validate({one_variable_block(l, 1.0)});
    const CommutingTuple T = validate({one_variable_block(l, eps)});
    // X T = S X
    const CMatrix K = intertwiner_space(T, S);
    rows.push_back(equal_row("intertwiner dimension", eps, 2.0, static_cast<double>(K.cols()), 0.0, false));
    const CMatrix form = orthonormal_range(vec_columns({diag2(1.0, eps), unit_matrix(2, 0, 1)}));
    rows.push_back(equal_row("family form distance", eps, 0.0, subspace_distance(K, form), 1e-9, false));
    const auto fam = unvec_columns(K, 2);
    const auto mn = minimize_condition(fam, seed);
    rows.push_back(equal_row("min cond vs 1/eps", eps, 1.0 / eps, mn.cond, 1e-2, true));
    rows.push_back(bound_row("min cond lower bound 1/eps", eps, 1.0 / eps, mn.cond, 1e-9 / eps));
    return rows;
}

}  // namespace

ReproReport example_one_variable(const std::vector<cplx>& lambdas, const std::vector<double>& epsilons,
                                 std::uint64_t seed, int jobs) {
    if (epsilons.empty()) throw InputError("example_one_variable: need at least one eps");
    if (!lambdas.empty() && lambdas.size() != 1 && lambdas.size() != epsilons.size())
        throw InputError("example_one_variable: give one lambda, or one per eps");
    for (double e : epsilons)
        if (!(e > 0.0 && e <= 1.0)) throw InputError("example_one_variable: eps must lie in (0, 1]");
    for (auto l : lambdas)
        if (!(std::abs(l) < 1.0)) throw InputError("example_one_variable: lambda must lie in the disc");
    ReproReport rep;
    rep.name = "one-variable blocks";
    const auto parts = run_rows(epsilons.size(), jobs, [&](std::size_t i) {
        const cplx l = lambdas.empty() ? cplx(0.0) : lambdas[lambdas.size() == 1 ? 0 : i];
        return one_variable_rows(l, epsilons[i], row_seed(seed, i));
    });
    for (const auto& p : parts) rep.rows.insert(rep.rows.end(), p.begin(), p.end());
    finish(rep);
    return rep;
}

namespace {

std::vector<ReproRow> two_variable_rows(double eps, const Point& z, std::uint64_t seed) {
    std::vector<ReproRow> rows;
    const double f = corner_scale(eps);
    const CMatrix N1 = unit_matrix(3, 1, 0), N2 = unit_matrix(3, 2, 0);
    const CommutingTuple M = validate({N1, N1 + eps * N2});
    rows.push_back(equal_row("f vs row Gram norm", eps, f, std::sqrt(lambda_max(row_gram(M))), 1e-12, true));

    const CommutingTuple N = corner_pair();
    const CommutingTuple R = scaled_corner_pair(eps);
    // X N = R X
    const CMatrix K = intertwiner_space(N, R);
    rows.push_back(equal_row("intertwiner dimension", eps, 3.0, static_cast<double>(K.cols()), 0.0, false));
    CMatrix Ea = CMatrix::Zero(3, 3);
    Ea(0, 0) = 1.0;
    Ea(1, 1) = Ea(1, 2) = 1.0 / f;
    Ea(2, 2) = eps / f;
    const CMatrix form = orthonormal_range(vec_columns({Ea, unit_matrix(3, 1, 0), unit_matrix(3, 2, 0)}));
    rows.push_back(equal_row("family form distance", eps, 0.0, subspace_distance(K, form), 1e-9, false));

    const CommutingTuple GN = moebius(N, z), GR = moebius(R, z);
    const CMatrix KG = intertwiner_space(GN, GR);
    rows.push_back(equal_row("automorphism intertwiner dim", eps, 3.0, static_cast<double>(KG.cols()), 0.0, false));
    rows.push_back(equal_row("automorphism invariance", eps, 0.0, subspace_distance(K, KG), 1e-9, false));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CVector c(K.cols());
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = cplx(g(rng), g(rng));
    const CMatrix X = Eigen::Map<const CMatrix>(CVector(K * c).data(), 3, 3);
    const cplx a = X(0, 0);
    const cplx expect = a * a * a * eps / (f * f);
    ReproRow det = equal_row("determinant identity", eps, std::abs(expect), std::abs(X.determinant()), 1e-9, true);
    det.error = std::abs(X.determinant() - expect) / std::abs(expect);
    det.pass = det.error <= det.tolerance;
    rows.push_back(det);

    const auto mn = minimize_condition(unvec_columns(K, 3), seed + 17);
    rows.push_back(bound_row("min cond lower bound", eps, std::pow(eps, -1.0 / 3.0) * std::pow(f, 2.0 / 3.0),
                             mn.cond, 1e-6));
    return rows;
}

}  // namespace

ReproReport example_two_variable(const std::vector<double>& epsilons, const std::vector<Point>& targets,
                                 std::uint64_t seed, int jobs) {
    if (epsilons.empty()) throw InputError("example_two_variable: need at least one eps");
    if (!targets.empty() && targets.size() != epsilons.size())
        throw InputError("example_two_variable: give no targets or one per eps");
    for (double e : epsilons)
        if (!(e > 0.0 && e <= 1.0)) throw InputError("example_two_variable: eps must lie in (0, 1]");
    for (const auto& z : targets) {
        if (z.size() != 2) throw InputError("example_two_variable: targets must lie in the two-ball");
        require_in_ball(z, "example_two_variable");
    }
    ReproReport rep;
    rep.name = "two-variable corner pair";
    const auto parts = run_rows(epsilons.size(), jobs, [&](std::size_t i) {
        return two_variable_rows(epsilons[i], targets.empty() ? Point{0.0, 0.0} : targets[i], row_seed(seed, i));
    });
    for (const auto& p : parts) rep.rows.insert(rep.rows.end(), p.begin(), p.end());

    const CMatrix N1 = unit_matrix(3, 1, 0), N2 = unit_matrix(3, 2, 0);
    const double golden = std::sqrt(lambda_max(row_gram(validate({N1, N1 + N2}))));
    rep.rows.push_back(equal_row("f(1) golden ratio", 1.0, (1.0 + std::sqrt(5.0)) / 2.0, golden, 1e-10, false));
    const double emin = *std::min_element(epsilons.begin(), epsilons.end());
    const double fmin = std::sqrt(lambda_max(row_gram(validate({N1, N1 + emin * N2}))));
    rep.rows.push_back(equal_row("f limit sqrt 2", emin, std::sqrt(2.0), fmin, std::max(1e-5, emin * emin / 4.0), false));
    finish(rep);
    return rep;
}

ReproReport dichotomy_demo(const std::vector<cplx>& points, int kappa, const std::vector<double>& epsilons,
                           std::uint64_t seed, int jobs) {
    if (points.empty()) throw InputError("dichotomy_demo: need at least one point");
    for (auto l : points)
        if (!(std::abs(l) < 1.0)) throw InputError("dichotomy_demo: points must lie in the disc");
    ReproReport rep;
    if (kappa == 0) {
        rep.name = "order-zero dichotomy: similarity to the diagonal";
        std::vector<LocalIdealData> data;
        std::vector<Point> pts;
        for (auto l : points) {
            pts.push_back({l});
            data.push_back({{l}, maximal_ideal_power({l}, 1)});
        }
        const auto m = jet_model(data);
        const auto J = jordan_decompose(m.Z, 1e-6, seed);
        int top = 0;
        for (const auto& b : J.blocks) top = std::max(top, b.size);
        rep.rows.push_back(equal_row("largest block size", 0.0, 1.0, top, 0.0, false));
        rep.rows.push_back(equal_row("block count", 0.0, static_cast<double>(points.size()),
                                     static_cast<double>(J.blocks.size()), 0.0, false));
        double worst = 0.0;
        for (auto l : points) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& b : J.blocks) best = std::min(best, std::abs(b.z[0] - l));
            worst = std::max(worst, best);
        }
        rep.rows.push_back(equal_row("eigenvalue recovery", 0.0, 0.0, worst, 1e-8, false));
        rep.rows.push_back(equal_row("residual / norm", 0.0, 0.0, J.residual / std::max(1.0, m.Z.norm()), 1e-7, false));
        if (points.size() == 2) {
            // normalized kernel overlap c gives cond sqrt((1 + c)/(1 - c))
            const double c = std::abs(normalized_gram({{points[0]}, {points[1]}})(0, 1));
            rep.rows.push_back(equal_row("two-point cond closed form", std::abs(points[0] - points[1]),
                                         std::sqrt((1.0 + c) / (1.0 - c)), J.cond, 1e-6, true));
        } else {
            rep.rows.push_back(bound_row("similarity cond finite", 0.0, 1.0, std::isfinite(J.cond) ? J.cond : -1.0, 1e-12));
        }
        finish(rep);
        return rep;
    }
    if (kappa != 1) throw InputError("dichotomy_demo: order must be 0 or 1");
    if (epsilons.empty() || (epsilons.size() != 1 && epsilons.size() != points.size()))
        throw InputError("dichotomy_demo: give one eps, or one per point");
    for (double e : epsilons)
        if (!(e > 0.0 && e <= 1.0)) throw InputError("dichotomy_demo: eps must lie in (0, 1]");
    rep.name = "order-one dichotomy: block intertwiners";
    const std::size_t n = points.size();
    auto eps_at = [&](std::size_t i) { return epsilons[epsilons.size() == 1 ? 0 : i]; };

    std::vector<FamilyMinimum> mins(n);
    const auto parts = run_rows(n, jobs, [&](std::size_t i) {
        const CommutingTuple S = validate({one_variable_block(points[i], 1.0)});
        const CommutingTuple T = validate({one_variable_block(points[i], eps_at(i))});
        mins[i] = minimize_condition(unvec_columns(intertwiner_space(T, S), 2), row_seed(seed, i));
        return std::vector<ReproRow>{equal_row("block min cond vs 1/eps", eps_at(i), 1.0 / eps_at(i), mins[i].cond, 1e-2, true)};
    });
    for (const auto& p : parts) rep.rows.insert(rep.rows.end(), p.begin(), p.end());

    std::vector<CMatrix> Sb, Tb, Xb;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Sb.push_back(one_variable_block(points[i], 1.0));
        Tb.push_back(one_variable_block(points[i], eps_at(i)));
        // scale each block to unit norm: then ||X|| = 1 and ||X^{-1}|| = max block cond
        Xb.push_back(mins[i].X / operator_norm(mins[i].X));
        worst = std::max(worst, mins[i].cond);
    }
    auto sum = [](const std::vector<CMatrix>& bs) {
        const auto k = static_cast<Eigen::Index>(bs.size());
        CMatrix M = CMatrix::Zero(2 * k, 2 * k);
        for (Eigen::Index i = 0; i < k; ++i) M.block(2 * i, 2 * i, 2, 2) = bs[static_cast<std::size_t>(i)];
        return M;
    };
    const CMatrix S = sum(Sb), T = sum(Tb), X = sum(Xb);
    // distinct points force block-diagonal intertwiners: dimension 2 per block
    bool distinct = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k) distinct = distinct && std::abs(points[i] - points[k]) > 1e-12;
    if (distinct && n <= 12) {
        const CMatrix K = intertwiner_space(validate({T}), validate({S}));
        rep.rows.push_back(equal_row("global intertwiner dimension", 0.0, 2.0 * static_cast<double>(n),
                                     static_cast<double>(K.cols()), 0.0, false));
    }
    rep.rows.push_back(equal_row("global intertwining residual", 0.0, 0.0, operator_norm(X * T - S * X), 1e-10, false));
    rep.rows.push_back(equal_row("global cond vs worst block", 0.0, worst, condition_number(X), 1e-9, true));
    finish(rep);
    return rep;
}

}  // namespace dakit
