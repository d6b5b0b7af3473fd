#include "dakit/fockspace.hpp"

#include <cmath>
#include <limits>

#include "dakit/errors.hpp"

namespace dakit {

double point_norm(const Point& z) {
    double s = 0.0;
    for (const auto& v : z) s += std::norm(v);
    return std::sqrt(s);
}

cplx inner(const Point& z, const Point& w) {
    if (z.size() != w.size()) throw InputError("points of different dimension");
    cplx s = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) s += z[j] * std::conj(w[j]);
    return s;
}

void require_in_ball(const Point& z, const char* what) {
    if (!(point_norm(z) < 1.0)) throw InputError(std::string(what) + ": point not inside the open unit ball");
}

FockTruncation::FockTruncation(int d, int max_degree)
    : d_(d), D_(max_degree), index_(d, max_degree) {
    if (max_degree < 0) throw InputError("negative truncation degree");
    const int n = index_.size();
    norms_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const MultiIndex& a = index_.at(i);
        double lg = -log_factorial(a.degree());
        for (int j = 0; j < d; ++j) lg += log_factorial(a[j]);
        norms_[static_cast<std::size_t>(i)] = std::exp(0.5 * lg);
    }
    up_.assign(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(n), -1));
    for (int i = 0; i < n; ++i) {
        if (index_.at(i).degree() == D_) continue;
        for (int j = 0; j < d; ++j) up_[j][i] = index_.find(index_.at(i).raised(j));
    }
}

CVector FockTruncation::coordinates(const Polynomial& p) const {
    CVector v = p.to_vector(index_);
    for (int i = 0; i < size(); ++i) v(i) *= norms_[static_cast<std::size_t>(i)];
    return v;
}

Polynomial FockTruncation::polynomial(const CVector& coords, double drop_below) const {
    CVector raw = coords;
    for (int i = 0; i < size(); ++i) raw(i) /= norms_[static_cast<std::size_t>(i)];
    return Polynomial::from_vector(d_, index_, raw, drop_below);
}

CMatrix FockTruncation::shift(int j, const CMatrix& V) const {
    CMatrix out = CMatrix::Zero(V.rows(), V.cols());
    const auto& up = up_[static_cast<std::size_t>(j)];
    for (int i = 0; i < size(); ++i) {
        const int k = up[static_cast<std::size_t>(i)];
        if (k < 0) continue;
        const MultiIndex& a = index_.at(i);
        const double w = std::sqrt((a[j] + 1.0) / (a.degree() + 1.0));
        out.row(k) += w * V.row(i);
    }
    return out;
}

CMatrix FockTruncation::backward_shift(int j, const CMatrix& V) const {
    CMatrix out = CMatrix::Zero(V.rows(), V.cols());
    const auto& up = up_[static_cast<std::size_t>(j)];
    for (int i = 0; i < size(); ++i) {
        const int k = up[static_cast<std::size_t>(i)];
        if (k < 0) continue;
        const MultiIndex& a = index_.at(i);
        const double w = std::sqrt((a[j] + 1.0) / (a.degree() + 1.0));
        out.row(i) += w * V.row(k);
    }
    return out;
}

int choose_truncation(double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) throw InputError("truncation rule needs a radius in [0,1)");
    if (rho == 0.0) return 0;
    const double target = 1e-14 * (1.0 - rho * rho);
    int D = 0;
    double t = rho * rho;  // rho^{2(D+1)}
    while (t >= target) {
        t *= rho * rho;
        ++D;
    }
    return D;
}

double jet_tail_bound(double rho, int m, int D) {
    // tail^2 <= sum_{k > D-m} (k+m)^{2m} rho^{2k}
    if (rho == 0.0) return 0.0;
    if (rho >= 1.0) return std::numeric_limits<double>::infinity();
    const double r2 = rho * rho;
    int k = std::max(D - m + 1, 0);
    auto term = [&](int kk) {
        return std::exp(2.0 * m * std::log(static_cast<double>(kk + m)) + kk * std::log(r2));
    };
    double t = (k + m == 0) ? 1.0 : term(k);
    double sum = 0.0;
    for (int guard = 0; guard < 100000; ++guard) {
        sum += t;
        const double ratio =
            (m == 0) ? r2 : std::pow(static_cast<double>(k + 1 + m) / (k + m), 2.0 * m) * r2;
        if (ratio < 1.0 && (ratio < 0.5 || t < 1e-3 * sum || t == 0.0)) {
            // ratios decrease in k, so the rest is dominated by a geometric series
            sum += t * ratio / (1.0 - ratio);
            return std::sqrt(sum);
        }
        ++k;
        t *= ratio;
    }
    return std::sqrt(sum);
}

cplx kernel(const Point& z, const Point& w) {
    require_in_ball(z, "kernel");
    require_in_ball(w, "kernel");
    return 1.0 / (1.0 - inner(z, w));
}

JetVector jet_vector(const Point& z, const MultiIndex& alpha, const FockTruncation& trunc) {
    require_in_ball(z, "jet_vector");
    if (alpha.dim() != trunc.dim() || static_cast<int>(z.size()) != trunc.dim())
        throw InputError("jet_vector: dimension mismatch");
    const int m = alpha.degree();
    if (m > trunc.max_degree()) throw InputError("jet_vector: order exceeds the truncation degree");
    JetVector jv{z, alpha, CVector::Zero(trunc.size()), 0.0};
    Point zbar(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) zbar[j] = std::conj(z[j]);
    const auto& idx = trunc.index();
    for (int i = 0; i < trunc.size(); ++i) {
        const MultiIndex& g = idx.at(i);
        if (!g.dominates(alpha)) continue;
        const MultiIndex b = g - alpha;
        // |g|!/(g-alpha)! * ||x^g|| = sqrt(g! |g|!)/(g-alpha)!
        double lg = 0.5 * log_factorial(g.degree());
        for (int j = 0; j < g.dim(); ++j) lg += 0.5 * log_factorial(g[j]) - log_factorial(b[j]);
        jv.coeffs(i) = std::exp(lg) * power(zbar, b);
    }
    jv.tail_bound = jet_tail_bound(point_norm(z), m, trunc.max_degree());
    return jv;
}

CMatrix mult_matrix(const Polynomial& p, const FockTruncation& trunc) {
    if (p.degree() > trunc.max_degree()) throw InputError("mult_matrix: degree exceeds truncation");
    const int n = trunc.size();
    CMatrix M = CMatrix::Zero(n, n);
    const auto& idx = trunc.index();
    for (int i = 0; i < n; ++i) {
        const MultiIndex& a = idx.at(i);
        for (const auto& [b, c] : p.terms()) {
            const int k = idx.find(a + b);
            if (k < 0) continue;
            M(k, i) += c * trunc.norm(k) / trunc.norm(i);
        }
    }
    return M;
}

}  // namespace dakit
