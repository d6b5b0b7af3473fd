#include "dakit/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "dakit/errors.hpp"

namespace dakit {

namespace {

void require_points(const std::vector<Point>& points) {
    if (points.empty()) throw InputError("need at least one point");
    const std::size_t d = points.front().size();
    for (const auto& p : points) {
        if (p.size() != d || d == 0) throw InputError("points must share one dimension");
        require_in_ball(p, "interpolation node");
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t k = i + 1; k < points.size(); ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += std::norm(points[i][j] - points[k][j]);
            if (std::sqrt(s) < 1e-14) throw InputError("coincident points");
        }
}

CMatrix kernel_gram(const std::vector<Point>& points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    CMatrix K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k)
            K(i, k) = kernel(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(k)]);
    return K;
}

}  // namespace

CMatrix normalized_gram(const std::vector<Point>& points) {
    require_points(points);
    CMatrix K = kernel_gram(points);
    const RVector s = K.diagonal().real().cwiseSqrt();
    for (Eigen::Index i = 0; i < K.rows(); ++i)
        for (Eigen::Index k = 0; k < K.cols(); ++k) K(i, k) /= s(i) * s(k);
    return K;
}

SeparationReport separation_constants(const std::vector<Point>& points) {
    const CMatrix G = normalized_gram(points);
    SeparationReport r;
    for (Eigen::Index i = 0; i < G.rows(); ++i)
        for (Eigen::Index k = i + 1; k < G.cols(); ++k) r.delta_weak = std::min(r.delta_weak, 1.0 - std::norm(G(i, k)));
    const auto eig = hermitian_eig(G);
    r.gamma_carleson = eig.values(eig.values.size() - 1);
    r.gram_lambda_min = eig.values(0);
    return r;
}

PickResult pick_min_norm(const std::vector<Point>& points, const std::vector<cplx>& targets) {
    require_points(points);
    if (targets.size() != points.size()) throw InputError("pick: one target per point required");
    const CMatrix K = kernel_gram(points);
    const auto n = K.rows();
    CMatrix A(n, n);  // a_n conj(a_m) k_nm
    double amax = 0.0, anorm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        amax = std::max(amax, std::abs(targets[static_cast<std::size_t>(i)]));
        anorm += std::norm(targets[static_cast<std::size_t>(i)]);
        for (Eigen::Index k = 0; k < n; ++k)
            A(i, k) = targets[static_cast<std::size_t>(i)] * std::conj(targets[static_cast<std::size_t>(k)]) * K(i, k);
    }
    anorm = std::sqrt(anorm);
    auto lmin = [&](double c) { return lambda_min(c * c * K - A); };

    PickResult r;
    if (amax == 0.0) return r;
    const auto sep = separation_constants(points);
    if (!(sep.gram_lambda_min > 1e-14))
        throw NumericalError("pick: kernel Gram numerically singular, points nearly coincide");
    double lo = amax;
    double hi = anorm * std::sqrt(sep.gamma_carleson / sep.gram_lambda_min);
    hi = std::max(hi, lo);
    if (lmin(lo) >= 0.0) hi = lo;
    int it = 0;
    // 60 halvings at least; continue while the bracket is wider than 1e-10
    while (hi - lo > 0.0 && (it < 60 || hi - lo > 1e-10) && it < 200) {
        const double mid = 0.5 * (lo + hi);
        if (lmin(mid) >= 0.0) hi = mid;
        else lo = mid;
        ++it;
    }
    r.c_star = hi;
    r.lower = lo;
    r.upper = hi;
    r.iterations = it;
    r.margin = lmin(hi);
    return r;
}

SeparationReport strong_separation(const std::vector<Point>& points) {
    SeparationReport r = separation_constants(points);
    r.epsilon_min = 1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<cplx> e(points.size(), 0.0);
        e[i] = 1.0;
        const double eps = 1.0 / pick_min_norm(points, e).c_star;
        r.epsilon.push_back(eps);
        r.epsilon_min = std::min(r.epsilon_min, eps);
    }
    return r;
}

JetSeries::JetSeries(int d, int order)
    : d_(d), order_(order), index_(d, order), c_(CVector::Zero(index_.size())) {}

JetSeries JetSeries::constant(int d, int order, cplx c) {
    JetSeries s(d, order);
    s.c_(0) = c;
    s.tail_val_ = std::numeric_limits<int>::max() / 4;
    return s;
}

JetSeries JetSeries::operator+(const JetSeries& o) const {
    JetSeries s(*this);
    s.c_ += o.c_;
    s.tail_val_ = std::min(tail_val_, o.tail_val_);
    return s;
}

JetSeries JetSeries::operator-(const JetSeries& o) const {
    JetSeries s(*this);
    s.c_ -= o.c_;
    s.tail_val_ = std::min(tail_val_, o.tail_val_);
    return s;
}

JetSeries JetSeries::operator*(const JetSeries& o) const {
    JetSeries s(d_, order_);
    for (int i = 0; i < index_.size(); ++i) {
        if (c_(i) == 0.0) continue;
        for (int k = 0; k < index_.size(); ++k) {
            if (o.c_(k) == 0.0) continue;
            const MultiIndex sum = index_.at(i) + index_.at(k);
            if (sum.degree() > order_) continue;
            s.c_(index_.find(sum)) += c_(i) * o.c_(k);
        }
    }
    // xy - c_x c_y = (x - c_x) y + c_x (y - c_y)
    const int big = std::numeric_limits<int>::max() / 4;
    const int first = tail_val_ + (o.c_(0) != 0.0 ? 0 : o.tail_val_);
    const int second = c_(0) != 0.0 ? o.tail_val_ : big;
    s.tail_val_ = std::min({first, second, big});
    return s;
}

JetSeries JetSeries::pow(int k) const {
    JetSeries s = constant(d_, order_, 1.0);
    for (int i = 0; i < k; ++i) s = s * (*this);
    return s;
}

JetSeries theta_from_phi(const JetSeries& phi, int kappa) {
    const JetSeries one = JetSeries::constant(phi.dim(), phi.order(), 1.0);
    return one - (one - phi.pow(kappa + 1)).pow(kappa + 1);
}

ThetaJets theta_jets(const std::vector<Point>& points, const std::vector<int>& omega, int kappa,
                     std::uint64_t seed, int draws) {
    require_points(points);
    if (kappa < 0) throw InputError("theta_jets: order must be nonnegative");
    const int d = static_cast<int>(points.front().size());
    std::set<int> om;
    for (int i : omega) {
        if (i < 0 || i >= static_cast<int>(points.size())) throw InputError("theta_jets: subset index out of range");
        om.insert(i);
    }
    ThetaJets out;
    out.kappa = kappa;
    out.omega.assign(om.begin(), om.end());
    std::vector<cplx> ind(points.size(), 0.0);
    for (int i : om) ind[static_cast<std::size_t>(i)] = 1.0;
    out.c_star = pick_min_norm(points, ind).c_star;
    out.norm_proxy = 1.0 + std::pow(1.0 + std::pow(out.c_star, kappa + 1), kappa + 1);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    out.pass = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        ThetaPoint tp;
        tp.index = static_cast<int>(i);
        tp.in_omega = om.count(static_cast<int>(i)) > 0;
        tp.target = ind[i];
        // symbolic route: phi = target + (unknown series of valuation >= 1)
        JetSeries phi(d, kappa);
        phi.coeffs()(0) = tp.target;
        phi.set_tail_valuation(1);
        const JetSeries th = theta_from_phi(phi, kappa);
        const bool const_ok = th.constant_term() == tp.target;
        tp.certified_valuation = const_ok ? th.tail_valuation() : 0;
        // numeric route: random derivatives of phi
        for (int k = 0; k < draws; ++k) {
            JetSeries p(d, kappa);
            for (Eigen::Index r = 1; r < p.coeffs().size(); ++r)
                p.coeffs()(r) = cplx(g(rng), g(rng)) * out.c_star;
            p.coeffs()(0) = tp.target;
            const JetSeries t = theta_from_phi(p, kappa);
            CVector dev = t.coeffs();
            dev(0) -= tp.target;
            // relative to the size of the terms that cancel
            const double scale = std::pow(1.0 + p.coeffs().cwiseAbs().sum(), (kappa + 1) * (kappa + 1));
            tp.numeric_deviation = std::max(tp.numeric_deviation, dev.cwiseAbs().maxCoeff() / scale);
        }
        tp.pass = tp.certified_valuation > kappa && tp.numeric_deviation <= 1e-12;
        out.pass = out.pass && tp.pass;
        out.points.push_back(tp);
    }
    return out;
}

}  // namespace dakit
