#include "dakit/tuples.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dakit/errors.hpp"

namespace dakit {

double CommutingTuple::norm() const {
    double m = 0.0;
    for (const auto& t : T) m = std::max(m, operator_norm(t));
    return m;
}

CommutingTuple validate(std::vector<CMatrix> matrices) {
    if (matrices.empty()) throw InputError("tuple needs at least one matrix");
    const auto n = matrices.front().rows();
    for (const auto& m : matrices) {
        if (m.rows() != n || m.cols() != n) throw InputError("tuple matrices must share one square size");
        require_finite(m, "tuple");
    }
    CommutingTuple T;
    T.T = std::move(matrices);
    for (std::size_t i = 0; i < T.T.size(); ++i)
        for (std::size_t j = i + 1; j < T.T.size(); ++j)
            T.commutator_defect = std::max(
                T.commutator_defect, operator_norm(T.T[i] * T.T[j] - T.T[j] * T.T[i]));
    const CMatrix G = row_gram(T) - CMatrix::Identity(n, n);
    T.row_defect = std::max(0.0, lambda_max(G));
    return T;
}

CMatrix row_gram(const CommutingTuple& T) {
    const int n = T.size();
    CMatrix G = CMatrix::Zero(n, n);
    for (const auto& t : T.T) G += t * t.adjoint();
    return G;
}

const CMatrix& PowerTable::operator()(const MultiIndex& alpha) {
    auto it = cache_.find(alpha);
    if (it != cache_.end()) return it->second;
    CMatrix value;
    if (alpha.degree() == 0) {
        value = CMatrix::Identity(T_->size(), T_->size());
    } else {
        int j = 0;
        while (alpha[j] == 0) ++j;
        MultiIndex lower = alpha;
        --lower[j];
        value = (*this)(lower) * (*T_)[j];
    }
    return cache_.emplace(alpha, std::move(value)).first->second;
}

CMatrix apply_poly(const Polynomial& p, const CommutingTuple& T) {
    if (p.dim() != T.dim()) throw InputError("apply_poly: polynomial and tuple dimensions differ");
    PowerTable pw(T);
    CMatrix out = CMatrix::Zero(T.size(), T.size());
    for (const auto& [a, c] : p.terms()) out += c * pw(a);
    return out;
}

KrylovResult krylov(const CommutingTuple& T, const CVector& xi, int max_degree) {
    if (xi.size() != T.size()) throw InputError("krylov: vector length differs from matrix size");
    if (xi.norm() == 0.0) throw InputError("krylov: starting vector is zero");
    const int d = T.dim();
    std::map<MultiIndex, CVector> vecs;
    std::vector<std::vector<CVector>> layers;
    double scale = 0.0;
    for (int l = 0; l <= max_degree; ++l) {
        std::vector<CVector> layer;
        for (const auto& a : enumerate_homogeneous(d, l)) {
            CVector v;
            if (l == 0) {
                v = xi;
            } else {
                int j = 0;
                while (a[j] == 0) ++j;
                MultiIndex lower = a;
                --lower[j];
                v = T[j] * vecs.at(lower);
            }
            scale = std::max(scale, v.norm());
            layer.push_back(v);
            vecs.emplace(a, std::move(v));
        }
        layers.push_back(std::move(layer));
    }
    const double floor = 1e-9 * scale;
    auto stack = [&](auto first, auto last) {
        std::size_t count = 0;
        for (auto it = first; it != last; ++it) count += it->size();
        CMatrix M(T.size(), static_cast<Eigen::Index>(count));
        Eigen::Index c = 0;
        for (auto it = first; it != last; ++it)
            for (const auto& v : *it) M.col(c++) = v;
        return M;
    };
    KrylovResult out;
    int layer_sum = 0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const CMatrix M = stack(layers.begin() + static_cast<long>(l), layers.begin() + static_cast<long>(l) + 1);
        const int r = rank_split(M, 0.0, false, floor).rank;
        out.layer_dims.push_back(r);
        layer_sum += r;
    }
    while (!out.layer_dims.empty() && out.layer_dims.back() == 0) out.layer_dims.pop_back();
    const auto all = rank_split(stack(layers.begin(), layers.end()), 0.0, false, floor);
    out.basis = all.range;
    out.is_cyclic = all.rank == T.size();
    out.layers_direct = layer_sum == all.rank;
    return out;
}

PolyIdeal annihilator_slice(const CommutingTuple& T, int D) {
    const int d = T.dim();
    const int n = T.size();
    const auto basis = enumerate(d, D);
    PowerTable pw(T);
    CMatrix A(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) A.col(static_cast<Eigen::Index>(k)) = vec(pw(basis[k]));
    const CMatrix K = rank_split(A, 1e-9).kernel;
    // codimension <= n, so generators live in degree <= n
    const int gen_degree = D >= n ? n : D + 1;
    return PolyIdeal::from_slice(d, D, K, gen_degree);
}

Point moebius_point(const Point& z, const Point& w) {
    const double w2 = std::pow(point_norm(w), 2);
    if (w2 == 0.0) return z;
    if (!(w2 < 1.0)) throw InputError("moebius: center outside the ball");
    const cplx a = inner(z, w);
    const double s = std::sqrt(1.0 - w2);
    Point out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        const cplx p = w[k] * a / w2;
        out[k] = (w[k] - p - s * (z[k] - p)) / (1.0 - a);
    }
    return out;
}

CommutingTuple moebius(const CommutingTuple& T, const Point& w) {
    if (static_cast<int>(w.size()) != T.dim()) throw InputError("moebius: center has wrong dimension");
    const double w2 = std::pow(point_norm(w), 2);
    if (w2 == 0.0) {
        CommutingTuple copy = validate(T.T);
        copy.cyclic_vector = T.cyclic_vector;
        return copy;
    }
    if (!(w2 < 1.0)) throw InputError("moebius: center outside the ball");
    const int n = T.size();
    const CMatrix I = CMatrix::Identity(n, n);
    CMatrix A = CMatrix::Zero(n, n);
    for (int j = 0; j < T.dim(); ++j) A += std::conj(w[static_cast<std::size_t>(j)]) * T[j];
    const CMatrix R = I - A;
    if (condition_number(R) > 1e12)
        throw NumericalError("moebius: resolvent failure, spectrum touches the pole set");
    const CMatrix Rinv = inverse(R);
    const double s = std::sqrt(1.0 - w2);
    std::vector<CMatrix> out;
    for (int k = 0; k < T.dim(); ++k) {
        const cplx wk = w[static_cast<std::size_t>(k)];
        const CMatrix P = (wk / w2) * A;
        out.push_back((wk * I - P - s * (T[k] - P)) * Rinv);
    }
    CommutingTuple G = validate(std::move(out));
    G.cyclic_vector = T.cyclic_vector;
    return G;
}

}  // namespace dakit
