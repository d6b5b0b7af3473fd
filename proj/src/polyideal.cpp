#include "dakit/polyideal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dakit/errors.hpp"

namespace dakit {

PolyIdeal PolyIdeal::from_generators(int d, std::vector<Polynomial> generators, int D) {
    if (d < 1) throw InputError("ideal dimension must be positive");
    if (D < 0) throw InputError("negative degree bound");
    PolyIdeal I;
    I.d_ = d;
    I.D_ = D;
    I.index_ = MonomialIndex(d, D);
    int gdeg = 0;
    std::vector<CVector> cols;
    for (auto& g : generators) {
        if (g.dim() != d) throw InputError("generator has wrong number of variables");
        if (g.is_zero()) continue;
        gdeg = std::max(gdeg, g.degree());
        const int room = D - g.degree();
        if (room < 0) continue;
        for (const auto& q : enumerate(d, room)) cols.push_back((Polynomial::monomial(q) * g).to_vector(I.index_));
    }
    for (auto& g : generators)
        if (!g.is_zero()) I.generators_.push_back(g);
    I.gen_degree_ = gdeg;
    CMatrix M(I.index_.size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) M.col(static_cast<Eigen::Index>(k)) = cols[k];
    I.basis_ = cols.empty() ? CMatrix(I.index_.size(), 0) : rank_split(M, 1e-9, true).range;
    return I;
}

PolyIdeal PolyIdeal::from_slice(int d, int D, const CMatrix& basis, int gen_degree) {
    PolyIdeal I;
    I.d_ = d;
    I.D_ = D;
    I.gen_degree_ = gen_degree;
    I.index_ = MonomialIndex(d, D);
    if (basis.rows() != I.index_.size()) throw InputError("slice basis has wrong row count");
    I.basis_ = basis.cols() ? rank_split(basis, 1e-9, true).range : CMatrix(basis.rows(), 0);
    return I;
}

double PolyIdeal::membership_residual(const Polynomial& p) const {
    if (p.degree() > D_) throw InputError("membership test above the degree bound");
    const CVector v = p.to_vector(index_);
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    const CVector r = v - basis_ * (basis_.adjoint() * v);
    return r.norm() / nv;
}

bool PolyIdeal::contains(const Polynomial& p, double tol) const {
    return membership_residual(p) < tol;
}

bool PolyIdeal::contains_slice(const PolyIdeal& other, double tol) const {
    if (other.d_ != d_ || other.D_ != D_) throw InputError("slices with different shapes");
    if (other.basis_.cols() == 0) return true;
    const CMatrix r = other.basis_ - basis_ * (basis_.adjoint() * other.basis_);
    return operator_norm(r) < tol;
}

bool PolyIdeal::same_slice(const PolyIdeal& other, double tol) const {
    if (other.d_ != d_ || other.D_ != D_) return false;
    return subspace_distance(basis_, other.basis_) < tol;
}

std::vector<Polynomial> PolyIdeal::basis_polynomials(double drop_below) const {
    std::vector<Polynomial> out;
    for (Eigen::Index k = 0; k < basis_.cols(); ++k)
        out.push_back(Polynomial::from_vector(d_, index_, basis_.col(k), drop_below));
    return out;
}

PolyIdeal PolyIdeal::resliced(int D) const {
    if (generators_.empty()) throw InputError("cannot reslice an ideal known only by its slice");
    return from_generators(d_, generators_, D);
}

bool LocalJetIdeal::contains(const CVector& j, double tol) const {
    const double nj = j.norm();
    if (nj == 0.0) return true;
    const CVector r = j - basis * (basis.adjoint() * j);
    return r.norm() / nj < tol;
}

bool LocalJetIdeal::operator==(const LocalJetIdeal& other) const {
    if (order != other.order || jet_dim() != other.jet_dim()) return false;
    for (std::size_t j = 0; j < z.size(); ++j)
        if (std::abs(z[j] - other.z[j]) > 1e-12) return false;
    return subspace_distance(basis, other.basis) < 1e-7;
}

CMatrix jet_map(int d, int D, const Point& z, int order) {
    if (static_cast<int>(z.size()) != d) throw InputError("jet point has wrong dimension");
    const auto rows = enumerate(d, order - 1);
    const auto cols = enumerate(d, D);
    CMatrix J = CMatrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const MultiIndex& g = cols[c];
            const MultiIndex& b = rows[r];
            if (!g.dominates(b)) continue;
            double w = 1.0;
            for (int j = 0; j < d; ++j) w *= binomial(g[j], b[j]);
            J(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = w * power(z, g - b);
        }
    }
    return J;
}

CVector jet(const Polynomial& p, const Point& z, int order) {
    const auto rows = enumerate(p.dim(), order - 1);
    CVector v = CVector::Zero(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const MultiIndex& b = rows[r];
        cplx s = 0.0;
        for (const auto& [g, c] : p.terms()) {
            if (!g.dominates(b)) continue;
            double w = 1.0;
            for (int j = 0; j < p.dim(); ++j) w *= binomial(g[j], b[j]);
            s += c * w * power(z, g - b);
        }
        v(static_cast<Eigen::Index>(r)) = s;
    }
    return v;
}

std::vector<Polynomial> maximal_ideal_power(const Point& z, int k) {
    std::vector<Polynomial> out;
    for (const auto& b : enumerate_homogeneous(static_cast<int>(z.size()), k))
        out.push_back(Polynomial::shifted_monomial(b, z));
    return out;
}

PolyIdeal vanishing_ideal_slice(const std::vector<Point>& points, int kappa, int D) {
    if (points.empty()) throw InputError("vanishing ideal of an empty point set");
    if (kappa < 0) throw InputError("negative vanishing order");
    const int d = static_cast<int>(points.front().size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (static_cast<int>(points[i].size()) != d) throw InputError("points of mixed dimension");
        require_in_ball(points[i], "vanishing_ideal_slice");
        for (std::size_t k = 0; k < i; ++k) {
            double dist = 0.0;
            for (int j = 0; j < d; ++j) dist += std::norm(points[i][static_cast<std::size_t>(j)] - points[k][static_cast<std::size_t>(j)]);
            if (std::sqrt(dist) < 1e-12) throw InputError("vanishing_ideal_slice: duplicate points");
        }
    }
    const int rows_per = static_cast<int>(binomial(d + kappa, d));
    const int ncols = static_cast<int>(binomial(d + D, d));
    CMatrix A(rows_per * static_cast<int>(points.size()), ncols);
    for (std::size_t i = 0; i < points.size(); ++i)
        A.middleRows(static_cast<Eigen::Index>(i) * rows_per, rows_per) = jet_map(d, D, points[i], kappa + 1);
    const CMatrix K = rank_split(A, 1e-9, true).kernel;
    // Gröbner-degree bound: a codimension-c ideal is generated in degree <= c.
    const int codim = rows_per * static_cast<int>(points.size());
    return PolyIdeal::from_slice(d, D, K, codim);
}

LocalJetIdeal localize(const PolyIdeal& I, const Point& z, int order) {
    if (order < 1) throw InputError("localize: jet order must be positive");
    if (static_cast<int>(z.size()) != I.dim()) throw InputError("localize: point has wrong dimension");
    if (order > I.degree_bound() - I.gen_degree() + 1) {
        std::ostringstream os;
        os << "localize: jet order " << order << " exceeds what degree bound " << I.degree_bound()
           << " supports (generator degree " << I.gen_degree() << ")";
        throw InputError(os.str());
    }
    const CMatrix JM = jet_map(I.dim(), I.degree_bound(), z, order);
    const CMatrix M = JM * I.slice_basis();
    // absolute floor: jets of slice elements vanishing at z are pure roundoff
    const double floor = 1e-11 * std::max(1.0, operator_norm(JM));
    LocalJetIdeal J;
    J.z = z;
    J.order = order;
    J.basis = M.cols() ? rank_split(M, 1e-9, true, floor).range : CMatrix(M.rows(), 0);
    return J;
}

LocalJetIdeal local_ideal_from_generators(const std::vector<Polynomial>& generators,
                                          const Point& z, int order) {
    const int d = static_cast<int>(z.size());
    const auto rows = enumerate(d, order - 1);
    const MonomialIndex idx(rows);
    std::vector<CVector> cols;
    double scale = 1.0;
    for (const auto& g : generators) {
        if (g.dim() != d) throw InputError("local generator has wrong number of variables");
        for (const auto& [a, c] : g.terms()) scale = std::max(scale, std::abs(c) * std::pow(1.0 + point_norm(z), a.degree()));
        const CVector jg = jet(g, z, order);
        // multiplying by (x - z)^delta shifts Taylor coordinates by delta
        for (const auto& delta : rows) {
            CVector c = CVector::Zero(idx.size());
            for (int r = 0; r < idx.size(); ++r) {
                const int k = idx.find(idx.at(r) + delta);
                if (k >= 0) c(k) = jg(r);
            }
            if (c.norm() > 0.0) cols.push_back(c);
        }
    }
    LocalJetIdeal J;
    J.z = z;
    J.order = order;
    if (cols.empty()) {
        J.basis = CMatrix(idx.size(), 0);
        return J;
    }
    CMatrix M(idx.size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) M.col(static_cast<Eigen::Index>(k)) = cols[k];
    J.basis = rank_split(M, 1e-9, true, 1e-11 * scale).range;
    return J;
}

namespace {

void require_isolated_zero(const PolyIdeal& I, const Point& z) {
    const auto polys = I.has_generators() ? I.generators() : I.basis_polynomials();
    if (polys.empty()) throw InputError("polynomial_order: zero ideal has no isolated zeros");
    for (const auto& p : polys) {
        double scale = 0.0;
        for (const auto& [a, c] : p.terms()) scale += std::abs(c);
        if (std::abs(p(z)) > 1e-9 * std::max(1.0, scale))
            throw InputError("polynomial_order: point is not in the zero set of the ideal");
    }
    // Mesh around z: some generator must be nonzero at every mesh point.
    const int d = I.dim();
    std::vector<Point> dirs;
    for (int j = 0; j < d; ++j) {
        for (cplx u : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
            Point v(static_cast<std::size_t>(d), 0.0);
            v[static_cast<std::size_t>(j)] = u;
            dirs.push_back(v);
        }
        for (int k = j + 1; k < d; ++k) {
            for (cplx u : {cplx(1, 0), cplx(-1, 0), cplx(0, 1)}) {
                Point v(static_cast<std::size_t>(d), 0.0);
                v[static_cast<std::size_t>(j)] = std::sqrt(0.5);
                v[static_cast<std::size_t>(k)] = u * std::sqrt(0.5);
                dirs.push_back(v);
            }
        }
    }
    // A direction along which every radius is a common zero indicates a zero curve; a single
    // vanishing radius is just another isolated zero.
    const double room = 1.0 - point_norm(z);
    for (const auto& u : dirs) {
        bool all_zero = true;
        for (double r : {0.5 * room, 0.1 * room, 0.01 * room}) {
            Point w = z;
            for (int j = 0; j < d; ++j) w[static_cast<std::size_t>(j)] += r * u[static_cast<std::size_t>(j)];
            double best = 0.0;
            for (const auto& p : polys) best = std::max(best, std::abs(p(w)));
            all_zero = all_zero && best < 1e-13;
        }
        if (all_zero) throw InputError("polynomial_order: zero is not isolated on the mesh");
    }
}

}  // namespace

int polynomial_order(const PolyIdeal& I, const Point& z, int max_kappa) {
    require_in_ball(z, "polynomial_order");
    require_isolated_zero(I, z);
    const int d = I.dim();
    for (int kappa = 0; kappa <= max_kappa; ++kappa) {
        const int mu = kappa + 2;
        PolyIdeal work = I;
        if (mu > I.degree_bound() - I.gen_degree() + 1) {
            if (!I.has_generators()) break;
            work = I.resliced(I.gen_degree() + mu - 1);
        }
        const LocalJetIdeal J = localize(work, z, mu);
        const MonomialIndex idx(d, mu - 1);
        bool all_in = true;
        for (const auto& b : enumerate_homogeneous(d, kappa + 1)) {
            CVector e = CVector::Zero(idx.size());
            e(idx.find(b)) = 1.0;
            if (!J.contains(e)) {
                all_in = false;
                break;
            }
        }
        if (all_in) return kappa;
    }
    throw NumericalError("polynomial_order: order exceeds bound");
}

PolyIdeal pullback(const LocalJetIdeal& J, int D) {
    const int d = static_cast<int>(J.z.size());
    const CMatrix M = jet_map(d, D, J.z, J.order);
    const CMatrix P = CMatrix::Identity(M.rows(), M.rows()) - J.basis * J.basis.adjoint();
    const CMatrix K = rank_split(P * M, 1e-9, true).kernel;
    // generated by lifts of the jet basis (degree < mu) and m_z^mu
    return PolyIdeal::from_slice(d, D, K, J.order);
}

}  // namespace dakit
