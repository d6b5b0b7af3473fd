#include "dakit/spectral.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "dakit/errors.hpp"

namespace dakit {

namespace {

bool point_less(const Point& a, const Point& b) {
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j].real() != b[j].real()) return a[j].real() < b[j].real();
        if (a[j].imag() != b[j].imag()) return a[j].imag() < b[j].imag();
    }
    return false;
}

double point_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a[j] - b[j]);
    return std::sqrt(s);
}

/// Single-linkage clustering of complex numbers.
std::vector<int> cluster_values(const std::vector<cplx>& v, double tol) {
    const int n = static_cast<int>(v.size());
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            if (std::abs(v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(k)]) <= tol)
                parent[static_cast<std::size_t>(find(i))] = find(k);
    std::vector<int> label(static_cast<std::size_t>(n), -1), root_label(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (root_label[static_cast<std::size_t>(r)] < 0) root_label[static_cast<std::size_t>(r)] = next++;
        label[static_cast<std::size_t>(i)] = root_label[static_cast<std::size_t>(r)];
    }
    return label;
}

/// Reorders the Schur form U = Q^* A Q so that diagonal entries appear in increasing rank
/// of their labels; only entries with different labels are swapped.
void reorder_schur(CMatrix& U, CMatrix& Q, std::vector<int>& labels, const std::vector<int>& rank) {
    const int n = static_cast<int>(U.rows());
    bool swapped = true;
    while (swapped) {
        swapped = false;
        for (int k = 0; k + 1 < n; ++k) {
            if (rank[static_cast<std::size_t>(labels[static_cast<std::size_t>(k)])] <=
                rank[static_cast<std::size_t>(labels[static_cast<std::size_t>(k + 1)])])
                continue;
            const cplx a = U(k, k), b = U(k, k + 1), c = U(k + 1, k + 1);
            cplx x1 = b, x2 = c - a;
            const double nx = std::sqrt(std::norm(x1) + std::norm(x2));
            x1 /= nx;
            x2 /= nx;
            Eigen::Matrix2cd G;
            G << x1, -std::conj(x2), x2, std::conj(x1);
            U.middleCols(k, 2) = U.middleCols(k, 2) * G;
            U.middleRows(k, 2) = G.adjoint() * U.middleRows(k, 2);
            Q.middleCols(k, 2) = Q.middleCols(k, 2) * G;
            U(k + 1, k) = 0.0;
            std::swap(labels[static_cast<std::size_t>(k)], labels[static_cast<std::size_t>(k + 1)]);
            swapped = true;
        }
    }
}

/// Unitary V with V^* N_j V strictly upper triangular for a (numerically) commuting
/// nilpotent family: common kernel first, then recurse on its complement.
CMatrix joint_flag(const std::vector<CMatrix>& N, double thr) {
    const auto m = N.front().rows();
    if (m == 0) return CMatrix(0, 0);
    if (m == 1) return CMatrix::Identity(1, 1);
    CMatrix stacked(static_cast<Eigen::Index>(N.size()) * m, m);
    for (std::size_t j = 0; j < N.size(); ++j) stacked.middleRows(static_cast<Eigen::Index>(j) * m, m) = N[j];
    Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    Eigen::Index k = 0;
    while (k < m && s(m - 1 - k) <= thr) ++k;
    if (k == 0) k = 1;
    const CMatrix V = svd.matrixV();
    const CMatrix K = V.rightCols(k);
    const CMatrix C = V.leftCols(m - k);
    CMatrix out(m, m);
    out.leftCols(k) = K;
    if (m - k > 0) {
        std::vector<CMatrix> sub;
        for (const auto& n : N) sub.push_back(C.adjoint() * n * C);
        out.rightCols(m - k) = C * joint_flag(sub, thr);
    }
    return out;
}

/// Solves U1 X - X U2 = C for upper-triangular U1, U2 with disjoint spectra.
CMatrix triangular_sylvester(const CMatrix& U1, const CMatrix& U2, const CMatrix& C) {
    const auto p = U1.rows(), q = U2.rows();
    CMatrix X(p, q);
    for (Eigen::Index c = 0; c < q; ++c) {
        CVector rhs = C.col(c);
        for (Eigen::Index r = 0; r < c; ++r) rhs += X.col(r) * U2(r, c);
        CMatrix M = U1;
        M.diagonal().array() -= U2(c, c);
        X.col(c) = M.triangularView<Eigen::Upper>().solve(rhs);
    }
    return X;
}

struct Attempt {
    bool ok = false;
    std::string why;
    JointSpectrum spec;
};

Attempt attempt(const CommutingTuple& T, double tol, std::mt19937_64& rng) {
    Attempt out;
    JointSpectrum& sp = out.spec;
    const int n = T.size();
    const int d = T.dim();
    sp.cluster_tol = tol;
    std::normal_distribution<double> normal;
    std::vector<double> c(static_cast<std::size_t>(d));
    double cn = 0.0;
    for (auto& v : c) {
        v = normal(rng);
        cn += v * v;
    }
    for (auto& v : c) v /= std::sqrt(cn);
    sp.combination = c;
    CMatrix A = CMatrix::Zero(n, n);
    for (int j = 0; j < d; ++j) A += c[static_cast<std::size_t>(j)] * T[j];
    auto sf = schur(A);
    CMatrix U = sf.U, Q = sf.Q;
    std::vector<cplx> diag(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = U(i, i);
    std::vector<int> labels = cluster_values(diag, tol);
    int nclusters = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;

    // Pass 1: contiguous clusters in label order; read joint points from block traces.
    std::vector<int> identity_rank(static_cast<std::size_t>(nclusters));
    std::iota(identity_rank.begin(), identity_rank.end(), 0);
    reorder_schur(U, Q, labels, identity_rank);

    auto block_points = [&](const std::vector<int>& lab, int ncl) {
        std::vector<Point> pts(static_cast<std::size_t>(ncl), Point(static_cast<std::size_t>(d), 0.0));
        std::vector<int> count(static_cast<std::size_t>(ncl), 0);
        for (int j = 0; j < d; ++j) {
            const CMatrix Tj = Q.adjoint() * T[j] * Q;
            for (int i = 0; i < n; ++i) pts[static_cast<std::size_t>(lab[static_cast<std::size_t>(i)])][static_cast<std::size_t>(j)] += Tj(i, i);
        }
        for (int i = 0; i < n; ++i) ++count[static_cast<std::size_t>(lab[static_cast<std::size_t>(i)])];
        for (int k = 0; k < ncl; ++k)
            for (auto& v : pts[static_cast<std::size_t>(k)]) v /= static_cast<double>(count[static_cast<std::size_t>(k)]);
        return std::make_pair(pts, count);
    };
    auto [pts, counts] = block_points(labels, nclusters);

    // Merge clusters whose joint points are within 2 tol.
    {
        std::vector<int> parent(static_cast<std::size_t>(nclusters));
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int i) {
            return parent[static_cast<std::size_t>(i)] == i ? i : parent[static_cast<std::size_t>(i)] = find(parent[static_cast<std::size_t>(i)]);
        };
        bool merged = false;
        for (int a = 0; a < nclusters; ++a)
            for (int b = a + 1; b < nclusters; ++b)
                if (point_distance(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)]) <= 2.0 * tol) {
                    parent[static_cast<std::size_t>(find(a))] = find(b);
                    merged = true;
                }
        if (merged) {
            std::vector<int> relabel(static_cast<std::size_t>(nclusters), -1);
            int next = 0;
            for (int a = 0; a < nclusters; ++a) {
                const int r = find(a);
                if (relabel[static_cast<std::size_t>(r)] < 0) relabel[static_cast<std::size_t>(r)] = next++;
                relabel[static_cast<std::size_t>(a)] = relabel[static_cast<std::size_t>(r)];
            }
            for (auto& l : labels) l = relabel[static_cast<std::size_t>(l)];
            nclusters = next;
            std::vector<int> r2(static_cast<std::size_t>(nclusters));
            std::iota(r2.begin(), r2.end(), 0);
            reorder_schur(U, Q, labels, r2);
            std::tie(pts, counts) = block_points(labels, nclusters);
        }
    }

    // Pass 2: lexicographic order of joint points.
    std::vector<int> order(static_cast<std::size_t>(nclusters));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return point_less(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)]); });
    std::vector<int> rank(static_cast<std::size_t>(nclusters));
    for (int k = 0; k < nclusters; ++k) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
    reorder_schur(U, Q, labels, rank);

    // Joint triangularization inside each cluster block.
    double tnorm = 0.0;
    std::vector<double> norms(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        norms[static_cast<std::size_t>(j)] = operator_norm(T[j]);
        tnorm = std::max(tnorm, norms[static_cast<std::size_t>(j)]);
    }
    const double thr = 1e-8 * std::max(1.0, tnorm);
    int offset = 0;
    for (int k = 0; k < nclusters; ++k) {
        const int cl = order[static_cast<std::size_t>(k)];
        const int m = counts[static_cast<std::size_t>(cl)];
        SpectralCluster sc{pts[static_cast<std::size_t>(cl)], m, offset};
        if (m > 1) {
            std::vector<CMatrix> Nb;
            const CMatrix Qb = Q.middleCols(offset, m);
            for (int j = 0; j < d; ++j) {
                CMatrix B = Qb.adjoint() * T[j] * Qb;
                B.diagonal().array() -= sc.z[static_cast<std::size_t>(j)];
                Nb.push_back(B);
            }
            Q.middleCols(offset, m) = Qb * joint_flag(Nb, thr);
        }
        sp.clusters.push_back(sc);
        offset += m;
    }
    sp.Q = Q;
    sp.eigenvalues.assign(static_cast<std::size_t>(n), Point(static_cast<std::size_t>(d)));
    sp.triangularity_defect = 0.0;
    for (int j = 0; j < d; ++j) {
        CMatrix Tj = Q.adjoint() * T[j] * Q;
        CMatrix lower = Tj.triangularView<Eigen::StrictlyLower>();
        const double def = operator_norm(lower) / std::max(norms[static_cast<std::size_t>(j)], 1e-300);
        if (norms[static_cast<std::size_t>(j)] > 0.0) sp.triangularity_defect = std::max(sp.triangularity_defect, def);
        for (int i = 0; i < n; ++i) sp.eigenvalues[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Tj(i, i);
        sp.triangular.push_back(std::move(Tj));
    }
    if (sp.triangularity_defect > 1e-7) {
        std::ostringstream os;
        os << "triangularity defect " << sp.triangularity_defect;
        out.why = os.str();
        return out;
    }
    // Cluster coherence: members near their point, points well apart.
    for (const auto& sc : sp.clusters)
        for (int i = sc.offset; i < sc.offset + sc.multiplicity; ++i)
            if (point_distance(sp.eigenvalues[static_cast<std::size_t>(i)], sc.z) > tol) {
                out.why = "cluster member away from its point";
                return out;
            }
    out.ok = true;
    return out;
}

}  // namespace

int JointSpectrum::nearest(const Point& z) const {
    int best = -1;
    double bd = 0.0;
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        const double dd = point_distance(clusters[k].z, z);
        if (best < 0 || dd < bd) {
            best = static_cast<int>(k);
            bd = dd;
        }
    }
    return best;
}

JointSpectrum joint_eigenvalues(const CommutingTuple& T, double cluster_tol, std::uint64_t seed) {
    if (T.size() == 0) throw InputError("joint_eigenvalues: empty tuple");
    if (!(cluster_tol > 0.0)) throw InputError("joint_eigenvalues: cluster tolerance must be positive");
    std::mt19937_64 rng(seed);
    std::string why;
    for (int k = 1; k <= 5; ++k) {
        Attempt a = attempt(T, cluster_tol, rng);
        if (a.ok) {
            a.spec.attempts = k;
            return a.spec;
        }
        why = a.why;
    }
    std::ostringstream os;
    os << "simultaneous triangularization failed after 5 attempts (" << why
       << "; commutator defect " << T.commutator_defect << ")";
    throw NumericalError(os.str());
}

namespace {

/// Block upper unitriangular W with W^{-1} U W block diagonal over the cluster ranges.
std::pair<CMatrix, CMatrix> block_diagonalizer(const CMatrix& U, const JointSpectrum& sp) {
    const auto n = U.rows();
    const auto& cl = sp.clusters;
    const int k = static_cast<int>(cl.size());
    CMatrix W = CMatrix::Identity(n, n);
    for (int j = 1; j < k; ++j) {
        const int oj = cl[static_cast<std::size_t>(j)].offset, mj = cl[static_cast<std::size_t>(j)].multiplicity;
        const CMatrix Ujj = U.block(oj, oj, mj, mj);
        for (int i = j - 1; i >= 0; --i) {
            const int oi = cl[static_cast<std::size_t>(i)].offset, mi = cl[static_cast<std::size_t>(i)].multiplicity;
            CMatrix rhs = -U.block(oi, oj, mi, mj);
            for (int m = i + 1; m < j; ++m) {
                const int om = cl[static_cast<std::size_t>(m)].offset, mm = cl[static_cast<std::size_t>(m)].multiplicity;
                rhs -= U.block(oi, om, mi, mm) * W.block(om, oj, mm, mj);
            }
            W.block(oi, oj, mi, mj) = triangular_sylvester(U.block(oi, oi, mi, mi), Ujj, rhs);
        }
    }
    CMatrix Winv = W.triangularView<Eigen::UnitUpper>().solve(CMatrix::Identity(n, n));
    return {W, Winv};
}

CMatrix combined(const CommutingTuple& T, const JointSpectrum& sp) {
    CMatrix U = CMatrix::Zero(T.size(), T.size());
    for (int j = 0; j < T.dim(); ++j) U += sp.combination[static_cast<std::size_t>(j)] * sp.triangular[static_cast<std::size_t>(j)];
    U.triangularView<Eigen::StrictlyLower>().setZero();
    return U;
}

void require_distinct_combined(const JointSpectrum& sp) {
    for (std::size_t a = 0; a < sp.clusters.size(); ++a)
        for (std::size_t b = a + 1; b < sp.clusters.size(); ++b) {
            cplx da = 0.0;
            for (std::size_t j = 0; j < sp.combination.size(); ++j)
                da += sp.combination[j] * (sp.clusters[a].z[j] - sp.clusters[b].z[j]);
            if (std::abs(da) <= sp.cluster_tol)
                throw NumericalError("riesz_idempotent: combined eigenvalues not distinct; rerun with another seed");
        }
}

}  // namespace

std::vector<CMatrix> riesz_idempotents(const CommutingTuple& T, const JointSpectrum& sp) {
    require_distinct_combined(sp);
    const CMatrix U = combined(T, sp);
    const auto [W, Winv] = block_diagonalizer(U, sp);
    std::vector<CMatrix> out;
    for (const auto& c : sp.clusters) {
        CMatrix P = sp.Q * W.middleCols(c.offset, c.multiplicity) *
                    Winv.middleRows(c.offset, c.multiplicity) * sp.Q.adjoint();
        if (!(operator_norm(P) <= 1e12))
            throw NumericalError("riesz_idempotent: idempotent norm above 1e12; tighten the clustering");
        out.push_back(std::move(P));
    }
    return out;
}

CMatrix riesz_idempotent(const CommutingTuple& T, int cluster, const JointSpectrum& sp) {
    if (cluster < 0 || cluster >= static_cast<int>(sp.clusters.size()))
        throw InputError("riesz_idempotent: no such cluster");
    return riesz_idempotents(T, sp)[static_cast<std::size_t>(cluster)];
}

CMatrix JordanDecomposition::block_diagonal(int j) const {
    int n = 0;
    for (const auto& b : blocks) n += b.size;
    CMatrix M = CMatrix::Zero(n, n);
    int off = 0;
    for (const auto& b : blocks) {
        M.block(off, off, b.size, b.size) = b.nilpotent[static_cast<std::size_t>(j)];
        M.block(off, off, b.size, b.size).diagonal().array() += b.z[static_cast<std::size_t>(j)];
        off += b.size;
    }
    return M;
}

namespace {

/// Orthonormal basis of ran P built from pivot columns, pivots sorted ascending.
CMatrix pivoted_range(const CMatrix& P, int m, std::vector<int>& pivots) {
    const auto n = P.rows();
    CMatrix R = P;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    pivots.clear();
    for (int it = 0; it < m; ++it) {
        int best = -1;
        double bn = -1.0;
        for (Eigen::Index c = 0; c < n; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            const double cn = R.col(c).norm();
            if (cn > bn) {
                bn = cn;
                best = static_cast<int>(c);
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        pivots.push_back(best);
        const CVector q = R.col(best) / bn;
        R -= q * (q.adjoint() * R);
    }
    std::sort(pivots.begin(), pivots.end());
    CMatrix B(n, m);
    for (int k = 0; k < m; ++k) {
        CVector v = P.col(pivots[static_cast<std::size_t>(k)]);
        for (int pass = 0; pass < 2; ++pass)
            if (k > 0) v -= B.leftCols(k) * (B.leftCols(k).adjoint() * v);
        B.col(k) = v / v.norm();
    }
    return B;
}

}  // namespace

JordanDecomposition jordan_decompose(const CommutingTuple& T, double cluster_tol, std::uint64_t seed,
                                     double residual_tol) {
    JordanDecomposition out;
    out.spectrum = joint_eigenvalues(T, cluster_tol, seed);
    const auto& sp = out.spectrum;
    const int n = T.size();
    const int d = T.dim();
    const auto Qs = riesz_idempotents(T, sp);
    const CMatrix I = CMatrix::Identity(n, n);

    CMatrix sum = CMatrix::Zero(n, n), S = CMatrix::Zero(n, n);
    for (std::size_t a = 0; a < Qs.size(); ++a) {
        sum += Qs[a];
        S += Qs[a].adjoint() * Qs[a];
        for (std::size_t b = 0; b < Qs.size(); ++b) {
            const CMatrix prod = Qs[a] * Qs[b] - (a == b ? Qs[a] : CMatrix::Zero(n, n));
            out.idempotent_product_defect = std::max(out.idempotent_product_defect, operator_norm(prod));
        }
    }
    out.idempotent_sum_defect = operator_norm(sum - I);
    S = 0.5 * (S + S.adjoint());
    const CMatrix Y = sqrt_pd(S);
    const CMatrix Yinv = inv_sqrt(S);
    out.orthogonalizer_norm = operator_norm(Y);

    CMatrix Wb(n, n);
    int off = 0;
    for (std::size_t k = 0; k < Qs.size(); ++k) {
        CMatrix P = Y * Qs[k] * Yinv;
        P = 0.5 * (P + P.adjoint());
        JordanBlock blk;
        blk.z = sp.clusters[k].z;
        blk.size = sp.clusters[k].multiplicity;
        Wb.middleCols(off, blk.size) = pivoted_range(P, blk.size, blk.pivots);
        out.blocks.push_back(std::move(blk));
        off += out.blocks.back().size;
    }
    out.X = Wb.adjoint() * Y;
    out.Xinv = Yinv * Wb;
    out.norm_X = operator_norm(out.X);
    out.norm_Xinv = operator_norm(out.Xinv);
    out.cond = out.norm_X * out.norm_Xinv;

    const double tnorm = T.norm();
    for (int j = 0; j < d; ++j) {
        const CMatrix M = out.X * T[j] * out.Xinv;
        off = 0;
        for (auto& blk : out.blocks) {
            CMatrix B = M.block(off, off, blk.size, blk.size);
            B.diagonal().array() -= blk.z[static_cast<std::size_t>(j)];
            blk.nilpotent.push_back(B);
            off += blk.size;
        }
        out.residual = std::max(out.residual, operator_norm(M - out.block_diagonal(j)));
    }
    for (const auto& blk : out.blocks) {
        const double scale = std::max(1.0, std::pow(tnorm, blk.size));
        for (const auto& N : blk.nilpotent) {
            CMatrix P = CMatrix::Identity(blk.size, blk.size);
            for (int k = 0; k < blk.size; ++k) P = P * N;
            out.nilpotency_defect = std::max(out.nilpotency_defect, operator_norm(P) / scale);
        }
    }
    if (out.residual > residual_tol * std::max(tnorm, 1e-300) && tnorm > 0.0) {
        std::ostringstream os;
        os << "jordan_decompose: residual " << out.residual << " above tolerance";
        throw NumericalError(os.str());
    }
    return out;
}

}  // namespace dakit
