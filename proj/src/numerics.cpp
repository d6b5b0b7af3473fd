#include "dakit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dakit/errors.hpp"

namespace dakit {

namespace {

void require_square(const CMatrix& A, const char* what) {
    if (A.rows() != A.cols()) {
        std::ostringstream os;
        os << what << ": non-square input " << A.rows() << "x" << A.cols();
        throw InputError(os.str());
    }
}

}  // namespace

void require_finite(const CMatrix& A, const char* what) {
    if (!A.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

double hermitian_defect(const CMatrix& A) {
    if (A.size() == 0) return 0.0;
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    return (A - A.adjoint()).cwiseAbs().maxCoeff() / scale;
}

HermitianEig hermitian_eig(const CMatrix& A) {
    require_square(A, "hermitian_eig");
    require_finite(A, "hermitian_eig");
    if (hermitian_defect(A) > 1e-10) throw InputError("hermitian_eig: input is not Hermitian");
    const CMatrix H = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("hermitian_eig: solver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

double lambda_max(const CMatrix& A) {
    if (A.size() == 0) return 0.0;
    const CMatrix H = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double lambda_min(const CMatrix& A) {
    if (A.size() == 0) return 0.0;
    const CMatrix H = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

SchurForm schur(const CMatrix& A) {
    require_square(A, "schur");
    require_finite(A, "schur");
    if (A.rows() == 0) return {CMatrix(0, 0), CMatrix(0, 0)};
    Eigen::ComplexSchur<CMatrix> cs(A);
    if (cs.info() != Eigen::Success) throw NumericalError("schur: QR iteration did not converge");
    CMatrix U = cs.matrixT();
    U.triangularView<Eigen::StrictlyLower>().setZero();
    return {cs.matrixU(), U};
}

RVector singular_values(const CMatrix& A) {
    if (A.size() == 0) return RVector(0);
    require_finite(A, "singular_values");
    if (A.rows() > 2 * A.cols()) {
        Eigen::HouseholderQR<CMatrix> qr(A);
        const CMatrix R = qr.matrixQR().topRows(A.cols()).triangularView<Eigen::Upper>();
        return Eigen::JacobiSVD<CMatrix>(R).singularValues();
    }
    return Eigen::JacobiSVD<CMatrix>(A).singularValues();
}

double operator_norm(const CMatrix& A) {
    if (A.size() == 0) return 0.0;
    return singular_values(A)(0);
}

double condition_number(const CMatrix& A) {
    const RVector s = singular_values(A);
    if (s.size() == 0) return 1.0;
    const double smin = s(s.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

namespace {

HermitianEig checked_pd(const CMatrix& A, const char* what) {
    auto eig = hermitian_eig(A);
    const double lmax = eig.values.maxCoeff();
    const double lmin = eig.values.minCoeff();
    if (!(lmax > 0.0) || lmin <= 1e-12 * lmax) {
        std::ostringstream os;
        os.precision(6);
        os << what << ": matrix not positive definite (eigenvalue " << lmin << " vs max " << lmax
           << ")";
        throw NumericalError(os.str());
    }
    return eig;
}

}  // namespace

CMatrix inv_sqrt(const CMatrix& A) {
    const auto eig = checked_pd(A, "inv_sqrt");
    const RVector d = eig.values.cwiseSqrt().cwiseInverse();
    return eig.vectors * d.asDiagonal() * eig.vectors.adjoint();
}

CMatrix sqrt_pd(const CMatrix& A) {
    const auto eig = checked_pd(A, "sqrt_pd");
    return eig.vectors * eig.values.cwiseSqrt().asDiagonal() * eig.vectors.adjoint();
}

CMatrix solve(const CMatrix& A, const CMatrix& B) {
    require_square(A, "solve");
    if (A.rows() != B.rows()) throw InputError("solve: dimension mismatch");
    Eigen::FullPivLU<CMatrix> lu(A);
    lu.setThreshold(1e-14);
    if (!lu.isInvertible()) throw NumericalError("solve: matrix is singular");
    return lu.solve(B);
}

CMatrix inverse(const CMatrix& A) {
    return solve(A, CMatrix::Identity(A.rows(), A.rows()));
}

RankSplit rank_split(const CMatrix& A, double rel_tol, bool require_gap, double abs_floor) {
    const auto m = A.rows();
    const auto n = A.cols();
    RankSplit out;
    if (n == 0) {
        out.range = CMatrix(m, 0);
        out.kernel = CMatrix(0, 0);
        return out;
    }
    if (m == 0) {
        out.sigma = RVector(0);
        out.range = CMatrix(0, 0);
        out.kernel = CMatrix::Identity(n, n);
        return out;
    }
    // Tall inputs: compress through QR so the SVD sees an n x n factor. Wide inputs: the
    // same on A^*, so the SVD sees an m x m factor and the kernel keeps the QR complement.
    CMatrix work = A;
    CMatrix leftQ, rightQ;
    const bool tall = m > n, wide = n > m;
    if (tall) {
        Eigen::HouseholderQR<CMatrix> qr(A);
        work = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
        leftQ = qr.householderQ() * CMatrix::Identity(m, n);
    } else if (wide) {
        Eigen::HouseholderQR<CMatrix> qr(A.adjoint());
        work = CMatrix(qr.matrixQR().topRows(m).triangularView<Eigen::Upper>()).adjoint();
        rightQ = qr.householderQ() * CMatrix::Identity(n, n);
    }
    Eigen::JacobiSVD<CMatrix> svd(work, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.sigma = svd.singularValues();
    const double smax = out.sigma.size() ? out.sigma(0) : 0.0;
    const double cut = std::max(rel_tol * smax, abs_floor);
    int r = 0;
    while (r < out.sigma.size() && out.sigma(r) > cut && out.sigma(r) > 0.0) ++r;
    if (require_gap && r > 0 && r < out.sigma.size()) {
        const double dropped = out.sigma(r);
        if (dropped > 0.0 && out.sigma(r - 1) / dropped <= 1e6) {
            std::ostringstream os;
            os.precision(3);
            os << "ambiguous rank: singular values " << out.sigma(r - 1) << " and " << dropped
               << " straddle the cutoff without a 1e6 gap";
            throw NumericalError(os.str());
        }
    }
    out.rank = r;
    const CMatrix U = tall ? CMatrix(leftQ * svd.matrixU()) : CMatrix(svd.matrixU());
    out.range = U.leftCols(r);
    if (wide) {
        out.kernel.resize(n, n - r);
        out.kernel.leftCols(m - r) = rightQ.leftCols(m) * svd.matrixV().rightCols(m - r);
        out.kernel.rightCols(n - m) = rightQ.rightCols(n - m);
    } else {
        out.kernel = svd.matrixV().rightCols(n - r);
    }
    return out;
}

CMatrix nullspace(const CMatrix& A, double rel_tol) { return rank_split(A, rel_tol).kernel; }

CMatrix orthonormal_range(const CMatrix& A, double rel_tol) {
    return rank_split(A, rel_tol).range;
}

CMatrix orthogonal_complement(const CMatrix& B, int n) {
    if (B.cols() == 0) return CMatrix::Identity(n, n);
    return rank_split(B.adjoint(), 1e-9).kernel;
}

double subspace_distance(const CMatrix& A, const CMatrix& B) {
    if (A.cols() != B.cols()) return 1.0;
    if (A.cols() == 0) return 0.0;
    const CMatrix r1 = B - A * (A.adjoint() * B);
    const CMatrix r2 = A - B * (B.adjoint() * A);
    return std::max(operator_norm(r1), operator_norm(r2));
}

CVector vec(const CMatrix& A) {
    return Eigen::Map<const CVector>(A.data(), A.size());
}

}  // namespace dakit
