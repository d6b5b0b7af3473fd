#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace dakit {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

struct HermitianEig {
    RVector values;   // ascending
    CMatrix vectors;  // unitary, columns are eigenvectors
};

struct SchurForm {
    CMatrix Q;  // unitary
    CMatrix U;  // upper triangular, A = Q U Q*
};

/// Symmetrizes internally; rejects inputs that are not Hermitian to 1e-10 (relative).
HermitianEig hermitian_eig(const CMatrix& A);
SchurForm schur(const CMatrix& A);

double operator_norm(const CMatrix& A);
RVector singular_values(const CMatrix& A);
/// sigma_max / sigma_min; infinity for singular input.
double condition_number(const CMatrix& A);

/// A^{-1/2} for positive definite A (min eigenvalue > 1e-12 max eigenvalue).
CMatrix inv_sqrt(const CMatrix& A);
/// A^{1/2} under the same precondition.
CMatrix sqrt_pd(const CMatrix& A);
/// Solves A X = B for square invertible A.
CMatrix solve(const CMatrix& A, const CMatrix& B);
CMatrix inverse(const CMatrix& A);

/// Largest eigenvalue of a Hermitian matrix.
double lambda_max(const CMatrix& A);
double lambda_min(const CMatrix& A);

struct RankSplit {
    int rank = 0;
    RVector sigma;
    CMatrix range;   // orthonormal basis of the column space
    CMatrix kernel;  // orthonormal basis of the null space
};

/// SVD rank split with cutoff rel_tol * sigma_max (absolute floor abs_floor).
/// With require_gap, throws NumericalError unless the kept/dropped ratio exceeds 1e6.
RankSplit rank_split(const CMatrix& A, double rel_tol = 1e-9, bool require_gap = false,
                     double abs_floor = 0.0);

CMatrix nullspace(const CMatrix& A, double rel_tol = 1e-9);
CMatrix orthonormal_range(const CMatrix& A, double rel_tol = 1e-9);

/// Orthonormal basis of the orthogonal complement of span(cols of B) in C^n.
CMatrix orthogonal_complement(const CMatrix& B, int n);

/// Largest principal-angle sine between two subspaces given by orthonormal bases;
/// 1 when dimensions differ.
double subspace_distance(const CMatrix& A, const CMatrix& B);

/// Column-stacked vec(A).
CVector vec(const CMatrix& A);

/// Max |A - A*| entry relative to max(1, max |A|).
double hermitian_defect(const CMatrix& A);

/// Throws InputError on NaN or Inf entries.
void require_finite(const CMatrix& A, const char* what);

}  // namespace dakit
