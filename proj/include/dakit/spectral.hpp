#pragma once

#include <cstdint>
#include <vector>

#include "dakit/fockspace.hpp"
#include "dakit/numerics.hpp"
#include "dakit/tuples.hpp"

namespace dakit {

struct SpectralCluster {
    Point z;
    int multiplicity = 0;
    int offset = 0;  // first position in the simultaneous triangular form
};

/// Joint eigenvalues of a commuting tuple together with the simultaneous triangular form
/// they were read from. Clusters are sorted lexicographically by point and occupy
/// contiguous diagonal ranges of the triangular form.
struct JointSpectrum {
    std::vector<SpectralCluster> clusters;
    double cluster_tol = 1e-6;
    std::vector<double> combination;  // real weights c of A = sum c_j T_j, unit norm
    CMatrix Q;                        // unitary; Q^* T_j Q upper triangular
    std::vector<CMatrix> triangular;  // Q^* T_j Q
    std::vector<Point> eigenvalues;   // per diagonal position
    double triangularity_defect = 0.0;  // max_j ||strict lower part|| / ||T_j||
    int attempts = 0;

    int size() const { return static_cast<int>(Q.rows()); }
    /// Index of the cluster nearest to z.
    int nearest(const Point& z) const;
};

JointSpectrum joint_eigenvalues(const CommutingTuple& T, double cluster_tol = 1e-6,
                                std::uint64_t seed = 0);

/// Spectral idempotent for one cluster: q(A) for the Hermite interpolant q of the cluster
/// indicator, evaluated through the block triangular form.
CMatrix riesz_idempotent(const CommutingTuple& T, int cluster, const JointSpectrum& spectrum);
std::vector<CMatrix> riesz_idempotents(const CommutingTuple& T, const JointSpectrum& spectrum);

struct JordanBlock {
    Point z;
    int size = 0;
    std::vector<CMatrix> nilpotent;  // N_j = block_j - z_j I
    std::vector<int> pivots;         // coordinates whose projections span the block
};

struct JordanDecomposition {
    std::vector<JordanBlock> blocks;
    CMatrix X;     // X T_j X^{-1} = block diagonal
    CMatrix Xinv;
    double norm_X = 0.0;
    double norm_Xinv = 0.0;
    double cond = 0.0;
    double residual = 0.0;             // max_j ||X T_j X^{-1} - blocks_j||
    double idempotent_sum_defect = 0.0;      // ||sum Q_z - I||
    double idempotent_product_defect = 0.0;  // max ||Q_z Q_w - delta Q_z||
    double nilpotency_defect = 0.0;    // max ||N_j^{size}|| / max(1, ||T||^{size})
    double orthogonalizer_norm = 0.0;  // ||S^{1/2}||, S = sum Q_z^* Q_z
    JointSpectrum spectrum;

    /// Direct sum of z I + N over blocks, coordinate j.
    CMatrix block_diagonal(int j) const;
};

/// Throws NumericalError when the residual exceeds residual_tol * max_j ||T_j||.
JordanDecomposition jordan_decompose(const CommutingTuple& T, double cluster_tol = 1e-6,
                                     std::uint64_t seed = 0, double residual_tol = 1e-7);

}  // namespace dakit
