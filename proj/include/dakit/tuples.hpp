#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dakit/fockspace.hpp"
#include "dakit/multiindex.hpp"
#include "dakit/numerics.hpp"
#include "dakit/polyideal.hpp"
#include "dakit/polynomial.hpp"

namespace dakit {

/// d commuting n x n matrices with their validation defects.
struct CommutingTuple {
    std::vector<CMatrix> T;
    double commutator_defect = 0.0;  // max ||T_i T_j - T_j T_i||
    double row_defect = 0.0;         // max(0, lambda_max(sum T_j T_j^* - I))
    std::optional<CVector> cyclic_vector;

    int dim() const { return static_cast<int>(T.size()); }
    int size() const { return T.empty() ? 0 : static_cast<int>(T.front().rows()); }
    const CMatrix& operator[](int j) const { return T[static_cast<std::size_t>(j)]; }
    bool is_commuting(double tol = 1e-9) const { return commutator_defect <= tol; }
    bool is_row_contraction(double tol = 1e-9) const { return row_defect <= tol; }
    double norm() const;  // max_j ||T_j||
};

CommutingTuple validate(std::vector<CMatrix> matrices);

/// sum_j T_j T_j^*.
CMatrix row_gram(const CommutingTuple& T);

/// Memoized monomials T^alpha.
class PowerTable {
public:
    explicit PowerTable(const CommutingTuple& T) : T_(&T) {}
    const CMatrix& operator()(const MultiIndex& alpha);

private:
    const CommutingTuple* T_;
    std::map<MultiIndex, CMatrix> cache_;
};

CMatrix apply_poly(const Polynomial& p, const CommutingTuple& T);

struct KrylovResult {
    CMatrix basis;                // orthonormal basis of span{T^alpha xi}
    bool is_cyclic = false;
    std::vector<int> layer_dims;  // dims of span{T^alpha xi : |alpha| = l}, trailing zeros trimmed
    bool layers_direct = false;   // the layer sum is direct
};

KrylovResult krylov(const CommutingTuple& T, const CVector& xi, int max_degree);

/// {p : deg p <= D, p(T) = 0}, kernel of p -> vec(p(T)) with cutoff 1e-9 sigma_max.
PolyIdeal annihilator_slice(const CommutingTuple& T, int D);

/// Ball automorphism with Gamma_w(0) = w, an involution; Gamma_0 is the identity.
Point moebius_point(const Point& z, const Point& w);
/// Componentwise rational functional calculus of Gamma_w.
CommutingTuple moebius(const CommutingTuple& T, const Point& w);

}  // namespace dakit
