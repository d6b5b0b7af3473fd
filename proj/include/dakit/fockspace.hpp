#pragma once

#include <vector>

#include "dakit/multiindex.hpp"
#include "dakit/numerics.hpp"
#include "dakit/polynomial.hpp"

namespace dakit {

using Point = std::vector<cplx>;

double point_norm(const Point& z);
/// <z, w> = sum z_j conj(w_j).
cplx inner(const Point& z, const Point& w);
/// Throws InputError unless ||z|| < 1.
void require_in_ball(const Point& z, const char* what);

/// Degree-bounded slice of the Drury-Arveson space in the orthonormalized monomial basis.
class FockTruncation {
public:
    FockTruncation(int d, int max_degree);

    int dim() const { return d_; }
    int max_degree() const { return D_; }
    int size() const { return index_.size(); }
    const MonomialIndex& index() const { return index_; }
    /// ||x^alpha|| for basis element i.
    double norm(int i) const { return norms_[static_cast<std::size_t>(i)]; }

    /// Orthonormal-basis coordinates of a polynomial of degree <= D.
    CVector coordinates(const Polynomial& p) const;
    Polynomial polynomial(const CVector& coords, double drop_below = 0.0) const;

    /// M_{x_j} applied to each column, truncated at degree D.
    CMatrix shift(int j, const CMatrix& V) const;
    /// M_{x_j}^* applied to each column.
    CMatrix backward_shift(int j, const CMatrix& V) const;

private:
    int d_;
    int D_;
    MonomialIndex index_;
    std::vector<double> norms_;
    std::vector<std::vector<int>> up_;  // up_[j][i] = index of alpha_i + e_j or -1
};

/// Smallest D with rho^{2(D+1)}/(1-rho^2) < 1e-14.
int choose_truncation(double rho);

/// Rigorous bound on the norm of the discarded part of a derivative kernel of order m at a
/// point of norm <= rho, truncated at degree D.
double jet_tail_bound(double rho, int m, int D);

/// 1/(1 - <z, w>).
cplx kernel(const Point& z, const Point& w);

struct JetVector {
    Point z;
    MultiIndex alpha;
    CVector coeffs;  // orthonormal-basis coordinates
    double tail_bound = 0.0;
};

/// Truncation of the derivative kernel d^alpha k_z / d conj(z)^alpha; pairing with p gives
/// d^alpha p(z).
JetVector jet_vector(const Point& z, const MultiIndex& alpha, const FockTruncation& trunc);

/// Dense matrix of v -> truncate_D(p v) in the orthonormal basis.
CMatrix mult_matrix(const Polynomial& p, const FockTruncation& trunc);

}  // namespace dakit
