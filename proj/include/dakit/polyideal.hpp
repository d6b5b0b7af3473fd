#pragma once

#include <optional>
#include <vector>

#include "dakit/fockspace.hpp"
#include "dakit/multiindex.hpp"
#include "dakit/numerics.hpp"
#include "dakit/polynomial.hpp"

namespace dakit {

/// Degree-<=D slice of a polynomial ideal. Coefficients are raw monomial coefficients over
/// enumerate(d, D); the slice basis is orthonormal for the Euclidean coefficient product.
class PolyIdeal {
public:
    /// Slice spanned by x^q g for every generator g with deg(x^q g) <= D.
    static PolyIdeal from_generators(int d, std::vector<Polynomial> generators, int D);
    /// Slice given directly. `gen_degree` is a degree in which the ideal is known to be
    /// generated; localize uses it to decide which jet orders the slice determines.
    static PolyIdeal from_slice(int d, int D, const CMatrix& basis, int gen_degree);

    int dim() const { return d_; }
    int degree_bound() const { return D_; }
    int gen_degree() const { return gen_degree_; }
    const MonomialIndex& index() const { return index_; }
    const CMatrix& slice_basis() const { return basis_; }
    int slice_dim() const { return static_cast<int>(basis_.cols()); }
    const std::vector<Polynomial>& generators() const { return generators_; }
    bool has_generators() const { return !generators_.empty(); }

    /// Relative residual of p after projection onto the slice.
    double membership_residual(const Polynomial& p) const;
    bool contains(const Polynomial& p, double tol = 1e-9) const;
    /// True when every slice element of `other` (same d, D) lies in this slice.
    bool contains_slice(const PolyIdeal& other, double tol = 1e-9) const;
    bool same_slice(const PolyIdeal& other, double tol = 1e-7) const;

    std::vector<Polynomial> basis_polynomials(double drop_below = 1e-14) const;
    /// Same ideal sliced at a different bound; needs generators.
    PolyIdeal resliced(int D) const;

private:
    int d_ = 0;
    int D_ = 0;
    int gen_degree_ = 0;
    MonomialIndex index_;
    CMatrix basis_;
    std::vector<Polynomial> generators_;
};

/// Image of an ideal in the jet space C[x]/m_z^mu, coordinates = Taylor coefficients at z
/// ordered by enumerate(d, mu-1).
struct LocalJetIdeal {
    Point z;
    int order = 1;      // mu
    CMatrix basis;      // orthonormal columns

    int jet_dim() const { return static_cast<int>(basis.rows()); }
    int rank() const { return static_cast<int>(basis.cols()); }
    /// Codimension = dimension of the local quotient truncated at order mu.
    int quotient_dim() const { return jet_dim() - rank(); }
    bool contains(const CVector& jet, double tol = 1e-9) const;
    bool operator==(const LocalJetIdeal& other) const;
};

/// Taylor coefficients at z of the monomials of degree <= D: J(beta, gamma) = C(gamma,beta) z^{gamma-beta}.
CMatrix jet_map(int d, int D, const Point& z, int order);
/// Taylor jet of a polynomial at z, order mu.
CVector jet(const Polynomial& p, const Point& z, int order);

/// Generators (x - z)^beta, |beta| = k.
std::vector<Polynomial> maximal_ideal_power(const Point& z, int k);

/// {p : deg p <= D, d^alpha p(z) = 0 for z in points, |alpha| <= kappa}.
PolyIdeal vanishing_ideal_slice(const std::vector<Point>& points, int kappa, int D);

/// Jet image of I at z of order mu; needs mu <= D - gen_degree + 1.
LocalJetIdeal localize(const PolyIdeal& I, const Point& z, int order);

/// Jet image of the ideal generated by `generators` at z, computed without a degree bound.
LocalJetIdeal local_ideal_from_generators(const std::vector<Polynomial>& generators,
                                          const Point& z, int order);

/// Smallest kappa with m_z^{kappa+1} contained in the localization (Nakayama certificate at
/// jet order kappa+2).
int polynomial_order(const PolyIdeal& I, const Point& z, int max_kappa = 12);

/// {p : deg p <= D, jet(p) in J}.
PolyIdeal pullback(const LocalJetIdeal& J, int D);

}  // namespace dakit
