#pragma once

#include <map>
#include <string>
#include <vector>

#include "dakit/multiindex.hpp"
#include "dakit/numerics.hpp"

namespace dakit {

/// Sparse polynomial in d complex variables.
class Polynomial {
public:
    using Terms = std::map<MultiIndex, cplx>;

    Polynomial() = default;
    explicit Polynomial(int d) : d_(d) {}
    Polynomial(int d, Terms terms);

    static Polynomial constant(int d, cplx c);
    static Polynomial monomial(const MultiIndex& alpha, cplx c = 1.0);
    static Polynomial variable(int d, int j);
    /// prod_j (x_j - z_j)^{beta_j}.
    static Polynomial shifted_monomial(const MultiIndex& beta, const std::vector<cplx>& z);
    static Polynomial from_vector(int d, const MonomialIndex& index, const CVector& coeffs,
                                  double drop_below = 0.0);

    int dim() const { return d_; }
    const Terms& terms() const { return terms_; }
    /// -1 for the zero polynomial.
    int degree() const;
    bool is_zero() const { return terms_.empty(); }
    cplx coeff(const MultiIndex& alpha) const;

    void add_term(const MultiIndex& alpha, cplx c);

    cplx operator()(const std::vector<cplx>& z) const;
    /// d^alpha p evaluated at z.
    cplx derivative_at(const MultiIndex& alpha, const std::vector<cplx>& z) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(cplx s) const;
    Polynomial pow(int k) const;

    /// Coefficients in the given monomial basis; throws if a term is outside it.
    CVector to_vector(const MonomialIndex& index) const;

    std::string str() const;

private:
    int d_ = 0;
    Terms terms_;
};

/// z^gamma for a point z.
cplx power(const std::vector<cplx>& z, const MultiIndex& gamma);

}  // namespace dakit
