#include "dakit/polynomial.hpp"

#include <cmath>
#include <sstream>

#include "dakit/errors.hpp"

namespace dakit {

cplx power(const std::vector<cplx>& z, const MultiIndex& gamma) {
    cplx r = 1.0;
    for (int j = 0; j < gamma.dim(); ++j)
        for (int k = 0; k < gamma[j]; ++k) r *= z[static_cast<std::size_t>(j)];
    return r;
}

Polynomial::Polynomial(int d, Terms terms) : d_(d) {
    for (auto& [a, c] : terms) add_term(a, c);
}

Polynomial Polynomial::constant(int d, cplx c) {
    Polynomial p(d);
    p.add_term(MultiIndex(d), c);
    return p;
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, cplx c) {
    Polynomial p(alpha.dim());
    p.add_term(alpha, c);
    return p;
}

Polynomial Polynomial::variable(int d, int j) {
    MultiIndex a(d);
    a[j] = 1;
    return monomial(a);
}

Polynomial Polynomial::shifted_monomial(const MultiIndex& beta, const std::vector<cplx>& z) {
    const int d = beta.dim();
    Polynomial r = constant(d, 1.0);
    for (int j = 0; j < d; ++j) {
        const Polynomial lin = variable(d, j) - constant(d, z[static_cast<std::size_t>(j)]);
        r = r * lin.pow(beta[j]);
    }
    return r;
}

Polynomial Polynomial::from_vector(int d, const MonomialIndex& index, const CVector& coeffs,
                                   double drop_below) {
    if (coeffs.size() != index.size()) throw InputError("coefficient vector size mismatch");
    Polynomial p(d);
    for (int i = 0; i < index.size(); ++i)
        if (std::abs(coeffs(i)) > drop_below) p.add_term(index.at(i), coeffs(i));
    return p;
}

int Polynomial::degree() const {
    int deg = -1;
    for (const auto& [a, c] : terms_) deg = std::max(deg, a.degree());
    return deg;
}

cplx Polynomial::coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? cplx(0.0) : it->second;
}

void Polynomial::add_term(const MultiIndex& alpha, cplx c) {
    if (alpha.dim() != d_) throw InputError("polynomial term has wrong number of variables");
    if (c == cplx(0.0)) return;
    auto [it, fresh] = terms_.emplace(alpha, c);
    if (!fresh) {
        it->second += c;
        if (it->second == cplx(0.0)) terms_.erase(it);
    }
}

cplx Polynomial::operator()(const std::vector<cplx>& z) const {
    if (static_cast<int>(z.size()) != d_) throw InputError("evaluation point has wrong dimension");
    cplx s = 0.0;
    for (const auto& [a, c] : terms_) s += c * power(z, a);
    return s;
}

cplx Polynomial::derivative_at(const MultiIndex& alpha, const std::vector<cplx>& z) const {
    cplx s = 0.0;
    for (const auto& [g, c] : terms_) {
        if (!g.dominates(alpha)) continue;
        double w = 1.0;
        for (int j = 0; j < d_; ++j)
            for (int k = 0; k < alpha[j]; ++k) w *= g[j] - k;
        s += c * w * power(z, g - alpha);
    }
    return s;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r(*this);
    for (const auto& [a, c] : o.terms_) r.add_term(a, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * cplx(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (o.d_ != d_) throw InputError("polynomial product with mismatched variables");
    Polynomial r(d_);
    for (const auto& [a, c] : terms_)
        for (const auto& [b, e] : o.terms_) r.add_term(a + b, c * e);
    return r;
}

Polynomial Polynomial::operator*(cplx s) const {
    Polynomial r(d_);
    for (const auto& [a, c] : terms_) r.add_term(a, c * s);
    return r;
}

Polynomial Polynomial::pow(int k) const {
    Polynomial r = constant(d_, 1.0);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

CVector Polynomial::to_vector(const MonomialIndex& index) const {
    CVector v = CVector::Zero(index.size());
    for (const auto& [a, c] : terms_) {
        const int i = index.find(a);
        if (i < 0) throw InputError("polynomial term " + a.str() + " outside the degree bound");
        v(i) = c;
    }
    return v;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
        for (int j = 0; j < d_; ++j)
            if (a[j] > 0) os << "*x" << (j + 1) << (a[j] > 1 ? "^" + std::to_string(a[j]) : "");
    }
    return os.str();
}

}  // namespace dakit
