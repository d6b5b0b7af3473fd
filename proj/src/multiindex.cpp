#include "dakit/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dakit/errors.hpp"

namespace dakit {

MultiIndex::MultiIndex(std::vector<int> exponents) : e_(std::move(exponents)) {
    for (int v : e_)
        if (v < 0) throw InputError("multi-index with negative exponent");
}

MultiIndex::MultiIndex(std::initializer_list<int> exponents)
    : MultiIndex(std::vector<int>(exponents)) {}

int MultiIndex::degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }

std::uint64_t factorial(int n) {
    if (n < 0) throw InputError("factorial of a negative integer");
    if (n > 20) throw NumericalError("factorial beyond degree 20 overflows exact arithmetic");
    std::uint64_t r = 1;
    for (int k = 2; k <= n; ++k) r *= static_cast<std::uint64_t>(k);
    return r;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

std::uint64_t MultiIndex::factorial() const {
    if (degree() > 20) throw NumericalError("factorial beyond degree 20 overflows exact arithmetic");
    std::uint64_t r = 1;
    for (int v : e_) r *= dakit::factorial(v);
    return r;
}

std::uint64_t MultiIndex::multinomial() const {
    const int n = degree();
    if (n > 20) throw NumericalError("multinomial beyond degree 20 overflows exact arithmetic");
    // Product of binomials keeps intermediates small.
    std::uint64_t r = 1;
    int acc = 0;
    for (int v : e_) {
        for (int i = 1; i <= v; ++i) {
            ++acc;
            r = r * static_cast<std::uint64_t>(acc) / static_cast<std::uint64_t>(i);
        }
    }
    return r;
}

bool MultiIndex::dominates(const MultiIndex& other) const {
    for (std::size_t j = 0; j < e_.size(); ++j)
        if (e_[j] < other.e_[j]) return false;
    return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    MultiIndex r(*this);
    for (std::size_t j = 0; j < e_.size(); ++j) r.e_[j] += other.e_[j];
    return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
    if (!dominates(other)) throw InputError("multi-index subtraction below zero");
    MultiIndex r(*this);
    for (std::size_t j = 0; j < e_.size(); ++j) r.e_[j] -= other.e_[j];
    return r;
}

MultiIndex MultiIndex::raised(int j) const {
    MultiIndex r(*this);
    ++r.e_[static_cast<std::size_t>(j)];
    return r;
}

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t j = 0; j < e_.size(); ++j) os << (j ? "," : "") << e_[j];
    os << ')';
    return os.str();
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.exponents() > b.exponents();
}

namespace {

void fill_homogeneous(int d, int remaining, int j, std::vector<int>& cur,
                      std::vector<MultiIndex>& out) {
    if (j == d - 1) {
        cur[static_cast<std::size_t>(j)] = remaining;
        out.emplace_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[static_cast<std::size_t>(j)] = v;
        fill_homogeneous(d, remaining - v, j + 1, cur, out);
    }
}

}  // namespace

std::vector<MultiIndex> enumerate_homogeneous(int d, int degree) {
    if (d < 1) throw InputError("dimension must be positive");
    std::vector<MultiIndex> out;
    if (degree < 0) return out;
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    fill_homogeneous(d, degree, 0, cur, out);
    return out;
}

std::vector<MultiIndex> enumerate(int d, int max_degree) {
    if (d < 1) throw InputError("dimension must be positive");
    std::vector<MultiIndex> out;
    for (int n = 0; n <= max_degree; ++n) {
        auto layer = enumerate_homogeneous(d, n);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

Rational monomial_norm_sq(const MultiIndex& alpha) {
    const std::uint64_t w = alpha.multinomial();
    return Rational{1, w};
}

MonomialIndex::MonomialIndex(std::vector<MultiIndex> basis) : basis_(std::move(basis)) {
    for (std::size_t i = 0; i < basis_.size(); ++i) pos_.emplace(basis_[i], static_cast<int>(i));
}

int MonomialIndex::find(const MultiIndex& alpha) const {
    auto it = pos_.find(alpha);
    return it == pos_.end() ? -1 : it->second;
}

}  // namespace dakit
