#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

namespace dakit {

/// Exact non-negative rational, always stored in lowest terms.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

/// Exponent vector alpha in N^d.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(int d) : e_(static_cast<std::size_t>(d), 0) {}
    explicit MultiIndex(std::vector<int> exponents);
    MultiIndex(std::initializer_list<int> exponents);

    int dim() const { return static_cast<int>(e_.size()); }
    int operator[](int j) const { return e_[static_cast<std::size_t>(j)]; }
    int& operator[](int j) { return e_[static_cast<std::size_t>(j)]; }
    const std::vector<int>& exponents() const { return e_; }

    int degree() const;
    /// alpha! = prod alpha_j!, exact; throws beyond degree 20.
    std::uint64_t factorial() const;
    /// |alpha|!/alpha!, exact; throws beyond degree 20.
    std::uint64_t multinomial() const;

    /// Componentwise alpha >= other.
    bool dominates(const MultiIndex& other) const;
    MultiIndex operator+(const MultiIndex& other) const;
    /// Requires dominates(other).
    MultiIndex operator-(const MultiIndex& other) const;
    /// alpha + e_j.
    MultiIndex raised(int j) const;

    std::string str() const;

    auto operator<=>(const MultiIndex&) const = default;

private:
    std::vector<int> e_;
};

/// Graded lex: lower degree first, then larger leading exponent first.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

/// n! exactly; throws for n > 20.
std::uint64_t factorial(int n);
/// log(n!) in floating point, for sizes past the exact range.
double log_factorial(int n);
/// Binomial coefficient as a double (exact for the sizes in use).
double binomial(int n, int k);

/// All alpha with |alpha| <= max_degree, graded lex order.
std::vector<MultiIndex> enumerate(int d, int max_degree);
/// All alpha with |alpha| == degree, graded lex order.
std::vector<MultiIndex> enumerate_homogeneous(int d, int degree);

/// alpha!/|alpha|! = squared norm of x^alpha in the Drury-Arveson space.
Rational monomial_norm_sq(const MultiIndex& alpha);

/// Position lookup for an enumerated basis.
class MonomialIndex {
public:
    MonomialIndex() = default;
    explicit MonomialIndex(std::vector<MultiIndex> basis);
    MonomialIndex(int d, int max_degree) : MonomialIndex(enumerate(d, max_degree)) {}

    int size() const { return static_cast<int>(basis_.size()); }
    const MultiIndex& at(int i) const { return basis_[static_cast<std::size_t>(i)]; }
    const std::vector<MultiIndex>& basis() const { return basis_; }
    /// -1 when absent.
    int find(const MultiIndex& alpha) const;

private:
    std::vector<MultiIndex> basis_;
    std::map<MultiIndex, int> pos_;
};

}  // namespace dakit
