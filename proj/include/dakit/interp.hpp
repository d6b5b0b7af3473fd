#pragma once

#include <cstdint>
#include <vector>

#include "dakit/fockspace.hpp"
#include "dakit/multiindex.hpp"
#include "dakit/numerics.hpp"

namespace dakit {

struct SeparationReport {
    double delta_weak = 1.0;       // 1 for a single point
    double gamma_carleson = 1.0;   // ||normalized kernel Gram||
    double gram_lambda_min = 1.0;  // smallest eigenvalue of the normalized Gram
    std::vector<double> epsilon;   // per-point strong separation (filled by strong_separation)
    double epsilon_min = 1.0;
};

/// Normalized kernel Gram G_nm = k(l_n, l_m) / (||k_n|| ||k_m||).
CMatrix normalized_gram(const std::vector<Point>& points);

/// delta_weak and gamma_carleson. Throws InputError for coincident points or points outside
/// the ball.
SeparationReport separation_constants(const std::vector<Point>& points);

struct PickResult {
    double c_star = 0.0;
    double margin = 0.0;  // lambda_min of the Pick matrix at c_star
    double lower = 0.0;   // final bracket
    double upper = 0.0;
    int iterations = 0;
};

/// Smallest c with [(c^2 - a_n conj(a_m)) k(l_n, l_m)] positive semidefinite, by bisection.
PickResult pick_min_norm(const std::vector<Point>& points, const std::vector<cplx>& targets);

/// epsilon_n = 1 / c_star(indicator of n); fills epsilon and epsilon_min of a full report.
SeparationReport strong_separation(const std::vector<Point>& points);

/// Truncated Taylor series at a point with exact constant term and a lower bound on the
/// valuation of its non-constant part.
class JetSeries {
public:
    JetSeries(int d, int order);
    static JetSeries constant(int d, int order, cplx c);

    int dim() const { return d_; }
    int order() const { return order_; }
    const CVector& coeffs() const { return c_; }
    CVector& coeffs() { return c_; }
    cplx constant_term() const { return c_(0); }
    /// Lower bound on the lowest degree present in (this - constant term).
    int tail_valuation() const { return tail_val_; }
    void set_tail_valuation(int v) { tail_val_ = v; }
    /// Lower bound on the lowest degree present in the whole series.
    int valuation() const { return c_(0) != 0.0 ? 0 : tail_val_; }

    JetSeries operator+(const JetSeries& o) const;
    JetSeries operator-(const JetSeries& o) const;
    JetSeries operator*(const JetSeries& o) const;
    JetSeries pow(int k) const;

private:
    int d_;
    int order_;
    MonomialIndex index_;
    CVector c_;
    int tail_val_ = 1;
};

/// 1 - (1 - phi^{kappa+1})^{kappa+1}.
JetSeries theta_from_phi(const JetSeries& phi, int kappa);

struct ThetaPoint {
    int index = 0;
    bool in_omega = false;
    cplx target = 0.0;
    int certified_valuation = 0;  // lower bound on the valuation of theta - target
    double numeric_deviation = 0.0;  // max |jet of theta - target| over random phi jets, relative
    bool pass = false;
};

struct ThetaJets {
    int kappa = 0;
    std::vector<int> omega;
    double c_star = 0.0;     // Pick constant of the indicator of omega
    double norm_proxy = 0.0; // 1 + (1 + c^{kappa+1})^{kappa+1}
    std::vector<ThetaPoint> points;
    bool pass = false;
};

/// Jet certificate for theta at every point: the constant term is the indicator of omega and
/// all jets of order 1..kappa vanish, whatever the derivatives of phi are.
ThetaJets theta_jets(const std::vector<Point>& points, const std::vector<int>& omega, int kappa,
                     std::uint64_t seed = 0, int draws = 8);

}  // namespace dakit
