#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dakit/fockspace.hpp"
#include "dakit/numerics.hpp"
#include "dakit/tuples.hpp"

namespace dakit {

/// One comparison: a closed-form value against an independently measured one.
struct ReproRow {
    std::string quantity;
    double parameter = 0.0;
    double formula = 0.0;
    double measured = 0.0;
    double error = 0.0;      // |measured - formula|, relative when `relative`
    double tolerance = 0.0;
    bool relative = false;
    bool lower_bound = false;  // measured >= formula - tolerance instead of equality
    bool pass = false;
};

struct ReproReport {
    std::string name;
    std::vector<ReproRow> rows;
    bool pass = true;
};

/// Aligned plain-text table.
std::string format_table(const ReproReport& report);

/// f(t) = sqrt(1 + t^2/2 + sqrt(1 + t^4/4)).
double corner_scale(double t);
/// (E21, E31) on C^3.
CommutingTuple corner_pair();
/// (N1, N1 + t N2) / f(t).
CommutingTuple scaled_corner_pair(double t);

/// Orthonormal basis (columns are column-major vec(X)) of {X : X A_j = B_j X for all j}.
CMatrix intertwiner_space(const CommutingTuple& A, const CommutingTuple& B);

struct FamilyMinimum {
    double cond = 0.0;
    CMatrix X;
    int starts = 0;
};

/// min cond(sum_k c_k F_k) over complex coefficients (cond is scale invariant, so no
/// normalization is imposed), by Nelder-Mead from seeded random starts, each restarted at
/// its own optimum.
FamilyMinimum minimize_condition(const std::vector<CMatrix>& family, std::uint64_t seed = 0,
                                 int starts = 6);

/// Columns of an intertwiner basis reshaped to n x n matrices.
std::vector<CMatrix> unvec_columns(const CMatrix& basis, int n);

/// Two-by-two blocks [[l, s(1-|l|)], [0, l]] with s = 1 and s = eps.
ReproReport example_one_variable(const std::vector<cplx>& lambdas, const std::vector<double>& epsilons,
                                 std::uint64_t seed = 0, int jobs = 1);

/// Corner pair against its scaled deformation R(eps), also after the automorphism moving 0
/// to z (z empty or one per eps).
ReproReport example_two_variable(const std::vector<double>& epsilons, const std::vector<Point>& targets,
                                 std::uint64_t seed = 0, int jobs = 1);

/// kappa = 0: order-zero jet model on the points against diag(points). kappa = 1: blocks of
/// the one-variable example at the points with the given eps (one per point, or one for all).
ReproReport dichotomy_demo(const std::vector<cplx>& points, int kappa, const std::vector<double>& epsilons,
                           std::uint64_t seed = 0, int jobs = 1);

}  // namespace dakit
