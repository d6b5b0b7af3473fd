#pragma once

#include <cstdint>
#include <vector>

#include "dakit/models.hpp"
#include "dakit/multiindex.hpp"
#include "dakit/numerics.hpp"
#include "dakit/tuples.hpp"

namespace dakit {

/// Hypotheses for a norm-controlled similarity of a nilpotent tuple to its monomial model.
struct NilsimHypotheses {
    std::vector<MultiIndex> support;    // {alpha : N^alpha != 0}, graded lex
    std::vector<double> weighted_norms; // (|alpha|!/alpha!) ||N^alpha xi||^2 on the support
    int top_degree = 0;                 // largest |alpha| on the support
    int card = 0;                       // size of the support
    double epsilon = 0.0;               // max over the support of 1 - weighted norm
    bool layers_direct = false;         // span{N^alpha xi : |alpha| = l} form a direct sum
    bool layers_total = false;          // ... which fills the space
    bool gauge_verified = false;        // layer gauge constructed
    bool gauge_unitary = false;         // layers mutually orthogonal, gauge exactly unitary
    double gamma = 0.0;                 // sup_t ||Y_t|| witness; NaN when unverified
    int grid = 0;
    double gamma_grid = 0.0;  // max over the grid alone
    double gamma_t = 0.0;     // where the maximum was found
    std::vector<CMatrix> layer_projections;
    bool admissible = false;  // epsilon * card < 1 with a verified gauge
};

/// Throws InputError for bad shapes or a non-unit xi, ValidationError when N is not a
/// nilpotent commuting row contraction or xi is not cyclic.
NilsimHypotheses check_hypotheses(const CommutingTuple& N, const CVector& xi, int grid = 64);

/// Y_t = sum_l e^{ilt} P_l; requires a verified gauge.
CMatrix layer_gauge(const NilsimHypotheses& h, double t);

struct SimilarityCertificate {
    NilsimHypotheses hypotheses;
    ModelTuple model;
    CMatrix X;     // X N X^{-1} = model
    CMatrix Xinv;
    double norm_X = 0.0;
    double norm_Xinv = 0.0;
    double cond = 0.0;
    double bound_X = 0.0;     // (L+1) gamma / sqrt(1 - epsilon card); inf when inadmissible
    double bound_Xinv = 0.0;  // L + 1
    double residual = 0.0;    // max_j ||X N_j X^{-1} - Z_j||
    bool bounds_apply = false;
    bool pass_X = false;
    bool pass_Xinv = false;
    bool pass_residual = false;
    bool pass = false;
};

/// Certificate for admissible inputs. Throws ValidationError on an annihilator mismatch or
/// when epsilon * card >= 1.
SimilarityCertificate build_similarity(const CommutingTuple& N, const CVector& xi,
                                       const std::vector<MultiIndex>& generators, int grid = 64);

/// Same construction without the admissibility requirement; bounds are reported but do not
/// apply when the hypotheses fail.
SimilarityCertificate explicit_similarity(const CommutingTuple& N, const CVector& xi,
                                          const std::vector<MultiIndex>& generators,
                                          int grid = 64);

struct NecessityReport {
    CVector xi;                // X^{-1} 1 / ||X^{-1} 1||
    double xi_alignment = 0.0; // |<xi, given xi>|
    double cond = 0.0;
    double residual = 0.0;
    std::vector<MultiIndex> monomials;  // x^alpha outside the ideal
    std::vector<double> weighted_norms;
    double min_weighted = 0.0;
    double lower_bound = 0.0;   // 1 / cond^2
    double literal_bound = 0.0; // 1 / cond, fails in general
    bool pass_lower = false;
    bool pass_literal = false;
    double gauge_max_norm = 0.0;       // max_t ||X^{-1} W_t X||
    double gauge_fix_defect = 0.0;     // max_t ||Y_t^{-1} xi - xi||
    double gauge_twist_defect = 0.0;   // max_t ||Y_t N Y_t^{-1} - e^{it} N||
    bool pass_gauge = false;
    bool pass = false;
};

/// Necessary conditions carried by an invertible X with X N X^{-1} = model. Throws
/// ValidationError when the intertwining residual exceeds tol * cond * max(1, ||N||).
NecessityReport necessity_check(const CommutingTuple& N, const CVector& xi, const CMatrix& X,
                                const ModelTuple& model, double tol = 1e-8, int grid = 16);

struct LemmaReport {
    double epsilon = 0.0;
    int max_degree = 0;
    int pairs = 0;                  // equal-length pairs meeting the norm hypothesis
    double pair_worst = 0.0;        // max (or 0 without pairs) of weighted |<T^a xi, T^b xi>| - epsilon
    bool pairs_pass = true;
    int level_samples = 0;
    double level_worst = 0.0;       // max of (1 - eps card S)|c|^2 - ||sum||^2, relative
    bool level_pass = true;
    bool sandwich_applicable = false;
    int sandwich_samples = 0;
    double sandwich_lower_worst = 0.0;
    double sandwich_upper_worst = 0.0;
    bool sandwich_pass = true;
    bool pass = true;
};

/// Evaluates the pair, same-length and sandwich inequalities on T, xi and epsilon over
/// monomials of degree <= max_degree (default: the matrix size).
LemmaReport lemma_checks(const CommutingTuple& T, const CVector& xi, double epsilon,
                         std::uint64_t seed = 0, int samples = 100, int max_degree = -1);

}  // namespace dakit
