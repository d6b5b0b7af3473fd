#pragma once

#include <string>
#include <vector>

#include "dakit/fockspace.hpp"
#include "dakit/multiindex.hpp"
#include "dakit/numerics.hpp"
#include "dakit/polyideal.hpp"
#include "dakit/polynomial.hpp"
#include "dakit/tuples.hpp"

namespace dakit {

enum class ModelProvenance { Monomial, PointJet };

/// Local ideal at a point given by generators; it must contain a power of the maximal ideal.
struct LocalIdealData {
    Point z;
    std::vector<Polynomial> generators;
};

struct ModelTuple {
    ModelProvenance provenance = ModelProvenance::Monomial;
    CommutingTuple Z;
    CVector cyclic;  // coordinates of the projection of 1

    // monomial models: basis x^alpha / ||x^alpha|| for alpha in standard_monomials
    std::vector<MultiIndex> standard_monomials;
    std::vector<MultiIndex> generators;

    // point-jet models
    std::vector<Point> points;
    std::vector<int> multiplicities;  // local quotient dimensions
    std::vector<int> orders;          // smallest kappa with m_z^{kappa+1} in a_z
    int truncation = 0;
    double tail_bound = 0.0;          // max tail over the selected jet vectors
    double gram_cond = 0.0;
    CMatrix embedding;                // orthonormal basis in truncation coordinates

    int dim() const { return Z.dim(); }
    int size() const { return Z.size(); }
};

/// Model of a monomial ideal. Throws InputError for non-monomial generators, an improper
/// ideal (containing 1 is allowed only as the zero space, so it is rejected), or an
/// infinite complement.
ModelTuple monomial_model(const std::vector<MultiIndex>& generators, int d);
ModelTuple monomial_model(const std::vector<Polynomial>& generators, int d);

/// diag(e^{i |alpha| t}) in the monomial basis.
CMatrix gauge_unitary(const ModelTuple& model, double t);

/// Model for a finite point set with prescribed local ideals. truncation = 0 selects the
/// degree bound automatically; an explicit bound is rejected when its tails exceed tail_tol.
ModelTuple jet_model(const std::vector<LocalIdealData>& data, int truncation = 0,
                     double tail_tol = 1e-8, int max_basis = 200000);

struct LocalizationCheck {
    Point z;
    bool pass = false;
    double distance = 0.0;   // subspace distance between the two jet ideals
    std::string offending;   // jet basis vector of one side missing from the other
};

std::vector<LocalizationCheck> verify_localizations(const ModelTuple& model,
                                                    const std::vector<LocalIdealData>& data);

/// Smallest kappa <= max_kappa with m_z^{kappa+1} in the ideal generated near z.
int local_order(const LocalIdealData& a, int max_kappa = 12);

}  // namespace dakit
