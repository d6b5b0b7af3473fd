#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dakit/fockspace.hpp"
#include "dakit/interp.hpp"
#include "dakit/models.hpp"
#include "dakit/multiindex.hpp"
#include "dakit/nilsim.hpp"
#include "dakit/numerics.hpp"
#include "dakit/polyideal.hpp"
#include "dakit/polynomial.hpp"
#include "dakit/repro.hpp"
#include "dakit/spectral.hpp"
#include "dakit/tuples.hpp"

namespace dakit::io {

using Json = nlohmann::ordered_json;

// Readers throw InputError naming the offending field path, e.g. "matrices[1].data[0][2]".
cplx read_complex(const Json& j, const std::string& path);
CMatrix read_matrix(const Json& j, const std::string& path);
CVector read_vector(const Json& j, const std::string& path);
MultiIndex read_multiindex(const Json& j, const std::string& path);
Polynomial read_polynomial(const Json& j, const std::string& path);
int read_int(const Json& j, const std::string& field, const std::string& path);

/// {"d", "matrices": [matrix, ...], "cyclic_vector"?: [complex, ...]}
CommutingTuple read_tuple(const Json& j);
/// {"d", "degree_bound"?, "generators": [polynomial, ...]}
struct IdealFile {
    int d = 0;
    int degree_bound = 0;
    std::vector<Polynomial> generators;
};
IdealFile read_ideal(const Json& j);
/// {"d", "points": [[complex, ...], ...], "targets"?: [complex, ...]}
struct PointsFile {
    int d = 0;
    std::vector<Point> points;
    std::vector<cplx> targets;
};
PointsFile read_points(const Json& j);
/// {"d", "truncation"?, "points": [{"z": [complex, ...], "generators": [polynomial, ...]}, ...]}
struct JetModelFile {
    int d = 0;
    int truncation = 0;
    std::vector<LocalIdealData> data;
};
JetModelFile read_jet_model(const Json& j);

Json load_file(const std::string& path);

Json write(cplx z);
Json write(const CMatrix& M);
Json write(const CVector& v);
Json write(const MultiIndex& a);
Json write(const Point& z);
Json write(const Polynomial& p);
Json write(const CommutingTuple& T);

Json report(const JordanDecomposition& J);
Json report(const JointSpectrum& s);
Json report(const ModelTuple& m);
Json report(const SeparationReport& s);
Json report(const PickResult& p);
Json report(const ThetaJets& t);
Json report(const NilsimHypotheses& h);
Json report(const SimilarityCertificate& c);
Json report(const NecessityReport& r);
Json report(const ReproReport& r);

}  // namespace dakit::io
