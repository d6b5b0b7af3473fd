#include "dakit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dakit/errors.hpp"

namespace dakit::io {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw InputError("field " + path + ": " + what);
}

const Json& field(const Json& j, const std::string& name, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    const auto it = j.find(name);
    if (it == j.end()) bad(path.empty() ? name : path + "." + name, "missing");
    return *it;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& path, const std::string& name) { return path.empty() ? name : path + "." + name; }

double read_number(const Json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad(path, "non-finite number");
    return v;
}

const Json& array(const Json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array");
    return j;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

cplx read_complex(const Json& j, const std::string& path) {
    if (j.is_number()) return read_number(j, path);
    if (!j.is_array() || j.size() != 2) bad(path, "expected [re, im]");
    return {read_number(j[0], at(path, 0)), read_number(j[1], at(path, 1))};
}

int read_int(const Json& j, const std::string& name, const std::string& path) {
    const Json& v = field(j, name, path);
    if (!v.is_number_integer()) bad(dot(path, name), "expected an integer");
    return v.get<int>();
}

CMatrix read_matrix(const Json& j, const std::string& path) {
    const int rows = read_int(j, "rows", path), cols = read_int(j, "cols", path);
    if (rows < 0 || cols < 0) bad(path, "negative shape");
    const std::string dp = dot(path, "data");
    const Json& data = array(field(j, "data", path), dp);
    if (static_cast<int>(data.size()) != rows) bad(dp, "expected " + std::to_string(rows) + " rows");
    CMatrix M(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const Json& row = array(data[static_cast<std::size_t>(r)], at(dp, static_cast<std::size_t>(r)));
        if (static_cast<int>(row.size()) != cols) bad(at(dp, static_cast<std::size_t>(r)), "expected " + std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c)
            M(r, c) = read_complex(row[static_cast<std::size_t>(c)], at(at(dp, static_cast<std::size_t>(r)), static_cast<std::size_t>(c)));
    }
    return M;
}

CVector read_vector(const Json& j, const std::string& path) {
    array(j, path);
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = read_complex(j[i], at(path, i));
    return v;
}

MultiIndex read_multiindex(const Json& j, const std::string& path) {
    array(j, path);
    std::vector<int> e;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer() || j[i].get<int>() < 0) bad(at(path, i), "expected a non-negative integer");
        e.push_back(j[i].get<int>());
    }
    return MultiIndex(std::move(e));
}

Polynomial read_polynomial(const Json& j, const std::string& path) {
    const int d = read_int(j, "d", path);
    if (d < 1) bad(dot(path, "d"), "must be positive");
    const std::string tp = dot(path, "terms");
    const Json& terms = array(field(j, "terms", path), tp);
    Polynomial p(d);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string ip = at(tp, i);
        const MultiIndex a = read_multiindex(field(terms[i], "alpha", ip), dot(ip, "alpha"));
        if (a.dim() != d) bad(dot(ip, "alpha"), "expected " + std::to_string(d) + " exponents");
        p.add_term(a, read_complex(field(terms[i], "coeff", ip), dot(ip, "coeff")));
    }
    return p;
}

CommutingTuple read_tuple(const Json& j) {
    const int d = read_int(j, "d", "");
    const Json& ms = array(field(j, "matrices", ""), "matrices");
    if (d < 1 || static_cast<int>(ms.size()) != d) bad("matrices", "expected " + std::to_string(d) + " matrices");
    std::vector<CMatrix> T;
    for (std::size_t k = 0; k < ms.size(); ++k) {
        CMatrix M = read_matrix(ms[k], at("matrices", k));
        if (M.rows() != M.cols() || M.rows() == 0) bad(at("matrices", k), "expected a non-empty square matrix");
        if (!T.empty() && M.rows() != T.front().rows()) bad(at("matrices", k), "size differs from matrices[0]");
        T.push_back(std::move(M));
    }
    CommutingTuple out = validate(std::move(T));
    if (j.contains("cyclic_vector")) {
        CVector v = read_vector(j["cyclic_vector"], "cyclic_vector");
        if (v.size() != out.size()) bad("cyclic_vector", "length differs from the matrix size");
        out.cyclic_vector = v;
    }
    return out;
}

IdealFile read_ideal(const Json& j) {
    IdealFile f;
    f.d = read_int(j, "d", "");
    if (f.d < 1) bad("d", "must be positive");
    if (j.contains("degree_bound")) f.degree_bound = read_int(j, "degree_bound", "");
    const Json& gs = array(field(j, "generators", ""), "generators");
    for (std::size_t i = 0; i < gs.size(); ++i) {
        Polynomial p = read_polynomial(gs[i], at("generators", i));
        if (p.dim() != f.d) bad(at("generators", i), "wrong number of variables");
        f.generators.push_back(std::move(p));
    }
    return f;
}

PointsFile read_points(const Json& j) {
    PointsFile f;
    f.d = read_int(j, "d", "");
    if (f.d < 1) bad("d", "must be positive");
    const Json& ps = array(field(j, "points", ""), "points");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const CVector v = read_vector(ps[i], at("points", i));
        if (v.size() != f.d) bad(at("points", i), "expected " + std::to_string(f.d) + " coordinates");
        f.points.emplace_back(v.data(), v.data() + v.size());
    }
    if (j.contains("targets")) {
        const CVector t = read_vector(j["targets"], "targets");
        f.targets.assign(t.data(), t.data() + t.size());
    }
    return f;
}

JetModelFile read_jet_model(const Json& j) {
    JetModelFile f;
    f.d = read_int(j, "d", "");
    if (f.d < 1) bad("d", "must be positive");
    if (j.contains("truncation")) f.truncation = read_int(j, "truncation", "");
    const Json& ps = array(field(j, "points", ""), "points");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const std::string ip = at("points", i);
        const CVector z = read_vector(field(ps[i], "z", ip), dot(ip, "z"));
        if (z.size() != f.d) bad(dot(ip, "z"), "expected " + std::to_string(f.d) + " coordinates");
        LocalIdealData a;
        a.z.assign(z.data(), z.data() + z.size());
        const Json& gs = array(field(ps[i], "generators", ip), dot(ip, "generators"));
        for (std::size_t k = 0; k < gs.size(); ++k) {
            Polynomial p = read_polynomial(gs[k], at(dot(ip, "generators"), k));
            if (p.dim() != f.d) bad(at(dot(ip, "generators"), k), "wrong number of variables");
            a.generators.push_back(std::move(p));
        }
        f.data.push_back(std::move(a));
    }
    return f;
}

Json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
}

Json write(cplx z) { return Json::array({z.real(), z.imag()}); }

Json write(const CMatrix& M) {
    Json data = Json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(write(M(r, c)));
        data.push_back(std::move(row));
    }
    return Json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", std::move(data)}};
}

Json write(const CVector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(write(v(i)));
    return a;
}

Json write(const MultiIndex& a) { return Json(a.exponents()); }

Json write(const Point& z) {
    Json a = Json::array();
    for (auto v : z) a.push_back(write(v));
    return a;
}

Json write(const Polynomial& p) {
    Json terms = Json::array();
    for (const auto& [a, c] : p.terms()) terms.push_back(Json{{"coeff", write(c)}, {"alpha", write(a)}});
    return Json{{"d", p.dim()}, {"terms", std::move(terms)}};
}

Json write(const CommutingTuple& T) {
    Json ms = Json::array();
    for (const auto& M : T.T) ms.push_back(write(M));
    Json j{{"d", T.dim()}, {"matrices", std::move(ms)}};
    if (T.cyclic_vector) j["cyclic_vector"] = write(*T.cyclic_vector);
    return j;
}

Json report(const JointSpectrum& s) {
    Json cl = Json::array();
    for (const auto& c : s.clusters)
        cl.push_back(Json{{"point", write(c.z)}, {"multiplicity", c.multiplicity}, {"offset", c.offset}});
    return Json{{"clusters", std::move(cl)},
                {"cluster_tol", s.cluster_tol},
                {"combination", s.combination},
                {"triangularity_defect", s.triangularity_defect},
                {"attempts", s.attempts}};
}

Json report(const JordanDecomposition& J) {
    Json blocks = Json::array();
    for (const auto& b : J.blocks) {
        Json ns = Json::array();
        for (const auto& n : b.nilpotent) ns.push_back(write(n));
        blocks.push_back(Json{{"point", write(b.z)}, {"size", b.size}, {"nilpotent", std::move(ns)}, {"pivots", b.pivots}});
    }
    return Json{{"spectrum", report(J.spectrum)},
                {"blocks", std::move(blocks)},
                {"X", write(J.X)},
                {"norm_X", J.norm_X},
                {"norm_Xinv", J.norm_Xinv},
                {"cond", finite_or_null(J.cond)},
                {"residual", J.residual},
                {"idempotent_sum_defect", J.idempotent_sum_defect},
                {"idempotent_product_defect", J.idempotent_product_defect},
                {"nilpotency_defect", J.nilpotency_defect},
                {"orthogonalizer_norm", J.orthogonalizer_norm}};
}

Json report(const ModelTuple& m) {
    Json j{{"provenance", m.provenance == ModelProvenance::Monomial ? "monomial" : "point_jet"},
           {"dimension", m.size()},
           {"tuple", write(m.Z)},
           {"cyclic_vector", write(m.cyclic)},
           {"commutator_defect", m.Z.commutator_defect},
           {"row_defect", m.Z.row_defect}};
    if (m.provenance == ModelProvenance::Monomial) {
        Json sm = Json::array(), gs = Json::array();
        for (const auto& a : m.standard_monomials) sm.push_back(write(a));
        for (const auto& a : m.generators) gs.push_back(write(a));
        j["standard_monomials"] = std::move(sm);
        j["generators"] = std::move(gs);
    } else {
        Json ps = Json::array();
        for (const auto& p : m.points) ps.push_back(write(p));
        j["points"] = std::move(ps);
        j["multiplicities"] = m.multiplicities;
        j["orders"] = m.orders;
        j["truncation"] = m.truncation;
        j["tail_bound"] = m.tail_bound;
        j["gram_cond"] = finite_or_null(m.gram_cond);
    }
    return j;
}

Json report(const SeparationReport& s) {
    Json j{{"delta_weak", s.delta_weak}, {"gamma_carleson", s.gamma_carleson}, {"gram_lambda_min", s.gram_lambda_min}};
    if (!s.epsilon.empty()) {
        j["strong_separation"] = s.epsilon;
        j["strong_separation_min"] = s.epsilon_min;
    }
    return j;
}

Json report(const PickResult& p) {
    return Json{{"c_star", p.c_star}, {"margin", p.margin}, {"bracket", {p.lower, p.upper}}, {"iterations", p.iterations}};
}

Json report(const ThetaJets& t) {
    Json pts = Json::array();
    for (const auto& p : t.points)
        pts.push_back(Json{{"index", p.index},
                           {"in_subset", p.in_omega},
                           {"target", write(p.target)},
                           {"certified_valuation", p.certified_valuation},
                           {"numeric_deviation", p.numeric_deviation},
                           {"pass", p.pass}});
    return Json{{"kappa", t.kappa}, {"subset", t.omega}, {"c_star", t.c_star}, {"norm_proxy", t.norm_proxy},
                {"points", std::move(pts)}, {"pass", t.pass}};
}

Json report(const NilsimHypotheses& h) {
    Json sup = Json::array();
    for (const auto& a : h.support) sup.push_back(write(a));
    return Json{{"support", std::move(sup)},
                {"weighted_norms", h.weighted_norms},
                {"top_degree", h.top_degree},
                {"card", h.card},
                {"epsilon", h.epsilon},
                {"epsilon_times_card", h.epsilon * h.card},
                {"layers_direct", h.layers_direct},
                {"layers_total", h.layers_total},
                {"gauge", h.gauge_verified ? (h.gauge_unitary ? "unitary" : "verified") : "gauge unverified"},
                {"gamma", finite_or_null(h.gamma)},
                {"gamma_grid", h.gamma_grid},
                {"gamma_argmax", h.gamma_t},
                {"grid", h.grid},
                {"admissible", h.admissible}};
}

Json report(const SimilarityCertificate& c) {
    return Json{{"hypotheses", report(c.hypotheses)},
                {"X", write(c.X)},
                {"norm_X", c.norm_X},
                {"norm_Xinv", c.norm_Xinv},
                {"cond", c.cond},
                {"bound_X", finite_or_null(c.bound_X)},
                {"bound_Xinv", c.bound_Xinv},
                {"residual", c.residual},
                {"bounds_apply", c.bounds_apply},
                {"pass_X", c.pass_X},
                {"pass_Xinv", c.pass_Xinv},
                {"pass_residual", c.pass_residual},
                {"pass", c.pass}};
}

Json report(const NecessityReport& r) {
    Json mons = Json::array();
    for (const auto& a : r.monomials) mons.push_back(write(a));
    return Json{{"xi", write(r.xi)},
                {"xi_alignment", r.xi_alignment},
                {"cond", r.cond},
                {"residual", r.residual},
                {"monomials", std::move(mons)},
                {"weighted_norms", r.weighted_norms},
                {"min_weighted", r.min_weighted},
                {"lower_bound_inverse_cond_squared", r.lower_bound},
                {"pass_lower", r.pass_lower},
                {"literal_bound_inverse_cond", r.literal_bound},
                {"pass_literal", r.pass_literal},
                {"gauge_max_norm", r.gauge_max_norm},
                {"gauge_fix_defect", r.gauge_fix_defect},
                {"gauge_twist_defect", r.gauge_twist_defect},
                {"pass_gauge", r.pass_gauge},
                {"pass", r.pass}};
}

Json report(const ReproReport& r) {
    Json rows = Json::array();
    for (const auto& x : r.rows)
        rows.push_back(Json{{"quantity", x.quantity},
                            {"parameter", x.parameter},
                            {"formula", finite_or_null(x.formula)},
                            {"measured", finite_or_null(x.measured)},
                            {"error", finite_or_null(x.error)},
                            {"tolerance", x.tolerance},
                            {"relation", x.lower_bound ? ">=" : "=="},
                            {"relative", x.relative},
                            {"pass", x.pass}});
    return Json{{"name", r.name}, {"rows", std::move(rows)}, {"pass", r.pass}};
}

}  // namespace dakit::io
