#include "dakit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "dakit/errors.hpp"
#include "dakit/io.hpp"

namespace dakit::cli {

namespace {

using io::Json;

struct Config {
    std::string subcommand;
    std::string in;
    std::string out;
    std::string ideal;
    std::string format = "json";
    double tol = 1e-9;
    double cluster_tol = 1e-6;
    double residual_tol = 1e-7;
    int deg = -1;
    std::uint64_t seed = 0;
    int grid = 64;
    int jobs = 1;
    int kappa = 0;
    std::vector<int> omega;
    std::vector<double> eps;
    std::vector<std::string> lambda;
    std::vector<std::string> targets;
};

struct Outcome {
    Json result;
    int code = 0;
    std::string message;
    std::string table;  // plain-text rendering for --format text
};

std::vector<cplx> parse_list(const std::vector<std::string>& items, const std::string& flag) {
    std::vector<cplx> out;
    for (const auto& s : items) {
        try {
            out.push_back(parse_complex(s));
        } catch (const InputError& e) {
            throw InputError(flag + ": " + e.what());
        }
    }
    return out;
}

CommutingTuple load_tuple(const Config& c) {
    if (c.in.empty()) throw InputError("--in: a tuple file is required");
    return io::read_tuple(io::load_file(c.in));
}

double commutator_scale(const CommutingTuple& T) {
    const double s = std::max(1.0, T.norm());
    return s * s;
}

void require_commuting(const CommutingTuple& T, double tol) {
    const double limit = tol * commutator_scale(T);
    if (T.commutator_defect > limit) {
        std::ostringstream m;
        m << "commutator defect " << T.commutator_defect << " exceeds tolerance " << limit;
        throw ValidationError(m.str());
    }
}

Outcome tuple_check(const Config& c) {
    const CommutingTuple T = load_tuple(c);
    const double limit = c.tol * commutator_scale(T);
    Outcome o;
    o.result = Json{{"d", T.dim()},
                    {"size", T.size()},
                    {"norm", T.norm()},
                    {"commutator_defect", T.commutator_defect},
                    {"commutator_limit", limit},
                    {"commuting", T.commutator_defect <= limit},
                    {"row_defect", T.row_defect},
                    {"row_contraction", T.row_defect <= c.tol}};
    if (T.cyclic_vector) {
        const KrylovResult k = krylov(T, *T.cyclic_vector, T.size());
        o.result["cyclic"] = k.is_cyclic;
        o.result["layer_dims"] = k.layer_dims;
        o.result["layers_direct"] = k.layers_direct;
    }
    if (T.commutator_defect > limit) {
        std::ostringstream m;
        m << "commutator defect " << T.commutator_defect << " exceeds tolerance " << limit;
        o.code = 2;
        o.message = m.str();
    }
    return o;
}

Outcome tuple_ann(const Config& c) {
    const CommutingTuple T = load_tuple(c);
    require_commuting(T, c.tol);
    const int D = c.deg >= 0 ? c.deg : 2 * T.size();
    const PolyIdeal I = annihilator_slice(T, D);
    Json basis = Json::array();
    for (const auto& p : I.basis_polynomials()) basis.push_back(io::write(p));
    Outcome o;
    o.result = Json{{"degree_bound", D}, {"slice_dim", I.slice_dim()}, {"basis", std::move(basis)}};
    return o;
}

Outcome jordan(const Config& c) {
    const CommutingTuple T = load_tuple(c);
    require_commuting(T, c.tol);
    Outcome o;
    o.result = io::report(jordan_decompose(T, c.cluster_tol, c.seed, c.residual_tol));
    return o;
}

Outcome model_monomial(const Config& c) {
    if (c.in.empty()) throw InputError("--in: an ideal file is required");
    const io::IdealFile f = io::read_ideal(io::load_file(c.in));
    Outcome o;
    o.result = io::report(monomial_model(f.generators, f.d));
    return o;
}

Outcome model_jet(const Config& c) {
    if (c.in.empty()) throw InputError("--in: a jet model file is required");
    const io::JetModelFile f = io::read_jet_model(io::load_file(c.in));
    const ModelTuple m = jet_model(f.data, c.deg >= 0 ? c.deg : f.truncation);
    Json checks = Json::array();
    Outcome o;
    for (const auto& r : verify_localizations(m, f.data)) {
        checks.push_back(Json{{"z", io::write(r.z)}, {"pass", r.pass}, {"distance", r.distance}, {"offending", r.offending}});
        if (!r.pass && o.code == 0) {
            o.code = 2;
            o.message = "localization mismatch: " + r.offending;
        }
    }
    o.result = Json{{"model", io::report(m)}, {"localizations", std::move(checks)}};
    return o;
}

Outcome interp_check(const Config& c) {
    if (c.in.empty()) throw InputError("--in: a points file is required");
    const io::PointsFile f = io::read_points(io::load_file(c.in));
    Outcome o;
    o.result = Json{{"separation", io::report(strong_separation(f.points))}};
    if (!f.targets.empty()) o.result["pick"] = io::report(pick_min_norm(f.points, f.targets));
    if (!c.omega.empty()) {
        const ThetaJets t = theta_jets(f.points, c.omega, c.kappa, c.seed);
        o.result["theta"] = io::report(t);
        if (!t.pass) {
            o.code = 2;
            o.message = "theta jet certificate failed";
        }
    }
    return o;
}

Outcome pick(const Config& c) {
    if (c.in.empty()) throw InputError("--in: a points file is required");
    const io::PointsFile f = io::read_points(io::load_file(c.in));
    const std::vector<cplx> targets = c.targets.empty() ? f.targets : parse_list(c.targets, "--targets");
    if (targets.size() != f.points.size())
        throw InputError("targets: expected " + std::to_string(f.points.size()) + " values");
    Outcome o;
    o.result = io::report(pick_min_norm(f.points, targets));
    return o;
}

std::vector<MultiIndex> inferred_generators(const CommutingTuple& N) {
    PowerTable pw(N);
    std::map<MultiIndex, bool> zero;
    std::vector<MultiIndex> gens;
    for (int k = 1; k <= N.size(); ++k)
        for (const auto& a : enumerate_homogeneous(N.dim(), k)) {
            const bool z = pw(a).norm() <= 1e-10;
            zero[a] = z;
            if (!z) continue;
            bool minimal = true;
            for (int j = 0; j < N.dim() && minimal; ++j)
                if (a[j] > 0) {
                    MultiIndex b = a;
                    b[j] -= 1;
                    if (b.degree() > 0 && zero[b]) minimal = false;
                }
            if (minimal) gens.push_back(a);
        }
    return gens;
}

std::vector<MultiIndex> ideal_generators(const std::string& path, int d) {
    const io::IdealFile f = io::read_ideal(io::load_file(path));
    if (f.d != d) throw InputError("d: ideal has " + std::to_string(f.d) + " variables, tuple has " + std::to_string(d));
    std::vector<MultiIndex> gens;
    for (std::size_t i = 0; i < f.generators.size(); ++i) {
        const auto& t = f.generators[i].terms();
        if (t.size() != 1) throw InputError("generators[" + std::to_string(i) + "]: not a monomial");
        gens.push_back(t.begin()->first);
    }
    return gens;
}

Outcome nilsim(const Config& c) {
    const CommutingTuple N = load_tuple(c);
    if (!N.cyclic_vector) throw InputError("cyclic_vector: missing");
    require_commuting(N, c.tol);
    const CVector& xi = *N.cyclic_vector;
    const std::vector<MultiIndex> gens =
        c.ideal.empty() ? inferred_generators(N) : ideal_generators(c.ideal, N.dim());
    Json g = Json::array();
    for (const auto& a : gens) g.push_back(io::write(a));

    const NilsimHypotheses h = check_hypotheses(N, xi, c.grid);
    const SimilarityCertificate cert = h.admissible ? build_similarity(N, xi, gens, c.grid)
                                                    : explicit_similarity(N, xi, gens, c.grid);
    const NecessityReport nec = necessity_check(N, xi, cert.X, cert.model, std::max(c.tol, 1e-8));
    Outcome o;
    o.result = Json{{"generators", std::move(g)},
                    {"certificate", io::report(cert)},
                    {"necessity", io::report(nec)}};
    if (!h.admissible) {
        o.code = 2;
        o.message = h.gauge_verified ? "inadmissible: epsilon * card >= 1" : "inadmissible: gauge unverified";
    } else if (!cert.pass) {
        o.code = 2;
        o.message = "certificate bounds failed";
    } else if (!nec.pass) {
        o.code = 2;
        o.message = "necessity check failed";
    }
    return o;
}

Outcome from_repro(const ReproReport& r) {
    Outcome o;
    o.result = io::report(r);
    o.table = format_table(r);
    if (!r.pass) {
        o.code = 2;
        for (const auto& row : r.rows)
            if (!row.pass) {
                o.message = "row failed: " + row.quantity;
                break;
            }
    }
    return o;
}

std::vector<double> eps_or_default(const Config& c) {
    return c.eps.empty() ? std::vector<double>{0.1, 0.01, 0.001} : c.eps;
}

Outcome repro_one(const Config& c) {
    const std::vector<cplx> lambdas = c.lambda.empty() ? std::vector<cplx>{0.0} : parse_list(c.lambda, "--lambda");
    return from_repro(example_one_variable(lambdas, eps_or_default(c), c.seed, c.jobs));
}

Outcome repro_two(const Config& c) {
    std::vector<Point> targets;
    if (!c.in.empty()) {
        const io::PointsFile f = io::read_points(io::load_file(c.in));
        if (f.d != 2) throw InputError("d: automorphism targets need d = 2");
        targets = f.points;
    }
    return from_repro(example_two_variable(eps_or_default(c), targets, c.seed, c.jobs));
}

Outcome dichotomy(const Config& c) {
    if (c.lambda.empty()) throw InputError("--lambda: points are required");
    return from_repro(dichotomy_demo(parse_list(c.lambda, "--lambda"), c.kappa, c.eps, c.seed, c.jobs));
}

Json header(const Config& c) {
    return Json{{"schema_version", kSchemaVersion},
                {"tool", "dakit"},
                {"version", kVersion},
                {"subcommand", c.subcommand},
                {"seed", c.seed},
                {"tolerances",
                 {{"tol", c.tol}, {"cluster_tol", c.cluster_tol}, {"residual_tol", c.residual_tol}, {"grid", c.grid}}},
                {"input", c.in}};
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw InputError("-o: cannot write " + c.out);
    f << text;
}

const char* status_name(int code) {
    switch (code) {
        case 0: return "ok";
        case 1: return "input_error";
        case 2: return "validation_failed";
        default: return "numerical_failure";
    }
}

}  // namespace

cplx parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ') s.push_back(ch);
    if (s.empty()) throw InputError("empty complex number");
    auto number = [&](const std::string& part) {
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw InputError("malformed complex number '" + text + "'");
        }
        if (used != part.size() || !std::isfinite(v)) throw InputError("malformed complex number '" + text + "'");
        return v;
    };
    if (s.back() != 'i') return number(s);
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    if (split == std::string::npos) return {0.0, number(s)};
    return {number(s.substr(0, split)), number(s.substr(split))};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config c;
    CLI::App app{"Numerical toolkit for commuting tuples, ball models and interpolation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::map<std::string, std::function<Outcome(const Config&)>> handlers;
    auto add = [&](const std::string& name, const std::string& about, std::function<Outcome(const Config&)> fn) {
        CLI::App* s = app.add_subcommand(name, about);
        s->add_option("--in", c.in, "input JSON file");
        s->add_option("-o,--out", c.out, "report path (stdout when absent)");
        s->add_option("--tol", c.tol, "validation tolerance, relative to the input norm")->capture_default_str();
        s->add_option("--seed", c.seed, "random seed")->capture_default_str();
        s->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
        handlers[name] = std::move(fn);
        return s;
    };

    add("tuple-check", "commutator and row-contraction defects, cyclicity", tuple_check);
    add("tuple-ann", "annihilating ideal slice", tuple_ann)
        ->add_option("--deg", c.deg, "degree bound (default twice the matrix size)");
    CLI::App* jd = add("jordan", "joint spectrum and Jordan-type decomposition", jordan);
    jd->add_option("--cluster-tol", c.cluster_tol, "eigenvalue clustering tolerance")->capture_default_str();
    jd->add_option("--residual-tol", c.residual_tol, "similarity residual tolerance, relative")->capture_default_str();
    add("model-monomial", "model tuple of a monomial ideal", model_monomial);
    add("model-jet", "model tuple of point-jet data with localization checks", model_jet)
        ->add_option("--deg", c.deg, "truncation degree override");
    CLI::App* ic = add("interp-check", "separation constants and separating multiplier jets", interp_check);
    ic->add_option("--kappa", c.kappa, "jet order")->check(CLI::NonNegativeNumber);
    ic->add_option("--omega", c.omega, "indices of the subset")->delimiter(',');
    add("pick", "minimal interpolation norm", pick)
        ->add_option("--targets", c.targets, "complex targets, comma separated")
        ->delimiter(',');
    CLI::App* ns = add("nilsim", "similarity certificate for a nilpotent cyclic tuple", nilsim);
    ns->add_option("--ideal", c.ideal, "monomial ideal file (default: inferred from the tuple)");
    ns->add_option("--grid", c.grid, "gauge grid size")->check(CLI::Range(2, 1 << 20))->capture_default_str();
    CLI::App* r2 = add("repro-6-2", "one-variable intertwiner example", repro_one);
    r2->add_option("--eps", c.eps, "epsilon values")->delimiter(',');
    r2->add_option("--lambda", c.lambda, "eigenvalues, one for all eps or one per eps")->delimiter(',');
    r2->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    CLI::App* r4 = add("repro-6-4", "two-variable corner pair example", repro_two);
    r4->add_option("--eps", c.eps, "epsilon values")->delimiter(',');
    r4->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    CLI::App* dc = add("dichotomy", "order-zero and order-one similarity growth", dichotomy);
    dc->add_option("--lambda", c.lambda, "points of the disc")->delimiter(',');
    dc->add_option("--kappa", c.kappa, "0 or 1")->capture_default_str();
    dc->add_option("--eps", c.eps, "block epsilons for kappa = 1")->delimiter(',');
    dc->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << "\n";
        return 1;
    }
    for (const auto* s : app.get_subcommands()) c.subcommand = s->get_name();

    Json report = header(c);
    Outcome o;
    try {
        o = handlers.at(c.subcommand)(c);
    } catch (const InputError& e) {
        o.code = 1;
        o.message = e.what();
    } catch (const nlohmann::json::exception& e) {
        o.code = 1;
        o.message = e.what();
    } catch (const ValidationError& e) {
        o.code = 2;
        o.message = e.what();
    } catch (const NumericalError& e) {
        o.code = 3;
        o.message = e.what();
    } catch (const std::exception& e) {
        o.code = 3;
        o.message = e.what();
    }
    report["status"] = status_name(o.code);
    if (!o.message.empty()) report["message"] = o.message;
    if (o.code != 1) report["result"] = std::move(o.result);

    try {
        if (c.format == "text" && o.code != 1)
            emit(c, o.table, out);
        else
            emit(c, report.dump(2) + "\n", out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    if (o.code != 0) err << "error: " << o.message << "\n";
    return o.code;
}

}  // namespace dakit::cli
