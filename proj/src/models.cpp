#include "dakit/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dakit/errors.hpp"

namespace dakit {

ModelTuple monomial_model(const std::vector<MultiIndex>& generators, int d) {
    if (d < 1) throw InputError("monomial_model: need at least one variable");
    if (generators.empty()) throw InputError("monomial_model: zero ideal has an infinite complement");
    std::vector<int> pure(static_cast<std::size_t>(d), -1);
    for (const auto& g : generators) {
        if (g.dim() != d) throw InputError("monomial_model: generator has wrong number of variables");
        if (g.degree() == 0) throw InputError("monomial_model: improper ideal (contains 1)");
        int support = 0, var = -1;
        for (int j = 0; j < d; ++j)
            if (g[j] > 0) {
                ++support;
                var = j;
            }
        if (support == 1) {
            auto& p = pure[static_cast<std::size_t>(var)];
            p = p < 0 ? g[var] : std::min(p, g[var]);
        }
    }
    int top = 0;
    for (int j = 0; j < d; ++j) {
        if (pure[static_cast<std::size_t>(j)] < 0) {
            std::ostringstream os;
            os << "monomial_model: infinite complement, no pure power of x" << (j + 1) << " among the generators";
            throw InputError(os.str());
        }
        top += pure[static_cast<std::size_t>(j)] - 1;
    }
    auto in_ideal = [&](const MultiIndex& a) {
        for (const auto& g : generators)
            if (a.dominates(g)) return true;
        return false;
    };
    ModelTuple m;
    m.provenance = ModelProvenance::Monomial;
    m.generators = generators;
    for (const auto& a : enumerate(d, top))
        if (!in_ideal(a)) m.standard_monomials.push_back(a);
    const MonomialIndex idx(m.standard_monomials);
    const int n = idx.size();
    std::vector<CMatrix> Z(static_cast<std::size_t>(d), CMatrix::Zero(n, n));
    for (int i = 0; i < n; ++i) {
        const MultiIndex& a = idx.at(i);
        for (int j = 0; j < d; ++j) {
            const int k = idx.find(a.raised(j));
            if (k < 0) continue;
            Z[static_cast<std::size_t>(j)](k, i) = std::sqrt(static_cast<double>(a[j] + 1) / (a.degree() + 1));
        }
    }
    m.Z = validate(std::move(Z));
    m.cyclic = CVector::Zero(n);
    m.cyclic(0) = 1.0;
    m.Z.cyclic_vector = m.cyclic;
    return m;
}

ModelTuple monomial_model(const std::vector<Polynomial>& generators, int d) {
    std::vector<MultiIndex> mons;
    for (const auto& g : generators) {
        if (g.dim() != d) throw InputError("monomial_model: generator has wrong number of variables");
        if (g.terms().size() != 1) throw InputError("monomial_model: non-monomial generator " + g.str());
        mons.push_back(g.terms().begin()->first);
    }
    return monomial_model(mons, d);
}

CMatrix gauge_unitary(const ModelTuple& model, double t) {
    if (model.provenance != ModelProvenance::Monomial)
        throw InputError("gauge_unitary: needs a monomial model");
    const auto n = static_cast<Eigen::Index>(model.standard_monomials.size());
    CMatrix W = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        W(i, i) = std::polar(1.0, model.standard_monomials[static_cast<std::size_t>(i)].degree() * t);
    return W;
}

int local_order(const LocalIdealData& a, int max_kappa) {
    const int d = static_cast<int>(a.z.size());
    for (const auto& g : a.generators)
        if (g.dim() != d) throw InputError("local ideal generator has wrong number of variables");
    if (a.generators.empty()) throw InputError("local ideal needs generators");
    double scale = 0.0, at_z = 0.0;
    for (const auto& g : a.generators) {
        for (const auto& [al, c] : g.terms()) scale = std::max(scale, std::abs(c));
        at_z = std::max(at_z, std::abs(g(a.z)));
    }
    if (at_z > 1e-9 * std::max(1.0, scale))
        throw InputError("local ideal does not vanish at its point");
    for (int kappa = 0; kappa <= max_kappa; ++kappa) {
        const LocalJetIdeal J = local_ideal_from_generators(a.generators, a.z, kappa + 2);
        const MonomialIndex idx(d, kappa + 1);
        bool all_in = true;
        for (const auto& b : enumerate_homogeneous(d, kappa + 1)) {
            CVector e = CVector::Zero(idx.size());
            e(idx.find(b)) = 1.0;
            if (!J.contains(e)) {
                all_in = false;
                break;
            }
        }
        if (all_in) return kappa;
    }
    throw InputError("local ideal does not contain a power of the maximal ideal up to the order bound");
}

namespace {

std::vector<Point> validated_points(const std::vector<LocalIdealData>& data) {
    if (data.empty()) throw InputError("jet_model: empty point set");
    const std::size_t d = data.front().z.size();
    std::vector<Point> pts;
    for (const auto& a : data) {
        if (a.z.size() != d || d == 0) throw InputError("jet_model: points must share one dimension");
        require_in_ball(a.z, "jet_model");
        for (const auto& p : pts) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += std::norm(p[j] - a.z[j]);
            if (std::sqrt(s) < 1e-12) throw InputError("jet_model: duplicate point");
        }
        pts.push_back(a.z);
    }
    return pts;
}

}  // namespace

ModelTuple jet_model(const std::vector<LocalIdealData>& data, int truncation, double tail_tol,
                     int max_basis) {
    ModelTuple m;
    m.provenance = ModelProvenance::PointJet;
    m.points = validated_points(data);
    const int d = static_cast<int>(m.points.front().size());

    // Inverse systems: functionals c' on jets with c'^T B = 0 for the local ideal basis B.
    std::vector<CMatrix> duals;
    int kmax = 0;
    double rho = 0.0;
    for (const auto& a : data) {
        const int kappa = local_order(a);
        const LocalJetIdeal J = local_ideal_from_generators(a.generators, a.z, kappa + 1);
        CMatrix C = J.rank() ? orthogonal_complement(J.basis.conjugate(), J.jet_dim())
                             : CMatrix::Identity(J.jet_dim(), J.jet_dim());
        m.orders.push_back(kappa);
        m.multiplicities.push_back(static_cast<int>(C.cols()));
        duals.push_back(std::move(C));
        kmax = std::max(kmax, kappa);
        rho = std::max(rho, point_norm(a.z));
    }

    auto tail_at = [&](int D) {
        double t = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i)
            t = std::max(t, jet_tail_bound(point_norm(data[i].z), m.orders[i], D));
        return t;
    };
    int D;
    if (truncation > 0) {
        D = truncation;
        if (D < kmax + 1) throw InputError("jet_model: truncation below the local orders");
        if (tail_at(D) > tail_tol) {
            std::ostringstream os;
            os << "jet_model: tail bound " << tail_at(D) << " above tolerance at truncation " << D;
            throw NumericalError(os.str());
        }
    } else {
        D = std::max(choose_truncation(rho), kmax + 2);
        while (tail_at(D) > tail_tol) D += std::max(4, D / 4);
    }
    if (binomial(d + D, d) > static_cast<double>(max_basis)) {
        std::ostringstream os;
        os << "jet_model: truncation " << D << " needs " << binomial(d + D, d)
           << " basis elements, above the cap " << max_basis;
        throw NumericalError(os.str());
    }
    m.truncation = D;
    m.tail_bound = tail_at(D);

    const FockTruncation trunc(d, D);
    int n = 0;
    for (const auto& C : duals) n += static_cast<int>(C.cols());
    CMatrix H = CMatrix::Zero(trunc.size(), n);
    int col = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto betas = enumerate(d, m.orders[i]);
        std::vector<CVector> jv;
        for (const auto& b : betas) jv.push_back(jet_vector(data[i].z, b, trunc).coeffs);
        const CMatrix& C = duals[i];
        for (Eigen::Index k = 0; k < C.cols(); ++k) {
            for (std::size_t r = 0; r < betas.size(); ++r) {
                const cplx c = C(static_cast<Eigen::Index>(r), k) / static_cast<double>(betas[r].factorial());
                if (c != 0.0) H.col(col) += std::conj(c) * jv[r];
            }
            ++col;
        }
    }
    CMatrix G = H.adjoint() * H;
    G = 0.5 * (G + G.adjoint());
    m.gram_cond = condition_number(G);
    CMatrix Ginv;
    try {
        Ginv = inv_sqrt(G);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("jet_model: Gram matrix numerically singular, points too close for the truncation (") + e.what() + ")");
    }
    m.embedding = H * Ginv;
    std::vector<CMatrix> Z;
    for (int j = 0; j < d; ++j) Z.push_back(m.embedding.adjoint() * trunc.shift(j, m.embedding));
    m.Z = validate(std::move(Z));
    m.cyclic = m.embedding.row(0).adjoint();
    m.Z.cyclic_vector = m.cyclic;
    return m;
}

namespace {

std::string describe_missing(const LocalJetIdeal& have, const LocalJetIdeal& need) {
    for (Eigen::Index k = 0; k < need.basis.cols(); ++k) {
        if (have.contains(need.basis.col(k), 1e-7)) continue;
        std::ostringstream os;
        os << "[";
        for (Eigen::Index r = 0; r < need.basis.rows(); ++r) {
            if (r) os << ", ";
            const cplx v = need.basis(r, k);
            os << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
        }
        os << "]";
        return os.str();
    }
    return "";
}

}  // namespace

std::vector<LocalizationCheck> verify_localizations(const ModelTuple& model,
                                                    const std::vector<LocalIdealData>& data) {
    // A local quotient of dimension m has order <= m - 1 <= n - 1, so jets of order
    // max(kappa + 1, n) decide equality for both sides.
    const int n = model.size();
    std::vector<int> mus;
    int mu_max = 1;
    for (const auto& a : data) {
        mus.push_back(std::max(local_order(a) + 1, n));
        mu_max = std::max(mu_max, mus.back());
    }
    const PolyIdeal ann = annihilator_slice(model.Z, n + mu_max - 1);
    std::vector<LocalizationCheck> out;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int mu = mus[i];
        const LocalJetIdeal expect = local_ideal_from_generators(data[i].generators, data[i].z, mu);
        const LocalJetIdeal got = localize(ann, data[i].z, mu);
        LocalizationCheck c;
        c.z = data[i].z;
        c.distance = subspace_distance(expect.basis, got.basis);
        c.pass = expect == got;
        if (!c.pass) {
            c.offending = describe_missing(got, expect);
            if (c.offending.empty()) c.offending = describe_missing(expect, got);
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace dakit
