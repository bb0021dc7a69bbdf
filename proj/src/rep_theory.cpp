#include "flatorb/rep_theory.hpp"

#include "flatorb/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace flatorb {

std::string to_string(DivisionType t) {
    switch (t) {
        case DivisionType::R: return "R";
        case DivisionType::C: return "C";
        case DivisionType::H: return "H";
    }
    return "?";
}

long factor_dimension(DivisionType t, long m) {
    switch (t) {
        case DivisionType::R: return m * (m + 1) / 2;
        case DivisionType::C: return m * m;
        case DivisionType::H: return m * (2 * m - 1);
    }
    return 0;
}

std::string IsotypicReport::summary() const {
    std::ostringstream os;
    os << "components: ";
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& c = components[i];
        os << (i ? "," : "") << "(m=" << c.multiplicity << "," << to_string(c.division_type) << ",d=" << c.factor_dim
           << ")";
    }
    os << "; dim " << total_dim;
    return os.str();
}

std::string IsotypicReport::signature() const {
    std::vector<std::string> parts;
    for (const auto& c : components)
        parts.push_back(std::to_string(c.irreducible_dim) + ":" + std::to_string(c.multiplicity) + ":" +
                        to_string(c.division_type));
    std::sort(parts.begin(), parts.end());
    std::string s;
    for (const auto& p : parts) s += p + ";";
    return s;
}

namespace {

std::vector<std::size_t> distinct_generators(const HolonomyData& h) {
    std::set<std::size_t> s(h.generators.begin(), h.generators.end());
    s.erase(0);
    return {s.begin(), s.end()};
}

}  // namespace

std::vector<RatMatrix> commutant_basis(const HolonomyData& h) {
    const std::size_t n = h.elements.at(0).rows();
    RatMatrix stacked;
    for (std::size_t gi : distinct_generators(h)) {
        const RatMatrix& a = h.elements[gi];
        // (X A - A X)_{ij} as a linear form in X_{kl}, variable index k*n + l.
        RatMatrix c(n * n, n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    c(i * n + j, i * n + k) += a(k, j);
                    c(i * n + j, k * n + j) -= a(i, k);
                }
        stacked = vstack(stacked, c);
    }
    std::vector<RatMatrix> out;
    if (stacked.rows() == 0) {
        for (std::size_t k = 0; k < n * n; ++k) {
            RatMatrix x(n, n);
            x(k / n, k % n) = 1;
            out.push_back(x);
        }
        return out;
    }
    for (const auto& v : kernel(stacked)) {
        RatMatrix x(n, n);
        for (std::size_t k = 0; k < n * n; ++k) x(k / n, k % n) = v[k];
        out.push_back(x);
    }
    return out;
}

std::vector<RatMatrix> invariant_forms_basis(const HolonomyData& h) {
    const std::size_t n = h.elements.at(0).rows();
    std::vector<std::pair<std::size_t, std::size_t>> vars;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) vars.emplace_back(i, j);
    auto sym = [&](const RatVec& v) {
        RatMatrix s(n, n);
        for (std::size_t k = 0; k < vars.size(); ++k) {
            s(vars[k].first, vars[k].second) = v[k];
            s(vars[k].second, vars[k].first) = v[k];
        }
        return s;
    };
    RatMatrix stacked;
    for (std::size_t gi : distinct_generators(h)) {
        const RatMatrix& a = h.elements[gi];
        RatMatrix c(vars.size(), vars.size());
        for (std::size_t k = 0; k < vars.size(); ++k) {
            RatVec e(vars.size());
            e[k] = 1;
            RatMatrix s = sym(e);
            RatMatrix d = a.transpose() * s * a - s;
            for (std::size_t r = 0; r < vars.size(); ++r) c(r, k) = d(vars[r].first, vars[r].second);
        }
        stacked = vstack(stacked, c);
    }
    std::vector<RatMatrix> out;
    if (stacked.rows() == 0) {
        for (std::size_t k = 0; k < vars.size(); ++k) {
            RatVec e(vars.size());
            e[k] = 1;
            out.push_back(sym(e));
        }
        return out;
    }
    for (const auto& v : kernel(stacked)) out.push_back(sym(v));
    return out;
}

namespace {

constexpr double kClusterTol = 1e-8;
constexpr double kRankTol = 1e-8;

class Unstable : public Error {
public:
    Unstable() : Error("decomposition unstable; retry with new seed") {}
};

struct Irreducible {
    Eigen::MatrixXd q;  // orthonormal columns, orthonormal coordinates
    double eigenvalue;
};

Eigen::MatrixXd random_symmetric(Rng& rng, Eigen::Index k) {
    Eigen::MatrixXd s(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i; j < k; ++j) s(i, j) = s(j, i) = rng.uniform(-1.0, 1.0);
    return s;
}

/// Split span(q) into eigenspaces of a random H-averaged symmetric operator.
std::vector<Irreducible> split(const std::vector<Eigen::MatrixXd>& group, const Eigen::MatrixXd& q, Rng& rng) {
    const Eigen::Index k = q.cols();
    Eigen::MatrixXd s = random_symmetric(rng, q.rows());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(q.rows(), q.rows());
    for (const auto& a : group) t += a * s * a.transpose();
    Eigen::MatrixXd r = q.transpose() * t * q;
    r = 0.5 * (r + r.transpose());
    double fn = r.norm();
    if (fn > 0) r /= fn;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
    const auto& ev = es.eigenvalues();
    std::vector<Irreducible> out;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= k; ++i) {
        if (i < k) {
            double gap = ev(i) - ev(i - 1);
            if (gap > kClusterTol && gap < 1e-6) throw Unstable();
            if (gap <= kClusterTol) continue;
        }
        out.push_back({q * es.eigenvectors().middleCols(start, i - start), ev(start)});
        start = i;
    }
    return out;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
}

Eigen::MatrixXd restrict(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) { return q.transpose() * a * q; }

/// dim of {X : X rho(A) = rho'(A) X for all generators}.
long hom_dim(const std::vector<Eigen::MatrixXd>& gens, const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2) {
    const Eigen::Index k1 = q1.cols(), k2 = q2.cols();
    if (gens.empty()) return k1 * k2;
    Eigen::MatrixXd sys(static_cast<Eigen::Index>(gens.size()) * k1 * k2, k1 * k2);
    sys.setZero();
    Eigen::Index row = 0;
    for (const auto& a : gens) {
        Eigen::MatrixXd r1 = restrict(a, q1), r2 = restrict(a, q2);
        // X is k2 x k1, column-major vec.
        Eigen::MatrixXd blk = kron(r1.transpose(), Eigen::MatrixXd::Identity(k2, k2)) -
                              kron(Eigen::MatrixXd::Identity(k1, k1), r2);
        sys.middleRows(row, k1 * k2) = blk;
        row += k1 * k2;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys);
    const auto& sv = svd.singularValues();
    double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
    long rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > kRankTol * scale) ++rank;
    return k1 * k2 - rank;
}

IsotypicReport decompose_once(const HolonomyData& h, const RatMatrix& gram, std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(gram.rows());
    Eigen::MatrixXd g = to_eigen(gram);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw Error("gram form is not positive definite");
    Eigen::MatrixXd l = llt.matrixL();
    Eigen::MatrixXd lt = l.transpose();
    Eigen::MatrixXd lt_inv = lt.inverse();

    std::vector<Eigen::MatrixXd> group, gens;
    for (const auto& a : h.elements) group.push_back(lt * to_eigen(a) * lt_inv);
    for (std::size_t gi : distinct_generators(h)) gens.push_back(group[gi]);

    Rng rng(seed);
    std::vector<Irreducible> pieces = split(group, Eigen::MatrixXd::Identity(n, n), rng);
    // Refine until a fresh operator no longer splits any piece.
    for (int round = 0; round < 3; ++round) {
        std::vector<Irreducible> next;
        bool changed = false;
        for (const auto& p : pieces) {
            auto sub = split(group, p.q, rng);
            if (sub.size() > 1) changed = true;
            if (sub.size() == 1) next.push_back(p);
            else next.insert(next.end(), sub.begin(), sub.end());
        }
        pieces = std::move(next);
        if (!changed && round > 0) break;
    }

    // Group irreducibles into isotypic classes.
    std::vector<int> cls(pieces.size(), -1);
    int ncls = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (cls[i] >= 0) continue;
        cls[i] = ncls;
        for (std::size_t j = i + 1; j < pieces.size(); ++j)
            if (cls[j] < 0 && pieces[j].q.cols() == pieces[i].q.cols() && hom_dim(gens, pieces[i].q, pieces[j].q) > 0)
                cls[j] = ncls;
        ++ncls;
    }

    IsotypicReport rep;
    for (int c = 0; c < ncls; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < pieces.size(); ++i)
            if (cls[i] == c) members.push_back(i);
        const Irreducible& first = pieces[members[0]];
        long end_dim = hom_dim(gens, first.q, first.q);
        if (members.size() > 1 && hom_dim(gens, pieces[members[1]].q, pieces[members[1]].q) != end_dim) throw Unstable();
        IsotypicComponent comp;
        comp.irreducible_dim = first.q.cols();
        comp.multiplicity = static_cast<long>(members.size());
        if (end_dim == 1) comp.division_type = DivisionType::R;
        else if (end_dim == 2) comp.division_type = DivisionType::C;
        else if (end_dim == 4) comp.division_type = DivisionType::H;
        else throw Unstable();
        if (comp.irreducible_dim % end_dim != 0) throw Unstable();
        comp.factor_dim = factor_dimension(comp.division_type, comp.multiplicity);
        comp.eigenvalue = first.eigenvalue;
        Eigen::MatrixXd basis(n, comp.dim());
        Eigen::Index col = 0;
        for (auto i : members) {
            basis.middleCols(col, pieces[i].q.cols()) = lt_inv * pieces[i].q;
            col += pieces[i].q.cols();
        }
        comp.basis = basis;
        rep.components.push_back(std::move(comp));
        rep.total_dim += rep.components.back().factor_dim;
    }
    std::stable_sort(rep.components.begin(), rep.components.end(), [](const auto& a, const auto& b) {
        if (a.irreducible_dim != b.irreducible_dim) return a.irreducible_dim < b.irreducible_dim;
        return a.eigenvalue < b.eigenvalue;
    });
    return rep;
}

}  // namespace

IsotypicReport isotypic_decompose(const HolonomyData& h, const RatMatrix& gram, std::uint64_t seed) {
    long exact = static_cast<long>(invariant_forms_basis(h).size());
    IsotypicReport a = decompose_once(h, gram, seed);
    IsotypicReport b = decompose_once(h, gram, seed + 1);
    if (a.total_dim != exact || b.signature() != a.signature()) throw Unstable();
    a.invariant_form_dim = exact;
    return a;
}

IsotypicReport teich_report(const CrystalGroup& group, std::uint64_t seed) {
    CrystalGroup g = ensure_normalized(group);
    IsotypicReport rep = isotypic_decompose(g.holonomy(), g.gram(), seed);
    if (g.dim() >= 2 && is_torsion_free(g) && g.holonomy().order() > 1) {
        if (rep.components.size() < 2 || rep.total_dim < 2)
            throw Error("internal: torsion-free group with irreducible holonomy representation");
    }
    return rep;
}

std::vector<std::size_t> components_touching(const IsotypicReport& rep, const RatMatrix& gram,
                                             const Eigen::VectorXd& v, double tol) {
    Eigen::MatrixXd g = to_eigen(gram);
    std::vector<std::size_t> out;
    double scale = std::sqrt(std::max(1e-300, v.dot(g * v)));
    for (std::size_t i = 0; i < rep.components.size(); ++i) {
        const auto& b = rep.components[i].basis;
        Eigen::VectorXd coeff = b.transpose() * g * v;
        if (coeff.norm() > tol * scale) out.push_back(i);
    }
    return out;
}

}  // namespace flatorb
