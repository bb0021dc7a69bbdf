#include "flatorb/affine_group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

namespace flatorb {

AffineElement::AffineElement(RatMatrix a, RatVec v) : linear(std::move(a)), translation(std::move(v)) {
    if (!linear.square() || linear.rows() != translation.size())
        throw std::invalid_argument("affine element: dimension mismatch");
}

AffineElement AffineElement::identity(std::size_t n) { return {RatMatrix::identity(n), RatVec(n)}; }

AffineElement AffineElement::pure_translation(const RatVec& v) {
    return {RatMatrix::identity(v.size()), v};
}

AffineElement AffineElement::inverse() const {
    RatMatrix ai = linear.inverse();
    return {ai, -Rat(1) * (ai * translation)};
}

RatVec AffineElement::apply(const RatVec& x) const { return linear * x + translation; }

std::string AffineElement::str() const { return "(" + linear.str() + ", " + to_string(translation) + ")"; }

AffineElement compose(const AffineElement& g, const AffineElement& h) {
    if (g.dim() != h.dim()) throw std::invalid_argument("compose: dimension mismatch");
    return {g.linear * h.linear, g.linear * h.translation + g.translation};
}

// ---------------------------------------------------------------- HolonomyData

std::optional<std::size_t> HolonomyData::find(const RatMatrix& a) const {
    auto it = lookup.find(a.key());
    if (it == lookup.end()) return std::nullopt;
    return it->second;
}

std::size_t HolonomyData::index(const RatMatrix& a) const {
    auto i = find(a);
    if (!i) throw Error("matrix is not in the holonomy group: " + a.str());
    return *i;
}

std::size_t HolonomyData::product(std::size_t i, std::size_t j) const {
    return index(elements[i] * elements[j]);
}

std::size_t HolonomyData::element_order(std::size_t i) const {
    RatMatrix p = elements[i];
    std::size_t k = 1;
    while (!p.is_identity()) {
        p = p * elements[i];
        ++k;
    }
    return k;
}

// ---------------------------------------------------------------- CrystalGroup

CrystalGroup::CrystalGroup(std::size_t n, std::vector<AffineElement> generators, RatMatrix gram, std::string name)
    : n_(n), gens_(std::move(generators)), gram_(std::move(gram)), name_(std::move(name)) {
    if (gram_.rows() == 0) gram_ = RatMatrix::identity(n);
    if (gram_.rows() != n || gram_.cols() != n) throw Error("gram form has wrong size");
    if (!is_positive_definite(gram_)) throw Error("gram form is not symmetric positive definite");
    for (const auto& g : gens_) {
        if (g.dim() != n) throw Error("generator dimension does not match group dimension");
        if (g.linear.det().is_zero()) throw Error("generator linear part is singular");
        if (g.linear.transpose() * gram_ * g.linear != gram_)
            throw Error("generator linear part does not preserve the gram form: " + g.linear.str());
    }
}

const HolonomyData& CrystalGroup::holonomy() const {
    if (!holonomy_) throw Error("group is not normalized");
    return *holonomy_;
}

CrystalGroup CrystalGroup::with_gram(const RatMatrix& gram) const {
    CrystalGroup g(n_, gens_, gram, name_);
    g.holonomy_ = holonomy_;
    return g;
}

namespace {

std::vector<RatVec> unit_vectors(std::size_t n) {
    std::vector<RatVec> e;
    for (std::size_t i = 0; i < n; ++i) {
        RatVec v(n);
        v[i] = 1;
        e.push_back(v);
    }
    return e;
}

}  // namespace

HolonomyData enumerate_point_group(const CrystalGroup& g, std::size_t cap) {
    const std::size_t n = g.dim();
    HolonomyData h;
    h.elements.push_back(RatMatrix::identity(n));
    h.translations.push_back(RatVec(n));
    h.lookup[h.elements[0].key()] = 0;
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        for (const auto& gen : g.generators()) {
            RatMatrix a = h.elements[i] * gen.linear;
            if (h.find(a)) continue;
            if (h.elements.size() >= cap) throw Error("not crystallographic as presented: point group exceeds enumeration cap");
            h.elements.push_back(a);
            h.translations.push_back(reduce_mod1(h.elements[i] * gen.translation + h.translations[i]));
            h.lookup[a.key()] = h.elements.size() - 1;
            queue.push_back(h.elements.size() - 1);
        }
    }
    for (const auto& gen : g.generators()) h.generators.push_back(h.index(gen.linear));
    return h;
}

RatMatrix translation_lattice(const CrystalGroup& g) {
    const std::size_t n = g.dim();
    HolonomyData h = enumerate_point_group(g);
    std::vector<RatVec> trans = unit_vectors(n);
    // Schreier generators of the translation subgroup.
    for (std::size_t i = 0; i < h.order(); ++i)
        for (const auto& gen : g.generators()) {
            std::size_t j = h.index(h.elements[i] * gen.linear);
            RatVec t = h.elements[i] * gen.translation + h.translations[i] - h.translations[j];
            if (!is_zero(t)) trans.push_back(t);
        }
    RatMatrix basis = lattice_basis(trans, n);
    if (basis.cols() != n) throw Error("not crystallographic as presented: translations do not span");
    return basis;
}

CrystalGroup change_basis(const CrystalGroup& g, const RatMatrix& b) {
    const std::size_t n = g.dim();
    RatMatrix bi = b.inverse();
    std::vector<AffineElement> gens;
    for (const auto& gen : g.generators()) {
        RatMatrix a = bi * gen.linear * b;
        gens.emplace_back(a, bi * gen.translation);
    }
    return CrystalGroup(n, gens, b.transpose() * g.gram() * b, g.name());
}

CrystalGroup normalize(const CrystalGroup& g) {
    if (g.normalized()) return g;
    const std::size_t n = g.dim();
    RatMatrix basis = translation_lattice(g);
    RatMatrix bi = basis.inverse();

    std::vector<AffineElement> gens;
    std::set<std::string> seen;
    for (const auto& gen : g.generators()) {
        RatMatrix a = bi * gen.linear * basis;
        if (!a.is_integral())
            throw Error("linear part does not preserve the translation lattice: " + gen.linear.str());
        if (a.is_identity()) continue;
        AffineElement e(a, reduce_mod1(bi * gen.translation));
        if (seen.insert(e.str()).second) gens.push_back(e);
    }
    CrystalGroup out(n, gens, basis.transpose() * g.gram() * basis, g.name());
    auto h = std::make_shared<HolonomyData>(enumerate_point_group(out));
    for (const auto& a : h->elements) {
        Rat d = a.det();
        if (d != Rat(1) && d != Rat(-1)) throw Error("holonomy element is not unimodular");
    }
    out.holonomy_ = std::move(h);
    return out;
}

CrystalGroup ensure_normalized(const CrystalGroup& g) { return g.normalized() ? g : normalize(g); }

HolonomyData holonomy(const CrystalGroup& g) { return ensure_normalized(g).holonomy(); }

std::optional<std::pair<AffineElement, RatVec>> fixed_point_translate(const RatMatrix& a, const RatVec& v) {
    const std::size_t n = v.size();
    // P = average of powers of A: the projector onto ker(A - I) along im(A - I).
    RatMatrix p(n, n), pw = RatMatrix::identity(n);
    std::size_t k = 0;
    do {
        p = p + pw;
        pw = pw * a;
        ++k;
        if (k > 10000) throw Error("linear part has infinite order");
    } while (!pw.is_identity());
    p = p.scaled(Rat(1) / Rat(static_cast<long>(k)));
    auto z = integer_solve(p, p * v);
    if (!z) return std::nullopt;
    RatVec w = v - *z;
    auto sol = solve_rational(RatMatrix::identity(n) - a, w);
    if (!sol) throw Error("internal: projected fixed-point equation inconsistent");
    return std::make_pair(AffineElement(a, w), sol->particular);
}

TorsionReport torsion_check(const CrystalGroup& group) {
    CrystalGroup g = ensure_normalized(group);
    const HolonomyData& h = g.holonomy();
    TorsionReport rep;
    for (std::size_t i = 1; i < h.order(); ++i) {
        auto fp = fixed_point_translate(h.elements[i], h.translations[i]);
        if (fp) {
            rep.torsion_free = false;
            rep.witness = fp->first;
            rep.fixed_point = fp->second;
            return rep;
        }
    }
    return rep;
}

bool is_torsion_free(const CrystalGroup& g) { return torsion_check(g).torsion_free; }

double volume(const CrystalGroup& group) {
    CrystalGroup g = ensure_normalized(group);
    return std::sqrt(g.gram().det().to_double()) / static_cast<double>(g.holonomy().order());
}

namespace {

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

RatMatrix exterior_power(const RatMatrix& a, std::size_t k) {
    const std::size_t n = a.rows();
    std::vector<std::vector<std::size_t>> idx;
    std::vector<std::size_t> cur;
    subsets(n, k, 0, cur, idx);
    RatMatrix w(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) {
            if (k == 0) {
                w(r, c) = 1;
                continue;
            }
            RatMatrix minor(k, k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) minor(i, j) = a(idx[r][i], idx[c][j]);
            w(r, c) = minor.det();
        }
    return w;
}

long betti(const CrystalGroup& group, std::size_t k) {
    CrystalGroup g = ensure_normalized(group);
    if (k > g.dim()) throw std::invalid_argument("betti: degree exceeds dimension");
    const HolonomyData& h = g.holonomy();
    RatMatrix stacked;
    std::size_t size = 0;
    std::set<std::size_t> gens(h.generators.begin(), h.generators.end());
    for (std::size_t gi : gens) {
        RatMatrix w = exterior_power(h.elements[gi], k);
        size = w.rows();
        stacked = vstack(stacked, w - RatMatrix::identity(size));
    }
    if (gens.empty()) return static_cast<long>(exterior_power(RatMatrix::identity(g.dim()), k).rows());
    return static_cast<long>(size - stacked.rank());
}

std::string Homology::str() const {
    std::vector<std::string> parts;
    if (free_rank == 1) parts.push_back("Z");
    else if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
    for (const auto& t : torsion) parts.push_back("Z" + t.get_str());
    if (parts.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "+" : "") + parts[i];
    return s;
}

Homology first_homology(const CrystalGroup& group) {
    CrystalGroup g = ensure_normalized(group);
    const HolonomyData& h = g.holonomy();
    const std::size_t n = g.dim(), m = h.order();
    // Generators: t_1..t_n, then s_A for each holonomy element.
    std::vector<RatVec> rel;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t j = 0; j < n; ++j) {
            RatVec r(n + m);
            for (std::size_t k = 0; k < n; ++k) r[k] = h.elements[a](k, j) - Rat(k == j ? 1 : 0);
            if (!is_zero(r)) rel.push_back(r);
        }
    {
        RatVec r(n + m);
        r[n] = 1;
        rel.push_back(r);
    }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            std::size_t ab = h.product(a, b);
            RatVec c = h.translations[a] + h.elements[a] * h.translations[b] - h.translations[ab];
            RatVec r(n + m);
            for (std::size_t k = 0; k < n; ++k) r[k] = -c[k];
            r[n + a] += 1;
            r[n + b] += 1;
            r[n + ab] -= 1;
            if (!is_zero(r)) rel.push_back(r);
        }
    auto inv = smith_invariants(RatMatrix::from_rows(rel, n + m));
    Homology out;
    out.free_rank = n + m - inv.size();
    for (const auto& d : inv)
        if (d > 1) out.torsion.push_back(d);
    std::sort(out.torsion.begin(), out.torsion.end());
    return out;
}

bool is_orientable(const CrystalGroup& group) {
    CrystalGroup g = ensure_normalized(group);
    for (const auto& a : g.holonomy().elements)
        if (a.det() != Rat(1)) return false;
    return true;
}

std::string holonomy_type(const CrystalGroup& group) {
    CrystalGroup g = ensure_normalized(group);
    const HolonomyData& h = g.holonomy();
    std::size_t order = h.order(), max_order = 1;
    for (std::size_t i = 0; i < order; ++i) max_order = std::max(max_order, h.element_order(i));
    if (order == 1) return "1";
    if (max_order == order) return "Z" + std::to_string(order);
    if (order == 4) return "Z2xZ2";
    bool abelian = true;
    for (std::size_t i = 0; i < order && abelian; ++i)
        for (std::size_t j = 0; j < order; ++j)
            if (h.elements[i] * h.elements[j] != h.elements[j] * h.elements[i]) {
                abelian = false;
                break;
            }
    if (!abelian && order % 2 == 0 && max_order == order / 2) return "D" + std::to_string(order / 2);
    return "order " + std::to_string(order);
}

std::string identify_flat3(const CrystalGroup& group) {
    CrystalGroup g = ensure_normalized(group);
    if (g.dim() != 3 || !is_torsion_free(g)) return {};
    std::string type = holonomy_type(g);
    if (is_orientable(g)) {
        if (type == "1") return "G1";
        if (type == "Z2") return "G2";
        if (type == "Z3") return "G3";
        if (type == "Z4") return "G4";
        if (type == "Z6") return "G5";
        if (type == "Z2xZ2") return "G6";
        return {};
    }
    Homology hom = first_homology(g);
    if (type == "Z2") return hom.torsion.empty() ? "B2" : "B1";
    if (type == "Z2xZ2") {
        if (hom.torsion.size() == 2) return "B3";
        if (hom.torsion.size() == 1 && hom.torsion[0] == 4) return "B4";
    }
    return {};
}

}  // namespace flatorb
