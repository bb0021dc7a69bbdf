#include "flatorb/collapse.hpp"

#include "flatorb/numeric.hpp"
#include "flatorb/rep_theory.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <future>
#include <numeric>
#include <sstream>

namespace flatorb {

namespace {

std::string subspace_key(const Subspace& w, std::size_t n) {
    std::string k;
    for (const auto& v : span_basis(w, n)) k += to_string(v) + ";";
    return k;
}

std::string basis_text(const RatMatrix& cols) {
    std::ostringstream os;
    for (std::size_t j = 0; j < cols.cols(); ++j) os << (j ? " " : "") << to_string(cols.col(j));
    return os.str();
}

RatVec concat(const RatVec& a, const RatVec& b) {
    RatVec out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

struct RationalComponents {
    IsotypicReport report;
    std::vector<std::optional<Subspace>> exact;  // per component
};

std::optional<Subspace> rationalize_component(const IsotypicComponent& c, const HolonomyData& h,
                                               const RatMatrix& gram) {
    const std::size_t n = gram.rows();
    Eigen::MatrixXd p = c.basis * c.basis.transpose() * to_eigen(gram);
    RatMatrix q(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto r = rational_approx(p(i, j), 1000000, 1e-7);
            if (!r) return std::nullopt;
            q(i, j) = *r;
        }
    if (q * q != q) return std::nullopt;
    for (const auto& a : h.elements)
        if (a * q != q * a) return std::nullopt;
    auto basis = span_basis(q.columns(), n);
    if (static_cast<long>(basis.size()) != c.dim()) return std::nullopt;
    return basis;
}

RationalComponents rational_components(const HolonomyData& h, const RatMatrix& gram, std::uint64_t seed) {
    RationalComponents rc;
    rc.report = isotypic_decompose(h, gram, seed);
    for (const auto& c : rc.report.components) rc.exact.push_back(rationalize_component(c, h, gram));
    return rc;
}

std::vector<RatVec> all_vectors(const Subspace& a, const Subspace& b) {
    Subspace out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

// ---------------------------------------------------------------- classification

OrbifoldLabel classify(const CrystalGroup& group) {
    CrystalGroup g = ensure_normalized(group);
    const std::size_t n = g.dim();
    if (n == 0) return point_label();
    if (n == 1) return g.holonomy().order() == 1 ? circle_label() : interval_label();
    if (n == 2) return classify2(g);
    OrbifoldLabel l;
    l.holonomy_order = g.holonomy().order();
    if (n == 3) {
        std::string name = identify_flat3(g);
        if (!name.empty()) {
            l.iuc = "flat3:" + name;
            l.orbifold = name;
            l.topology = "flat3";
            return l;
        }
        l.iuc = "orbifold3:" + holonomy_type(g);
        l.orbifold = "R3/G (holonomy " + holonomy_type(g) + ")";
        l.topology = "orbifold3";
        return l;
    }
    l.iuc = "dim" + std::to_string(n) + (is_torsion_free(g) ? ":manifold" : ":orbifold");
    l.orbifold = l.iuc + " |H|=" + std::to_string(l.holonomy_order);
    l.topology = is_torsion_free(g) ? "manifold" : "orbifold";
    return l;
}

// ---------------------------------------------------------------- subspaces

bool is_invariant(const CrystalGroup& g, const Subspace& w) {
    const std::size_t n = g.dim();
    auto base = span_basis(w, n);
    HolonomyData h = g.normalized() ? g.holonomy() : enumerate_point_group(g);
    for (const auto& a : h.elements) {
        Subspace img;
        for (const auto& v : base) img.push_back(a * v);
        if (span_basis(all_vectors(base, img), n).size() != base.size()) return false;
    }
    return true;
}

Subspace rational_closure(const CrystalGroup& g, const Subspace& w) {
    const std::size_t n = g.dim();
    for (const auto& v : w)
        if (v.size() != n) throw std::invalid_argument("subspace vector has wrong length");
    HolonomyData h = g.normalized() ? g.holonomy() : enumerate_point_group(g);
    Subspace acc;
    for (const auto& v : w)
        for (const auto& a : h.elements) acc.push_back(a * v);
    return span_basis(acc, n);
}

std::optional<std::vector<Subspace>> rational_isotypic_components(const CrystalGroup& g, std::uint64_t seed) {
    HolonomyData h = g.normalized() ? g.holonomy() : enumerate_point_group(g);
    RationalComponents rc = rational_components(h, g.gram(), seed);
    std::vector<Subspace> out;
    for (auto& c : rc.exact) {
        if (!c) return std::nullopt;
        out.push_back(*c);
    }
    return out;
}

std::optional<RatVec> rationalize_direction(const Eigen::VectorXd& v) {
    double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) return std::nullopt;
    RatVec r(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        // tolerance well below the typical error 1e-12 of the best approximant with denominator <= 1e6
        auto q = rational_approx(v(i) / scale, 1000000, 1e-14);
        if (!q) return std::nullopt;
        r[static_cast<std::size_t>(i)] = *q;
    }
    return r;
}

Subspace rational_closure(const CrystalGroup& g, const std::vector<Eigen::VectorXd>& w, std::uint64_t seed) {
    const std::size_t n = g.dim();
    Subspace exact;
    std::vector<Eigen::VectorXd> irrational;
    for (const auto& v : w) {
        if (static_cast<std::size_t>(v.size()) != n) throw std::invalid_argument("subspace vector has wrong length");
        if (v.cwiseAbs().maxCoeff() == 0.0) continue;
        if (auto r = rationalize_direction(v)) exact.push_back(*r);
        else irrational.push_back(v / v.cwiseAbs().maxCoeff());
    }
    if (!irrational.empty()) {
        HolonomyData h = g.normalized() ? g.holonomy() : enumerate_point_group(g);
        RationalComponents rc = rational_components(h, g.gram(), seed);
        for (const auto& v : irrational) {
            for (std::size_t idx : components_touching(rc.report, g.gram(), v)) {
                if (!rc.exact[idx]) {
                    // irrational isotypic component: nothing smaller than the whole space is known to be rational
                    Subspace all;
                    for (std::size_t i = 0; i < n; ++i) {
                        RatVec e(n);
                        e[i] = 1;
                        all.push_back(e);
                    }
                    return all;
                }
                for (const auto& b : *rc.exact[idx]) exact.push_back(b);
            }
        }
    }
    return rational_closure(g, exact);
}

Subspace parse_subspace(const std::string& text) {
    Subspace out;
    std::stringstream rows(text);
    std::string row;
    while (std::getline(rows, row, ';')) {
        RatVec v;
        std::stringstream cells(row);
        std::string cell;
        while (std::getline(cells, cell, ',')) v.push_back(Rat::parse(cell));
        if (!v.empty()) out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty subspace");
    for (const auto& v : out)
        if (v.size() != out.front().size()) throw std::invalid_argument("subspace rows differ in length");
    return out;
}

std::vector<Eigen::VectorXd> parse_subspace_float(const std::string& text) {
    std::vector<Eigen::VectorXd> out;
    std::stringstream rows(text);
    std::string row;
    while (std::getline(rows, row, ';')) {
        std::vector<double> v;
        std::stringstream cells(row);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            std::size_t pos = 0;
            double x = std::stod(cell, &pos);
            v.push_back(x);
        }
        if (!v.empty()) out.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    if (out.empty()) throw std::invalid_argument("empty subspace");
    return out;
}

// ---------------------------------------------------------------- collapse

CollapseResult collapse(const CrystalGroup& group, const Subspace& w_in) {
    const std::size_t n = group.dim();
    for (const auto& v : w_in)
        if (v.size() != n) throw std::invalid_argument("subspace vector has wrong length");
    CrystalGroup g = ensure_normalized(group);
    RatMatrix presentation_to_lattice = group.normalized() ? RatMatrix::identity(n) : translation_lattice(group).inverse();
    Subspace w;
    for (const auto& v : w_in) w.push_back(presentation_to_lattice * v);
    if (!is_invariant(g, w)) throw Error("subspace is not invariant under the holonomy");

    std::vector<std::string> log;
    RatMatrix c = saturated_basis(w, n);
    const std::size_t k = c.cols();
    const std::size_t m = n - k;
    log.push_back("lattice basis of W: " + basis_text(c));

    RatMatrix u = extend_to_unimodular(c);
    RatMatrix ui = u.inverse();
    RatMatrix q = ui.block(k, 0, m, n);
    RatMatrix d = u.block(0, k, n, m);
    log.push_back("unimodular extension: " + u.key());

    const RatMatrix& gram = g.gram();
    RatMatrix proj = RatMatrix::identity(n);
    if (k > 0) proj = proj - c * (c.transpose() * gram * c).inverse() * c.transpose() * gram;
    RatMatrix pd = proj * d;
    RatMatrix gram_q = pd.transpose() * gram * pd;

    const HolonomyData& h = g.holonomy();
    std::vector<AffineElement> gens;
    for (std::size_t i = 1; i < h.order(); ++i) {
        RatMatrix a = q * h.elements[i] * d;
        if (!(q * h.elements[i] * c).is_zero()) throw Error("internal: projected action does not preserve W");
        gens.emplace_back(a, q * h.translations[i]);
    }
    CrystalGroup raw(m, gens, gram_q, group.name().empty() ? std::string() : group.name() + "/W");
    RatMatrix lat = translation_lattice(raw);
    if (lat.cols() != m) throw Error("internal: projected lattice is rank deficient");
    CrystalGroup quotient = normalize(raw);
    log.push_back("projected lattice basis: " + basis_text(lat));
    log.push_back("quotient holonomy order: " + std::to_string(quotient.holonomy().order()));
    OrbifoldLabel label = classify(quotient);
    log.push_back("limit: " + label.name());
    RatMatrix qmap = m == 0 ? RatMatrix(0, n) : lat.inverse() * q * presentation_to_lattice;
    return CollapseResult{quotient, label, qmap, log};
}

// ---------------------------------------------------------------- holonomy isomorphisms

bool is_holonomy_isomorphism(const HolonomyData& a, const HolonomyData& b, const std::vector<std::size_t>& map) {
    if (a.order() != b.order() || map.size() != a.order()) return false;
    std::vector<char> hit(b.order(), 0);
    for (std::size_t x : map) {
        if (x >= b.order() || hit[x]) return false;
        hit[x] = 1;
    }
    for (std::size_t i = 0; i < a.order(); ++i)
        for (std::size_t j = 0; j < a.order(); ++j)
            if (map[a.product(i, j)] != b.product(map[i], map[j])) return false;
    return true;
}

namespace {

// Extends generator images to a map on all of a, or nullopt if inconsistent.
std::optional<std::vector<std::size_t>> extend_images(const HolonomyData& a, const HolonomyData& b,
                                                      const std::vector<std::size_t>& gens,
                                                      const std::vector<std::size_t>& images) {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> map(a.order(), unset);
    map[0] = 0;
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t x = queue.front();
        queue.pop_front();
        for (std::size_t s = 0; s < gens.size(); ++s) {
            std::size_t y = a.product(x, gens[s]);
            std::size_t img = b.product(map[x], images[s]);
            if (map[y] == unset) {
                map[y] = img;
                queue.push_back(y);
            } else if (map[y] != img) {
                return std::nullopt;
            }
        }
    }
    for (std::size_t v : map)
        if (v == unset) return std::nullopt;
    return map;
}

bool backtrack(const HolonomyData& a, const HolonomyData& b, const std::vector<std::size_t>& gens,
               std::vector<std::size_t>& images, std::vector<std::size_t>& result) {
    if (images.size() == gens.size()) {
        auto map = extend_images(a, b, gens, images);
        if (map && is_holonomy_isomorphism(a, b, *map)) {
            result = *map;
            return true;
        }
        return false;
    }
    std::size_t ord = a.element_order(gens[images.size()]);
    for (std::size_t cand = 0; cand < b.order(); ++cand) {
        if (b.element_order(cand) != ord) continue;
        images.push_back(cand);
        if (backtrack(a, b, gens, images, result)) return true;
        images.pop_back();
    }
    return false;
}

}  // namespace

std::optional<std::vector<std::size_t>> find_holonomy_isomorphism(const HolonomyData& a, const HolonomyData& b) {
    if (a.order() != b.order()) return std::nullopt;
    if (a.order() > 48) throw Error("holonomy too large for the pairing search; pass an explicit pairing");
    std::vector<std::size_t> gens;
    for (std::size_t g : a.generators)
        if (g != 0 && std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
    std::vector<std::size_t> images, result;
    if (backtrack(a, b, gens, images, result)) return result;
    return std::nullopt;
}

// ---------------------------------------------------------------- product resolution

bool same_group_in_basis(const CrystalGroup& qg, const CrystalGroup& og, const RatMatrix& t) {
    const HolonomyData& hq = qg.holonomy();
    const HolonomyData& ho = og.holonomy();
    if (hq.order() != ho.order() || t.rows() != og.dim() || !t.square()) return false;
    if (!t.is_integral() || abs(t.det()) != Rat(1)) return false;
    RatMatrix ti = t.inverse();
    for (std::size_t i = 0; i < ho.order(); ++i) {
        auto j = hq.find(t * ho.elements[i] * ti);
        if (!j) return false;
        if (reduce_mod1(t * ho.translations[i]) != hq.translations[*j]) return false;
    }
    return true;
}

CrystalGroup product_resolution(const CrystalGroup& orb_in, const CrystalGroup& mfd_in,
                                std::optional<std::vector<std::size_t>> pairing, const Rat& lambda) {
    if (lambda.sign() <= 0) throw Error("scale parameter must be positive");
    CrystalGroup orb = ensure_normalized(orb_in);
    CrystalGroup mfd = ensure_normalized(mfd_in);
    if (!is_torsion_free(mfd)) throw Error("second factor is not torsion-free");
    const HolonomyData& ho = orb.holonomy();
    const HolonomyData& hm = mfd.holonomy();
    std::vector<std::size_t> phi;
    if (pairing) {
        if (!is_holonomy_isomorphism(ho, hm, *pairing)) throw Error("pairing is not an isomorphism of holonomy groups");
        phi = *pairing;
    } else {
        auto found = find_holonomy_isomorphism(ho, hm);
        if (!found)
            throw Error("no isomorphism of holonomy groups (orders " + std::to_string(ho.order()) + " and " +
                        std::to_string(hm.order()) + ")");
        phi = *found;
    }
    const std::size_t n = orb.dim(), m = mfd.dim();
    std::vector<AffineElement> gens;
    for (std::size_t i = 1; i < ho.order(); ++i)
        gens.emplace_back(direct_sum(ho.elements[i], hm.elements[phi[i]]),
                          concat(ho.translations[i], hm.translations[phi[i]]));
    CrystalGroup raw(n + m, gens, direct_sum(orb.gram(), mfd.gram().scaled(lambda)),
                     orb.name() + " x " + mfd.name());
    CrystalGroup out = normalize(raw);
    if (!is_torsion_free(out)) throw Error("resolution has torsion; the pairing is invalid");

    Subspace block;
    for (std::size_t i = 0; i < m; ++i) {
        RatVec e(n + m);
        e[n + i] = 1;
        block.push_back(e);
    }
    CollapseResult back = collapse(raw, block);
    RatMatrix t = back.quotient_map.block(0, 0, n, n);
    if (!same_group_in_basis(back.quotient, orb, t)) throw Error("internal: collapsing the manifold block does not recover the orbifold");
    return out;
}

// ---------------------------------------------------------------- iterated collapse

IteratedCheck check_iterated_collapse(const CrystalGroup& g, const Subspace& w, const Subspace& w2) {
    CollapseResult direct = collapse(g, all_vectors(w, w2));
    CollapseResult first = collapse(g, w);
    Subspace image;
    for (const auto& v : w2) image.push_back(first.quotient_map * v);
    CollapseResult second = collapse(first.quotient, image);
    auto describe = [](const CollapseResult& r) {
        std::ostringstream os;
        os.precision(12);
        os << r.label.name() << " |H|=" << r.quotient.holonomy().order() << " vol=" << volume(r.quotient);
        return os.str();
    };
    IteratedCheck out;
    out.direct = describe(direct);
    out.stepwise = describe(second);
    double v1 = volume(direct.quotient), v2 = volume(second.quotient);
    out.ok = direct.label.iuc == second.label.iuc &&
             direct.quotient.holonomy().order() == second.quotient.holonomy().order() &&
             std::abs(v1 - v2) <= 1e-9 * std::max(1.0, std::abs(v1));
    return out;
}

// ---------------------------------------------------------------- sweep

std::vector<Direction> sweep_directions(const CrystalGroup& group, std::uint64_t seed, int slope_bound) {
    CrystalGroup g = ensure_normalized(group);
    const std::size_t n = g.dim();
    std::vector<Direction> out;
    std::set<std::string> seen;
    auto add = [&](const std::string& desc, const Subspace& w) {
        auto base = span_basis(w, n);
        if (base.empty()) return;
        if (seen.insert(subspace_key(base, n)).second) out.push_back({desc, base});
    };

    std::vector<Subspace> comps;
    if (auto rc = rational_isotypic_components(g, seed)) comps = *rc;
    for (std::size_t i = 0; i < comps.size(); ++i)
        add("component " + std::to_string(i + 1) + " (dim " + std::to_string(comps[i].size()) + ")", comps[i]);

    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (comps[i].size() < 2) continue;
        RatMatrix b = saturated_basis(comps[i], n);
        for (std::size_t s = 0; s < b.cols(); ++s)
            for (std::size_t t = s + 1; t < b.cols(); ++t)
                for (int p = -slope_bound; p <= slope_bound; ++p)
                    for (int r = -slope_bound; r <= slope_bound; ++r) {
                        if (std::gcd(p, r) != 1) continue;
                        if (p < 0 || (p == 0 && r < 0)) continue;
                        RatVec v = Rat(p) * b.col(s) + Rat(r) * b.col(t);
                        std::ostringstream desc;
                        desc << "line " << p << "*b" << s + 1 << (r < 0 ? "-" : "+") << std::abs(r) << "*b" << t + 1
                             << " in component " << i + 1;
                        add(desc.str(), rational_closure(g, Subspace{v}));
                    }
    }

    // sums of two collected directions give the remaining invariant planes
    std::size_t base_count = out.size();
    for (std::size_t i = 0; i < base_count; ++i)
        for (std::size_t j = i + 1; j < base_count; ++j) {
            auto sum = span_basis(all_vectors(out[i].basis, out[j].basis), n);
            if (sum.size() >= n) continue;
            add("(" + out[i].description + ") + (" + out[j].description + ")", sum);
        }

    Subspace all;
    for (std::size_t i = 0; i < n; ++i) {
        RatVec e(n);
        e[i] = 1;
        all.push_back(e);
    }
    add("whole space", all);
    return out;
}

// ---------------------------------------------------------------- theorem C

const std::set<std::string>& theorem_c_expected_labels() {
    static const std::set<std::string> labels = {
        "point", "interval", "circle", "T2", "K2", "Mobius", "cylinder",
        "D2(4;2)", "D2(3;3)", "D2(2,2;)", "S2(3,3,3;)", "S2(2,2,2,2;)", "RP2(2,2;)",
    };
    return labels;
}

namespace {

std::string holonomy_key(const CrystalGroup& g) {
    std::string k = std::to_string(g.dim()) + "|";
    const HolonomyData& h = g.holonomy();
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < h.order(); ++i) parts.push_back(h.elements[i].key() + "@" + to_string(h.translations[i]));
    std::sort(parts.begin(), parts.end());
    for (const auto& p : parts) k += p + ";";
    return k;
}

void collapse_recursive(const std::string& group_name, const std::string& path, const CrystalGroup& g,
                        std::uint64_t seed, std::set<std::string>& visited, std::vector<CollapseCase>& cases) {
    if (g.dim() == 0) return;
    if (!visited.insert(holonomy_key(g)).second) return;
    for (const auto& dir : sweep_directions(g, seed)) {
        CollapseResult r = collapse(g, dir.basis);
        std::string p = path.empty() ? dir.description : path + " / " + dir.description;
        cases.push_back({group_name, p, r.label.name(), r.quotient.dim()});
        collapse_recursive(group_name, p, r.quotient, seed, visited, cases);
    }
}

std::vector<CollapseCase> run_group(const NamedGroup& ng, std::uint64_t seed) {
    std::vector<CollapseCase> cases;
    std::set<std::string> visited;
    CrystalGroup g = ensure_normalized(ng.group);
    for (const auto& dir : ng.special) {
        CollapseResult r = collapse(ng.group, dir.basis);
        cases.push_back({ng.name, dir.description, r.label.name(), r.quotient.dim()});
        collapse_recursive(ng.name, dir.description, r.quotient, seed, visited, cases);
    }
    collapse_recursive(ng.name, "", g, seed, visited, cases);
    return cases;
}

}  // namespace

TheoremCReport verify_theorem_c(const std::vector<NamedGroup>& groups, std::uint64_t seed) {
    auto start = std::chrono::steady_clock::now();
    std::vector<std::future<std::vector<CollapseCase>>> jobs;
    for (const auto& ng : groups) jobs.push_back(std::async(std::launch::async, run_group, std::cref(ng), seed));
    TheoremCReport rep;
    rep.expected = theorem_c_expected_labels();
    for (auto& j : jobs) {
        auto cases = j.get();
        rep.cases.insert(rep.cases.end(), cases.begin(), cases.end());
    }
    for (const auto& c : rep.cases) rep.labels.insert(c.label);
    for (const auto& l : rep.expected)
        if (!rep.labels.count(l)) rep.missing.push_back(l);
    for (const auto& l : rep.labels)
        if (!rep.expected.count(l)) rep.extra.push_back(l);
    rep.pass = rep.missing.empty() && rep.extra.empty();
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

// ---------------------------------------------------------------- families

FamilyLimit family_limit(const CrystalGroup& group, const std::function<Eigen::MatrixXd(double)>& gram,
                         const std::vector<double>& schedule) {
    CrystalGroup g = ensure_normalized(group);
    LatticeFamily fam = [&gram](double t) { return Lattice::from_gram(gram(t)).basis; };
    FamilyLimit out;
    out.torus = sequence_limit(fam, schedule);
    const std::size_t n = g.dim();
    Subspace w;
    for (Eigen::Index j = 0; j < out.torus.vanishing_coeffs.cols(); ++j) {
        RatVec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = Rat(static_cast<long>(out.torus.vanishing_coeffs(static_cast<Eigen::Index>(i), j)));
        w.push_back(v);
    }
    if (w.empty()) {
        out.label = classify(g);
        return out;
    }
    out.collapsed = rational_closure(g, w);
    out.result = collapse(g, out.collapsed);
    out.label = out.result->label;
    return out;
}

}  // namespace flatorb
