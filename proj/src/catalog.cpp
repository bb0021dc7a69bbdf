#include "flatorb/catalog.hpp"

#include "flatorb/rep_theory.hpp"

#include <algorithm>
#include <sstream>

namespace flatorb {

namespace detail {
const std::map<std::string, std::string>& catalog_files();
}

const std::map<std::string, std::string>& catalog_files() { return detail::catalog_files(); }

namespace {

const json& index_doc() {
    static const json doc = [] {
        const auto& files = detail::catalog_files();
        auto it = files.find("index.json");
        if (it == files.end()) throw Error("catalog index missing");
        return json::parse(it->second);
    }();
    return doc;
}

// Component order in a summary is not significant.
std::string canonical_summary(const std::string& s) {
    auto open = s.find(": "), close = s.rfind(';');
    if (open == std::string::npos || close == std::string::npos || close < open) return s;
    std::string body = s.substr(open + 2, close - open - 2);
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t end = body.find(')', pos);
        if (end == std::string::npos) break;
        parts.push_back(body.substr(pos, end - pos + 1));
        pos = end + 1;
        if (pos < body.size() && body[pos] == ',') ++pos;
    }
    std::sort(parts.begin(), parts.end());
    std::string out = s.substr(0, open + 2);
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
    return out + s.substr(close);
}

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::optional<long> klein_key(const std::string& key) {
    if (key.size() < 4 || key.rfind("K(", 0) != 0 || key.back() != ')') return std::nullopt;
    try {
        std::size_t pos = 0;
        long p = std::stol(key.substr(2, key.size() - 3), &pos);
        if (pos != key.size() - 3) return std::nullopt;
        return p;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void validate(CatalogEntry& e) {
    CrystalGroup g = ensure_normalized(e.group);
    const auto& gens = e.group.generators();
    for (const auto& r : e.verification) {
        if (r.generator >= gens.size())
            throw Error(e.key + ": verification recipe names generator " + std::to_string(r.generator));
        const RatMatrix& a = gens[r.generator].linear;
        if (r.order) {
            RatMatrix p = a;
            std::size_t k = 1;
            while (!p.is_identity() && k <= r.order) {
                p = p * a;
                ++k;
            }
            if (k != r.order) throw Error(e.key + ": generator " + std::to_string(r.generator) + " does not have order " + std::to_string(r.order));
        }
        if (!r.charpoly.empty() && characteristic_polynomial(a) != r.charpoly)
            throw Error(e.key + ": generator " + std::to_string(r.generator) + " has the wrong characteristic polynomial");
    }
    const RatMatrix& gram = e.group.gram();
    for (const auto& c : e.gram_constraints) {
        Rat s;
        for (const auto& [ij, coef] : c.terms) s += coef * gram(ij.first - 1, ij.second - 1);
        if (!s.is_zero()) throw Error(e.key + ": gram violates constraint " + c.text);
    }
}

CatalogEntry parse_entry(const json& j) {
    CatalogEntry e;
    e.key = j.at("key").get<std::string>();
    e.title = j.value("title", std::string{});
    e.group = group_from_json(j.at("group"));
    e.expected = j.value("expected", json::object());
    e.provenance = j.value("provenance", json::object());
    e.notes = j.value("notes", std::string{});
    if (j.contains("cell")) {
        const auto& c = j.at("cell");
        e.cell = Rect{rat_from_json(c.at("x0")), rat_from_json(c.at("x1")), rat_from_json(c.at("y0")), rat_from_json(c.at("y1"))};
    }
    if (e.expected.contains("collapse"))
        for (const auto& row : e.expected.at("collapse")) {
            CollapseExpectation c;
            c.subspace = row.at("subspace").get<std::string>();
            c.label = row.at("label").get<std::string>();
            if (row.contains("literature_label")) c.literature_label = row.at("literature_label").get<std::string>();
            c.special = row.value("special", false);
            e.collapse.push_back(c);
        }
    if (j.contains("verification"))
        for (const auto& r : j.at("verification")) {
            VerificationRecipe v;
            v.generator = r.value("generator", std::size_t{0});
            v.order = r.value("order", std::size_t{0});
            if (r.contains("charpoly"))
                for (const auto& c : r.at("charpoly")) v.charpoly.push_back(rat_from_json(c));
            e.verification.push_back(v);
        }
    if (j.contains("gram_constraints"))
        for (const auto& c : j.at("gram_constraints")) {
            GramConstraint gc;
            gc.text = c.value("text", std::string{});
            for (const auto& [name, coef] : c.at("terms").items()) {
                if (name.size() != 3 || name[0] != 'g') throw Error("bad gram constraint term " + name);
                gc.terms.push_back({{static_cast<std::size_t>(name[1] - '0'), static_cast<std::size_t>(name[2] - '0')},
                                    rat_from_json(coef)});
            }
            e.gram_constraints.push_back(gc);
        }
    return e;
}

}  // namespace

std::optional<long> CatalogEntry::expected_int(const std::string& field) const {
    if (!expected.contains(field) || !expected.at(field).is_number_integer()) return std::nullopt;
    return expected.at(field).get<long>();
}

std::optional<std::string> CatalogEntry::expected_string(const std::string& field) const {
    if (!expected.contains(field) || !expected.at(field).is_string()) return std::nullopt;
    return expected.at(field).get<std::string>();
}

std::optional<bool> CatalogEntry::expected_bool(const std::string& field) const {
    if (!expected.contains(field) || !expected.at(field).is_boolean()) return std::nullopt;
    return expected.at(field).get<bool>();
}

std::vector<std::string> catalog_list() {
    std::vector<std::string> keys;
    for (const auto& e : index_doc().at("entries")) keys.push_back(e.at("key").get<std::string>());
    for (long p : {2L, 3L, 5L, 7L}) keys.push_back("K(" + std::to_string(p) + ")");
    return keys;
}

CatalogEntry generalized_klein_bottle(long p) {
    if (!is_prime(p)) throw Error("generalized Klein bottle needs a prime, got " + std::to_string(p));
    const std::size_t n = static_cast<std::size_t>(p);
    // companion matrix of 1 + x + ... + x^(p-1), then the fixed coordinate
    RatMatrix a(n, n);
    for (std::size_t i = 1; i + 1 < n; ++i) a(i, i - 1) = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, n - 2) = -1;
    a(n - 1, n - 1) = 1;
    RatVec v(n);
    v[n - 1] = Rat(1, p);
    RatMatrix gram(n, n), pw = RatMatrix::identity(n);
    for (long k = 0; k < p; ++k) {
        gram = gram + pw.transpose() * pw;
        pw = pw * a;
    }
    gram = gram.scaled(Rat(1, p));

    CatalogEntry e;
    e.key = "K(" + std::to_string(p) + ")";
    e.title = "generalized Klein bottle, holonomy Z" + std::to_string(p);
    e.group = CrystalGroup(n, {AffineElement(a, v)}, gram, e.key);
    long teich = p == 2 ? 2 : (p + 1) / 2;
    e.expected = {{"holonomy_order", p}, {"torsion_free", true}, {"teich_dim", teich}};
    e.provenance = {{"holonomy_order", "literature"}, {"torsion_free", "computed"},
                    {"teich_dim", p == 2 ? "computed" : "literature"}};
    if (p == 2) e.notes = "For p = 2 this is the Klein bottle; its deformation space has dimension 2.";
    VerificationRecipe r;
    r.order = static_cast<std::size_t>(p);
    r.charpoly.assign(n + 1, Rat(0));
    r.charpoly.front() = 1;
    r.charpoly.back() = -1;
    e.verification.push_back(r);
    validate(e);
    return e;
}

CatalogEntry catalog_get(const std::string& key) {
    if (auto p = klein_key(key)) return generalized_klein_bottle(*p);
    for (const auto& item : index_doc().at("entries")) {
        bool hit = item.at("key").get<std::string>() == key;
        for (const auto& a : item.value("aliases", json::array()))
            if (a.get<std::string>() == key) hit = true;
        if (!hit) continue;
        const auto& files = detail::catalog_files();
        auto it = files.find(item.at("file").get<std::string>());
        if (it == files.end()) throw Error("catalog file missing for " + key);
        CatalogEntry e;
        try {
            e = parse_entry(json::parse(it->second));
        } catch (const json::exception& ex) {
            throw Error("malformed catalog entry " + key + ": " + ex.what());
        }
        for (const auto& a : item.value("aliases", json::array())) e.aliases.push_back(a.get<std::string>());
        validate(e);
        return e;
    }
    throw Error("unknown catalog key: " + key);
}

std::vector<std::string> check_entry(const CatalogEntry& e, std::uint64_t seed) {
    std::vector<std::string> fail;
    auto report = [&](const std::string& field, const std::string& want, const std::string& got) {
        if (want != got) fail.push_back(e.key + "." + field + ": expected " + want + ", got " + got);
    };
    CrystalGroup g = ensure_normalized(e.group);
    if (auto v = e.expected_int("holonomy_order")) report("holonomy_order", std::to_string(*v), std::to_string(g.holonomy().order()));
    if (auto v = e.expected_bool("torsion_free"))
        report("torsion_free", *v ? "true" : "false", is_torsion_free(g) ? "true" : "false");
    if (auto v = e.expected_int("teich_dim")) {
        report("teich_dim", std::to_string(*v), std::to_string(invariant_forms_basis(g.holonomy()).size()));
        IsotypicReport rep = isotypic_decompose(g.holonomy(), g.gram(), seed);
        report("teich_dim(isotypic)", std::to_string(*v), std::to_string(rep.total_dim));
        if (auto s = e.expected_string("teich_summary"))
            report("teich_summary", canonical_summary(*s), canonical_summary(rep.summary()));
    }
    if (auto v = e.expected_string("holonomy_type")) report("holonomy_type", *v, holonomy_type(g));
    OrbifoldLabel label = classify(g);
    if (auto v = e.expected_string("classification")) {
        std::string got = g.dim() == 3 ? identify_flat3(g) : label.iuc;
        report("classification", *v, got);
    }
    if (auto v = e.expected_string("conway")) report("conway", *v, label.conway);
    if (auto v = e.expected_string("topology")) report("topology", *v, label.topology);
    if (auto v = e.expected_string("label")) report("label", *v, label.name());
    for (const auto& c : e.collapse) {
        try {
            CollapseResult r = collapse(e.group, parse_subspace(c.subspace));
            report("collapse[" + c.subspace + "]", c.label, r.label.name());
        } catch (const std::exception& ex) {
            fail.push_back(e.key + ".collapse[" + c.subspace + "]: " + ex.what());
        }
    }
    if (e.cell) {
        CellCheck cc = fundamental_cell_check(e.group, *e.cell);
        if (!cc.ok) fail.push_back(e.key + ".cell: orbit of " + to_string(cc.witness) + " misses the rectangle");
    }
    return fail;
}

std::vector<NamedGroup> theorem_c_groups() {
    std::vector<NamedGroup> out;
    for (const char* key : {"G1", "G2", "G3", "G4", "G5", "G6", "B1", "B2", "B3", "B4"}) {
        CatalogEntry e = catalog_get(key);
        NamedGroup ng{e.key, e.group, {}};
        for (const auto& c : e.collapse)
            if (c.special) ng.special.push_back({"tabulated direction " + c.subspace, parse_subspace(c.subspace)});
        out.push_back(std::move(ng));
    }
    return out;
}

TheoremCReport verify_theorem_c(std::uint64_t seed) { return verify_theorem_c(theorem_c_groups(), seed); }

}  // namespace flatorb
