#include "flatorb/catalog.hpp"
#include "flatorb/collapse.hpp"
#include "flatorb/io.hpp"
#include "flatorb/lattice_geometry.hpp"
#include "flatorb/numeric.hpp"
#include "flatorb/rep_theory.hpp"
#include "flatorb/wallpaper.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

using namespace flatorb;

namespace {

struct Options {
    std::string group_file, catalog_key;
    std::string subspace, schedule;
    std::string lattice, base, velocity;
    std::string orbifold, manifold, pairing;
    std::string svg;
    std::string lambda = "1";
    std::uint64_t seed = 0;
    bool json_out = false;
    bool check = false;
};

std::string fixed(double x, int digits = 9) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, std::abs(x) < 0.5 * std::pow(10.0, -digits) ? 0.0 : x);
    return buf;
}

json eigen_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(std::stod(fixed(m(i, j))));
        rows.push_back(r);
    }
    return rows;
}

json eigen_json(const Eigen::MatrixXi& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

json label_json(const OrbifoldLabel& l) {
    return {{"name", l.name()},       {"iuc", l.iuc},           {"conway", l.conway},
            {"orbifold", l.orbifold}, {"topology", l.topology}, {"cone_points", l.cone_points},
            {"corner_reflectors", l.corner_reflectors}, {"holonomy_order", l.holonomy_order}};
}

CrystalGroup group_from_spec(const std::string& spec) {
    if (std::filesystem::exists(spec)) return load_group_file(spec);
    return catalog_get(spec).group;
}

CrystalGroup load_group(const Options& o) {
    if (!o.group_file.empty() && !o.catalog_key.empty()) throw CLI::ValidationError("give either --group or --catalog");
    if (!o.group_file.empty()) return load_group_file(o.group_file);
    if (!o.catalog_key.empty()) return catalog_get(o.catalog_key).group;
    throw CLI::RequiredError("--group or --catalog");
}

void emit(const Options& o, const json& j, const std::string& text) {
    if (o.json_out) std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

json report_json(const IsotypicReport& rep) {
    json comps = json::array();
    for (const auto& c : rep.components)
        comps.push_back({{"irreducible_dim", c.irreducible_dim},
                         {"multiplicity", c.multiplicity},
                         {"division_type", to_string(c.division_type)},
                         {"factor_dim", c.factor_dim},
                         {"dim", c.dim()}});
    return {{"components", comps}, {"total_dim", rep.total_dim}, {"invariant_form_dim", rep.invariant_form_dim},
            {"summary", rep.summary()}};
}

// ---------------------------------------------------------------- verbs

int cmd_analyze(const Options& o) {
    CrystalGroup in = load_group(o);
    CrystalGroup g = normalize(in);
    const HolonomyData& h = g.holonomy();
    TorsionReport tr = torsion_check(g);
    Homology hom = first_homology(g);
    OrbifoldLabel label = classify(g);
    std::vector<long> betti_numbers;
    for (std::size_t k = 0; k <= g.dim(); ++k) betti_numbers.push_back(betti(g, k));

    json j = {{"dimension", g.dim()},
              {"holonomy_order", h.order()},
              {"torsion_free", tr.torsion_free},
              {"orientable", is_orientable(g)},
              {"volume", std::stod(fixed(volume(g)))},
              {"betti", betti_numbers},
              {"first_homology", hom.str()},
              {"translation_lattice", matrix_to_json(translation_lattice(in))},
              {"label", label_json(label)},
              {"normalized", group_to_json(g)}};
    if (g.dim() == 3) j["holonomy_type"] = holonomy_type(g);
    if (!tr.torsion_free) {
        j["torsion_witness"] = {{"linear", matrix_to_json(tr.witness->linear)},
                                {"translation", vector_to_json(tr.witness->translation)},
                                {"fixed_point", vector_to_json(tr.fixed_point)}};
    }
    std::ostringstream os;
    os << "dimension: " << g.dim() << "\n";
    os << "holonomy order: " << h.order() << "\n";
    if (g.dim() == 3) os << "holonomy type: " << holonomy_type(g) << "\n";
    os << "torsion-free: " << (tr.torsion_free ? "yes" : "no") << "\n";
    if (!tr.torsion_free)
        os << "  witness: " << tr.witness->str() << " fixes " << to_string(tr.fixed_point) << "\n";
    os << "orientable: " << (is_orientable(g) ? "yes" : "no") << "\n";
    os << "volume: " << fixed(volume(g)) << "\n";
    os << "betti:";
    for (long b : betti_numbers) os << " " << b;
    os << "\nH1: " << hom.str() << "\n";
    os << "label: " << label.name() << (label.conway.empty() ? "" : " (" + label.iuc + ", " + label.conway + ")") << "\n";
    emit(o, j, os.str());
    return 0;
}

int cmd_teich(const Options& o) {
    CrystalGroup g = normalize(load_group(o));
    IsotypicReport rep = teich_report(g, o.seed);
    emit(o, report_json(rep), rep.summary() + "\n");
    return 0;
}

bool looks_rational(const std::string& text) {
    return text.find('/') != std::string::npos;
}

int cmd_collapse(const Options& o) {
    CrystalGroup g = load_group(o);
    if (o.subspace.empty()) throw CLI::RequiredError("--subspace");
    Subspace w;
    bool closed = false;
    if (looks_rational(o.subspace)) {
        w = parse_subspace(o.subspace);
    } else {
        auto floats = parse_subspace_float(o.subspace);
        bool all_rational = true;
        for (const auto& v : floats) {
            if (v.size() != static_cast<Eigen::Index>(g.dim())) throw std::invalid_argument("subspace vector has wrong length");
            if (auto r = rationalize_direction(v)) w.push_back(*r);
            else all_rational = false;
        }
        if (!all_rational) {
            w = rational_closure(g, floats, o.seed);
            closed = true;
        }
    }
    CollapseResult r = collapse(g, w);
    json ws = json::array();
    for (const auto& v : span_basis(w, g.dim())) ws.push_back(vector_to_json(v));
    json j = {{"subspace", ws},
              {"label", label_json(r.label)},
              {"quotient", group_to_json(r.quotient)},
              {"quotient_map", matrix_to_json(r.quotient_map)},
              {"log", r.construction_log}};
    std::ostringstream os;
    os << "collapsed subspace:";
    for (const auto& v : span_basis(w, g.dim())) os << " " << to_string(v);
    if (closed) os << " (invariant rational closure)";
    os << "\n";
    for (const auto& line : r.construction_log) os << "  " << line << "\n";
    os << "limit: " << r.label.name() << "\n";
    emit(o, j, os.str());
    return 0;
}

int cmd_classify2(const Options& o) {
    CrystalGroup in = load_group(o);
    if (in.dim() != 2) throw Error("classify2 expects a 2-dimensional group");
    CrystalGroup g = normalize(in);
    OrbifoldLabel l = classify2(g);
    SingularLocus sl = singular_locus(g);
    json centers = json::array();
    for (const auto& c : sl.rotation_centers)
        centers.push_back({{"point", vector_to_json(c.point)}, {"order", c.order}, {"on_mirror", c.on_mirror}});
    json j = label_json(l);
    j["rotation_centers"] = centers;
    j["mirror_classes"] = sl.mirror_classes;
    j["glide_classes"] = sl.glide_classes;
    if (!o.svg.empty()) write_svg(g, o.svg);
    std::ostringstream os;
    os << l.iuc << "  " << l.conway << "  " << l.orbifold << "  topology " << l.topology << "  |H| " << l.holonomy_order << "\n";
    os << "rotation centres:";
    for (const auto& c : sl.rotation_centers) os << " " << to_string(c.point) << "^" << c.order << (c.on_mirror ? "*" : "");
    os << "\nmirror classes: " << sl.mirror_classes << ", glide classes: " << sl.glide_classes << "\n";
    if (!o.svg.empty()) os << "svg: " << o.svg << "\n";
    emit(o, j, os.str());
    return 0;
}

int cmd_reduce(const Options& o) {
    if (o.lattice.empty()) throw CLI::RequiredError("lattice");
    Lattice l = Lattice::parse(o.lattice);
    SpecialBasis sb = special_basis(l);
    ReducedBasis rb = reduced_basis(l);
    Interval cr = covering_radius(l);
    DiameterReport dr = check_diameter_bound(l);
    json angles = json::array(), norms = json::array();
    for (double a : sb.angles) angles.push_back(std::stod(fixed(a)));
    for (double n : sb.norms) norms.push_back(std::stod(fixed(n)));
    json j = {{"special_basis", eigen_json(Eigen::MatrixXd(sb.vectors.transpose()))},
              {"coefficients", eigen_json(Eigen::MatrixXi(sb.coeffs.transpose()))},
              {"R0", std::stod(fixed(sb.R0))},
              {"theta", std::stod(fixed(sb.theta))},
              {"beta", std::stod(fixed(sb.beta))},
              {"norms", norms},
              {"angles", angles},
              {"reduced_ratio", std::stod(fixed(rb.ratio))},
              {"covering_radius", {std::stod(fixed(cr.lo)), std::stod(fixed(cr.hi))}},
              {"diameter_bound", {{"lower", std::stod(fixed(dr.lower_bound))}, {"upper", std::stod(fixed(dr.upper_bound))},
                                  {"holds", dr.holds}}}};
    std::ostringstream os;
    os << "special basis (rows):\n";
    for (Eigen::Index i = 0; i < sb.vectors.cols(); ++i) {
        os << " ";
        for (Eigen::Index k = 0; k < sb.vectors.rows(); ++k) os << " " << fixed(sb.vectors(k, i), 6);
        os << "   |u| = " << fixed(sb.norms[static_cast<std::size_t>(i)], 6) << "  angle = " << fixed(sb.angles[static_cast<std::size_t>(i)], 6) << "\n";
    }
    os << "R0 = " << fixed(sb.R0, 6) << "  theta_n = " << fixed(sb.theta, 6) << "  beta_n = " << fixed(sb.beta, 6) << "\n";
    os << "covering radius in [" << fixed(cr.lo, 6) << ", " << fixed(cr.hi, 6) << "]\n";
    os << "diameter bound " << fixed(dr.lower_bound, 6) << " <= diam <= " << fixed(dr.upper_bound, 6) << ": "
       << (dr.holds ? "holds" : "VIOLATED") << "\n";
    emit(o, j, os.str());
    return 0;
}

Eigen::MatrixXd parse_rows_any(const std::string& text) {
    // rows may be dependent (e.g. a velocity), so no rank check here
    std::vector<std::vector<double>> rows;
    std::stringstream rs(text);
    std::string row;
    while (std::getline(rs, row, ';')) {
        std::vector<double> v;
        std::stringstream cs(row);
        std::string cell;
        while (std::getline(cs, cell, ',')) v.push_back(std::stod(cell));
        if (!v.empty()) rows.push_back(v);
    }
    if (rows.empty()) throw std::invalid_argument("empty matrix");
    Eigen::MatrixXd m(rows[0].size(), rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != rows[0].size()) throw std::invalid_argument("ragged matrix");
        for (std::size_t i = 0; i < rows[j].size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
    }
    return m;
}

int cmd_limit(const Options& o) {
    if (o.base.empty() || o.schedule.empty()) throw CLI::RequiredError("--base and --schedule");
    Eigen::MatrixXd b0 = parse_rows_any(o.base);
    Eigen::MatrixXd b1 = o.velocity.empty() ? Eigen::MatrixXd::Zero(b0.rows(), b0.cols()) : parse_rows_any(o.velocity);
    if (b1.rows() != b0.rows() || b1.cols() != b0.cols()) throw std::invalid_argument("--base and --velocity differ in shape");
    std::vector<double> sched = parse_schedule(o.schedule);
    LatticeFamily fam = affine_family(b0, b1);
    json j;
    std::ostringstream os;
    if (!o.group_file.empty() || !o.catalog_key.empty()) {
        CrystalGroup g = load_group(o);
        auto gram = [&fam](double t) {
            Eigen::MatrixXd b = fam(t);
            return Eigen::MatrixXd(b.transpose() * b);
        };
        FamilyLimit fl = family_limit(g, gram, sched);
        j = {{"m", fl.torus.m}, {"limit_basis", eigen_json(Eigen::MatrixXd(fl.torus.limit_basis.transpose()))},
             {"vanishing_coeffs", eigen_json(Eigen::MatrixXi(fl.torus.vanishing_coeffs.transpose()))},
             {"label", label_json(fl.label)}};
        os << "torus limit dimension m = " << fl.torus.m << "\n";
        os << "limit orbifold: " << fl.label.name() << "\n";
    } else {
        TorusLimit tl = sequence_limit(fam, sched);
        j = {{"m", tl.m}, {"limit_basis", eigen_json(Eigen::MatrixXd(tl.limit_basis.transpose()))},
             {"limit_coeffs", eigen_json(Eigen::MatrixXi(tl.limit_coeffs.transpose()))},
             {"vanishing_coeffs", eigen_json(Eigen::MatrixXi(tl.vanishing_coeffs.transpose()))}};
        os << "limit torus dimension m = " << tl.m << "\n";
        for (Eigen::Index i = 0; i < tl.limit_basis.cols(); ++i) {
            os << "  limit vector:";
            for (Eigen::Index k = 0; k < tl.limit_basis.rows(); ++k) os << " " << fixed(tl.limit_basis(k, i), 6);
            os << "  (length " << fixed(tl.limit_basis.col(i).norm(), 6) << ")\n";
        }
        for (Eigen::Index i = 0; i < tl.vanishing_coeffs.cols(); ++i) {
            os << "  vanishing direction (coefficients):";
            for (Eigen::Index k = 0; k < tl.vanishing_coeffs.rows(); ++k) os << " " << tl.vanishing_coeffs(k, i);
            os << "\n";
        }
    }
    emit(o, j, os.str());
    return 0;
}

int cmd_resolve(const Options& o) {
    if (o.orbifold.empty() || o.manifold.empty()) throw CLI::RequiredError("--orbifold and --manifold");
    CrystalGroup orb = group_from_spec(o.orbifold);
    CrystalGroup mfd = group_from_spec(o.manifold);
    std::optional<std::vector<std::size_t>> pairing;
    if (!o.pairing.empty()) {
        std::vector<std::size_t> p;
        std::stringstream ss(o.pairing);
        std::string cell;
        while (std::getline(ss, cell, ',')) p.push_back(static_cast<std::size_t>(std::stoul(cell)));
        pairing = p;
    }
    CrystalGroup res = product_resolution(orb, mfd, pairing, Rat::parse(o.lambda));
    json j = {{"group", group_to_json(res)}, {"torsion_free", is_torsion_free(res)},
              {"holonomy_order", res.holonomy().order()}};
    std::ostringstream os;
    os << "resolution: dimension " << res.dim() << ", holonomy order " << res.holonomy().order()
       << ", torsion-free " << (is_torsion_free(res) ? "yes" : "no") << "\n";
    os << "collapsing the manifold block recovers the orbifold: yes\n";
    emit(o, j, os.str());
    return 0;
}

int cmd_verify(const Options& o) {
    TheoremCReport r = verify_theorem_c(o.seed);
    json cases = json::array();
    for (const auto& c : r.cases) cases.push_back({{"group", c.group}, {"direction", c.direction}, {"label", c.label}});
    auto example = [&r](const std::string& label) {
        for (const auto& c : r.cases)
            if (c.label == label) return c.group + ": " + c.direction;
        return std::string();
    };
    json j = {{"pass", r.pass}, {"labels", r.labels}, {"expected", r.expected}, {"missing", r.missing},
              {"extra", r.extra}, {"case_count", r.cases.size()}, {"cases", cases}};
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << " with " << r.labels.size() << " collapsed labels (" << r.cases.size()
       << " collapses)\n";
    for (const auto& l : r.labels) os << "  " << l << "\n";
    for (const auto& l : r.missing) os << "missing: " << l << "\n";
    for (const auto& l : r.extra) os << "extra: " << l << "  (e.g. " << example(l) << ")\n";
    emit(o, j, os.str());
    return r.pass ? 0 : 1;
}

int cmd_catalog(const Options& o, const std::string& key) {
    if (o.check) {
        json fails = json::array();
        std::ostringstream os;
        for (const auto& k : catalog_list()) {
            auto f = check_entry(catalog_get(k), o.seed);
            os << (f.empty() ? "ok    " : "FAIL  ") << k << "\n";
            for (const auto& s : f) {
                os << "      " << s << "\n";
                fails.push_back(s);
            }
        }
        emit(o, {{"failures", fails}}, os.str());
        return fails.empty() ? 0 : 1;
    }
    if (key.empty()) {
        std::ostringstream os;
        for (const auto& k : catalog_list()) os << k << "\n";
        emit(o, catalog_list(), os.str());
        return 0;
    }
    CatalogEntry e = catalog_get(key);
    json j = {{"key", e.key}, {"title", e.title}, {"aliases", e.aliases}, {"group", group_to_json(e.group)},
              {"expected", e.expected}, {"provenance", e.provenance}};
    if (!e.notes.empty()) j["notes"] = e.notes;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_render(const Options& o) {
    CrystalGroup g = normalize(load_group(o));
    if (g.dim() != 2) throw Error("render-svg expects a 2-dimensional group");
    if (o.svg.empty()) std::cout << render_svg(g);
    else write_svg(g, o.svg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flatorb: crystallographic groups, flat orbifolds and their collapsed limits"};
    app.require_subcommand(1, 1);
    Options o;
    std::string catalog_key_pos;
    app.add_option("--seed", o.seed, "seed for the randomized decomposition");
    app.add_flag("--json", o.json_out, "machine-readable output");

    auto add_group_opts = [&o](CLI::App* s) {
        s->add_option("--group", o.group_file, "group JSON file")->check(CLI::ExistingFile);
        s->add_option("--catalog", o.catalog_key, "catalog key");
        s->add_option("--seed", o.seed, "seed for the randomized decomposition");
        s->add_flag("--json", o.json_out, "machine-readable output");
    };

    auto* analyze = app.add_subcommand("analyze", "holonomy, torsion, homology and label of a group");
    add_group_opts(analyze);
    auto* teich = app.add_subcommand("teich", "isotypic decomposition and Teichmueller dimension");
    add_group_opts(teich);
    auto* coll = app.add_subcommand("collapse", "collapse an invariant subspace");
    add_group_opts(coll);
    coll->add_option("--subspace", o.subspace, "spanning vectors, e.g. \"1,0,0\" or \"1,0,0;0,1,0\"")->required();
    auto* cls = app.add_subcommand("classify2", "classify a 2-dimensional group");
    add_group_opts(cls);
    cls->add_option("--svg", o.svg, "also write an SVG figure");
    auto* red = app.add_subcommand("reduce-lattice", "special basis, covering radius and diameter bound");
    red->add_option("lattice", o.lattice, "basis vectors as rows, e.g. \"1,0;0.9,0.1\"")->required();
    red->add_flag("--json", o.json_out, "machine-readable output");
    auto* lim = app.add_subcommand("limit-seq", "limit of the lattices (base + t velocity) along a schedule");
    add_group_opts(lim);
    lim->add_option("--base", o.base, "basis rows at t = 0")->required();
    lim->add_option("--velocity", o.velocity, "rows of d/dt of the basis");
    lim->add_option("--schedule", o.schedule, "decreasing positive t values, e.g. \"1,0.5,0.1\"")->required();
    auto* res = app.add_subcommand("resolve", "product resolution of an orbifold by a flat manifold");
    res->add_option("--orbifold", o.orbifold, "group file or catalog key")->required();
    res->add_option("--manifold", o.manifold, "group file or catalog key")->required();
    res->add_option("--pairing", o.pairing, "holonomy index map, comma separated");
    res->add_option("--lambda", o.lambda, "scale of the manifold metric");
    res->add_flag("--json", o.json_out, "machine-readable output");
    auto* ver = app.add_subcommand("verify-theorem-c", "sweep collapses of the ten flat 3-manifolds");
    ver->add_option("--seed", o.seed, "seed for the randomized decomposition");
    ver->add_flag("--json", o.json_out, "machine-readable output");
    auto* cat = app.add_subcommand("catalog", "list catalog keys, show an entry, or check all entries");
    cat->add_option("key", catalog_key_pos, "entry to show");
    cat->add_flag("--check", o.check, "run every expected assertion");
    cat->add_flag("--json", o.json_out, "machine-readable output");
    cat->add_option("--seed", o.seed, "seed for the randomized decomposition");
    auto* svg = app.add_subcommand("render-svg", "SVG figure of a 2-dimensional group");
    add_group_opts(svg);
    svg->add_option("--svg", o.svg, "output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*analyze) return cmd_analyze(o);
        if (*teich) return cmd_teich(o);
        if (*coll) return cmd_collapse(o);
        if (*cls) return cmd_classify2(o);
        if (*red) return cmd_reduce(o);
        if (*lim) return cmd_limit(o);
        if (*res) return cmd_resolve(o);
        if (*ver) return cmd_verify(o);
        if (*cat) return cmd_catalog(o, catalog_key_pos);
        if (*svg) return cmd_render(o);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
