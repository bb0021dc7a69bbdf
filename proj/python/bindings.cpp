#include "flatorb/catalog.hpp"
#include "flatorb/collapse.hpp"
#include "flatorb/io.hpp"
#include "flatorb/lattice_geometry.hpp"
#include "flatorb/rep_theory.hpp"
#include "flatorb/wallpaper.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace flatorb;

namespace {

// A catalog key, or a group document as JSON text.
CrystalGroup resolve(const std::string& spec) {
    auto first = spec.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && spec[first] == '{') return group_from_json(json::parse(spec));
    return catalog_get(spec).group;
}

std::string label_json(const OrbifoldLabel& l) {
    return json{{"name", l.name()},
                {"iuc", l.iuc},
                {"conway", l.conway},
                {"orbifold", l.orbifold},
                {"topology", l.topology},
                {"holonomy_order", l.holonomy_order}}
        .dump();
}

Eigen::MatrixXd basis_from_rows(const std::vector<std::vector<double>>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(j)].size()) != n)
            throw std::invalid_argument("basis must be square");
        for (Eigen::Index i = 0; i < n; ++i) b(i, j) = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
    return b;
}

}  // namespace

PYBIND11_MODULE(_cxx, m) {
    m.doc() = "flat orbifold toolkit (compiled core)";
    py::register_exception<Error>(m, "FlatorbError", PyExc_ValueError);

    m.def("catalog_list", &catalog_list);
    m.def("catalog_entry", [](const std::string& key) {
        CatalogEntry e = catalog_get(key);
        return json{{"key", e.key}, {"title", e.title},          {"aliases", e.aliases}, {"group", group_to_json(e.group)},
                    {"expected", e.expected}, {"provenance", e.provenance}, {"notes", e.notes}}
            .dump();
    });
    m.def("check_entry", [](const std::string& key, std::uint64_t seed) { return check_entry(catalog_get(key), seed); },
          py::arg("key"), py::arg("seed") = 0);

    m.def("normalize", [](const std::string& spec) { return group_to_json(normalize(resolve(spec))).dump(); });
    m.def("holonomy_order", [](const std::string& spec) { return ensure_normalized(resolve(spec)).holonomy().order(); });
    m.def("is_torsion_free", [](const std::string& spec) { return is_torsion_free(resolve(spec)); });
    m.def("first_homology", [](const std::string& spec) { return first_homology(resolve(spec)).str(); });
    m.def("classify", [](const std::string& spec) { return label_json(classify(ensure_normalized(resolve(spec)))); });

    m.def(
        "teich",
        [](const std::string& spec, std::uint64_t seed) {
            IsotypicReport r = teich_report(resolve(spec), seed);
            return std::make_tuple(r.total_dim, r.invariant_form_dim, r.summary());
        },
        py::arg("group"), py::arg("seed") = 0);

    m.def("collapse", [](const std::string& spec, const std::string& subspace) {
        CollapseResult r = collapse(resolve(spec), parse_subspace(subspace));
        return std::make_tuple(label_json(r.label), group_to_json(r.quotient).dump());
    });

    m.def("special_basis", [](const std::vector<std::vector<double>>& rows) {
        SpecialBasis sb = special_basis(Lattice(basis_from_rows(rows)));
        std::vector<std::vector<double>> vs;
        for (Eigen::Index j = 0; j < sb.vectors.cols(); ++j)
            vs.emplace_back(sb.vectors.col(j).data(), sb.vectors.col(j).data() + sb.vectors.rows());
        return std::make_tuple(vs, sb.R0, sb.norms, sb.angles);
    });
    m.def(
        "covering_radius",
        [](const std::vector<std::vector<double>>& rows, double eps) {
            Interval r = covering_radius(Lattice(basis_from_rows(rows)), eps);
            return std::make_pair(r.lo, r.hi);
        },
        py::arg("basis"), py::arg("eps") = 1e-4);
    m.def("theta_n", &theta_n);
    m.def("beta_n", &beta_n);

    m.def(
        "verify_theorem_c",
        [](std::uint64_t seed) {
            TheoremCReport r = verify_theorem_c(seed);
            return std::make_tuple(r.pass, std::vector<std::string>(r.labels.begin(), r.labels.end()), r.missing, r.extra);
        },
        py::arg("seed") = 0);
    m.def("render_svg", [](const std::string& spec) { return render_svg(resolve(spec)); });
}
