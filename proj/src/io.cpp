#include "flatorb/io.hpp"

#include <fstream>

namespace flatorb {

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_number_float()) return Rat::parse(j.dump());
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    throw Error("expected a number or \"p/q\" string, got " + j.dump());
}

json rat_to_json(const Rat& r) {
    if (r.is_integer() && r.num().fits_slong_p()) return r.num().get_si();
    return r.str();
}

RatVec vector_from_json(const json& j) {
    if (!j.is_array()) throw Error("expected an array, got " + j.dump());
    RatVec v;
    for (const auto& x : j) v.push_back(rat_from_json(x));
    return v;
}

json vector_to_json(const RatVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(rat_to_json(x));
    return a;
}

RatMatrix matrix_from_json(const json& j) {
    if (!j.is_array()) throw Error("expected a matrix (array of rows), got " + j.dump());
    std::vector<RatVec> rows;
    for (const auto& r : j) rows.push_back(vector_from_json(r));
    for (const auto& r : rows)
        if (r.size() != rows[0].size()) throw Error("ragged matrix");
    return RatMatrix::from_rows(rows);
}

json matrix_to_json(const RatMatrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_to_json(m.row(i)));
    return a;
}

CrystalGroup group_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dimension")) throw Error("group document needs a \"dimension\" field");
    auto n = j.at("dimension").get<std::size_t>();
    RatMatrix gram = j.contains("gram") ? matrix_from_json(j.at("gram")) : RatMatrix::identity(n);
    std::vector<AffineElement> gens;
    if (j.contains("generators"))
        for (const auto& g : j.at("generators")) {
            RatMatrix a = g.contains("linear") ? matrix_from_json(g.at("linear")) : RatMatrix::identity(n);
            RatVec v = g.contains("translation") ? vector_from_json(g.at("translation")) : RatVec(n);
            if (a.rows() != n || a.cols() != n || v.size() != n)
                throw Error("generator does not match dimension " + std::to_string(n));
            gens.emplace_back(a, v);
        }
    return CrystalGroup(n, gens, gram, j.value("name", std::string{}));
}

json group_to_json(const CrystalGroup& g) {
    json j;
    j["dimension"] = g.dim();
    if (!g.name().empty()) j["name"] = g.name();
    j["gram"] = matrix_to_json(g.gram());
    j["generators"] = json::array();
    for (const auto& e : g.generators())
        j["generators"].push_back({{"linear", matrix_to_json(e.linear)}, {"translation", vector_to_json(e.translation)}});
    return j;
}

CrystalGroup load_group_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open group file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("invalid JSON in " + path + ": " + e.what());
    }
    return group_from_json(j);
}

}  // namespace flatorb
