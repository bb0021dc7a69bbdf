#include "oracles.hpp"

#include "flatorb/catalog.hpp"
#include "flatorb/io.hpp"

#include <doctest.h>

#include <fstream>

using namespace flatorb;

TEST_CASE("json round trip") {
    for (const auto& key : catalog_list()) {
        CrystalGroup g = catalog_get(key).group;
        json j = group_to_json(g);
        CrystalGroup h = group_from_json(json::parse(j.dump()));
        CHECK(h.generators() == g.generators());
        CHECK(h.gram() == g.gram());
        CHECK(h.name() == g.name());
    }
    CHECK(rat_from_json(json("1/2")) == Rat(1, 2));
    CHECK(rat_from_json(json(0.25)) == Rat(1, 4));
    CHECK(rat_from_json(json(-3)) == Rat(-3));
    CHECK(rat_to_json(Rat(3)) == json(3));
    CHECK(rat_to_json(Rat(1, 3)) == json("1/3"));
}

TEST_CASE("malformed group files") {
    CHECK_THROWS(group_from_json(json::parse(R"({"generators": []})")));
    CHECK_THROWS(group_from_json(json::parse(R"({"dimension": 2, "generators": [{"linear": [[1,0]], "translation": [0,0]}]})")));
    CHECK_THROWS(load_group_file("/nonexistent/group.json"));
    std::string path = "flatorb_unit_group.json";
    {
        std::ofstream out(path);
        out << group_to_json(catalog_get("p4g").group).dump();
    }
    CHECK(load_group_file(path).generators() == catalog_get("p4g").group.generators());
    std::remove(path.c_str());
}

TEST_CASE("catalog contents") {
    auto keys = catalog_list();
    for (const char* k : {"p1", "p6m", "G1", "G6", "B1", "B4", "A-G1", "A-G7", "kummer", "joyce-O1", "joyce-O2", "K(7)"})
        CHECK(std::find(keys.begin(), keys.end(), k) != keys.end());
    CHECK(catalog_get("torus-2").key == "p1");
    CHECK(catalog_get("G6-hantzsche-wendt").expected_int("teich_dim") == 3);
    CHECK(catalog_get("p6m").expected_int("holonomy_order") == 12);
    CHECK(catalog_get("joyce-O2").expected_int("teich_dim") == 9);
    CHECK_THROWS_AS(catalog_get("p7"), Error);
    CHECK_THROWS_AS(catalog_get("K(4)"), Error);
}

TEST_CASE("every catalog assertion holds") {
    for (const auto& key : catalog_list()) {
        CatalogEntry e = catalog_get(key);
        auto fails = check_entry(e);
        for (const auto& f : fails) FAIL_CHECK(f);
        for (const auto& [field, value] : e.provenance.items()) {
            CHECK_MESSAGE(e.expected.contains(field), key, ".", field);
            CHECK((value == "literature" || value == "computed"));
        }
    }
}

TEST_CASE("generalized Klein bottles") {
    for (long p : {2L, 3L, 5L, 7L}) {
        CatalogEntry e = catalog_get("K(" + std::to_string(p) + ")");
        const RatMatrix& a = e.group.generators()[0].linear;
        CHECK(a.power(p).is_identity());
        CHECK(!a.is_identity());
        // det(xI - A) = (x - 1)(x^(p-1) + ... + 1) = x^p - 1
        for (long x = -2; x <= 3; ++x) {
            Rat xp(1);
            for (long k = 0; k < p; ++k) xp *= Rat(x);
            CHECK(oracle::charpoly_at(a, Rat(x)) == xp - Rat(1));
        }
        CHECK(e.group.dim() == static_cast<std::size_t>(p));
        CHECK(is_torsion_free(e.group));
        CHECK(e.expected_int("teich_dim") == (p == 2 ? 2 : (p + 1) / 2));
    }
}

TEST_CASE("B2 gram constraints follow from the projection condition") {
    CatalogEntry e = catalog_get("B2");
    REQUIRE(e.gram_constraints.size() == 2);
    const RatMatrix& g = e.group.gram();
    // coefficients of the orthogonal projection of v3 onto span(v1, v2)
    RatMatrix g12 = g.block(0, 0, 2, 2);
    RatVec rhs{g(0, 2), g(1, 2)};
    RatVec c = g12.inverse() * rhs;
    CHECK(c == RatVec{Rat(1, 2), Rat(1, 2)});
    CHECK(g(0, 2) == (g(0, 0) + g(0, 1)) / Rat(2));
    CHECK(g(1, 2) == (g(0, 1) + g(1, 1)) / Rat(2));
}
