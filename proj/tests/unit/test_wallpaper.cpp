#include "flatorb/catalog.hpp"
#include "flatorb/numeric.hpp"
#include "flatorb/wallpaper.hpp"

#include <doctest.h>

#include <tuple>

using namespace flatorb;

namespace {

struct Row {
    const char* iuc;
    const char* conway;
    const char* topology;
    std::size_t order;
};

// Literature table of the seventeen flat 2-orbifolds.
const std::vector<Row> kTable = {
    {"p1", "o", "T2", 1},        {"pg", "xx", "K2", 2},       {"pm", "**", "cylinder", 2},
    {"cm", "*x", "Mobius", 2},   {"p2", "2222", "S2", 2},     {"pgg", "22x", "RP2", 4},
    {"pmg", "22*", "D2", 4},     {"pmm", "*2222", "D2", 4},   {"cmm", "2*22", "D2", 4},
    {"p4", "442", "S2", 4},      {"p4g", "4*2", "D2", 8},     {"p4m", "*442", "D2", 8},
    {"p3", "333", "S2", 3},      {"p3m1", "*333", "D2", 6},   {"p31m", "3*3", "D2", 6},
    {"p6", "632", "S2", 6},      {"p6m", "*632", "D2", 12},
};

RatMatrix random_unimodular(Rng& rng) {
    RatMatrix u = RatMatrix::identity(2);
    for (int k = 0; k < 4; ++k) {
        RatMatrix e = RatMatrix::identity(2);
        std::size_t i = static_cast<std::size_t>(rng.integer(0, 1));
        e(i, 1 - i) = Rat(rng.integer(-2, 2));
        u = u * e;
    }
    return u;
}

}  // namespace

TEST_CASE("the seventeen wallpaper groups") {
    for (const auto& row : kTable) {
        OrbifoldLabel l = classify2(ensure_normalized(catalog_get(row.iuc).group));
        CHECK(l.iuc == row.iuc);
        CHECK_MESSAGE(l.conway == row.conway, row.iuc);
        CHECK_MESSAGE(l.topology == row.topology, row.iuc);
        CHECK_MESSAGE(l.holonomy_order == row.order, row.iuc);
    }
    CHECK(wallpaper_table().size() == 17);
}

TEST_CASE("classification does not depend on the lattice basis") {
    Rng rng(41);
    for (const auto& row : kTable) {
        CrystalGroup g = ensure_normalized(catalog_get(row.iuc).group);
        for (int t = 0; t < 3; ++t) {
            CrystalGroup h = change_basis(g, random_unimodular(rng));
            CHECK_MESSAGE(classify2(ensure_normalized(h)).iuc == row.iuc, row.iuc);
        }
    }
}

TEST_CASE("singular data") {
    SingularLocus p2 = singular_locus(catalog_get("p2").group);
    CHECK(p2.rotation_centers.size() == 4);
    CHECK(p2.mirror_classes == 0);

    SingularLocus pm = singular_locus(catalog_get("pm").group);
    CHECK(pm.mirror_classes == 2);
    CHECK(pm.rotation_centers.empty());

    SingularLocus cm = singular_locus(catalog_get("cm").group);
    CHECK(cm.mirror_classes == 1);
    CHECK(cm.glide_classes == 1);

    SingularLocus pg = singular_locus(catalog_get("pg").group);
    CHECK(pg.mirror_classes == 0);
    CHECK(pg.glide_classes == 2);

    OrbifoldLabel p4g = classify2(catalog_get("p4g").group);
    CHECK(p4g.cone_points == std::vector<int>{4});
    CHECK(p4g.corner_reflectors == std::vector<int>{2});

    auto fp = rotation_fixed_points(RatMatrix{{-1, 0}, {0, -1}}, {0, 0});
    CHECK(fp.size() == 4);
}

TEST_CASE("orbit sampling meets the published cells") {
    for (const char* key : {"A-G1", "A-G2", "A-G3", "A-G4", "A-G5", "A-G6", "A-G7"}) {
        CatalogEntry e = catalog_get(key);
        REQUIRE(e.cell);
        CHECK_MESSAGE(fundamental_cell_check(e.group, *e.cell).ok, key);
        Rect small = *e.cell;
        small.x1 = small.x0 + (small.x1 - small.x0) * Rat(1, 3);
        small.y1 = small.y0 + (small.y1 - small.y0) * Rat(1, 3);
        CHECK_MESSAGE(!fundamental_cell_check(e.group, small).ok, key);
    }
}

TEST_CASE("svg output") {
    std::string svg = render_svg(catalog_get("p4m").group);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg == render_svg(catalog_get("p4m").group));
    CHECK_THROWS_AS(render_svg(catalog_get("G2").group), Error);
}

TEST_CASE("classify2 rejects other dimensions") {
    CHECK_THROWS_AS(classify2(catalog_get("G1").group), Error);
}
