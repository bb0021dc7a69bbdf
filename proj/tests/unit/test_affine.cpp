#include "oracles.hpp"

#include "flatorb/affine_group.hpp"
#include "flatorb/catalog.hpp"

#include <doctest.h>

using namespace flatorb;

namespace {

AffineElement random_element(Rng& rng, std::size_t n) {
    RatMatrix a = oracle::random_int_matrix(rng, n, n, -2, 2);
    RatVec v(n);
    for (auto& x : v) x = Rat(rng.integer(-5, 5), rng.integer(1, 6));
    return {a, v};
}

// (A, v)^k = (I, 0) for k = ord(A) exactly when the element fixes a point.
bool has_finite_order(const AffineElement& g) {
    AffineElement p = g;
    for (int k = 1; k <= 12; ++k) {
        if (p.linear.is_identity()) return is_zero(p.translation);
        p = compose(p, g);
    }
    return false;
}

// Some element (A, v_A + lambda), A != I, lambda in a small box, of finite order.
bool brute_force_torsion(const CrystalGroup& g) {
    const HolonomyData& h = g.holonomy();
    bool found = false;
    for (std::size_t i = 1; i < h.order() && !found; ++i)
        oracle::integer_box(g.dim(), 2, [&](const RatVec& lam) {
            if (!found && has_finite_order({h.elements[i], h.translations[i] + lam})) found = true;
        });
    return found;
}

}  // namespace

TEST_CASE("composition follows (A,v)(B,w) = (AB, Aw + v)") {
    Rng rng(21);
    for (int t = 0; t < 200; ++t) {
        AffineElement f = random_element(rng, 3), g = random_element(rng, 3), h = random_element(rng, 3);
        RatVec x{Rat(rng.integer(-3, 3)), Rat(1, 3), Rat(rng.integer(-3, 3), 7)};
        CHECK(compose(f, g).apply(x) == f.apply(g.apply(x)));
        CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
        CHECK(compose(f, AffineElement::identity(3)) == f);
    }
    AffineElement g({{0, -1}, {1, 0}}, {Rat(1, 2), 0});
    CHECK(compose(g, g.inverse()) == AffineElement::identity(2));
    CHECK_THROWS(AffineElement(RatMatrix::identity(2), {0, 0, 0}));
}

TEST_CASE("normalization rebases onto the translation lattice") {
    // pure translations e1/2 and e2 generate a lattice of index 1/2
    CrystalGroup g(2, {AffineElement::pure_translation({Rat(1, 2), 0}), AffineElement({{-1, 0}, {0, -1}}, {0, 0})},
                   RatMatrix::identity(2));
    RatMatrix t = translation_lattice(g);
    CHECK(abs(t.det()) == Rat(1, 2));
    CrystalGroup n = normalize(g);
    CHECK(n.normalized());
    CHECK(n.holonomy().order() == 2);
    CHECK(translation_lattice(n) == RatMatrix::identity(2));
    CHECK(normalize(n).generators() == n.generators());
    CHECK(n.gram() == t.transpose() * g.gram() * t);
}

TEST_CASE("holonomy translation classes satisfy the cocycle identity") {
    for (const auto& key : catalog_list()) {
        CrystalGroup g = ensure_normalized(catalog_get(key).group);
        const HolonomyData& h = g.holonomy();
        for (std::size_t i = 0; i < h.order(); ++i)
            for (std::size_t j = 0; j < h.order(); ++j) {
                std::size_t k = h.product(i, j);
                RatVec lhs = h.elements[i] * h.translations[j] + h.translations[i];
                CHECK_MESSAGE(is_integral(lhs - h.translations[k]), key);
            }
    }
}

TEST_CASE("torsion test agrees with a finite-order search") {
    for (const char* key : {"G1", "G2", "G3", "G4", "G5", "G6", "B1", "B2", "B3", "B4", "pg", "p1"}) {
        CrystalGroup g = ensure_normalized(catalog_get(key).group);
        CHECK_MESSAGE(is_torsion_free(g), key);
        CHECK_MESSAGE(!brute_force_torsion(g), key);
    }
    for (const char* key : {"p2", "p3", "p4", "p6", "cmm", "pm", "kummer"}) {
        CrystalGroup g = ensure_normalized(catalog_get(key).group);
        TorsionReport r = torsion_check(g);
        CHECK_MESSAGE(!r.torsion_free, key);
        REQUIRE(r.witness);
        CHECK(has_finite_order(*r.witness));
        CHECK(r.witness->apply(r.fixed_point) == r.fixed_point);
        CHECK(brute_force_torsion(g));
    }
}

TEST_CASE("homology of the closed flat 3-manifolds") {
    // literature values of H_1
    const std::vector<std::pair<const char*, const char*>> want = {
        {"G1", "Z^3"},    {"G2", "Z+Z2+Z2"}, {"G3", "Z+Z3"},    {"G4", "Z+Z2"}, {"G5", "Z"},
        {"G6", "Z4+Z4"},  {"B1", "Z^2+Z2"},  {"B2", "Z^2"},     {"B3", "Z+Z2+Z2"}, {"B4", "Z+Z4"}};
    for (const auto& [key, h1] : want) {
        CrystalGroup g = ensure_normalized(catalog_get(key).group);
        CHECK_MESSAGE(first_homology(g).str() == h1, key);
        CHECK(static_cast<std::size_t>(betti(g, 1)) == first_homology(g).free_rank);
        CHECK(is_orientable(g) == (key[0] == 'G'));
        CHECK(identify_flat3(g) == key);
    }
}

TEST_CASE("holonomy types and volumes") {
    CHECK(holonomy_type(catalog_get("G4").group) == "Z4");
    CHECK(holonomy_type(catalog_get("G6").group) == "Z2xZ2");
    CHECK(holonomy_type(catalog_get("G1").group) == "1");
    CHECK(volume(CrystalGroup(3, {})) == doctest::Approx(1.0));
    CHECK(volume(catalog_get("pg").group) == doctest::Approx(std::sqrt(2.0) / 2));
}

TEST_CASE("exterior powers multiply determinants") {
    Rng rng(22);
    for (int t = 0; t < 30; ++t) {
        RatMatrix a = oracle::random_int_matrix(rng, 3, 3, -2, 2);
        CHECK(exterior_power(a, 3).rows() == 1);
        CHECK(exterior_power(a, 3)(0, 0) == oracle::det(a));
        CHECK(exterior_power(a, 1) == a);
        RatMatrix b = oracle::random_int_matrix(rng, 3, 3, -2, 2);
        CHECK(exterior_power(a * b, 2) == exterior_power(a, 2) * exterior_power(b, 2));
    }
}

TEST_CASE("invalid groups are rejected") {
    CHECK_THROWS_AS(CrystalGroup(2, {AffineElement({{2, 0}, {0, 1}}, {0, 0})}, RatMatrix::identity(2)), Error);
    CHECK_THROWS_AS(CrystalGroup(2, {}, RatMatrix{{1, 2}, {2, 1}}), Error);
    CHECK_THROWS_AS(CrystalGroup(2, {AffineElement({{1, 1}, {0, 1}}, {0, 0})}), Error);
}
