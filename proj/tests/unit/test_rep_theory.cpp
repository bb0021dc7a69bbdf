#include "oracles.hpp"

#include "flatorb/catalog.hpp"
#include "flatorb/rep_theory.hpp"

#include <doctest.h>

using namespace flatorb;

namespace {

Rat trace(const RatMatrix& a) {
    Rat t;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

// Character of Sym^2 averaged over H.
Rat sym2_fixed_dim(const HolonomyData& h) {
    Rat s;
    for (const auto& a : h.elements) s += (trace(a) * trace(a) + trace(a * a)) / Rat(2);
    return s / Rat(static_cast<long>(h.order()));
}

Rat commutant_dim(const HolonomyData& h) {
    Rat s;
    for (const auto& a : h.elements) s += trace(a) * trace(a.inverse());
    return s / Rat(static_cast<long>(h.order()));
}

}  // namespace

TEST_CASE("factor dimensions") {
    CHECK(factor_dimension(DivisionType::R, 1) == 1);
    CHECK(factor_dimension(DivisionType::R, 2) == 3);
    CHECK(factor_dimension(DivisionType::C, 1) == 1);
    CHECK(factor_dimension(DivisionType::C, 2) == 4);
    CHECK(factor_dimension(DivisionType::H, 1) == 1);
    CHECK(factor_dimension(DivisionType::H, 2) == 6);
}

TEST_CASE("exact invariant forms match the character count") {
    for (const auto& key : catalog_list()) {
        CrystalGroup g = ensure_normalized(catalog_get(key).group);
        const HolonomyData& h = g.holonomy();
        auto forms = invariant_forms_basis(h);
        CHECK_MESSAGE(Rat(static_cast<long>(forms.size())) == sym2_fixed_dim(h), key);
        CHECK_MESSAGE(Rat(static_cast<long>(commutant_basis(h).size())) == commutant_dim(h), key);
        for (const auto& s : forms) {
            CHECK(s.is_symmetric());
            for (const auto& a : h.elements) CHECK(a.transpose() * s * a == s);
        }
    }
}

TEST_CASE("isotypic decomposition") {
    IsotypicReport r = teich_report(catalog_get("G3").group);
    CHECK(r.summary() == "components: (m=1,R,d=1),(m=1,C,d=1); dim 2");
    CHECK(r.total_dim == 2);

    r = teich_report(catalog_get("p2").group);
    REQUIRE(r.components.size() == 1);
    CHECK(r.components[0].multiplicity == 2);
    CHECK(r.total_dim == 3);

    r = teich_report(catalog_get("joyce-O2").group);
    CHECK(r.total_dim == 9);

    // the basis of every component is gram-orthonormal and together they fill R^n
    CrystalGroup g = ensure_normalized(catalog_get("B4").group);
    r = teich_report(g);
    Eigen::MatrixXd gram = to_eigen(g.gram());
    long total = 0;
    for (const auto& c : r.components) {
        Eigen::MatrixXd id = c.basis.transpose() * gram * c.basis;
        CHECK((id - Eigen::MatrixXd::Identity(id.rows(), id.cols())).norm() < 1e-9);
        total += c.dim();
    }
    CHECK(total == 3);
}

TEST_CASE("decomposition is seed independent") {
    for (const char* key : {"G5", "B2", "kummer", "p6m", "Q8-quaternion", "K(5)"}) {
        CrystalGroup g = ensure_normalized(catalog_get(key).group);
        std::string sig = isotypic_decompose(g.holonomy(), g.gram(), 0).signature();
        for (std::uint64_t seed : {1u, 7u, 12345u}) CHECK(isotypic_decompose(g.holonomy(), g.gram(), seed).signature() == sig);
    }
}

TEST_CASE("quaternion holonomy gives a quaternionic component") {
    IsotypicReport r = teich_report(catalog_get("Q8-quaternion").group);
    REQUIRE(r.components.size() == 1);
    CHECK(r.components[0].division_type == DivisionType::H);
    CHECK(r.total_dim == 1);
}
