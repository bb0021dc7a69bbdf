#include "flatorb/lattice_geometry.hpp"
#include "flatorb/numeric.hpp"
#include "lattice_oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace flatorb;

namespace {

Eigen::MatrixXd random_int_basis(Rng& rng) {
    Eigen::MatrixXd b(2, 2);
    do {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) b(i, j) = static_cast<double>(rng.integer(-3, 3));
    } while (std::abs(b.determinant()) < 0.5);
    return b;
}

}  // namespace

TEST_CASE("angle constants") {
    CHECK(theta_n(2) == doctest::Approx(M_PI / 4).epsilon(1e-15));
    CHECK(beta_n(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(beta_n(3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::sin(theta_n(4)) == doctest::Approx(std::pow(2.0, -3.0)));
}

TEST_CASE("short vectors match enumeration") {
    Lattice l(Eigen::Matrix2d{{1, 0.3}, {0, 1.1}});
    auto vs = short_vectors(l, 2.0);
    int count = 0;
    for (int x = -10; x <= 10; ++x)
        for (int y = -10; y <= 10; ++y) {
            if (x == 0 && y == 0) continue;
            if ((l.basis * Eigen::Vector2d(x, y)).norm() <= 2.0) ++count;
        }
    CHECK(static_cast<int>(vs.size()) == count);
    for (std::size_t i = 1; i < vs.size(); ++i) CHECK(vs[i - 1].norm <= vs[i].norm);
}

TEST_CASE("special basis agrees with the brute-force search") {
    Rng rng(31);
    for (int t = 0; t < 60; ++t) {
        Eigen::MatrixXd b = random_int_basis(rng);
        SpecialBasis sb = special_basis(Lattice(b));
        oracle::Best want = oracle::brute_force_special(b);
        CHECK(sb.R0 == doctest::Approx(want.r0).epsilon(1e-9));
        CHECK(sb.norms[1] == doctest::Approx(want.r1).epsilon(1e-9));
        CHECK(std::abs(std::abs(sb.coeffs.cast<double>().determinant()) - 1) < 1e-9);
        CHECK(sb.norms[0] >= sb.norms[1] - 1e-12);
        CHECK(angle_bounded(sb.vectors, 1e-9));
    }
}

TEST_CASE("reduced basis meets its determinant bound") {
    Rng rng(32);
    for (int t = 0; t < 30; ++t) {
        Eigen::MatrixXd b(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) b(i, j) = rng.uniform(-2, 2);
        if (std::abs(b.determinant()) < 0.1) continue;
        ReducedBasis rb = reduced_basis(Lattice(b));
        CHECK(rb.ratio >= std::pow(2.0, -1.5) - 1e-12);
        CHECK(std::abs(std::abs(rb.coeffs.cast<double>().determinant()) - 1) < 1e-9);
    }
}

TEST_CASE("covering radius") {
    for (int n = 1; n <= 4; ++n) {
        Interval r = covering_radius(Lattice(Eigen::MatrixXd::Identity(n, n)));
        CHECK(r.lo == doctest::Approx(std::sqrt(n) / 2).epsilon(1e-15));
        CHECK(r.hi == doctest::Approx(std::sqrt(n) / 2).epsilon(1e-15));
    }
    Interval hex = covering_radius(Lattice(Eigen::Matrix2d{{1, 0.5}, {0, std::sqrt(3.0) / 2}}));
    CHECK(hex.contains(1 / std::sqrt(3.0)));
    CHECK(hex.hi - hex.lo <= 1e-4);

    Rng rng(33);
    for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXd b(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) b(i, j) = rng.uniform(-2, 2);
        if (std::abs(b.determinant()) < 0.2) continue;
        double want = oracle::planar_covering_radius(b);
        Interval got = covering_radius(Lattice(b));
        CHECK(got.lo <= want + 1e-9);
        CHECK(got.hi >= want - 1e-9);
    }
    CHECK_THROWS(covering_radius(Lattice(Eigen::MatrixXd::Identity(2, 2)), -1));
}

TEST_CASE("distance to lattice") {
    Lattice l(Eigen::MatrixXd::Identity(2, 2));
    CHECK(distance_to_lattice(l, Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(std::sqrt(0.5)));
    CHECK(distance_to_lattice(l, Eigen::Vector2d(3.1, -2.0)) == doctest::Approx(0.1));
}

TEST_CASE("diameter bound") {
    Rng rng(34);
    for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXd b(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) b(i, j) = rng.uniform(-2, 2);
        if (std::abs(b.determinant()) < 0.2) continue;
        DiameterReport r = check_diameter_bound(Lattice(b));
        CHECK(r.holds);
        CHECK(r.lower_bound <= r.diam_hi + 1e-9);
        CHECK(r.diam_lo <= r.upper_bound + 1e-9);
    }
}

TEST_CASE("sequence limits") {
    Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(2, 2), b1 = Eigen::MatrixXd::Zero(2, 2);
    b0(0, 0) = 1;
    b1(1, 1) = 1;
    TorusLimit lim = sequence_limit(affine_family(b0, b1), {1, 0.5, 0.1, 0.01, 0.001});
    CHECK(lim.m == 1);
    CHECK(lim.limit_basis.col(0).norm() == doctest::Approx(1.0).epsilon(1e-6));

    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
    lim = sequence_limit(affine_family(id, Eigen::MatrixXd::Zero(2, 2)), {1, 0.5, 0.1});
    CHECK(lim.m == 2);

    CHECK(parse_schedule("1,0.5,0.1") == std::vector<double>{1, 0.5, 0.1});
    CHECK_THROWS(parse_schedule("1,x"));
}

TEST_CASE("lattice parsing") {
    Lattice l = Lattice::parse("1,0;0.9,0.1");
    CHECK(l.basis(0, 1) == doctest::Approx(0.9));
    CHECK(l.covolume() == doctest::Approx(0.1));
    CHECK_THROWS(Lattice::parse("1,0;2,0"));
    CHECK_THROWS(Lattice::parse("1,0;1"));
}
