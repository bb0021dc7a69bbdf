#include "oracles.hpp"

#include <doctest.h>

#include <set>

using namespace flatorb;

namespace {

bool is_row_hnf(const RatMatrix& h) {
    std::size_t lead = 0;
    bool zero_seen = false;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        std::size_t j = 0;
        while (j < h.cols() && h(i, j).is_zero()) ++j;
        if (j == h.cols()) {
            zero_seen = true;
            continue;
        }
        if (zero_seen) return false;
        if (i > 0 && j < lead) return false;
        if (i > 0 && j == lead) return false;
        if (h(i, j).sign() <= 0) return false;
        for (std::size_t k = 0; k < i; ++k)
            if (h(k, j).sign() < 0 || h(k, j) >= h(i, j)) return false;
        lead = j;
    }
    return true;
}

}  // namespace

TEST_CASE("rational arithmetic stays reduced") {
    Rat a(6, -4);
    CHECK(a.num() == -3);
    CHECK(a.den() == 2);
    CHECK(Rat::parse("0.25") == Rat(1, 4));
    CHECK(Rat::parse("-1.5e-1") == Rat(-3, 20));
    CHECK(Rat::parse("7/21") == Rat(1, 3));
    CHECK(Rat(-1, 3).frac() == Rat(2, 3));
    CHECK(Rat(7, 2).floor() == 3);
    CHECK_THROWS_AS(Rat(1, 0), Error);
    CHECK_THROWS(Rat::parse("x/2"));
}

TEST_CASE("hnf examples") {
    auto r = hnf(RatMatrix{{2, 0}, {0, 3}});
    CHECK(r.H == (RatMatrix{{2, 0}, {0, 3}}));
    CHECK(r.U == RatMatrix::identity(2));
    CHECK(hnf(RatMatrix{{0, 0}}).H == RatMatrix{{0, 0}});

    // unique HNF of [[1,2],[3,4]] found by scanning small unimodular transforms
    RatMatrix m{{1, 2}, {3, 4}};
    std::set<std::string> forms;
    oracle::integer_box(4, 4, [&](const RatVec& z) {
        RatMatrix u{{z[0], z[1]}, {z[2], z[3]}};
        if (abs(u.det()) != Rat(1)) return;
        RatMatrix h = u * m;
        if (is_row_hnf(h)) forms.insert(h.key());
    });
    REQUIRE(forms.size() == 1);
    CHECK(hnf(m).H.key() == *forms.begin());
    CHECK(hnf(m).H == (RatMatrix{{1, 0}, {0, 2}}));
}

TEST_CASE("hnf properties on random integer matrices") {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        std::size_t r = static_cast<std::size_t>(rng.integer(1, 4)), c = static_cast<std::size_t>(rng.integer(1, 4));
        RatMatrix m = oracle::random_int_matrix(rng, r, c, -5, 5);
        auto res = hnf(m);
        CHECK(res.U.is_integral());
        CHECK(res.H.is_integral());
        CHECK(abs(oracle::det(res.U)) == Rat(1));
        CHECK(res.U * m == res.H);
        CHECK(is_row_hnf(res.H));
        CHECK(oracle::rank(res.H) == oracle::rank(m));
    }
}

TEST_CASE("smith invariants agree with determinantal divisors") {
    Rng rng(12);
    for (int t = 0; t < 120; ++t) {
        std::size_t r = static_cast<std::size_t>(rng.integer(1, 4)), c = static_cast<std::size_t>(rng.integer(1, 4));
        RatMatrix m = oracle::random_int_matrix(rng, r, c, -6, 6);
        CHECK(smith_invariants(m) == oracle::smith(m));
    }
    CHECK(smith_invariants(RatMatrix{{2, 0}, {0, 4}}) == std::vector<Integer>{2, 4});
    CHECK(smith_invariants(RatMatrix{{2, 0}, {0, 3}}) == std::vector<Integer>{1, 6});
}

TEST_CASE("rank agrees with minors") {
    Rng rng(13);
    for (int t = 0; t < 150; ++t) {
        std::size_t r = static_cast<std::size_t>(rng.integer(1, 4)), c = static_cast<std::size_t>(rng.integer(1, 4));
        RatMatrix m = oracle::random_int_matrix(rng, r, c, -2, 2);
        CHECK(m.rank() == oracle::rank(m));
        if (m.square()) CHECK(m.det() == oracle::det(m));
    }
}

TEST_CASE("solve_rational examples and properties") {
    auto s = solve_rational(RatMatrix::identity(2), {1, 2});
    REQUIRE(s);
    CHECK(s->particular == RatVec{1, 2});
    CHECK(s->kernel.empty());

    s = solve_rational(RatMatrix{{1, 1}}, {0});
    REQUIRE(s);
    CHECK(s->particular == RatVec{0, 0});
    REQUIRE(s->kernel.size() == 1);
    CHECK(s->kernel[0][0] == -s->kernel[0][1]);

    CHECK_FALSE(solve_rational(RatMatrix{{1, 0}, {1, 0}}, {0, 1}));
    CHECK_THROWS(solve_rational(RatMatrix{{1, 0}}, {1, 2}));

    Rng rng(14);
    for (int t = 0; t < 100; ++t) {
        RatMatrix a = oracle::random_int_matrix(rng, 3, 4, -3, 3);
        RatVec b{Rat(rng.integer(-3, 3)), Rat(rng.integer(-3, 3)), Rat(rng.integer(-3, 3))};
        auto sol = solve_rational(a, b);
        bool consistent = oracle::rank(a) == oracle::rank(hstack(a, RatMatrix::from_columns({b})));
        REQUIRE(bool(sol) == consistent);
        if (!sol) continue;
        CHECK(a * sol->particular == b);
        CHECK(sol->kernel.size() == 4 - oracle::rank(a));
        for (const auto& k : sol->kernel) CHECK(is_zero(a * k));
    }
}

TEST_CASE("lattice membership") {
    CHECK(lattice_member({1, 1}, RatMatrix::identity(2)));
    CHECK_FALSE(lattice_member({Rat(1, 2), 0}, RatMatrix::identity(2)));
    RatMatrix b = RatMatrix::from_columns({{1, 0}, {Rat(1, 2), Rat(1, 2)}});
    bool found = false;
    oracle::integer_box(2, 4, [&](const RatVec& z) {
        if (b * z == RatVec{Rat(3, 2), Rat(1, 2)}) found = true;
    });
    CHECK(found);
    CHECK(lattice_member({Rat(3, 2), Rat(1, 2)}, b));
    CHECK_THROWS(lattice_member({1, 1}, RatMatrix::from_columns({{1, 1}, {2, 2}})));
}

TEST_CASE("integer_solve matches exhaustive search") {
    Rng rng(15);
    for (int t = 0; t < 80; ++t) {
        RatMatrix m = oracle::random_int_matrix(rng, 2, 3, -3, 3);
        RatVec c{Rat(rng.integer(-4, 4)), Rat(rng.integer(-4, 4))};
        auto z = integer_solve(m, c);
        if (z) {
            CHECK(is_integral(*z));
            CHECK(m * *z == c);
        }
        // a small solution exists whenever one exists at all for these sizes; check one direction
        bool small = false;
        oracle::integer_box(3, 6, [&](const RatVec& w) {
            if (!small && m * w == c) small = true;
        });
        if (small) CHECK(z.has_value());
    }
}

TEST_CASE("characteristic polynomial equals det(xI - A)") {
    Rng rng(16);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = static_cast<std::size_t>(rng.integer(1, 5));
        RatMatrix a = oracle::random_int_matrix(rng, n, n, -3, 3);
        auto cp = characteristic_polynomial(a);
        REQUIRE(cp.size() == n + 1);
        CHECK(cp.front() == Rat(1));
        for (long x = -3; x <= 3; ++x) CHECK(oracle::horner(cp, Rat(x)) == oracle::charpoly_at(a, Rat(x)));
        CHECK(oracle::horner(cp, Rat(1, 3)) == oracle::charpoly_at(a, Rat(1, 3)));
    }
}

TEST_CASE("saturation, unimodular extension and kernels") {
    RatMatrix s = saturated_basis({{2, 2, 0}}, 3);
    REQUIRE(s.cols() == 1);
    CHECK(abs(s(0, 0)) == Rat(1));
    CHECK(s(0, 0) == s(1, 0));
    RatMatrix u = extend_to_unimodular(s);
    CHECK(u.is_integral());
    CHECK(abs(oracle::det(u)) == Rat(1));
    CHECK(u.col(0) == s.col(0));

    RatMatrix k = integer_kernel(RatMatrix{{1, 1, 1}});
    CHECK(k.cols() == 2);
    CHECK((RatMatrix{{1, 1, 1}} * k).is_zero());

    RatMatrix l = lattice_basis({{Rat(1, 2), 0}, {0, 1}, {1, 1}}, 2);
    CHECK(abs(oracle::det(l)) == Rat(1, 2));
}

TEST_CASE("rational approximation and positivity") {
    CHECK(rational_approx(0.3333333333333333) == Rat(1, 3));
    CHECK_FALSE(rational_approx(3.14159265358979, 100, 1e-12));
    CHECK(is_positive_definite(RatMatrix{{2, 1}, {1, 2}}));
    CHECK_FALSE(is_positive_definite(RatMatrix{{1, 2}, {2, 1}}));
}
