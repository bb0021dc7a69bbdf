#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatorb {

/// Raised for mathematically invalid input (bad group, irrational subspace, ...).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Integer = mpz_class;

/// Exact rational number, always kept in lowest terms with positive denominator.
class Rat {
public:
    Rat() = default;
    Rat(int v) : q_(v) {}
    Rat(long v) : q_(v) {}
    Rat(const Integer& z) : q_(z) {}
    Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    Rat(long num, long den);
    Rat(const Integer& num, const Integer& den);

    /// Accepts "p/q", integers and plain decimals ("0.25", "-1.5e-1").
    static Rat parse(const std::string& text);

    const mpq_class& get() const { return q_; }
    Integer num() const { return q_.get_num(); }
    Integer den() const { return q_.get_den(); }
    bool is_integer() const { return q_.get_den() == 1; }
    bool is_zero() const { return sgn(q_) == 0; }
    int sign() const { return sgn(q_); }
    Integer floor() const;
    /// Representative of this value modulo 1 in [0,1).
    Rat frac() const { return *this - Rat(floor()); }
    /// Correctly rounded when numerator and denominator are below 2^53.
    double to_double() const;
    std::string str() const { return q_.get_str(); }

    Rat operator-() const { return Rat(mpq_class(-q_)); }
    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    mpq_class q_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

using RatVec = std::vector<Rat>;

RatVec operator+(const RatVec& a, const RatVec& b);
RatVec operator-(const RatVec& a, const RatVec& b);
RatVec operator*(const Rat& s, const RatVec& a);
Rat dot(const RatVec& a, const RatVec& b);
bool is_zero(const RatVec& v);
bool is_integral(const RatVec& v);
/// Componentwise reduction into [0,1).
RatVec reduce_mod1(const RatVec& v);
std::string to_string(const RatVec& v);

/// Dense rational matrix, row-major.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
    RatMatrix(std::initializer_list<std::initializer_list<Rat>> rows);

    static RatMatrix identity(std::size_t n);
    static RatMatrix from_rows(const std::vector<RatVec>& rows, std::size_t cols = 0);
    static RatMatrix from_columns(const std::vector<RatVec>& cols, std::size_t rows = 0);
    static RatMatrix diagonal(const RatVec& d);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    bool square() const { return r_ == c_; }
    Rat& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    RatVec row(std::size_t i) const;
    RatVec col(std::size_t j) const;
    std::vector<RatVec> columns() const;
    RatMatrix transpose() const;
    RatMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const RatMatrix& b);

    RatMatrix operator*(const RatMatrix& o) const;
    RatVec operator*(const RatVec& v) const;
    RatMatrix operator+(const RatMatrix& o) const;
    RatMatrix operator-(const RatMatrix& o) const;
    RatMatrix operator-() const;
    RatMatrix scaled(const Rat& s) const;
    friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
    }
    friend bool operator<(const RatMatrix& a, const RatMatrix& b);

    bool is_integral() const;
    bool is_symmetric() const;
    bool is_identity() const;
    bool is_zero() const;
    Rat det() const;
    /// Throws Error when singular.
    RatMatrix inverse() const;
    std::size_t rank() const;
    RatMatrix power(long k) const;
    /// Least common multiple of all denominators.
    Integer denominator_lcm() const;

    std::string str() const;
    std::string key() const;

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<Rat> a_;
};

RatMatrix hstack(const RatMatrix& a, const RatMatrix& b);
RatMatrix vstack(const RatMatrix& a, const RatMatrix& b);
RatMatrix direct_sum(const RatMatrix& a, const RatMatrix& b);

struct Rref {
    RatMatrix reduced;
    std::vector<std::size_t> pivots;
};
Rref rref(const RatMatrix& m);

/// Basis of {x : M x = 0}.
std::vector<RatVec> kernel(const RatMatrix& m);

struct LinearSolution {
    RatVec particular;
    std::vector<RatVec> kernel;
};
/// Exact solution of A x = b, or nullopt when inconsistent.
std::optional<LinearSolution> solve_rational(const RatMatrix& a, const RatVec& b);

struct HnfResult {
    RatMatrix H;
    RatMatrix U;
};
/// Row Hermite normal form: H = U M, U unimodular, positive pivots,
/// entries above each pivot reduced into [0, pivot).
HnfResult hnf(const RatMatrix& m);

/// Some integral z with M z = c, if one exists.
std::optional<RatVec> integer_solve(const RatMatrix& m, const RatVec& c);

/// True iff v = B z for an integral z; B must have full column rank.
bool lattice_member(const RatVec& v, const RatMatrix& basis);

/// Basis (as columns) of the additive group generated by rational vectors of length n.
RatMatrix lattice_basis(const std::vector<RatVec>& generators, std::size_t n);

/// Basis (as columns) of Z^n intersected with span(vectors).
RatMatrix saturated_basis(const std::vector<RatVec>& vectors, std::size_t n);

/// Integer basis of {x in Z^n : M x = 0} for rational M.
RatMatrix integer_kernel(const RatMatrix& m);

/// Unimodular matrix whose leading columns are the given saturated basis.
RatMatrix extend_to_unimodular(const RatMatrix& basis);

/// Nonzero invariant factors of an integer matrix (Smith normal form diagonal).
std::vector<Integer> smith_invariants(const RatMatrix& m);

/// Best rational approximation with denominator <= max_den, accepted when
/// within tol of x.
std::optional<Rat> rational_approx(double x, long max_den = 1000000, double tol = 1e-9);

bool is_positive_definite(const RatMatrix& g);

/// Span basis (reduced row echelon rows) of a list of vectors.
std::vector<RatVec> span_basis(const std::vector<RatVec>& vectors, std::size_t n);

/// Coefficients of det(x I - A), leading coefficient first.
std::vector<Rat> characteristic_polynomial(const RatMatrix& a);

}  // namespace flatorb
