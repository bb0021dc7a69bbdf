#include "flatorb/exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace flatorb {

Rat::Rat(long num, long den) : Rat(Integer(num), Integer(den)) {}

Rat::Rat(const Integer& num, const Integer& den) {
    if (den == 0) throw Error("zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

double Rat::to_double() const {
    static const Integer limit = Integer(1) << 53;
    const auto& n = q_.get_num();
    const auto& d = q_.get_den();
    if (abs(n) < limit && d < limit) return n.get_d() / d.get_d();
    return q_.get_d();
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero()) throw Error("division by zero");
    q_ /= o.q_;
    return *this;
}

Integer Rat::floor() const {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Integer parse_int(const std::string& s) {
    std::string t = s;
    bool neg = false;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
        neg = t[0] == '-';
        t = t.substr(1);
    }
    if (!all_digits(t)) throw Error("malformed number: '" + s + "'");
    Integer z(t, 10);
    return neg ? Integer(-z) : z;
}

Rat parse_decimal(const std::string& s) {
    std::string t = s;
    long exp10 = 0;
    auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
        exp10 = parse_int(t.substr(epos + 1)).get_si();
        t = t.substr(0, epos);
    }
    bool neg = false;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
        neg = t[0] == '-';
        t = t.substr(1);
    }
    auto dot = t.find('.');
    std::string ip = dot == std::string::npos ? t : t.substr(0, dot);
    std::string fp = dot == std::string::npos ? "" : t.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw Error("malformed number: '" + s + "'");
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
        throw Error("malformed number: '" + s + "'");
    Integer mant((ip.empty() ? "0" : ip) + fp, 10);
    exp10 -= static_cast<long>(fp.size());
    Integer p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    Rat r = exp10 >= 0 ? Rat(Integer(mant * p10)) : Rat(mant, p10);
    return neg ? -r : r;
}

}  // namespace

Rat Rat::parse(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw Error("empty number");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Integer n = parse_int(trim(s.substr(0, slash)));
        Integer d = parse_int(trim(s.substr(slash + 1)));
        return Rat(n, d);
    }
    return parse_decimal(s);
}

RatVec operator+(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector dimension mismatch");
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

RatVec operator-(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector dimension mismatch");
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

RatVec operator*(const Rat& s, const RatVec& a) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

Rat dot(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector dimension mismatch");
    Rat s;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool is_zero(const RatVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x.is_zero(); });
}

bool is_integral(const RatVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x.is_integer(); });
}

RatVec reduce_mod1(const RatVec& v) {
    RatVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].frac();
    return r;
}

std::string to_string(const RatVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
    return s + ")";
}

// ---------------------------------------------------------------- RatMatrix

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rat>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    for (const auto& row : rows) {
        if (row.size() != c_) throw std::invalid_argument("ragged matrix literal");
        a_.insert(a_.end(), row.begin(), row.end());
    }
}

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVec>& rows, std::size_t cols) {
    if (!rows.empty()) cols = rows[0].size();
    RatMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw std::invalid_argument("ragged rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

RatMatrix RatMatrix::from_columns(const std::vector<RatVec>& cols, std::size_t rows) {
    return from_rows(cols, rows).transpose();
}

RatMatrix RatMatrix::diagonal(const RatVec& d) {
    RatMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

RatVec RatMatrix::row(std::size_t i) const {
    return RatVec(a_.begin() + static_cast<long>(i * c_), a_.begin() + static_cast<long>((i + 1) * c_));
}

RatVec RatMatrix::col(std::size_t j) const {
    RatVec v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
}

std::vector<RatVec> RatMatrix::columns() const {
    std::vector<RatVec> out;
    for (std::size_t j = 0; j < c_; ++j) out.push_back(col(j));
    return out;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RatMatrix RatMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > r_ || c0 + nc > c_) throw std::out_of_range("block out of range");
    RatMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

void RatMatrix::set_block(std::size_t r0, std::size_t c0, const RatMatrix& b) {
    if (r0 + b.r_ > r_ || c0 + b.c_ > c_) throw std::out_of_range("block out of range");
    for (std::size_t i = 0; i < b.r_; ++i)
        for (std::size_t j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
    if (c_ != o.r_) throw std::invalid_argument("matrix dimension mismatch");
    RatMatrix p(r_, o.c_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t k = 0; k < c_; ++k) {
            const Rat& x = (*this)(i, k);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < o.c_; ++j) p(i, j) += x * o(k, j);
        }
    return p;
}

RatVec RatMatrix::operator*(const RatVec& v) const {
    if (c_ != v.size()) throw std::invalid_argument("matrix/vector dimension mismatch");
    RatVec out(r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t k = 0; k < c_; ++k) out[i] += (*this)(i, k) * v[k];
    return out;
}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix dimension mismatch");
    RatMatrix s(*this);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] += o.a_[i];
    return s;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix dimension mismatch");
    RatMatrix s(*this);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] -= o.a_[i];
    return s;
}

RatMatrix RatMatrix::operator-() const { return scaled(Rat(-1)); }

RatMatrix RatMatrix::scaled(const Rat& s) const {
    RatMatrix m(*this);
    for (auto& x : m.a_) x *= s;
    return m;
}

bool operator<(const RatMatrix& a, const RatMatrix& b) {
    if (a.r_ != b.r_) return a.r_ < b.r_;
    if (a.c_ != b.c_) return a.c_ < b.c_;
    return std::lexicographical_compare(a.a_.begin(), a.a_.end(), b.a_.begin(), b.a_.end());
}

bool RatMatrix::is_integral() const {
    return std::all_of(a_.begin(), a_.end(), [](const Rat& x) { return x.is_integer(); });
}

bool RatMatrix::is_symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = i + 1; j < c_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

bool RatMatrix::is_identity() const { return square() && *this == identity(r_); }

bool RatMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Rat& x) { return x.is_zero(); });
}

Rat RatMatrix::det() const {
    if (!square()) throw std::invalid_argument("determinant of non-square matrix");
    RatMatrix m(*this);
    Rat d = 1;
    for (std::size_t c = 0; c < r_; ++c) {
        std::size_t p = c;
        while (p < r_ && m(p, c).is_zero()) ++p;
        if (p == r_) return Rat(0);
        if (p != c) {
            for (std::size_t j = 0; j < c_; ++j) std::swap(m(p, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        for (std::size_t i = c + 1; i < r_; ++i) {
            if (m(i, c).is_zero()) continue;
            Rat f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < c_; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

RatMatrix RatMatrix::inverse() const {
    if (!square()) throw std::invalid_argument("inverse of non-square matrix");
    Rref rr = rref(hstack(*this, identity(r_)));
    for (std::size_t i = 0; i < r_; ++i)
        if (i >= rr.pivots.size() || rr.pivots[i] != i) throw Error("singular matrix");
    return rr.reduced.block(0, r_, r_, r_);
}

std::size_t RatMatrix::rank() const { return rref(*this).pivots.size(); }

RatMatrix RatMatrix::power(long k) const {
    if (k < 0) return inverse().power(-k);
    RatMatrix result = identity(r_), base = *this;
    while (k) {
        if (k & 1) result = result * base;
        base = base * base;
        k >>= 1;
    }
    return result;
}

Integer RatMatrix::denominator_lcm() const {
    Integer l = 1;
    for (const auto& x : a_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get().get_den_mpz_t());
    return l;
}

std::string RatMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < r_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < c_; ++j) os << (j ? "," : "") << (*this)(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

std::string RatMatrix::key() const { return str(); }

RatMatrix hstack(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hstack row mismatch");
    RatMatrix m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

RatMatrix vstack(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() == 0) return b;
    if (b.rows() == 0) return a;
    if (a.cols() != b.cols()) throw std::invalid_argument("vstack column mismatch");
    RatMatrix m(a.rows() + b.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

RatMatrix direct_sum(const RatMatrix& a, const RatMatrix& b) {
    RatMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

// ---------------------------------------------------------------- elimination

Rref rref(const RatMatrix& input) {
    RatMatrix m(input);
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
        std::size_t p = row;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        Rat inv = Rat(1) / m(row, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, c).is_zero()) continue;
            Rat f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(c);
        ++row;
    }
    return {m, pivots};
}

std::vector<RatVec> kernel(const RatMatrix& m) {
    Rref rr = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : rr.pivots) is_pivot[p] = true;
    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        RatVec v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = -rr.reduced(i, f);
        basis.push_back(v);
    }
    return basis;
}

std::optional<LinearSolution> solve_rational(const RatMatrix& a, const RatVec& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("solve_rational: dimension mismatch");
    RatMatrix aug(a.rows(), a.cols() + 1);
    aug.set_block(0, 0, a);
    for (std::size_t i = 0; i < b.size(); ++i) aug(i, a.cols()) = b[i];
    Rref rr = rref(aug);
    if (!rr.pivots.empty() && rr.pivots.back() == a.cols()) return std::nullopt;
    LinearSolution sol;
    sol.particular.assign(a.cols(), Rat(0));
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) sol.particular[rr.pivots[i]] = rr.reduced(i, a.cols());
    sol.kernel = kernel(a);
    return sol;
}

std::vector<RatVec> span_basis(const std::vector<RatVec>& vectors, std::size_t n) {
    if (vectors.empty()) return {};
    Rref rr = rref(RatMatrix::from_rows(vectors, n));
    std::vector<RatVec> out;
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) out.push_back(rr.reduced.row(i));
    return out;
}

// ---------------------------------------------------------------- integer lattices

namespace {

using IntRows = std::vector<std::vector<Integer>>;

IntRows to_int(const RatMatrix& m) {
    if (!m.is_integral()) throw std::invalid_argument("integer matrix expected");
    IntRows a(m.rows(), std::vector<Integer>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j).num();
    return a;
}

RatMatrix from_int(const IntRows& a, std::size_t cols) {
    RatMatrix m(a.size(), cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rat(a[i][j]);
    return m;
}

void row_axpy(std::vector<Integer>& dst, const std::vector<Integer>& src, const Integer& f) {
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] -= f * src[j];
}

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

HnfResult hnf(const RatMatrix& m) {
    IntRows a = to_int(m);
    const std::size_t rows = m.rows(), cols = m.cols();
    IntRows u(rows, std::vector<Integer>(rows));
    for (std::size_t i = 0; i < rows; ++i) u[i][i] = 1;

    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < rows; ++c) {
        while (true) {
            std::size_t best = rows;
            for (std::size_t i = row; i < rows; ++i)
                if (a[i][c] != 0 && (best == rows || abs(a[i][c]) < abs(a[best][c]))) best = i;
            if (best == rows) break;
            std::swap(a[best], a[row]);
            std::swap(u[best], u[row]);
            bool done = true;
            for (std::size_t i = row + 1; i < rows; ++i) {
                if (a[i][c] == 0) continue;
                Integer q = floor_div(a[i][c], a[row][c]);
                row_axpy(a[i], a[row], q);
                row_axpy(u[i], u[row], q);
                if (a[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (a[row][c] == 0) continue;
        if (a[row][c] < 0) {
            for (auto& x : a[row]) x = -x;
            for (auto& x : u[row]) x = -x;
        }
        for (std::size_t i = 0; i < row; ++i) {
            Integer q = floor_div(a[i][c], a[row][c]);
            if (q == 0) continue;
            row_axpy(a[i], a[row], q);
            row_axpy(u[i], u[row], q);
        }
        ++row;
    }
    return {from_int(a, cols), from_int(u, rows)};
}

bool lattice_member(const RatVec& v, const RatMatrix& basis) {
    if (basis.rows() != v.size()) throw std::invalid_argument("lattice_member: dimension mismatch");
    if (basis.rank() != basis.cols()) throw Error("lattice_member: basis is rank-deficient");
    auto sol = solve_rational(basis, v);
    return sol && is_integral(sol->particular);
}

RatMatrix lattice_basis(const std::vector<RatVec>& generators, std::size_t n) {
    if (generators.empty()) return RatMatrix(n, 0);
    RatMatrix g = RatMatrix::from_rows(generators, n);
    Rat d(g.denominator_lcm());
    HnfResult h = hnf(g.scaled(d));
    std::vector<RatVec> cols;
    for (std::size_t i = 0; i < h.H.rows(); ++i) {
        RatVec r = h.H.row(i);
        if (is_zero(r)) break;
        cols.push_back((Rat(1) / d) * r);
    }
    return RatMatrix::from_columns(cols, n);
}

RatMatrix integer_kernel(const RatMatrix& m) {
    const std::size_t n = m.cols();
    if (m.rows() == 0) return RatMatrix::identity(n);
    Rat d(m.denominator_lcm());
    HnfResult h = hnf(m.scaled(d).transpose());
    std::vector<RatVec> cols;
    for (std::size_t i = 0; i < h.H.rows(); ++i)
        if (is_zero(h.H.row(i))) cols.push_back(h.U.row(i));
    return RatMatrix::from_columns(cols, n);
}

RatMatrix saturated_basis(const std::vector<RatVec>& vectors, std::size_t n) {
    auto span = span_basis(vectors, n);
    if (span.empty()) return RatMatrix(n, 0);
    auto ann = kernel(RatMatrix::from_rows(span, n));
    if (ann.empty()) return RatMatrix::identity(n);
    return integer_kernel(RatMatrix::from_rows(ann, n));
}

RatMatrix extend_to_unimodular(const RatMatrix& basis) {
    const std::size_t n = basis.rows(), k = basis.cols();
    if (basis.rank() != k) throw Error("extend_to_unimodular: basis is rank-deficient");
    HnfResult h = hnf(basis);
    RatMatrix t = h.H.block(0, 0, k, k);
    if (abs(t.det()) != Rat(1)) throw Error("extend_to_unimodular: sublattice is not saturated");
    RatMatrix blk = RatMatrix::identity(n);
    blk.set_block(0, 0, t);
    return h.U.inverse() * blk;
}

std::vector<Integer> smith_invariants(const RatMatrix& m) {
    IntRows a = to_int(m);
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<Integer> out;
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        while (true) {
            std::size_t bi = rows, bj = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (a[i][j] != 0 && (bi == rows || abs(a[i][j]) < abs(a[bi][bj]))) bi = i, bj = j;
            if (bi == rows) return out;
            std::swap(a[bi], a[t]);
            for (auto& r : a) std::swap(r[bj], r[t]);
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                Integer q = floor_div(a[i][t], a[t][t]);
                if (q != 0) row_axpy(a[i], a[t], q);
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                Integer q = floor_div(a[t][j], a[t][t]);
                if (q != 0)
                    for (std::size_t i = 0; i < rows; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == rows) break;
            for (std::size_t j = 0; j < cols; ++j) a[t][j] += a[bad][j];
        }
        out.push_back(abs(a[t][t]));
    }
    return out;
}

std::optional<Rat> rational_approx(double x, long max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    // Continued-fraction convergents.
    long double r = x;
    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        long double a = std::floor(r);
        Integer ai(static_cast<double>(a));
        Integer p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1, q0 = q1, p1 = p2, q1 = q2;
        long double frac = r - a;
        if (frac < 1e-18L) break;
        r = 1.0L / frac;
    }
    if (q1 == 0) return std::nullopt;
    Rat cand(p1, q1);
    if (std::fabs(cand.to_double() - x) <= tol * std::max(1.0, std::fabs(x))) return cand;
    return std::nullopt;
}

bool is_positive_definite(const RatMatrix& g) {
    if (!g.is_symmetric()) return false;
    for (std::size_t k = 1; k <= g.rows(); ++k)
        if (g.block(0, 0, k, k).det().sign() <= 0) return false;
    return true;
}

}  // namespace flatorb

namespace flatorb {

std::optional<RatVec> integer_solve(const RatMatrix& m, const RatVec& c) {
    if (m.rows() != c.size()) throw std::invalid_argument("integer_solve: dimension mismatch");
    const std::size_t n = m.cols();
    Rat d(m.denominator_lcm());
    // U M^T = H  =>  M U^T = H^T; substitute z = U^T y.
    HnfResult h = hnf(m.scaled(d).transpose());
    RatVec rhs = d * c;
    RatVec y(n);
    std::size_t row = 0;
    for (; row < h.H.rows(); ++row) {
        RatVec r = h.H.row(row);
        if (is_zero(r)) break;
        std::size_t p = 0;
        while (r[p].is_zero()) ++p;
        // Equation p: sum_i H(i,p) y_i = rhs_p, rows before `row` already fixed.
        Rat acc = rhs[p];
        for (std::size_t i = 0; i < row; ++i) acc -= h.H(i, p) * y[i];
        y[row] = acc / r[p];
        if (!y[row].is_integer()) return std::nullopt;
    }
    RatVec z = h.U.transpose() * y;
    if (m * z != c) return std::nullopt;
    return z;
}

std::vector<Rat> characteristic_polynomial(const RatMatrix& a) {
    if (!a.square()) throw std::invalid_argument("characteristic polynomial of a non-square matrix");
    const std::size_t n = a.rows();
    // Faddeev-LeVerrier
    std::vector<Rat> c(n + 1);
    c[0] = 1;
    RatMatrix m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m + RatMatrix::identity(n).scaled(c[k - 1]);
        RatMatrix am = a * m;
        Rat tr;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[k] = -tr / Rat(static_cast<long>(k));
    }
    return c;
}

}  // namespace flatorb
