#include "flatorb/lattice_geometry.hpp"

#include "flatorb/exact.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace flatorb {

Lattice::Lattice(Eigen::MatrixXd b) : basis(std::move(b)) {
    if (basis.rows() != basis.cols() || basis.rows() == 0) throw Error("lattice basis must be square and nonempty");
    if (std::abs(basis.determinant()) < 1e-14) throw Error("lattice basis is not full rank");
}

Lattice Lattice::from_gram(const Eigen::MatrixXd& gram) {
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw Error("gram matrix is not positive definite");
    return Lattice(Eigen::MatrixXd(llt.matrixU()));
}

Lattice Lattice::parse(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream rs(text);
    std::string row;
    while (std::getline(rs, row, ';')) {
        std::vector<double> r;
        std::stringstream cs(row);
        std::string cell;
        while (std::getline(cs, cell, ',')) r.push_back(Rat::parse(cell).to_double());
        rows.push_back(r);
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (static_cast<Eigen::Index>(rows[j].size()) != n) throw Error("lattice matrix must be square: " + text);
        for (Eigen::Index i = 0; i < n; ++i) b(i, j) = rows[j][i];
    }
    return Lattice(b);
}

double theta_n(int n) { return std::asin(std::pow(2.0, -0.25 * n * (n - 1))); }

double beta_n(int n) { return std::min(0.5, std::sin(2.0 * theta_n(n))); }

// ---------------------------------------------------------------- enumeration

namespace {

struct Enumerator {
    Eigen::MatrixXd r;  // upper Cholesky factor of the gram matrix
    Eigen::VectorXd center;
    Eigen::VectorXi x;
    double bound2;
    std::function<bool(const Eigen::VectorXi&, double)> visit;  // returns false to stop

    bool run(Eigen::Index i, double used) {
        const Eigen::Index n = r.rows();
        double c = center(i);
        for (Eigen::Index j = i + 1; j < n; ++j) c -= r(i, j) / r(i, i) * (x(j) - center(j));
        // c is the real value x_i should take; remaining budget bound2 - used.
        double rem = bound2 - used;
        if (rem < 0) return true;
        double half = std::sqrt(rem) / r(i, i);
        long lo = static_cast<long>(std::ceil(c - half - 1e-12)), hi = static_cast<long>(std::floor(c + half + 1e-12));
        for (long xi = lo; xi <= hi; ++xi) {
            double d = r(i, i) * (xi - c);
            double u = used + d * d;
            if (u > bound2) continue;
            x(i) = static_cast<int>(xi);
            if (i == 0) {
                if (!visit(x, u)) return false;
            } else if (!run(i - 1, u)) {
                return false;
            }
        }
        return true;
    }
};

Eigen::MatrixXd upper_cholesky(const Eigen::MatrixXd& gram) {
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw Error("gram matrix is not positive definite");
    return llt.matrixU();
}

}  // namespace

std::vector<ShortVector> short_vectors(const Lattice& l, double radius, std::size_t cap) {
    if (radius < 0) throw Error("short_vectors: negative radius");
    const Eigen::Index n = l.dim();
    Enumerator e;
    e.r = upper_cholesky(l.gram());
    e.center = Eigen::VectorXd::Zero(n);
    e.x = Eigen::VectorXi::Zero(n);
    e.bound2 = radius * radius * (1 + 1e-12) + 1e-15;
    std::vector<ShortVector> out;
    e.visit = [&](const Eigen::VectorXi& x, double) {
        if (x.isZero()) return true;
        if (out.size() >= cap) throw Error("short_vectors: more than " + std::to_string(cap) + " vectors; radius too large");
        Eigen::VectorXd v = l.basis * x.cast<double>();
        out.push_back({x, v, v.norm()});
        return true;
    };
    e.run(n - 1, 0.0);
    std::stable_sort(out.begin(), out.end(), [](const ShortVector& a, const ShortVector& b) { return a.norm < b.norm; });
    return out;
}

double distance_to_lattice(const Lattice& l, const Eigen::VectorXd& p) {
    const Eigen::Index n = l.dim();
    Eigen::VectorXd y = l.basis.colPivHouseholderQr().solve(p);
    Eigen::VectorXd z = y.array().round().matrix();
    double best2 = (l.basis * (y - z)).squaredNorm();
    Enumerator e;
    e.r = upper_cholesky(l.gram());
    e.center = y;
    e.x = Eigen::VectorXi::Zero(n);
    e.bound2 = best2 * (1 + 1e-12);
    e.visit = [&](const Eigen::VectorXi& x, double q) {
        (void)x;
        if (q < best2) best2 = q;
        return true;
    };
    e.run(n - 1, 0.0);
    return std::sqrt(std::max(0.0, best2));
}

// ---------------------------------------------------------------- bases

double angle_sine(const Eigen::MatrixXd& b, Eigen::Index i) {
    const Eigen::Index n = b.cols();
    if (n == 1) return 1.0;
    Eigen::MatrixXd others(b.rows(), n - 1);
    for (Eigen::Index j = 0, k = 0; j < n; ++j)
        if (j != i) others.col(k++) = b.col(j);
    double g = (others.transpose() * others).determinant();
    return std::abs(b.determinant()) / (b.col(i).norm() * std::sqrt(std::max(g, 1e-300)));
}

bool angle_bounded(const Eigen::MatrixXd& b, double slack) {
    const int n = static_cast<int>(b.cols());
    double s = std::sin(theta_n(n));
    for (Eigen::Index i = 0; i < b.cols(); ++i)
        if (angle_sine(b, i) < s - slack) return false;
    return true;
}

namespace {

constexpr double kNormTol = 1e-9;

bool sign_normalized(const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) return v(i) > 0;
    }
    return true;
}

struct Candidate {
    std::vector<std::size_t> idx;  // ordered: non-increasing norm, then coordinates
    std::vector<double> norms;
};

/// Compare ordered candidate bases: norm tuple first, then coordinates.
bool candidate_less(const Candidate& a, const Candidate& b, const std::vector<ShortVector>& vs) {
    for (std::size_t k = 0; k < a.idx.size(); ++k) {
        double na = a.norms[k], nb = b.norms[k];
        if (std::abs(na - nb) > kNormTol * std::max(1.0, na)) return na < nb;
    }
    for (std::size_t k = 0; k < a.idx.size(); ++k) {
        const auto& va = vs[a.idx[k]].vec;
        const auto& vb = vs[b.idx[k]].vec;
        for (Eigen::Index i = 0; i < va.size(); ++i)
            if (std::abs(va(i) - vb(i)) > 1e-12) return va(i) < vb(i);
    }
    return false;
}

Candidate order_candidate(std::vector<std::size_t> idx, const std::vector<ShortVector>& vs) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        double na = vs[a].norm, nb = vs[b].norm;
        if (std::abs(na - nb) > kNormTol * std::max(1.0, na)) return na > nb;
        for (Eigen::Index i = 0; i < vs[a].vec.size(); ++i)
            if (std::abs(vs[a].vec(i) - vs[b].vec(i)) > 1e-12) return vs[a].vec(i) < vs[b].vec(i);
        return false;
    });
    Candidate c{idx, {}};
    for (auto i : idx) c.norms.push_back(vs[i].norm);
    return c;
}

using Predicate = std::function<bool(const Eigen::MatrixXd&)>;

/// Among bases drawn from vs (sign-normalized, sorted by norm), find the minimal
/// max-norm ones satisfying pred and return the lexicographically least ordering.
std::optional<Candidate> best_basis(const std::vector<ShortVector>& vs, Eigen::Index n, const Predicate& pred) {
    const std::size_t N = vs.size();
    std::optional<Candidate> best;
    double r0 = -1;
    std::vector<std::size_t> pick(static_cast<std::size_t>(n));
    auto check = [&](const std::vector<std::size_t>& idx) {
        Eigen::MatrixXi c(n, n);
        Eigen::MatrixXd b(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            c.col(j) = vs[idx[static_cast<std::size_t>(j)]].coeffs;
            b.col(j) = vs[idx[static_cast<std::size_t>(j)]].vec;
        }
        double d = c.cast<double>().determinant();
        if (std::abs(std::abs(d) - 1.0) > 1e-6) return;
        if (!pred(b)) return;
        Candidate cand = order_candidate(idx, vs);
        if (!best || candidate_less(cand, *best, vs)) best = cand;
    };
    std::function<void(std::size_t, std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start,
                                                                        std::size_t top) {
        if (depth + 1 == static_cast<std::size_t>(n)) {
            pick[depth] = top;
            check(pick);
            return;
        }
        for (std::size_t i = start; i < top; ++i) {
            pick[depth] = i;
            rec(depth + 1, i + 1, top);
        }
    };
    for (std::size_t k = 0; k < N; ++k) {
        if (r0 >= 0 && vs[k].norm > r0 * (1 + kNormTol) + kNormTol) break;
        if (n == 1) {
            pick[0] = k;
            check(pick);
        } else {
            rec(0, 0, k);
        }
        if (best && r0 < 0) r0 = best->norms[0];
    }
    return best;
}

std::vector<ShortVector> half_short_vectors(const Lattice& l, double r) {
    std::vector<ShortVector> out;
    for (auto& v : short_vectors(l, r))
        if (sign_normalized(v.vec)) out.push_back(std::move(v));
    return out;
}

void search(const Lattice& l, const Predicate& pred, std::optional<Candidate>& found, std::vector<ShortVector>& vs) {
    const Eigen::Index n = l.dim();
    double r = std::pow(l.covolume(), 1.0 / static_cast<double>(n));
    for (int iter = 0; iter < 60; ++iter) {
        vs = half_short_vectors(l, r);
        if (static_cast<Eigen::Index>(vs.size()) >= n) {
            found = best_basis(vs, n, pred);
            if (found) return;
        }
        r *= 1.3;
    }
    throw Error("basis search exceeded its radius cap");
}

}  // namespace

ReducedBasis reduced_basis(const Lattice& l) {
    const Eigen::Index n = l.dim();
    const double bound = std::pow(2.0, -0.25 * static_cast<double>(n * (n - 1)));
    auto pred = [&](const Eigen::MatrixXd& b) {
        double prod = 1;
        for (Eigen::Index j = 0; j < n; ++j) prod *= b.col(j).norm();
        return std::abs(b.determinant()) >= bound * prod * (1 - 1e-12);
    };
    std::optional<Candidate> found;
    std::vector<ShortVector> vs;
    search(l, pred, found, vs);
    ReducedBasis rb;
    rb.vectors.resize(n, n);
    rb.coeffs.resize(n, n);
    double prod = 1;
    for (Eigen::Index j = 0; j < n; ++j) {
        rb.vectors.col(j) = vs[found->idx[static_cast<std::size_t>(j)]].vec;
        rb.coeffs.col(j) = vs[found->idx[static_cast<std::size_t>(j)]].coeffs;
        prod *= rb.vectors.col(j).norm();
    }
    rb.ratio = std::abs(rb.vectors.determinant()) / prod;
    return rb;
}

SpecialBasis special_basis(const Lattice& l) {
    const Eigen::Index n = l.dim();
    auto pred = [](const Eigen::MatrixXd& b) { return angle_bounded(b); };
    std::optional<Candidate> found;
    std::vector<ShortVector> vs;
    search(l, pred, found, vs);
    SpecialBasis sb;
    sb.vectors.resize(n, n);
    sb.coeffs.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        sb.vectors.col(j) = vs[found->idx[static_cast<std::size_t>(j)]].vec;
        sb.coeffs.col(j) = vs[found->idx[static_cast<std::size_t>(j)]].coeffs;
        sb.norms.push_back(sb.vectors.col(j).norm());
    }
    for (Eigen::Index j = 0; j < n; ++j) sb.angles.push_back(std::asin(std::min(1.0, angle_sine(sb.vectors, j))));
    sb.R0 = sb.norms[0];
    sb.theta = theta_n(static_cast<int>(n));
    sb.beta = beta_n(static_cast<int>(n));
    return sb;
}

// ---------------------------------------------------------------- covering radius

Interval covering_radius(const Lattice& input, double eps, std::size_t budget) {
    if (eps <= 0) throw Error("covering_radius: eps must be positive");
    const Eigen::Index n = input.dim();
    Eigen::MatrixXd g = input.gram();
    if (n == 1) {
        double v = 0.5 * std::abs(input.basis(0, 0));
        return {v, v};
    }
    bool rectangular = true;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j && std::abs(g(i, j)) > 1e-14 * std::sqrt(g(i, i) * g(j, j))) rectangular = false;
    if (rectangular) {
        double v = 0.5 * std::sqrt(g.trace());
        return {v, v};
    }

    Lattice l(special_basis(input).vectors);
    g = l.gram();
    auto half_diameter = [&](const Eigen::VectorXd& h) {
        double best = 0;
        for (long s = 0; s < (1L << n); ++s) {
            Eigen::VectorXd d = h;
            for (Eigen::Index i = 0; i < n; ++i)
                if (s & (1L << i)) d(i) = -d(i);
            best = std::max(best, d.dot(g * d));
        }
        return std::sqrt(best);
    };
    struct Box {
        Eigen::VectorXd center, half;
        double dist, hi;
    };
    auto cmp = [](const Box& a, const Box& b) { return a.hi < b.hi; };
    std::priority_queue<Box, std::vector<Box>, decltype(cmp)> queue(cmp);
    double lo = 0;
    auto push = [&](Eigen::VectorXd c, Eigen::VectorXd h) {
        double d = distance_to_lattice(l, l.basis * c);
        lo = std::max(lo, d);
        queue.push({std::move(c), h, d, d + half_diameter(h)});
    };
    push(Eigen::VectorXd::Constant(n, 0.5), Eigen::VectorXd::Constant(n, 0.5));
    std::size_t evals = 1;
    while (true) {
        Box top = queue.top();
        if (top.hi - lo <= eps) return {lo, top.hi};
        if (evals > budget) throw Error("covering_radius: eps too small for the grid budget");
        queue.pop();
        Eigen::Index axis = 0;
        double widest = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            double w = top.half(i) * std::sqrt(g(i, i));
            if (w > widest) widest = w, axis = i;
        }
        Eigen::VectorXd h = top.half;
        h(axis) *= 0.5;
        Eigen::VectorXd c1 = top.center, c2 = top.center;
        c1(axis) -= h(axis);
        c2(axis) += h(axis);
        push(c1, h);
        push(c2, h);
        evals += 2;
    }
}

DiameterReport check_diameter_bound(const Lattice& l) {
    SpecialBasis sb = special_basis(l);
    Interval cr = covering_radius(l, 1e-6);
    DiameterReport rep;
    rep.diam_lo = cr.lo;
    rep.diam_hi = cr.hi;
    rep.lower_bound = sb.beta * sb.norms[0];
    double s = 0;
    for (double x : sb.norms) s += x;
    rep.upper_bound = 0.5 * s;
    rep.holds = rep.diam_lo >= rep.lower_bound - 1e-12 && rep.diam_hi <= rep.upper_bound + 1e-9;
    return rep;
}

// ---------------------------------------------------------------- limits

LatticeFamily affine_family(const Eigen::MatrixXd& b0, const Eigen::MatrixXd& b1) {
    return [b0, b1](double t) { return Eigen::MatrixXd(b0 + t * b1); };
}

std::vector<double> parse_schedule(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(Rat::parse(cell).to_double());
    if (out.empty()) throw Error("empty schedule");
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] <= 0) throw Error("schedule entries must be positive");
        if (i && out[i] >= out[i - 1]) throw Error("schedule must be strictly decreasing");
    }
    return out;
}

TorusLimit sequence_limit(const LatticeFamily& family, const std::vector<double>& schedule) {
    constexpr double kVanish = 1e-6;
    constexpr double kCauchy = 1e-6;
    if (schedule.size() < 3) throw Error("schedule needs at least three parameters");
    std::vector<SpecialBasis> sbs;
    std::vector<Eigen::MatrixXd> bases;
    for (double t : schedule) {
        Eigen::MatrixXd b = family(t);
        Lattice l(b);
        SpecialBasis sb = special_basis(l);
        double s = 0;
        for (double x : sb.norms) s += x;
        if (!std::isfinite(s)) throw Error("family diverges along schedule");
        // keep orientation consistent with the previous parameter
        if (!sbs.empty())
            for (Eigen::Index j = 0; j < sb.vectors.cols(); ++j)
                if (sb.vectors.col(j).dot(sbs.back().vectors.col(j)) < 0) {
                    sb.vectors.col(j) *= -1;
                    sb.coeffs.col(j) *= -1;
                }
        sbs.push_back(sb);
        bases.push_back(b);
    }
    const std::size_t k = schedule.size();
    const Eigen::Index n = sbs.back().vectors.cols();
    std::vector<Eigen::Index> conv, van;
    std::vector<Eigen::VectorXd> limits;
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::VectorXd& a = sbs[k - 3].vectors.col(j);
        const Eigen::VectorXd& b = sbs[k - 2].vectors.col(j);
        const Eigen::VectorXd& c = sbs[k - 1].vectors.col(j);
        double na = a.norm(), nb = b.norm(), nc = c.norm();
        double t1 = schedule[k - 3], t2 = schedule[k - 2], t3 = schedule[k - 1];
        // linear extrapolation to t = 0 from consecutive pairs
        Eigen::VectorXd e1 = b - (b - a) * (t2 / (t2 - t1));
        Eigen::VectorXd e2 = c - (c - b) * (t3 / (t3 - t2));
        bool decreasing = na > nb && nb > nc;
        double extrapolated_norm = nc - (nc - nb) * (t3 / (t3 - t2));
        if (decreasing && (nc < kVanish || std::abs(extrapolated_norm) < kVanish)) {
            van.push_back(j);
            continue;
        }
        bool cauchy = (b - a).norm() <= kCauchy && (c - b).norm() <= kCauchy;
        if (cauchy) {
            conv.push_back(j);
            limits.push_back(c);
        } else if ((e1 - e2).norm() <= kCauchy) {
            conv.push_back(j);
            limits.push_back(e2);
        } else {
            throw Error("no limit detected along schedule");
        }
    }
    TorusLimit out;
    out.m = static_cast<int>(conv.size());
    out.limit_basis.resize(n, out.m);
    out.limit_coeffs.resize(n, out.m);
    for (int i = 0; i < out.m; ++i) {
        out.limit_basis.col(i) = limits[static_cast<std::size_t>(i)];
        out.limit_coeffs.col(i) = sbs.back().coeffs.col(conv[static_cast<std::size_t>(i)]);
    }
    out.vanishing_directions.resize(n, static_cast<Eigen::Index>(van.size()));
    out.vanishing_coeffs.resize(n, static_cast<Eigen::Index>(van.size()));
    for (std::size_t i = 0; i < van.size(); ++i) {
        out.vanishing_directions.col(static_cast<Eigen::Index>(i)) = sbs.back().vectors.col(van[i]);
        out.vanishing_coeffs.col(static_cast<Eigen::Index>(i)) = sbs.back().coeffs.col(van[i]);
    }
    if (out.m > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.limit_basis);
        if (svd.singularValues()(out.m - 1) < 1e-9) throw Error("no limit detected along schedule");
    }
    return out;
}

}  // namespace flatorb
