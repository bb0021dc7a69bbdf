#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace flatorb {

/// Full-rank lattice given by basis columns.
struct Lattice {
    Eigen::MatrixXd basis;

    Lattice() = default;
    explicit Lattice(Eigen::MatrixXd b);
    /// Lattice whose basis has the given Gram matrix (upper Cholesky factor).
    static Lattice from_gram(const Eigen::MatrixXd& gram);
    /// Rows "1,0;0.5,0.5" are basis vectors.
    static Lattice parse(const std::string& text);

    Eigen::Index dim() const { return basis.cols(); }
    Eigen::MatrixXd gram() const { return basis.transpose() * basis; }
    double covolume() const { return std::abs(basis.determinant()); }
};

double theta_n(int n);  // arcsin(2^{-n(n-1)/4})
double beta_n(int n);   // min(1/2, sin 2 theta_n)

struct ShortVector {
    Eigen::VectorXi coeffs;
    Eigen::VectorXd vec;
    double norm;
};

/// All lattice vectors with 0 < |v| <= r (both signs), sorted by norm.
std::vector<ShortVector> short_vectors(const Lattice& l, double r, std::size_t cap = 1000000);

/// sin of the angle between column i and the span of the others.
double angle_sine(const Eigen::MatrixXd& b, Eigen::Index i);
bool angle_bounded(const Eigen::MatrixXd& b, double slack = 1e-12);

struct ReducedBasis {
    Eigen::MatrixXd vectors;  // columns
    Eigen::MatrixXi coeffs;   // in the input basis
    double ratio = 0.0;       // det / prod |v_i|
};
/// A basis meeting det >= 2^{-n(n-1)/4} prod |v_i|.
ReducedBasis reduced_basis(const Lattice& l);

struct SpecialBasis {
    Eigen::MatrixXd vectors;  // columns u_1..u_n, non-increasing norm
    Eigen::MatrixXi coeffs;
    double R0 = 0.0;
    double theta = 0.0;
    double beta = 0.0;
    std::vector<double> norms;
    std::vector<double> angles;  // ang(u_i, span of the others), radians
};
SpecialBasis special_basis(const Lattice& l);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Distance from point p (ambient coordinates) to the nearest lattice point.
double distance_to_lattice(const Lattice& l, const Eigen::VectorXd& p);

/// Certified enclosure of the covering radius (the diameter of the flat torus).
Interval covering_radius(const Lattice& l, double eps = 1e-4, std::size_t budget = 4000000);

struct DiameterReport {
    double diam_lo = 0.0;
    double diam_hi = 0.0;
    double lower_bound = 0.0;  // beta_n |u_1|
    double upper_bound = 0.0;  // sum |u_i| / 2
    bool holds = false;
};
DiameterReport check_diameter_bound(const Lattice& l);

struct TorusLimit {
    int m = 0;
    Eigen::MatrixXd limit_basis;          // columns, ambient coordinates
    Eigen::MatrixXd vanishing_directions; // columns, ambient coordinates at the last t
    Eigen::MatrixXi limit_coeffs;         // integer coordinates in the family basis
    Eigen::MatrixXi vanishing_coeffs;
};

using LatticeFamily = std::function<Eigen::MatrixXd(double)>;

/// Affine family t -> b0 + t b1.
LatticeFamily affine_family(const Eigen::MatrixXd& b0, const Eigen::MatrixXd& b1);

TorusLimit sequence_limit(const LatticeFamily& family, const std::vector<double>& schedule);

std::vector<double> parse_schedule(const std::string& text);

}  // namespace flatorb
