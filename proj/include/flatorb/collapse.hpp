#pragma once

#include "flatorb/affine_group.hpp"
#include "flatorb/lattice_geometry.hpp"
#include "flatorb/wallpaper.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace flatorb {

using Subspace = std::vector<RatVec>;

/// Classification of a normalized group of dimension <= 3.
OrbifoldLabel classify(const CrystalGroup& g);

bool is_invariant(const CrystalGroup& g, const Subspace& w);

/// Smallest invariant rational subspace containing w (exact input).
Subspace rational_closure(const CrystalGroup& g, const Subspace& w);

/// Exact direction if every normalized entry is within 1e-14 of a fraction with
/// denominator <= 1e6.
std::optional<RatVec> rationalize_direction(const Eigen::VectorXd& v);

/// Float input: directions failing the rationality test (denominator bound 1e6)
/// are closed to the isotypic components they meet.
Subspace rational_closure(const CrystalGroup& g, const std::vector<Eigen::VectorXd>& w, std::uint64_t seed = 0);

/// Exact rational bases of the isotypic components, or nullopt if some component
/// is not defined over the rationals.
std::optional<std::vector<Subspace>> rational_isotypic_components(const CrystalGroup& g, std::uint64_t seed = 0);

struct CollapseResult {
    CrystalGroup quotient;   // normalized, dimension n - dim W
    OrbifoldLabel label;
    RatMatrix quotient_map;  // m x n: coordinates of the image in the quotient's lattice basis
    std::vector<std::string> construction_log;
};

/// Collapse an invariant rational subspace (orthogonal projection onto its complement).
CollapseResult collapse(const CrystalGroup& g, const Subspace& w);

/// Parse "1,0,0" or "1,0,0;0,1,0" (rows are spanning vectors).
Subspace parse_subspace(const std::string& text);
/// Same, keeping floating values for the rationality test.
std::vector<Eigen::VectorXd> parse_subspace_float(const std::string& text);

/// Isomorphism of holonomy groups, as an index map; searched by backtracking over
/// generator images (|H| <= 48).
std::optional<std::vector<std::size_t>> find_holonomy_isomorphism(const HolonomyData& a, const HolonomyData& b);
bool is_holonomy_isomorphism(const HolonomyData& a, const HolonomyData& b, const std::vector<std::size_t>& map);

/// Block group (A + phi(A), (v_A, w_phi(A))) with gram G_orb + lambda G_mfd; asserts
/// torsion-freeness and that collapsing the second block gives back orb.
CrystalGroup product_resolution(const CrystalGroup& orb, const CrystalGroup& mfd,
                                std::optional<std::vector<std::size_t>> pairing = std::nullopt,
                                const Rat& lambda = Rat(1));

/// q equals orb written in the basis x -> T x (same holonomy and translation classes).
bool same_group_in_basis(const CrystalGroup& q, const CrystalGroup& orb, const RatMatrix& t);

struct IteratedCheck {
    bool ok = false;
    std::string direct, stepwise;
};
/// collapse(W + W2) versus collapse(W) followed by collapsing the image of W2.
IteratedCheck check_iterated_collapse(const CrystalGroup& g, const Subspace& w, const Subspace& w2);

struct Direction {
    std::string description;
    Subspace basis;
};

/// Directions swept for a group: isotypic components, rational lines (|p|,|q| <= 3)
/// inside 2-dimensional components, invariant planes and the whole space.
std::vector<Direction> sweep_directions(const CrystalGroup& g, std::uint64_t seed = 0, int slope_bound = 3);

struct CollapseCase {
    std::string group;
    std::string direction;
    std::string label;
    std::size_t dim = 0;
};

struct TheoremCReport {
    std::vector<CollapseCase> cases;
    std::set<std::string> labels;
    std::set<std::string> expected;
    std::vector<std::string> missing;
    std::vector<std::string> extra;
    bool pass = false;
    double seconds = 0.0;
};

const std::set<std::string>& theorem_c_expected_labels();

struct NamedGroup {
    std::string name;
    CrystalGroup group;
    std::vector<Direction> special;
};

TheoremCReport verify_theorem_c(const std::vector<NamedGroup>& groups, std::uint64_t seed = 0);

struct FamilyLimit {
    TorusLimit torus;
    Subspace collapsed;  // rational span of the vanishing directions (lattice coordinates)
    std::optional<CollapseResult> result;
    OrbifoldLabel label;
};

/// Limit of the flat orbifolds R^n / g with metrics gram(t) (invariant for each t).
FamilyLimit family_limit(const CrystalGroup& g, const std::function<Eigen::MatrixXd(double)>& gram,
                         const std::vector<double>& schedule);

}  // namespace flatorb
