#pragma once

#include "flatorb/affine_group.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace flatorb {

enum class DivisionType { R, C, H };

std::string to_string(DivisionType t);

/// d = m(m+1)/2, m^2 or m(2m-1).
long factor_dimension(DivisionType t, long m);

struct IsotypicComponent {
    Eigen::MatrixXd basis;  // columns, lattice coordinates, gram-orthonormal
    long irreducible_dim = 0;
    long multiplicity = 0;
    DivisionType division_type = DivisionType::R;
    long factor_dim = 0;
    double eigenvalue = 0.0;

    long dim() const { return irreducible_dim * multiplicity; }
};

struct IsotypicReport {
    std::vector<IsotypicComponent> components;
    long total_dim = 0;
    long invariant_form_dim = 0;

    /// "components: (m=1,R,d=1),(m=1,C,d=1); dim 2"
    std::string summary() const;
    /// Sorted (irreducible_dim, multiplicity, type) triples; seed independent.
    std::string signature() const;
};

/// Exact basis of {X : X A = A X for all A in H}.
std::vector<RatMatrix> commutant_basis(const HolonomyData& h);

/// Exact basis of {S = S^T : A^T S A = S for all A in H}.
std::vector<RatMatrix> invariant_forms_basis(const HolonomyData& h);

/// Random averaged-operator decomposition, cross-checked against the exact
/// invariant-form count and against a rerun with seed + 1.
IsotypicReport isotypic_decompose(const HolonomyData& h, const RatMatrix& gram, std::uint64_t seed = 0);

IsotypicReport teich_report(const CrystalGroup& g, std::uint64_t seed = 0);

/// Column basis (lattice coordinates) of the isotypic component containing the most of v.
std::vector<std::size_t> components_touching(const IsotypicReport& rep, const RatMatrix& gram,
                                             const Eigen::VectorXd& v, double tol = 1e-9);

}  // namespace flatorb
