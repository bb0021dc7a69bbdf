#pragma once

#include "flatorb/collapse.hpp"
#include "flatorb/io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flatorb {

struct CollapseExpectation {
    std::string subspace;  // rows are spanning vectors, lattice coordinates
    std::string label;
    std::optional<std::string> literature_label;  // set where the published identification differs
    bool special = false;
};

struct VerificationRecipe {
    std::size_t generator = 0;
    std::size_t order = 0;
    std::vector<Rat> charpoly;  // leading coefficient first
};

struct GramConstraint {
    std::string text;
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, Rat>> terms;  // sum c * g_ij = 0 (1-based ij)
};

struct CatalogEntry {
    std::string key;
    std::string title;
    std::vector<std::string> aliases;
    CrystalGroup group;
    json expected;
    json provenance;
    std::string notes;
    std::optional<Rect> cell;
    std::vector<CollapseExpectation> collapse;
    std::vector<VerificationRecipe> verification;
    std::vector<GramConstraint> gram_constraints;

    std::optional<long> expected_int(const std::string& field) const;
    std::optional<std::string> expected_string(const std::string& field) const;
    std::optional<bool> expected_bool(const std::string& field) const;
};

/// Keys in index order, followed by K(2), K(3), K(5), K(7).
std::vector<std::string> catalog_list();

/// Resolves aliases; the entry is validated (group invariants, verification recipes,
/// gram constraints). Throws Error on an unknown key.
CatalogEntry catalog_get(const std::string& key);

/// Generalized Klein bottle for a prime p: companion matrix of 1 + x + ... + x^(p-1)
/// plus a fixed line carrying the translation e_p / p.
CatalogEntry generalized_klein_bottle(long p);

/// Runs every expected assertion; returns one message per failing field.
std::vector<std::string> check_entry(const CatalogEntry& e, std::uint64_t seed = 0);

/// The ten closed flat 3-manifolds, with their tabulated special directions.
std::vector<NamedGroup> theorem_c_groups();

TheoremCReport verify_theorem_c(std::uint64_t seed = 0);

/// Raw file contents of the embedded catalog (file name -> JSON text).
const std::map<std::string, std::string>& catalog_files();

}  // namespace flatorb
