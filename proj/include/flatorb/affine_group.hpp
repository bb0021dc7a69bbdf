#pragma once

#include "flatorb/exact.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace flatorb {

/// Affine map x -> A x + v in lattice coordinates.
struct AffineElement {
    RatMatrix linear;
    RatVec translation;

    AffineElement() = default;
    AffineElement(RatMatrix a, RatVec v);

    static AffineElement identity(std::size_t n);
    static AffineElement pure_translation(const RatVec& v);

    std::size_t dim() const { return translation.size(); }
    AffineElement inverse() const;
    RatVec apply(const RatVec& x) const;
    std::string str() const;

    friend bool operator==(const AffineElement& a, const AffineElement& b) {
        return a.linear == b.linear && a.translation == b.translation;
    }
};

/// (A,v)(B,w) = (AB, Aw + v)
AffineElement compose(const AffineElement& g, const AffineElement& h);

/// The finite point group with one translation class per element.
struct HolonomyData {
    std::vector<RatMatrix> elements;  // elements[0] is the identity
    std::vector<RatVec> translations; // v_A, reduced into [0,1)^n
    std::vector<std::size_t> generators; // indices of the generators' linear parts

    std::size_t order() const { return elements.size(); }
    std::optional<std::size_t> find(const RatMatrix& a) const;
    std::size_t index(const RatMatrix& a) const;
    std::size_t product(std::size_t i, std::size_t j) const;
    /// Order of elements[i] as a group element.
    std::size_t element_order(std::size_t i) const;
    AffineElement coset_rep(std::size_t i) const { return {elements[i], translations[i]}; }

    std::map<std::string, std::size_t> lookup;
};

class CrystalGroup {
public:
    CrystalGroup() = default;
    CrystalGroup(std::size_t n, std::vector<AffineElement> generators, RatMatrix gram = {},
                 std::string name = {});

    std::size_t dim() const { return n_; }
    const std::vector<AffineElement>& generators() const { return gens_; }
    const RatMatrix& gram() const { return gram_; }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }
    bool normalized() const { return holonomy_ != nullptr; }
    /// Throws unless normalized.
    const HolonomyData& holonomy() const;

    /// Same group with a different invariant metric.
    CrystalGroup with_gram(const RatMatrix& gram) const;

private:
    friend CrystalGroup normalize(const CrystalGroup& g);
    std::size_t n_ = 0;
    std::vector<AffineElement> gens_;
    RatMatrix gram_;
    std::string name_;
    std::shared_ptr<const HolonomyData> holonomy_;
};

/// Point-group elements generated by the linear parts, with translation classes
/// mod Z^n; works on unnormalized presentations. Throws past `cap` elements.
HolonomyData enumerate_point_group(const CrystalGroup& g, std::size_t cap = 10000);

/// Rebase onto the full translation lattice so that pure translations are exactly Z^n.
CrystalGroup normalize(const CrystalGroup& g);

/// Returns g when already normalized.
CrystalGroup ensure_normalized(const CrystalGroup& g);

/// Columns: basis of the translation lattice in the presentation's coordinates.
RatMatrix translation_lattice(const CrystalGroup& g);

/// Express the group in the basis given by the columns of b (need not be unimodular).
CrystalGroup change_basis(const CrystalGroup& g, const RatMatrix& b);

HolonomyData holonomy(const CrystalGroup& g);

struct TorsionReport {
    bool torsion_free = true;
    std::optional<AffineElement> witness;
    RatVec fixed_point;
};
TorsionReport torsion_check(const CrystalGroup& g);
bool is_torsion_free(const CrystalGroup& g);

/// Fixed point of (A, v_A + lambda) for some integral lambda, if any: the projected
/// membership test, restricted to a single holonomy element.
std::optional<std::pair<AffineElement, RatVec>> fixed_point_translate(const RatMatrix& a, const RatVec& v);

double volume(const CrystalGroup& g);

/// Induced action on the k-th exterior power (subsets in lexicographic order).
RatMatrix exterior_power(const RatMatrix& a, std::size_t k);

long betti(const CrystalGroup& g, std::size_t k);

struct Homology {
    std::size_t free_rank = 0;
    std::vector<Integer> torsion;
    std::string str() const;
};
/// Abelianization of the group, from the extension presentation.
Homology first_homology(const CrystalGroup& g);

bool is_orientable(const CrystalGroup& g);

/// Name of a closed flat 3-manifold ("G1".."G6", "B1".."B4"), or empty when g
/// is not a torsion-free 3-dimensional group.
std::string identify_flat3(const CrystalGroup& g);

/// Holonomy isomorphism type of a 3-dimensional group ("1", "Z2", "Z2xZ2", ...).
std::string holonomy_type(const CrystalGroup& g);

}  // namespace flatorb
