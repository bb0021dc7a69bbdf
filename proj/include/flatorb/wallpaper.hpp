#pragma once

#include "flatorb/affine_group.hpp"

#include <array>
#include <string>
#include <vector>

namespace flatorb {

/// Identification of a flat orbifold of dimension <= 2 (or a named flat 3-manifold).
struct OrbifoldLabel {
    std::string iuc;       // p1..p6m, or point / interval / circle / flat3:<name>
    std::string conway;
    std::string orbifold;  // |O|(cone points; corner reflectors), e.g. "S2(2,4,4;)"
    std::string topology;  // T2, K2, S2, RP2, D2, cylinder, Mobius, point, interval, circle, flat3
    std::vector<int> cone_points;
    std::vector<int> corner_reflectors;
    std::size_t holonomy_order = 0;

    /// Short name used in collapse tables: T2, K2, cylinder, Mobius for the manifolds
    /// and bordered cases, the orbifold symbol otherwise.
    std::string name() const;
    friend bool operator==(const OrbifoldLabel& a, const OrbifoldLabel& b) { return a.iuc == b.iuc; }
};

/// The seventeen rows of the wallpaper table, in a fixed order.
const std::vector<OrbifoldLabel>& wallpaper_table();
const OrbifoldLabel& wallpaper_row(const std::string& iuc);

OrbifoldLabel point_label();
OrbifoldLabel interval_label();
OrbifoldLabel circle_label();

OrbifoldLabel classify2(const CrystalGroup& g);

using Point2 = std::array<double, 2>;

struct Segment {
    Point2 a, b;
};

struct RotationCenter {
    RatVec point;  // lattice coordinates in [0,1)^2
    int order;
    bool on_mirror;
};

struct SingularLocus {
    std::vector<RotationCenter> rotation_centers;
    std::vector<Segment> mirror_segments;
    std::vector<Segment> glide_axes;
    std::size_t mirror_classes = 0;  // mirror lines up to lattice translation
    std::size_t glide_classes = 0;   // glide axes (not mirrors) up to lattice translation
};

SingularLocus singular_locus(const CrystalGroup& g);

/// Rotation centres of the elements with linear part a, modulo Z^2.
std::vector<RatVec> rotation_fixed_points(const RatMatrix& a, const RatVec& v);

struct Rect {
    Rat x0, x1, y0, y1;
};

struct CellCheck {
    bool ok = true;
    RatVec witness;
};

/// Every sampled orbit of one lattice cell meets the rectangle (presentation coordinates).
CellCheck fundamental_cell_check(const CrystalGroup& g, const Rect& rect, int grid = 200);

std::string render_svg(const CrystalGroup& g);
void write_svg(const CrystalGroup& g, const std::string& path);

}  // namespace flatorb
