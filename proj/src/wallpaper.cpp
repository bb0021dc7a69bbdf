#include "flatorb/wallpaper.hpp"

#include "flatorb/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace flatorb {

namespace {

OrbifoldLabel row(std::string iuc, std::string conway, std::string orb, std::string topo, std::vector<int> cones,
                  std::vector<int> corners, std::size_t order) {
    return {std::move(iuc), std::move(conway), std::move(orb), std::move(topo), std::move(cones), std::move(corners), order};
}

}  // namespace

const std::vector<OrbifoldLabel>& wallpaper_table() {
    static const std::vector<OrbifoldLabel> table = {
        row("p1", "o", "T2", "T2", {}, {}, 1),
        row("pg", "xx", "K2", "K2", {}, {}, 2),
        row("pm", "**", "S1xI", "cylinder", {}, {}, 2),
        row("cm", "*x", "Mobius", "Mobius", {}, {}, 2),
        row("p2", "2222", "S2(2,2,2,2;)", "S2", {2, 2, 2, 2}, {}, 2),
        row("pgg", "22x", "RP2(2,2;)", "RP2", {2, 2}, {}, 4),
        row("pmg", "22*", "D2(2,2;)", "D2", {2, 2}, {}, 4),
        row("pmm", "*2222", "D2(;2,2,2,2)", "D2", {}, {2, 2, 2, 2}, 4),
        row("cmm", "2*22", "D2(2;2,2)", "D2", {2}, {2, 2}, 4),
        row("p4", "442", "S2(2,4,4;)", "S2", {2, 4, 4}, {}, 4),
        row("p4g", "4*2", "D2(4;2)", "D2", {4}, {2}, 8),
        row("p4m", "*442", "D2(;2,4,4)", "D2", {}, {2, 4, 4}, 8),
        row("p3", "333", "S2(3,3,3;)", "S2", {3, 3, 3}, {}, 3),
        row("p3m1", "*333", "D2(;3,3,3)", "D2", {}, {3, 3, 3}, 6),
        row("p31m", "3*3", "D2(3;3)", "D2", {3}, {3}, 6),
        row("p6", "632", "S2(2,3,6;)", "S2", {2, 3, 6}, {}, 6),
        row("p6m", "*632", "D2(;2,3,6)", "D2", {}, {2, 3, 6}, 12),
    };
    return table;
}

const OrbifoldLabel& wallpaper_row(const std::string& iuc) {
    for (const auto& r : wallpaper_table())
        if (r.iuc == iuc) return r;
    throw Error("unknown wallpaper group: " + iuc);
}

std::string OrbifoldLabel::name() const {
    if (topology == "cylinder" || topology == "Mobius" || topology == "T2" || topology == "K2") return topology;
    if (iuc.rfind("flat3:", 0) == 0) return iuc.substr(6);
    if (!orbifold.empty()) return orbifold;
    return iuc;
}

OrbifoldLabel point_label() { return row("point", "", "point", "point", {}, {}, 1); }
OrbifoldLabel interval_label() { return row("interval", "", "interval", "interval", {}, {}, 2); }
OrbifoldLabel circle_label() { return row("circle", "", "circle", "circle", {}, {}, 1); }

// ---------------------------------------------------------------- classification

std::vector<RatVec> rotation_fixed_points(const RatMatrix& a, const RatVec& v) {
    RatMatrix m = RatMatrix::identity(2) - a;
    Rat d = abs(m.det());
    if (d.is_zero()) throw Error("rotation_fixed_points: element has a fixed direction");
    RatMatrix mi = m.inverse();
    long dl = d.num().get_si();
    std::set<std::string> seen;
    std::vector<RatVec> out;
    for (long i = 0; i < dl; ++i)
        for (long j = 0; j < dl; ++j) {
            RatVec x = reduce_mod1(mi * (v + RatVec{Rat(i), Rat(j)}));
            if (seen.insert(to_string(x)).second) out.push_back(x);
        }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool fixes_mod_lattice(const RatMatrix& a, const RatVec& v, const RatVec& x) {
    return is_integral(x - a * x - v);
}

bool on_some_mirror(const HolonomyData& h, const RatVec& x) {
    for (std::size_t j = 0; j < h.order(); ++j)
        if (h.elements[j].det() == Rat(-1) && fixes_mod_lattice(h.elements[j], h.translations[j], x)) return true;
    return false;
}

/// Glide offsets P_-(Z^2) all realized by mirror lines of the same class.
bool glide_axes_on_mirrors(const RatMatrix& a) {
    RatMatrix id = RatMatrix::identity(2);
    RatMatrix pminus = (id - a).scaled(Rat(1, 2));
    RatMatrix minus_lattice = saturated_basis(kernel(a + id), 2);
    for (const auto& c : pminus.columns())
        if (!lattice_member(c, minus_lattice)) return false;
    return true;
}

}  // namespace

OrbifoldLabel classify2(const CrystalGroup& group) {
    if (group.dim() != 2) throw Error("classify2 expects a 2-dimensional group");
    CrystalGroup g = ensure_normalized(group);
    const HolonomyData& h = g.holonomy();
    std::size_t n_rot = 1, rot_index = 0;
    std::vector<std::size_t> refl;
    for (std::size_t i = 1; i < h.order(); ++i) {
        if (h.elements[i].det() == Rat(1)) {
            std::size_t o = h.element_order(i);
            if (o > n_rot) n_rot = o, rot_index = i;
        } else {
            refl.push_back(i);
        }
    }
    bool valid = (n_rot == 1 || n_rot == 2 || n_rot == 3 || n_rot == 4 || n_rot == 6) &&
                 h.order() == (refl.empty() ? n_rot : 2 * n_rot);
    if (!valid) throw Error("holonomy incompatible with the crystallographic restriction");

    auto has_mirror = [&](std::size_t i) { return fixed_point_translate(h.elements[i], h.translations[i]).has_value(); };
    auto centers_on_mirrors = [&]() {
        for (const auto& x : rotation_fixed_points(h.elements[rot_index], h.translations[rot_index]))
            if (!on_some_mirror(h, x)) return false;
        return true;
    };

    std::string name;
    switch (n_rot) {
        case 1:
            if (refl.empty()) name = "p1";
            else if (!has_mirror(refl[0])) name = "pg";
            else name = glide_axes_on_mirrors(h.elements[refl[0]]) ? "pm" : "cm";
            break;
        case 2: {
            if (refl.empty()) {
                name = "p2";
                break;
            }
            std::size_t mirrors = 0;
            for (auto i : refl) mirrors += has_mirror(i) ? 1 : 0;
            if (mirrors == 2) name = glide_axes_on_mirrors(h.elements[refl[0]]) ? "pmm" : "cmm";
            else if (mirrors == 1) name = "pmg";
            else name = "pgg";
            break;
        }
        case 3: name = refl.empty() ? "p3" : (centers_on_mirrors() ? "p3m1" : "p31m"); break;
        case 4: name = refl.empty() ? "p4" : (centers_on_mirrors() ? "p4m" : "p4g"); break;
        case 6: name = refl.empty() ? "p6" : "p6m"; break;
    }
    return wallpaper_row(name);
}

// ---------------------------------------------------------------- singular locus

namespace {

/// Clip the line p + s d to the closed unit square.
std::optional<Segment> clip(const Point2& p, const Point2& d) {
    double lo = -1e300, hi = 1e300;
    for (int k = 0; k < 2; ++k) {
        if (std::abs(d[k]) < 1e-15) {
            if (p[k] < -1e-12 || p[k] > 1 + 1e-12) return std::nullopt;
            continue;
        }
        double s0 = (0 - p[k]) / d[k], s1 = (1 - p[k]) / d[k];
        lo = std::max(lo, std::min(s0, s1));
        hi = std::min(hi, std::max(s0, s1));
    }
    if (hi - lo < 1e-9) return std::nullopt;
    return Segment{{p[0] + lo * d[0], p[1] + lo * d[1]}, {p[0] + hi * d[0], p[1] + hi * d[1]}};
}

struct LineClass {
    RatVec normal;
    Rat offset;  // normal . x = offset, offset reduced mod 1
};

/// Lines {x : P_- x = c} with direction d; normal is the primitive integer covector killing d.
LineClass line_class(const RatVec& dir, const RatVec& point) {
    RatMatrix dm = RatMatrix::from_rows({dir});
    RatMatrix nb = integer_kernel(dm);  // 2 x 1
    RatVec nrm = nb.col(0);
    if (nrm[0].sign() < 0 || (nrm[0].is_zero() && nrm[1].sign() < 0)) nrm = Rat(-1) * nrm;
    return {nrm, dot(nrm, point).frac()};
}

Point2 to_point(const RatVec& v) { return {v[0].to_double(), v[1].to_double()}; }

}  // namespace

SingularLocus singular_locus(const CrystalGroup& group) {
    if (group.dim() != 2) throw Error("singular_locus expects a 2-dimensional group");
    CrystalGroup g = ensure_normalized(group);
    const HolonomyData& h = g.holonomy();
    SingularLocus loc;
    RatMatrix id = RatMatrix::identity(2);

    std::set<std::string> seen;
    for (std::size_t i = 1; i < h.order(); ++i) {
        if (h.elements[i].det() != Rat(1)) continue;
        for (const auto& x : rotation_fixed_points(h.elements[i], h.translations[i])) {
            if (!seen.insert(to_string(x)).second) continue;
            int order = 0;
            for (std::size_t j = 0; j < h.order(); ++j)
                if (h.elements[j].det() == Rat(1) && fixes_mod_lattice(h.elements[j], h.translations[j], x)) ++order;
            loc.rotation_centers.push_back({x, order, on_some_mirror(h, x)});
        }
    }
    std::sort(loc.rotation_centers.begin(), loc.rotation_centers.end(),
              [](const RotationCenter& a, const RotationCenter& b) { return a.point < b.point; });

    std::set<std::string> mirror_keys, glide_keys;
    std::vector<std::pair<std::string, Segment>> glides;
    std::set<std::string> drawn_mirrors;
    for (std::size_t i = 1; i < h.order(); ++i) {
        const RatMatrix& a = h.elements[i];
        if (a.det() != Rat(-1)) continue;
        RatMatrix pplus = (id + a).scaled(Rat(1, 2)), pminus = (id - a).scaled(Rat(1, 2));
        RatVec dir = kernel(id - a).at(0);
        for (long u = -2; u <= 2; ++u)
            for (long w = -2; w <= 2; ++w) {
                RatVec t = h.translations[i] + RatVec{Rat(u), Rat(w)};
                RatVec base = Rat(1, 2) * (pminus * t);
                LineClass lc = line_class(dir, base);
                std::string key = to_string(lc.normal) + "@" + lc.offset.str();
                RatVec glide = pplus * t;
                auto seg = clip(to_point(base), to_point(dir));
                std::string skey = to_string(lc.normal) + "@" + dot(lc.normal, base).str();
                if (is_zero(glide)) {
                    mirror_keys.insert(key);
                    if (seg && drawn_mirrors.insert(skey).second) loc.mirror_segments.push_back(*seg);
                } else {
                    if (seg) glides.emplace_back(key + "#" + skey, *seg);
                    glide_keys.insert(key);
                }
            }
    }
    std::set<std::string> drawn;
    for (const auto& [key, seg] : glides) {
        std::string cls = key.substr(0, key.find('#'));
        if (mirror_keys.count(cls)) continue;
        if (drawn.insert(key).second) loc.glide_axes.push_back(seg);
    }
    loc.mirror_classes = mirror_keys.size();
    for (const auto& k : glide_keys)
        if (!mirror_keys.count(k)) ++loc.glide_classes;
    return loc;
}

// ---------------------------------------------------------------- fundamental cell

CellCheck fundamental_cell_check(const CrystalGroup& g, const Rect& rect, int grid) {
    if (g.dim() != 2) throw Error("fundamental_cell_check expects a 2-dimensional group");
    if (grid <= 0) throw Error("grid must be positive");
    HolonomyData h = enumerate_point_group(g);
    RatMatrix basis = translation_lattice(g);
    auto inside = [&](const RatVec& p) { return p[0] >= rect.x0 && p[0] <= rect.x1 && p[1] >= rect.y0 && p[1] <= rect.y1; };

    // Floating-point filter; candidates within 1e-9 of the boundary are decided exactly.
    const Eigen::Matrix2d b = to_eigen(basis);
    const Eigen::Matrix2d bi = b.inverse();
    const double x0 = rect.x0.to_double(), x1 = rect.x1.to_double(), y0 = rect.y0.to_double(), y1 = rect.y1.to_double();
    const Eigen::Vector2d corners[4] = {{x0, y0}, {x0, y1}, {x1, y0}, {x1, y1}};
    std::vector<Eigen::Matrix2d> lin;
    std::vector<Eigen::Vector2d> tr;
    for (std::size_t k = 0; k < h.order(); ++k) {
        lin.push_back(to_eigen(h.elements[k]));
        tr.push_back(to_eigen(h.translations[k]));
    }
    constexpr double tol = 1e-9;

    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            RatVec s{Rat(2 * i + 1, 2L * grid), Rat(2 * j + 1, 2L * grid)};
            Eigen::Vector2d pd = b * Eigen::Vector2d(s[0].to_double(), s[1].to_double());
            bool hit = false;
            for (std::size_t k = 0; k < h.order() && !hit; ++k) {
                Eigen::Vector2d q = lin[k] * pd + tr[k];
                double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
                for (const auto& cr : corners) {
                    Eigen::Vector2d z = bi * (cr - q);
                    for (int c = 0; c < 2; ++c) {
                        lo[c] = std::min(lo[c], z(c));
                        hi[c] = std::max(hi[c], z(c));
                    }
                }
                for (long z0 = static_cast<long>(std::floor(lo[0])) - 1; z0 <= static_cast<long>(std::ceil(hi[0])) + 1 && !hit; ++z0)
                    for (long z1 = static_cast<long>(std::floor(lo[1])) - 1; z1 <= static_cast<long>(std::ceil(hi[1])) + 1 && !hit; ++z1) {
                        Eigen::Vector2d c = q + b * Eigen::Vector2d(static_cast<double>(z0), static_cast<double>(z1));
                        double margin = std::min({c(0) - x0, x1 - c(0), c(1) - y0, y1 - c(1)});
                        if (margin > tol) hit = true;
                        else if (margin > -tol) {
                            RatVec p = basis * s;
                            RatVec qe = h.elements[k] * p + h.translations[k] + basis * RatVec{Rat(z0), Rat(z1)};
                            hit = inside(qe);
                        }
                    }
            }
            if (!hit) return {false, basis * s};
        }
    return {true, {}};
}

// ---------------------------------------------------------------- SVG

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", std::abs(x) < 5e-4 ? 0.0 : x);
    return buf;
}

const char* order_color(int order) {
    switch (order) {
        case 2: return "#d62728";
        case 3: return "#2ca02c";
        case 4: return "#1f77b4";
        case 6: return "#9467bd";
        default: return "#000000";
    }
}

}  // namespace

std::string render_svg(const CrystalGroup& group) {
    CrystalGroup g = ensure_normalized(group);
    if (g.dim() != 2) throw Error("render_svg expects a 2-dimensional group");
    SingularLocus loc = singular_locus(g);
    OrbifoldLabel label = classify2(g);

    // Cartesian frame from the gram form: b1 = (sqrt g11, 0), b2 = (g12/sqrt g11, h).
    double g11 = g.gram()(0, 0).to_double(), g12 = g.gram()(0, 1).to_double(), g22 = g.gram()(1, 1).to_double();
    double b1x = std::sqrt(g11), b2x = g12 / b1x, b2y = std::sqrt(std::max(0.0, g22 - b2x * b2x));
    auto cart = [&](const Point2& p) { return Point2{p[0] * b1x + p[1] * b2x, p[1] * b2y}; };
    std::vector<Point2> cell = {cart({0, 0}), cart({1, 0}), cart({1, 1}), cart({0, 1})};
    double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
    for (const auto& c : cell) {
        minx = std::min(minx, c[0]), maxx = std::max(maxx, c[0]);
        miny = std::min(miny, c[1]), maxy = std::max(maxy, c[1]);
    }
    const double size = 800, margin = 60;
    double scale = (size - 2 * margin) / std::max(maxx - minx, maxy - miny);
    double ox = margin + 0.5 * ((size - 2 * margin) - scale * (maxx - minx));
    double oy = margin + 0.5 * ((size - 2 * margin) - scale * (maxy - miny));
    auto screen = [&](const Point2& p) {
        Point2 c = cart(p);
        return Point2{ox + (c[0] - minx) * scale, size - (oy + (c[1] - miny) * scale)};
    };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n"
       << "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n"
       << "  <text x=\"20\" y=\"32\" font-family=\"sans-serif\" font-size=\"22\">" << label.iuc << "  " << label.conway
       << "  " << label.orbifold << "</text>\n";
    os << "  <polygon fill=\"none\" stroke=\"#000000\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < 4; ++i) {
        static const Point2 corners[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        Point2 s = screen(corners[i]);
        os << (i ? " " : "") << fmt(s[0]) << "," << fmt(s[1]);
    }
    os << "\"/>\n";
    for (const auto& seg : loc.mirror_segments) {
        Point2 a = screen(seg.a), b = screen(seg.b);
        os << "  <line class=\"mirror\" x1=\"" << fmt(a[0]) << "\" y1=\"" << fmt(a[1]) << "\" x2=\"" << fmt(b[0])
           << "\" y2=\"" << fmt(b[1]) << "\" stroke=\"#d62728\" stroke-width=\"4\"/>\n";
    }
    for (const auto& seg : loc.glide_axes) {
        Point2 a = screen(seg.a), b = screen(seg.b);
        os << "  <line class=\"glide\" x1=\"" << fmt(a[0]) << "\" y1=\"" << fmt(a[1]) << "\" x2=\"" << fmt(b[0])
           << "\" y2=\"" << fmt(b[1]) << "\" stroke=\"#1f77b4\" stroke-width=\"2\" stroke-dasharray=\"10,6\"/>\n";
    }
    for (const auto& c : loc.rotation_centers) {
        Point2 p = to_point(c.point);
        // draw every lattice translate of the centre that lies in the closed cell
        for (int dx = 0; dx <= 1; ++dx)
            for (int dy = 0; dy <= 1; ++dy) {
                Point2 q{p[0] + dx, p[1] + dy};
                if (q[0] > 1 + 1e-12 || q[1] > 1 + 1e-12) continue;
                Point2 s = screen(q);
                os << "  <circle class=\"center\" cx=\"" << fmt(s[0]) << "\" cy=\"" << fmt(s[1])
                   << "\" r=\"9\" fill=\"" << order_color(c.order) << "\"/>\n"
                   << "  <text x=\"" << fmt(s[0] + 12) << "\" y=\"" << fmt(s[1] - 12)
                   << "\" font-family=\"sans-serif\" font-size=\"16\">" << c.order << "</text>\n";
            }
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg(const CrystalGroup& g, const std::string& path) {
    std::string doc = render_svg(g);
    std::ofstream out(path);
    if (!out) throw Error("cannot write SVG to " + path);
    out << doc;
    if (!out) throw Error("cannot write SVG to " + path);
}

}  // namespace flatorb
