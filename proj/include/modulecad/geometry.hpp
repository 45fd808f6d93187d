#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace modulecad {

// Coordinates are drawing millimetres unless stated otherwise.

/// Equality predicates on coordinates.
inline constexpr double kEqualityTolerance = 1e-9;
/// Results of derived intersections.
inline constexpr double kIntersectionTolerance = 1e-6;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
inline Point operator*(double s, Point a) { return {a.x * s, a.y * s}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(b - a); }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct BBox {
    Point min;
    Point max;

    friend bool operator==(const BBox&, const BBox&) = default;

    /// Closed intersection: touching boundaries count.
    bool intersects(const BBox& other) const {
        return min.x <= other.max.x && other.min.x <= max.x &&
               min.y <= other.max.y && other.min.y <= max.y;
    }
    bool contains(Point p) const {
        return min.x <= p.x && p.x <= max.x && min.y <= p.y && p.y <= max.y;
    }
    BBox united(const BBox& other) const;
    BBox inflated(double margin) const;
    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
};

BBox bbox_of(std::span<const Point> points);

/// Placement of generated geometry: scale about the origin, then rotate,
/// then translate.
struct Transform {
    double tx = 0.0;
    double ty = 0.0;
    double rot = 0.0;
    double sx = 1.0;
    double sy = 1.0;

    friend bool operator==(const Transform&, const Transform&) = default;

    static Transform identity() { return {}; }
    static Transform translation(double dx, double dy) { return {dx, dy, 0.0, 1.0, 1.0}; }
    static Transform rotation(double radians) { return {0.0, 0.0, radians, 1.0, 1.0}; }
    /// Scale by (sx, sy) keeping `base` fixed.
    static Transform scaling_about(Point base, double sx, double sy);

    bool is_identity() const { return *this == Transform{}; }
    bool is_uniform() const { return sx == sy; }
    Point apply(Point p) const;
};

/// The transform equivalent to applying `first` and then `second`.
/// Throws invalid_transform when the result is not expressible as
/// scale-rotate-translate (non-uniform `second` scale after a rotation of
/// `first` that is not a multiple of pi).
Transform compose(const Transform& first, const Transform& second);

enum class Linetype { solid, dash, dash_dot };

struct Color {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Color&, const Color&) = default;
};

struct LineStyle {
    Linetype linetype = Linetype::solid;
    Color color{};

    friend bool operator==(const LineStyle&, const LineStyle&) = default;
};

struct Line {
    Point a;
    Point b;
    friend bool operator==(const Line&, const Line&) = default;
};

struct Polyline {
    std::vector<Point> vertices;
    friend bool operator==(const Polyline&, const Polyline&) = default;
};

struct Circle {
    Point center;
    double radius = 1.0;
    friend bool operator==(const Circle&, const Circle&) = default;
};

/// Counter-clockwise from start_angle to end_angle (radians).
struct Arc {
    Point center;
    double radius = 1.0;
    double start_angle = 0.0;
    double end_angle = 0.0;

    friend bool operator==(const Arc&, const Arc&) = default;

    /// Swept angle in (0, 2*pi].
    double sweep() const;
    Point start_point() const;
    Point end_point() const;
};

/// Anchored at the bottom-left corner of its extent box.
struct Text {
    Point anchor;
    double height = 1.0;
    std::string content;
    friend bool operator==(const Text&, const Text&) = default;
};

using Primitive = std::variant<Line, Polyline, Circle, Arc, Text>;

/// Throws invalid_geometry when `p` breaks its variant's invariants.
void validate(const Primitive& p);

/// Text width heuristic: 0.6 x height per character.
double text_width(const Text& t);

BBox bbox(const Primitive& p);

/// Throws non_uniform_scale_of_round for circles and arcs under sx != sy.
Primitive apply_transform(const Primitive& p, const Transform& t);

/// Calls `fn` on every point that defines `p` (vertices, centers, anchors).
/// Used for coordinate-wise comparison of geometry.
template <class Fn>
void for_each_defining_point(const Primitive& p, Fn&& fn) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Line>) {
                fn(v.a);
                fn(v.b);
            } else if constexpr (std::is_same_v<T, Polyline>) {
                for (const Point& q : v.vertices) fn(q);
            } else if constexpr (std::is_same_v<T, Circle> || std::is_same_v<T, Arc>) {
                fn(v.center);
            } else {
                fn(v.anchor);
            }
        },
        p);
}

/// True when both primitives have the same variant and content, with
/// defining coordinates and scalar sizes equal within `tolerance`.
bool approx_equal(const Primitive& a, const Primitive& b, double tolerance);

enum class Side { left, right };
enum class Join { miter, arc };

/// Interior turns at or beyond this magnitude are rejected.
inline constexpr double kMiterLimitRadians = 150.0 * 3.14159265358979323846 / 180.0;

/// Offsets an open polyline by `distance` to one side.
///
/// Miter join yields a single Polyline with one vertex per axis vertex.
/// Arc join yields alternating Line and Arc primitives; arcs sit on the
/// outside of each turn, centered on the axis vertex, and inside corners
/// are mitred. Left is the side of each segment direction rotated +90 deg.
std::vector<Primitive> offset_polyline(std::span<const Point> axis, double distance, Side side,
                                       Join join);

enum class SnapKind { endpoint, midpoint, center };

struct SnapCandidate {
    Point point;
    SnapKind kind = SnapKind::endpoint;
    friend bool operator==(const SnapCandidate&, const SnapCandidate&) = default;
};

struct SnapHit {
    Point point;
    SnapKind kind = SnapKind::endpoint;
    double distance = 0.0;
};

std::vector<SnapCandidate> snap_candidates(const Primitive& p);

/// Closest candidate within `radius`; exact distance ties prefer endpoint,
/// then midpoint, then center, then earlier candidates.
std::optional<SnapHit> nearest_snap(Point query, double radius,
                                    std::span<const SnapCandidate> candidates);

std::string_view to_string(Linetype t) noexcept;
Linetype parse_linetype(std::string_view name);
std::string_view to_string(SnapKind k) noexcept;

}  // namespace modulecad
