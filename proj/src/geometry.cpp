#include "modulecad/geometry.hpp"

#include <algorithm>
#include <numbers>

#include "modulecad/error.hpp"

namespace modulecad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Turns below this are treated as straight continuations.
constexpr double kCollinearTurn = 1e-6;

double normalize_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool near(Point a, Point b, double tol) { return near(a.x, b.x, tol) && near(a.y, b.y, tol); }

Point unit(Point v) {
    const double n = norm(v);
    return {v.x / n, v.y / n};
}

Point side_normal(Point dir, Side side) {
    return side == Side::left ? Point{-dir.y, dir.x} : Point{dir.y, -dir.x};
}

}  // namespace

BBox BBox::united(const BBox& other) const {
    return {{std::min(min.x, other.min.x), std::min(min.y, other.min.y)},
            {std::max(max.x, other.max.x), std::max(max.y, other.max.y)}};
}

BBox BBox::inflated(double margin) const {
    return {{min.x - margin, min.y - margin}, {max.x + margin, max.y + margin}};
}

BBox bbox_of(std::span<const Point> points) {
    BBox box{points.front(), points.front()};
    for (const Point& p : points.subspan(1)) {
        box.min.x = std::min(box.min.x, p.x);
        box.min.y = std::min(box.min.y, p.y);
        box.max.x = std::max(box.max.x, p.x);
        box.max.y = std::max(box.max.y, p.y);
    }
    return box;
}

Transform Transform::scaling_about(Point base, double sx, double sy) {
    return {base.x - sx * base.x, base.y - sy * base.y, 0.0, sx, sy};
}

Point Transform::apply(Point p) const {
    const double x = p.x * sx;
    const double y = p.y * sy;
    if (rot == 0.0) return {x + tx, y + ty};
    const double c = std::cos(rot);
    const double s = std::sin(rot);
    return {c * x - s * y + tx, s * x + c * y + ty};
}

Transform compose(const Transform& first, const Transform& second) {
    const bool commutes =
        second.is_uniform() || std::abs(std::remainder(first.rot, std::numbers::pi)) <= 1e-12;
    if (!commutes) {
        fail(ErrorCode::invalid_transform,
             "non-uniform scale after rotation cannot be represented as a placement");
    }
    const Point t = second.apply({first.tx, first.ty});
    return {t.x, t.y, first.rot + second.rot, first.sx * second.sx, first.sy * second.sy};
}

double Arc::sweep() const {
    const double s = normalize_angle(end_angle - start_angle);
    return s == 0.0 ? kTwoPi : s;
}

Point Arc::start_point() const {
    return {center.x + radius * std::cos(start_angle), center.y + radius * std::sin(start_angle)};
}

Point Arc::end_point() const {
    return {center.x + radius * std::cos(end_angle), center.y + radius * std::sin(end_angle)};
}

double text_width(const Text& t) {
    return 0.6 * t.height * static_cast<double>(t.content.size());
}

void validate(const Primitive& p) {
    bool finite = true;
    for_each_defining_point(p, [&](Point q) { finite = finite && is_finite(q); });
    if (!finite) fail(ErrorCode::invalid_geometry, "coordinates must be finite");

    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Polyline>) {
                if (v.vertices.size() < 2) {
                    fail(ErrorCode::invalid_geometry, "polyline needs at least 2 vertices");
                }
                for (std::size_t i = 1; i < v.vertices.size(); ++i) {
                    if (distance(v.vertices[i - 1], v.vertices[i]) <= kEqualityTolerance) {
                        fail(ErrorCode::invalid_geometry, "polyline has a zero-length segment");
                    }
                }
            } else if constexpr (std::is_same_v<T, Circle> || std::is_same_v<T, Arc>) {
                if (!(v.radius > 0.0) || !std::isfinite(v.radius)) {
                    fail(ErrorCode::invalid_geometry, "radius must be positive");
                }
                if constexpr (std::is_same_v<T, Arc>) {
                    if (!std::isfinite(v.start_angle) || !std::isfinite(v.end_angle)) {
                        fail(ErrorCode::invalid_geometry, "arc angles must be finite");
                    }
                }
            } else if constexpr (std::is_same_v<T, Text>) {
                if (!(v.height > 0.0) || !std::isfinite(v.height)) {
                    fail(ErrorCode::invalid_geometry, "text height must be positive");
                }
                if (v.content.empty()) fail(ErrorCode::invalid_geometry, "text must be nonempty");
            }
        },
        p);
}

namespace {

BBox arc_bbox(const Arc& arc) {
    const Point ends[] = {arc.start_point(), arc.end_point()};
    BBox box = bbox_of(ends);
    const double sweep = arc.sweep();
    const Point extremes[] = {{arc.center.x + arc.radius, arc.center.y},
                              {arc.center.x, arc.center.y + arc.radius},
                              {arc.center.x - arc.radius, arc.center.y},
                              {arc.center.x, arc.center.y - arc.radius}};
    for (int k = 0; k < 4; ++k) {
        const double offset = normalize_angle(k * std::numbers::pi / 2.0 - arc.start_angle);
        if (offset <= sweep) box = box.united({extremes[k], extremes[k]});
    }
    return box;
}

}  // namespace

BBox bbox(const Primitive& p) {
    return std::visit(
        [](const auto& v) -> BBox {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Line>) {
                const Point pts[] = {v.a, v.b};
                return bbox_of(pts);
            } else if constexpr (std::is_same_v<T, Polyline>) {
                return bbox_of(v.vertices);
            } else if constexpr (std::is_same_v<T, Circle>) {
                return {{v.center.x - v.radius, v.center.y - v.radius},
                        {v.center.x + v.radius, v.center.y + v.radius}};
            } else if constexpr (std::is_same_v<T, Arc>) {
                return arc_bbox(v);
            } else {
                return {v.anchor, {v.anchor.x + text_width(v), v.anchor.y + v.height}};
            }
        },
        p);
}

Primitive apply_transform(const Primitive& p, const Transform& t) {
    if (t.is_identity()) return p;
    return std::visit(
        [&t](const auto& v) -> Primitive {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Line>) {
                return Line{t.apply(v.a), t.apply(v.b)};
            } else if constexpr (std::is_same_v<T, Polyline>) {
                Polyline out;
                out.vertices.reserve(v.vertices.size());
                for (const Point& q : v.vertices) out.vertices.push_back(t.apply(q));
                return out;
            } else if constexpr (std::is_same_v<T, Circle> || std::is_same_v<T, Arc>) {
                if (!t.is_uniform()) {
                    fail(ErrorCode::non_uniform_scale_of_round,
                         "circles and arcs require sx == sy");
                }
                T out = v;
                out.center = t.apply(v.center);
                out.radius = v.radius * t.sx;
                if constexpr (std::is_same_v<T, Arc>) {
                    out.start_angle = v.start_angle + t.rot;
                    out.end_angle = v.end_angle + t.rot;
                }
                return out;
            } else {
                return Text{t.apply(v.anchor), v.height * t.sy, v.content};
            }
        },
        p);
}

bool approx_equal(const Primitive& a, const Primitive& b, double tolerance) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& va) -> bool {
            using T = std::decay_t<decltype(va)>;
            const T& vb = std::get<T>(b);
            if constexpr (std::is_same_v<T, Line>) {
                return near(va.a, vb.a, tolerance) && near(va.b, vb.b, tolerance);
            } else if constexpr (std::is_same_v<T, Polyline>) {
                if (va.vertices.size() != vb.vertices.size()) return false;
                for (std::size_t i = 0; i < va.vertices.size(); ++i) {
                    if (!near(va.vertices[i], vb.vertices[i], tolerance)) return false;
                }
                return true;
            } else if constexpr (std::is_same_v<T, Circle>) {
                return near(va.center, vb.center, tolerance) &&
                       near(va.radius, vb.radius, tolerance);
            } else if constexpr (std::is_same_v<T, Arc>) {
                return near(va.center, vb.center, tolerance) &&
                       near(va.radius, vb.radius, tolerance) &&
                       near(va.start_angle, vb.start_angle, tolerance) &&
                       near(va.end_angle, vb.end_angle, tolerance);
            } else {
                return near(va.anchor, vb.anchor, tolerance) &&
                       near(va.height, vb.height, tolerance) && va.content == vb.content;
            }
        },
        a);
}

std::vector<Primitive> offset_polyline(std::span<const Point> axis, double distance, Side side,
                                       Join join) {
    if (axis.size() < 2) fail(ErrorCode::invalid_params, "axis needs at least 2 vertices");
    if (!(distance > 0.0) || !std::isfinite(distance)) {
        fail(ErrorCode::non_positive_distance, "offset distance must be positive");
    }
    const std::size_t n = axis.size();
    std::vector<Point> normals;
    normals.reserve(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Point seg = axis[i + 1] - axis[i];
        if (!is_finite(axis[i]) || !is_finite(axis[i + 1])) {
            fail(ErrorCode::invalid_geometry, "axis coordinates must be finite");
        }
        if (norm(seg) <= kEqualityTolerance) {
            fail(ErrorCode::zero_length_segment,
                 "axis segment " + std::to_string(i) + " has zero length");
        }
        normals.push_back(side_normal(unit(seg), side));
    }

    // Signed turn at each interior vertex; positive is counter-clockwise.
    std::vector<double> turns(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Point d0 = unit(axis[i] - axis[i - 1]);
        const Point d1 = unit(axis[i + 1] - axis[i]);
        turns[i] = std::atan2(cross(d0, d1), dot(d0, d1));
        if (std::abs(turns[i]) >= kMiterLimitRadians) {
            fail(ErrorCode::miter_limit_exceeded,
                 "turn at axis vertex " + std::to_string(i) + " exceeds the miter limit");
        }
    }

    // Offset lines i-1 and i meet at vertex + (n0 + n1) * d / (1 + n0.n1).
    auto miter_point = [&](std::size_t i) {
        const Point n0 = normals[i - 1];
        const Point n1 = normals[i];
        return axis[i] + (n0 + n1) * (distance / (1.0 + dot(n0, n1)));
    };

    const Point first = axis.front() + normals.front() * distance;
    const Point last = axis.back() + normals.back() * distance;

    if (join == Join::miter) {
        Polyline out;
        out.vertices.reserve(n);
        out.vertices.push_back(first);
        for (std::size_t i = 1; i + 1 < n; ++i) out.vertices.push_back(miter_point(i));
        out.vertices.push_back(last);
        return {std::move(out)};
    }

    std::vector<Primitive> out;
    Point cursor = first;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double turn = turns[i];
        const bool outer = side == Side::left ? turn < 0.0 : turn > 0.0;
        if (std::abs(turn) < kCollinearTurn || !outer) {
            const Point corner = miter_point(i);
            out.emplace_back(Line{cursor, corner});
            cursor = corner;
            continue;
        }
        const Point n0 = normals[i - 1];
        const Point n1 = normals[i];
        out.emplace_back(Line{cursor, axis[i] + n0 * distance});
        // The arc runs counter-clockwise, so it starts at whichever normal
        // precedes the other in that direction.
        const Point from = side == Side::left ? n1 : n0;
        const double start = std::atan2(from.y, from.x);
        out.emplace_back(Arc{axis[i], distance, start, start + std::abs(turn)});
        cursor = axis[i] + n1 * distance;
    }
    out.emplace_back(Line{cursor, last});
    return out;
}

std::vector<SnapCandidate> snap_candidates(const Primitive& p) {
    return std::visit(
        [](const auto& v) -> std::vector<SnapCandidate> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Line>) {
                return {{v.a, SnapKind::endpoint},
                        {v.b, SnapKind::endpoint},
                        {(v.a + v.b) * 0.5, SnapKind::midpoint}};
            } else if constexpr (std::is_same_v<T, Polyline>) {
                std::vector<SnapCandidate> out;
                out.reserve(2 * v.vertices.size() - 1);
                for (const Point& q : v.vertices) out.push_back({q, SnapKind::endpoint});
                for (std::size_t i = 1; i < v.vertices.size(); ++i) {
                    out.push_back({(v.vertices[i - 1] + v.vertices[i]) * 0.5, SnapKind::midpoint});
                }
                return out;
            } else if constexpr (std::is_same_v<T, Circle>) {
                return {{v.center, SnapKind::center}};
            } else if constexpr (std::is_same_v<T, Arc>) {
                return {{v.center, SnapKind::center},
                        {v.start_point(), SnapKind::endpoint},
                        {v.end_point(), SnapKind::endpoint}};
            } else {
                return {{v.anchor, SnapKind::endpoint}};
            }
        },
        p);
}

std::optional<SnapHit> nearest_snap(Point query, double radius,
                                    std::span<const SnapCandidate> candidates) {
    if (!(radius > 0.0)) fail(ErrorCode::invalid_params, "snap radius must be positive");
    std::optional<SnapHit> best;
    for (const SnapCandidate& c : candidates) {
        const double d = distance(query, c.point);
        if (d > radius) continue;
        if (!best || d < best->distance ||
            (d == best->distance && static_cast<int>(c.kind) < static_cast<int>(best->kind))) {
            best = SnapHit{c.point, c.kind, d};
        }
    }
    return best;
}

std::string_view to_string(Linetype t) noexcept {
    switch (t) {
        case Linetype::solid: return "solid";
        case Linetype::dash: return "dash";
        case Linetype::dash_dot: return "dash_dot";
    }
    return "solid";
}

Linetype parse_linetype(std::string_view name) {
    if (name == "solid") return Linetype::solid;
    if (name == "dash") return Linetype::dash;
    if (name == "dash_dot") return Linetype::dash_dot;
    fail(ErrorCode::invalid_params, "unknown linetype '" + std::string(name) + "'");
}

std::string_view to_string(SnapKind k) noexcept {
    switch (k) {
        case SnapKind::endpoint: return "endpoint";
        case SnapKind::midpoint: return "midpoint";
        case SnapKind::center: return "center";
    }
    return "endpoint";
}

}  // namespace modulecad
