#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "modulecad/geometry.hpp"
#include "test_support.hpp"

using namespace modulecad;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_point(Point actual, Point expected, double tol = 1e-12) {
    EXPECT_NEAR(actual.x, expected.x, tol);
    EXPECT_NEAR(actual.y, expected.y, tol);
}

Polyline only_polyline(const std::vector<Primitive>& out) {
    EXPECT_EQ(out.size(), 1u);
    return std::get<Polyline>(out.at(0));
}

}  // namespace

TEST(BBoxTest, Line) {
    EXPECT_EQ(bbox(Line{{0, 0}, {10, 5}}), (BBox{{0, 0}, {10, 5}}));
    EXPECT_EQ(bbox(Line{{10, 5}, {0, 0}}), (BBox{{0, 0}, {10, 5}}));
}

TEST(BBoxTest, Circle) {
    EXPECT_EQ(bbox(Circle{{0, 0}, 5}), (BBox{{-5, -5}, {5, 5}}));
}

TEST(BBoxTest, TextUsesWidthHeuristic) {
    const BBox b = bbox(Text{{0, 0}, 5, "AB"});
    expect_point(b.min, {0, 0});
    expect_point(b.max, {6, 5});
}

TEST(BBoxTest, ArcIsTight) {
    // Quarter arc from 0 to pi/2 does not reach the negative half-axes.
    const BBox q = bbox(Arc{{0, 0}, 2, 0, kPi / 2});
    expect_point(q.min, {0, 0});
    expect_point(q.max, {2, 2});
    // Crossing angle pi picks up the -x extreme.
    const BBox h = bbox(Arc{{1, 1}, 1, kPi / 2, 3 * kPi / 2});
    expect_point(h.min, {0, 0});
    expect_point(h.max, {1, 2});
    // Wrapping through zero.
    const BBox w = bbox(Arc{{0, 0}, 1, 3 * kPi / 2, kPi / 2});
    expect_point(w.min, {0, -1});
    expect_point(w.max, {1, 1});
}

TEST(BBoxTest, PolylineAndUnion) {
    const BBox b = bbox(Polyline{{{0, 0}, {4, 0}, {4, -3}}});
    EXPECT_EQ(b, (BBox{{0, -3}, {4, 0}}));
    EXPECT_EQ(b.united(BBox{{-1, 1}, {2, 2}}), (BBox{{-1, -3}, {4, 2}}));
    EXPECT_EQ(b.inflated(1), (BBox{{-1, -4}, {5, 1}}));
}

TEST(BBoxTest, IntersectionIsClosed) {
    const BBox a{{0, 0}, {1, 1}};
    EXPECT_TRUE(a.intersects(BBox{{1, 1}, {2, 2}}));
    EXPECT_FALSE(a.intersects(BBox{{1.0000001, 0}, {2, 2}}));
}

TEST(BBoxTest, TranslationCommutes) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1000, 1000);
    for (int i = 0; i < 200; ++i) {
        const Primitive p = Polyline{{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}}};
        const Point d{u(rng), u(rng)};
        const BBox moved = bbox(apply_transform(p, Transform::translation(d.x, d.y)));
        const BBox b = bbox(p);
        expect_point(moved.min, b.min + d, 1e-9);
        expect_point(moved.max, b.max + d, 1e-9);
    }
}

TEST(ValidateTest, RejectsDegenerates) {
    EXPECT_ERROR_CODE(validate(Circle{{0, 0}, 0}), ErrorCode::invalid_geometry);
    EXPECT_ERROR_CODE(validate(Polyline{{{0, 0}}}), ErrorCode::invalid_geometry);
    EXPECT_ERROR_CODE(validate(Text{{0, 0}, -1, "x"}), ErrorCode::invalid_geometry);
    EXPECT_ERROR_CODE(validate(Line{{NAN, 0}, {1, 1}}), ErrorCode::invalid_geometry);
    EXPECT_NO_THROW(validate(Line{{0, 0}, {1, 1}}));
}

TEST(TransformTest, Examples) {
    const Primitive p = Line{{1, 2}, {3, 4}};
    EXPECT_EQ(apply_transform(p, Transform::identity()), p);
    expect_point(Transform::translation(10, 0).apply({1, 2}), {11, 2});
    expect_point(Transform::rotation(kPi / 2).apply({1, 0}), {0, 1}, 1e-15);
    expect_point(Transform::scaling_about({0, 0}, 2, 2).apply({3, 4}), {6, 8});
    expect_point(Transform::scaling_about({1, 1}, 3, 2).apply({2, 2}), {4, 3});
}

TEST(TransformTest, NonUniformScaleOfRound) {
    const Transform t{0, 0, 0, 2, 1};
    EXPECT_ERROR_CODE(apply_transform(Circle{{0, 0}, 1}, t), ErrorCode::non_uniform_scale_of_round);
    EXPECT_ERROR_CODE(apply_transform(Arc{{0, 0}, 1, 0, 1}, t), ErrorCode::non_uniform_scale_of_round);
    EXPECT_NO_THROW(apply_transform(Line{{0, 0}, {1, 1}}, t));
}

TEST(TransformTest, RoundShapesUnderRotationAndScale) {
    const Transform t{5, 0, kPi / 2, 2, 2};
    const auto c = std::get<Circle>(apply_transform(Circle{{1, 0}, 1}, t));
    expect_point(c.center, {5, 2}, 1e-12);
    EXPECT_DOUBLE_EQ(c.radius, 2);
    const auto a = std::get<Arc>(apply_transform(Arc{{0, 0}, 1, 0, kPi / 2}, t));
    expect_point(a.start_point(), {5, 2}, 1e-12);
    expect_point(a.end_point(), {3, 0}, 1e-12);
}

TEST(TransformTest, ComposeMatchesSequentialApplication) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-100, 100);
    std::uniform_real_distribution<double> s(0.1, 5);
    for (int i = 0; i < 500; ++i) {
        const double k1 = s(rng);
        const Transform first{u(rng), u(rng), u(rng) / 10, k1, k1};
        const Transform second{u(rng), u(rng), u(rng) / 10, s(rng), s(rng)};
        // A non-uniform second scale only composes when first has no rotation.
        const Transform first_flat{first.tx, first.ty, 0, s(rng), s(rng)};
        for (const auto& [a, b] : {std::pair{first, Transform{second.tx, second.ty, second.rot, k1, k1}},
                                   std::pair{first_flat, second}}) {
            const Transform c = compose(a, b);
            const Point p{u(rng), u(rng)};
            const Point expect = b.apply(a.apply(p));
            expect_point(c.apply(p), expect, 1e-9 * (1 + norm(expect)));
        }
    }
}

TEST(TransformTest, ComposeRejectsShear) {
    const Transform rotated = Transform::rotation(0.3);
    const Transform stretch = Transform::scaling_about({0, 0}, 2, 1);
    EXPECT_ERROR_CODE(compose(rotated, stretch), ErrorCode::invalid_transform);
    EXPECT_NO_THROW(compose(Transform::rotation(kPi), stretch));
}

TEST(OffsetTest, StraightLeft) {
    const std::vector<Point> axis{{0, 0}, {10, 0}};
    const Polyline pl = only_polyline(offset_polyline(axis, 1, Side::left, Join::miter));
    ASSERT_EQ(pl.vertices.size(), 2u);
    expect_point(pl.vertices[0], {0, 1});
    expect_point(pl.vertices[1], {10, 1});
}

TEST(OffsetTest, RightAngleBothSides) {
    const std::vector<Point> axis{{0, 0}, {10, 0}, {10, 10}};
    const Polyline right = only_polyline(offset_polyline(axis, 1, Side::right, Join::miter));
    ASSERT_EQ(right.vertices.size(), 3u);
    expect_point(right.vertices[0], {0, -1});
    expect_point(right.vertices[1], {11, -1});
    expect_point(right.vertices[2], {11, 10});
    const Polyline left = only_polyline(offset_polyline(axis, 1, Side::left, Join::miter));
    expect_point(left.vertices[0], {0, 1});
    expect_point(left.vertices[1], {9, 1});
    expect_point(left.vertices[2], {9, 10});
}

TEST(OffsetTest, CollinearVertexIsKept) {
    const std::vector<Point> axis{{0, 0}, {5, 0}, {10, 0}};
    const Polyline pl = only_polyline(offset_polyline(axis, 2, Side::left, Join::miter));
    ASSERT_EQ(pl.vertices.size(), 3u);
    expect_point(pl.vertices[1], {5, 2});
}

TEST(OffsetTest, ArcJoinOnOutside) {
    // Left turn: the right side is the outside.
    const std::vector<Point> axis{{0, 0}, {10, 0}, {10, 10}};
    const auto out = offset_polyline(axis, 1, Side::right, Join::arc);
    ASSERT_EQ(out.size(), 3u);
    const auto& first = std::get<Line>(out[0]);
    const auto& arc = std::get<Arc>(out[1]);
    const auto& last = std::get<Line>(out[2]);
    expect_point(first.a, {0, -1});
    expect_point(first.b, {10, -1});
    expect_point(arc.center, {10, 0});
    EXPECT_DOUBLE_EQ(arc.radius, 1);
    expect_point(arc.start_point(), {10, -1}, 1e-12);
    expect_point(arc.end_point(), {11, 0}, 1e-12);
    EXPECT_NEAR(arc.sweep(), kPi / 2, 1e-12);
    expect_point(last.a, {11, 0});
    expect_point(last.b, {11, 10});

    // The inside of the same turn is mitred.
    const auto inside = offset_polyline(axis, 1, Side::left, Join::arc);
    ASSERT_EQ(inside.size(), 2u);
    expect_point(std::get<Line>(inside[0]).b, {9, 1});
    expect_point(std::get<Line>(inside[1]).a, {9, 1});
}

TEST(OffsetTest, Errors) {
    const std::vector<Point> one{{0, 0}};
    EXPECT_ERROR_CODE(offset_polyline(one, 1, Side::left, Join::miter), ErrorCode::invalid_params);
    const std::vector<Point> axis{{0, 0}, {10, 0}};
    EXPECT_ERROR_CODE(offset_polyline(axis, 0, Side::left, Join::miter), ErrorCode::non_positive_distance);
    EXPECT_ERROR_CODE(offset_polyline(axis, -1, Side::left, Join::miter), ErrorCode::non_positive_distance);
    const std::vector<Point> dup{{0, 0}, {0, 0}, {1, 0}};
    EXPECT_ERROR_CODE(offset_polyline(dup, 1, Side::left, Join::miter), ErrorCode::zero_length_segment);
    // 160 degree turn.
    const double a = 160.0 * kPi / 180.0;
    const std::vector<Point> sharp{{0, 0}, {10, 0}, {10 + 10 * std::cos(a), 10 * std::sin(a)}};
    EXPECT_ERROR_CODE(offset_polyline(sharp, 1, Side::left, Join::miter), ErrorCode::miter_limit_exceeded);
    const double b = 149.0 * kPi / 180.0;
    const std::vector<Point> ok{{0, 0}, {10, 0}, {10 + 10 * std::cos(b), 10 * std::sin(b)}};
    EXPECT_NO_THROW(offset_polyline(ok, 1, Side::left, Join::miter));
}

TEST(SnapTest, Candidates) {
    const auto line = snap_candidates(Line{{0, 0}, {10, 0}});
    ASSERT_EQ(line.size(), 3u);
    EXPECT_EQ(line[0], (SnapCandidate{{0, 0}, SnapKind::endpoint}));
    EXPECT_EQ(line[1], (SnapCandidate{{10, 0}, SnapKind::endpoint}));
    EXPECT_EQ(line[2], (SnapCandidate{{5, 0}, SnapKind::midpoint}));

    const auto circle = snap_candidates(Circle{{3, 4}, 1});
    ASSERT_EQ(circle.size(), 1u);
    EXPECT_EQ(circle[0], (SnapCandidate{{3, 4}, SnapKind::center}));

    const auto pl = snap_candidates(Polyline{{{0, 0}, {4, 0}, {4, 4}}});
    std::vector<Point> ends;
    std::vector<Point> mids;
    for (const auto& c : pl) (c.kind == SnapKind::endpoint ? ends : mids).push_back(c.point);
    EXPECT_EQ(ends, (std::vector<Point>{{0, 0}, {4, 0}, {4, 4}}));
    EXPECT_EQ(mids, (std::vector<Point>{{2, 0}, {4, 2}}));
}

TEST(SnapTest, Nearest) {
    const auto c = snap_candidates(Line{{0, 0}, {10, 0}});
    const auto hit = nearest_snap({5.1, 0.1}, 0.5, c);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->point, (Point{5, 0}));
    EXPECT_EQ(hit->kind, SnapKind::midpoint);
    EXPECT_FALSE(nearest_snap({100, 100}, 1, c));
    EXPECT_ERROR_CODE(nearest_snap({0, 0}, 0, c), ErrorCode::invalid_params);
}

TEST(SnapTest, TiePrefersEndpoint) {
    // (0.5, 0) is 0.5 from the endpoint (0,0) of one line and from the
    // midpoint (1,0) of another.
    std::vector<SnapCandidate> c = snap_candidates(Line{{0, 1}, {2, 1}});
    c.push_back({{1, 0}, SnapKind::midpoint});
    c.push_back({{0, 0}, SnapKind::endpoint});
    const auto hit = nearest_snap({0.5, 0}, 1, c);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->kind, SnapKind::endpoint);
    EXPECT_EQ(hit->point, (Point{0, 0}));
    EXPECT_DOUBLE_EQ(hit->distance, 0.5);
}

TEST(ApproxEqualTest, ComparesWithinTolerance) {
    EXPECT_TRUE(approx_equal(Line{{0, 0}, {1, 1}}, Line{{0, 1e-10}, {1, 1}}, 1e-9));
    EXPECT_FALSE(approx_equal(Line{{0, 0}, {1, 1}}, Line{{0, 1e-8}, {1, 1}}, 1e-9));
    EXPECT_FALSE(approx_equal(Line{{0, 0}, {1, 1}}, Polyline{{{0, 0}, {1, 1}}}, 1e-9));
    EXPECT_FALSE(approx_equal(Text{{0, 0}, 1, "a"}, Text{{0, 0}, 1, "b"}, 1e-9));
}

TEST(LinetypeTest, Names) {
    for (Linetype t : {Linetype::solid, Linetype::dash, Linetype::dash_dot}) {
        EXPECT_EQ(parse_linetype(to_string(t)), t);
    }
    EXPECT_ERROR_CODE(parse_linetype("dotted"), ErrorCode::invalid_params);
}
