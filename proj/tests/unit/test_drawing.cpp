#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "modulecad/drawing.hpp"
#include "test_support.hpp"

using namespace modulecad;
using modulecad::testing::params;
using modulecad::testing::straight_pipe;
using nlohmann::json;

namespace {

const LineStyle kStyle{};

ParamRecord small_grid() {
    return params(Kind::grid, {{"x_spacings", {3000, 3000}}, {"y_spacings", {2000}}});
}

std::vector<Id> brute_force_visible(const Drawing& d, const BBox& rect) {
    std::vector<Id> out;
    for (const auto& [id, e] : d.free_elements()) {
        if (bbox(e.primitive).intersects(rect)) out.push_back(id);
    }
    for (const auto& [mid, m] : d.modules()) {
        for (const auto& e : m.elements) {
            if (bbox(e.primitive).intersects(rect)) out.push_back(e.id);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Id> element_ids(const Module& m) {
    std::vector<Id> out;
    for (const auto& e : m.elements) out.push_back(e.id);
    return out;
}

void expect_same_geometry(const Module& a, const Module& b, double tol) {
    ASSERT_EQ(a.elements.size(), b.elements.size());
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
        EXPECT_TRUE(approx_equal(a.elements[i].primitive, b.elements[i].primitive, tol)) << "element " << i;
    }
}

// Every zone an element's bbox covers lists the element, and no other zone does.
void expect_index_consistent(const Drawing& d) {
    const auto zones = d.zone_contents();
    std::map<ZoneKey, std::set<Id>> expected;
    auto add = [&](Id id, const Primitive& p) {
        const BBox b = bbox(p);
        const ZoneKey lo = d.zone_of(b.min);
        const ZoneKey hi = d.zone_of(b.max);
        for (auto x = lo.x; x <= hi.x; ++x) {
            for (auto y = lo.y; y <= hi.y; ++y) expected[{x, y}].insert(id);
        }
    };
    for (const auto& [id, e] : d.free_elements()) add(id, e.primitive);
    for (const auto& [mid, m] : d.modules()) {
        for (const auto& e : m.elements) add(e.id, e.primitive);
    }
    std::map<ZoneKey, std::set<Id>> actual;
    for (const auto& [key, ids] : zones) {
        if (!ids.empty()) actual[key] = std::set<Id>(ids.begin(), ids.end());
    }
    EXPECT_EQ(actual, expected);
}

}  // namespace

TEST(DrawingTest, CreatePipelineModule) {
    Drawing d;
    const Id id = d.create_module(Kind::pipeline, straight_pipe(1000, 100), d.default_layer());
    const Module& m = d.module(id);
    EXPECT_EQ(m.kind, Kind::pipeline);
    EXPECT_EQ(m.elements.size(), 2u);
    EXPECT_TRUE(m.placement.is_identity());
    EXPECT_EQ(d.element_count(), 2u);
    EXPECT_TRUE(d.verify_module(id));
}

TEST(DrawingTest, CreateMinimalGridModule) {
    Drawing d;
    const Id id = d.create_module(Kind::grid, params(Kind::grid, json::object()), 0);
    EXPECT_EQ(d.module(id).elements.size(), 6u);
}

TEST(DrawingTest, CreateRejectsInvalidInput) {
    Drawing d;
    ParamRecord bad = straight_pipe(1000, 100);
    bad["diameter"] = -5.0;
    EXPECT_ERROR_CODE(d.create_module(Kind::pipeline, bad, 0), ErrorCode::invalid_params);
    EXPECT_ERROR_CODE(d.create_module(Kind::pipeline, straight_pipe(1000, 100), 42), ErrorCode::unknown_layer);
    EXPECT_TRUE(d.modules().empty());
    EXPECT_EQ(d.element_count(), 0u);
}

TEST(DrawingTest, IdsAreUniqueAcrossModulesAndElements) {
    Drawing d;
    std::set<Id> seen;
    const Id free_id = d.add_element(0, kStyle, Line{{0, 0}, {1, 1}});
    seen.insert(free_id);
    for (int i = 0; i < 5; ++i) {
        const Id mid = d.create_module(Kind::pipeline, straight_pipe(1000 + i, 100), 0);
        EXPECT_TRUE(seen.insert(mid).second);
        for (Id eid : element_ids(d.module(mid))) EXPECT_TRUE(seen.insert(eid).second);
    }
    d.regenerate_all();
    std::set<Id> after{free_id};
    for (const auto& [mid, m] : d.modules()) {
        EXPECT_TRUE(after.insert(mid).second);
        for (Id eid : element_ids(m)) EXPECT_TRUE(after.insert(eid).second);
    }
}

TEST(DrawingTest, ModuleElementsShareOneLayer) {
    Drawing d;
    const Id layer = d.add_layer("pipes");
    const Id id = d.create_module(Kind::grid, small_grid(), layer);
    for (const auto& e : d.module(id).elements) EXPECT_EQ(e.layer, layer);
    EXPECT_EQ(d.module(id).layer, layer);
}

TEST(DrawingTest, RegenerateIsDeterministic) {
    Drawing d;
    const Id id = d.create_module(Kind::grid, small_grid(), 0);
    d.regenerate(id);
    const Module first = d.module(id);
    d.regenerate(id);
    const Module& second = d.module(id);
    ASSERT_EQ(first.elements.size(), second.elements.size());
    for (std::size_t i = 0; i < first.elements.size(); ++i) {
        EXPECT_EQ(first.elements[i].primitive, second.elements[i].primitive);
        EXPECT_EQ(first.elements[i].style, second.elements[i].style);
    }
}

TEST(DrawingTest, SetParamsDoublesWallSeparation) {
    Drawing d;
    const Id id = d.create_module(Kind::pipeline, straight_pipe(1000, 100), 0);
    auto separation = [&] {
        const auto& m = d.module(id);
        return std::get<Polyline>(m.elements[0].primitive).vertices[0].y -
               std::get<Polyline>(m.elements[1].primitive).vertices[0].y;
    };
    EXPECT_DOUBLE_EQ(separation(), 100);
    d.set_params(id, straight_pipe(1000, 200));
    EXPECT_DOUBLE_EQ(separation(), 200);
    EXPECT_TRUE(d.verify_module(id));
}

TEST(DrawingTest, SetParamsNoOpAndInvalid) {
    Drawing d;
    const Id id = d.create_module(Kind::pipeline, straight_pipe(1000, 100), 0);
    const Module before = d.module(id);
    d.set_params(id, straight_pipe(1000, 100));
    expect_same_geometry(before, d.module(id), 0);

    const Module snapshot = d.module(id);
    ParamRecord bad = straight_pipe(1000, 100);
    bad["diameter"] = 0.0;
    EXPECT_ERROR_CODE(d.set_params(id, bad), ErrorCode::invalid_params);
    EXPECT_EQ(element_ids(d.module(id)), element_ids(snapshot));
    EXPECT_EQ(d.module(id).params, snapshot.params);
    EXPECT_ERROR_CODE(d.set_params(999, bad), ErrorCode::unknown_module);
}

TEST(DrawingTest, SetParamsKeepsPlacement) {
    Drawing d;
    const Id id = d.create_module(Kind::pipeline, straight_pipe(1000, 100), 0);
    d.move_module(id, {500, 0});
    d.set_params(id, straight_pipe(2000, 100));
    const auto& wall = std::get<Polyline>(d.module(id).elements[0].primitive);
    EXPECT_EQ(wall.vertices[0], (Point{500, 50}));
    EXPECT_EQ(wall.vertices[1], (Point{2500, 50}));
}

TEST(DrawingTest, RegenerateRestoresTamperedGeometry) {
    Drawing d;
    const Id id = d.create_module(Kind::pipeline, straight_pipe(1000, 100), 0);
    Module tampered = d.module(id);
    std::get<Polyline>(tampered.elements[0].primitive).vertices[0].y += 1;
    d.insert_stored_module(tampered);
    EXPECT_FALSE(d.verify_module(id));
    d.regenerate(id);
    EXPECT_TRUE(d.verify_module(id));
    EXPECT_EQ(std::get<Polyline>(d.module(id).elements[0].primitive).vertices[0], (Point{0, 50}));
}

TEST(DrawingTest, MoveExamples) {
    Drawing d;
    const Id id = d.create_module(Kind::pipeline, straight_pipe(1000, 100), 0);
    const Module original = d.module(id);
    d.move_module(id, {0, 0});
    expect_same_geometry(original, d.module(id), 0);
    d.move_module(id, {10, 0});
    EXPECT_EQ(std::get<Polyline>(d.module(id).elements[0].primitive).vertices[0], (Point{10, 50}));
    EXPECT_EQ(element_ids(d.module(id)), element_ids(original));
    EXPECT_TRUE(d.verify_module(id));
    EXPECT_ERROR_CODE(d.move_module(999, {1, 1}), ErrorCode::unknown_module);
}

TEST(DrawingTest, MoveThenMoveBackProperty) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1e5, 1e5);
    Drawing d;
    const Id id = d.create_module(Kind::grid, small_grid(), 0);
    const Module original = d.module(id);
    for (int i = 0; i < 100; ++i) {
        const Point delta{u(rng), u(rng)};
        d.move_module(id, delta);
        d.move_module(id, Point{0, 0} - delta);
        expect_same_geometry(original, d.module(id), 1e-9);
    }
    expect_index_consistent(d);
}

TEST(DrawingTest, StretchExamples) {
    Drawing d;
    const Id pipe = d.create_module(
        Kind::pipeline, params(Kind::pipeline, {{"axis", {{3, 4}, {13, 4}}}, {"diameter", 2}}), 0);
    const Module original = d.module(pipe);
    d.stretch_module(pipe, {0, 0}, 1, 1);
    expect_same_geometry(original, d.module(pipe), 0);
    d.stretch_module(pipe, {0, 0}, 2, 2);
    EXPECT_EQ(std::get<Polyline>(d.module(pipe).elements[0].primitive).vertices[0], (Point{6, 10}));
    EXPECT_TRUE(d.verify_module(pipe));

    const Id grid = d.create_module(Kind::grid, small_grid(), 0);
    const Module before = d.module(grid);
    EXPECT_ERROR_CODE(d.stretch_module(grid, {0, 0}, 2, 1), ErrorCode::non_uniform_scale_of_round);
    EXPECT_EQ(d.module(grid).placement, before.placement);
    expect_same_geometry(before, d.module(grid), 0);
    EXPECT_ERROR_CODE(d.stretch_module(grid, {0, 0}, 0, 0), ErrorCode::non_positive_scale);
    EXPECT_ERROR_CODE(d.stretch_module(grid, {0, 0}, -1, -1), ErrorCode::non_positive_scale);
}

TEST(DrawingTest, NonUniformStretchOfPipeline) {
    Drawing d;
    const Id id = d.create_module(Kind::pipeline, straight_pipe(10, 2), 0);
    d.stretch_module(id, {0, 0}, 3, 2);
    const auto& wall = std::get<Polyline>(d.module(id).elements[0].primitive);
    EXPECT_EQ(wall.vertices[1], (Point{30, 2}));
    EXPECT_TRUE(d.verify_module(id));
}

TEST(DrawingTest, DeleteModule) {
    Drawing d;
    const Id id = d.create_module(Kind::pipeline, straight_pipe(1000, 100), 0);
    const Viewport all{{{-1e6, -1e6}, {1e6, 1e6}}};
    EXPECT_EQ(d.visible_elements(all).size(), 2u);
    d.delete_module(id);
    EXPECT_ERROR_CODE(d.module(id), ErrorCode::unknown_module);
    EXPECT_TRUE(d.visible_elements(all).empty());
    EXPECT_ERROR_CODE(d.delete_module(id), ErrorCode::unknown_module);
    EXPECT_TRUE(d.zone_contents().empty() || std::all_of(d.zone_contents().begin(), d.zone_contents().end(),
                                                         [](const auto& z) { return z.second.empty(); }));
}

TEST(DrawingTest, VisibleElementsExamples) {
    Drawing d;
    EXPECT_TRUE(d.visible_elements({{{-1, -1}, {1, 1}}}).empty());
    const Id id = d.add_element(0, kStyle, Line{{0, 0}, {10, 0}});
    EXPECT_EQ(d.visible_elements({{{-1, -1}, {11, 1}}}), std::vector<Id>{id});
    EXPECT_TRUE(d.visible_elements({{{100, 100}, {200, 200}}}).empty());
    d.remove_element(id);
    EXPECT_TRUE(d.visible_elements({{{-1, -1}, {11, 1}}}).empty());
    EXPECT_ERROR_CODE(d.remove_element(id), ErrorCode::unknown_element);
}

TEST(DrawingTest, CullingMatchesBruteForce) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> pos(-5000, 5000);
    std::uniform_real_distribution<double> size(0, 600);
    Drawing d(256);
    for (int i = 0; i < 2000; ++i) {
        const Point a{pos(rng), pos(rng)};
        d.add_element(0, kStyle, Line{a, a + Point{size(rng), size(rng) - 300}});
    }
    d.create_module(Kind::grid, small_grid(), 0);
    const Id pipe = d.create_module(Kind::pipeline, straight_pipe(4000, 200), 0);
    d.move_module(pipe, {-1000, 1234});
    expect_index_consistent(d);
    for (int i = 0; i < 200; ++i) {
        const Point a{pos(rng), pos(rng)};
        const Point b{pos(rng), pos(rng)};
        const BBox rect{{std::min(a.x, b.x), std::min(a.y, b.y)}, {std::max(a.x, b.x), std::max(a.y, b.y)}};
        EXPECT_EQ(d.visible_elements({rect}), brute_force_visible(d, rect));
    }
}

TEST(DrawingTest, ZonesFollowNegativeCoordinates) {
    Drawing d(100);
    EXPECT_EQ(d.zone_of({-0.5, 99.9}), (ZoneKey{-1, 0}));
    EXPECT_EQ(d.zone_of({-100, -100.1}), (ZoneKey{-1, -2}));
    const Id id = d.add_element(0, kStyle, Line{{-150, -50}, {50, 50}});
    const auto zones = d.zone_contents();
    std::vector<ZoneKey> keys;
    for (const auto& [k, ids] : zones) {
        if (std::find(ids.begin(), ids.end(), id) != ids.end()) keys.push_back(k);
    }
    EXPECT_EQ(keys, (std::vector<ZoneKey>{{-2, -1}, {-2, 0}, {-1, -1}, {-1, 0}, {0, -1}, {0, 0}}));
}

TEST(DrawingTest, SnapExamples) {
    Drawing d;
    d.add_element(0, kStyle, Line{{0, 0}, {10, 0}});
    const auto hit = d.snap({5.1, 0.1}, 0.5);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->point, (Point{5, 0}));
    EXPECT_EQ(hit->kind, SnapKind::midpoint);
    EXPECT_FALSE(d.snap({100, 100}, 1));
    d.add_element(0, kStyle, Line{{20, 1}, {22, 1}});
    d.add_element(0, kStyle, Line{{20, -1}, {20, -5}});
    // (20.5, 0) is equidistant from the midpoint (21,1) and the endpoint (20,-1).
    const auto tie = d.snap({20.5, 0}, 2);
    ASSERT_TRUE(tie);
    EXPECT_EQ(tie->kind, SnapKind::endpoint);
    EXPECT_ERROR_CODE(d.snap({0, 0}, 0), ErrorCode::invalid_params);
}

TEST(DrawingTest, SnapFindsModuleGeometry) {
    Drawing d;
    const Id id = d.create_module(Kind::grid, small_grid(), 0);
    const auto hit = d.snap({3000.2, -1399.7}, 1);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->kind, SnapKind::center);
    EXPECT_EQ(hit->point, (Point{3000, -1400}));
    d.move_module(id, {100, 0});
    EXPECT_FALSE(d.snap({3000.2, -1399.7}, 1));
    EXPECT_TRUE(d.snap({3100.2, -1399.7}, 1));
}

TEST(DrawingTest, Layers) {
    Drawing d;
    EXPECT_EQ(d.layers().size(), 1u);
    const Id l = d.add_layer("walls");
    EXPECT_TRUE(d.has_layer(l));
    EXPECT_ERROR_CODE(d.add_element(77, kStyle, Line{{0, 0}, {1, 0}}), ErrorCode::unknown_layer);
    EXPECT_ERROR_CODE((Drawing{256, {}}), ErrorCode::consistency);
    EXPECT_ERROR_CODE((Drawing{256, {{1, "a"}, {1, "b"}}}), ErrorCode::consistency);
}

TEST(DrawingTest, EqualityIgnoresIndex) {
    Drawing a;
    Drawing b;
    a.create_module(Kind::pipeline, straight_pipe(1000, 100), 0);
    b.create_module(Kind::pipeline, straight_pipe(1000, 100), 0);
    EXPECT_TRUE(a == b);
    b.move_module(1, {1, 0});
    EXPECT_FALSE(a == b);
}
