#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <sstream>

#include "modulecad/svg_export.hpp"
#include "test_support.hpp"

using namespace modulecad;
using modulecad::testing::params;
using modulecad::testing::straight_pipe;
namespace pt = boost::property_tree;

namespace {

pt::ptree parse_xml(const std::string& svg) {
    std::istringstream in(svg);
    pt::ptree tree;
    pt::read_xml(in, tree);
    return tree;
}

const pt::ptree& group(const pt::ptree& doc) { return doc.get_child("svg").get_child("g"); }

std::vector<std::pair<std::string, pt::ptree>> shapes(const pt::ptree& doc) {
    std::vector<std::pair<std::string, pt::ptree>> out;
    for (const auto& [tag, node] : group(doc)) {
        if (tag != "<xmlattr>") out.emplace_back(tag, node);
    }
    return out;
}

}  // namespace

TEST(SvgExportTest, EmptyDrawing) {
    const auto doc = parse_xml(export_svg(Drawing{}));
    EXPECT_TRUE(shapes(doc).empty());
    EXPECT_EQ(doc.get<std::string>("svg.<xmlattr>.version"), "1.1");
    EXPECT_EQ(group(doc).get<std::string>("<xmlattr>.transform"), "scale(1,-1)");
}

TEST(SvgExportTest, OneLine) {
    Drawing d;
    const Id id = d.add_element(0, {}, Line{{0, 0}, {10, 5}});
    const std::string svg = export_svg(d);
    const auto doc = parse_xml(svg);
    const auto s = shapes(doc);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].first, "polyline");
    EXPECT_EQ(s[0].second.get<std::string>("<xmlattr>.points"), "0,0 10,5");
    EXPECT_EQ(s[0].second.get<std::string>("<xmlattr>.id"), "e" + std::to_string(id));
    EXPECT_EQ(s[0].second.get<std::string>("<xmlattr>.stroke"), "#000000");
    // Under scale(1,-1) drawing (10,5) lands at SVG (10,-5); the viewBox spans
    // y in [-5 - margin, 0 + margin].
    EXPECT_EQ(doc.get<std::string>("svg.<xmlattr>.viewBox"), "-10 -15 30 25");
}

TEST(SvgExportTest, ViewportCullsAndFrames) {
    Drawing d;
    d.add_element(0, {}, Line{{0, 0}, {10, 0}});
    const auto doc = parse_xml(export_svg(d, {.viewport = BBox{{100, 100}, {200, 200}}}));
    EXPECT_TRUE(shapes(doc).empty());
    EXPECT_EQ(doc.get<std::string>("svg.<xmlattr>.viewBox"), "100 -200 100 100");
}

TEST(SvgExportTest, ShapeMapping) {
    Drawing d;
    d.add_element(0, {Linetype::dash, {255, 0, 16}}, Circle{{1, 2}, 3});
    d.add_element(0, {Linetype::dash_dot, {}}, Arc{{0, 0}, 2, 0, 1.5707963267948966});
    d.add_element(0, {}, Text{{4, 5}, 2.5, "a<b&c"});
    d.add_element(0, {}, Polyline{{{0, 0}, {1, 0}, {1, 1}}});
    const auto doc = parse_xml(export_svg(d));
    const auto s = shapes(doc);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(s[0].first, "circle");
    EXPECT_EQ(s[0].second.get<std::string>("<xmlattr>.r"), "3");
    EXPECT_EQ(s[0].second.get<std::string>("<xmlattr>.stroke"), "#ff0010");
    EXPECT_EQ(s[0].second.get<std::string>("<xmlattr>.stroke-dasharray"), "8 4");
    EXPECT_EQ(s[1].first, "path");
    EXPECT_EQ(s[1].second.get<std::string>("<xmlattr>.stroke-dasharray"), "12 3 2 3");
    const std::string path = s[1].second.get<std::string>("<xmlattr>.d");
    EXPECT_EQ(path.substr(0, 6), "M 2,0 ");
    EXPECT_NE(path.find(" A 2,2 0 0,1 "), std::string::npos) << path;
    EXPECT_EQ(s[2].first, "text");
    EXPECT_EQ(s[2].second.data(), "a<b&c");
    EXPECT_EQ(s[2].second.get<std::string>("<xmlattr>.font-size"), "2.5");
    EXPECT_EQ(s[3].first, "polyline");
}

TEST(SvgExportTest, FullCircleArcIsTwoHalves) {
    Drawing d;
    d.add_element(0, {}, Arc{{0, 0}, 1, 0, 0});
    const auto s = shapes(parse_xml(export_svg(d)));
    ASSERT_EQ(s.size(), 1u);
    const std::string path = s[0].second.get<std::string>("<xmlattr>.d");
    std::size_t arcs = 0;
    for (std::size_t pos = 0; (pos = path.find('A', pos)) != std::string::npos; ++pos) ++arcs;
    EXPECT_EQ(arcs, 2u) << path;
}

TEST(SvgExportTest, OrderIsAscendingIdAcrossModulesAndFreeElements) {
    Drawing d;
    d.create_module(Kind::pipeline, straight_pipe(1000, 100), 0);
    d.add_element(0, {}, Line{{0, 0}, {1, 1}});
    d.create_module(Kind::pipeline, straight_pipe(500, 50), 0);
    const auto s = shapes(parse_xml(export_svg(d)));
    long prev = 0;
    for (const auto& [tag, node] : s) {
        const long id = std::stol(node.get<std::string>("<xmlattr>.id").substr(1));
        EXPECT_GT(id, prev);
        prev = id;
    }
    EXPECT_EQ(s.size(), 5u);
}

TEST(SvgExportTest, DeterministicAndOptions) {
    Drawing d;
    d.create_module(Kind::grid, params(Kind::grid, {{"x_spacings", {6000, 6000}}, {"y_spacings", {6000}}}), 0);
    EXPECT_EQ(export_svg(d), export_svg(d));
    const std::string bg = export_svg(d, {.background = Color{255, 255, 255}});
    EXPECT_NE(bg.find("background-color:#ffffff"), std::string::npos);
    EXPECT_ERROR_CODE(export_svg(d, {.stroke_width = 0}), ErrorCode::invalid_params);
    EXPECT_ERROR_CODE(export_svg(d, {.margin = -1}), ErrorCode::invalid_params);
}

TEST(SvgExportTest, HexColor) {
    EXPECT_EQ(hex_color({0, 0, 200}), "#0000c8");
    EXPECT_EQ(hex_color({255, 255, 255}), "#ffffff");
}
