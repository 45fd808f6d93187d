#pragma once

#include <string>
#include <vector>

#include "modulecad/geometry.hpp"
#include "modulecad/params.hpp"

namespace modulecad {

/// One generated drawing element before it receives an id and a layer.
struct Shape {
    Primitive primitive;
    LineStyle style;
    friend bool operator==(const Shape&, const Shape&) = default;
};

/// Validates `params` against the kind's schema and runs its generator.
/// Output is a pure function of (kind, params), in generator order.
std::vector<Shape> generate(Kind kind, const ParamRecord& params);

/// Walls are offset_polyline(axis, diameter/2) on both sides (left first);
/// the axis follows in dash-dot when show_axis is set.
std::vector<Shape> gen_pipeline(const ParamRecord& params);

/// Axis lines with bubbles and labels, then dimension chains.
std::vector<Shape> gen_grid(const ParamRecord& params);

std::vector<Shape> gen_lightning(const ParamRecord& params);

std::vector<Shape> gen_table(const ParamRecord& params);

// Lightning protection zones (zone B), all lengths in metres.

struct RodZone {
    double h0;  // zone apex height
    double r0;  // zone radius at ground level
};

/// h0 = 0.92 h, r0 = 1.5 h for 0 < h <= 150; throws height_out_of_range.
RodZone single_rod_zone(double h);

/// Protected radius at height hx: 1.5 (h - hx / 0.92), zero at hx = h0.
double protected_radius(double h, double hx);

/// Saddle height between two rods of height h at spacing L:
/// 0.92 h for L <= h, else 0.92 h - (0.14 + 5e-4 h)(L - h).
/// Throws rods_too_far for L > 6h and height_out_of_range.
double double_rod_saddle(double h, double L);

/// Labels used when x_labels/y_labels are absent: "1", "2", ... and
/// "A", "B", ..., "Z", "AA", ...
std::vector<std::string> default_numeric_labels(std::size_t count);
std::vector<std::string> default_letter_labels(std::size_t count);

struct TableColumn {
    std::string title;
    double width = 0.0;
    std::string unit;  // empty when the column has no unit
};

/// Already-rendered table content.
struct TableLayout {
    Point origin;
    std::vector<TableColumn> columns;
    std::vector<std::vector<std::string>> rows;
    double row_height = 8.0;
};

/// Outer rectangle, column separators, row separators, header texts, then
/// cell texts. Grows downward from origin (top-left corner).
std::vector<Shape> layout_table(const TableLayout& table);

}  // namespace modulecad
