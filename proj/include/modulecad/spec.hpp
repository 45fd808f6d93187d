#pragma once

#include <string>
#include <vector>

#include "modulecad/drawing.hpp"

namespace modulecad {

/// One bill-of-materials row.
struct SpecItem {
    std::string position;
    std::string name;
    std::string unit;
    double qty = 0.0;
    friend bool operator==(const SpecItem&, const SpecItem&) = default;
};

/// Pipeline: one "Pipe DN<d>" row in metres of axis length; lightning: one
/// "Lightning rod h=<h>m" row per rod; grid and table contribute nothing.
std::vector<SpecItem> spec_items(const Module& m);

/// Rows merged by (name, unit) with summed qty, sorted by position then name.
/// A merged row lists its distinct positions joined by ", ".
std::vector<SpecItem> collect_spec(const Drawing& d);

/// Nonempty position designations used by more than one module, sorted.
std::vector<std::string> check_duplicate_positions(const Drawing& d);

enum class AxisDirection { x, y };

/// Axis coordinates of a grid module under its placement, ascending.
/// Throws unknown_module and wrong_kind.
std::vector<double> axes_positions(const Drawing& d, Id grid_module, AxisDirection direction);

}  // namespace modulecad
