#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace modulecad {

struct UnitDef {
    std::string_view name;
    double factor;  // multiples of the dimension's base unit
};

struct Dimension {
    std::string_view name;
    std::vector<UnitDef> units;
};

/// length {mm, cm, m}, mass {kg, t}, pressure {Pa, kPa, MPa}; the base unit of
/// each dimension has factor 1.
const std::vector<Dimension>& unit_table();

/// Name of the dimension `unit` belongs to; throws unknown_unit.
std::string_view dimension_of(std::string_view unit);

/// value * factor(from) / factor(to). Throws unknown_unit or
/// dimension_mismatch.
double convert_unit(double value, std::string_view from, std::string_view to);

}  // namespace modulecad
