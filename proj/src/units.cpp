#include "modulecad/units.hpp"

#include "modulecad/error.hpp"

namespace modulecad {

const std::vector<Dimension>& unit_table() {
    static const std::vector<Dimension> table = {
        {"length", {{"mm", 1.0}, {"cm", 10.0}, {"m", 1000.0}}},
        {"mass", {{"kg", 1.0}, {"t", 1000.0}}},
        {"pressure", {{"Pa", 1.0}, {"kPa", 1e3}, {"MPa", 1e6}}},
    };
    return table;
}

namespace {

struct Lookup {
    const Dimension* dimension;
    double factor;
};

Lookup find_unit(std::string_view unit) {
    for (const Dimension& d : unit_table()) {
        for (const UnitDef& u : d.units) {
            if (u.name == unit) return {&d, u.factor};
        }
    }
    fail(ErrorCode::unknown_unit, "unknown unit '" + std::string(unit) + "'");
}

}  // namespace

std::string_view dimension_of(std::string_view unit) { return find_unit(unit).dimension->name; }

double convert_unit(double value, std::string_view from, std::string_view to) {
    const Lookup a = find_unit(from);
    const Lookup b = find_unit(to);
    if (a.dimension != b.dimension) {
        fail(ErrorCode::dimension_mismatch, "cannot convert " + std::string(from) + " (" +
                                                std::string(a.dimension->name) + ") to " +
                                                std::string(to) + " (" +
                                                std::string(b.dimension->name) + ")");
    }
    if (a.factor == b.factor) return value;
    return value * a.factor / b.factor;
}

}  // namespace modulecad
