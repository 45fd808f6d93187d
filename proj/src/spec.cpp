#include "modulecad/spec.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "modulecad/error.hpp"
#include "modulecad/number_format.hpp"

namespace modulecad {

namespace {

constexpr int kQtyDecimals = 3;

double polyline_length(const ParamList& axis) {
    double total = 0.0;
    for (std::size_t i = 1; i < axis.size(); ++i) {
        total += distance(axis[i - 1].get<Point>(), axis[i].get<Point>());
    }
    return total;
}

}  // namespace

std::vector<SpecItem> spec_items(const Module& m) {
    switch (m.kind) {
        case Kind::pipeline: {
            const double metres = polyline_length(param_list(m.params, "axis")) / 1000.0;
            return {{m.position(), "Pipe DN" + format_decimal(param_number(m.params, "diameter")),
                     "m", round_half_away(metres, kQtyDecimals)}};
        }
        case Kind::lightning: {
            std::vector<SpecItem> out;
            for (const auto& rod : param_list(m.params, "rods")) {
                const double h = param_number(rod.get<ParamRecord>(), "h");
                out.push_back({m.position(), "Lightning rod h=" + format_decimal(h) + "m", "pcs", 1.0});
            }
            return out;
        }
        case Kind::grid:
        case Kind::table: return {};
    }
    return {};
}

std::vector<SpecItem> collect_spec(const Drawing& d) {
    struct Merged {
        std::set<std::string> positions;
        double qty = 0.0;
    };
    std::map<std::pair<std::string, std::string>, Merged> merged;
    for (const auto& [id, m] : d.modules()) {
        for (SpecItem& item : spec_items(m)) {
            Merged& row = merged[{item.name, item.unit}];
            if (!item.position.empty()) row.positions.insert(item.position);
            row.qty += item.qty;
        }
    }
    std::vector<SpecItem> out;
    for (auto& [key, row] : merged) {
        std::string position;
        for (const auto& p : row.positions) {
            if (!position.empty()) position += ", ";
            position += p;
        }
        out.push_back({position, key.first, key.second, round_half_away(row.qty, kQtyDecimals)});
    }
    std::sort(out.begin(), out.end(), [](const SpecItem& a, const SpecItem& b) {
        return std::tie(a.position, a.name) < std::tie(b.position, b.name);
    });
    return out;
}

std::vector<std::string> check_duplicate_positions(const Drawing& d) {
    std::map<std::string, int> uses;
    for (const auto& [id, m] : d.modules()) {
        const std::string p = m.position();
        if (!p.empty()) ++uses[p];
    }
    std::vector<std::string> out;
    for (const auto& [p, n] : uses) {
        if (n > 1) out.push_back(p);
    }
    return out;
}

std::vector<double> axes_positions(const Drawing& d, Id grid_module, AxisDirection direction) {
    const Module& m = d.module(grid_module);
    if (m.kind != Kind::grid) {
        fail(ErrorCode::wrong_kind, "module " + std::to_string(grid_module) + " is a " +
                                        std::string(to_string(m.kind)) + ", not a grid");
    }
    const Point origin = param_point(m.params, "origin");
    const bool along_x = direction == AxisDirection::x;
    const auto& spacings = param_list(m.params, along_x ? "x_spacings" : "y_spacings");
    std::vector<double> out;
    double acc = 0.0;
    for (std::size_t k = 0; k <= spacings.size(); ++k) {
        if (k > 0) acc += spacings[k - 1].get<double>();
        const Point local = along_x ? Point{origin.x + acc, origin.y} : Point{origin.x, origin.y + acc};
        const Point placed = m.placement.apply(local);
        out.push_back(along_x ? placed.x : placed.y);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace modulecad
