#include "modulecad/generators.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "modulecad/error.hpp"
#include "modulecad/number_format.hpp"
#include "modulecad/units.hpp"

namespace modulecad {

namespace {

constexpr Color kBlack{0, 0, 0};
constexpr Color kAxisRed{200, 0, 0};
constexpr Color kZoneBlue{0, 0, 200};

constexpr LineStyle kSolid{Linetype::solid, kBlack};
constexpr LineStyle kAxisStyle{Linetype::dash_dot, kAxisRed};

[[noreturn]] void invalid(const std::string& path, const std::string& message) {
    fail(ErrorCode::invalid_params, path + ": " + message);
}

std::vector<Point> points_of(const ParamList& list) {
    std::vector<Point> out;
    out.reserve(list.size());
    for (const auto& v : list) out.push_back(v.get<Point>());
    return out;
}

std::vector<double> numbers_of(const ParamList& list) {
    std::vector<double> out;
    out.reserve(list.size());
    for (const auto& v : list) out.push_back(v.get<double>());
    return out;
}

std::vector<std::string> strings_of(const ParamList& list) {
    std::vector<std::string> out;
    out.reserve(list.size());
    for (const auto& v : list) out.push_back(v.get<std::string>());
    return out;
}

Text centered_text(Point center, double height, std::string content) {
    Text t{{}, height, std::move(content)};
    t.anchor = {center.x - text_width(t) / 2.0, center.y - height / 2.0};
    return t;
}

std::vector<std::string> labels_or_default(const ParamRecord& p, std::string_view name,
                                           std::size_t count, bool letters) {
    if (!has_param(p, name)) {
        return letters ? default_letter_labels(count) : default_numeric_labels(count);
    }
    auto labels = strings_of(param_list(p, name));
    if (labels.size() != count) {
        invalid(std::string(name), "expected " + std::to_string(count) + " labels, got " +
                                       std::to_string(labels.size()));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].empty()) {
            invalid(std::string(name) + "[" + std::to_string(i) + "]", "must be nonempty");
        }
    }
    return labels;
}

std::vector<double> prefix_positions(double origin, const std::vector<double>& spacings) {
    std::vector<double> out{origin};
    double acc = 0.0;
    for (double s : spacings) {
        acc += s;
        out.push_back(origin + acc);
    }
    return out;
}

}  // namespace

std::vector<std::string> default_numeric_labels(std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= count; ++i) out.push_back(std::to_string(i));
    return out;
}

std::vector<std::string> default_letter_labels(std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::string s;
        std::size_t n = i + 1;
        while (n > 0) {
            --n;
            s.insert(s.begin(), static_cast<char>('A' + n % 26));
            n /= 26;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Shape> generate(Kind kind, const ParamRecord& params) {
    switch (kind) {
        case Kind::pipeline: return gen_pipeline(params);
        case Kind::grid: return gen_grid(params);
        case Kind::lightning: return gen_lightning(params);
        case Kind::table: return gen_table(params);
    }
    fail(ErrorCode::unknown_kind, "unknown module kind");
}

std::vector<Shape> gen_pipeline(const ParamRecord& raw) {
    const ParamRecord p = normalize_params(Kind::pipeline, raw);
    const std::vector<Point> axis = points_of(param_list(p, "axis"));
    const double diameter = param_number(p, "diameter");
    const Join join = param_string(p, "join") == "arc" ? Join::arc : Join::miter;

    std::vector<Shape> out;
    for (Side side : {Side::left, Side::right}) {
        for (auto& prim : offset_polyline(axis, diameter / 2.0, side, join)) {
            out.push_back({std::move(prim), kSolid});
        }
    }
    if (param_bool(p, "show_axis")) out.push_back({Polyline{axis}, kAxisStyle});
    return out;
}

std::vector<Shape> gen_grid(const ParamRecord& raw) {
    const ParamRecord p = normalize_params(Kind::grid, raw);
    const Point origin = param_point(p, "origin");
    const auto x_spacings = numbers_of(param_list(p, "x_spacings"));
    const auto y_spacings = numbers_of(param_list(p, "y_spacings"));
    const double r = param_number(p, "bubble_radius");
    const double overhang = param_number(p, "overhang");
    const double dim_offset = param_number(p, "dim_offset");
    const auto xs = prefix_positions(origin.x, x_spacings);
    const auto ys = prefix_positions(origin.y, y_spacings);
    const auto x_labels = labels_or_default(p, "x_labels", xs.size(), false);
    const auto y_labels = labels_or_default(p, "y_labels", ys.size(), true);

    const double y_lo = origin.y - overhang;
    const double y_hi = ys.back() + overhang;
    const double x_lo = origin.x - overhang;
    const double x_hi = xs.back() + overhang;

    std::vector<Shape> out;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        out.push_back({Line{{xs[k], y_lo}, {xs[k], y_hi}}, kAxisStyle});
        const Point c{xs[k], y_lo - r};
        out.push_back({Circle{c, r}, kSolid});
        out.push_back({centered_text(c, r, x_labels[k]), kSolid});
    }
    for (std::size_t k = 0; k < ys.size(); ++k) {
        out.push_back({Line{{x_lo, ys[k]}, {x_hi, ys[k]}}, kAxisStyle});
        const Point c{x_lo - r, ys[k]};
        out.push_back({Circle{c, r}, kSolid});
        out.push_back({centered_text(c, r, y_labels[k]), kSolid});
    }

    const double tick = r / 4.0;
    const double dim_text = r / 2.0;
    const double gap = r / 8.0;
    if (!x_spacings.empty()) {
        const double yd = origin.y - overhang - 2.0 * r - dim_offset;
        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            out.push_back({Line{{xs[k], yd}, {xs[k + 1], yd}}, kSolid});
        }
        for (double x : xs) out.push_back({Line{{x - tick, yd - tick}, {x + tick, yd + tick}}, kSolid});
        for (std::size_t k = 0; k < x_spacings.size(); ++k) {
            Text t{{}, dim_text, format_decimal(x_spacings[k])};
            t.anchor = {(xs[k] + xs[k + 1]) / 2.0 - text_width(t) / 2.0, yd + gap};
            out.push_back({std::move(t), kSolid});
        }
    }
    if (!y_spacings.empty()) {
        const double xd = origin.x - overhang - 2.0 * r - dim_offset;
        for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
            out.push_back({Line{{xd, ys[k]}, {xd, ys[k + 1]}}, kSolid});
        }
        for (double y : ys) out.push_back({Line{{xd - tick, y - tick}, {xd + tick, y + tick}}, kSolid});
        for (std::size_t k = 0; k < y_spacings.size(); ++k) {
            Text t{{}, dim_text, format_decimal(y_spacings[k])};
            t.anchor = {xd - gap - text_width(t), (ys[k] + ys[k + 1]) / 2.0 - dim_text / 2.0};
            out.push_back({std::move(t), kSolid});
        }
    }
    return out;
}

RodZone single_rod_zone(double h) {
    if (!(h > 0.0 && h <= 150.0)) {
        fail(ErrorCode::height_out_of_range,
             "rod height " + format_shortest(h) + " m is outside (0, 150]");
    }
    // 92h/100 rounds to the nearest double of 0.92h for integral h.
    return {92.0 * h / 100.0, 1.5 * h};
}

double protected_radius(double h, double hx) {
    const RodZone z = single_rod_zone(h);
    return z.r0 * ((z.h0 - hx) / z.h0);
}

double double_rod_saddle(double h, double L) {
    const RodZone z = single_rod_zone(h);
    if (!(L > 0.0)) fail(ErrorCode::invalid_params, "rod spacing must be positive");
    if (L > 6.0 * h) {
        fail(ErrorCode::rods_too_far, "rods " + format_shortest(L) + " m apart exceed 6h = " +
                                          format_shortest(6.0 * h) + " m");
    }
    if (L <= h) return z.h0;
    return z.h0 - (0.14 + 5e-4 * h) * (L - h);
}

std::vector<Shape> gen_lightning(const ParamRecord& raw) {
    const ParamRecord p = normalize_params(Kind::lightning, raw);
    const double hx = param_number(p, "hx");
    const double scale = param_number(p, "scale");

    struct Rod {
        double x;
        double h;
        RodZone zone;
    };
    std::vector<Rod> rods;
    for (const auto& v : param_list(p, "rods")) {
        const auto& rec = v.get<ParamRecord>();
        const double h = param_number(rec, "h");
        rods.push_back({param_number(rec, "x"), h, single_rod_zone(h)});
    }
    for (std::size_t i = 1; i < rods.size(); ++i) {
        if (!(rods[i].x > rods[i - 1].x)) {
            fail(ErrorCode::unsorted_rods, "rods must be sorted by strictly increasing x");
        }
    }
    for (std::size_t i = 0; i < rods.size(); ++i) {
        if (!(hx < rods[i].zone.h0)) {
            invalid("hx", "must be below the zone height h0 = " +
                              format_decimal(rods[i].zone.h0) + " m of rod " +
                              std::to_string(i + 1));
        }
    }

    // Adjacent equal-height rods within 6h share a saddle boundary.
    std::vector<std::optional<double>> saddle(rods.size(), std::nullopt);
    for (std::size_t i = 0; i + 1 < rods.size(); ++i) {
        const double L = rods[i + 1].x - rods[i].x;
        if (rods[i].h == rods[i + 1].h && L <= 6.0 * rods[i].h) {
            saddle[i] = double_rod_saddle(rods[i].h, L);
        }
    }

    auto at = [scale](double x, double y) { return Point{x * scale, y * scale}; };
    const LineStyle zone_style{Linetype::solid, kZoneBlue};

    std::vector<Shape> out;
    for (const Rod& rod : rods) out.push_back({Line{at(rod.x, 0), at(rod.x, rod.h)}, kSolid});

    for (std::size_t i = 0; i < rods.size();) {
        Polyline boundary;
        boundary.vertices.push_back(at(rods[i].x - rods[i].zone.r0, 0));
        boundary.vertices.push_back(at(rods[i].x, rods[i].zone.h0));
        std::size_t j = i;
        while (j + 1 < rods.size() && saddle[j]) {
            boundary.vertices.push_back(at((rods[j].x + rods[j + 1].x) / 2.0, *saddle[j]));
            boundary.vertices.push_back(at(rods[j + 1].x, rods[j + 1].zone.h0));
            ++j;
        }
        boundary.vertices.push_back(at(rods[j].x + rods[j].zone.r0, 0));
        out.push_back({std::move(boundary), zone_style});
        i = j + 1;
    }

    double left = rods.front().x - rods.front().zone.r0;
    double right = rods.front().x + rods.front().zone.r0;
    for (const Rod& rod : rods) {
        left = std::min(left, rod.x - rod.zone.r0);
        right = std::max(right, rod.x + rod.zone.r0);
    }
    out.push_back({Line{at(left, hx), at(right, hx)}, {Linetype::dash, kBlack}});

    TableLayout table;
    table.row_height = 8.0;
    table.origin = {left * scale, -2.0 * table.row_height};
    table.columns = {{"Object", 30, ""}, {"h, m", 18, ""},  {"h0, m", 18, ""}, {"r0, m", 18, ""},
                     {"rx, m", 18, ""},  {"L, m", 18, ""},  {"hc, m", 18, ""}};
    for (std::size_t i = 0; i < rods.size(); ++i) {
        table.rows.push_back({"Rod " + std::to_string(i + 1), format_decimal(rods[i].h),
                              format_decimal(rods[i].zone.h0), format_decimal(rods[i].zone.r0),
                              format_decimal(protected_radius(rods[i].h, hx)), "", ""});
    }
    for (std::size_t i = 0; i + 1 < rods.size(); ++i) {
        if (!saddle[i]) continue;
        table.rows.push_back({"Rods " + std::to_string(i + 1) + "-" + std::to_string(i + 2), "", "",
                              "", "", format_decimal(rods[i + 1].x - rods[i].x),
                              format_decimal(*saddle[i])});
    }
    for (auto& shape : layout_table(table)) out.push_back(std::move(shape));
    return out;
}

std::vector<Shape> layout_table(const TableLayout& table) {
    const double rh = table.row_height;
    const Point o = table.origin;
    double width = 0.0;
    for (const auto& c : table.columns) width += c.width;
    const double height = static_cast<double>(table.rows.size() + 1) * rh;

    std::vector<Shape> out;
    out.push_back({Polyline{{o, {o.x + width, o.y}, {o.x + width, o.y - height},
                             {o.x, o.y - height}, o}},
                   kSolid});
    std::vector<double> col_x{o.x};
    for (const auto& c : table.columns) col_x.push_back(col_x.back() + c.width);
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        out.push_back({Line{{col_x[c], o.y}, {col_x[c], o.y - height}}, kSolid});
    }
    for (std::size_t r = 1; r <= table.rows.size(); ++r) {
        const double y = o.y - static_cast<double>(r) * rh;
        out.push_back({Line{{o.x, y}, {o.x + width, y}}, kSolid});
    }

    const double text_height = 0.7 * rh;
    auto cell_text = [&](std::size_t row, std::size_t col, const std::string& content) {
        const double baseline = o.y - static_cast<double>(row + 1) * rh + 0.15 * rh;
        out.push_back({Text{{col_x[col] + 1.0, baseline}, text_height, content}, kSolid});
    };
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        const auto& col = table.columns[c];
        cell_text(0, c, col.unit.empty() ? col.title : col.title + ", " + col.unit);
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
            if (!table.rows[r][c].empty()) cell_text(r + 1, c, table.rows[r][c]);
        }
    }
    return out;
}

namespace {

// Numeric cell value expressed in the column unit, or nullopt for strings.
std::optional<double> numeric_in_column(const ParamValue& cell, const TableColumn& col) {
    if (cell.is<double>()) return cell.get<double>();
    if (cell.is<Quantity>()) {
        const Quantity& q = cell.get<Quantity>();
        return col.unit.empty() ? q.value : convert_unit(q.value, q.unit, col.unit);
    }
    return std::nullopt;
}

bool passes_filter(const ParamValue& cell, const TableColumn& col, const std::string& op,
                   const ParamValue& value) {
    const auto a = numeric_in_column(cell, col);
    const auto b = numeric_in_column(value, col);
    if (a && b) {
        if (op == "eq") return *a == *b;
        if (op == "gt") return *a > *b;
        return *a < *b;
    }
    if (cell.is<std::string>() && value.is<std::string>()) {
        const auto& s = cell.get<std::string>();
        const auto& t = value.get<std::string>();
        if (op == "eq") return s == t;
        if (op == "gt") return s > t;
        return s < t;
    }
    return false;
}

std::string render_cell(const ParamValue& cell, const TableColumn& col, const std::string& path) {
    if (cell.is<std::string>()) return cell.get<std::string>();
    if (cell.is<double>()) {
        if (!col.unit.empty()) invalid(path, "numeric cell needs a unit in column '" + col.title + "'");
        return format_decimal(cell.get<double>());
    }
    const Quantity& q = cell.get<Quantity>();
    if (col.unit.empty()) return format_decimal(q.value) + " " + q.unit;
    return format_decimal(convert_unit(q.value, q.unit, col.unit));
}

}  // namespace

std::vector<Shape> gen_table(const ParamRecord& raw) {
    const ParamRecord p = normalize_params(Kind::table, raw);
    TableLayout table;
    table.origin = param_point(p, "origin");
    table.row_height = param_number(p, "row_height");
    for (const auto& v : param_list(p, "columns")) {
        const auto& rec = v.get<ParamRecord>();
        table.columns.push_back({param_string(rec, "title"), param_number(rec, "width"),
                                 has_param(rec, "unit") ? param_string(rec, "unit") : ""});
    }

    const ParamRecord* filter = param_record(p, "filter");
    std::size_t filter_column = 0;
    if (filter != nullptr) {
        filter_column = static_cast<std::size_t>(param_number(*filter, "column"));
        if (filter_column >= table.columns.size()) {
            invalid("filter.column", "no column " + std::to_string(filter_column));
        }
    }

    const auto& rows = param_list(p, "rows");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& cells = rows[r].get<ParamList>();
        const std::string path = "rows[" + std::to_string(r) + "]";
        if (cells.size() != table.columns.size()) {
            invalid(path, "has " + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(table.columns.size()));
        }
        if (filter != nullptr &&
            !passes_filter(cells[filter_column], table.columns[filter_column],
                           param_string(*filter, "op"), filter->find("value")->second)) {
            continue;
        }
        std::vector<std::string> rendered;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            rendered.push_back(
                render_cell(cells[c], table.columns[c], path + "[" + std::to_string(c) + "]"));
        }
        table.rows.push_back(std::move(rendered));
    }
    return layout_table(table);
}

}  // namespace modulecad
