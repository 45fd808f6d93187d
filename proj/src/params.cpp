#include "modulecad/params.hpp"

#include <cmath>

#include "modulecad/error.hpp"
#include "modulecad/number_format.hpp"
#include "modulecad/units.hpp"

namespace modulecad {

using nlohmann::json;

std::string_view to_string(Kind kind) noexcept {
    switch (kind) {
        case Kind::pipeline: return "pipeline";
        case Kind::grid: return "grid";
        case Kind::lightning: return "lightning";
        case Kind::table: return "table";
    }
    return "pipeline";
}

Kind parse_kind(std::string_view name) {
    for (Kind k : kAllKinds) {
        if (to_string(k) == name) return k;
    }
    fail(ErrorCode::unknown_kind, "unknown module kind '" + std::string(name) + "'");
}

std::string_view to_string(ParamType type) noexcept {
    switch (type) {
        case ParamType::number: return "number";
        case ParamType::string: return "string";
        case ParamType::boolean: return "boolean";
        case ParamType::point: return "point";
        case ParamType::choice: return "choice";
        case ParamType::number_list: return "number_list";
        case ParamType::string_list: return "string_list";
        case ParamType::point_list: return "point_list";
        case ParamType::record: return "record";
        case ParamType::record_list: return "record_list";
        case ParamType::cell: return "cell";
        case ParamType::cell_rows: return "cell_rows";
    }
    return "number";
}

namespace {

Bound above(double v) { return {v, true}; }
Bound at_least(double v) { return {v, false}; }

FieldSpec field(std::string name, ParamType type, std::string unit = {}) {
    FieldSpec f;
    f.name = std::move(name);
    f.type = type;
    f.unit = std::move(unit);
    return f;
}

FieldSpec required(FieldSpec f) {
    f.required = true;
    return f;
}

FieldSpec with_default(FieldSpec f, ParamValue v) {
    f.default_value = std::move(v);
    return f;
}

FieldSpec bounded(FieldSpec f, std::optional<Bound> min, std::optional<Bound> max = std::nullopt) {
    f.min = min;
    f.max = max;
    return f;
}

std::vector<std::string> all_unit_names() {
    std::vector<std::string> names;
    for (const Dimension& d : unit_table()) {
        for (const UnitDef& u : d.units) names.emplace_back(u.name);
    }
    return names;
}

ParamSchema make_pipeline_schema() {
    FieldSpec axis = required(field("axis", ParamType::point_list, "mm"));
    axis.min_items = 2;
    FieldSpec join = with_default(field("join", ParamType::choice), "miter");
    join.choices = {"miter", "arc"};
    return {Kind::pipeline,
            {axis, required(bounded(field("diameter", ParamType::number, "mm"), above(0))), join,
             with_default(field("show_axis", ParamType::boolean), false),
             with_default(field("position", ParamType::string), "")}};
}

ParamSchema make_grid_schema() {
    return {Kind::grid,
            {with_default(field("origin", ParamType::point, "mm"), Point{0, 0}),
             with_default(bounded(field("x_spacings", ParamType::number_list, "mm"), above(0)),
                          ParamList{}),
             with_default(bounded(field("y_spacings", ParamType::number_list, "mm"), above(0)),
                          ParamList{}),
             with_default(bounded(field("bubble_radius", ParamType::number, "mm"), above(0)), 400),
             field("x_labels", ParamType::string_list), field("y_labels", ParamType::string_list),
             with_default(bounded(field("overhang", ParamType::number, "mm"), at_least(0)), 1000),
             with_default(bounded(field("dim_offset", ParamType::number, "mm"), above(0)), 500)}};
}

ParamSchema make_lightning_schema() {
    FieldSpec rods = required(field("rods", ParamType::record_list));
    rods.min_items = 1;
    rods.fields = {required(field("x", ParamType::number, "m")),
                   required(bounded(field("h", ParamType::number, "m"), above(0), at_least(150)))};
    return {Kind::lightning,
            {rods, with_default(bounded(field("hx", ParamType::number, "m"), at_least(0)), 0),
             with_default(bounded(field("scale", ParamType::number, "mm/m"), above(0)), 1000),
             with_default(field("position", ParamType::string), "")}};
}

ParamSchema make_table_schema() {
    FieldSpec columns = required(field("columns", ParamType::record_list));
    columns.min_items = 1;
    FieldSpec unit = field("unit", ParamType::choice);
    unit.choices = all_unit_names();
    columns.fields = {required(field("title", ParamType::string)),
                      required(bounded(field("width", ParamType::number, "mm"), above(0))), unit};

    FieldSpec filter = field("filter", ParamType::record);
    FieldSpec column = required(bounded(field("column", ParamType::number), at_least(0)));
    column.integer = true;
    FieldSpec op = required(field("op", ParamType::choice));
    op.choices = {"eq", "gt", "lt"};
    filter.fields = {column, op, required(field("value", ParamType::cell))};

    return {Kind::table,
            {with_default(field("origin", ParamType::point, "mm"), Point{0, 0}), columns,
             with_default(field("rows", ParamType::cell_rows), ParamList{}),
             with_default(bounded(field("row_height", ParamType::number, "mm"), above(0)), 8),
             filter}};
}

[[noreturn]] void invalid(const std::string& path, const std::string& message) {
    fail(ErrorCode::invalid_params, path + ": " + message);
}

std::string describe(const Bound& b, bool lower) {
    std::string op = lower ? (b.exclusive ? "> " : ">= ") : (b.exclusive ? "< " : "<= ");
    return "must be " + op + format_shortest(b.value);
}

void check_number(double v, const FieldSpec& f, const std::string& path) {
    if (!std::isfinite(v)) invalid(path, "must be a finite number");
    if (f.min) {
        const bool ok = f.min->exclusive ? v > f.min->value : v >= f.min->value;
        if (!ok) invalid(path, describe(*f.min, true));
    }
    if (f.max) {
        const bool ok = f.max->exclusive ? v < f.max->value : v <= f.max->value;
        if (!ok) invalid(path, describe(*f.max, false));
    }
    if (f.integer && std::floor(v) != v) invalid(path, "must be an integer");
}

std::string item_path(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

const ParamList& expect_list(const ParamValue& v, const FieldSpec& f, const std::string& path) {
    if (!v.is<ParamList>()) invalid(path, "must be a list");
    const auto& list = v.get<ParamList>();
    if (list.size() < f.min_items) {
        invalid(path, "needs at least " + std::to_string(f.min_items) + " items");
    }
    return list;
}

ParamRecord normalize_record(const std::vector<FieldSpec>& fields, const ParamRecord& in,
                             const std::string& prefix);

void check_cell(const ParamValue& v, const std::string& path) {
    if (v.is<double>()) {
        if (!std::isfinite(v.get<double>())) invalid(path, "must be a finite number");
    } else if (v.is<Quantity>()) {
        const Quantity& q = v.get<Quantity>();
        if (!std::isfinite(q.value)) invalid(path, "must be a finite number");
        try {
            dimension_of(q.unit);
        } catch (const Error&) {
            invalid(path, "unknown unit '" + q.unit + "'");
        }
    } else if (!v.is<std::string>()) {
        invalid(path, "must be a number, a quantity or a string");
    }
}

ParamValue normalize_value(const FieldSpec& f, const ParamValue& v, const std::string& path) {
    switch (f.type) {
        case ParamType::number:
            if (!v.is<double>()) invalid(path, "must be a number");
            check_number(v.get<double>(), f, path);
            return v;
        case ParamType::string:
            if (!v.is<std::string>()) invalid(path, "must be a string");
            return v;
        case ParamType::boolean:
            if (!v.is<bool>()) invalid(path, "must be a boolean");
            return v;
        case ParamType::point:
            if (!v.is<Point>() || !is_finite(v.get<Point>())) invalid(path, "must be a finite point");
            return v;
        case ParamType::choice: {
            if (!v.is<std::string>()) invalid(path, "must be a string");
            const auto& s = v.get<std::string>();
            for (const auto& c : f.choices) {
                if (c == s) return v;
            }
            invalid(path, "'" + s + "' is not an allowed value");
        }
        case ParamType::number_list: {
            const auto& list = expect_list(v, f, path);
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (!list[i].is<double>()) invalid(item_path(path, i), "must be a number");
                check_number(list[i].get<double>(), f, item_path(path, i));
            }
            return v;
        }
        case ParamType::string_list: {
            const auto& list = expect_list(v, f, path);
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (!list[i].is<std::string>()) invalid(item_path(path, i), "must be a string");
            }
            return v;
        }
        case ParamType::point_list: {
            const auto& list = expect_list(v, f, path);
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (!list[i].is<Point>() || !is_finite(list[i].get<Point>())) {
                    invalid(item_path(path, i), "must be a finite point");
                }
            }
            return v;
        }
        case ParamType::record:
            if (!v.is<ParamRecord>()) invalid(path, "must be a record");
            return normalize_record(f.fields, v.get<ParamRecord>(), path + ".");
        case ParamType::record_list: {
            const auto& list = expect_list(v, f, path);
            ParamList out;
            out.reserve(list.size());
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (!list[i].is<ParamRecord>()) invalid(item_path(path, i), "must be a record");
                out.emplace_back(
                    normalize_record(f.fields, list[i].get<ParamRecord>(), item_path(path, i) + "."));
            }
            return out;
        }
        case ParamType::cell:
            check_cell(v, path);
            return v;
        case ParamType::cell_rows: {
            const auto& rows = expect_list(v, f, path);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (!rows[i].is<ParamList>()) invalid(item_path(path, i), "must be a list of cells");
                const auto& cells = rows[i].get<ParamList>();
                for (std::size_t c = 0; c < cells.size(); ++c) {
                    check_cell(cells[c], item_path(item_path(path, i), c));
                }
            }
            return v;
        }
    }
    return v;
}

ParamRecord normalize_record(const std::vector<FieldSpec>& fields, const ParamRecord& in,
                             const std::string& prefix) {
    for (const auto& [name, value] : in) {
        bool known = false;
        for (const auto& f : fields) known = known || f.name == name;
        if (!known) invalid(prefix + name, "unknown parameter");
    }
    ParamRecord out;
    for (const auto& f : fields) {
        const std::string path = prefix + f.name;
        auto it = in.find(f.name);
        if (it == in.end()) {
            if (f.required) invalid(path, "is required");
            if (f.default_value) out.emplace(f.name, *f.default_value);
            continue;
        }
        out.emplace(f.name, normalize_value(f, it->second, path));
    }
    return out;
}

// JSON -> ParamValue, typed by the schema field.

double json_number(const json& j, const std::string& path) {
    if (!j.is_number()) invalid(path, "must be a number");
    return j.get<double>();
}

Point json_point(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        invalid(path, "must be a point [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

ParamValue json_cell(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object() && j.size() == 2 && j.contains("value") && j.contains("unit") &&
        j["value"].is_number() && j["unit"].is_string()) {
        return Quantity{j["value"].get<double>(), j["unit"].get<std::string>()};
    }
    invalid(path, "must be a number, a string or {\"value\", \"unit\"}");
}

const json& json_array(const json& j, const std::string& path) {
    if (!j.is_array()) invalid(path, "must be a list");
    return j;
}

ParamRecord record_from_json(const std::vector<FieldSpec>& fields, const json& j,
                             const std::string& prefix);

ParamValue value_from_json(const FieldSpec& f, const json& j, const std::string& path) {
    switch (f.type) {
        case ParamType::number: return json_number(j, path);
        case ParamType::string:
        case ParamType::choice:
            if (!j.is_string()) invalid(path, "must be a string");
            return j.get<std::string>();
        case ParamType::boolean:
            if (!j.is_boolean()) invalid(path, "must be a boolean");
            return j.get<bool>();
        case ParamType::point: return json_point(j, path);
        case ParamType::number_list: {
            ParamList out;
            for (std::size_t i = 0; i < json_array(j, path).size(); ++i) {
                out.emplace_back(json_number(j[i], item_path(path, i)));
            }
            return out;
        }
        case ParamType::string_list: {
            ParamList out;
            for (std::size_t i = 0; i < json_array(j, path).size(); ++i) {
                if (!j[i].is_string()) invalid(item_path(path, i), "must be a string");
                out.emplace_back(j[i].get<std::string>());
            }
            return out;
        }
        case ParamType::point_list: {
            ParamList out;
            for (std::size_t i = 0; i < json_array(j, path).size(); ++i) {
                out.emplace_back(json_point(j[i], item_path(path, i)));
            }
            return out;
        }
        case ParamType::record: return record_from_json(f.fields, j, path + ".");
        case ParamType::record_list: {
            ParamList out;
            for (std::size_t i = 0; i < json_array(j, path).size(); ++i) {
                out.emplace_back(record_from_json(f.fields, j[i], item_path(path, i) + "."));
            }
            return out;
        }
        case ParamType::cell: return json_cell(j, path);
        case ParamType::cell_rows: {
            ParamList rows;
            for (std::size_t i = 0; i < json_array(j, path).size(); ++i) {
                const std::string row_path = item_path(path, i);
                ParamList cells;
                for (std::size_t c = 0; c < json_array(j[i], row_path).size(); ++c) {
                    cells.push_back(json_cell(j[i][c], item_path(row_path, c)));
                }
                rows.emplace_back(std::move(cells));
            }
            return rows;
        }
    }
    invalid(path, "unsupported type");
}

ParamRecord record_from_json(const std::vector<FieldSpec>& fields, const json& j,
                             const std::string& prefix) {
    if (!j.is_object()) {
        invalid(prefix.empty() ? std::string("params") : prefix.substr(0, prefix.size() - 1),
                "must be an object");
    }
    ParamRecord out;
    for (const auto& [name, value] : j.items()) {
        const FieldSpec* spec = nullptr;
        for (const auto& f : fields) {
            if (f.name == name) spec = &f;
        }
        if (spec == nullptr) invalid(prefix + name, "unknown parameter");
        if (value.is_null()) continue;
        out.emplace(name, value_from_json(*spec, value, prefix + name));
    }
    return out;
}

json bound_to_json(const Bound& b) { return {{"value", b.value}, {"exclusive", b.exclusive}}; }

json field_to_json(const FieldSpec& f) {
    json j = {{"name", f.name}, {"type", to_string(f.type)}, {"required", f.required}};
    if (!f.unit.empty()) j["unit"] = f.unit;
    if (f.min) j["min"] = bound_to_json(*f.min);
    if (f.max) j["max"] = bound_to_json(*f.max);
    if (f.integer) j["integer"] = true;
    if (f.min_items > 0) j["min_items"] = f.min_items;
    if (!f.choices.empty()) j["choices"] = f.choices;
    if (f.default_value) j["default"] = to_json(*f.default_value);
    if (!f.fields.empty()) {
        j["fields"] = json::array();
        for (const auto& sub : f.fields) j["fields"].push_back(field_to_json(sub));
    }
    return j;
}

}  // namespace

const ParamSchema& schema(Kind kind) {
    static const std::array<ParamSchema, 4> schemas = {make_pipeline_schema(), make_grid_schema(),
                                                       make_lightning_schema(),
                                                       make_table_schema()};
    return schemas[static_cast<std::size_t>(kind)];
}

ParamRecord normalize_params(Kind kind, const ParamRecord& params) {
    return normalize_record(schema(kind).fields, params, "");
}

json to_json(const ParamValue& value) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Quantity>) {
                return {{"value", v.value}, {"unit", v.unit}};
            } else if constexpr (std::is_same_v<T, Point>) {
                return json::array({v.x, v.y});
            } else if constexpr (std::is_same_v<T, ParamList>) {
                json out = json::array();
                for (const auto& item : v) out.push_back(to_json(item));
                return out;
            } else if constexpr (std::is_same_v<T, ParamRecord>) {
                return params_to_json(v);
            } else {
                return v;
            }
        },
        value.storage());
}

json params_to_json(const ParamRecord& params) {
    json out = json::object();
    for (const auto& [name, value] : params) out[name] = to_json(value);
    return out;
}

ParamRecord params_from_json(Kind kind, const json& j) {
    return normalize_params(kind, record_from_json(schema(kind).fields, j, ""));
}

json schema_to_json(const ParamSchema& s) {
    json fields = json::array();
    for (const auto& f : s.fields) fields.push_back(field_to_json(f));
    return {{"kind", to_string(s.kind)}, {"fields", fields}};
}

namespace {

const ParamValue& lookup(const ParamRecord& r, std::string_view name) {
    auto it = r.find(name);
    if (it == r.end()) invalid(std::string(name), "is required");
    return it->second;
}

template <class T>
const T& typed(const ParamRecord& r, std::string_view name, const char* what) {
    const ParamValue& v = lookup(r, name);
    if (!v.is<T>()) invalid(std::string(name), std::string("must be ") + what);
    return v.get<T>();
}

}  // namespace

double param_number(const ParamRecord& r, std::string_view name) {
    return typed<double>(r, name, "a number");
}
const std::string& param_string(const ParamRecord& r, std::string_view name) {
    return typed<std::string>(r, name, "a string");
}
bool param_bool(const ParamRecord& r, std::string_view name) {
    return typed<bool>(r, name, "a boolean");
}
Point param_point(const ParamRecord& r, std::string_view name) {
    return typed<Point>(r, name, "a point");
}
const ParamList& param_list(const ParamRecord& r, std::string_view name) {
    return typed<ParamList>(r, name, "a list");
}
const ParamRecord* param_record(const ParamRecord& r, std::string_view name) {
    auto it = r.find(name);
    if (it == r.end()) return nullptr;
    if (!it->second.is<ParamRecord>()) invalid(std::string(name), "must be a record");
    return &it->second.get<ParamRecord>();
}
bool has_param(const ParamRecord& r, std::string_view name) { return r.find(name) != r.end(); }

}  // namespace modulecad
