#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "modulecad/geometry.hpp"

namespace modulecad {

enum class Kind { pipeline, grid, lightning, table };

inline constexpr std::array<Kind, 4> kAllKinds = {Kind::pipeline, Kind::grid, Kind::lightning,
                                                  Kind::table};

std::string_view to_string(Kind kind) noexcept;
/// Throws unknown_kind.
Kind parse_kind(std::string_view name);

/// A number with an explicit unit tag. Plain numbers carry the unit implied
/// by their schema field.
struct Quantity {
    double value = 0.0;
    std::string unit;
    friend bool operator==(const Quantity&, const Quantity&) = default;
};

class ParamValue {
public:
    using List = std::vector<ParamValue>;
    using Record = std::map<std::string, ParamValue, std::less<>>;
    using Storage = std::variant<double, Quantity, std::string, bool, Point, List, Record>;

    ParamValue() = default;
    ParamValue(double v) : value_(v) {}
    ParamValue(int v) : value_(static_cast<double>(v)) {}
    ParamValue(Quantity v) : value_(std::move(v)) {}
    ParamValue(std::string v) : value_(std::move(v)) {}
    ParamValue(const char* v) : value_(std::string(v)) {}
    ParamValue(bool v) : value_(v) {}
    ParamValue(Point v) : value_(v) {}
    ParamValue(List v) : value_(std::move(v)) {}
    ParamValue(Record v) : value_(std::move(v)) {}

    template <class T>
    bool is() const {
        return std::holds_alternative<T>(value_);
    }
    template <class T>
    const T& get() const {
        return std::get<T>(value_);
    }
    template <class T>
    T& get() {
        return std::get<T>(value_);
    }
    const Storage& storage() const { return value_; }

    friend bool operator==(const ParamValue&, const ParamValue&) = default;

private:
    Storage value_;
};

using ParamList = ParamValue::List;
using ParamRecord = ParamValue::Record;

enum class ParamType {
    number,
    string,
    boolean,
    point,
    choice,
    number_list,
    string_list,
    point_list,
    record,
    record_list,
    cell,       // number, Quantity or string
    cell_rows,  // list of lists of cells
};

std::string_view to_string(ParamType type) noexcept;

struct Bound {
    double value;
    bool exclusive;
};

struct FieldSpec {
    std::string name;
    ParamType type = ParamType::number;
    std::string unit;  // implied unit of plain numbers, display only
    bool required = false;
    std::optional<Bound> min;  // numbers, and each item of number lists
    std::optional<Bound> max;
    bool integer = false;
    std::size_t min_items = 0;
    std::vector<std::string> choices;
    std::optional<ParamValue> default_value;
    std::vector<FieldSpec> fields;  // record and record_list members
};

struct ParamSchema {
    Kind kind;
    std::vector<FieldSpec> fields;
};

const ParamSchema& schema(Kind kind);

/// Checks `params` against the kind's schema and fills defaults of absent
/// optional fields. Throws invalid_params naming the offending field path.
ParamRecord normalize_params(Kind kind, const ParamRecord& params);

/// Canonical JSON: numbers as numbers, Quantity as {"value","unit"}, Point as
/// [x,y], lists as arrays, records as objects.
nlohmann::json to_json(const ParamValue& value);
nlohmann::json params_to_json(const ParamRecord& params);
/// Schema-directed parse followed by normalize_params.
ParamRecord params_from_json(Kind kind, const nlohmann::json& j);
nlohmann::json schema_to_json(const ParamSchema& s);

// Typed access for generators. Missing or mistyped fields throw
// invalid_params.
double param_number(const ParamRecord& r, std::string_view name);
const std::string& param_string(const ParamRecord& r, std::string_view name);
bool param_bool(const ParamRecord& r, std::string_view name);
Point param_point(const ParamRecord& r, std::string_view name);
const ParamList& param_list(const ParamRecord& r, std::string_view name);
const ParamRecord* param_record(const ParamRecord& r, std::string_view name);
bool has_param(const ParamRecord& r, std::string_view name);

}  // namespace modulecad
