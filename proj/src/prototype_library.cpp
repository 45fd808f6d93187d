#include "modulecad/prototype_library.hpp"

#include <algorithm>
#include <cctype>

#include "modulecad/document_io.hpp"
#include "modulecad/error.hpp"

namespace modulecad {

using nlohmann::json;

const Prototype& Library::find(std::string_view name) const {
    for (const Prototype& p : prototypes) {
        if (p.name == name) return p;
    }
    fail(ErrorCode::unknown_prototype, "no prototype named '" + std::string(name) + "'");
}

bool Library::contains(std::string_view name) const {
    return std::any_of(prototypes.begin(), prototypes.end(),
                       [&](const Prototype& p) { return p.name == name; });
}

namespace {

[[noreturn]] void bad(const std::string& location, const std::string& message) {
    fail(ErrorCode::file_format, location + ": " + message);
}

bool blank(std::string_view text) {
    return std::all_of(text.begin(), text.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

Library parse_library(const std::filesystem::path& path, std::string_view text) {
    Library lib{path, {}};
    if (blank(text)) return lib;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::file_format, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_object()) bad("$", "expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "format" && key != "version" && key != "prototypes") {
            bad("$", "unknown key \"" + key + "\"");
        }
    }
    if (!j.contains("format") || j["format"] != kLibraryFormat) {
        bad("$.format", "expected \"" + std::string(kLibraryFormat) + "\"");
    }
    if (!j.contains("version") || !j["version"].is_number()) bad("$.version", "expected a number");
    if (j["version"].get<double>() != kLibraryVersion) {
        fail(ErrorCode::version, "unsupported library version " + j["version"].dump());
    }
    if (!j.contains("prototypes") || !j["prototypes"].is_array()) {
        bad("$.prototypes", "expected an array");
    }
    const json& entries = j["prototypes"];
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string loc = "$.prototypes[" + std::to_string(i) + "]";
        const json& e = entries[i];
        if (!e.is_object()) bad(loc, "expected an object");
        for (const auto& [key, value] : e.items()) {
            if (key != "name" && key != "kind" && key != "params") {
                bad(loc, "unknown key \"" + key + "\"");
            }
        }
        if (!e.contains("name") || !e["name"].is_string() || e["name"].get<std::string>().empty()) {
            bad(loc + ".name", "expected a nonempty string");
        }
        const std::string name = e["name"].get<std::string>();
        if (lib.contains(name)) bad(loc + ".name", "duplicate prototype name '" + name + "'");
        if (!e.contains("kind") || !e["kind"].is_string()) bad(loc + ".kind", "expected a string");
        Prototype p;
        p.name = name;
        try {
            p.kind = parse_kind(e["kind"].get<std::string>());
        } catch (const Error&) {
            bad(loc, "prototype '" + name + "' has unknown kind \"" + e["kind"].get<std::string>() + "\"");
        }
        if (!e.contains("params")) bad(loc + ".params", "missing");
        try {
            p.params = params_from_json(p.kind, e["params"]);
        } catch (const Error& err) {
            fail(ErrorCode::invalid_params, "prototype '" + name + "': " + err.what());
        }
        lib.prototypes.push_back(std::move(p));
    }
    return lib;
}

}  // namespace

Library load_library(const std::filesystem::path& path) {
    return parse_library(path, read_file(path));
}

Library open_library(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return Library{path, {}};
    return load_library(path);
}

std::string serialize_library(const Library& lib) {
    json entries = json::array();
    for (const Prototype& p : lib.prototypes) {
        entries.push_back(
            {{"name", p.name}, {"kind", to_string(p.kind)}, {"params", params_to_json(p.params)}});
    }
    const json j = {{"format", kLibraryFormat}, {"version", kLibraryVersion}, {"prototypes", entries}};
    return j.dump(2) + "\n";
}

void save_prototype(Library& lib, const std::string& name, const Module& m, bool overwrite) {
    if (name.empty()) fail(ErrorCode::invalid_params, "name: must be nonempty");
    Library next = lib;
    Prototype proto{name, m.kind, m.params};
    auto it = std::find_if(next.prototypes.begin(), next.prototypes.end(),
                           [&](const Prototype& p) { return p.name == name; });
    if (it != next.prototypes.end()) {
        if (!overwrite) {
            fail(ErrorCode::duplicate_name, "prototype '" + name + "' already exists");
        }
        *it = std::move(proto);
    } else {
        next.prototypes.push_back(std::move(proto));
    }
    write_file_atomically(next.path, serialize_library(next));
    lib = std::move(next);
}

Id instantiate(Drawing& d, const Prototype& proto, Point at, Id layer) {
    if (!is_finite(at)) fail(ErrorCode::invalid_params, "at: must be finite");
    const Id id = d.create_module(proto.kind, proto.params, layer);
    if (at != Point{0.0, 0.0}) d.move_module(id, at);
    return id;
}

std::vector<Shape> preview(const Prototype& proto) { return generate(proto.kind, proto.params); }

Drawing preview_drawing(const Prototype& proto) {
    Drawing d;
    d.create_module(proto.kind, proto.params, d.default_layer());
    return d;
}

}  // namespace modulecad
