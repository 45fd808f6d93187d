#include "modulecad/document_io.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>

#include "modulecad/error.hpp"

#include <unistd.h>

namespace modulecad {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& location, const std::string& message) {
    fail(ErrorCode::file_format, location + ": " + message);
}

const json& member(const json& obj, std::string_view key, const std::string& location) {
    auto it = obj.find(key);
    if (it == obj.end()) bad(location, "missing key \"" + std::string(key) + "\"");
    return *it;
}

void only_keys(const json& obj, std::initializer_list<std::string_view> allowed,
               const std::string& location) {
    if (!obj.is_object()) bad(location, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || a == key;
        if (!ok) bad(location, "unknown key \"" + key + "\"");
    }
}

double number_at(const json& obj, std::string_view key, const std::string& location) {
    const json& v = member(obj, key, location);
    if (!v.is_number()) bad(location + "." + std::string(key), "expected a number");
    return v.get<double>();
}

Id id_at(const json& obj, std::string_view key, const std::string& location) {
    const json& v = member(obj, key, location);
    if (!v.is_number_integer()) bad(location + "." + std::string(key), "expected an integer");
    return v.get<Id>();
}

std::string string_at(const json& obj, std::string_view key, const std::string& location) {
    const json& v = member(obj, key, location);
    if (!v.is_string()) bad(location + "." + std::string(key), "expected a string");
    return v.get<std::string>();
}

Point point_at(const json& obj, std::string_view key, const std::string& location) {
    const json& v = member(obj, key, location);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        bad(location + "." + std::string(key), "expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

json point_json(Point p) { return json::array({p.x, p.y}); }

json primitive_json(const Primitive& p) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Line>) {
                return {{"type", "line"}, {"a", point_json(v.a)}, {"b", point_json(v.b)}};
            } else if constexpr (std::is_same_v<T, Polyline>) {
                json pts = json::array();
                for (const Point& q : v.vertices) pts.push_back(point_json(q));
                return {{"type", "polyline"}, {"vertices", pts}};
            } else if constexpr (std::is_same_v<T, Circle>) {
                return {{"type", "circle"}, {"center", point_json(v.center)}, {"radius", v.radius}};
            } else if constexpr (std::is_same_v<T, Arc>) {
                return {{"type", "arc"},
                        {"center", point_json(v.center)},
                        {"radius", v.radius},
                        {"start_angle", v.start_angle},
                        {"end_angle", v.end_angle}};
            } else {
                return {{"type", "text"},
                        {"anchor", point_json(v.anchor)},
                        {"height", v.height},
                        {"content", v.content}};
            }
        },
        p);
}

Primitive primitive_from_json(const json& j, const std::string& loc) {
    if (!j.is_object()) bad(loc, "expected an object");
    const std::string type = string_at(j, "type", loc);
    if (type == "line") {
        only_keys(j, {"type", "a", "b"}, loc);
        return Line{point_at(j, "a", loc), point_at(j, "b", loc)};
    }
    if (type == "polyline") {
        only_keys(j, {"type", "vertices"}, loc);
        const json& vs = member(j, "vertices", loc);
        if (!vs.is_array()) bad(loc + ".vertices", "expected an array");
        Polyline out;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const std::string at = loc + ".vertices[" + std::to_string(i) + "]";
            if (!vs[i].is_array() || vs[i].size() != 2 || !vs[i][0].is_number() ||
                !vs[i][1].is_number()) {
                bad(at, "expected [x, y]");
            }
            out.vertices.push_back({vs[i][0].get<double>(), vs[i][1].get<double>()});
        }
        return out;
    }
    if (type == "circle") {
        only_keys(j, {"type", "center", "radius"}, loc);
        return Circle{point_at(j, "center", loc), number_at(j, "radius", loc)};
    }
    if (type == "arc") {
        only_keys(j, {"type", "center", "radius", "start_angle", "end_angle"}, loc);
        return Arc{point_at(j, "center", loc), number_at(j, "radius", loc),
                   number_at(j, "start_angle", loc), number_at(j, "end_angle", loc)};
    }
    if (type == "text") {
        only_keys(j, {"type", "anchor", "height", "content"}, loc);
        return Text{point_at(j, "anchor", loc), number_at(j, "height", loc),
                    string_at(j, "content", loc)};
    }
    bad(loc + ".type", "unknown shape type \"" + type + "\"");
}

json style_json(const LineStyle& s) {
    return {{"linetype", to_string(s.linetype)},
            {"color", json::array({s.color.r, s.color.g, s.color.b})}};
}

LineStyle style_from_json(const json& j, const std::string& loc) {
    only_keys(j, {"linetype", "color"}, loc);
    LineStyle s;
    const std::string lt = string_at(j, "linetype", loc);
    if (lt == "solid") {
        s.linetype = Linetype::solid;
    } else if (lt == "dash") {
        s.linetype = Linetype::dash;
    } else if (lt == "dash_dot") {
        s.linetype = Linetype::dash_dot;
    } else {
        bad(loc + ".linetype", "unknown linetype \"" + lt + "\"");
    }
    const json& c = member(j, "color", loc);
    if (!c.is_array() || c.size() != 3) bad(loc + ".color", "expected [r, g, b]");
    std::uint8_t rgb[3];
    for (int i = 0; i < 3; ++i) {
        if (!c[i].is_number_integer() || c[i].get<int>() < 0 || c[i].get<int>() > 255) {
            bad(loc + ".color", "components must be integers in 0..255");
        }
        rgb[i] = static_cast<std::uint8_t>(c[i].get<int>());
    }
    s.color = {rgb[0], rgb[1], rgb[2]};
    return s;
}

// Errors raised by the drawing model while loading carry no JSON location;
// prefix one.
template <class Fn>
auto at_location(const std::string& loc, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::file_format) throw;
        const ErrorCode code = e.code() == ErrorCode::invalid_geometry ? ErrorCode::file_format
                                                                         : e.code();
        throw Error(code, loc + ": " + e.what());
    }
}

}  // namespace

json element_to_json(const Element& e) {
    return {{"id", e.id}, {"layer", e.layer}, {"style", style_json(e.style)},
            {"shape", primitive_json(e.primitive)}};
}

Element element_from_json(const json& j, const std::string& loc) {
    only_keys(j, {"id", "layer", "style", "shape"}, loc);
    Element e;
    e.id = id_at(j, "id", loc);
    e.layer = id_at(j, "layer", loc);
    e.style = style_from_json(member(j, "style", loc), loc + ".style");
    e.primitive = primitive_from_json(member(j, "shape", loc), loc + ".shape");
    at_location(loc + ".shape", [&] {
        validate(e.primitive);
        return 0;
    });
    return e;
}

json module_to_json(const Module& m) {
    json elements = json::array();
    for (const Element& e : m.elements) elements.push_back(element_to_json(e));
    return {{"id", m.id},
            {"kind", to_string(m.kind)},
            {"layer", m.layer},
            {"placement",
             {{"tx", m.placement.tx},
              {"ty", m.placement.ty},
              {"rot", m.placement.rot},
              {"sx", m.placement.sx},
              {"sy", m.placement.sy}}},
            {"params", params_to_json(m.params)},
            {"elements", elements}};
}

json drawing_to_json(const Drawing& d) {
    json layers = json::array();
    for (const Layer& l : d.layers()) layers.push_back({{"id", l.id}, {"name", l.name}});
    json elements = json::array();
    for (const auto& [id, e] : d.free_elements()) elements.push_back(element_to_json(e));
    json modules = json::array();
    for (const auto& [id, m] : d.modules()) modules.push_back(module_to_json(m));
    return {{"format", kDrawingFormat}, {"version", kDrawingVersion}, {"zone_size", d.zone_size()},
            {"layers", layers},         {"elements", elements},       {"modules", modules}};
}

Drawing drawing_from_json(const json& j, LoadOptions options) {
    if (!j.is_object()) bad("$", "expected a JSON object");
    const json& format = member(j, "format", "$");
    if (!format.is_string() || format.get<std::string>() != kDrawingFormat) {
        bad("$.format", "expected \"" + std::string(kDrawingFormat) + "\"");
    }
    const json& version = member(j, "version", "$");
    if (!version.is_number()) bad("$.version", "expected a number");
    if (version.get<double>() != kDrawingVersion) {
        fail(ErrorCode::version, "unsupported document version " + version.dump());
    }
    only_keys(j, {"format", "version", "zone_size", "layers", "elements", "modules"}, "$");

    const double zone_size = number_at(j, "zone_size", "$");
    if (!(zone_size > 0.0)) bad("$.zone_size", "must be > 0");

    const json& layers_json = member(j, "layers", "$");
    if (!layers_json.is_array()) bad("$.layers", "expected an array");
    std::vector<Layer> layers;
    for (std::size_t i = 0; i < layers_json.size(); ++i) {
        const std::string loc = "$.layers[" + std::to_string(i) + "]";
        only_keys(layers_json[i], {"id", "name"}, loc);
        layers.push_back({id_at(layers_json[i], "id", loc), string_at(layers_json[i], "name", loc)});
    }
    Drawing d = at_location("$.layers", [&] { return Drawing(zone_size, layers); });

    const json& elements = member(j, "elements", "$");
    if (!elements.is_array()) bad("$.elements", "expected an array");
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const std::string loc = "$.elements[" + std::to_string(i) + "]";
        const Element e = element_from_json(elements[i], loc);
        at_location(loc, [&] {
            d.insert_stored_element(e);
            return 0;
        });
    }

    const json& modules = member(j, "modules", "$");
    if (!modules.is_array()) bad("$.modules", "expected an array");
    for (std::size_t i = 0; i < modules.size(); ++i) {
        const std::string loc = "$.modules[" + std::to_string(i) + "]";
        const json& mj = modules[i];
        only_keys(mj, {"id", "kind", "layer", "placement", "params", "elements"}, loc);
        Module m;
        m.id = id_at(mj, "id", loc);
        const std::string kind = string_at(mj, "kind", loc);
        try {
            m.kind = parse_kind(kind);
        } catch (const Error&) {
            bad(loc + ".kind", "unknown module kind \"" + kind + "\"");
        }
        m.layer = id_at(mj, "layer", loc);
        const json& pj = member(mj, "placement", loc);
        const std::string ploc = loc + ".placement";
        only_keys(pj, {"tx", "ty", "rot", "sx", "sy"}, ploc);
        m.placement = {number_at(pj, "tx", ploc), number_at(pj, "ty", ploc), number_at(pj, "rot", ploc),
                       number_at(pj, "sx", ploc), number_at(pj, "sy", ploc)};
        if (!(m.placement.sx > 0.0) || !(m.placement.sy > 0.0)) bad(ploc, "scales must be > 0");
        try {
            m.params = params_from_json(m.kind, member(mj, "params", loc));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::file_format) throw;
            bad(loc + ".params", e.what());
        }
        const json& ej = member(mj, "elements", loc);
        if (!ej.is_array()) bad(loc + ".elements", "expected an array");
        for (std::size_t k = 0; k < ej.size(); ++k) {
            m.elements.push_back(element_from_json(ej[k], loc + ".elements[" + std::to_string(k) + "]"));
        }
        const Id id = m.id;
        at_location(loc, [&] {
            d.insert_stored_module(std::move(m));
            return 0;
        });
        if (!d.verify_module(id)) {
            if (!options.repair) {
                fail(ErrorCode::consistency, loc + ": stored geometry of module " + std::to_string(id) +
                                                 " does not match its parameters");
            }
            at_location(loc, [&] {
                d.regenerate(id);
                return 0;
            });
        }
    }
    return d;
}

std::string serialize_drawing(const Drawing& d) { return drawing_to_json(d).dump(2) + "\n"; }

Drawing parse_drawing(std::string_view text, LoadOptions options) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::file_format, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return drawing_from_json(j, options);
}

void save_drawing(const Drawing& d, const std::filesystem::path& path) {
    write_file_atomically(path, serialize_drawing(d));
}

Drawing load_drawing(const std::filesystem::path& path, LoadOptions options) {
    return parse_drawing(read_file(path), options);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    static std::atomic<unsigned> counter{0};
    tmp += ".tmp" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::io, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            fail(ErrorCode::io, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        fail(ErrorCode::io, "cannot replace " + path.string() + ": " + ec.message());
    }
}

}  // namespace modulecad
