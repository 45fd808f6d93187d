#include "modulecad/service.hpp"

#include <mutex>

#include "modulecad/document_io.hpp"

namespace modulecad {

using nlohmann::json;

ApiError to_api_error(const Error& e) {
    ApiError out;
    out.message = e.what();
    out.code = std::string(to_string(e.code()));
    switch (e.code()) {
        case ErrorCode::unknown_module:
        case ErrorCode::unknown_element:
        case ErrorCode::unknown_prototype: out.status = 404; break;
        case ErrorCode::duplicate_name: out.status = 409; break;
        case ErrorCode::file_format:
        case ErrorCode::version:
        case ErrorCode::consistency:
        case ErrorCode::io: out.status = 500; break;
        case ErrorCode::usage:
            out.status = 400;
            out.code = "bad_request";
            break;
        default: out.status = 400; break;
    }
    return out;
}

json to_json(const ApiError& e) {
    return {{"status", e.status}, {"code", e.code}, {"message", e.message}};
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::unknown_module:
        case ErrorCode::unknown_element:
        case ErrorCode::unknown_prototype: return 3;
        case ErrorCode::file_format:
        case ErrorCode::version:
        case ErrorCode::consistency: return 4;
        case ErrorCode::io:
        case ErrorCode::duplicate_name: return 1;
        default: return 2;
    }
}

json bbox_json(const BBox& b) {
    return {{"min", json::array({b.min.x, b.min.y})}, {"max", json::array({b.max.x, b.max.y})}};
}

json module_summary_json(const Module& m) {
    return {{"id", m.id},
            {"kind", to_string(m.kind)},
            {"bbox", bbox_json(m.extent())},
            {"position", m.position()}};
}

json spec_json(const std::vector<SpecItem>& items) {
    json out = json::array();
    for (const SpecItem& i : items) {
        out.push_back({{"position", i.position}, {"name", i.name}, {"unit", i.unit}, {"qty", i.qty}});
    }
    return out;
}

std::filesystem::path default_library_path(const std::filesystem::path& document) {
    std::filesystem::path p = document.parent_path();
    return p / (document.stem().string() + ".protolib.json");
}

DocumentService::DocumentService(std::filesystem::path document, std::filesystem::path library,
                                 LoadOptions load)
    : document_path_(std::move(document)),
      library_path_(std::move(library)),
      drawing_(load_drawing(document_path_, load)) {}

Drawing DocumentService::snapshot() const {
    std::shared_lock lock(mutex_);
    return drawing_;
}

void DocumentService::mutate(const std::function<void(Drawing&)>& op) {
    std::unique_lock lock(mutex_);
    Drawing next = drawing_;
    op(next);
    save_drawing(next, document_path_);
    drawing_ = std::move(next);
}

Id DocumentService::add_module(Kind kind, const json& params, std::optional<Id> layer) {
    const ParamRecord record = params_from_json(kind, params);
    Id id = 0;
    mutate([&](Drawing& d) { id = d.create_module(kind, record, layer.value_or(d.default_layer())); });
    return id;
}

void DocumentService::set_params(Id id, const json& params) {
    mutate([&](Drawing& d) { d.set_params(id, params_from_json(d.module(id).kind, params)); });
}

void DocumentService::move_module(Id id, Point delta) {
    mutate([&](Drawing& d) { d.move_module(id, delta); });
}

void DocumentService::stretch_module(Id id, Point base, double sx, double sy) {
    mutate([&](Drawing& d) { d.stretch_module(id, base, sx, sy); });
}

void DocumentService::delete_module(Id id) {
    mutate([&](Drawing& d) { d.delete_module(id); });
}

void DocumentService::regenerate(std::optional<Id> id) {
    mutate([&](Drawing& d) {
        if (id) {
            d.regenerate(*id);
        } else {
            d.regenerate_all();
        }
    });
}

std::string DocumentService::render(const RenderOptions& options) const {
    std::shared_lock lock(mutex_);
    return export_svg(drawing_, options);
}

std::optional<SnapHit> DocumentService::snap(Point query, double radius) const {
    std::shared_lock lock(mutex_);
    return drawing_.snap(query, radius);
}

std::vector<SpecItem> DocumentService::spec() const {
    std::shared_lock lock(mutex_);
    return collect_spec(drawing_);
}

std::vector<std::string> DocumentService::duplicates() const {
    std::shared_lock lock(mutex_);
    return check_duplicate_positions(drawing_);
}

Library DocumentService::library() const {
    std::shared_lock lock(mutex_);
    return open_library(library_path_);
}

void DocumentService::save_prototype(const std::string& name, Id module_id, bool overwrite) {
    std::unique_lock lock(mutex_);
    Library lib = open_library(library_path_);
    modulecad::save_prototype(lib, name, drawing_.module(module_id), overwrite);
}

Id DocumentService::place_prototype(const std::string& name, Point at, std::optional<Id> layer) {
    Id id = 0;
    mutate([&](Drawing& d) {
        const Library lib = open_library(library_path_);
        id = instantiate(d, lib.find(name), at, layer.value_or(d.default_layer()));
    });
    return id;
}

std::string DocumentService::preview_svg(const std::string& name) const {
    const Library lib = library();
    return export_svg(preview_drawing(lib.find(name)));
}

}  // namespace modulecad
