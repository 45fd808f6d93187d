#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <shared_mutex>
#include <string>

#include "json.hpp"
#include "modulecad/document_io.hpp"
#include "modulecad/drawing.hpp"
#include "modulecad/error.hpp"
#include "modulecad/prototype_library.hpp"
#include "modulecad/spec.hpp"
#include "modulecad/svg_export.hpp"

namespace modulecad {

/// Transport-neutral error: status in {400, 404, 409, 500}.
struct ApiError {
    int status = 500;
    std::string code;
    std::string message;
};

ApiError to_api_error(const Error& e);
nlohmann::json to_json(const ApiError& e);

/// 0 success, 2 invalid params or usage, 3 not found, 4 file format,
/// 1 anything else.
int exit_code_for(ErrorCode code);

nlohmann::json bbox_json(const BBox& b);
nlohmann::json module_summary_json(const Module& m);
nlohmann::json spec_json(const std::vector<SpecItem>& items);

/// The document operations shared by the CLI and the HTTP API.
///
/// Mutations run one at a time against a copy of the document; the copy is
/// written to disk and only then replaces the in-memory state, so a failed
/// operation leaves both the file and the state untouched. Readers take a
/// shared lock and see the state between mutations.
class DocumentService {
public:
    DocumentService(std::filesystem::path document, std::filesystem::path library,
                    LoadOptions load = {});

    const std::filesystem::path& document_path() const { return document_path_; }
    const std::filesystem::path& library_path() const { return library_path_; }

    /// Copy of the current document.
    Drawing snapshot() const;
    template <class Fn>
    auto read(Fn&& fn) const {
        std::shared_lock lock(mutex_);
        return fn(drawing_);
    }

    Id add_module(Kind kind, const nlohmann::json& params, std::optional<Id> layer = std::nullopt);
    void set_params(Id id, const nlohmann::json& params);
    void move_module(Id id, Point delta);
    void stretch_module(Id id, Point base, double sx, double sy);
    void delete_module(Id id);
    /// All modules when `id` is empty.
    void regenerate(std::optional<Id> id = std::nullopt);

    std::string render(const RenderOptions& options) const;
    std::optional<SnapHit> snap(Point query, double radius) const;
    std::vector<SpecItem> spec() const;
    std::vector<std::string> duplicates() const;

    Library library() const;
    void save_prototype(const std::string& name, Id module_id, bool overwrite);
    Id place_prototype(const std::string& name, Point at, std::optional<Id> layer = std::nullopt);
    std::string preview_svg(const std::string& name) const;

private:
    void mutate(const std::function<void(Drawing&)>& op);

    std::filesystem::path document_path_;
    std::filesystem::path library_path_;
    mutable std::shared_mutex mutex_;
    Drawing drawing_;
};

/// Prototype library used when none is given: "<document stem>.protolib.json"
/// beside the document.
std::filesystem::path default_library_path(const std::filesystem::path& document);

}  // namespace modulecad
