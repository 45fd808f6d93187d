#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "modulecad/drawing.hpp"

namespace modulecad {

inline constexpr std::string_view kLibraryFormat = "modulecad-protolib";
inline constexpr int kLibraryVersion = 1;

/// A named parameter set. Never carries geometry or placement.
struct Prototype {
    std::string name;
    Kind kind = Kind::pipeline;
    ParamRecord params;
    friend bool operator==(const Prototype&, const Prototype&) = default;
};

struct Library {
    std::filesystem::path path;
    std::vector<Prototype> prototypes;

    /// Throws unknown_prototype.
    const Prototype& find(std::string_view name) const;
    bool contains(std::string_view name) const;
};

/// Throws io when the file is missing, file_format for malformed content or
/// an unknown kind, invalid_params naming the entry. An empty file is an
/// empty library.
Library load_library(const std::filesystem::path& path);
/// Like load_library, but a missing file yields an empty library.
Library open_library(const std::filesystem::path& path);

std::string serialize_library(const Library& lib);

/// Appends {name, kind, params} of `m` and rewrites the file atomically.
/// `lib` is unchanged when anything fails. Throws duplicate_name unless
/// `overwrite`, invalid_params for an empty name, io.
void save_prototype(Library& lib, const std::string& name, const Module& m, bool overwrite = false);

/// create_module followed by move_module to `at`.
Id instantiate(Drawing& d, const Prototype& proto, Point at, Id layer);

/// Generator output at identity placement.
std::vector<Shape> preview(const Prototype& proto);
/// A scratch drawing holding only the prototype's module, for rendering.
Drawing preview_drawing(const Prototype& proto);

}  // namespace modulecad
