#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "modulecad/drawing.hpp"

namespace modulecad {

inline constexpr std::string_view kDrawingFormat = "modulecad-drawing";
inline constexpr int kDrawingVersion = 1;

struct LoadOptions {
    /// Regenerate modules whose stored geometry disagrees with their params
    /// instead of failing with a consistency error.
    bool repair = false;
};

nlohmann::json element_to_json(const Element& e);
nlohmann::json module_to_json(const Module& m);
nlohmann::json drawing_to_json(const Drawing& d);

/// Throws file_format (message starts with the JSON location), version or
/// consistency.
Element element_from_json(const nlohmann::json& j, const std::string& location);
Drawing drawing_from_json(const nlohmann::json& j, LoadOptions options = {});

std::string serialize_drawing(const Drawing& d);
Drawing parse_drawing(std::string_view text, LoadOptions options = {});

void save_drawing(const Drawing& d, const std::filesystem::path& path);
Drawing load_drawing(const std::filesystem::path& path, LoadOptions options = {});

std::string read_file(const std::filesystem::path& path);
/// Writes a sibling temporary file and renames it over `path`, so readers
/// see either the old or the new content. Throws io.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace modulecad
