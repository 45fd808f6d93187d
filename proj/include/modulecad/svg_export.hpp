#pragma once

#include <optional>
#include <string>

#include "modulecad/drawing.hpp"

namespace modulecad {

struct RenderOptions {
    std::optional<BBox> viewport;  // cull to visible_elements and frame exactly this box
    double stroke_width = 0.5;
    std::optional<Color> background;
    double margin = 10.0;
};

/// Standalone SVG 1.1. Drawing y-up is flipped by one root group transform;
/// shapes appear in ascending element id order. Throws invalid_params for
/// non-positive stroke width or negative margin.
std::string export_svg(const Drawing& d, const RenderOptions& options = {});

/// "#rrggbb"
std::string hex_color(Color c);

}  // namespace modulecad
