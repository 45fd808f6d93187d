#include "modulecad/svg_export.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "modulecad/error.hpp"
#include "modulecad/number_format.hpp"

namespace modulecad {

namespace {

std::string num(double v) { return format_shortest(v); }

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string stroke_attrs(const LineStyle& s) {
    std::string out = " stroke=\"" + hex_color(s.color) + "\"";
    if (s.linetype == Linetype::dash) out += " stroke-dasharray=\"8 4\"";
    if (s.linetype == Linetype::dash_dot) out += " stroke-dasharray=\"12 3 2 3\"";
    return out;
}

std::string points_attr(const std::vector<Point>& pts) {
    std::string out;
    for (const Point& p : pts) {
        if (!out.empty()) out += ' ';
        out += num(p.x) + "," + num(p.y);
    }
    return out;
}

std::string arc_path(const Arc& a) {
    const double sweep = a.sweep();
    const Point start = a.start_point();
    const std::string r = num(a.radius) + "," + num(a.radius);
    if (sweep >= 2.0 * std::numbers::pi) {
        // A single elliptical-arc command cannot close on itself.
        const Point mid{a.center.x + a.radius * std::cos(a.start_angle + std::numbers::pi),
                        a.center.y + a.radius * std::sin(a.start_angle + std::numbers::pi)};
        return "M " + num(start.x) + "," + num(start.y) + " A " + r + " 0 0,1 " + num(mid.x) + "," +
               num(mid.y) + " A " + r + " 0 0,1 " + num(start.x) + "," + num(start.y);
    }
    const Point end = a.end_point();
    const char* large = sweep > std::numbers::pi ? "1" : "0";
    return "M " + num(start.x) + "," + num(start.y) + " A " + r + " 0 " + large + ",1 " +
           num(end.x) + "," + num(end.y);
}

std::string shape_node(const Element& e) {
    const std::string id = "id=\"e" + std::to_string(e.id) + "\"";
    return std::visit(
        [&](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Line>) {
                return "<polyline " + id + " points=\"" + points_attr({v.a, v.b}) + "\"" +
                       stroke_attrs(e.style) + "/>";
            } else if constexpr (std::is_same_v<T, Polyline>) {
                return "<polyline " + id + " points=\"" + points_attr(v.vertices) + "\"" +
                       stroke_attrs(e.style) + "/>";
            } else if constexpr (std::is_same_v<T, Circle>) {
                return "<circle " + id + " cx=\"" + num(v.center.x) + "\" cy=\"" + num(v.center.y) +
                       "\" r=\"" + num(v.radius) + "\"" + stroke_attrs(e.style) + "/>";
            } else if constexpr (std::is_same_v<T, Arc>) {
                return "<path " + id + " d=\"" + arc_path(v) + "\"" + stroke_attrs(e.style) + "/>";
            } else {
                // Counter-flipped so glyphs stay upright.
                return "<text " + id + " x=\"" + num(v.anchor.x) + "\" y=\"" + num(-v.anchor.y) +
                       "\" transform=\"scale(1,-1)\" font-family=\"sans-serif\" font-size=\"" +
                       num(v.height) + "\" fill=\"" + hex_color(e.style.color) +
                       "\" stroke=\"none\">" + xml_escape(v.content) + "</text>";
            }
        },
        e.primitive);
}

}  // namespace

std::string hex_color(Color c) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out = "#";
    for (std::uint8_t v : {c.r, c.g, c.b}) {
        out += kDigits[v >> 4];
        out += kDigits[v & 0xF];
    }
    return out;
}

std::string export_svg(const Drawing& d, const RenderOptions& options) {
    if (!(options.stroke_width > 0.0)) fail(ErrorCode::invalid_params, "stroke_width: must be > 0");
    if (!(options.margin >= 0.0)) fail(ErrorCode::invalid_params, "margin: must be >= 0");

    std::vector<const Element*> elements;
    if (options.viewport) {
        for (Id id : d.visible_elements({*options.viewport})) elements.push_back(d.find_element(id));
    } else {
        for (const auto& [id, e] : d.free_elements()) elements.push_back(&e);
        for (const auto& [id, m] : d.modules()) {
            for (const Element& e : m.elements) elements.push_back(&e);
        }
        std::sort(elements.begin(), elements.end(),
                  [](const Element* a, const Element* b) { return a->id < b->id; });
    }

    BBox view{{0.0, 0.0}, {100.0, 100.0}};
    if (options.viewport) {
        view = *options.viewport;
    } else if (!elements.empty()) {
        view = bbox(elements.front()->primitive);
        for (const Element* e : elements) view = view.united(bbox(e->primitive));
        view = view.inflated(options.margin);
    }

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(view.width()) +
           "mm\" height=\"" + num(view.height()) + "mm\" viewBox=\"" + num(view.min.x) + " " +
           num(-view.max.y) + " " + num(view.width()) + " " + num(view.height()) + "\"";
    if (options.background) out += " style=\"background-color:" + hex_color(*options.background) + "\"";
    out += ">\n";
    out += "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" + num(options.stroke_width) +
           "\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
    for (const Element* e : elements) out += shape_node(*e) + "\n";
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace modulecad
