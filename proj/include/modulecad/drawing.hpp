#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "modulecad/generators.hpp"
#include "modulecad/geometry.hpp"
#include "modulecad/params.hpp"

namespace modulecad {

/// Element and module ids share one id space per drawing.
using Id = std::int64_t;

struct Layer {
    Id id = 0;
    std::string name;
    friend bool operator==(const Layer&, const Layer&) = default;
};

struct Element {
    Id id = 0;
    Id layer = 0;
    LineStyle style;
    Primitive primitive;
    friend bool operator==(const Element&, const Element&) = default;
};

/// Grid cell of drawing space: (floor(x / zone_size), floor(y / zone_size)).
struct ZoneKey {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend auto operator<=>(const ZoneKey&, const ZoneKey&) = default;
};

struct ZoneKeyHash {
    std::size_t operator()(const ZoneKey& k) const noexcept {
        const auto h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ull;
        return static_cast<std::size_t>(h ^ (static_cast<std::uint64_t>(k.y) + (h << 6) + (h >> 2)));
    }
};

/// Extents of a module's elements within one zone. `slots` index into
/// Module::elements, parallel to `element_ids`.
struct ZoneExtent {
    BBox bbox;
    std::vector<Id> element_ids;
    std::vector<std::size_t> slots;
};

/// Co-stores the parameter record and the geometry generated from it.
struct Module {
    Id id = 0;
    Kind kind = Kind::pipeline;
    ParamRecord params;
    Transform placement;
    Id layer = 0;
    std::vector<Element> elements;
    std::vector<BBox> element_bboxes;  // parallel to elements
    std::map<ZoneKey, ZoneExtent> zone_extents;

    BBox extent() const;
    /// Position designation, empty for kinds without one.
    std::string position() const;
};

struct Viewport {
    BBox rect;
};

inline constexpr double kDefaultZoneSize = 256.0;

class Drawing {
public:
    /// Starts with a single layer {0, "0"}.
    explicit Drawing(double zone_size = kDefaultZoneSize);
    /// Throws consistency when `layers` is empty or has duplicate ids.
    Drawing(double zone_size, std::vector<Layer> layers);

    double zone_size() const { return zone_size_; }
    const std::vector<Layer>& layers() const { return layers_; }
    bool has_layer(Id layer) const;
    Id default_layer() const { return layers_.front().id; }
    Id add_layer(const std::string& name);

    const std::map<Id, Element>& free_elements() const { return free_; }
    const std::map<Id, Module>& modules() const { return modules_; }
    /// Throws unknown_module.
    const Module& module(Id id) const;
    const Element* find_element(Id id) const;
    std::size_t element_count() const { return owner_.size(); }
    Id next_id() const { return next_id_; }

    Id add_element(Id layer, const LineStyle& style, const Primitive& primitive);
    void remove_element(Id id);

    Id create_module(Kind kind, const ParamRecord& params, Id layer);
    /// Fresh element ids; bit-identical geometry for equal inputs.
    void regenerate(Id id);
    void regenerate_all();
    void set_params(Id id, const ParamRecord& params);
    void move_module(Id id, Point delta);
    /// Scale about `base`; circles and arcs need sx == sy.
    void stretch_module(Id id, Point base, double sx, double sy);
    void delete_module(Id id);

    /// Ids of elements whose bbox meets the viewport, ascending.
    std::vector<Id> visible_elements(const Viewport& viewport) const;
    std::optional<SnapHit> snap(Point query, double radius) const;
    /// Stored geometry equals generator output under the placement within
    /// 1e-9 mm (ids ignored).
    bool verify_module(Id id) const;

    /// Inserts stored geometry as-is, replacing a module with the same id.
    /// Used by document loading; verify_module tells whether it is consistent.
    void insert_stored_module(Module module);
    void insert_stored_element(const Element& element);

    ZoneKey zone_of(Point p) const;

    /// Zone map as seen by the index: zone -> ids registered there.
    std::map<ZoneKey, std::vector<Id>> zone_contents() const;

    /// Documents compare by content; the zone index and next_id are derived.
    friend bool operator==(const Drawing& a, const Drawing& b);

private:
    struct FreeEntry {
        Id id;
        BBox bbox;
    };
    struct Bucket {
        std::vector<FreeEntry> free;
        std::vector<Id> modules;
    };

    Module build_module(Id id, Kind kind, ParamRecord params, const Transform& placement, Id layer,
                        const std::vector<Id>* reuse_ids, Id& next_id) const;
    void index_module_geometry(Module& m) const;
    void commit_module(Module m, Id next_id);
    void unregister_module(const Module& m);
    void register_module(const Module& m);
    template <class Fn>
    void for_each_zone_in(const BBox& rect, Fn&& fn) const;
    void check_id_free(Id id, Id replacing_module) const;

    double zone_size_;
    std::vector<Layer> layers_;
    std::map<Id, Element> free_;
    std::map<Id, Module> modules_;
    std::unordered_map<ZoneKey, Bucket, ZoneKeyHash> zones_;
    std::unordered_map<Id, Id> owner_;  // element id -> module id, 0 for free elements
    Id next_id_ = 1;
};

}  // namespace modulecad
