#include "modulecad/drawing.hpp"

#include <algorithm>
#include <cmath>

#include "modulecad/error.hpp"

namespace modulecad {

BBox Module::extent() const {
    BBox box = element_bboxes.front();
    for (const BBox& b : element_bboxes) box = box.united(b);
    return box;
}

std::string Module::position() const {
    auto it = params.find("position");
    if (it == params.end() || !it->second.is<std::string>()) return {};
    return it->second.get<std::string>();
}

Drawing::Drawing(double zone_size) : zone_size_(zone_size), layers_{{0, "0"}} {
    if (!(zone_size > 0.0) || !std::isfinite(zone_size)) {
        fail(ErrorCode::invalid_params, "zone_size: must be > 0");
    }
}

Drawing::Drawing(double zone_size, std::vector<Layer> layers) : Drawing(zone_size) {
    if (layers.empty()) fail(ErrorCode::consistency, "a drawing needs at least one layer");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (layers[i].id == layers[j].id) {
                fail(ErrorCode::consistency, "duplicate layer id " + std::to_string(layers[i].id));
            }
        }
    }
    layers_ = std::move(layers);
}

bool Drawing::has_layer(Id layer) const {
    return std::any_of(layers_.begin(), layers_.end(), [&](const Layer& l) { return l.id == layer; });
}

Id Drawing::add_layer(const std::string& name) {
    Id id = 0;
    for (const Layer& l : layers_) id = std::max(id, l.id + 1);
    layers_.push_back({id, name});
    return id;
}

const Module& Drawing::module(Id id) const {
    auto it = modules_.find(id);
    if (it == modules_.end()) fail(ErrorCode::unknown_module, "no module " + std::to_string(id));
    return it->second;
}

const Element* Drawing::find_element(Id id) const {
    auto it = owner_.find(id);
    if (it == owner_.end()) return nullptr;
    if (it->second == 0) return &free_.at(id);
    for (const Element& e : modules_.at(it->second).elements) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

ZoneKey Drawing::zone_of(Point p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / zone_size_)),
            static_cast<std::int64_t>(std::floor(p.y / zone_size_))};
}

template <class Fn>
void Drawing::for_each_zone_in(const BBox& rect, Fn&& fn) const {
    const ZoneKey lo = zone_of(rect.min);
    const ZoneKey hi = zone_of(rect.max);
    const double span = (static_cast<double>(hi.x - lo.x) + 1.0) *
                        (static_cast<double>(hi.y - lo.y) + 1.0);
    if (span > static_cast<double>(zones_.size())) {
        for (const auto& [key, bucket] : zones_) {
            if (key.x >= lo.x && key.x <= hi.x && key.y >= lo.y && key.y <= hi.y) fn(key, bucket);
        }
        return;
    }
    for (std::int64_t kx = lo.x; kx <= hi.x; ++kx) {
        for (std::int64_t ky = lo.y; ky <= hi.y; ++ky) {
            const ZoneKey key{kx, ky};
            auto it = zones_.find(key);
            if (it != zones_.end()) fn(key, it->second);
        }
    }
}

void Drawing::check_id_free(Id id, Id replacing_module) const {
    if (id < 1) fail(ErrorCode::consistency, "ids must be >= 1, got " + std::to_string(id));
    auto it = owner_.find(id);
    const bool taken = (it != owner_.end() && it->second != replacing_module) ||
                       (modules_.count(id) != 0 && id != replacing_module);
    if (taken) fail(ErrorCode::consistency, "duplicate id " + std::to_string(id));
}

Id Drawing::add_element(Id layer, const LineStyle& style, const Primitive& primitive) {
    if (!has_layer(layer)) fail(ErrorCode::unknown_layer, "no layer " + std::to_string(layer));
    validate(primitive);
    const Id id = next_id_;
    insert_stored_element({id, layer, style, primitive});
    return id;
}

void Drawing::insert_stored_element(const Element& element) {
    if (!has_layer(element.layer)) {
        fail(ErrorCode::consistency, "element " + std::to_string(element.id) + " refers to missing layer " +
                                         std::to_string(element.layer));
    }
    check_id_free(element.id, -1);
    validate(element.primitive);
    const BBox box = bbox(element.primitive);
    const ZoneKey lo = zone_of(box.min);
    const ZoneKey hi = zone_of(box.max);
    for (std::int64_t kx = lo.x; kx <= hi.x; ++kx) {
        for (std::int64_t ky = lo.y; ky <= hi.y; ++ky) {
            zones_[{kx, ky}].free.push_back({element.id, box});
        }
    }
    free_.emplace(element.id, element);
    owner_.emplace(element.id, 0);
    next_id_ = std::max(next_id_, element.id + 1);
}

void Drawing::remove_element(Id id) {
    auto it = free_.find(id);
    if (it == free_.end()) fail(ErrorCode::unknown_element, "no free element " + std::to_string(id));
    const BBox box = bbox(it->second.primitive);
    const ZoneKey lo = zone_of(box.min);
    const ZoneKey hi = zone_of(box.max);
    for (std::int64_t kx = lo.x; kx <= hi.x; ++kx) {
        for (std::int64_t ky = lo.y; ky <= hi.y; ++ky) {
            auto zit = zones_.find({kx, ky});
            auto& entries = zit->second.free;
            entries.erase(std::remove_if(entries.begin(), entries.end(),
                                         [id](const FreeEntry& e) { return e.id == id; }),
                          entries.end());
            if (entries.empty() && zit->second.modules.empty()) zones_.erase(zit);
        }
    }
    free_.erase(it);
    owner_.erase(id);
}

void Drawing::index_module_geometry(Module& m) const {
    m.element_bboxes.clear();
    m.zone_extents.clear();
    for (std::size_t slot = 0; slot < m.elements.size(); ++slot) {
        const BBox box = bbox(m.elements[slot].primitive);
        m.element_bboxes.push_back(box);
        const ZoneKey lo = zone_of(box.min);
        const ZoneKey hi = zone_of(box.max);
        for (std::int64_t kx = lo.x; kx <= hi.x; ++kx) {
            for (std::int64_t ky = lo.y; ky <= hi.y; ++ky) {
                auto [it, inserted] = m.zone_extents.try_emplace({kx, ky});
                ZoneExtent& ext = it->second;
                ext.bbox = inserted ? box : ext.bbox.united(box);
                ext.element_ids.push_back(m.elements[slot].id);
                ext.slots.push_back(slot);
            }
        }
    }
}

Module Drawing::build_module(Id id, Kind kind, ParamRecord params, const Transform& placement,
                             Id layer, const std::vector<Id>* reuse_ids, Id& next_id) const {
    Module m;
    m.id = id;
    m.kind = kind;
    m.params = std::move(params);
    m.placement = placement;
    m.layer = layer;
    const std::vector<Shape> shapes = generate(kind, m.params);
    const bool reuse = reuse_ids != nullptr && reuse_ids->size() == shapes.size();
    m.elements.reserve(shapes.size());
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        Primitive prim = apply_transform(shapes[i].primitive, placement);
        validate(prim);
        const Id eid = reuse ? (*reuse_ids)[i] : next_id++;
        m.elements.push_back({eid, layer, shapes[i].style, std::move(prim)});
    }
    index_module_geometry(m);
    return m;
}

void Drawing::unregister_module(const Module& m) {
    for (const auto& [key, ext] : m.zone_extents) {
        auto zit = zones_.find(key);
        if (zit == zones_.end()) continue;
        auto& ids = zit->second.modules;
        ids.erase(std::remove(ids.begin(), ids.end(), m.id), ids.end());
        if (ids.empty() && zit->second.free.empty()) zones_.erase(zit);
    }
    for (const Element& e : m.elements) owner_.erase(e.id);
}

void Drawing::register_module(const Module& m) {
    for (const auto& [key, ext] : m.zone_extents) zones_[key].modules.push_back(m.id);
    for (const Element& e : m.elements) owner_[e.id] = m.id;
}

void Drawing::commit_module(Module m, Id next_id) {
    auto it = modules_.find(m.id);
    if (it != modules_.end()) {
        unregister_module(it->second);
        it->second = std::move(m);
    } else {
        it = modules_.emplace(m.id, std::move(m)).first;
    }
    register_module(it->second);
    next_id_ = std::max(next_id_, next_id);
}

Id Drawing::create_module(Kind kind, const ParamRecord& params, Id layer) {
    if (!has_layer(layer)) fail(ErrorCode::unknown_layer, "no layer " + std::to_string(layer));
    Id next = next_id_;
    const Id id = next++;
    Module m = build_module(id, kind, normalize_params(kind, params), Transform::identity(), layer,
                            nullptr, next);
    commit_module(std::move(m), next);
    return id;
}

void Drawing::regenerate(Id id) {
    const Module& old = module(id);
    Id next = next_id_;
    Module m = build_module(id, old.kind, old.params, old.placement, old.layer, nullptr, next);
    commit_module(std::move(m), next);
}

void Drawing::regenerate_all() {
    Id next = next_id_;
    std::vector<Module> rebuilt;
    for (const auto& [id, old] : modules_) {
        rebuilt.push_back(build_module(id, old.kind, old.params, old.placement, old.layer, nullptr, next));
    }
    for (Module& m : rebuilt) commit_module(std::move(m), next);
}

void Drawing::set_params(Id id, const ParamRecord& params) {
    const Module& old = module(id);
    Id next = next_id_;
    Module m = build_module(id, old.kind, normalize_params(old.kind, params), old.placement,
                            old.layer, nullptr, next);
    commit_module(std::move(m), next);
}

namespace {

std::vector<Id> ids_of(const Module& m) {
    std::vector<Id> ids;
    ids.reserve(m.elements.size());
    for (const Element& e : m.elements) ids.push_back(e.id);
    return ids;
}

}  // namespace

void Drawing::move_module(Id id, Point delta) {
    const Module& old = module(id);
    if (!is_finite(delta)) fail(ErrorCode::invalid_params, "move delta must be finite");
    Transform placement = old.placement;
    placement.tx += delta.x;
    placement.ty += delta.y;
    const std::vector<Id> ids = ids_of(old);
    Id next = next_id_;
    Module m = build_module(id, old.kind, old.params, placement, old.layer, &ids, next);
    commit_module(std::move(m), next);
}

void Drawing::stretch_module(Id id, Point base, double sx, double sy) {
    const Module& old = module(id);
    if (!(sx > 0.0) || !(sy > 0.0) || !std::isfinite(sx) || !std::isfinite(sy)) {
        fail(ErrorCode::non_positive_scale, "stretch factors must be positive");
    }
    if (!is_finite(base)) fail(ErrorCode::invalid_params, "stretch base must be finite");
    if (sx != sy) {
        for (const Element& e : old.elements) {
            if (std::holds_alternative<Circle>(e.primitive) || std::holds_alternative<Arc>(e.primitive)) {
                fail(ErrorCode::non_uniform_scale_of_round,
                     "module " + std::to_string(id) + " contains circles or arcs; use sx == sy");
            }
        }
    }
    const Transform placement = compose(old.placement, Transform::scaling_about(base, sx, sy));
    const std::vector<Id> ids = ids_of(old);
    Id next = next_id_;
    Module m = build_module(id, old.kind, old.params, placement, old.layer, &ids, next);
    commit_module(std::move(m), next);
}

void Drawing::delete_module(Id id) {
    const Module& m = module(id);
    unregister_module(m);
    modules_.erase(id);
}

std::vector<Id> Drawing::visible_elements(const Viewport& viewport) const {
    const BBox& rect = viewport.rect;
    std::vector<Id> out;
    for_each_zone_in(rect, [&](const ZoneKey& key, const Bucket& bucket) {
        for (const FreeEntry& e : bucket.free) {
            if (e.bbox.intersects(rect)) out.push_back(e.id);
        }
        for (Id mid : bucket.modules) {
            const Module& m = modules_.at(mid);
            const ZoneExtent& ext = m.zone_extents.at(key);
            if (!ext.bbox.intersects(rect)) continue;
            for (std::size_t i = 0; i < ext.slots.size(); ++i) {
                if (m.element_bboxes[ext.slots[i]].intersects(rect)) out.push_back(ext.element_ids[i]);
            }
        }
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<SnapHit> Drawing::snap(Point query, double radius) const {
    if (!(radius > 0.0)) fail(ErrorCode::invalid_params, "snap radius must be positive");
    const BBox rect{{query.x - radius, query.y - radius}, {query.x + radius, query.y + radius}};
    std::vector<SnapCandidate> candidates;
    for (Id id : visible_elements({rect})) {
        for (const auto& c : snap_candidates(find_element(id)->primitive)) candidates.push_back(c);
    }
    return nearest_snap(query, radius, candidates);
}

bool Drawing::verify_module(Id id) const {
    const Module& m = module(id);
    std::vector<Shape> shapes;
    try {
        shapes = generate(m.kind, m.params);
    } catch (const Error&) {
        return false;
    }
    if (shapes.size() != m.elements.size()) return false;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        const Element& e = m.elements[i];
        if (e.layer != m.layer || !(e.style == shapes[i].style)) return false;
        try {
            if (!approx_equal(apply_transform(shapes[i].primitive, m.placement), e.primitive,
                              kEqualityTolerance)) {
                return false;
            }
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

void Drawing::insert_stored_module(Module module) {
    if (!has_layer(module.layer)) {
        fail(ErrorCode::consistency, "module " + std::to_string(module.id) +
                                         " refers to missing layer " + std::to_string(module.layer));
    }
    check_id_free(module.id, module.id);
    Id max_id = module.id;
    std::vector<Id> seen;
    for (const Element& e : module.elements) {
        if (e.layer != module.layer) {
            fail(ErrorCode::consistency, "element " + std::to_string(e.id) + " of module " +
                                             std::to_string(module.id) + " is not on the module layer");
        }
        check_id_free(e.id, module.id);
        if (e.id == module.id) fail(ErrorCode::consistency, "duplicate id " + std::to_string(e.id));
        seen.push_back(e.id);
        validate(e.primitive);
        max_id = std::max(max_id, e.id);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        fail(ErrorCode::consistency, "duplicate element id in module " + std::to_string(module.id));
    }
    if (module.elements.empty()) {
        fail(ErrorCode::consistency, "module " + std::to_string(module.id) + " has no elements");
    }
    index_module_geometry(module);
    commit_module(std::move(module), max_id + 1);
}

std::map<ZoneKey, std::vector<Id>> Drawing::zone_contents() const {
    std::map<ZoneKey, std::vector<Id>> out;
    for (const auto& [key, bucket] : zones_) {
        auto& ids = out[key];
        for (const FreeEntry& e : bucket.free) ids.push_back(e.id);
        for (Id mid : bucket.modules) {
            const auto& ext = modules_.at(mid).zone_extents.at(key);
            ids.insert(ids.end(), ext.element_ids.begin(), ext.element_ids.end());
        }
        std::sort(ids.begin(), ids.end());
    }
    return out;
}

bool operator==(const Drawing& a, const Drawing& b) {
    if (a.zone_size_ != b.zone_size_ || a.layers_ != b.layers_ || a.free_ != b.free_) return false;
    if (a.modules_.size() != b.modules_.size()) return false;
    for (auto ia = a.modules_.begin(), ib = b.modules_.begin(); ia != a.modules_.end(); ++ia, ++ib) {
        const Module& ma = ia->second;
        const Module& mb = ib->second;
        if (ma.id != mb.id || ma.kind != mb.kind || ma.params != mb.params ||
            ma.placement != mb.placement || ma.layer != mb.layer || ma.elements != mb.elements) {
            return false;
        }
    }
    return true;
}

}  // namespace modulecad
