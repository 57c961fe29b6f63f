#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zonal/errors.hpp"
#include "zonal/geometry.hpp"

namespace zonal {

namespace detail {

inline Ring parse_ring(const nlohmann::json& coords, const std::string& context) {
    Ring ring;
    ring.reserve(coords.size());
    for (const auto& pos : coords) {
        if (!pos.is_array() || pos.size() < 2)
            throw ParseError(context + ": ring position is not an [x, y] pair");
        ring.push_back({pos[0].get<double>(), pos[1].get<double>()});
    }
    return normalize_ring(std::move(ring), context);
}

// GeoJSON polygon semantics: first ring is the exterior, the rest are holes.
inline void add_polygon(BoundaryGeometry& geom, const nlohmann::json& rings,
                        const std::string& context) {
    if (rings.empty())
        throw ParseError(context + ": polygon has no rings");
    geom.outer_rings.push_back(parse_ring(rings[0], context));
    for (std::size_t i = 1; i < rings.size(); ++i)
        geom.holes.push_back(parse_ring(rings[i], context));
}

}  // namespace detail

// Reads an RFC 7946 FeatureCollection of Polygon/MultiPolygon features whose
// coordinates are already projected to meters. region_id is taken from the
// feature property named `id_property`.
inline std::vector<BoundaryGeometry> load_boundaries(const std::string& path,
                                                     const std::string& id_property) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open boundary file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": invalid GeoJSON: " + e.what());
    }
    if (doc.value("type", "") != "FeatureCollection")
        throw ParseError(path + ": root object is not a FeatureCollection");
    if (!doc.contains("features") || !doc["features"].is_array())
        throw ParseError(path + ": missing features array");

    std::vector<BoundaryGeometry> out;
    std::size_t index = 0;
    for (const auto& feature : doc["features"]) {
        const std::string fctx = path + ": feature #" + std::to_string(index);
        const auto& props = feature.value("properties", nlohmann::json::object());
        if (!props.contains(id_property))
            throw ValidationError(fctx + " is missing id property '" + id_property + "'");
        BoundaryGeometry geom;
        const auto& idval = props[id_property];
        geom.region_id = idval.is_string() ? idval.get<std::string>() : idval.dump();

        if (!feature.contains("geometry") || feature["geometry"].is_null())
            throw ParseError(fctx + " (" + geom.region_id + "): null geometry");
        const auto& g = feature["geometry"];
        const std::string gtype = g.value("type", "");
        const std::string gctx = fctx + " (" + geom.region_id + ")";
        if (gtype == "Polygon") {
            detail::add_polygon(geom, g["coordinates"], gctx);
        } else if (gtype == "MultiPolygon") {
            for (const auto& poly : g["coordinates"])
                detail::add_polygon(geom, poly, gctx);
        } else {
            throw ParseError(gctx + ": unsupported geometry type '" + gtype + "'");
        }
        out.push_back(std::move(geom));
        ++index;
    }
    return out;
}

}  // namespace zonal
