#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zonal/csv.hpp"
#include "zonal/errors.hpp"

namespace zonal {

enum class Level { regency, municipality };

inline std::string level_label(Level l) {
    return l == Level::regency ? "regency" : "municipality";
}

inline Level parse_level(const std::string& s) {
    if (s == "regency") return Level::regency;
    if (s == "municipality") return Level::municipality;
    throw ValidationError("unknown level '" + s + "' (expected regency or municipality)");
}

// One regency/municipality row of the census table.
struct Region {
    std::string region_id;
    std::string name;
    Level level = Level::regency;
    std::string province;
    double population = 0.0;       // persons
    double admin_area_km2 = 0.0;   // official administrative extent
    double case_rate = 0.0;        // new cases per 100k population
    // optional precomputed settlement area; used when no raster inputs exist
    std::optional<double> settlement_area_km2;
};

// Pixel counts, calibrated pixel size and both density models for one region.
struct DensityRecord {
    std::string region_id;
    std::optional<std::size_t> x;      // admin pixel count
    std::optional<std::size_t> x_hat;  // settlement pixel count
    std::optional<double> m;           // meters per pixel-side for this region
    std::optional<double> d_per_pixel; // old model, persons per pixel
    double d_admin = 0.0;              // old model, persons per km^2
    double settlement_area_km2 = 0.0;
    std::optional<double> d_settlement;  // new model; absent when area is zero
    std::optional<double> uninhabited_fraction;
    bool outlier = false;  // m excluded from the m-bar calibration
};

// Eq.-style conversion: pixel side length in meters from area and pixel count.
inline double meters_per_pixel_side(double area_km2, std::size_t pixel_count) {
    if (pixel_count == 0)
        throw DegenerateError("meters_per_pixel_side: empty rasterization (0 pixels)");
    if (!(area_km2 > 0.0))
        throw ValidationError("meters_per_pixel_side: area must be > 0");
    return std::sqrt(area_km2 * 1e6 / static_cast<double>(pixel_count));
}

struct TukeyFence {
    double q1 = 0.0;
    double q3 = 0.0;
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double v) const { return lower <= v && v <= upper; }
};

// Quartile by linear interpolation at position (n-1)*q on the sorted sample.
inline double quantile_linear(std::span<const double> sorted_values, double q) {
    const std::size_t n = sorted_values.size();
    const double pos = static_cast<double>(n - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    return sorted_values[lo] + (pos - static_cast<double>(lo)) * (sorted_values[hi] - sorted_values[lo]);
}

inline TukeyFence tukey_fence(std::span<const double> ms) {
    if (ms.size() < 4)
        throw ValidationError("tukey_fence: need at least 4 values, got " + std::to_string(ms.size()));
    std::vector<double> sorted(ms.begin(), ms.end());
    std::sort(sorted.begin(), sorted.end());
    TukeyFence f;
    f.q1 = quantile_linear(sorted, 0.25);
    f.q3 = quantile_linear(sorted, 0.75);
    const double iqr = f.q3 - f.q1;
    f.lower = f.q1 - 1.5 * iqr;
    f.upper = f.q3 + 1.5 * iqr;
    return f;
}

// Mean of the values inside the fences. Q1 and Q3 always lie inside, so the
// inlier set cannot be empty for a valid fence; guarded anyway.
inline double mean_excluding_outliers(std::span<const double> ms, const TukeyFence& fence) {
    double sum = 0.0;
    std::size_t k = 0;
    for (double v : ms) {
        if (fence.contains(v)) {
            sum += v;
            ++k;
        }
    }
    if (k == 0)
        throw DegenerateError("mean_excluding_outliers: no values inside fences");
    return sum / static_cast<double>(k);
}

// Settlement extent in km^2 from pixel count and calibrated pixel side.
inline double settlement_area(std::size_t x_hat, double m_bar) {
    if (!(m_bar > 0.0)) throw ValidationError("settlement_area: m_bar must be > 0");
    return static_cast<double>(x_hat) * m_bar * m_bar / 1e6;
}

// Assembles the full per-region record from pixel counts and the shared m-bar.
inline DensityRecord densities(const Region& region, std::size_t x, std::size_t x_hat,
                               double m_bar) {
    if (x == 0)
        throw DegenerateError("densities: region " + region.region_id + " rasterized to 0 pixels");
    if (x_hat > x)
        throw ValidationError("densities: settlement count exceeds admin count for region " +
                              region.region_id);
    DensityRecord rec;
    rec.region_id = region.region_id;
    rec.x = x;
    rec.x_hat = x_hat;
    rec.m = meters_per_pixel_side(region.admin_area_km2, x);
    rec.d_per_pixel = region.population / static_cast<double>(x);
    rec.d_admin = region.population / region.admin_area_km2;
    rec.settlement_area_km2 = settlement_area(x_hat, m_bar);
    if (rec.settlement_area_km2 > 0.0)
        rec.d_settlement = region.population / rec.settlement_area_km2;
    rec.uninhabited_fraction = 1.0 - static_cast<double>(x_hat) * m_bar * m_bar /
                                         (region.admin_area_km2 * 1e6);
    return rec;
}

// Record for the precomputed-density route (settlement area from the CSV).
inline DensityRecord densities_precomputed(const Region& region) {
    DensityRecord rec;
    rec.region_id = region.region_id;
    rec.d_admin = region.population / region.admin_area_km2;
    rec.settlement_area_km2 = region.settlement_area_km2.value_or(0.0);
    if (rec.settlement_area_km2 > 0.0) {
        rec.d_settlement = region.population / rec.settlement_area_km2;
        rec.uninhabited_fraction = 1.0 - rec.settlement_area_km2 / region.admin_area_km2;
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Region table CSV
// ---------------------------------------------------------------------------

// Header: region_id,name,level,province,population,admin_area_km2,
// case_rate_per_100k[,settlement_area_km2]
inline std::vector<Region> load_regions_csv(const std::string& path) {
    const auto rows = csv::parse_file(path);
    if (rows.empty()) throw ParseError(path + ": empty region table");
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
    for (const char* required : {"region_id", "name", "level", "province", "population",
                                 "admin_area_km2", "case_rate_per_100k"}) {
        if (!col.count(required))
            throw ParseError(path + ": missing required column '" + std::string(required) + "'");
    }
    const bool has_settlement = col.count("settlement_area_km2") > 0;

    auto num = [&](const csv::Row& row, const char* name, std::size_t line) {
        const std::string& s = row[col.at(name)];
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(line) + ": bad numeric value '" + s +
                             "' in column " + name);
        }
    };

    std::vector<Region> regions;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;  // trailing blank line
        if (row.size() < col.size())
            throw ParseError(path + ":" + std::to_string(r + 1) + ": expected " +
                             std::to_string(col.size()) + " fields, got " + std::to_string(row.size()));
        Region reg;
        reg.region_id = row[col.at("region_id")];
        reg.name = row[col.at("name")];
        reg.level = parse_level(row[col.at("level")]);
        reg.province = row[col.at("province")];
        reg.population = num(row, "population", r + 1);
        reg.admin_area_km2 = num(row, "admin_area_km2", r + 1);
        reg.case_rate = num(row, "case_rate_per_100k", r + 1);
        if (has_settlement && !row[col.at("settlement_area_km2")].empty())
            reg.settlement_area_km2 = num(row, "settlement_area_km2", r + 1);
        if (reg.region_id.empty())
            throw ValidationError(path + ":" + std::to_string(r + 1) + ": empty region_id");
        if (!(reg.population > 0.0))
            throw ValidationError("region " + reg.region_id + ": population must be > 0");
        if (!(reg.admin_area_km2 > 0.0))
            throw ValidationError("region " + reg.region_id + ": admin_area_km2 must be > 0");
        if (!(reg.case_rate >= 0.0))
            throw ValidationError("region " + reg.region_id + ": case rate must be >= 0");
        if (reg.settlement_area_km2 && !(*reg.settlement_area_km2 >= 0.0))
            throw ValidationError("region " + reg.region_id + ": settlement area must be >= 0");
        regions.push_back(std::move(reg));
    }
    std::sort(regions.begin(), regions.end(),
              [](const Region& a, const Region& b) { return a.region_id < b.region_id; });
    for (std::size_t i = 0; i + 1 < regions.size(); ++i)
        if (regions[i].region_id == regions[i + 1].region_id)
            throw ValidationError(path + ": duplicate region_id '" + regions[i].region_id + "'");
    return regions;
}

}  // namespace zonal
