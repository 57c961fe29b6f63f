#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "zonal/config.hpp"
#include "zonal/csv.hpp"
#include "zonal/density.hpp"
#include "zonal/errors.hpp"
#include "zonal/geojson.hpp"
#include "zonal/geometry.hpp"
#include "zonal/raster.hpp"
#include "zonal/stats.hpp"
#include "zonal/svg.hpp"

namespace zonal {

struct NormalityRow {
    std::string province_label;
    std::string data_label;
    Model model = Model::old_model;
    std::size_t n = 0;
    double w = 0.0;
    double p_value = 0.0;
    bool normal = false;
};

struct CorrelationRow {
    std::string province_label;
    std::string data_label;
    std::string slug;  // filesystem-safe subset name for plot files
    std::size_t n = 0;
    stats::SpearmanResult rho_old;   // old model vs case rate
    stats::SpearmanResult rho_new;   // new model vs case rate
    double rho_models = 0.0;         // old model vs new model
    stats::TestResult hotelling;
    stats::Strength strength_old = stats::Strength::weak;
    stats::Strength strength_new = stats::Strength::weak;
};

struct TTestRow {
    std::string province_label;
    std::string data_label;
    std::size_t n = 0;
    stats::TestResult result;
};

struct ComparisonReport {
    std::vector<Region> regions;         // sorted by region_id
    std::vector<DensityRecord> records;  // parallel to regions
    std::vector<NormalityRow> normality;
    std::vector<CorrelationRow> correlations;
    std::vector<TTestRow> ttests;
    double alpha = 0.05;
    std::optional<TukeyFence> m_fence;   // raster route only
    std::optional<double> m_bar;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string num(double v, const char* spec = "%.9g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

inline std::string province_label(const SubsetSpec& s) {
    if (s.provinces.empty()) return "All";
    std::string out;
    for (std::size_t i = 0; i < s.provinces.size(); ++i) {
        if (i) out += "+";
        out += s.provinces[i];
    }
    return out;
}

inline std::string data_label(const SubsetSpec& s) {
    const bool reg = s.levels.empty() ||
                     std::find(s.levels.begin(), s.levels.end(), "regency") != s.levels.end();
    const bool mun = s.levels.empty() ||
                     std::find(s.levels.begin(), s.levels.end(), "municipality") != s.levels.end();
    if (reg && mun) return "Regencies+Municipalities";
    return reg ? "Regencies" : "Municipalities";
}

inline std::string subset_title(const SubsetSpec& s) {
    if (!s.name.empty()) return s.name;
    return province_label(s) + " " + data_label(s);
}

inline std::string slugify(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else if (!out.empty() && out.back() != '_')
            out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? "subset" : out;
}

inline bool matches(const SubsetSpec& s, const Region& r) {
    if (!s.provinces.empty() &&
        std::find(s.provinces.begin(), s.provinces.end(), r.province) == s.provinces.end())
        return false;
    if (!s.levels.empty() &&
        std::find(s.levels.begin(), s.levels.end(), level_label(r.level)) == s.levels.end())
        return false;
    return true;
}

}  // namespace detail

// Indices of regions passing the filter and carrying a defined new-model
// density; regions without one are excluded and reported via `warnings`.
inline std::vector<std::size_t> select_subset(const SubsetSpec& spec,
                                              const std::vector<Region>& regions,
                                              const std::vector<DensityRecord>& records,
                                              std::vector<std::string>* warnings = nullptr) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        if (!detail::matches(spec, regions[i])) continue;
        if (!records[i].d_settlement) {
            if (warnings)
                warnings->push_back("region " + regions[i].region_id +
                                    " has undefined settlement density; excluded from subset '" +
                                    detail::subset_title(spec) + "'");
            continue;
        }
        idx.push_back(i);
    }
    return idx;
}

// Per-region pixel counting and Eq.-chain densities for the raster route.
// Boundary masks are rasterized on the settlement grid's lattice so admin and
// settlement counts share one cell size.
inline std::vector<DensityRecord> compute_density_records(
    const std::vector<Region>& regions, const std::vector<BoundaryGeometry>& boundaries,
    const RasterGrid& settlement_grid, double threshold, std::size_t max_cells,
    std::vector<std::string>& warnings,
    std::optional<TukeyFence>* fence_out = nullptr, std::optional<double>* m_bar_out = nullptr,
    const std::function<void(const std::string&)>& log = {}) {
    std::map<std::string, const BoundaryGeometry*> by_id;
    for (const auto& g : boundaries) by_id[g.region_id] = &g;

    std::vector<std::string> missing;
    for (const auto& r : regions)
        if (!by_id.count(r.region_id)) missing.push_back(r.region_id);
    if (!missing.empty()) {
        std::string list;
        for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
        throw ValidationError("regions without boundary geometry: " + list);
    }
    std::set<std::string> csv_ids;
    for (const auto& r : regions) csv_ids.insert(r.region_id);
    for (const auto& g : boundaries)
        if (!csv_ids.count(g.region_id))
            warnings.push_back("boundary feature '" + g.region_id +
                               "' has no region row; excluded");

    const BitMask settle_mask = binarize(settlement_grid, threshold);

    struct Counts {
        std::size_t x = 0, x_hat = 0;
        double m = 0.0;
    };
    std::vector<Counts> counts(regions.size());
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const auto& geom = *by_id.at(regions[i].region_id);
        const GridSpec sub = aligned_subgrid(settlement_grid.spec, geom.bounding_box(), max_cells);
        const BitMask mask = rasterize_onto(geom, sub);
        counts[i].x = count_pixels(mask);
        if (counts[i].x == 0)
            throw DegenerateError("region " + regions[i].region_id + " rasterized to 0 pixels");
        const OverlayResult ov = overlay_count(settle_mask, mask);
        if (ov.disjoint)
            warnings.push_back("region " + regions[i].region_id +
                               " does not overlap the settlement raster");
        counts[i].x_hat = ov.count;
        counts[i].m = meters_per_pixel_side(regions[i].admin_area_km2, counts[i].x);
        if (log)
            log("region " + regions[i].region_id + ": x=" + std::to_string(counts[i].x) +
                " x_hat=" + std::to_string(counts[i].x_hat) + " m=" + detail::num(counts[i].m));
    }

    std::vector<double> ms(regions.size());
    for (std::size_t i = 0; i < regions.size(); ++i) ms[i] = counts[i].m;
    const TukeyFence fence = tukey_fence(ms);
    const double m_bar = mean_excluding_outliers(ms, fence);
    if (fence_out) *fence_out = fence;
    if (m_bar_out) *m_bar_out = m_bar;
    if (log)
        log("tukey fences [" + detail::num(fence.lower) + ", " + detail::num(fence.upper) +
            "], m_bar=" + detail::num(m_bar));

    double lo = 0.0, hi = 0.0;
    bool first = true;
    std::vector<DensityRecord> records(regions.size());
    for (std::size_t i = 0; i < regions.size(); ++i) {
        records[i] = densities(regions[i], counts[i].x, counts[i].x_hat, m_bar);
        records[i].outlier = !fence.contains(counts[i].m);
        if (records[i].outlier) {
            warnings.push_back("region " + regions[i].region_id + ": m=" + detail::num(counts[i].m) +
                               " outside Tukey fences; excluded from m-bar");
        } else {
            lo = first ? counts[i].m : std::min(lo, counts[i].m);
            hi = first ? counts[i].m : std::max(hi, counts[i].m);
            first = false;
        }
    }
    if (!first && lo > 0.0 && hi / lo > 1.10)
        warnings.push_back("meters-per-pixel spread after outlier removal is " +
                           detail::num(hi / lo, "%.4g") + " (> 1.10); check area annotations");
    return records;
}

// Statistical battery over already-computed density records.
inline ComparisonReport run_battery(std::vector<Region> regions,
                                    std::vector<DensityRecord> records, const RunConfig& cfg,
                                    const std::function<void(const std::string&)>& log = {},
                                    std::vector<std::string> warnings = {}) {
    ComparisonReport report;
    report.alpha = cfg.alpha;
    report.warnings = std::move(warnings);
    report.regions = std::move(regions);
    report.records = std::move(records);

    auto values = [&](const std::vector<std::size_t>& idx, Model model) {
        std::vector<double> v(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k)
            v[k] = model == Model::old_model ? report.records[idx[k]].d_admin
                                             : *report.records[idx[k]].d_settlement;
        return v;
    };
    auto cases = [&](const std::vector<std::size_t>& idx) {
        std::vector<double> v(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) v[k] = report.regions[idx[k]].case_rate;
        return v;
    };

    for (const auto& ns : cfg.normality) {
        const auto idx = select_subset(ns.subset, report.regions, report.records, &report.warnings);
        if (idx.size() < 3) {
            report.warnings.push_back("normality subset '" + detail::subset_title(ns.subset) +
                                      "' has n=" + std::to_string(idx.size()) + " < 3; skipped");
            continue;
        }
        const auto vals = values(idx, ns.model);
        const auto sw = stats::shapiro_wilk(vals);
        report.normality.push_back({detail::province_label(ns.subset),
                                    detail::data_label(ns.subset), ns.model, idx.size(), sw.w,
                                    sw.p_value, sw.p_value >= cfg.alpha});
    }

    for (const auto& cs : cfg.correlations) {
        const auto idx = select_subset(cs, report.regions, report.records, &report.warnings);
        if (idx.size() < 4) {
            report.warnings.push_back("correlation subset '" + detail::subset_title(cs) +
                                      "' has n=" + std::to_string(idx.size()) + " < 4; skipped");
            continue;
        }
        CorrelationRow row;
        row.province_label = detail::province_label(cs);
        row.data_label = detail::data_label(cs);
        row.slug = detail::slugify(detail::subset_title(cs));
        row.n = idx.size();
        const auto old_d = values(idx, Model::old_model);
        const auto new_d = values(idx, Model::new_model);
        const auto cr = cases(idx);
        try {
            row.rho_old = stats::spearman(old_d, cr);
            row.rho_new = stats::spearman(new_d, cr);
            row.rho_models = stats::spearman(old_d, new_d).rho;
            row.hotelling = stats::hotelling_t(
                {row.n, row.rho_old.rho, row.rho_new.rho, row.rho_models}, cfg.alpha,
                stats::Tails::one);
        } catch (const DegenerateError& e) {
            // constant values or a perfect correlation make the comparison
            // undecidable; report the subset instead of aborting the run
            report.warnings.push_back("correlation subset '" + detail::subset_title(cs) +
                                      "' skipped: " + e.what());
            continue;
        }
        row.strength_old = stats::interpret(row.rho_old.rho);
        row.strength_new = stats::interpret(row.rho_new.rho);
        report.correlations.push_back(std::move(row));
    }

    for (const auto& ts : cfg.ttests) {
        const auto idx = select_subset(ts, report.regions, report.records, &report.warnings);
        if (idx.size() < 2) {
            report.warnings.push_back("t-test subset '" + detail::subset_title(ts) +
                                      "' has n=" + std::to_string(idx.size()) + " < 2; skipped");
            continue;
        }
        TTestRow row;
        row.province_label = detail::province_label(ts);
        row.data_label = detail::data_label(ts);
        row.n = idx.size();
        row.result = stats::paired_t_test(values(idx, Model::new_model),
                                          values(idx, Model::old_model), cfg.alpha);
        report.ttests.push_back(std::move(row));
    }

    if (log)
        for (const auto& w : report.warnings) log("warning: " + w);
    return report;
}

// Full pipeline: ingest, densities, statistical battery.
inline ComparisonReport run(const RunConfig& cfg,
                            const std::function<void(const std::string&)>& log = {}) {
    std::vector<std::string> warnings = cfg.warnings;
    std::vector<Region> regions = load_regions_csv(cfg.regions.string());
    std::vector<DensityRecord> records;
    std::optional<TukeyFence> fence;
    std::optional<double> m_bar;

    if (cfg.raster_route()) {
        const auto boundaries = load_boundaries(cfg.boundaries.string(), cfg.id_property);
        const RasterGrid settlement = load_ascii_grid(cfg.settlement.string());
        // boundary masks share the settlement lattice so x and x_hat use one cell size
        if (cfg.cell_size_set && std::abs(cfg.cell_size - settlement.spec.cell_size) >
                                     1e-9 * settlement.spec.cell_size)
            warnings.push_back("cell_size " + detail::num(cfg.cell_size) +
                               " ignored; boundary masks use the settlement grid cell size " +
                               detail::num(settlement.spec.cell_size));
        records = compute_density_records(regions, boundaries, settlement, cfg.threshold,
                                          cfg.max_cells, warnings, &fence, &m_bar, log);
    } else {
        records.resize(regions.size());
        for (std::size_t i = 0; i < regions.size(); ++i) {
            if (!regions[i].settlement_area_km2)
                throw ValidationError(
                    "region " + regions[i].region_id +
                    ": no raster inputs and no settlement_area_km2 column; cannot form the "
                    "new-model density");
            records[i] = densities_precomputed(regions[i]);
        }
    }
    ComparisonReport report =
        run_battery(std::move(regions), std::move(records), cfg, log, std::move(warnings));
    report.m_fence = fence;
    report.m_bar = m_bar;
    return report;
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

inline void emit_densities_csv(const ComparisonReport& report, std::ostream& out) {
    csv::write_row(out, {"region_id", "name", "level", "province", "population", "admin_area_km2",
                         "case_rate_per_100k", "x", "x_hat", "m", "outlier", "settlement_area_km2",
                         "d_admin", "d_settlement", "uninhabited_fraction"});
    using detail::num;
    for (std::size_t i = 0; i < report.regions.size(); ++i) {
        const Region& r = report.regions[i];
        const DensityRecord& d = report.records[i];
        csv::write_row(out,
                       {r.region_id, r.name, level_label(r.level), r.province,
                        num(r.population, "%.10g"), num(r.admin_area_km2, "%.10g"),
                        num(r.case_rate, "%.10g"), d.x ? std::to_string(*d.x) : "",
                        d.x_hat ? std::to_string(*d.x_hat) : "", d.m ? num(*d.m, "%.10g") : "",
                        d.outlier ? "true" : "false", num(d.settlement_area_km2, "%.10g"),
                        num(d.d_admin, "%.10g"),
                        d.d_settlement ? num(*d.d_settlement, "%.10g") : "",
                        d.uninhabited_fraction ? num(*d.uninhabited_fraction, "%.10g") : ""});
    }
}

// Reads a densities.csv produced by emit_densities_csv back into memory, so
// report stages can rerun without repeating rasterization.
inline std::pair<std::vector<Region>, std::vector<DensityRecord>> load_densities_csv(
    const std::string& path) {
    const auto rows = csv::parse_file(path);
    if (rows.empty()) throw ParseError(path + ": empty densities table");
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
    for (const char* required :
         {"region_id", "name", "level", "province", "population", "admin_area_km2",
          "case_rate_per_100k", "settlement_area_km2", "d_admin"}) {
        if (!col.count(required))
            throw ParseError(path + ": missing column '" + std::string(required) + "'");
    }
    std::vector<Region> regions;
    std::vector<DensityRecord> records;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() < col.size()) continue;
        auto field = [&](const char* name) { return row[col.at(name)]; };
        auto num_field = [&](const char* name) { return std::stod(field(name)); };
        Region reg;
        reg.region_id = field("region_id");
        reg.name = field("name");
        reg.level = parse_level(field("level"));
        reg.province = field("province");
        reg.population = num_field("population");
        reg.admin_area_km2 = num_field("admin_area_km2");
        reg.case_rate = num_field("case_rate_per_100k");
        DensityRecord rec;
        rec.region_id = reg.region_id;
        if (col.count("x") && !field("x").empty())
            rec.x = static_cast<std::size_t>(std::stoull(field("x")));
        if (col.count("x_hat") && !field("x_hat").empty())
            rec.x_hat = static_cast<std::size_t>(std::stoull(field("x_hat")));
        if (col.count("m") && !field("m").empty()) rec.m = num_field("m");
        if (col.count("outlier")) rec.outlier = field("outlier") == "true";
        rec.settlement_area_km2 = num_field("settlement_area_km2");
        reg.settlement_area_km2 = rec.settlement_area_km2;
        rec.d_admin = num_field("d_admin");
        if (col.count("d_settlement") && !field("d_settlement").empty())
            rec.d_settlement = num_field("d_settlement");
        if (col.count("uninhabited_fraction") && !field("uninhabited_fraction").empty())
            rec.uninhabited_fraction = num_field("uninhabited_fraction");
        regions.push_back(std::move(reg));
        records.push_back(std::move(rec));
    }
    return {std::move(regions), std::move(records)};
}

inline void emit_normality_csv(const ComparisonReport& report, std::ostream& out) {
    csv::write_row(out, {"province", "model", "data", "n", "W", "p_value", "normality"});
    for (const auto& row : report.normality)
        csv::write_row(out, {row.province_label, model_label(row.model), row.data_label,
                             std::to_string(row.n), detail::num(row.w), detail::num(row.p_value),
                             row.normal ? "Normal" : "Not Normal"});
}

inline void emit_correlations_csv(const ComparisonReport& report, std::ostream& out) {
    csv::write_row(out, {"province", "data", "n", "rho", "rho_hat", "rho_models", "p_rho",
                         "p_rho_hat", "hotelling_t", "df", "p_one_tailed", "significance",
                         "interpretation_old", "interpretation_new"});
    using detail::num;
    for (const auto& row : report.correlations)
        csv::write_row(out, {row.province_label, row.data_label, std::to_string(row.n),
                             num(row.rho_old.rho), num(row.rho_new.rho), num(row.rho_models),
                             num(row.rho_old.p_value), num(row.rho_new.p_value),
                             num(row.hotelling.statistic), num(row.hotelling.df),
                             num(row.hotelling.p_value),
                             stats::verdict_label(row.hotelling.verdict),
                             stats::strength_label(row.strength_old),
                             stats::strength_label(row.strength_new)});
}

inline void emit_ttests_csv(const ComparisonReport& report, std::ostream& out) {
    csv::write_row(out, {"province", "data", "n", "t", "df", "p_value", "significance"});
    for (const auto& row : report.ttests)
        csv::write_row(out, {row.province_label, row.data_label, std::to_string(row.n),
                             detail::num(row.result.statistic), detail::num(row.result.df),
                             detail::num(row.result.p_value),
                             stats::verdict_label(row.result.verdict)});
}

namespace detail {

inline void text_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << row[i];
            if (i + 1 < row.size())
                out << std::string(widths[i] - row[i].size() + 2, ' ');
        }
        out << "\n";
    }
}

}  // namespace detail

inline void emit_summary(const ComparisonReport& report, std::ostream& out) {
    using detail::num;
    out << "Population density vs disease case rate -- model comparison\n";
    out << "alpha = " << num(report.alpha, "%.4g") << "\n\n";
    if (report.m_bar)
        out << "calibrated meters per pixel-side m_bar = " << num(*report.m_bar, "%.8g") << "\n\n";

    if (!report.normality.empty()) {
        out << "Shapiro-Wilk normality\n";
        std::vector<std::vector<std::string>> t{{"Province", "Model", "Data", "n", "p-value", "Normality"}};
        for (const auto& r : report.normality)
            t.push_back({r.province_label, model_label(r.model), r.data_label, std::to_string(r.n),
                         num(r.p_value, "%.4g"), r.normal ? "Normal" : "Not Normal"});
        detail::text_table(out, t);
        out << "\n";
    }
    if (!report.correlations.empty()) {
        out << "Spearman correlations and Hotelling comparison (one-tailed)\n";
        std::vector<std::vector<std::string>> t{
            {"Province", "Data", "n", "rho", "rho_hat", "rho_models", "t", "p", "Significance"}};
        for (const auto& r : report.correlations)
            t.push_back({r.province_label, r.data_label, std::to_string(r.n),
                         num(r.rho_old.rho, "%.4g"), num(r.rho_new.rho, "%.4g"),
                         num(r.rho_models, "%.4g"), num(r.hotelling.statistic, "%.4g"),
                         num(r.hotelling.p_value, "%.4g"),
                         stats::verdict_label(r.hotelling.verdict)});
        detail::text_table(out, t);
        out << "\n";
        for (const auto& r : report.correlations)
            out << "  " << r.province_label << " " << r.data_label << ": old model "
                << num(r.rho_old.rho, "%.3f") << " (" << stats::strength_label(r.strength_old)
                << "), new model " << num(r.rho_new.rho, "%.3f") << " ("
                << stats::strength_label(r.strength_new) << ")\n";
        out << "\n";
    }
    if (!report.ttests.empty()) {
        out << "Paired t-test, old vs new model densities (two-tailed)\n";
        std::vector<std::vector<std::string>> t{{"Province", "Data", "n", "t", "p-value", "Significance"}};
        for (const auto& r : report.ttests)
            t.push_back({r.province_label, r.data_label, std::to_string(r.n),
                         num(r.result.statistic, "%.4g"), num(r.result.p_value, "%.4g"),
                         stats::verdict_label(r.result.verdict)});
        detail::text_table(out, t);
        out << "\n";
    }
    if (!report.warnings.empty()) {
        out << "Warnings\n";
        for (const auto& w : report.warnings) out << "  - " << w << "\n";
    }
}

// Writes normality.csv, correlations.csv, ttests.csv, densities.csv and an
// aligned summary.txt into outdir.
inline void emit_tables(const ComparisonReport& report, const std::filesystem::path& outdir) {
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw IoError("cannot create output directory " + outdir.string() + ": " + ec.message());
    auto open = [&](const char* name) {
        std::ofstream out(outdir / name, std::ios::binary);
        if (!out) throw IoError("cannot write " + (outdir / name).string());
        return out;
    };
    {
        auto out = open("densities.csv");
        emit_densities_csv(report, out);
    }
    {
        auto out = open("normality.csv");
        emit_normality_csv(report, out);
    }
    {
        auto out = open("correlations.csv");
        emit_correlations_csv(report, out);
    }
    {
        auto out = open("ttests.csv");
        emit_ttests_csv(report, out);
    }
    {
        auto out = open("summary.txt");
        emit_summary(report, out);
    }
}

// Two SVGs per correlation subset with n >= 2: new-model density vs case rate
// (raw values) and the corresponding rank scatter.
inline std::vector<std::filesystem::path> emit_plots(const ComparisonReport& report,
                                                     const RunConfig& cfg,
                                                     const std::filesystem::path& outdir) {
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw IoError("cannot create output directory " + outdir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> files;
    for (const auto& cs : cfg.correlations) {
        const auto idx = select_subset(cs, report.regions, report.records, nullptr);
        if (idx.size() < 2) continue;
        const std::string title = detail::subset_title(cs);
        const std::string slug = detail::slugify(title);

        std::vector<svg::PlotPoint> data_points(idx.size());
        std::vector<double> dens(idx.size()), rate(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            dens[k] = *report.records[idx[k]].d_settlement;
            rate[k] = report.regions[idx[k]].case_rate;
            data_points[k] = {dens[k], rate[k],
                              report.regions[idx[k]].level == Level::municipality};
        }
        const auto dens_rank = stats::rank(dens);
        const auto rate_rank = stats::rank(rate);
        std::vector<svg::PlotPoint> rank_points(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k)
            rank_points[k] = {dens_rank.ranks[k], rate_rank.ranks[k],
                              data_points[k].municipality};

        const auto data_path = outdir / (slug + "_data.svg");
        svg::write_scatter_file(data_path.string(), "Data Plot: " + title,
                                "Settlement density (persons/km2)", "Case rate (per 100k)",
                                data_points);
        files.push_back(data_path);
        const auto rank_path = outdir / (slug + "_rank.svg");
        svg::write_rank_scatter_file(rank_path.string(), "Rank Plot: " + title,
                                     "Rank of settlement density", "Rank of case rate",
                                     rank_points);
        files.push_back(rank_path);
    }
    return files;
}

}  // namespace zonal
