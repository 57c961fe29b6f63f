// zonal-density: per-region population density under the administrative-area
// and settlement-area models, plus the statistical comparison battery.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "zonal/config.hpp"
#include "zonal/csv.hpp"
#include "zonal/density.hpp"
#include "zonal/errors.hpp"
#include "zonal/geojson.hpp"
#include "zonal/geometry.hpp"
#include "zonal/pipeline.hpp"
#include "zonal/raster.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct RasterizeArgs {
    std::string boundaries;
    std::string id_property = "region_id";
    double cell_size = 100.0;
    std::string settlement;
    double threshold = 0.5;
    std::size_t max_cells = zonal::kDefaultMaxCells;
    std::string out = "counts.csv";
};

struct DensityArgs {
    std::string regions;
    std::string boundaries;
    std::string id_property = "region_id";
    std::string settlement;
    double threshold = 0.5;
    std::size_t max_cells = zonal::kDefaultMaxCells;
    std::string out = "densities.csv";
};

struct ConfigArgs {
    std::string config;
    std::string out;        // optional override of the config's output directory
    std::string densities;  // optional precomputed densities.csv to reuse
};

void log_to_stderr(const std::string& msg) { std::cerr << "[zonal-density] " << msg << "\n"; }

// Per-region admin and settlement pixel counts on the settlement lattice (or,
// without a settlement raster, on a fresh grid at --cell-size).
int cmd_rasterize(const RasterizeArgs& args, bool verbose) {
    const auto boundaries = zonal::load_boundaries(args.boundaries, args.id_property);
    std::optional<zonal::RasterGrid> settlement;
    std::optional<zonal::BitMask> settle_mask;
    if (!args.settlement.empty()) {
        settlement = zonal::load_ascii_grid(args.settlement);
        settle_mask = zonal::binarize(*settlement, args.threshold);
    }
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw zonal::IoError("cannot write " + args.out);
    zonal::csv::write_row(out, {"region_id", "cell_size", "x", "x_hat"});
    for (const auto& geom : boundaries) {
        zonal::BitMask mask;
        double cell = args.cell_size;
        if (settlement) {
            cell = settlement->spec.cell_size;
            mask = zonal::rasterize_onto(
                geom, zonal::aligned_subgrid(settlement->spec, geom.bounding_box(), args.max_cells));
        } else {
            mask = zonal::rasterize(geom, args.cell_size, args.max_cells);
        }
        const std::size_t x = zonal::count_pixels(mask);
        std::string x_hat;
        if (settle_mask) {
            const auto ov = zonal::overlay_count(*settle_mask, mask);
            if (ov.disjoint)
                log_to_stderr("warning: region " + geom.region_id +
                              " does not overlap the settlement raster");
            x_hat = std::to_string(ov.count);
        }
        if (verbose)
            log_to_stderr("region " + geom.region_id + ": x=" + std::to_string(x) +
                          (x_hat.empty() ? "" : " x_hat=" + x_hat));
        char cellbuf[32];
        std::snprintf(cellbuf, sizeof(cellbuf), "%.10g", cell);
        zonal::csv::write_row(out, {geom.region_id, cellbuf, std::to_string(x), x_hat});
    }
    return kExitOk;
}

// Region table + raster inputs (or precomputed settlement areas) -> densities.
int cmd_density(const DensityArgs& args, bool verbose) {
    const auto regions = zonal::load_regions_csv(args.regions);
    zonal::ComparisonReport report;  // reused as a {regions, records} carrier
    report.regions = regions;
    std::vector<std::string> warnings;
    if (!args.boundaries.empty()) {
        if (args.settlement.empty())
            throw zonal::ValidationError("--boundaries requires --settlement");
        const auto boundaries = zonal::load_boundaries(args.boundaries, args.id_property);
        const auto settlement = zonal::load_ascii_grid(args.settlement);
        report.records = zonal::compute_density_records(
            regions, boundaries, settlement, args.threshold, args.max_cells, warnings, nullptr,
            nullptr, verbose ? log_to_stderr : std::function<void(const std::string&)>{});
    } else {
        report.records.reserve(regions.size());
        for (const auto& r : regions) {
            if (!r.settlement_area_km2)
                throw zonal::ValidationError(
                    "region " + r.region_id +
                    ": no raster inputs and no settlement_area_km2 column");
            report.records.push_back(zonal::densities_precomputed(r));
        }
    }
    for (const auto& w : warnings) log_to_stderr("warning: " + w);
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw zonal::IoError("cannot write " + args.out);
    zonal::emit_densities_csv(report, out);
    return kExitOk;
}

int cmd_run(const ConfigArgs& args, bool verbose, bool correlate_only) {
    const auto cfg = zonal::load_config(args.config);
    const auto outdir = args.out.empty() ? cfg.output_dir : std::filesystem::path(args.out);
    const auto log = verbose ? log_to_stderr : std::function<void(const std::string&)>{};

    zonal::ComparisonReport report;
    if (!args.densities.empty()) {
        auto [regions, records] = zonal::load_densities_csv(args.densities);
        report = zonal::run_battery(std::move(regions), std::move(records), cfg, log,
                                    cfg.warnings);
    } else {
        report = zonal::run(cfg, log);
    }

    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw zonal::IoError("cannot create output directory " + outdir.string());
    if (correlate_only) {
        auto open = [&](const char* name) {
            std::ofstream out(outdir / name, std::ios::binary);
            if (!out) throw zonal::IoError("cannot write " + (outdir / name).string());
            return out;
        };
        auto normality = open("normality.csv");
        zonal::emit_normality_csv(report, normality);
        auto correlations = open("correlations.csv");
        zonal::emit_correlations_csv(report, correlations);
        auto ttests = open("ttests.csv");
        zonal::emit_ttests_csv(report, ttests);
    } else {
        zonal::emit_tables(report, outdir);
        zonal::emit_plots(report, cfg, outdir);
    }
    std::cout << "wrote " << outdir.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Population density models (administrative vs settlement) and their "
                 "correlation with a disease case rate"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("--verbose", verbose, "log per-region pixel counts, fences and exclusions");

    RasterizeArgs rast;
    auto* rast_cmd = app.add_subcommand("rasterize", "count admin/settlement pixels per region");
    rast_cmd->add_option("--boundaries", rast.boundaries, "GeoJSON FeatureCollection (projected meters)")
        ->required();
    rast_cmd->add_option("--id-property", rast.id_property, "feature property carrying the region id");
    rast_cmd->add_option("--cell-size", rast.cell_size, "cell size in meters (without --settlement)");
    rast_cmd->add_option("--settlement", rast.settlement, "settlement raster (ESRI ASCII grid)");
    rast_cmd->add_option("--threshold", rast.threshold, "settlement binarization threshold");
    rast_cmd->add_option("--max-cells", rast.max_cells, "cap on cells per mask");
    rast_cmd->add_option("--out", rast.out, "output counts CSV");

    DensityArgs dens;
    auto* dens_cmd = app.add_subcommand("density", "compute both density models per region");
    dens_cmd->add_option("--regions", dens.regions, "region table CSV")->required();
    dens_cmd->add_option("--boundaries", dens.boundaries, "GeoJSON boundaries (raster route)");
    dens_cmd->add_option("--id-property", dens.id_property, "feature property carrying the region id");
    dens_cmd->add_option("--settlement", dens.settlement, "settlement raster (raster route)");
    dens_cmd->add_option("--threshold", dens.threshold, "settlement binarization threshold");
    dens_cmd->add_option("--max-cells", dens.max_cells, "cap on cells per mask");
    dens_cmd->add_option("--out", dens.out, "output densities CSV");

    ConfigArgs corr, rep, full;
    auto* corr_cmd = app.add_subcommand("correlate", "run the statistical battery only");
    corr_cmd->add_option("--config", corr.config, "run configuration TOML")->required();
    corr_cmd->add_option("--out", corr.out, "output directory (overrides config)");
    corr_cmd->add_option("--densities", corr.densities, "reuse a previously written densities.csv");
    auto* rep_cmd = app.add_subcommand("report", "emit tables, summary and SVG plots");
    rep_cmd->add_option("--config", rep.config, "run configuration TOML")->required();
    rep_cmd->add_option("--out", rep.out, "output directory (overrides config)");
    rep_cmd->add_option("--densities", rep.densities, "reuse a previously written densities.csv");
    auto* run_cmd = app.add_subcommand("run", "full pipeline: densities, battery, tables, plots");
    run_cmd->add_option("--config", full.config, "run configuration TOML")->required();
    run_cmd->add_option("--out", full.out, "output directory (overrides config)");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (rast_cmd->parsed()) return cmd_rasterize(rast, verbose);
        if (dens_cmd->parsed()) return cmd_density(dens, verbose);
        if (corr_cmd->parsed()) return cmd_run(corr, verbose, true);
        if (rep_cmd->parsed()) return cmd_run(rep, verbose, false);
        if (run_cmd->parsed()) return cmd_run(full, verbose, false);
    } catch (const zonal::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const zonal::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const zonal::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const zonal::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitValidation;
    } catch (const zonal::DegenerateError& e) {
        std::cerr << "degenerate input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
