#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zonal/errors.hpp"
#include "zonal/geometry.hpp"

namespace zonal {

// Real-valued cell grid; values are stored bottom-up (row 0 = southmost) to
// match GridSpec's lower-left origin.
struct RasterGrid {
    GridSpec spec;
    std::vector<double> values;
    std::optional<double> nodata;

    double at(std::size_t row, std::size_t col) const { return values[row * spec.n_cols + col]; }
    bool is_nodata(double v) const { return (nodata && v == *nodata) || std::isnan(v); }
};

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace detail

// ESRI ASCII Grid reader. Header keys are case-insensitive; the value block is
// whitespace-separated, row-major from the top (north) row down.
inline RasterGrid load_ascii_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open raster file: " + path);

    std::optional<double> ncols, nrows, xll, yll, cellsize, nodata;
    std::string token;
    double first_value = 0.0;
    bool have_first_value = false;
    // header: key/value pairs until the first purely numeric token
    while (in >> token) {
        char* endp = nullptr;
        const double num = std::strtod(token.c_str(), &endp);
        if (endp && *endp == '\0') {
            first_value = num;
            have_first_value = true;
            break;
        }
        const std::string key = detail::lower(token);
        double val;
        if (!(in >> val))
            throw ParseError(path + ": header key '" + token + "' has no numeric value");
        if (key == "ncols") ncols = val;
        else if (key == "nrows") nrows = val;
        else if (key == "xllcorner") xll = val;
        else if (key == "yllcorner") yll = val;
        else if (key == "cellsize") cellsize = val;
        else if (key == "nodata_value") nodata = val;
        else throw ParseError(path + ": unknown header key '" + token + "'");
    }
    for (const auto& [name, field] :
         {std::pair{"ncols", &ncols}, {"nrows", &nrows}, {"xllcorner", &xll},
          {"yllcorner", &yll}, {"cellsize", &cellsize}}) {
        if (!field->has_value())
            throw ParseError(path + ": missing required header key '" + std::string(name) + "'");
    }
    if (*ncols < 1 || *nrows < 1 || *cellsize <= 0)
        throw ValidationError(path + ": ncols/nrows must be >= 1 and cellsize > 0");

    RasterGrid grid;
    grid.spec.origin_x = *xll;
    grid.spec.origin_y = *yll;
    grid.spec.cell_size = *cellsize;
    grid.spec.n_cols = static_cast<std::size_t>(*ncols);
    grid.spec.n_rows = static_cast<std::size_t>(*nrows);
    grid.nodata = nodata;

    const std::size_t expected = grid.spec.cell_count();
    std::vector<double> top_down;
    top_down.reserve(expected);
    if (have_first_value) top_down.push_back(first_value);
    double v;
    while (in >> v) top_down.push_back(v);
    if (!in.eof()) {
        in.clear();
        in >> token;
        throw ParseError(path + ": non-numeric cell value '" + token + "'");
    }
    if (top_down.size() != expected)
        throw ParseError(path + ": expected " + std::to_string(expected) + " cell values, found " +
                         std::to_string(top_down.size()));

    // flip to bottom-up storage
    grid.values.resize(expected);
    for (std::size_t r = 0; r < grid.spec.n_rows; ++r) {
        const std::size_t src = (grid.spec.n_rows - 1 - r) * grid.spec.n_cols;
        std::copy_n(top_down.begin() + static_cast<std::ptrdiff_t>(src), grid.spec.n_cols,
                    grid.values.begin() + static_cast<std::ptrdiff_t>(r * grid.spec.n_cols));
    }
    return grid;
}

// Inverse of load_ascii_grid; round-trips values exactly via max_digits10.
inline void write_ascii_grid(const RasterGrid& grid, std::ostream& out) {
    out.precision(17);
    out << "ncols " << grid.spec.n_cols << "\n"
        << "nrows " << grid.spec.n_rows << "\n"
        << "xllcorner " << grid.spec.origin_x << "\n"
        << "yllcorner " << grid.spec.origin_y << "\n"
        << "cellsize " << grid.spec.cell_size << "\n";
    if (grid.nodata) out << "NODATA_value " << *grid.nodata << "\n";
    for (std::size_t r = grid.spec.n_rows; r-- > 0;) {
        for (std::size_t c = 0; c < grid.spec.n_cols; ++c) {
            if (c) out << ' ';
            out << grid.at(r, c);
        }
        out << "\n";
    }
}

// Settlement membership: value >= threshold and not nodata.
inline BitMask binarize(const RasterGrid& grid, double threshold) {
    if (!std::isfinite(threshold)) throw ValidationError("binarize threshold must be finite");
    BitMask mask(grid.spec);
    for (std::size_t r = 0; r < grid.spec.n_rows; ++r)
        for (std::size_t c = 0; c < grid.spec.n_cols; ++c) {
            const double v = grid.at(r, c);
            if (!grid.is_nodata(v) && v >= threshold) mask.set(r, c);
        }
    return mask;
}

struct OverlayResult {
    std::size_t count = 0;
    bool disjoint = false;  // extents did not overlap; count forced to 0
};

// Number of cells set in both masks. Grids must share cell_size; when the
// lattices are offset, boundary cells are matched to the nearest settlement
// cell center (no interpolation).
inline OverlayResult overlay_count(const BitMask& settlement, const BitMask& boundary) {
    const GridSpec& s = settlement.spec();
    const GridSpec& b = boundary.spec();
    if (!s.same_cell_size(b))
        throw ValidationError("overlay_count: cell sizes differ beyond tolerance (" +
                              std::to_string(s.cell_size) + " vs " + std::to_string(b.cell_size) +
                              "); resample one grid first");
    OverlayResult result;
    if (s.origin_x >= b.origin_x + b.extent_x() || b.origin_x >= s.origin_x + s.extent_x() ||
        s.origin_y >= b.origin_y + b.extent_y() || b.origin_y >= s.origin_y + s.extent_y()) {
        result.disjoint = true;
        return result;
    }

    const double c = s.cell_size;
    const double col_off = (b.origin_x - s.origin_x) / c;
    const double row_off = (b.origin_y - s.origin_y) / c;
    const double col_shift = std::round(col_off);
    const double row_shift = std::round(row_off);
    const bool aligned = std::abs(col_off - col_shift) < 1e-9 && std::abs(row_off - row_shift) < 1e-9;

    for (std::size_t br = 0; br < b.n_rows; ++br) {
        double sr_f;
        if (aligned) {
            sr_f = static_cast<double>(br) + row_shift;
        } else {
            sr_f = std::round((b.row_center(br) - s.origin_y) / c - 0.5);
        }
        if (sr_f < 0 || sr_f >= static_cast<double>(s.n_rows)) continue;
        const std::size_t sr = static_cast<std::size_t>(sr_f);
        for (std::size_t bc = 0; bc < b.n_cols; ++bc) {
            if (!boundary.test(br, bc)) continue;
            double sc_f;
            if (aligned) {
                sc_f = static_cast<double>(bc) + col_shift;
            } else {
                sc_f = std::round((b.col_center(bc) - s.origin_x) / c - 0.5);
            }
            if (sc_f < 0 || sc_f >= static_cast<double>(s.n_cols)) continue;
            if (settlement.test(sr, static_cast<std::size_t>(sc_f))) ++result.count;
        }
    }
    return result;
}

}  // namespace zonal
