#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "zonal/errors.hpp"

namespace zonal {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Closed vertex ring in projected meters; front() == back() after normalization.
using Ring = std::vector<Point>;

struct BoundingBox {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void expand(const Point& p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    bool valid() const { return min_x <= max_x && min_y <= max_y; }
};

// Signed area of a closed ring (shoelace); positive for counter-clockwise.
inline double ring_signed_area(const Ring& ring) {
    double twice = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i)
        twice += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
    return 0.5 * twice;
}

// Closes the ring if needed and checks the BoundaryGeometry ring invariants.
inline Ring normalize_ring(Ring ring, const std::string& context) {
    if (!ring.empty() && (ring.front().x != ring.back().x || ring.front().y != ring.back().y))
        ring.push_back(ring.front());
    std::size_t distinct = 0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        if (!std::isfinite(ring[i].x) || !std::isfinite(ring[i].y))
            throw ValidationError(context + ": non-finite coordinate in ring");
        bool dup = false;
        for (std::size_t j = 0; j < i; ++j)
            if (ring[j].x == ring[i].x && ring[j].y == ring[i].y) { dup = true; break; }
        if (!dup) ++distinct;
    }
    if (distinct < 3)
        throw ValidationError(context + ": degenerate ring with fewer than 3 distinct vertices");
    if (ring_signed_area(ring) == 0.0)
        throw ValidationError(context + ": ring has zero signed area");
    return ring;
}

// Projected administrative boundary: outer rings plus holes, even-odd semantics.
struct BoundaryGeometry {
    std::string region_id;
    std::vector<Ring> outer_rings;
    std::vector<Ring> holes;

    BoundingBox bounding_box() const {
        BoundingBox bb;
        for (const auto& ring : outer_rings)
            for (const auto& p : ring) bb.expand(p);
        return bb;
    }
};

// Georeferenced cell grid; origin is the lower-left corner, rows run south->north.
struct GridSpec {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double cell_size = 1.0;
    std::size_t n_cols = 0;
    std::size_t n_rows = 0;

    std::size_t cell_count() const { return n_cols * n_rows; }
    double col_center(std::size_t col) const { return origin_x + (static_cast<double>(col) + 0.5) * cell_size; }
    double row_center(std::size_t row) const { return origin_y + (static_cast<double>(row) + 0.5) * cell_size; }
    double extent_x() const { return static_cast<double>(n_cols) * cell_size; }
    double extent_y() const { return static_cast<double>(n_rows) * cell_size; }

    bool same_cell_size(const GridSpec& other, double rel_tol = 1e-6) const {
        return std::abs(cell_size - other.cell_size) <=
               rel_tol * std::max(std::abs(cell_size), std::abs(other.cell_size));
    }

    bool operator==(const GridSpec&) const = default;
};

// Row-major bit grid, one bit per cell.
class BitMask {
public:
    BitMask() = default;
    explicit BitMask(GridSpec spec)
        : spec_(spec), words_((spec.cell_count() + 63) / 64, 0ull) {}

    const GridSpec& spec() const { return spec_; }

    bool test(std::size_t row, std::size_t col) const {
        const std::size_t i = row * spec_.n_cols + col;
        return (words_[i >> 6] >> (i & 63)) & 1ull;
    }
    void set(std::size_t row, std::size_t col) {
        const std::size_t i = row * spec_.n_cols + col;
        words_[i >> 6] |= 1ull << (i & 63);
    }
    void set_range(std::size_t row, std::size_t col_begin, std::size_t col_end) {
        for (std::size_t c = col_begin; c < col_end; ++c) set(row, c);
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const BitMask& other) const = default;

private:
    GridSpec spec_;
    std::vector<std::uint64_t> words_;
};

inline std::size_t count_pixels(const BitMask& mask) { return mask.count(); }

constexpr std::size_t kDefaultMaxCells = 500'000'000;

// Grid covering the bounding box, with the origin snapped down to a multiple
// of cell_size so identical geometry always lands on the same lattice.
inline GridSpec grid_for_bounds(const BoundingBox& bb, double cell_size,
                                std::size_t max_cells = kDefaultMaxCells) {
    if (!(cell_size > 0.0))
        throw ValidationError("cell_size must be > 0");
    if (!bb.valid())
        throw ValidationError("empty bounding box");
    GridSpec spec;
    spec.cell_size = cell_size;
    spec.origin_x = std::floor(bb.min_x / cell_size) * cell_size;
    spec.origin_y = std::floor(bb.min_y / cell_size) * cell_size;
    spec.n_cols = static_cast<std::size_t>(std::max(1.0, std::ceil((bb.max_x - spec.origin_x) / cell_size)));
    spec.n_rows = static_cast<std::size_t>(std::max(1.0, std::ceil((bb.max_y - spec.origin_y) / cell_size)));
    if (spec.n_cols != 0 && spec.cell_count() / spec.n_cols != spec.n_rows)
        throw ResourceLimitError("mask size overflows cell counter");
    if (spec.cell_count() > max_cells)
        throw ResourceLimitError("mask of " + std::to_string(spec.n_cols) + "x" +
                                 std::to_string(spec.n_rows) + " cells exceeds cap of " +
                                 std::to_string(max_cells));
    return spec;
}

// Sub-grid of `base` whose lattice is identical and which covers `bb`.
inline GridSpec aligned_subgrid(const GridSpec& base, const BoundingBox& bb,
                                std::size_t max_cells = kDefaultMaxCells) {
    if (!bb.valid()) throw ValidationError("empty bounding box");
    const double c = base.cell_size;
    GridSpec spec;
    spec.cell_size = c;
    spec.origin_x = base.origin_x + std::floor((bb.min_x - base.origin_x) / c) * c;
    spec.origin_y = base.origin_y + std::floor((bb.min_y - base.origin_y) / c) * c;
    spec.n_cols = static_cast<std::size_t>(std::max(1.0, std::ceil((bb.max_x - spec.origin_x) / c)));
    spec.n_rows = static_cast<std::size_t>(std::max(1.0, std::ceil((bb.max_y - spec.origin_y) / c)));
    if (spec.cell_count() > max_cells)
        throw ResourceLimitError("mask exceeds configured cell cap");
    return spec;
}

namespace detail {

// Scanline fill, even-odd rule. A cell is set iff its center is inside the
// polygon set. Edge cases follow the half-open convention: crossings use
// ylo <= yc < yhi, and a span [x_enter, x_exit) includes its left border and
// excludes its right one, so adjacent regions never share a center.
inline void fill_scanline(BitMask& mask, const std::vector<const Ring*>& rings) {
    const GridSpec& spec = mask.spec();
    std::vector<double> xs;
    for (std::size_t row = 0; row < spec.n_rows; ++row) {
        const double yc = spec.row_center(row);
        xs.clear();
        for (const Ring* ring : rings) {
            const Ring& r = *ring;
            for (std::size_t i = 0; i + 1 < r.size(); ++i) {
                const Point& p = r[i];
                const Point& q = r[i + 1];
                if (p.y == q.y) continue;
                const double ylo = std::min(p.y, q.y);
                const double yhi = std::max(p.y, q.y);
                if (!(ylo <= yc && yc < yhi)) continue;
                xs.push_back(p.x + (yc - p.y) * (q.x - p.x) / (q.y - p.y));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            // columns with x_enter <= center < x_exit
            const double t_enter = (xs[k] - spec.origin_x) / spec.cell_size - 0.5;
            const double t_exit = (xs[k + 1] - spec.origin_x) / spec.cell_size - 0.5;
            const double lo = std::ceil(t_enter);
            const double hi = std::ceil(t_exit);
            const std::size_t begin =
                lo <= 0.0 ? 0 : std::min(static_cast<std::size_t>(lo), spec.n_cols);
            const std::size_t end =
                hi <= 0.0 ? 0 : std::min(static_cast<std::size_t>(hi), spec.n_cols);
            if (begin < end) mask.set_range(row, begin, end);
        }
    }
}

}  // namespace detail

// Rasterizes onto an explicit grid. Deterministic: same inputs, same bits.
inline BitMask rasterize_onto(const BoundaryGeometry& geom, const GridSpec& spec) {
    if (!(spec.cell_size > 0.0)) throw ValidationError("cell_size must be > 0");
    BitMask mask(spec);
    std::vector<const Ring*> rings;
    rings.reserve(geom.outer_rings.size() + geom.holes.size());
    for (const auto& r : geom.outer_rings) rings.push_back(&r);
    for (const auto& r : geom.holes) rings.push_back(&r);
    detail::fill_scanline(mask, rings);
    return mask;
}

inline BitMask rasterize(const BoundaryGeometry& geom, double cell_size,
                         std::size_t max_cells = kDefaultMaxCells) {
    return rasterize_onto(geom, grid_for_bounds(geom.bounding_box(), cell_size, max_cells));
}

}  // namespace zonal
