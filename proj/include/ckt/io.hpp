// Deterministic output writers: RFC-4180 CSV, binary PGM (P5) heatmaps,
// SVG 1.1 line plots, JSON-lines, and FNV-1a content hashing. All numeric
// formatting goes through one shortest-round-trip printer so that byte
// output depends only on the data.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ckt/grid.hpp"

namespace ckt {

std::string format_double(double v);

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

std::string csv_quote(const std::string& field);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// one row per cell: coordinates then value(s)
void write_density_csv(const std::filesystem::path& path, const DensityGrid& f);
void write_oneform_csv(const std::filesystem::path& path, const OneFormGrid& Pi);

// P5, 8-bit, gray scaled to [min,max] of the data; symplectic grids only,
// rows run from p max down to p min
void write_pgm_heatmap(const std::filesystem::path& path, const DensityGrid& f);

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

// single-panel SVG 1.1 polyline plot; throws std::invalid_argument on empty
// or non-finite data
void write_svg_lineplot(const std::filesystem::path& path, const std::string& title,
                        const std::vector<PlotSeries>& series);

class JsonlWriter {
  public:
    explicit JsonlWriter(std::filesystem::path path);
    void write_line(const std::string& json_object);
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

} // namespace ckt
