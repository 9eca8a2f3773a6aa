#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "igbs/datamodel.hpp"

namespace igbs {

enum class SampleType { U16, F32 };

/// Sidecar `<name>.hdr.json` describing a band-sequential little-endian raw file.
struct CubeHeader {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t bands = 0;
    SampleType dtype = SampleType::F32;

    std::size_t sample_bytes() const { return dtype == SampleType::U16 ? 2 : 4; }
    std::uintmax_t expected_bytes() const { return std::uintmax_t{rows} * cols * bands * sample_bytes(); }
};

CubeHeader read_cube_header(const std::filesystem::path& header_path);
void write_cube_header(const CubeHeader& header, const std::filesystem::path& header_path);

/// `foo.hdr.json` -> `foo.raw`; any other name gets `.raw` appended.
std::filesystem::path default_raw_path(const std::filesystem::path& header_path);

/// Throws DataError on size mismatch, unknown dtype or non-finite samples;
/// never returns a partial cube.
HyperCube load_cube(const std::filesystem::path& header_path, const std::filesystem::path& raw_path);
HyperCube load_cube(const std::filesystem::path& header_path);

/// Writes header and raw samples. F32 round-trips bit-exactly; U16 rounds and clamps.
void save_cube(const HyperCube& cube, const std::filesystem::path& header_path, const std::filesystem::path& raw_path,
               SampleType dtype = SampleType::F32);

/// Reads a `.csv` grid or, for any other extension, a little-endian u16 row-major grid.
GroundTruth load_gt(const std::filesystem::path& path, std::size_t rows, std::size_t cols);
void save_gt_raw(const GroundTruth& gt, const std::filesystem::path& path);
void save_gt_csv(const GroundTruth& gt, const std::filesystem::path& path);

using Rgb = std::array<std::uint8_t, 3>;

/// Fixed class palette: label 0 is black, labels 1..20 take the table in
/// io.cpp, higher labels wrap around it.
Rgb palette_color(Label label);

/// Writes a binary PPM (P6) of a row-major label grid.
void export_map(std::span<const Label> labels, std::size_t rows, std::size_t cols,
                const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace igbs
