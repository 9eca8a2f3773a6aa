#include "igbs/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "igbs/errors.hpp"

namespace igbs {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("failed writing " + path.string());
}

namespace {

std::vector<unsigned char> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing " + path.string());
}

std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t le32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<unsigned char>((v >> s) & 0xff));
}

std::size_t positive_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_unsigned() || j[key].get<std::size_t>() == 0) {
        throw DataError(std::string("cube header needs a positive integer '") + key + "'");
    }
    return j[key].get<std::size_t>();
}

}  // namespace

CubeHeader read_cube_header(const fs::path& header_path) {
    json j;
    try {
        j = json::parse(read_text_file(header_path));
    } catch (const json::exception& e) {
        throw DataError("cannot parse cube header " + header_path.string() + ": " + e.what());
    }
    CubeHeader h;
    h.rows = positive_field(j, "rows");
    h.cols = positive_field(j, "cols");
    h.bands = positive_field(j, "bands");
    const std::string dtype = j.value("dtype", "");
    if (dtype == "u16") h.dtype = SampleType::U16;
    else if (dtype == "f32") h.dtype = SampleType::F32;
    else throw DataError("unknown dtype '" + dtype + "' in " + header_path.string() + " (expected u16 or f32)");
    if (j.value("interleave", "bsq") != "bsq") throw DataError("only band-sequential (bsq) interleave is supported");
    if (j.value("byte_order", "little") != "little") throw DataError("only little-endian raw files are supported");
    return h;
}

void write_cube_header(const CubeHeader& header, const fs::path& header_path) {
    json j;
    j["rows"] = header.rows;
    j["cols"] = header.cols;
    j["bands"] = header.bands;
    j["dtype"] = header.dtype == SampleType::U16 ? "u16" : "f32";
    j["interleave"] = "bsq";
    j["byte_order"] = "little";
    write_text_file(header_path, j.dump(2) + "\n");
}

fs::path default_raw_path(const fs::path& header_path) {
    const std::string s = header_path.string();
    const std::string suffix = ".hdr.json";
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return s.substr(0, s.size() - suffix.size()) + ".raw";
    }
    return s + ".raw";
}

HyperCube load_cube(const fs::path& header_path, const fs::path& raw_path) {
    const CubeHeader h = read_cube_header(header_path);
    std::error_code ec;
    const auto actual = fs::file_size(raw_path, ec);
    if (ec) throw DataError("cannot stat " + raw_path.string() + ": " + ec.message());
    if (actual != h.expected_bytes()) {
        throw DataError("raw file " + raw_path.string() + " has " + std::to_string(actual) + " bytes, expected " +
                        std::to_string(h.expected_bytes()));
    }
    const auto bytes = read_bytes(raw_path);
    if (bytes.size() != h.expected_bytes()) throw DataError("short read on " + raw_path.string());

    const std::size_t count = h.rows * h.cols * h.bands;
    std::vector<float> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (h.dtype == SampleType::U16) {
            values[i] = static_cast<float>(le16(&bytes[2 * i]));
        } else {
            values[i] = std::bit_cast<float>(le32(&bytes[4 * i]));
            if (!std::isfinite(values[i])) {
                throw DataError("non-finite sample in band " + std::to_string(i / (h.rows * h.cols)) + " of " +
                                raw_path.string());
            }
        }
    }
    return HyperCube(h.bands, h.rows, h.cols, std::move(values));
}

HyperCube load_cube(const fs::path& header_path) { return load_cube(header_path, default_raw_path(header_path)); }

void save_cube(const HyperCube& cube, const fs::path& header_path, const fs::path& raw_path, SampleType dtype) {
    CubeHeader h{cube.rows(), cube.cols(), cube.bands(), dtype};
    std::vector<unsigned char> bytes;
    bytes.reserve(h.expected_bytes());
    for (float v : cube.values()) {
        if (dtype == SampleType::U16) {
            const double r = std::round(static_cast<double>(v));
            put16(bytes, static_cast<std::uint16_t>(std::clamp(r, 0.0, 65535.0)));
        } else {
            put32(bytes, std::bit_cast<std::uint32_t>(v));
        }
    }
    write_cube_header(h, header_path);
    write_bytes(raw_path, bytes);
}

namespace {

GroundTruth parse_gt_csv(const fs::path& path, std::size_t rows, std::size_t cols) {
    std::istringstream in(read_text_file(path));
    std::vector<Label> labels;
    labels.reserve(rows * cols);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t fields = 0;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            long long v = 0;
            try {
                std::size_t used = 0;
                v = std::stoll(cell, &used);
                if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::logic_error&) {
                throw DataError("bad label '" + cell + "' at row " + std::to_string(row) + " of " + path.string());
            }
            if (v < 0) throw DataError("negative label at row " + std::to_string(row) + " of " + path.string());
            if (v > std::numeric_limits<Label>::max()) throw DataError("label exceeds 65535 in " + path.string());
            labels.push_back(static_cast<Label>(v));
            ++fields;
        }
        if (fields != cols) {
            throw DataError("row " + std::to_string(row) + " of " + path.string() + " has " + std::to_string(fields) +
                            " columns, expected " + std::to_string(cols));
        }
        ++row;
    }
    if (row != rows) {
        throw DataError(path.string() + " has " + std::to_string(row) + " rows, expected " + std::to_string(rows));
    }
    return GroundTruth(rows, cols, std::move(labels));
}

}  // namespace

GroundTruth load_gt(const fs::path& path, std::size_t rows, std::size_t cols) {
    if (path.extension() == ".csv") return parse_gt_csv(path, rows, cols);

    std::error_code ec;
    const auto actual = fs::file_size(path, ec);
    if (ec) throw DataError("cannot stat " + path.string() + ": " + ec.message());
    const std::uintmax_t expected = std::uintmax_t{rows} * cols * 2;
    if (actual != expected) {
        throw DataError("ground truth " + path.string() + " has " + std::to_string(actual) + " bytes, expected " +
                        std::to_string(expected) + " for a " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " grid");
    }
    const auto bytes = read_bytes(path);
    std::vector<Label> labels(rows * cols);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = le16(&bytes[2 * i]);
    return GroundTruth(rows, cols, std::move(labels));
}

void save_gt_raw(const GroundTruth& gt, const fs::path& path) {
    std::vector<unsigned char> bytes;
    bytes.reserve(gt.pixels() * 2);
    for (Label l : gt.labels()) put16(bytes, l);
    write_bytes(path, bytes);
}

void save_gt_csv(const GroundTruth& gt, const fs::path& path) {
    std::string text;
    for (std::size_t r = 0; r < gt.rows(); ++r) {
        for (std::size_t c = 0; c < gt.cols(); ++c) {
            if (c) text += ',';
            text += std::to_string(gt.at(r, c));
        }
        text += '\n';
    }
    write_text_file(path, text);
}

namespace {

constexpr Rgb kPalette[] = {
    {255, 0, 0},     {0, 255, 0},     {0, 0, 255},     {255, 255, 0},   {0, 255, 255},
    {255, 0, 255},   {192, 192, 192}, {128, 128, 128}, {128, 0, 0},     {128, 128, 0},
    {0, 128, 0},     {128, 0, 128},   {0, 128, 128},   {0, 0, 128},     {255, 165, 0},
    {255, 215, 180}, {70, 130, 180},  {210, 105, 30},  {154, 205, 50},  {255, 255, 255},
};

}  // namespace

Rgb palette_color(Label label) {
    if (label == 0) return {0, 0, 0};
    return kPalette[(label - 1u) % std::size(kPalette)];
}

void export_map(std::span<const Label> labels, std::size_t rows, std::size_t cols, const fs::path& path) {
    if (rows == 0 || cols == 0 || labels.size() != rows * cols) {
        throw DataError("map data does not match a " + std::to_string(rows) + "x" + std::to_string(cols) + " grid");
    }
    const std::string header = "P6\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
    std::vector<unsigned char> bytes(header.begin(), header.end());
    bytes.reserve(header.size() + labels.size() * 3);
    for (Label l : labels) {
        const Rgb c = palette_color(l);
        bytes.insert(bytes.end(), c.begin(), c.end());
    }
    write_bytes(path, bytes);
}

}  // namespace igbs
