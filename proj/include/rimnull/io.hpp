#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace rimnull {

// FNV-1a 64-bit hash, used to stamp outputs with the scenario they came from.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Shortest round-trip decimal representation of a double (std::to_chars), so
// repeated runs produce byte-identical files.
std::string format_double(double v);

// Metadata stamped into every output file.
struct OutputMeta {
    std::string config_hash;
    std::string artifact_version;
    double f_over_d = 0.0;
    std::string field_scale;
};

// '#'-prefixed comment block for CSV outputs.
std::string meta_csv_block(const OutputMeta& meta);

// Writes a file atomically enough for our purposes (parent dirs created).
void write_file(const std::string& path, const std::string& contents);

}  // namespace rimnull
