#pragma once

#include <string>

#include "lzs/config.hpp"
#include "lzs/sweep.hpp"

namespace lzs {

// CSV with a units comment header, a column-name row, and one record per
// grid row. Numbers use 17 significant digits; inf and nan appear literally.
std::string csv_to_string(const LzsMap& map);

// Metadata: run diagnostics as comment lines followed by the canonical
// config serialization, so the file can be fed back as --config to
// reproduce the values file bit-exactly.
std::string meta_to_string(const RunConfig& config, const LzsMap& map, double wall_seconds);

// out.csv -> out.meta (extension replaced, or .meta appended).
std::string meta_path_for(const std::string& output_path);

// Writes via a temporary file plus rename so readers never see partial output.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace lzs
