#pragma once

#include <stdexcept>
#include <string>

#include "lzs/sweep.hpp"

namespace lzs {

// Parse failure with 1-based source coordinates.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line_, int col_);
  int line;
  int col;
};

struct RunConfig {
  SweepSpec spec;
  std::string output;  // optional output path; command line may override
};

bool operator==(const RunConfig& a, const RunConfig& b);
inline bool operator!=(const RunConfig& a, const RunConfig& b) { return !(a == b); }

// Grammar: '#' starts a comment; sections are [device], [drive], [bath TAG],
// [coupling NAME], [run]; entries are key = value with value one of
// number | word | list(n1, n2, ...) | linspace(first, last, count).
// Unknown sections or keys are errors. The only required key is run.mode;
// all other keys have recorded defaults.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical form: every key explicit, grids as list(...) unless single-valued,
// numbers printed with 17 significant digits so parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

const char* run_mode_name(RunMode mode);
const char* coupling_kind_name(CouplingKind kind);

}  // namespace lzs
