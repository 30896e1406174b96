#include "lzs/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lzs {

namespace {

const char* units_line =
    "# units: energy E_J, time hbar/E_J, flux Phi_0, temperature E_J/k_B\n";

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_to_string(const LzsMap& map) {
  std::ostringstream out;
  out << units_line;
  out << "# f_dc, f_ac in Phi_0; theta in rad; times in tau = 2 pi / omega0\n";
  for (size_t i = 0; i < map.columns.size(); ++i) {
    if (i) out << ",";
    out << map.columns[i];
  }
  out << "\n";
  for (int r = 0; r < map.values.rows(); ++r) {
    for (int c = 0; c < map.values.cols(); ++c) {
      if (c) out << ",";
      out << fmt_g(map.values(r, c));
    }
    out << "\n";
  }
  return out.str();
}

std::string meta_to_string(const RunConfig& config, const LzsMap& map, double wall_seconds) {
  std::ostringstream out;
  out << "# lzs " << version_string << "\n";
  out << units_line;
  out << "# wall_time_s = " << fmt_g(wall_seconds) << "\n";
  for (const auto& [key, value] : map.metadata) out << "# " << key << " = " << value << "\n";
  out << "# resolved configuration follows; this file can be passed back as --config\n";
  out << serialize_config(config);
  return out.str();
}

std::string meta_path_for(const std::string& output_path) {
  const size_t slash = output_path.find_last_of("/\\");
  const size_t dot = output_path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    return output_path.substr(0, dot) + ".meta";
  return output_path + ".meta";
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write to " + tmp);
    out << content;
    if (!out.good()) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace lzs
