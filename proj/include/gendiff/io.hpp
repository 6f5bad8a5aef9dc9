// File formats: signals and spectra as CSV plus a JSON sidecar carrying the
// grid, JSON reports, decomposition directories, and the flat run-config.

#ifndef GENDIFF_IO_HPP
#define GENDIFF_IO_HPP

#include "gendiff/difference.hpp"
#include "gendiff/grid.hpp"
#include "gendiff/multiplier.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace gendiff::io {

inline constexpr int kSchemaVersion = 1;

/// Sidecar header path for a CSV file: "<path>.json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// CSV `index,re,im` plus sidecar {schema_version, kind, L, N}.
void write_signal(const std::filesystem::path& path, const Signal& f);
Signal read_signal(const std::filesystem::path& path);

/// CSV `x,re,im` plus sidecar, same shape as signals.
void write_spectrum(const std::filesystem::path& path, const Spectrum& F);
Spectrum read_spectrum(const std::filesystem::path& path);

nlohmann::json to_json(const MembershipReport& r);
MembershipReport membership_report_from_json(const nlohmann::json& j);

/// shifts.json, component_<k>.csv (k from 1), residual.csv, report.json.
/// Keys of `extra` are merged into report.json.
void write_decomposition(const std::filesystem::path& dir, const DecompositionResult& d,
                         const nlohmann::json& extra = nlohmann::json::object());
DecompositionResult read_decomposition(const std::filesystem::path& dir);

/// Plot-ready two-column CSV `x,value`; non-finite values print as nan.
void write_xy_csv(const std::filesystem::path& path, const std::vector<double>& x,
                  const std::vector<double>& y);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

struct RunConfig {
  Params params;
  double grid_l = 16.0;
  std::size_t grid_n = 4096;
  double shift_window = 1.0;
  /// Unset means 4s+1.
  std::optional<int> shift_count;
  unsigned long long seed = 1;
  std::string output_dir = "out";

  int effective_shift_count() const { return shift_count.value_or(4 * params.order + 1); }
  GridSpec grid() const { return make_grid(grid_l, grid_n); }
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Flat `key = value` text, one key per line, '#' comments.
std::string serialize_config(const RunConfig& c);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

} // namespace gendiff::io

#endif
