#include "gendiff/io.hpp"

#include "gendiff/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

namespace gendiff::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& field, std::size_t line, const std::string& what) {
  const std::string t = trim(field);
  if (t.empty()) throw ParseError("line " + std::to_string(line) + ": empty " + what, line);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    throw ParseError("line " + std::to_string(line) + ": cannot parse " + what + " '" + t + "'", line);
  return v;
}

long long parse_integer(const std::string& field, std::size_t line, const std::string& what) {
  const std::string t = trim(field);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw ParseError("line " + std::to_string(line) + ": cannot parse " + what + " '" + t + "'", line);
  return v;
}

unsigned long long parse_unsigned(const std::string& field, std::size_t line, const std::string& what) {
  const std::string t = trim(field);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || t.front() == '-' || end != t.c_str() + t.size() || errno == ERANGE)
    throw ParseError("line " + std::to_string(line) + ": cannot parse " + what + " '" + t + "'", line);
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  return is;
}

void write_grid_sidecar(const fs::path& csv, const GridSpec& g, const std::string& kind) {
  write_json(sidecar_path(csv),
             {{"schema_version", kSchemaVersion}, {"kind", kind}, {"L", g.half_width()}, {"N", g.size()}});
}

GridSpec read_grid_sidecar(const fs::path& csv, const std::string& kind) {
  const json j = read_json(sidecar_path(csv));
  try {
    if (j.contains("kind") && j.at("kind").get<std::string>() != kind)
      throw ParseError("sidecar for '" + csv.string() + "' describes a " +
                           j.at("kind").get<std::string>() + ", expected a " + kind, 0);
    return make_grid(j.at("L").get<double>(), j.at("N").get<std::size_t>());
  } catch (const json::exception& e) {
    throw ParseError("sidecar for '" + csv.string() + "' is malformed: " + e.what(), 0);
  }
}

// Shared reader for `<first>,re,im` tables. Returns the first column and
// the complex values.
std::pair<std::vector<double>, std::vector<cplx>> read_complex_table(const fs::path& path,
                                                                     const std::string& first) {
  std::ifstream is = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::vector<double> col;
  std::vector<cplx> vals;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (!have_header) {
      if (f.size() != 3 || trim(f[0]) != first || trim(f[1]) != "re" || trim(f[2]) != "im")
        throw ParseError("line " + std::to_string(lineno) + ": expected header '" + first + ",re,im'",
                         lineno);
      have_header = true;
      continue;
    }
    if (f.size() != 3)
      throw ParseError("line " + std::to_string(lineno) + ": expected 3 fields, found " +
                           std::to_string(f.size()),
                       lineno);
    col.push_back(parse_double(f[0], lineno, first));
    vals.emplace_back(parse_double(f[1], lineno, "re"), parse_double(f[2], lineno, "im"));
  }
  if (!have_header) throw ParseError("'" + path.string() + "' is empty", lineno);
  return {std::move(col), std::move(vals)};
}

} // namespace

fs::path sidecar_path(const fs::path& csv) { return fs::path(csv.string() + ".json"); }

void write_json(const fs::path& path, const json& j) {
  std::ofstream os = open_out(path);
  os << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream is = open_in(path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what(), 0);
  }
}

void write_signal(const fs::path& path, const Signal& f) {
  std::ofstream os = open_out(path);
  os << "index,re,im\n";
  for (std::size_t j = 0; j < f.size(); ++j)
    os << j << ',' << fmt_double(f[j].real()) << ',' << fmt_double(f[j].imag()) << '\n';
  write_grid_sidecar(path, f.grid(), "signal");
}

Signal read_signal(const fs::path& path) {
  const GridSpec g = read_grid_sidecar(path, "signal");
  auto [idx, vals] = read_complex_table(path, "index");
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] != static_cast<double>(j))
      throw ParseError("line " + std::to_string(j + 2) + ": expected index " + std::to_string(j), j + 2);
  }
  if (vals.size() != g.size())
    throw ParseError("grid mismatch: '" + path.string() + "' has " + std::to_string(vals.size()) +
                         " samples but its header declares N=" + std::to_string(g.size()),
                     0);
  return Signal(g, std::move(vals));
}

void write_spectrum(const fs::path& path, const Spectrum& F) {
  std::ofstream os = open_out(path);
  os << "x,re,im\n";
  for (std::size_t i = 0; i < F.size(); ++i)
    os << fmt_double(F.frequency(i)) << ',' << fmt_double(F[i].real()) << ','
       << fmt_double(F[i].imag()) << '\n';
  write_grid_sidecar(path, F.grid(), "spectrum");
}

Spectrum read_spectrum(const fs::path& path) {
  const GridSpec g = read_grid_sidecar(path, "spectrum");
  auto [xs, vals] = read_complex_table(path, "x");
  if (vals.size() != g.size())
    throw ParseError("grid mismatch: '" + path.string() + "' has " + std::to_string(vals.size()) +
                         " coefficients but its header declares N=" + std::to_string(g.size()),
                     0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - g.frequency(i)) > 1e-9 * (1.0 + std::abs(g.frequency(i))))
      throw ParseError("line " + std::to_string(i + 2) + ": frequency does not match the grid node",
                       i + 2);
  }
  return Spectrum(g, std::move(vals));
}

json to_json(const MembershipReport& r) {
  json q = std::isfinite(r.growth_exponent) ? json(r.growth_exponent) : json(nullptr);
  return {{"schema_version", kSchemaVersion},
          {"I", {r.integrals[0], r.integrals[1], r.integrals[2]}},
          {"q", q},
          {"verdict", to_string(r.verdict)},
          {"excluded_mass", r.excluded_mass},
          {"on_node_mass", r.on_node_mass}};
}

MembershipReport membership_report_from_json(const json& j) {
  MembershipReport r;
  try {
    const auto& I = j.at("I");
    for (std::size_t k = 0; k < 3; ++k) r.integrals[k] = I.at(k).get<double>();
    r.growth_exponent =
        j.at("q").is_null() ? std::numeric_limits<double>::infinity() : j.at("q").get<double>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.excluded_mass = j.at("excluded_mass").get<double>();
    r.on_node_mass = j.value("on_node_mass", 0.0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed membership report: ") + e.what(), 0);
  }
  return r;
}

void write_decomposition(const fs::path& dir, const DecompositionResult& d, const json& extra) {
  fs::create_directories(dir);
  write_json(dir / "shifts.json", {{"schema_version", kSchemaVersion}, {"shifts", d.shifts}});
  for (std::size_t k = 0; k < d.components.size(); ++k)
    write_signal(dir / ("component_" + std::to_string(k + 1) + ".csv"), d.components[k]);
  write_signal(dir / "residual.csv", d.residual);
  json report = {{"schema_version", kSchemaVersion},
                 {"relative_residual", d.relative_residual},
                 {"component_count", d.components.size()},
                 {"degenerate_nodes", d.degenerate_nodes}};
  report.update(extra);
  write_json(dir / "report.json", report);
}

DecompositionResult read_decomposition(const fs::path& dir) {
  const json shifts = read_json(dir / "shifts.json");
  const json report = read_json(dir / "report.json");
  Signal residual = read_signal(dir / "residual.csv");
  DecompositionResult d{shifts.at("shifts").get<std::vector<double>>(), {}, residual,
                        report.at("relative_residual").get<double>(),
                        report.at("degenerate_nodes").get<std::vector<double>>()};
  for (std::size_t k = 0; k < d.shifts.size(); ++k)
    d.components.push_back(read_signal(dir / ("component_" + std::to_string(k + 1) + ".csv")));
  return d;
}

void write_xy_csv(const fs::path& path, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("x and value columns differ in length");
  std::ofstream os = open_out(path);
  os << "x,value\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    os << fmt_double(x[i]) << ',' << (std::isfinite(y[i]) ? fmt_double(y[i]) : "nan") << '\n';
}

void RunConfig::validate() const {
  params.validate();
  (void)grid();
  if (!(shift_window > 0.0)) throw std::invalid_argument("shift window must be positive");
  if (shift_count && *shift_count < 1) throw std::invalid_argument("shift count must be at least 1");
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "# gendiff run configuration\n"
     << "alpha = " << fmt_double(c.params.alpha) << '\n'
     << "beta = " << fmt_double(c.params.beta) << '\n'
     << "order = " << c.params.order << '\n'
     << "eps0 = " << fmt_double(c.params.eps0) << '\n'
     << "tau = " << fmt_double(c.params.tau) << '\n'
     << "qtol = " << fmt_double(c.params.q_tol) << '\n'
     << "grid_l = " << fmt_double(c.grid_l) << '\n'
     << "grid_n = " << c.grid_n << '\n'
     << "shift_window = " << fmt_double(c.shift_window) << '\n'
     << "shift_count = " << (c.shift_count ? std::to_string(*c.shift_count) : "auto") << '\n'
     << "seed = " << c.seed << '\n'
     << "output_dir = " << c.output_dir << '\n';
  return os.str();
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected 'key = value'", lineno);
    const std::string key = trim(body.substr(0, eq));
    const std::string val = trim(body.substr(eq + 1));
    if (key == "alpha") c.params.alpha = parse_double(val, lineno, key);
    else if (key == "beta") c.params.beta = parse_double(val, lineno, key);
    else if (key == "order") c.params.order = static_cast<int>(parse_integer(val, lineno, key));
    else if (key == "eps0") c.params.eps0 = parse_double(val, lineno, key);
    else if (key == "tau") c.params.tau = parse_double(val, lineno, key);
    else if (key == "qtol") c.params.q_tol = parse_double(val, lineno, key);
    else if (key == "grid_l") c.grid_l = parse_double(val, lineno, key);
    else if (key == "grid_n") c.grid_n = static_cast<std::size_t>(parse_integer(val, lineno, key));
    else if (key == "shift_window") c.shift_window = parse_double(val, lineno, key);
    else if (key == "shift_count") {
      if (val == "auto") c.shift_count.reset();
      else c.shift_count = static_cast<int>(parse_integer(val, lineno, key));
    } else if (key == "seed") c.seed = parse_unsigned(val, lineno, key);
    else if (key == "output_dir") c.output_dir = val;
    else throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'", lineno);
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream is = open_in(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

} // namespace gendiff::io
