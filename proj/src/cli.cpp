#include "gendiff/cli.hpp"

#include "gendiff/difference.hpp"
#include "gendiff/errors.hpp"
#include "gendiff/io.hpp"
#include "gendiff/multiplier.hpp"
#include "gendiff/suites.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>

namespace gendiff::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Values bound to the shared flags; applied over the config file only when
// the flag was given.
struct CommonFlags {
  double alpha = 0, beta = 0, eps0 = 0, qtol = 0, grid_l = 0, shift_window = 0;
  int order = 0, shift_count = 0;
  std::size_t grid_n = 0;
  unsigned long long seed = 0;
  std::string out, config;

  CLI::Option* o_alpha = nullptr;
  CLI::Option* o_beta = nullptr;
  CLI::Option* o_order = nullptr;
  CLI::Option* o_eps0 = nullptr;
  CLI::Option* o_qtol = nullptr;
  CLI::Option* o_grid_l = nullptr;
  CLI::Option* o_grid_n = nullptr;
  CLI::Option* o_window = nullptr;
  CLI::Option* o_count = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_out = nullptr;
  CLI::Option* o_config = nullptr;

  void attach(CLI::App* app) {
    o_alpha = app->add_option("--alpha", alpha, "first frequency alpha");
    o_beta = app->add_option("--beta", beta, "second frequency beta");
    o_order = app->add_option("--order", order, "order s (the differences have order 2s)");
    o_eps0 = app->add_option("--eps0", eps0, "outer exclusion radius of the membership test");
    o_qtol = app->add_option("--qtol", qtol, "largest growth exponent classified as member");
    o_grid_l = app->add_option("--grid-l", grid_l, "grid half-width L");
    o_grid_n = app->add_option("--grid-n", grid_n, "grid size N");
    o_window = app->add_option("--shift-window", shift_window, "shifts are drawn from [-c, c]");
    o_count = app->add_option("--shift-count", shift_count, "number of shifts m (default 4s+1)");
    o_seed = app->add_option("--seed", seed, "random seed");
    o_out = app->add_option("--out", out, "output directory");
    o_config = app->add_option("--config", config, "run configuration file");
  }

  io::RunConfig resolve() const {
    io::RunConfig c = o_config->count() ? io::load_config(config) : io::RunConfig{};
    if (o_alpha->count()) c.params.alpha = alpha;
    if (o_beta->count()) c.params.beta = beta;
    if (o_order->count()) c.params.order = order;
    if (o_eps0->count()) c.params.eps0 = eps0;
    if (o_qtol->count()) c.params.q_tol = qtol;
    if (o_grid_l->count()) c.grid_l = grid_l;
    if (o_grid_n->count()) c.grid_n = grid_n;
    if (o_window->count()) c.shift_window = shift_window;
    if (o_count->count()) c.shift_count = shift_count;
    if (o_seed->count()) c.seed = seed;
    if (o_out->count()) c.output_dir = out;
    c.validate();
    return c;
  }

  // The grid of a file-based run comes from the file header; explicit grid
  // flags must agree with it.
  void check_grid(const GridSpec& file_grid) const {
    if (o_grid_n->count() && grid_n != file_grid.size())
      throw ParseError("grid mismatch: --grid-n " + std::to_string(grid_n) + " but the input header has N=" +
                           std::to_string(file_grid.size()),
                       0);
    if (o_grid_l->count() && grid_l != file_grid.half_width())
      throw ParseError("grid mismatch: --grid-l " + CLI::detail::to_string(grid_l) +
                           " but the input header has L=" + CLI::detail::to_string(file_grid.half_width()),
                       0);
  }
};

json params_json(const Params& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"order", p.order},
          {"eps0", p.eps0},   {"tau", p.tau},   {"qtol", p.q_tol}};
}

json grid_json(const GridSpec& g) { return {{"L", g.half_width()}, {"N", g.size()}}; }

json envelope(const std::string& command, const io::RunConfig& cfg) {
  return {{"schema_version", io::kSchemaVersion}, {"command", command}, {"params", params_json(cfg.params)}};
}

void write_integrand(const fs::path& path, const Params& p, const Spectrum& F) {
  const double cut = p.eps0 / 4.0;
  std::vector<double> xs(F.size()), ys(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    xs[i] = F.frequency(i);
    const bool masked = std::abs(xs[i] - p.alpha) < cut || std::abs(xs[i] - p.beta) < cut;
    ys[i] = masked ? std::nan("") : membership_integrand(p, F, i);
  }
  io::write_xy_csv(path, xs, ys);
}

int cmd_analyze(const CommonFlags& flags, const std::string& input, std::ostream& out) {
  const io::RunConfig cfg = flags.resolve();
  const Signal f = io::read_signal(input);
  flags.check_grid(f.grid());
  const Spectrum F = forward_transform(f);
  const MembershipReport rep = membership_test(cfg.params, F);

  const fs::path dir = cfg.output_dir;
  json j = envelope("analyze", cfg);
  j.update(io::to_json(rep));
  j["grid"] = grid_json(f.grid());
  j["input"] = input;
  io::write_json(dir / "report.json", j);
  write_integrand(dir / "integrand.csv", cfg.params, F);
  out << "verdict: " << to_string(rep.verdict) << " (q = " << rep.growth_exponent << ")\n";
  return kSuccess;
}

// Refuses anything short of a member verdict; the report is written either way.
bool membership_gate(const MembershipReport& rep, const fs::path& report_path, json j, std::ostream& err) {
  if (rep.verdict == Verdict::member) return true;
  j["membership"] = io::to_json(rep);
  j["status"] = "refused";
  io::write_json(report_path, j);
  err << "refused: membership verdict is " << to_string(rep.verdict) << " (q = " << rep.growth_exponent
      << ")\n";
  return false;
}

int cmd_decompose(const CommonFlags& flags, const std::string& input, const std::vector<double>& shift_override,
                  bool force, std::ostream& out, std::ostream& err) {
  const io::RunConfig cfg = flags.resolve();
  const Signal f = io::read_signal(input);
  flags.check_grid(f.grid());
  const fs::path dir = cfg.output_dir;
  json j = envelope("decompose", cfg);
  j["grid"] = grid_json(f.grid());
  j["input"] = input;

  const MembershipReport rep = membership_test(cfg.params, f);
  if (!force && !membership_gate(rep, dir / "report.json", j, err)) return kMembershipRefused;

  std::vector<double> shifts = shift_override;
  bool below_guaranteed = false;
  if (shifts.empty()) {
    const auto sample = sample_shifts(cfg.effective_shift_count(), cfg.shift_window, cfg.seed, cfg.params.order);
    shifts = sample.shifts;
    below_guaranteed = sample.below_guaranteed_count;
  } else {
    below_guaranteed = static_cast<int>(shifts.size()) < 4 * cfg.params.order + 1;
  }

  std::optional<DecompositionResult> result;
  try {
    result = decompose(cfg.params, f, shifts, {.check_membership = false});
  } catch (const DegenerateShifts& e) {
    j["membership"] = io::to_json(rep);
    j["status"] = "degenerate";
    j["shifts"] = shifts;
    j["error"] = e.what();
    io::write_json(dir / "report.json", j);
    err << "degenerate shifts: " << e.what() << '\n';
    return kDegenerate;
  }
  const DecompositionResult& d = *result;
  const bool ok = d.relative_residual <= 1e-8;
  j["membership"] = io::to_json(rep);
  j["below_guaranteed_count"] = below_guaranteed;
  j["status"] = ok ? "ok" : "residual_too_large";
  io::write_decomposition(dir, d, j);
  out << "relative residual: " << d.relative_residual << " with " << shifts.size() << " shifts\n";
  if (!ok) {
    err << "relative residual " << d.relative_residual << " exceeds 1e-8\n";
    return kCheckFailed;
  }
  return kSuccess;
}

int cmd_solve(const CommonFlags& flags, const std::string& input, bool force, std::ostream& out,
              std::ostream& err) {
  const io::RunConfig cfg = flags.resolve();
  const Signal h = io::read_signal(input);
  flags.check_grid(h.grid());
  const fs::path dir = cfg.output_dir;
  json j = envelope("solve", cfg);
  j["grid"] = grid_json(h.grid());
  j["input"] = input;

  const MembershipReport rep = membership_test(cfg.params, h);
  if (!force && !membership_gate(rep, dir / "report.json", j, err)) return kMembershipRefused;

  const SolveResult sol = solve_T(cfg.params, h, true);
  const Signal back = apply_T(cfg.params, sol.solution);
  const double hn = h.l2_norm();
  const double roundtrip = hn > 0.0 ? (back - h).l2_norm() / hn : 0.0;
  io::write_signal(dir / "solution.csv", sol.solution);
  j["membership"] = io::to_json(rep);
  j["roundtrip_relative_error"] = roundtrip;
  j["dropped_energy"] = sol.dropped_energy;
  j["degenerate_warning"] = sol.degenerate_warning;
  j["status"] = "ok";
  io::write_json(dir / "report.json", j);
  out << "roundtrip relative error: " << roundtrip << '\n';
  if (sol.degenerate_warning) err << "warning: dropped energy " << sol.dropped_energy << " on degenerate nodes\n";
  return kSuccess;
}

int cmd_lemmas(const CommonFlags& flags, std::size_t samples, std::ostream& out) {
  const io::RunConfig cfg = flags.resolve();
  const unsigned long long seed = cfg.seed;
  const suites::SuiteReport reports[] = {
      suites::refinement_suite(1000, 50, 5, seed),
      suites::clipping_suite(100000, 100, seed + 1),
      suites::integral_bound_suite(samples, seed + 2),
      suites::sine_floor_suite(1000000, seed + 3),
      suites::sine_product_suite(100000, seed + 4),
  };
  json j = {{"schema_version", io::kSchemaVersion}, {"command", "lemma-check"}, {"seed", seed}};
  json list = json::array();
  bool all = true;
  for (const auto& r : reports) {
    list.push_back(r.to_json());
    all = all && r.pass;
  }
  j["lemmas"] = list;
  j["pass"] = all;
  io::write_json(fs::path(cfg.output_dir) / "lemmas.json", j);
  out << j.dump(2) << '\n';
  return all ? kSuccess : kCheckFailed;
}

int cmd_circle_sweep(const CommonFlags& flags, long max_n, int max_s, std::ostream& out) {
  const io::RunConfig cfg = flags.resolve();
  json j = suites::circle_sweep(max_n, max_s, cfg.seed);
  j["schema_version"] = io::kSchemaVersion;
  j["command"] = "circle-sweep";
  io::write_json(fs::path(cfg.output_dir) / "circle_sweep.json", j);
  out << "cases: " << j["cases"] << ", max relative residual: " << j["max_relative_residual"]
      << ", pass: " << j["pass"] << '\n';
  return j["pass"].get<bool>() ? kSuccess : kCheckFailed;
}

int cmd_synth(const CommonFlags& flags, const std::string& output, int power, double width, std::ostream& out) {
  const io::RunConfig cfg = flags.resolve();
  const Signal f = synthesize_test_member(cfg.grid(), cfg.params.alpha, cfg.params.beta, power, width);
  io::write_signal(output, f);
  out << "wrote " << output << '\n';
  return kSuccess;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite sums of generalised (alpha,beta)-differences"};
  app.name("gendiff");
  app.require_subcommand(1);

  // One set per subcommand: each owns its option handles.
  CommonFlags f_analyze, f_dec, f_solve, f_lemmas, f_sweep, f_synth;
  std::string input, output;
  std::vector<double> shifts;
  bool force = false;
  std::size_t samples = 1000000;
  long max_n = 16;
  int max_s = 2, power = 1;
  double width = 4.0;

  auto* analyze = app.add_subcommand("analyze", "membership test of a signal file");
  f_analyze.attach(analyze);
  analyze->add_option("input", input, "signal CSV")->required();

  auto* dec = app.add_subcommand("decompose", "split a member into generalised differences");
  f_dec.attach(dec);
  dec->add_option("input", input, "signal CSV")->required();
  dec->add_option("--shifts", shifts, "explicit shifts, comma separated")->delimiter(',');
  dec->add_flag("--force", force, "skip the membership gate");

  auto* solve = app.add_subcommand("solve", "solve T g = h for a member h");
  f_solve.attach(solve);
  solve->add_option("input", input, "right-hand side CSV")->required();
  solve->add_flag("--force", force, "skip the membership gate");

  auto* lemmas = app.add_subcommand("lemma-check", "run the interval lemma property suites");
  lemmas->alias("lemmas");
  f_lemmas.attach(lemmas);
  lemmas->add_option("--samples", samples, "Monte Carlo samples per estimate");

  auto* sweep = app.add_subcommand("circle-sweep", "exhaustive sweep of the cyclic-group model");
  f_sweep.attach(sweep);
  sweep->add_option("--max-n", max_n, "largest modulus N")->check(CLI::Range(2L, 64L));
  sweep->add_option("--max-s", max_s, "largest order s")->check(CLI::Range(1, 8));

  auto* synth = app.add_subcommand("synth", "write a factory test signal");
  f_synth.attach(synth);
  synth->add_option("output", output, "signal CSV to write")->required();
  synth->add_option("--power", power, "vanishing order p at alpha and beta");
  synth->add_option("--width", width, "Gaussian envelope width");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageOrIo;
  }

  try {
    if (*analyze) return cmd_analyze(f_analyze, input, out);
    if (*dec) return cmd_decompose(f_dec, input, shifts, force, out, err);
    if (*solve) return cmd_solve(f_solve, input, force, out, err);
    if (*lemmas) return cmd_lemmas(f_lemmas, samples, out);
    if (*sweep) return cmd_circle_sweep(f_sweep, max_n, max_s, out);
    if (*synth) return cmd_synth(f_synth, output, power, width, out);
  } catch (const MembershipRefused& e) {
    err << "refused: " << e.what() << '\n';
    return kMembershipRefused;
  } catch (const DegenerateShifts& e) {
    err << "degenerate shifts: " << e.what() << '\n';
    return kDegenerate;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIo;
  }
  return kUsageOrIo;
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

} // namespace gendiff::cli
