// Command-line front end: run | verify | rossby | sweep.
// Exit codes: 0 success, 1 identity/criterion failure, 2 configuration
// error, 3 numerical divergence.

#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sphereflow/config.hpp"
#include "sphereflow/diagnostics.hpp"
#include "sphereflow/dynamics.hpp"
#include "sphereflow/errors.hpp"
#include "sphereflow/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* kCsvHeader =
    "t,energy,enstrophy,c_z,amp_1m1,amp_10,amp_1p1,deformation,residual,"
    "div_max";

void write_csv_row(std::ostream& out, const sphereflow::DiagnosticsRecord& r) {
  out << fmt17(r.t) << ',' << fmt17(r.energy) << ',' << fmt17(r.enstrophy)
      << ',' << fmt17(r.c_z) << ',' << fmt17(r.amp_1m1) << ','
      << fmt17(r.amp_10) << ',' << fmt17(r.amp_1p1) << ','
      << fmt17(r.deformation) << ',' << fmt17(r.residual) << ','
      << fmt17(r.div_max) << '\n';
}

struct RunOutcome {
  sphereflow::DiagnosticsSeries series;
  bool diverged = false;
  std::string message;
};

RunOutcome execute(const sphereflow::Model& model,
                   const sphereflow::RunConfig& cfg) {
  RunOutcome out;
  sphereflow::SimState state =
      sphereflow::make_initial_state(model, cfg.init);
  try {
    sphereflow::run(model, state, cfg.params, cfg.cadence,
                    [&](const sphereflow::SimState& s) {
                      out.series.push_back(sphereflow::record(model, s));
                    });
  } catch (const sphereflow::DivergenceError& e) {
    out.diverged = true;
    out.message = e.what();
  } catch (const sphereflow::StepSizeError& e) {
    out.diverged = true;
    out.message = std::string(e.what()) +
                  " (largest admissible dt: " + fmt17(e.admissible_dt) + ")";
  }
  return out;
}

struct Summary {
  double final_c_z = 0.0;
  double fitted_alpha = std::nan("");
  double r_squared = std::nan("");
  double final_residual = 0.0;
  bool fit_ok = false;
};

Summary summarize(const sphereflow::DiagnosticsSeries& series) {
  Summary s;
  if (series.empty()) return s;
  s.final_c_z = series.back().c_z;
  s.final_residual = series.back().residual;
  try {
    const sphereflow::DecayFit fit = sphereflow::fit_decay_rate(series);
    s.fitted_alpha = fit.alpha;
    s.r_squared = fit.r_squared;
    s.fit_ok = true;
  } catch (const sphereflow::DegenerateFitError&) {
  }
  return s;
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            std::optional<unsigned> seed_override) {
  sphereflow::RunConfig cfg;
  try {
    cfg = sphereflow::load_config_file(config_path);
  } catch (const std::runtime_error& e) {
    std::cerr << "run: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (seed_override) cfg.init.seed = *seed_override;

  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome outcome;
  try {
    const sphereflow::Model model(cfg.L, cfg.params.a);
    outcome = execute(model, cfg);
  } catch (const std::runtime_error& e) {
    std::cerr << "run: " << e.what() << '\n';
    return kExitConfig;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  const auto dir = std::filesystem::path(cfg.output_dir);
  {
    std::ofstream csv(dir / "series.csv");
    if (!csv) {
      std::cerr << "run: cannot write to " << cfg.output_dir << '\n';
      return kExitConfig;
    }
    csv << kCsvHeader << '\n';
    for (const auto& r : outcome.series) write_csv_row(csv, r);
  }
  const Summary s = summarize(outcome.series);
  {
    std::ofstream sum(dir / "summary.txt");
    sum << "status = " << (outcome.diverged ? "diverged" : "ok") << '\n'
        << "rows = " << outcome.series.size() << '\n'
        << "final_c_z = " << fmt17(s.final_c_z) << '\n'
        << "fitted_alpha = " << fmt17(s.fitted_alpha) << '\n'
        << "r_squared = " << fmt17(s.r_squared) << '\n'
        << "final_residual = " << fmt17(s.final_residual) << '\n'
        << "wall_time_s = " << fmt17(wall) << '\n';
  }
  if (outcome.diverged) {
    std::cerr << "run: " << outcome.message << '\n';
    return kExitDiverged;
  }
  std::cout << "run: " << outcome.series.size() << " records -> "
            << (dir / "series.csv").string()
            << " (final residual " << fmt17(s.final_residual) << ")\n";
  return kExitOk;
}

int cmd_verify(int L, double a, unsigned seed) {
  std::vector<sphereflow::IdentityReport> reports;
  try {
    reports = sphereflow::run_identity_suite(L, a, seed);
  } catch (const std::runtime_error& e) {
    std::cerr << "verify: " << e.what() << '\n';
    return kExitConfig;
  }
  bool all_pass = true;
  std::printf("%-22s %-12s %7s %10s  %s\n", "identity", "max_error", "trials",
              "tolerance", "result");
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    std::printf("%-22s %-12.3e %7d %10.1e  %s\n", r.name.c_str(), r.max_error,
                r.trials, r.tolerance, r.pass ? "pass" : "FAIL");
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_rossby(int l, int m, double omega, double T, double dt, int L,
               double a) {
  if (L < 2 || l < 1 || l > L || m == 0 || std::abs(m) > l) {
    std::cerr << "rossby: need 1 <= l <= L and 0 < |m| <= l\n";
    return kExitConfig;
  }
  if (!(dt > 0.0) || !(T > 0.0) || !(a > 0.0)) {
    std::cerr << "rossby: T, dt, a must be positive\n";
    return kExitConfig;
  }
  const int mm = std::abs(m);
  const sphereflow::Model model(L, a);
  sphereflow::SimState state;
  {
    sphereflow::SpectralScalar zeta(L, a);
    zeta.at(l, mm) = 1e-6;
    state.zeta = std::move(zeta);
  }
  sphereflow::SimParams params;
  params.a = a;
  params.omega = omega;
  params.mu_s = 0.0;
  params.dt = dt;
  params.t_end = T;

  std::vector<double> ts;
  std::vector<std::complex<double>> coefs;
  try {
    sphereflow::run(model, state, params, 1,
                    [&](const sphereflow::SimState& s) {
                      ts.push_back(s.t);
                      coefs.push_back(s.zeta.at(l, mm));
                    });
  } catch (const std::runtime_error& e) {
    std::cerr << "rossby: " << e.what() << '\n';
    return kExitDiverged;
  }

  const double predicted = -2.0 * omega / (double(l) * (l + 1));
  double measured = 0.0;
  try {
    measured = sphereflow::fit_phase_drift(ts, coefs, mm).drift;
  } catch (const std::runtime_error& e) {
    std::cerr << "rossby: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  const bool pass = omega == 0.0
                        ? std::abs(measured) <= 1e-6
                        : std::abs(measured - predicted) <=
                              0.01 * std::abs(predicted);
  std::printf("mode (%d,%d)  omega %.6g  measured drift %.9g  predicted %.9g"
              "  %s\n",
              l, m, omega, measured, predicted, pass ? "pass" : "FAIL");
  return pass ? kExitOk : kExitCheckFailed;
}

struct SweepCell {
  double omega = 0.0;
  double mu_s = 0.0;
  Summary summary;
  sphereflow::DiagnosticsRecord final_record;
  bool diverged = false;
};

std::vector<double> parse_list(const std::string& key,
                               const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(item, &pos);
      while (pos < item.size() &&
             std::isspace(static_cast<unsigned char>(item[pos])))
        ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(x);
    } catch (const std::exception&) {
      throw sphereflow::ConfigError("sweep: bad number in " + key + ": '" +
                                    item + "'");
    }
  }
  if (out.empty())
    throw sphereflow::ConfigError("sweep: " + key + " list is empty");
  return out;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override,
              int threads, std::optional<unsigned> seed_override) {
  // Split sweep.* lines from the base run configuration.
  std::string base_text, omega_list, mu_list;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "sweep: cannot open '" << config_path << "'\n";
      return kExitConfig;
    }
    std::string line;
    while (std::getline(in, line)) {
      std::string stripped = line;
      const auto hash = stripped.find('#');
      if (hash != std::string::npos) stripped.erase(hash);
      const auto eq = stripped.find('=');
      std::string key;
      if (eq != std::string::npos) {
        key = stripped.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
      }
      if (key == "sweep.omega") {
        omega_list = stripped.substr(eq + 1);
      } else if (key == "sweep.mu_s") {
        mu_list = stripped.substr(eq + 1);
      } else {
        base_text += line;
        base_text += '\n';
      }
    }
  }

  sphereflow::RunConfig base;
  std::vector<double> omegas, mus;
  try {
    base = sphereflow::parse_config_text(base_text);
    omegas = omega_list.empty()
                 ? std::vector<double>{base.params.omega}
                 : parse_list("sweep.omega", omega_list);
    mus = mu_list.empty() ? std::vector<double>{base.params.mu_s}
                          : parse_list("sweep.mu_s", mu_list);
    for (double m : mus)
      if (m < 0.0)
        throw sphereflow::ConfigError("sweep: mu_s values must be >= 0");
  } catch (const std::runtime_error& e) {
    std::cerr << "sweep: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!out_override.empty()) base.output_dir = out_override;
  if (seed_override) base.init.seed = *seed_override;
  std::sort(omegas.begin(), omegas.end());
  std::sort(mus.begin(), mus.end());

  std::vector<SweepCell> cells;
  for (double om : omegas)
    for (double mu : mus) cells.push_back({om, mu, {}, {}, false});

  std::unique_ptr<sphereflow::Model> model;
  try {
    model = std::make_unique<sphereflow::Model>(base.L, base.params.a);
  } catch (const std::runtime_error& e) {
    std::cerr << "sweep: " << e.what() << '\n';
    return kExitConfig;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepCell& cell = cells[i];
      sphereflow::RunConfig cfg = base;
      cfg.params.omega = cell.omega;
      cfg.params.mu_s = cell.mu_s;
      const RunOutcome outcome = execute(*model, cfg);
      cell.diverged = outcome.diverged;
      cell.summary = summarize(outcome.series);
      if (!outcome.series.empty()) cell.final_record = outcome.series.back();
    }
  };
  const int n_threads = std::max(1, threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::error_code ec;
  std::filesystem::create_directories(base.output_dir, ec);
  const auto path = std::filesystem::path(base.output_dir) / "sweep.csv";
  std::ofstream csv(path);
  if (!csv) {
    std::cerr << "sweep: cannot write to " << base.output_dir << '\n';
    return kExitConfig;
  }
  csv << "omega,mu_s,final_residual,fitted_alpha,r_squared,amp_1m1,amp_10,"
         "amp_1p1,final_c_z,status\n";
  bool any_diverged = false;
  for (const auto& cell : cells) {
    any_diverged = any_diverged || cell.diverged;
    csv << fmt17(cell.omega) << ',' << fmt17(cell.mu_s) << ','
        << fmt17(cell.summary.final_residual) << ','
        << fmt17(cell.summary.fitted_alpha) << ','
        << fmt17(cell.summary.r_squared) << ','
        << fmt17(cell.final_record.amp_1m1) << ','
        << fmt17(cell.final_record.amp_10) << ','
        << fmt17(cell.final_record.amp_1p1) << ','
        << fmt17(cell.summary.final_c_z) << ','
        << (cell.diverged ? "diverged" : "ok") << '\n';
  }
  std::cout << "sweep: " << cells.size() << " cells -> " << path.string()
            << '\n';
  return any_diverged ? kExitDiverged : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incompressible flow on a rotating sphere, "
               "vorticity-stream-function pseudospectral solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 1;
  unsigned seed_flag = 0;

  auto* run = app.add_subcommand("run", "Integrate a configured scenario");
  run->add_option("--config", config_path, "configuration file")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.dir)");
  auto* run_seed = run->add_option("--seed", seed_flag,
                                   "override init.seed for random init");

  int vL = 15;
  double va = 1.0;
  unsigned vseed = 7;
  auto* verify = app.add_subcommand("verify", "Run the identity suite");
  verify->add_option("--L", vL, "spectral truncation (>= 4)");
  verify->add_option("--a", va, "sphere radius");
  verify->add_option("--seed", vseed, "trial-field seed");

  int rl = 2, rm = 1, rL = 15;
  double romega = 1.0, rT = 2.0, rdt = 0.01, ra = 1.0;
  auto* rossby = app.add_subcommand(
      "rossby", "Measure the precession rate of a single harmonic mode");
  rossby->add_option("--l", rl, "mode degree");
  rossby->add_option("--m", rm, "mode order (nonzero)");
  rossby->add_option("--omega", romega, "frame rotation rate");
  rossby->add_option("--T", rT, "integration time");
  rossby->add_option("--dt", rdt, "time step");
  rossby->add_option("--L", rL, "spectral truncation");
  rossby->add_option("--a", ra, "sphere radius");

  auto* sweep = app.add_subcommand(
      "sweep", "Run a (omega, mu_s) parameter grid from one config");
  sweep->add_option("--config", config_path, "configuration file")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--threads", threads, "worker threads");
  auto* sweep_seed = sweep->add_option("--seed", seed_flag,
                                       "override init.seed for random init");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) {
    std::optional<unsigned> seed;
    if (run_seed->count() > 0) seed = seed_flag;
    return cmd_run(config_path, out_dir, seed);
  }
  if (verify->parsed()) return cmd_verify(vL, va, vseed);
  if (rossby->parsed())
    return cmd_rossby(rl, rm, romega, rT, rdt, rL, ra);
  if (sweep->parsed()) {
    std::optional<unsigned> seed;
    if (sweep_seed->count() > 0) seed = seed_flag;
    return cmd_sweep(config_path, out_dir, threads, seed);
  }
  return kExitConfig;
}
