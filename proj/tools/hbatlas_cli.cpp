#include <CLI11.hpp>
#include <json.hpp>

#include "hbatlas/atlas.hpp"
#include "hbatlas/montecarlo.hpp"
#include "hbatlas/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

using namespace hbatlas;
namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitConflict = 3;

struct RunConfig {
  std::string command;
  double mu = 1.0;
  double L = 10.0;
  std::optional<double> gamma_min;
  std::optional<double> gamma_max;
  double beta_min = -1.0;
  double beta_max = 1.0;
  std::size_t nx = 60;
  std::size_t ny = 60;
  std::size_t kmax = 8;
  std::string mode = "conjectured";
  double rho = 1.0;
  double tol_feas = 1e-9;
  double tol_infeas = 1e-7;
  std::size_t threads = 0;
  std::string out = ".";
  std::uint64_t seed = 1;
  std::size_t samples = 10000;
  std::optional<double> gamma;
  std::optional<double> beta;
  bool dim2 = true;
  bool best_rate = false;
  double tol_rho = 1e-3;
  bool certs = false;
  std::vector<std::size_t> ks{4, 5};
  std::string cert_file;

  ClassParams cls() const { return {mu, L}; }

  GridSpec grid() const {
    GridSpec g = GridSpec::default_for(cls(), nx, ny);
    if (gamma_min) g.gamma_min = *gamma_min;
    if (gamma_max) g.gamma_max = *gamma_max;
    g.beta_min = beta_min;
    g.beta_max = beta_max;
    return g;
  }

  PermutationMode perm_mode() const {
    return mode == "full" ? PermutationMode::FullEnumeration : PermutationMode::ConjecturedOnly;
  }

  ClassifyConfig classify(bool lyap, bool dim1, bool with_dim2) const {
    ClassifyConfig c;
    c.lyapunov = lyap;
    c.dim1 = dim1;
    c.dim2 = with_dim2;
    c.kmax = kmax;
    c.mode = perm_mode();
    c.rho = rho;
    c.best_rate = best_rate;
    c.tol_rho = tol_rho;
    c.cycle.lp.feasible = tol_feas;
    c.cycle.lp.infeasible = tol_infeas;
    return c;
  }

  void validate() const {
    cls().validate();
    grid().validate();
    if (mode != "conjectured" && mode != "full") {
      throw std::invalid_argument("--mode must be 'conjectured' or 'full'");
    }
    if (!(tol_feas > 0.0) || !(tol_infeas > tol_feas)) {
      throw std::invalid_argument("need 0 < --tol-feas < --tol-infeas");
    }
    if (gamma.has_value() != beta.has_value()) {
      throw std::invalid_argument("--gamma and --beta must be given together");
    }
  }

  // Thread count and output directory do not affect results and are left out.
  std::map<std::string, std::string> provenance() const {
    auto num = [](double v) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    const GridSpec g = grid();
    std::map<std::string, std::string> p{
        {"command", command},         {"mu", num(mu)},
        {"L", num(L)},                {"gamma-min", num(g.gamma_min)},
        {"gamma-max", num(g.gamma_max)}, {"beta-min", num(beta_min)},
        {"beta-max", num(beta_max)},  {"nx", std::to_string(nx)},
        {"ny", std::to_string(ny)},   {"kmax", std::to_string(kmax)},
        {"mode", mode},               {"rho", num(rho)},
        {"tol-feas", num(tol_feas)},  {"tol-infeas", num(tol_infeas)},
        {"seed", std::to_string(seed)}, {"dim2", dim2 ? "true" : "false"},
        {"best-rate", best_rate ? "true" : "false"}, {"tol-rho", num(tol_rho)}};
    if (gamma) p["gamma"] = num(*gamma);
    if (beta) p["beta"] = num(*beta);
    std::string ks_text;
    for (auto k : ks) ks_text += (ks_text.empty() ? "" : ",") + std::to_string(k);
    p["ks"] = ks_text;
    return p;
  }
};

// Flat key=value file; keys are long flag names without the dashes.
std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("--config: cannot read " + path);
  std::vector<std::string> args;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(number) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") {
      throw std::invalid_argument(path + ":" + std::to_string(number) + ": invalid key '" + key + "'");
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

fs::path out_path(const RunConfig& cfg, const std::string& name) { return fs::path(cfg.out) / name; }

void write_grid_outputs(const RunConfig& cfg, RegionGrid<Classification>& grid, const std::string& stem) {
  grid.provenance = cfg.provenance();
  export_csv(grid, out_path(cfg, stem + ".csv"));
  render_svg(grid, out_path(cfg, stem + ".svg"));
  export_json(grid, out_path(cfg, stem + ".json"));
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(1) + "\n"); }

void write_reports(const RunConfig& cfg, const GridSpec& spec, const std::vector<PointReport>& reports) {
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const std::string tag = std::to_string(k % spec.nx) + "_" + std::to_string(k / spec.nx);
    const auto& r = reports[k];
    if (r.cycle) write_json(out_path(cfg, "certs/cycle_" + tag + ".json"), *r.cycle);
    if (r.roots) write_json(out_path(cfg, "certs/roots_" + tag + ".json"), *r.roots);
    if (r.lyapunov) write_json(out_path(cfg, "certs/lyapunov_" + tag + ".json"), *r.lyapunov);
  }
}

std::size_t count(const RegionGrid<Classification>& g, CellClass c) {
  return static_cast<std::size_t>(
      std::count_if(g.cells.begin(), g.cells.end(), [c](const auto& x) { return x.tag == c; }));
}

int cmd_rate_map(const RunConfig& cfg) {
  auto grid = rate_map(cfg.grid(), cfg.cls());
  grid.provenance = cfg.provenance();
  write_text(out_path(cfg, "rate.csv"), rate_csv(grid));
  write_text(out_path(cfg, "rate.svg"), rate_svg(grid));
  const auto best = std::min_element(grid.cells.begin(), grid.cells.end(),
                                     [](const auto& a, const auto& b) { return a.rho < b.rho; });
  std::printf("rate-map: %zu cells, min rho %.6f\n", grid.cells.size(), best->rho);
  return 0;
}

int run_sweep(const RunConfig& cfg, const ClassifyConfig& cc, const std::string& stem) {
  std::vector<PointReport> reports;
  auto grid = sweep(cfg.grid(), cfg.cls(), cc, cfg.threads, cfg.certs ? &reports : nullptr);
  write_grid_outputs(cfg, grid, stem);
  if (cfg.certs) write_reports(cfg, grid.spec, reports);
  std::size_t indeterminate = 0;
  for (const auto& c : grid.cells) indeterminate += c.tag == CellClass::Unknown && c.indeterminate;
  std::printf("%s: %zu cells: lyapunov %zu, cycle %zu, unknown %zu (indeterminate %zu)\n",
              cfg.command.c_str(), grid.cells.size(), count(grid, CellClass::Lyapunov),
              count(grid, CellClass::Cycle), count(grid, CellClass::Unknown), indeterminate);
  return 0;
}

int cmd_classify_point(const RunConfig& cfg) {
  const Tuning t{*cfg.gamma, *cfg.beta};
  const auto rep = classify_point_report(t, cfg.cls(), cfg.classify(true, true, cfg.dim2));
  const auto& c = rep.cls;
  if (rep.lyapunov) write_json(out_path(cfg, "certs/lyapunov.json"), *rep.lyapunov);
  if (rep.cycle) write_json(out_path(cfg, "certs/cycle_dim1.json"), *rep.cycle);
  if (rep.roots) write_json(out_path(cfg, "certs/cycle_dim2.json"), *rep.roots);
  std::printf("%s %s", to_string(t).c_str(), to_string(c.tag));
  if (c.rho) std::printf(" rho=%.17g", *c.rho);
  if (c.tag == CellClass::Cycle || c.tag == CellClass::Conflict) {
    std::printf(" min_k=%zu source=%s", c.min_k, to_string(c.source));
  }
  if (c.indeterminate) std::printf(" indeterminate (%s)", c.note.c_str());
  std::printf("\n");
  if (c.tag == CellClass::Conflict) {
    std::fprintf(stderr, "conflict: both a Lyapunov and a cycle certificate were verified\n");
    return kExitConflict;
  }
  if (rep.lyapunov && cfg.samples > 0) {
    const auto mc = sample_lyapunov_check(*rep.lyapunov, cfg.samples, cfg.seed);
    std::printf("monte-carlo: %zu windows, worst decrease %.3e, worst lower bound %.3e\n", mc.windows,
                mc.worst_decrease, mc.worst_lower);
    if (mc.worst_decrease < -1e-7 || mc.worst_lower < -1e-7) return kExitVerify;
  }
  return 0;
}

int cmd_classify(const RunConfig& cfg) {
  if (cfg.gamma) return cmd_classify_point(cfg);
  return run_sweep(cfg, cfg.classify(true, true, cfg.dim2), "classify");
}

int cmd_verify_cycle(const RunConfig& cfg) {
  const auto j = nlohmann::json::parse(read_text(cfg.cert_file));
  if (j.contains("points")) {
    const auto cyc = j.get<RootsCycle>();
    if (auto why = check_roots_cycle(cyc); !why.empty()) {
      std::printf("rejected: %s\n", why.c_str());
      return kExitVerify;
    }
    std::printf("verified: planar %zu-cycle, min residual %.3e\n", cyc.K, min_interp_residual(cyc));
    return 0;
  }
  const auto cert = j.get<CycleCertificate>();
  if (auto why = check_cycle_certificate(cert); !why.empty()) {
    std::printf("rejected: %s\n", why.c_str());
    return kExitVerify;
  }
  const auto rep = replay_certificate(cert, 100);
  if (!rep.error.empty() || rep.max_period_error > 1e-9 || rep.period != cert.K) {
    std::printf("rejected: replay %s, per-period error %.3e, period %zu\n",
                rep.error.empty() ? "ok" : rep.error.c_str(), rep.max_period_error, rep.period);
    return kExitVerify;
  }
  std::printf("verified: %zu-cycle sigma=%s, replay error %.3e over %zu steps\n", cert.K,
              cert.sigma.str().c_str(), rep.max_period_error, 100 * cert.K);
  return 0;
}

std::string sigma_tag(const Permutation& p) {
  std::string s;
  for (int v : p.images()) s += (s.empty() ? "" : "-") + std::to_string(v);
  return s;
}

int cmd_permutation_atlas(const RunConfig& cfg) {
  const GridSpec spec = cfg.grid();
  CycleLpOptions opts;
  opts.lp.feasible = cfg.tol_feas;
  opts.lp.infeasible = cfg.tol_infeas;
  std::ostringstream summary;
  summary << "# format=" << kFormatVersion << "\n";
  for (const auto& [k, v] : cfg.provenance()) summary << "# " << k << "=" << v << "\n";
  summary << "K,sigma,feasible_cells,indeterminate_cells\n";
  for (std::size_t K : cfg.ks) {
    const auto perms = reduced_permutations(K);
    std::size_t nonempty = 0;
    for (const auto& sigma : perms) {
      auto region = permutation_region(spec, cfg.cls(), K, sigma, opts, cfg.threads);
      region.provenance = cfg.provenance();
      region.provenance["sigma"] = sigma.str();
      std::size_t feasible = 0, indeterminate = 0;
      for (const auto& c : region.cells) {
        feasible += c.status == SearchStatus::Found;
        indeterminate += c.status == SearchStatus::Indeterminate;
      }
      nonempty += feasible > 0;
      auto grid = as_classification(region, CycleSource::Dim1);
      const std::string stem = "permutations/K" + std::to_string(K) + "_" + sigma_tag(sigma);
      export_csv(grid, out_path(cfg, stem + ".csv"));
      render_svg(grid, out_path(cfg, stem + ".svg"));
      summary << K << "," << sigma_tag(sigma) << "," << feasible << "," << indeterminate << "\n";
    }
    std::printf("K=%zu: %zu of %zu reduced permutations have a nonempty region\n", K, nonempty,
                perms.size());
  }
  write_text(out_path(cfg, "permutations.csv"), summary.str());
  return 0;
}

void add_common(CLI::App& app, RunConfig& cfg) {
  app.add_option("--mu", cfg.mu, "strong convexity");
  app.add_option("--L", cfg.L, "smoothness");
  app.add_option("--gamma-min", cfg.gamma_min, "grid: smallest step (default 0)");
  app.add_option("--gamma-max", cfg.gamma_max, "grid: largest step (default 4/L)");
  app.add_option("--beta-min", cfg.beta_min, "grid: smallest momentum");
  app.add_option("--beta-max", cfg.beta_max, "grid: largest momentum");
  app.add_option("--nx", cfg.nx, "grid: step-size cells");
  app.add_option("--ny", cfg.ny, "grid: momentum cells");
  app.add_option("--kmax", cfg.kmax, "longest cycle searched");
  app.add_option("--mode", cfg.mode, "permutations: conjectured|full");
  app.add_option("--rho", cfg.rho, "Lyapunov contraction tested");
  app.add_option("--tol-feas", cfg.tol_feas, "LP: accepted violation");
  app.add_option("--tol-infeas", cfg.tol_infeas, "LP: phase-1 level declaring infeasibility");
  app.add_option("--threads", cfg.threads, "worker threads (0: all cores)");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--seed", cfg.seed, "Monte-Carlo seed");
  app.add_option("--samples", cfg.samples, "Monte-Carlo windows for a single-point classify");
  app.add_option("--gamma", cfg.gamma, "classify a single tuning");
  app.add_option("--beta", cfg.beta, "classify a single tuning");
  app.add_option("--dim2", cfg.dim2, "include the planar roots-of-unity search");
  app.add_flag("--best-rate", cfg.best_rate, "bisect for the smallest certified rate");
  app.add_option("--tol-rho", cfg.tol_rho, "bisection tolerance on rho");
  app.add_flag("--certs", cfg.certs, "write certificates under certs/");
  app.add_option("--ks", cfg.ks, "permutation-atlas cycle lengths")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Heavy-ball tuning atlas on smooth strongly convex functions"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_file;
  app.add_option("--config", config_file, "key=value file mirroring the flags");
  add_common(app, cfg);
  auto* rate = app.add_subcommand("rate-map", "asymptotic rate on quadratics");
  auto* cycles = app.add_subcommand("cycle-map", "one-dimensional cycle search");
  auto* lyap = app.add_subcommand("lyapunov-map", "Lyapunov certificate search");
  auto* classify = app.add_subcommand("classify", "combined classification (grid or --gamma/--beta)");
  auto* verify = app.add_subcommand("verify-cycle", "verify a cycle certificate file");
  verify->add_option("certificate", cfg.cert_file, "certificate JSON")->required();
  auto* atlas = app.add_subcommand("permutation-atlas", "per-permutation feasibility maps");

  // CLI11 consumes the vector from the back: config entries are appended
  // last so they are parsed first and explicit flags win.
  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string(argv[i]) == "--config") {
        auto extra = config_arguments(argv[i + 1]);
        args.insert(args.end(), extra.rbegin(), extra.rend());
      } else if (std::string(argv[i]).rfind("--config=", 0) == 0) {
        auto extra = config_arguments(std::string(argv[i]).substr(9));
        args.insert(args.end(), extra.rbegin(), extra.rend());
      }
    }
    app.parse(args);
    cfg.validate();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (*rate) {
      cfg.command = "rate-map";
      return cmd_rate_map(cfg);
    }
    if (*cycles) {
      cfg.command = "cycle-map";
      return run_sweep(cfg, cfg.classify(false, true, false), "cycles");
    }
    if (*lyap) {
      cfg.command = "lyapunov-map";
      return run_sweep(cfg, cfg.classify(true, false, false), "lyapunov");
    }
    if (*classify) {
      cfg.command = "classify";
      return cmd_classify(cfg);
    }
    if (*verify) {
      cfg.command = "verify-cycle";
      return cmd_verify_cycle(cfg);
    }
    if (*atlas) {
      cfg.command = "permutation-atlas";
      return cmd_permutation_atlas(cfg);
    }
  } catch (const ConflictError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConflict;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "invalid certificate: %s\n", e.what());
    return kExitVerify;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
