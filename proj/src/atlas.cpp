#include "hbatlas/atlas.hpp"

#include "hbatlas/parallel.hpp"
#include "hbatlas/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hbatlas {

void ClassifyConfig::validate() const {
  if (!lyapunov && !dim1 && !dim2) throw std::invalid_argument("classify: nothing to run");
  if (kmax < 3) throw std::invalid_argument("classify: kmax must be >= 3");
  if (dim1 && mode == PermutationMode::FullEnumeration && kmax > kMaxEnumerationK) {
    throw std::invalid_argument("classify: full enumeration needs kmax <= 9");
  }
  if (dim2 && kmax > 25) throw std::invalid_argument("classify: dim-2 search needs kmax <= 25");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("classify: rho must be in (0, 1]");
  if (!(tol_rho > 0.0)) throw std::invalid_argument("classify: tol_rho must be positive");
}

PointReport classify_point_report(const Tuning& t, const ClassParams& c, const ClassifyConfig& cfg) {
  PointReport rep;
  Classification& cls = rep.cls;
  bool indeterminate = false;
  std::vector<std::string> notes;

  if (cfg.lyapunov) {
    if (cfg.best_rate) {
      auto br = best_rate(t, c, cfg.tol_rho, cfg.cert_tol, cfg.sdp);
      if (br.status == LyapunovStatus::Found) {
        rep.lyapunov = std::move(br.certificate);
        cls.rho = br.rho;
      }
      indeterminate = indeterminate || br.status == LyapunovStatus::Indeterminate;
      if (br.status == LyapunovStatus::Indeterminate) notes.push_back("lyapunov: " + br.note);
    } else {
      auto r = lyapunov_certificate(t, c, cfg.rho, cfg.cert_tol, cfg.sdp);
      if (r.status == LyapunovStatus::Found) {
        rep.lyapunov = std::move(r.certificate);
        cls.rho = cfg.rho;
      }
      indeterminate = indeterminate || r.status == LyapunovStatus::Indeterminate;
      if (r.status == LyapunovStatus::Indeterminate) notes.push_back("lyapunov: " + r.note);
    }
  }

  if (cfg.dim1) {
    auto r = cycle_exists_dim1(t, c, cfg.kmax, cfg.mode, cfg.cycle);
    if (r.status == SearchStatus::Found) {
      cls.dim1_k = r.certificate->K;
      rep.cycle = std::move(r.certificate);
    }
    indeterminate = indeterminate || r.status == SearchStatus::Indeterminate;
    if (r.status == SearchStatus::Indeterminate) notes.push_back("dim1: " + r.note);
  }

  if (cfg.dim2) {
    bool dim2_indeterminate = false;
    for (std::size_t K = 3; K <= cfg.kmax; ++K) {
      auto r = roots_cycle_feasible(t, c, K, cfg.cycle.lp);
      if (r.status == SearchStatus::Found) {
        cls.dim2_k = K;
        rep.roots = std::move(r.cycle);
        break;
      }
      if (r.status == SearchStatus::Indeterminate && !dim2_indeterminate) {
        dim2_indeterminate = true;
        notes.push_back("dim2 K=" + std::to_string(K) + ": " + r.note);
      }
    }
    indeterminate = indeterminate || (dim2_indeterminate && cls.dim2_k == 0);
  }

  const bool cycle = cls.dim1_k != 0 || cls.dim2_k != 0;
  if (cycle) {
    cls.source = cls.dim1_k != 0 ? CycleSource::Dim1 : CycleSource::Dim2;
    cls.min_k = cls.dim1_k != 0 && cls.dim2_k != 0 ? std::min(cls.dim1_k, cls.dim2_k)
                                                   : std::max(cls.dim1_k, cls.dim2_k);
  }
  if (rep.lyapunov && cycle) {
    cls.tag = CellClass::Conflict;
  } else if (rep.lyapunov) {
    cls.tag = CellClass::Lyapunov;
  } else if (cycle) {
    cls.tag = CellClass::Cycle;
  } else {
    cls.tag = CellClass::Unknown;
    cls.indeterminate = indeterminate;
    for (const auto& n : notes) cls.note += (cls.note.empty() ? "" : "; ") + n;
  }
  return rep;
}

Classification classify_point(const Tuning& t, const ClassParams& c, const ClassifyConfig& cfg) {
  return classify_point_report(t, c, cfg).cls;
}

ConflictError::ConflictError(const Tuning& t, std::string details)
    : std::runtime_error("conflict at " + to_string(t) + ": " + details), tuning_(t) {}

RegionGrid<Classification> sweep(const GridSpec& spec, const ClassParams& c,
                                 const ClassifyConfig& cfg, std::size_t threads,
                                 std::vector<PointReport>* reports) {
  spec.validate();
  c.validate();
  cfg.validate();
  RegionGrid<Classification> grid{spec, c, std::vector<Classification>(spec.size()), {}};
  if (reports) reports->assign(spec.size(), PointReport{});
  parallel_for(spec.size(), threads, [&](std::size_t k) {
    auto rep = classify_point_report(spec.tuning_at(k), c, cfg);
    grid.cells[k] = rep.cls;
    if (reports) (*reports)[k] = std::move(rep);
  });
  for (std::size_t k = 0; k < grid.cells.size(); ++k) {
    if (grid.cells[k].tag != CellClass::Conflict) continue;
    const Tuning t = spec.tuning_at(k);
    const auto rep = classify_point_report(t, c, cfg);
    nlohmann::json dump;
    if (rep.lyapunov) dump["lyapunov"] = *rep.lyapunov;
    if (rep.cycle) dump["cycle"] = *rep.cycle;
    if (rep.roots) dump["roots_cycle"] = *rep.roots;
    throw ConflictError(t, dump.dump());
  }
  return grid;
}

RegionGrid<CycleCell> permutation_region(const GridSpec& spec, const ClassParams& c, std::size_t K,
                                         const Permutation& sigma, const CycleLpOptions& opts,
                                         std::size_t threads) {
  spec.validate();
  RegionGrid<CycleCell> grid{spec, c, std::vector<CycleCell>(spec.size()), {}};
  parallel_for(spec.size(), threads, [&](std::size_t k) {
    const auto r = lp_feasible_sigma(spec.tuning_at(k), c, K, sigma, opts);
    grid.cells[k] = {r.status, r.status == SearchStatus::Found ? K : 0};
  });
  return grid;
}

RegionGrid<Classification> as_classification(const RegionGrid<CycleCell>& grid, CycleSource source) {
  RegionGrid<Classification> out{grid.spec, grid.cls, {}, grid.provenance};
  out.cells.reserve(grid.cells.size());
  for (const auto& cell : grid.cells) {
    Classification cls;
    if (cell.status == SearchStatus::Found) {
      cls.tag = CellClass::Cycle;
      cls.min_k = cell.K;
      cls.source = source;
      (source == CycleSource::Dim2 ? cls.dim2_k : cls.dim1_k) = cell.K;
    } else {
      cls.indeterminate = cell.status == SearchStatus::Indeterminate;
    }
    out.cells.push_back(std::move(cls));
  }
  return out;
}

Tuning border_bisect(const ClassParams& c, std::size_t K, std::pair<Tuning, Tuning> ray, double tol,
                     const CycleLpOptions& opts) {
  if (!(tol > 0.0)) throw std::invalid_argument("border_bisect: tol must be positive");
  const Permutation sigma = conjectured_permutation(K);
  auto feasible = [&](const Tuning& t) {
    return lp_feasible_sigma(t, c, K, sigma, opts).status == SearchStatus::Found;
  };
  auto lerp = [&](double s) {
    return Tuning{ray.first.gamma + s * (ray.second.gamma - ray.first.gamma),
                  ray.first.beta + s * (ray.second.beta - ray.first.beta)};
  };
  const bool at_first = feasible(ray.first);
  if (at_first == feasible(ray.second)) {
    throw std::invalid_argument("border_bisect: both ends have the same feasibility");
  }
  const double length = std::hypot(ray.second.gamma - ray.first.gamma, ray.second.beta - ray.first.beta);
  double lo = 0.0;  // status of ray.first
  double hi = 1.0;
  while ((hi - lo) * length > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(lerp(mid)) == at_first ? lo : hi) = mid;
  }
  return lerp(at_first ? lo : hi);
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Cell>
std::string provenance_header(const RegionGrid<Cell>& grid) {
  std::ostringstream out;
  out << "# format=" << kFormatVersion << "\n";
  out << "# mu=" << num(grid.cls.mu) << " L=" << num(grid.cls.L) << "\n";
  out << "# gamma=[" << num(grid.spec.gamma_min) << "," << num(grid.spec.gamma_max)
      << "] beta=[" << num(grid.spec.beta_min) << "," << num(grid.spec.beta_max)
      << "] nx=" << grid.spec.nx << " ny=" << grid.spec.ny << "\n";
  for (const auto& [k, v] : grid.provenance) out << "# " << k << "=" << v << "\n";
  return out.str();
}

std::string xml_comment(std::string text) {
  for (std::size_t p; (p = text.find("--")) != std::string::npos;) text.replace(p, 2, "- -");
  return "<!--\n" + text + "-->\n";
}

template <typename Cell, typename ColorFn>
std::string cells_svg(const RegionGrid<Cell>& grid, ColorFn color) {
  const int cell = 8;
  const auto w = static_cast<int>(grid.spec.nx) * cell;
  const auto h = static_cast<int>(grid.spec.ny) * cell;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  out << xml_comment(provenance_header(grid));
  for (std::size_t j = 0; j < grid.spec.ny; ++j) {
    for (std::size_t i = 0; i < grid.spec.nx; ++i) {
      // beta grows upwards
      const auto y = static_cast<int>(grid.spec.ny - 1 - j) * cell;
      out << "<rect x=\"" << static_cast<int>(i) * cell << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << color(grid.at(i, j)) << "\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

std::string rgb(double r, double g, double b) {
  char buf[16];
  auto c = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c(r), c(g), c(b));
  return buf;
}

std::string purple_shade(std::size_t K) {
  const double s = std::clamp((static_cast<double>(K) - 3.0) / 22.0, 0.0, 1.0);
  return rgb(0.29 + 0.6 * s, 0.08 + 0.76 * s, 0.53 + 0.39 * s);
}

}  // namespace

std::string classification_csv(const RegionGrid<Classification>& grid) {
  std::ostringstream out;
  out << provenance_header(grid);
  out << "gamma,beta,class,rho,min_k,source\n";
  for (std::size_t k = 0; k < grid.cells.size(); ++k) {
    const auto& cell = grid.cells[k];
    const Tuning t = grid.spec.tuning_at(k);
    out << num(t.gamma) << "," << num(t.beta) << ",";
    switch (cell.tag) {
      case CellClass::Lyapunov:
        out << "lyapunov," << (cell.rho ? num(*cell.rho) : "") << ",,";
        break;
      case CellClass::Cycle:
        out << "cycle,," << cell.min_k << "," << to_string(cell.source);
        break;
      case CellClass::Unknown:
      case CellClass::Conflict:
        out << "unknown,,," << (cell.indeterminate ? "indeterminate" : "");
        break;
    }
    out << "\n";
  }
  return out.str();
}

std::string rate_csv(const RegionGrid<RateCell>& grid) {
  std::ostringstream out;
  out << provenance_header(grid);
  out << "gamma,beta,rho,accelerated\n";
  for (std::size_t k = 0; k < grid.cells.size(); ++k) {
    const Tuning t = grid.spec.tuning_at(k);
    out << num(t.gamma) << "," << num(t.beta) << "," << num(grid.cells[k].rho) << ","
        << (grid.cells[k].accelerated ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string classification_svg(const RegionGrid<Classification>& grid) {
  return cells_svg(grid, [](const Classification& c) -> std::string {
    switch (c.tag) {
      case CellClass::Lyapunov: return "#3a9d4a";
      case CellClass::Cycle: return purple_shade(c.min_k);
      case CellClass::Conflict: return "#d62728";
      case CellClass::Unknown: return c.indeterminate ? "#bdbdbd" : "#ffffff";
    }
    return "#ffffff";
  });
}

std::string rate_svg(const RegionGrid<RateCell>& grid) {
  return cells_svg(grid, [](const RateCell& c) {
    if (!(c.rho < 1.0)) return std::string("#000000");
    const double v = 1.0 - c.rho;
    return c.accelerated ? rgb(1.0, 0.55 + 0.45 * v, 0.1) : rgb(v, v, v);
  });
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error(path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void export_csv(const RegionGrid<Classification>& grid, const std::filesystem::path& path) {
  write_text(path, classification_csv(grid));
}

void export_json(const RegionGrid<Classification>& grid, const std::filesystem::path& path) {
  write_text(path, nlohmann::json(grid).dump(1) + "\n");
}

void render_svg(const RegionGrid<Classification>& grid, const std::filesystem::path& path) {
  write_text(path, classification_svg(grid));
}

RegionGrid<Classification> import_json(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_text(path)).get<RegionGrid<Classification>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

const char* to_string(CellClass c) {
  switch (c) {
    case CellClass::Lyapunov: return "lyapunov";
    case CellClass::Cycle: return "cycle";
    case CellClass::Unknown: return "unknown";
    case CellClass::Conflict: return "conflict";
  }
  return "unknown";
}

const char* to_string(CycleSource s) {
  switch (s) {
    case CycleSource::None: return "none";
    case CycleSource::Dim1: return "dim1";
    case CycleSource::Dim2: return "dim2";
  }
  return "none";
}

}  // namespace hbatlas
