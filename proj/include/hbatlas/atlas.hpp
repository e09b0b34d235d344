#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "hbatlas/cycle_lp.hpp"
#include "hbatlas/dim2_cycles.hpp"
#include "hbatlas/grid.hpp"
#include "hbatlas/lyapunov_pep.hpp"
#include "hbatlas/quadratic_rate.hpp"
#include "hbatlas/types.hpp"

namespace hbatlas {

inline constexpr const char* kFormatVersion = "hbatlas-1";

enum class CellClass { Lyapunov, Cycle, Unknown, Conflict };
enum class CycleSource { None, Dim1, Dim2 };

struct Classification {
  CellClass tag = CellClass::Unknown;
  std::optional<double> rho;  // Lyapunov cells
  std::size_t min_k = 0;      // Cycle cells
  CycleSource source = CycleSource::None;
  std::size_t dim1_k = 0;  // 0 when no dim-1 cycle was found or searched
  std::size_t dim2_k = 0;
  /// Some analyzer returned Indeterminate and nothing was certified.
  bool indeterminate = false;
  std::string note;

  bool operator==(const Classification&) const = default;
};

struct ClassifyConfig {
  bool lyapunov = true;
  bool dim1 = true;
  bool dim2 = true;
  std::size_t kmax = 8;
  PermutationMode mode = PermutationMode::ConjecturedOnly;
  double rho = 1.0;
  /// Bisect for the smallest certified rate instead of testing `rho` only.
  bool best_rate = false;
  double tol_rho = 1e-3;
  double cert_tol = 1e-8;
  CycleLpOptions cycle;
  SdpOptions sdp;

  void validate() const;
};

/// Classification plus whatever certificates were verified on the way.
struct PointReport {
  Classification cls;
  std::optional<LyapunovCertificate> lyapunov;
  std::optional<CycleCertificate> cycle;
  std::optional<RootsCycle> roots;
};

PointReport classify_point_report(const Tuning& t, const ClassParams& c, const ClassifyConfig& cfg);
Classification classify_point(const Tuning& t, const ClassParams& c, const ClassifyConfig& cfg);

/// Raised when a tuning carries both a Lyapunov and a cycle certificate.
/// what() contains both certificates as JSON.
class ConflictError : public std::runtime_error {
 public:
  ConflictError(const Tuning& t, std::string details);
  const Tuning& tuning() const { return tuning_; }

 private:
  Tuning tuning_;
};

/// classify_point at every cell center. Throws ConflictError on the first
/// Conflict cell (by index). When `reports` is given it receives the full
/// per-cell reports in cell order.
RegionGrid<Classification> sweep(const GridSpec& spec, const ClassParams& c,
                                 const ClassifyConfig& cfg, std::size_t threads = 0,
                                 std::vector<PointReport>* reports = nullptr);

/// Feasibility map of a single sort permutation of length K.
RegionGrid<CycleCell> permutation_region(const GridSpec& spec, const ClassParams& c, std::size_t K,
                                         const Permutation& sigma, const CycleLpOptions& opts = {},
                                         std::size_t threads = 0);

/// Cycle cells shown in the six-column classification layout.
RegionGrid<Classification> as_classification(const RegionGrid<CycleCell>& grid, CycleSource source);

/// Bisection along the segment between two tunings on "the conjectured
/// K-permutation LP is feasible". Returns the feasible-side endpoint of the
/// final bracket, whose length is at most tol (Euclidean in (gamma, beta)).
/// Throws std::invalid_argument when both ends have the same status.
Tuning border_bisect(const ClassParams& c, std::size_t K, std::pair<Tuning, Tuning> ray, double tol,
                     const CycleLpOptions& opts = {});

/// CSV "gamma,beta,class,rho,min_k,source" preceded by '#' provenance lines.
std::string classification_csv(const RegionGrid<Classification>& grid);
/// CSV "gamma,beta,rho,accelerated" preceded by '#' provenance lines.
std::string rate_csv(const RegionGrid<RateCell>& grid);

std::string classification_svg(const RegionGrid<Classification>& grid);
std::string rate_svg(const RegionGrid<RateCell>& grid);

/// Writes text to path, creating parent directories; throws std::runtime_error
/// naming the path on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

void export_csv(const RegionGrid<Classification>& grid, const std::filesystem::path& path);
void export_json(const RegionGrid<Classification>& grid, const std::filesystem::path& path);
void render_svg(const RegionGrid<Classification>& grid, const std::filesystem::path& path);
RegionGrid<Classification> import_json(const std::filesystem::path& path);

const char* to_string(CellClass c);
const char* to_string(CycleSource s);

}  // namespace hbatlas
