#pragma once

#include <json.hpp>

#include "hbatlas/atlas.hpp"
#include "hbatlas/cycle_lp.hpp"
#include "hbatlas/dim2_cycles.hpp"
#include "hbatlas/grid.hpp"
#include "hbatlas/lyapunov_pep.hpp"
#include "hbatlas/types.hpp"

// Doubles are written in shortest round-trip form, so a parse returns the
// identical bits.
namespace hbatlas {

void to_json(nlohmann::json& j, const Tuning& t);
void from_json(const nlohmann::json& j, Tuning& t);
void to_json(nlohmann::json& j, const ClassParams& c);
void from_json(const nlohmann::json& j, ClassParams& c);
void to_json(nlohmann::json& j, const GridSpec& s);
void from_json(const nlohmann::json& j, GridSpec& s);

/// {K, sigma, X, G, gamma, beta, mu, L, min_gap}
void to_json(nlohmann::json& j, const CycleCertificate& c);
void from_json(const nlohmann::json& j, CycleCertificate& c);

/// {K, points, grads, fvals, tuning, class}
void to_json(nlohmann::json& j, const RootsCycle& c);
void from_json(const nlohmann::json& j, RootsCycle& c);

/// {ell, Q (row-major upper triangle), lambda, nu, rho, tuning, class, min_eig_A, min_eig_B}
void to_json(nlohmann::json& j, const LyapunovCertificate& c);
void from_json(const nlohmann::json& j, LyapunovCertificate& c);

void to_json(nlohmann::json& j, const Classification& c);
void from_json(const nlohmann::json& j, Classification& c);

void to_json(nlohmann::json& j, const RegionGrid<Classification>& g);
void from_json(const nlohmann::json& j, RegionGrid<Classification>& g);

}  // namespace hbatlas
