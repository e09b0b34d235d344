#include "hbatlas/serialize.hpp"

#include <stdexcept>

namespace hbatlas {

using nlohmann::json;

void to_json(json& j, const Tuning& t) { j = json{{"gamma", t.gamma}, {"beta", t.beta}}; }
void from_json(const json& j, Tuning& t) {
  j.at("gamma").get_to(t.gamma);
  j.at("beta").get_to(t.beta);
}

void to_json(json& j, const ClassParams& c) { j = json{{"mu", c.mu}, {"L", c.L}}; }
void from_json(const json& j, ClassParams& c) {
  j.at("mu").get_to(c.mu);
  j.at("L").get_to(c.L);
}

void to_json(json& j, const GridSpec& s) {
  j = json{{"gamma_min", s.gamma_min}, {"gamma_max", s.gamma_max}, {"beta_min", s.beta_min},
           {"beta_max", s.beta_max},   {"nx", s.nx},               {"ny", s.ny}};
}
void from_json(const json& j, GridSpec& s) {
  j.at("gamma_min").get_to(s.gamma_min);
  j.at("gamma_max").get_to(s.gamma_max);
  j.at("beta_min").get_to(s.beta_min);
  j.at("beta_max").get_to(s.beta_max);
  j.at("nx").get_to(s.nx);
  j.at("ny").get_to(s.ny);
}

void to_json(json& j, const CycleCertificate& c) {
  j = json{{"K", c.K},          {"sigma", c.sigma.images()}, {"X", c.X},
           {"G", c.G},          {"gamma", c.tuning.gamma},   {"beta", c.tuning.beta},
           {"mu", c.cls.mu},    {"L", c.cls.L},              {"min_gap", c.min_gap}};
}
void from_json(const json& j, CycleCertificate& c) {
  j.at("K").get_to(c.K);
  c.sigma = Permutation(j.at("sigma").get<std::vector<int>>());
  j.at("X").get_to(c.X);
  j.at("G").get_to(c.G);
  j.at("gamma").get_to(c.tuning.gamma);
  j.at("beta").get_to(c.tuning.beta);
  j.at("mu").get_to(c.cls.mu);
  j.at("L").get_to(c.cls.L);
  j.at("min_gap").get_to(c.min_gap);
}

namespace {

json vec2_list(const std::vector<Eigen::Vector2d>& v) {
  json out = json::array();
  for (const auto& p : v) out.push_back({p.x(), p.y()});
  return out;
}

std::vector<Eigen::Vector2d> vec2_from(const json& j) {
  std::vector<Eigen::Vector2d> out;
  for (const auto& p : j) {
    if (p.size() != 2) throw std::invalid_argument("expected a 2-vector");
    out.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  }
  return out;
}

}  // namespace

void to_json(json& j, const RootsCycle& c) {
  j = json{{"K", c.K},          {"points", vec2_list(c.points)}, {"grads", vec2_list(c.grads)},
           {"fvals", c.fvals},  {"tuning", c.tuning},            {"class", c.cls}};
}
void from_json(const json& j, RootsCycle& c) {
  j.at("K").get_to(c.K);
  c.points = vec2_from(j.at("points"));
  c.grads = vec2_from(j.at("grads"));
  j.at("fvals").get_to(c.fvals);
  j.at("tuning").get_to(c.tuning);
  j.at("class").get_to(c.cls);
}

void to_json(json& j, const LyapunovCertificate& c) {
  std::vector<double> upper;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) upper.push_back(c.Q(a, b));
  }
  j = json{{"ell", c.ell},         {"Q", upper},
           {"lambda", c.lambda},   {"nu", c.nu},
           {"rho", c.rho},         {"tuning", c.tuning},
           {"class", c.cls},       {"min_eig_A", c.min_eig_A},
           {"min_eig_B", c.min_eig_B}};
}
void from_json(const json& j, LyapunovCertificate& c) {
  j.at("ell").get_to(c.ell);
  const auto upper = j.at("Q").get<std::vector<double>>();
  if (upper.size() != 10) throw std::invalid_argument("Q: expected 10 upper-triangle entries");
  std::size_t k = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      c.Q(a, b) = upper[k];
      c.Q(b, a) = upper[k++];
    }
  }
  j.at("lambda").get_to(c.lambda);
  j.at("nu").get_to(c.nu);
  j.at("rho").get_to(c.rho);
  j.at("tuning").get_to(c.tuning);
  j.at("class").get_to(c.cls);
  j.at("min_eig_A").get_to(c.min_eig_A);
  j.at("min_eig_B").get_to(c.min_eig_B);
}

namespace {

CellClass cell_class_from(const std::string& s) {
  for (auto c : {CellClass::Lyapunov, CellClass::Cycle, CellClass::Unknown, CellClass::Conflict}) {
    if (s == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown cell class: " + s);
}

CycleSource source_from(const std::string& s) {
  for (auto c : {CycleSource::None, CycleSource::Dim1, CycleSource::Dim2}) {
    if (s == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown cycle source: " + s);
}

}  // namespace

void to_json(json& j, const Classification& c) {
  j = json{{"class", to_string(c.tag)},
           {"rho", c.rho ? json(*c.rho) : json(nullptr)},
           {"min_k", c.min_k},
           {"source", to_string(c.source)},
           {"dim1_k", c.dim1_k},
           {"dim2_k", c.dim2_k},
           {"indeterminate", c.indeterminate},
           {"note", c.note}};
}
void from_json(const json& j, Classification& c) {
  c.tag = cell_class_from(j.at("class").get<std::string>());
  c.rho = j.at("rho").is_null() ? std::nullopt : std::optional<double>(j.at("rho").get<double>());
  j.at("min_k").get_to(c.min_k);
  c.source = source_from(j.at("source").get<std::string>());
  j.at("dim1_k").get_to(c.dim1_k);
  j.at("dim2_k").get_to(c.dim2_k);
  j.at("indeterminate").get_to(c.indeterminate);
  j.at("note").get_to(c.note);
}

void to_json(json& j, const RegionGrid<Classification>& g) {
  j = json{{"format", kFormatVersion}, {"grid", g.spec},  {"class", g.cls},
           {"provenance", g.provenance}, {"cells", g.cells}};
}
void from_json(const json& j, RegionGrid<Classification>& g) {
  if (j.at("format").get<std::string>() != kFormatVersion) {
    throw std::invalid_argument("unsupported format " + j.at("format").get<std::string>());
  }
  j.at("grid").get_to(g.spec);
  j.at("class").get_to(g.cls);
  j.at("provenance").get_to(g.provenance);
  j.at("cells").get_to(g.cells);
  if (g.cells.size() != g.spec.size()) throw std::invalid_argument("cell count != nx * ny");
}

}  // namespace hbatlas
