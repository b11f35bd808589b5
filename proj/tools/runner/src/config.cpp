#include "dcdiff/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "dcdiff/radial_grid.hpp"

namespace dcdiff::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw UsageError("config field '" + field + "': " + what);
}

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> known) {
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(prefix + key, "unknown field");
  }
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> integers(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(integer(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

template <class F>
void optional_field(const json& obj, const char* key, F&& f) {
  if (auto it = obj.find(key); it != obj.end()) f(*it);
}

template <class F>
void required_field(const json& obj, const char* key, F&& f) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(key, "missing");
  f(*it);
}

cplx complex_entry(const json& v, const std::string& field) {
  if (v.is_number()) return {number(v, field), 0.0};
  if (v.is_array() && v.size() == 2) return {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
  fail(field, "expected a number or a [re, im] pair");
}

void parse_spectrum(const json& obj, SpectrumConfig& s) {
  if (!obj.is_object()) fail("spectrum", "expected an object");
  reject_unknown(obj, "spectrum.", {"kappas", "states", "n0", "r_max", "p", "levels"});
  optional_field(obj, "kappas", [&](const json& v) { s.kappas = integers(v, "spectrum.kappas"); });
  optional_field(obj, "states", [&](const json& v) { s.states = integer(v, "spectrum.states"); });
  optional_field(obj, "n0", [&](const json& v) { s.n0 = integer(v, "spectrum.n0"); });
  optional_field(obj, "r_max", [&](const json& v) { s.r_max = number(v, "spectrum.r_max"); });
  optional_field(obj, "p", [&](const json& v) { s.grading = number(v, "spectrum.p"); });
  optional_field(obj, "levels", [&](const json& v) { s.levels = integer(v, "spectrum.levels"); });
  for (int k : s.kappas) {
    if (k == 0) fail("spectrum.kappas", "kappa must be non-zero");
  }
  if (s.states < 1) fail("spectrum.states", "must be at least 1");
  if (s.n0 < 64) fail("spectrum.n0", "must be at least 64");
  if (!(s.r_max > 0.0)) fail("spectrum.r_max", "must be positive");
  if (!(s.grading >= 2.0)) fail("spectrum.p", "must be at least 2");
  if (s.levels < 3) fail("spectrum.levels", "extrapolation needs at least 3 levels");
}

void parse_probe(const json& obj, ProbeConfig& p) {
  if (!obj.is_object()) fail("probe", "expected an object");
  reject_unknown(obj, "probe.",
                 {"time", "stencil_steps", "tube_width", "residual_limit", "max_applications", "smoothing_powers",
                  "tail_kappa", "nonfocusing_theta_deg", "leak_audit"});
  optional_field(obj, "time", [&](const json& v) { p.time = number(v, "probe.time"); });
  optional_field(obj, "stencil_steps", [&](const json& v) { p.stencil_steps = integer(v, "probe.stencil_steps"); });
  optional_field(obj, "tube_width", [&](const json& v) { p.tube_width = number(v, "probe.tube_width"); });
  optional_field(obj, "residual_limit", [&](const json& v) { p.residual_limit = number(v, "probe.residual_limit"); });
  optional_field(obj, "max_applications",
                 [&](const json& v) { p.max_applications = integer(v, "probe.max_applications"); });
  optional_field(obj, "smoothing_powers",
                 [&](const json& v) { p.smoothing_powers = integers(v, "probe.smoothing_powers"); });
  optional_field(obj, "tail_kappa", [&](const json& v) { p.tail_kappa = integer(v, "probe.tail_kappa"); });
  optional_field(obj, "nonfocusing_theta_deg",
                 [&](const json& v) { p.nonfocusing_theta_deg = number(v, "probe.nonfocusing_theta_deg"); });
  optional_field(obj, "leak_audit", [&](const json& v) {
    if (!v.is_boolean()) fail("probe.leak_audit", "expected true or false");
    p.leak_audit = v.get<bool>();
  });
  if (p.stencil_steps < 1) fail("probe.stencil_steps", "must be at least 1");
  if (!(p.tube_width > 0.0)) fail("probe.tube_width", "must be positive");
  if (!(p.residual_limit > 0.0)) fail("probe.residual_limit", "must be positive");
  if (p.max_applications < 1 || p.max_applications > 2) fail("probe.max_applications", "must be 1 or 2");
  for (int n : p.smoothing_powers) {
    if (n < 1 || n > 8) fail("probe.smoothing_powers", "powers must lie in 1..8");
  }
  if (p.tail_kappa < 1) fail("probe.tail_kappa", "must be at least 1");
}

}  // namespace

PhysicalParams ScenarioConfig::physical_params() const {
  PhysicalParams p;
  p.Z = Z;
  p.m = m;
  if (!V.empty()) p.V = RadialPotential::polynomial(V);
  return p;
}

FamilySpec ScenarioConfig::family() const {
  FamilySpec f;
  f.base.source.r0 = r0;
  f.base.source.psi0 = psi0;
  f.base.params = physical_params();
  for (double d : probe_directions_deg) f.base.probe_angles.push_back(d * std::numbers::pi / 180.0);
  f.h_values = h;
  f.n_r = n_r;
  f.k_max = k_max;
  f.dt = dt;
  f.r_max = r_max;
  f.grading = grading;
  f.probe_time = probe.time;
  f.stencil_steps = probe.stencil_steps;
  f.leak_audit = probe.leak_audit;
  for (double t : snapshot_times) {
    if (std::abs(t - probe.time) > 1e-12) f.extra_times.push_back(t);
  }
  return f;
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw UsageError("config: expected a JSON object");
  reject_unknown(doc, "",
                 {"Z", "m", "V", "r0", "psi0", "h", "K_max", "N_r", "p", "r_max", "dt", "snapshot_times",
                  "probe_directions_deg", "output_dir", "indicial", "spectrum", "probe"});
  ScenarioConfig c;
  c.source = doc;
  required_field(doc, "Z", [&](const json& v) { c.Z = number(v, "Z"); });
  optional_field(doc, "m", [&](const json& v) { c.m = number(v, "m"); });
  optional_field(doc, "V", [&](const json& v) {
    if (v.is_string()) {
      if (v.get<std::string>() != "zero") fail("V", "expected \"zero\" or an array of polynomial coefficients");
    } else {
      c.V = numbers(v, "V");
    }
  });
  optional_field(doc, "r0", [&](const json& v) { c.r0 = number(v, "r0"); });
  optional_field(doc, "psi0", [&](const json& v) {
    if (!v.is_array() || v.size() != 4) fail("psi0", "expected 4 complex components");
    for (int i = 0; i < 4; ++i) c.psi0(i) = complex_entry(v[i], "psi0[" + std::to_string(i) + "]");
  });
  required_field(doc, "h", [&](const json& v) { c.h = numbers(v, "h"); });
  optional_field(doc, "K_max", [&](const json& v) { c.k_max = integer(v, "K_max"); });
  optional_field(doc, "N_r", [&](const json& v) { c.n_r = integer(v, "N_r"); });
  optional_field(doc, "p", [&](const json& v) { c.grading = number(v, "p"); });
  optional_field(doc, "r_max", [&](const json& v) { c.r_max = number(v, "r_max"); });
  optional_field(doc, "dt", [&](const json& v) { c.dt = number(v, "dt"); });
  required_field(doc, "snapshot_times", [&](const json& v) { c.snapshot_times = numbers(v, "snapshot_times"); });
  required_field(doc, "probe_directions_deg",
                 [&](const json& v) { c.probe_directions_deg = numbers(v, "probe_directions_deg"); });
  optional_field(doc, "output_dir", [&](const json& v) {
    if (!v.is_string()) fail("output_dir", "expected a path string");
    c.output_dir = v.get<std::string>();
  });
  optional_field(doc, "indicial", [&](const json& v) {
    if (!v.is_object()) fail("indicial", "expected an object");
    reject_unknown(v, "indicial.", {"kappa_max"});
    optional_field(v, "kappa_max", [&](const json& k) { c.indicial_kappa_max = integer(k, "indicial.kappa_max"); });
  });
  optional_field(doc, "spectrum", [&](const json& v) { parse_spectrum(v, c.spectrum); });
  optional_field(doc, "probe", [&](const json& v) { parse_probe(v, c.probe); });

  if (!(c.m >= 0.0)) fail("m", "must be non-negative");
  if (!(c.r0 > 0.0)) fail("r0", "must be positive");
  if (std::abs(c.psi0.norm() - 1.0) > 1e-12) fail("psi0", "must have unit norm");
  if (c.h.empty()) fail("h", "must list at least one width");
  for (std::size_t j = 0; j < c.h.size(); ++j) {
    if (!(c.h[j] > 0.0)) fail("h", "widths must be positive");
    if (j > 0 && std::abs(c.h[j - 1] / c.h[j] - 2.0) > 1e-9) fail("h", "must be dyadic, halving at each step");
  }
  if (c.k_max < 1) fail("K_max", "must be at least 1");
  if (c.n_r < 64) fail("N_r", "must be at least 64");
  if (!(c.grading >= 2.0)) fail("p", "must be at least 2");
  if (!(c.r_max > 0.0)) fail("r_max", "must be positive");
  if (!(c.dt > 0.0)) fail("dt", "must be positive");
  if (c.snapshot_times.empty()) fail("snapshot_times", "must list at least one time");
  std::sort(c.snapshot_times.begin(), c.snapshot_times.end());
  for (std::size_t j = 0; j < c.snapshot_times.size(); ++j) {
    if (!(c.snapshot_times[j] >= 0.0)) fail("snapshot_times", "times must be non-negative");
    if (j > 0 && !(c.snapshot_times[j] - c.snapshot_times[j - 1] > 0.5 * c.dt)) {
      fail("snapshot_times", "times must be distinct on the dt lattice");
    }
  }
  if (c.probe_directions_deg.empty()) fail("probe_directions_deg", "must list at least one direction");
  for (double d : c.probe_directions_deg) {
    if (!(d >= 0.0 && d <= 180.0)) fail("probe_directions_deg", "angles must lie in [0, 180]");
  }
  if (c.indicial_kappa_max < 1) fail("indicial.kappa_max", "must be at least 1");

  if (doc.contains("probe") && doc["probe"].contains("time")) {
    bool listed = false;
    for (double t : c.snapshot_times) listed = listed || std::abs(t - c.probe.time) <= 1e-12;
    if (!listed) fail("probe.time", "must be one of snapshot_times");
  } else {
    c.probe.time = c.snapshot_times.back();
  }
  const FamilySpec fam = c.family();
  const double span = fam.stencil_half * fam.stencil_steps * c.dt;
  for (double t : fam.extra_times) {
    if (std::abs(t - c.probe.time) <= span) fail("snapshot_times", "times may not fall inside the probe stencil");
  }
  if (c.probe.time - span < 0.0) fail("probe.time", "the time stencil reaches negative times");
  const double h_max = c.h.front();
  if (!(c.r0 > 3.0 * h_max)) fail("r0", "must exceed 3 h_max so the source stays clear of the origin");
  const double t_max = std::max(c.snapshot_times.back(), c.probe.time + span);
  if (c.r_max < c.r0 + t_max + 10.0 * h_max) fail("r_max", "must be at least r0 + max(t) + 10 max(h)");
  for (double hv : c.h) {
    const double scale = h_max / hv;
    const RadialGrid g(static_cast<int>(std::lround(c.n_r * scale)), c.r_max, c.grading);
    if (g.spacing_at(c.r0) > hv / 8.0) fail("N_r", "radial spacing at r0 must not exceed h/8");
  }
  bool nf_dir = false;
  for (double d : c.probe_directions_deg) nf_dir = nf_dir || std::abs(d - c.probe.nonfocusing_theta_deg) < 1e-9;
  if (!c.probe.smoothing_powers.empty()) {
    if (!nf_dir) fail("probe.nonfocusing_theta_deg", "must be one of probe_directions_deg");
    if (c.probe.tail_kappa > c.k_max) fail("probe.tail_kappa", "must not exceed K_max");
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace dcdiff::cli
