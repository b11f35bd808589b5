#include "dcdiff/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "dcdiff/cli/csv.hpp"
#include "dcdiff/cli/manifest.hpp"
#include "dcdiff/cli/snapshot_io.hpp"
#include "dcdiff/errors.hpp"
#include "dcdiff/parallel.hpp"
#include "dcdiff/radial_dirac.hpp"
#include "dcdiff/wavefront_probe.hpp"

namespace dcdiff::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* verdict_name(SelfAdjointness v) {
  return v == SelfAdjointness::essentially_selfadjoint ? "essentially_selfadjoint" : "extension_needed";
}

void refuse_outside_range(const ScenarioConfig& cfg) {
  const SelfAdjointnessReport rep = selfadjointness_check(cfg.Z, cfg.indicial_kappa_max);
  if (rep.verdict == SelfAdjointness::essentially_selfadjoint) return;
  std::string msg = "refused: |Z| = " + format_number(std::abs(cfg.Z)) +
                    " is not below sqrt(3)/2; the self-adjointness classifier finds indicial roots with Im sigma in "
                    "[1/2, 3/2] at kappa =";
  for (const auto& w : rep.witnesses) msg += " " + std::to_string(w.kappa);
  throw DomainError(msg);
}

/// The configured degree value for a probe angle, so CSVs echo the input exactly.
double degrees(const ScenarioConfig& cfg, double theta) {
  for (double d : cfg.probe_directions_deg) {
    if (std::abs(d * std::numbers::pi / 180.0 - theta) < 1e-12) return d;
  }
  return theta * 180.0 / std::numbers::pi;
}

std::vector<int> family_powers(const ScenarioConfig& cfg) {
  std::vector<int> powers{0};
  for (int n : cfg.probe.smoothing_powers) {
    if (std::find(powers.begin(), powers.end(), n) == powers.end()) powers.push_back(n);
  }
  return powers;
}

ProbeOptions probe_options(const ScenarioConfig& cfg) {
  ProbeOptions o;
  o.tube_width = cfg.probe.tube_width;
  o.residual_limit = cfg.probe.residual_limit;
  return o;
}

std::vector<SpacetimeField> load_family(const FamilySpec& spec,
                                        const std::filesystem::path& out, int power) {
  std::vector<SpacetimeField> fam;
  for (std::size_t j = 0; j < spec.h_values.size(); ++j) {
    fam.push_back(read_field(out, family_stem(power, j), member_request(spec, j, power)));
  }
  return fam;
}

}  // namespace

std::string family_stem(int power, std::size_t member) {
  return "family_N" + std::to_string(power) + "_h" + std::to_string(member);
}

SelfAdjointness run_indicial(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const IndicialRootSet set = boundary_spectrum(cfg.Z, cfg.indicial_kappa_max);
  CsvWriter csv(out / "indicial.csv", {"kappa", "re_sigma_plus", "im_sigma_plus", "im_sigma_minus", "in_window"});
  for (const auto& r : set.roots) {
    csv.row(r.kappa, r.sigma_plus.real(), r.sigma_plus.imag(), r.sigma_minus.imag(), r.in_window);
  }
  const SelfAdjointnessReport rep = selfadjointness_check(cfg.Z, cfg.indicial_kappa_max);
  log << "indicial: Z = " << format_number(cfg.Z) << ", verdict " << verdict_name(rep.verdict) << '\n';
  for (const auto& w : rep.witnesses) {
    log << "  witness kappa = " << w.kappa << ": Im sigma = " << format_number(w.sigma_minus.imag()) << ", "
        << format_number(w.sigma_plus.imag()) << '\n';
  }
  return rep.verdict;
}

void run_spectrum(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  refuse_outside_range(cfg);
  const PhysicalParams params = cfg.physical_params();
  const SpectrumConfig& s = cfg.spectrum;
  CsvWriter csv(out / "spectrum.csv", {"kappa", "state", "n_r", "energy", "extrapolated", "observed_order"});
  if (cfg.m == 0.0) {
    log << "spectrum: m = 0 leaves no gap, no bound states to follow\n";
    return;
  }
  for (int kappa : s.kappas) {
    for (int state = 0; state < s.states; ++state) {
      BoundStateEstimate est;
      try {
        est = extrapolate_bound_state(ChannelIndex(kappa, 1), params, s.n0, s.r_max, s.grading, state, s.levels);
      } catch (const NumericalError&) {
        log << "spectrum: kappa = " << kappa << " has no gap state #" << state << " on every grid\n";
        break;
      }
      for (std::size_t j = 0; j < est.values.size(); ++j) {
        csv.row(kappa, state, est.n_levels[j], est.values[j], est.extrapolated, est.observed_order);
      }
      log << "spectrum: kappa = " << kappa << " state " << state << ": E = " << format_number(est.extrapolated)
          << " (observed order " << format_number(est.observed_order) << ")\n";
    }
  }
}

void run_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out, unsigned threads, std::ostream& log) {
  refuse_outside_range(cfg);
  const FamilySpec spec = cfg.family();
  validate_family(spec);
  CsvWriter csv(out / "simulate.csv", {"smoothing_power", "member", "h", "n_r", "k_max", "dt", "n_snapshots",
                                       "norm_first", "norm_last", "norm_drift", "mass_outside_cone",
                                       "mass_total", "leak_ratio"});
  for (int power : family_powers(cfg)) {
    for (std::size_t j = 0; j < spec.h_values.size(); ++j) {
      SimulationRequest req = member_request(spec, j, power);
      req.threads = threads;
      log << "simulate: N = " << power << ", h = " << format_number(req.source.h) << " (N_r " << req.grid->n()
          << ", K_max " << req.k_max << ", " << std::lround(req.times.back() / req.dt) << " steps)\n";
      log.flush();
      const SpacetimeField field = fundamental_solution(req);
      write_field(out, family_stem(power, j), field);
      const double n0 = field.norms.front();
      const double n1 = field.norms.back();
      double outside = kNaN;
      double total = kNaN;
      if (field.mass.back()) {
        outside = field.mass.back()->outside_cone;
        total = field.mass.back()->total;
      }
      csv.row(power, j, req.source.h, req.grid->n(), req.k_max, req.dt, field.times.size(), n0, n1,
              std::abs(n1 / n0 - 1.0), outside, total, outside / total);
    }
  }
}

void run_probe(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  refuse_outside_range(cfg);
  const FamilySpec spec = cfg.family();
  validate_family(spec);
  if (spec.h_values.size() < 4) {
    throw UsageError("config field 'h': the exponent fit needs at least 4 family members");
  }
  const ProbeOptions opt = probe_options(cfg);
  const std::vector<SpacetimeField> fam = load_family(spec, out, 0);

  {
    CsvWriter csv(out / "fronts.csv", {"h", "t", "theta_deg", "front", "expected_r", "measured_r", "amplitude",
                                       "tolerance", "present", "merged", "noise_floor"});
    for (const SpacetimeField& f : fam) {
      for (double t : cfg.snapshot_times) {
        const auto k = f.find_time(t);
        if (!k) continue;
        const FrontScan scan = locate_fronts(f, *k);
        for (const auto& l : scan.fronts) {
          csv.row(f.source.h, scan.t, degrees(cfg, l.theta), front_name(l.kind), l.expected, l.measured,
                  l.amplitude, l.tolerance, l.present, l.merged, scan.noise_floor);
        }
        for (const auto& [theta, r] : scan.unexplained) {
          csv.row(f.source.h, scan.t, degrees(cfg, theta), "unexplained", kNaN, r, kNaN, kNaN, false, false,
                  scan.noise_floor);
        }
      }
    }
  }

  const FrontReport rep = smoothing_exponent(fam, cfg.probe.time, opt);
  {
    CsvWriter csv(out / "front_report.csv",
                  {"front", "theta_deg", "h", "peak_amp", "tube_lo", "tube_hi", "slope", "slope_err", "delta_s"});
    for (const FrontFit& fit : rep.fits) {
      const ExponentGap* gap = rep.gap(fit.theta);
      const double ds = gap ? gap->delta_s : kNaN;
      for (std::size_t j = 0; j < fit.h.size(); ++j) {
        csv.row(front_name(fit.kind), degrees(cfg, fit.theta), fit.h[j], fit.amplitude[j], fit.tube_lo[j],
                fit.tube_hi[j], fit.slope, fit.slope_err, ds);
      }
    }
  }
  {
    CsvWriter csv(out / "exponent_fits.csv", {"front", "theta_deg", "slope", "slope_err", "intercept", "residual",
                                              "inconclusive"});
    for (const FrontFit& fit : rep.fits) {
      csv.row(front_name(fit.kind), degrees(cfg, fit.theta), fit.slope, fit.slope_err, fit.intercept, fit.residual,
              fit.inconclusive);
    }
  }
  for (const ExponentGap& g : rep.gaps) {
    log << "probe: theta = " << format_number(degrees(cfg, g.theta)) << " deg, delta_s = " << format_number(g.delta_s)
        << " +- " << format_number(g.delta_s_err) << (g.inconclusive ? " (inconclusive)" : "") << '\n';
  }

  const FieldOperator ops[] = {FieldOperator::scaling_R, FieldOperator::angular_laplacian, FieldOperator::kappa_K,
                               FieldOperator::radial_derivative};
  const auto conormal = conormal_test(fam, cfg.probe.time, ops, opt, cfg.probe.max_applications);
  {
    CsvWriter csv(out / "conormal.csv", {"operator", "applications", "theta_deg", "s_D", "delta", "inconclusive"});
    for (const auto& c : conormal) {
      csv.row(operator_name(c.op), c.applications, degrees(cfg, c.theta), c.s_D, c.delta, c.inconclusive);
    }
  }

  if (!cfg.probe.smoothing_powers.empty()) {
    const std::vector<int> powers = family_powers(cfg);
    std::vector<std::vector<SpacetimeField>> fams;
    for (int n : powers) fams.push_back(n == 0 ? fam : load_family(spec, out, n));
    const NonfocusingReport nf = nonfocusing_report(spec, powers, fams,
                                                    cfg.probe.nonfocusing_theta_deg * std::numbers::pi / 180.0,
                                                    cfg.probe.tail_kappa, opt);
    CsvWriter csv(out / "nonfocusing.csv",
                  {"power", "tail_kappa", "tail_mass", "tail_ratio", "theta_deg", "s_D", "s_D_err", "inconclusive"});
    for (const auto& e : nf.entries) {
      csv.row(e.power, nf.tail_kappa, e.tail_mass, e.tail_ratio, cfg.probe.nonfocusing_theta_deg, e.s_D, e.s_D_err,
              e.inconclusive);
    }
  }
}

ExitCode run(const RunOptions& opt, std::ostream& log, std::ostream& err) {
  static const char* const kStages[] = {"indicial", "spectrum", "simulate", "probe", "all"};
  if (std::find(std::begin(kStages), std::end(kStages), opt.subcommand) == std::end(kStages)) {
    err << "dcdiff: unknown subcommand '" << opt.subcommand << "'\n";
    return ExitCode::usage;
  }
  ScenarioConfig cfg;
  unsigned threads = 1;
  try {
    cfg = load_config(opt.config);
    threads = resolve_thread_count(opt.threads);
  } catch (const std::exception& e) {
    err << "dcdiff: usage error: " << e.what() << '\n';
    return ExitCode::usage;
  }
  const std::filesystem::path out = opt.out.empty() ? cfg.output_dir : opt.out;
  ExitCode code = ExitCode::ok;
  std::string status = "ok";
  try {
    std::filesystem::create_directories(out);
    const bool all = opt.subcommand == "all";
    if (opt.subcommand == "indicial" || all) {
      if (run_indicial(cfg, out, log) == SelfAdjointness::extension_needed) {
        code = ExitCode::extension_needed;
        status = "extension_needed";
      }
    }
    if (all && code == ExitCode::extension_needed) refuse_outside_range(cfg);
    if (opt.subcommand == "spectrum" || all) run_spectrum(cfg, out, log);
    if (opt.subcommand == "simulate" || all) run_simulate(cfg, out, threads, log);
    if (opt.subcommand == "probe" || all) run_probe(cfg, out, log);
  } catch (const UsageError& e) {
    err << "dcdiff: usage error: " << e.what() << '\n';
    code = ExitCode::usage;
    status = "usage_error";
  } catch (const ConfigurationError& e) {
    err << "dcdiff: usage error: " << e.what() << '\n';
    code = ExitCode::usage;
    status = "usage_error";
  } catch (const DomainError& e) {
    err << "dcdiff: " << e.what() << '\n';
    code = ExitCode::refused;
    status = "refused";
  } catch (const DependencyError& e) {
    err << "dcdiff: dependency error: " << e.what() << '\n';
    code = ExitCode::dependency;
    status = "dependency_error";
  } catch (const std::exception& e) {
    err << "dcdiff: error: " << e.what() << '\n';
    code = ExitCode::failure;
    status = "failed";
  }
  try {
    if (std::filesystem::is_directory(out)) write_manifest(out, cfg.source, opt.subcommand);
  } catch (const std::exception& e) {
    err << "dcdiff: cannot write manifest: " << e.what() << '\n';
    if (code == ExitCode::ok) code = ExitCode::failure;
  }
  log << "status: " << status << '\n';
  return code;
}

}  // namespace dcdiff::cli
