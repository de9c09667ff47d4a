#include "spectral/config.hpp"
#include "spectral/metric.hpp"
#include "spectral/paperlab.hpp"
#include "spectral/transport.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace spectral;
using nlohmann::json;

namespace {

// Exit codes are a stable contract.
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNonConvergence = 2;
constexpr int kInfiniteDistance = 3;
constexpr int kReproFailure = 4;

std::string fmt(double x) {
  if (std::isinf(x)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

json value_or_inf(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

State resolve_state(const TripleConfig& cfg, const std::string& spec) {
  auto it = cfg.states.find(spec);
  if (it != cfg.states.end()) return it->second;
  return parse_inline_weights(spec);
}

json witness_json(const AlgebraElement& w) {
  json out;
  if (w.kind() == AlgebraKind::Commutative) {
    json coords = json::array();
    for (const auto& c : w.coords()) coords.push_back(json::array({c.real(), c.imag()}));
    out["coords"] = std::move(coords);
  } else {
    json rows = json::array();
    for (Eigen::Index r = 0; r < w.mat().rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < w.mat().cols(); ++c)
        row.push_back(json::array({w.mat()(r, c).real(), w.mat()(r, c).imag()}));
      rows.push_back(std::move(row));
    }
    out["matrix"] = std::move(rows);
  }
  return out;
}

void print_witness(const AlgebraElement& w) {
  if (w.kind() == AlgebraKind::Commutative) {
    std::cout << "witness: (";
    for (std::size_t i = 0; i < w.coords().size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << fmt(w.coords()[i].real());
      if (std::abs(w.coords()[i].imag()) > 1e-14)
        std::cout << (w.coords()[i].imag() >= 0 ? "+" : "") << fmt(w.coords()[i].imag())
                  << "i";
    }
    std::cout << ")\n";
  } else {
    std::cout << "witness (matrix):\n";
    for (Eigen::Index r = 0; r < w.mat().rows(); ++r) {
      std::cout << "  ";
      for (Eigen::Index c = 0; c < w.mat().cols(); ++c) {
        const Complex z = w.mat()(r, c);
        std::cout << "(" << fmt(z.real()) << "," << fmt(z.imag()) << ") ";
      }
      std::cout << "\n";
    }
  }
}

RealVector weights_vector(const State& s) {
  RealVector v(s.n());
  for (int i = 0; i < s.n(); ++i) v(i) = s.weights()[i];
  return v;
}

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> state_specs;
  bool as_json = false;
  double tol = -1.0;  // <0: keep config value
};

SolverOptions solver_options(const TripleConfig& cfg, const CommonArgs& args) {
  SolverOptions opts = cfg.solver;
  if (args.tol > 0.0) opts.tol = args.tol;
  return opts;
}

int cmd_distance(const CommonArgs& args) {
  const TripleConfig cfg = load_triple_config(args.config_path);
  const FiniteSpectralTriple triple = cfg.make_triple();
  const State phi = resolve_state(cfg, args.state_specs.at(0));
  const State psi = resolve_state(cfg, args.state_specs.at(1));
  const DistanceResult res = spectral_distance(triple, phi, psi, solver_options(cfg, args));

  if (args.as_json) {
    json out;
    out["value"] = value_or_inf(res.value);
    out["infinite"] = res.is_infinite();
    out["iterations"] = res.iterations;
    out["certified_gap"] = res.certified_gap;
    if (res.witness) out["witness"] = witness_json(*res.witness);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "d_D = " << fmt(res.value) << "\n";
    if (res.witness) print_witness(*res.witness);
    std::cout << "iterations: " << res.iterations
              << "  certified_gap: " << fmt(res.certified_gap) << "\n";
  }
  return res.is_infinite() ? kInfiniteDistance : kOk;
}

int cmd_wasserstein(const CommonArgs& args) {
  const TripleConfig cfg = load_triple_config(args.config_path);
  const FiniteSpectralTriple triple = cfg.make_triple();
  const State phi = resolve_state(cfg, args.state_specs.at(0));
  const State psi = resolve_state(cfg, args.state_specs.at(1));
  const SpectralWassersteinResult res =
      spectral_wasserstein(triple, phi, psi, solver_options(cfg, args));

  double dual_value = std::numeric_limits<double>::quiet_NaN();
  if (res.potential)
    dual_value = res.potential->f.dot(weights_vector(phi) - weights_vector(psi));

  if (args.as_json) {
    json out;
    out["value"] = value_or_inf(res.value);
    json plan = json::array();
    for (Eigen::Index r = 0; r < res.plan.pi.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < res.plan.pi.cols(); ++c) row.push_back(res.plan.pi(r, c));
      plan.push_back(std::move(row));
    }
    out["plan"] = std::move(plan);
    if (res.potential) {
      out["potential"] = std::vector<double>(res.potential->f.data(),
                                             res.potential->f.data() + res.potential->f.size());
      out["dual_value"] = dual_value;
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "W_D = " << fmt(res.value) << "\n";
    std::cout << "plan:\n";
    for (Eigen::Index r = 0; r < res.plan.pi.rows(); ++r) {
      std::cout << "  ";
      for (Eigen::Index c = 0; c < res.plan.pi.cols(); ++c)
        std::cout << fmt(res.plan.pi(r, c)) << " ";
      std::cout << "\n";
    }
    if (res.potential) {
      std::cout << "dual potential: ";
      for (Eigen::Index i = 0; i < res.potential->f.size(); ++i)
        std::cout << fmt(res.potential->f(i)) << " ";
      std::cout << "\ndual value: " << fmt(dual_value)
                << "  gap: " << fmt(std::abs(dual_value - res.value)) << "\n";
    }
  }
  return std::isinf(res.value) ? kInfiniteDistance : kOk;
}

int cmd_compare(const CommonArgs& args) {
  const TripleConfig cfg = load_triple_config(args.config_path);
  const FiniteSpectralTriple triple = cfg.make_triple();
  const State phi = resolve_state(cfg, args.state_specs.at(0));
  const State psi = resolve_state(cfg, args.state_specs.at(1));
  const SolverOptions opts = solver_options(cfg, args);
  const double d = spectral_distance(triple, phi, psi, opts).value;
  const double w = spectral_wasserstein(triple, phi, psi, opts).value;
  const double gap = w - d;

  if (args.as_json) {
    json out;
    out["d"] = value_or_inf(d);
    out["w"] = value_or_inf(w);
    out["gap"] = value_or_inf(gap);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "d_D = " << fmt(d) << "\nW_D = " << fmt(w) << "\ngap = " << fmt(gap)
              << "\n";
  }
  if (gap < -1e-6) {
    std::cerr << "internal error: W_D < d_D beyond tolerance\n";
    return kReproFailure;
  }
  return kOk;
}

int cmd_cost_matrix(const CommonArgs& args) {
  const TripleConfig cfg = load_triple_config(args.config_path);
  const FiniteSpectralTriple triple = cfg.make_triple();
  const CostMatrix cost = cost_matrix(triple, solver_options(cfg, args));
  if (args.as_json) {
    json rows = json::array();
    for (int i = 0; i < cost.size(); ++i) {
      json row = json::array();
      for (int j = 0; j < cost.size(); ++j) row.push_back(value_or_inf(cost(i, j)));
      rows.push_back(std::move(row));
    }
    std::cout << json{{"cost", rows}}.dump(2) << "\n";
  } else {
    for (int i = 0; i < cost.size(); ++i) {
      for (int j = 0; j < cost.size(); ++j) std::cout << fmt(cost(i, j)) << " ";
      std::cout << "\n";
    }
  }
  return kOk;
}

int cmd_grid_scan(const CommonArgs& args, int resolution) {
  const TripleConfig cfg = load_triple_config(args.config_path);
  const FiniteSpectralTriple triple = cfg.make_triple();
  if (triple.algebra.kind != AlgebraKind::Commutative || triple.algebra.n != 3)
    throw ConfigError("grid-scan: only commutative triples with n = 3 are supported");
  if (resolution < 2) throw ConfigError("grid-scan: resolution must be at least 2");

  const SolverOptions opts = solver_options(cfg, args);
  const CostMatrix cost = cost_matrix(triple, opts);

  std::vector<std::array<double, 2>> grid;
  const int steps = resolution - 1;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j + i <= steps; ++j)
      grid.push_back({static_cast<double>(i) / steps, static_cast<double>(j) / steps});

  auto grid_state = [](const std::array<double, 2>& g) {
    return State::probability({g[0], g[1], std::max(0.0, 1.0 - g[0] - g[1])});
  };

  std::cout << "lambda1,lambda2,lambda1p,lambda2p,d,w,gap\n";
  for (const auto& g1 : grid)
    for (const auto& g2 : grid) {
      const State phi = grid_state(g1);
      const State psi = grid_state(g2);
      const double d = spectral_distance(triple, phi, psi, opts).value;
      const double w =
          wasserstein_primal(cost, weights_vector(phi), weights_vector(psi)).value;
      std::cout << fmt(g1[0]) << "," << fmt(g1[1]) << "," << fmt(g2[0]) << ","
                << fmt(g2[1]) << "," << fmt(d) << "," << fmt(w) << "," << fmt(w - d)
                << "\n";
    }
  return kOk;
}

// ---- repro-paper -----------------------------------------------------

json prop1_section(bool& all_pass) {
  json section = json::array();
  const std::vector<C3Params> settings = {{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}};
  for (const C3Params& p : settings) {
    const auto reports = verify_prop1(p, default_lambda_grid(), 1e-4);
    long failures = 0;
    double worst = 0.0;
    for (const auto& r : reports) {
      if (!r.pass()) ++failures;
      worst = std::max({worst, std::abs(r.w_value - *r.closed_form_w),
                        std::abs(r.d_value - *r.closed_form_d)});
    }
    json entry;
    entry["alpha"] = p.alpha;
    entry["beta"] = p.beta;
    entry["grid_points"] = reports.size();
    entry["failures"] = failures;
    entry["max_abs_error"] = worst;
    entry["pass"] = failures == 0;
    if (failures > 0) all_pass = false;
    section.push_back(std::move(entry));
  }
  return section;
}

json inequality_section(std::uint64_t seed, bool& all_pass) {
  const FiniteSpectralTriple triple = c3_triple({1.0, 1.0});
  const InequalityReport rep = verify_inequality(triple, 100, seed);
  json entry;
  entry["trials"] = rep.trials;
  entry["seed"] = rep.seed;
  entry["violations"] = rep.violations;
  entry["max_gap"] = rep.max_gap;
  entry["min_slack"] = rep.min_slack;
  entry["pass"] = rep.pass();
  if (!rep.pass()) {
    all_pass = false;
    entry["worst_phi"] = rep.worst_phi;
    entry["worst_psi"] = rep.worst_psi;
  }
  return entry;
}

json segment_section(std::uint64_t seed, bool& all_pass) {
  const FiniteSpectralTriple triple = c3_triple({1.0, 2.0});
  Rng rng(seed + 1);
  json section = json::array();
  for (int t = 0; t < 10; ++t) {
    const int i = static_cast<int>(rng.next_u64() % 3);
    int j = static_cast<int>(rng.next_u64() % 3);
    if (j == i) j = (j + 1) % 3;
    const double l1 = rng.uniform01();
    const double l2 = rng.uniform01();
    const State s1 = mix(l1, pure_state(triple, i), pure_state(triple, j));
    const State s2 = mix(l2, pure_state(triple, i), pure_state(triple, j));
    const double d = spectral_distance(triple, s1, s2).value;
    const double w = spectral_wasserstein(triple, s1, s2).value;
    json entry;
    entry["pair"] = json::array({i, j});
    entry["lambda1"] = l1;
    entry["lambda2"] = l2;
    entry["d"] = d;
    entry["w"] = w;
    entry["pass"] = std::abs(d - w) <= 1e-5;
    if (!entry["pass"].get<bool>()) all_pass = false;
    section.push_back(std::move(entry));
  }
  return section;
}

json m2_section(std::uint64_t seed, int max_samples, bool& all_pass) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 1) = d(1, 0) = Complex(1.0, 0.0);  // Bloch axis along x
  const HermitianOperator dirac(d);

  std::vector<int> sample_sizes;
  for (int n = 32; n <= std::max(32, max_samples); n *= 2) sample_sizes.push_back(n);

  Rng rng(seed + 2);
  // states with Bloch vectors in the finite-distance plane (orthogonal to x)
  auto random_state = [&] {
    const double r = 0.2 + 0.7 * rng.uniform01();
    const double th = 2.0 * M_PI * rng.uniform01();
    ComplexMatrix rho = 0.5 * ComplexMatrix::Identity(2, 2);
    const double by = r * std::cos(th), bz = r * std::sin(th);
    rho(0, 0) += Complex(0.5 * bz, 0.0);
    rho(1, 1) -= Complex(0.5 * bz, 0.0);
    rho(0, 1) += Complex(0.0, -0.5 * by);
    rho(1, 0) += Complex(0.0, 0.5 * by);
    return State::density(HermitianOperator(std::move(rho)));
  };

  json pairs = json::array();
  std::vector<std::vector<double>> gaps(sample_sizes.size());
  bool bound_ok = true;
  for (int t = 0; t < 10; ++t) {
    const State rho1 = random_state();
    const State rho2 = random_state();
    json entry;
    entry["gaps"] = json::array();
    double dval = 0.0;
    for (std::size_t s = 0; s < sample_sizes.size(); ++s) {
      const M2ProbeResult probe = m2_equality_probe(dirac, rho1, rho2, sample_sizes[s]);
      dval = probe.d;
      const double gap = probe.w_grid - probe.d;
      gaps[s].push_back(gap);
      entry["gaps"].push_back(gap);
      if (!(probe.w_grid >= probe.d - 1e-6)) bound_ok = false;
    }
    entry["d"] = dval;
    pairs.push_back(std::move(entry));
  }

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  json entry;
  entry["sample_sizes"] = sample_sizes;
  json medians = json::array();
  for (const auto& g : gaps) medians.push_back(median(g));
  entry["median_gaps"] = medians;
  const bool trend_ok =
      median(gaps.back()) < median(gaps.front()) + 1e-12 || gaps.size() < 2;
  entry["bound_pass"] = bound_ok;
  entry["trend_pass"] = trend_ok;
  entry["pairs"] = std::move(pairs);
  entry["pass"] = bound_ok && trend_ok;
  if (!(bound_ok && trend_ok)) all_pass = false;
  return entry;
}

int cmd_repro_paper(std::uint64_t seed, int samples, bool as_json) {
  bool all_pass = true;
  json report;
  report["seed"] = seed;
  report["prop1"] = prop1_section(all_pass);
  report["inequality"] = inequality_section(seed, all_pass);
  report["segments"] = segment_section(seed, all_pass);
  report["m2_probe"] = m2_section(seed, samples, all_pass);
  report["all_pass"] = all_pass;

  if (as_json) {
    std::cout << report.dump(2) << "\n";
  } else {
    for (const auto& entry : report["prop1"])
      std::cout << (entry["pass"].get<bool>() ? "PASS" : "FAIL") << " prop1 (alpha="
                << entry["alpha"] << ", beta=" << entry["beta"]
                << "): max abs error " << fmt(entry["max_abs_error"].get<double>())
                << "\n";
    std::cout << (report["inequality"]["pass"].get<bool>() ? "PASS" : "FAIL")
              << " inequality d <= W: violations "
              << report["inequality"]["violations"] << ", min slack "
              << fmt(report["inequality"]["min_slack"].get<double>()) << "\n";
    bool seg_pass = true;
    double seg_worst = 0.0;
    for (const auto& entry : report["segments"]) {
      seg_pass = seg_pass && entry["pass"].get<bool>();
      seg_worst = std::max(seg_worst, std::abs(entry["d"].get<double>() -
                                               entry["w"].get<double>()));
    }
    std::cout << (seg_pass ? "PASS" : "FAIL") << " segment equality: max |d - W| "
              << fmt(seg_worst) << "\n";
    const auto& m2 = report["m2_probe"];
    std::cout << (m2["pass"].get<bool>() ? "PASS" : "FAIL")
              << " m2 probe: median gaps";
    for (const auto& g : m2["median_gaps"]) std::cout << " " << fmt(g.get<double>());
    std::cout << "\n";
    std::cout << (all_pass ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
  }
  if (!all_pass && !as_json) std::cerr << report.dump(2) << "\n";
  return all_pass ? kOk : kReproFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral distance and Wasserstein-1 transport on finite spectral triples"};
  app.require_subcommand(1);

  CommonArgs args;
  std::uint64_t seed = 42;
  int samples = 128;
  int resolution = 2;
  bool csv = false;

  auto add_common = [&](CLI::App* cmd, int n_states) {
    cmd->add_option("config", args.config_path, "triple config (JSON)")->required();
    if (n_states > 0)
      cmd->add_option("states", args.state_specs, "state names or inline weights")
          ->expected(n_states);
    cmd->add_flag("--json", args.as_json, "machine-readable output");
    cmd->add_option("--tol", args.tol, "solver tolerance override");
  };

  CLI::App* distance = app.add_subcommand("distance", "spectral distance between two states");
  add_common(distance, 2);
  CLI::App* wasserstein =
      app.add_subcommand("wasserstein", "Wasserstein-1 with spectral cost");
  add_common(wasserstein, 2);
  CLI::App* compare = app.add_subcommand("compare", "both distances and their gap");
  add_common(compare, 2);
  CLI::App* costm = app.add_subcommand("cost-matrix", "pure-state spectral distances");
  add_common(costm, 0);
  CLI::App* gridscan = app.add_subcommand("grid-scan", "CSV gap scan over the simplex");
  add_common(gridscan, 0);
  gridscan->add_option("--resolution", resolution, "simplex grid resolution")->required();
  gridscan->add_flag("--csv", csv, "CSV output (always on for grid-scan)");
  CLI::App* repro = app.add_subcommand("repro-paper", "run the built-in verification suite");
  repro->add_flag("--json", args.as_json, "machine-readable report");
  repro->add_option("--seed", seed, "random seed");
  repro->add_option("--samples", samples, "largest sample count for the M2 probe");

  CLI11_PARSE(app, argc, argv);

  try {
    if (distance->parsed()) return cmd_distance(args);
    if (wasserstein->parsed()) return cmd_wasserstein(args);
    if (compare->parsed()) return cmd_compare(args);
    if (costm->parsed()) return cmd_cost_matrix(args);
    if (gridscan->parsed()) return cmd_grid_scan(args, resolution);
    if (repro->parsed()) return cmd_repro_paper(seed, samples, args.as_json);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const NonConvergenceError& e) {
    std::cerr << e.what() << " (best value " << fmt(e.best_value) << ")\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
