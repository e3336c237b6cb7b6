// Command-line surface: state analysis, bound computation, figure-data
// sweeps, and the self-verification suites.
//
// Exit codes: 0 success, 1 property failure (verify), 2 input error.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellbound/bell.hpp"
#include "bellbound/entanglement.hpp"
#include "bellbound/optimizer.hpp"
#include "bellbound/state_io.hpp"
#include "bellbound/states.hpp"
#include "bellbound/sweeps.hpp"
#include "bellbound/verify.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

double clean(double v) { return v == 0.0 ? 0.0 : v; }  // normalize -0

// 6 significant digits, enough for figure-grade CSV and stable goldens.
std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", clean(v));
  return buf;
}

int with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(std::cout);
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 2;
  }
  body(out);
  return 0;
}

std::vector<double> parse_chi_list(const std::string& text) {
  std::vector<double> chis;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string token = text.substr(pos, comma - pos);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(value)) {
      throw bellbound::StateFormatError("--chi: cannot parse \"" + token + "\" as a number");
    }
    chis.push_back(value);
    pos = comma + 1;
  }
  if (chis.empty()) throw bellbound::StateFormatError("--chi: list is empty");
  return chis;
}

std::string verdict_of(double value) {
  if (value >= bellbound::kTsirelsonBound - 1e-4) return "maximal";
  if (value > 2.0) return "violation";
  return "no-violation";
}

struct CommonFlags {
  std::string input;
  std::string output;
  std::string format = "csv";
  int starts = 64;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  double grid_step = 0.0;
  std::string chi_list;
  int samples = 1000;
  bool numeric = false;
};

bellbound::OptimizerConfig optimizer_config(const CommonFlags& f) {
  bellbound::OptimizerConfig cfg;
  cfg.num_starts = f.starts;
  cfg.f_tol = f.tol;
  cfg.seed = f.seed;
  return cfg;
}

int run_state_info(const CommonFlags& f) {
  const bellbound::StateVariant sv = bellbound::load_state_file(f.input);
  const bellbound::DensityMatrix rho = bellbound::as_density(sv);
  const bellbound::EntanglementReport rep = bellbound::analyze_entanglement(rho);
  const double purity = rho.purity();

  std::optional<double> theta;
  if (bellbound::holds_pure(sv)) {
    theta = bellbound::schmidt_angle(std::get<bellbound::PureState>(sv)).theta;
  } else if (purity > 1.0 - 1e-9) {
    const bellbound::HermEig<4> eig = bellbound::herm_eig(rho.matrix());
    theta = bellbound::schmidt_angle(bellbound::PureState(normalized(eig.vectors[3]))).theta;
  }

  const std::string kind = bellbound::holds_pure(sv) ? "pure" : "density";
  return with_output(f.output, [&](std::ostream& os) {
    if (f.format == "json") {
      nlohmann::json j{{"kind", kind},
                       {"purity", clean(purity)},
                       {"entropy", clean(rep.entropy)},
                       {"concurrence", clean(rep.concurrence)},
                       {"horodecki_M", clean(rep.horodecki_M)},
                       {"horodecki_max", clean(rep.horodecki_max)}};
      if (theta) j["theta"] = clean(*theta);
      os << j.dump(2) << "\n";
    } else {
      os << "field,value\n";
      os << "kind," << kind << "\n";
      os << "purity," << g6(purity) << "\n";
      if (theta) os << "theta," << g6(*theta) << "\n";
      os << "entropy," << g6(rep.entropy) << "\n";
      os << "concurrence," << g6(rep.concurrence) << "\n";
      os << "horodecki_M," << g6(rep.horodecki_M) << "\n";
      os << "horodecki_max," << g6(rep.horodecki_max) << "\n";
    }
  });
}

int run_bound(const CommonFlags& f) {
  const bellbound::StateVariant sv = bellbound::load_state_file(f.input);
  const bellbound::DensityMatrix rho = bellbound::as_density(sv);
  bellbound::OptimizerConfig cfg = optimizer_config(f);
  cfg.force_numeric = f.numeric;
  const bellbound::BoundResult result = bellbound::maximize_bound(rho, cfg);
  const std::string verdict = verdict_of(result.value);

  return with_output(f.output, [&](std::ostream& os) {
    if (f.format == "json") {
      const auto params_json = [](const bellbound::EulerParams& p) {
        return nlohmann::json{{"alpha", clean(p.alpha)},
                              {"beta", clean(p.beta)},
                              {"gamma", clean(p.gamma)},
                              {"delta", clean(p.delta)}};
      };
      nlohmann::json j{{"value", clean(result.value)},
                       {"verdict", verdict},
                       {"starts_converged", result.starts_converged},
                       {"evaluations", result.evaluations},
                       {"best_params",
                        {{"a", params_json(result.best_params.a_params)},
                         {"b", params_json(result.best_params.b_params)}}}};
      os << j.dump(2) << "\n";
    } else {
      os << "field,value\n";
      os << "value," << g6(result.value) << "\n";
      os << "verdict," << verdict << "\n";
      os << "starts_converged," << result.starts_converged << "\n";
      os << "evaluations," << result.evaluations << "\n";
      const bellbound::EulerParams& a = result.best_params.a_params;
      const bellbound::EulerParams& b = result.best_params.b_params;
      os << "alpha_a," << g6(a.alpha) << "\n";
      os << "beta_a," << g6(a.beta) << "\n";
      os << "gamma_a," << g6(a.gamma) << "\n";
      os << "delta_a," << g6(a.delta) << "\n";
      os << "alpha_b," << g6(b.alpha) << "\n";
      os << "beta_b," << g6(b.beta) << "\n";
      os << "gamma_b," << g6(b.gamma) << "\n";
      os << "delta_b," << g6(b.delta) << "\n";
    }
  });
}

int run_sweep_theta(const CommonFlags& f) {
  const double step = f.grid_step > 0.0 ? f.grid_step : kPi / 200.0;
  const std::vector<double> thetas = bellbound::uniform_grid(0.0, kPi, step);
  const std::vector<double> chis =
      f.chi_list.empty() ? std::vector<double>{0.0, kPi / 2.0, kPi, 1.5 * kPi}
                         : parse_chi_list(f.chi_list);
  const auto rows = bellbound::sweep_theta(thetas, chis, optimizer_config(f));

  return with_output(f.output, [&](std::ostream& os) {
    if (f.format == "json") {
      nlohmann::json jrows = nlohmann::json::array();
      for (const auto& r : rows) {
        jrows.push_back({{"theta", clean(r.theta)},
                         {"bound_analytic", clean(r.bound_analytic)},
                         {"bound_numeric", clean(r.bound_numeric)},
                         {"entropy", clean(r.entropy)},
                         {"classical_bound", 2.0}});
      }
      os << nlohmann::json{{"rows", jrows}}.dump(2) << "\n";
    } else {
      os << "theta,bound_analytic,bound_numeric,entropy,classical_bound\n";
      for (const auto& r : rows) {
        os << g6(r.theta) << ',' << g6(r.bound_analytic) << ',' << g6(r.bound_numeric) << ','
           << g6(r.entropy) << ",2\n";
      }
    }
  });
}

int run_sweep_lambda(const CommonFlags& f) {
  const double step = f.grid_step > 0.0 ? f.grid_step : 0.01;
  const bellbound::OptimizerConfig cfg = optimizer_config(f);
  const auto rows = bellbound::sweep_lambda(bellbound::uniform_grid(0.0, 4.0, step), cfg);

  std::optional<double> onset;
  try {
    onset = bellbound::find_onset(rows, cfg);
  } catch (const bellbound::NoOnsetInRangeError&) {
  }
  std::optional<double> turning;
  try {
    turning = bellbound::find_turning_point(rows, cfg);
  } catch (const std::invalid_argument&) {
  }

  return with_output(f.output, [&](std::ostream& os) {
    if (f.format == "json") {
      nlohmann::json jrows = nlohmann::json::array();
      for (const auto& r : rows) {
        jrows.push_back({{"lambda", clean(r.lambda)},
                         {"bound", clean(r.bound)},
                         {"concurrence", clean(r.concurrence)},
                         {"horodecki_max", clean(r.horodecki_max)},
                         {"classical_bound", 2.0}});
      }
      nlohmann::json summary;
      summary["onset"] = onset ? nlohmann::json(clean(*onset)) : nlohmann::json(nullptr);
      summary["turning_point"] = turning ? nlohmann::json(clean(*turning)) : nlohmann::json(nullptr);
      os << nlohmann::json{{"rows", jrows}, {"summary", summary}}.dump(2) << "\n";
    } else {
      os << "lambda,bound,concurrence,horodecki_max,classical_bound\n";
      for (const auto& r : rows) {
        os << g6(r.lambda) << ',' << g6(r.bound) << ',' << g6(r.concurrence) << ','
           << g6(r.horodecki_max) << ",2\n";
      }
      std::cerr << "onset," << (onset ? g6(*onset) : "none") << "\n";
      std::cerr << "turning_point," << (turning ? g6(*turning) : "none") << "\n";
    }
  });
}

int run_verify(const CommonFlags& f) {
  bellbound::verify::VerifyOptions opts;
  opts.seed = f.seed;
  opts.samples = f.samples;
  opts.opt = optimizer_config(f);
  const auto results = bellbound::verify::run_all_suites(opts);

  int suites_passed = 0;
  const int code = with_output(f.output, [&](std::ostream& os) {
    for (const auto& r : results) {
      os << (r.ok() ? "[PASS] " : "[FAIL] ") << r.name << " " << r.passed << "/" << r.total;
      if (!r.note.empty()) os << " (" << r.note << ")";
      os << "\n";
      if (!r.ok()) os << "  counterexample: " << r.failure << "\n";
      if (r.ok()) ++suites_passed;
    }
    os << "verify: " << suites_passed << "/" << results.size() << " suites passed (seed " << f.seed
       << ", samples " << f.samples << ")\n";
  });
  if (code != 0) return code;
  return suites_passed == static_cast<int>(results.size()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tight bound of the CHSH Bell operator under local vertical measurements"};
  app.require_subcommand(1);

  CommonFlags f;

  const auto add_io = [&f](CLI::App* cmd, bool needs_input) {
    if (needs_input) {
      cmd->add_option("--input", f.input, "state JSON file")->required();
    }
    cmd->add_option("--output", f.output, "output path (default: standard output)");
    cmd->add_option("--format", f.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };
  const auto add_opt = [&f](CLI::App* cmd) {
    cmd->add_option("--starts", f.starts, "optimizer multi-start count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--tol", f.tol, "optimizer function tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
  };

  CLI::App* info = app.add_subcommand("state-info", "entanglement measures of a state file");
  add_io(info, true);

  CLI::App* bound = app.add_subcommand("bound", "vertical-measurement CHSH bound of a state file");
  add_io(bound, true);
  add_opt(bound);
  bound->add_flag("--numeric", f.numeric, "run the search even for pure states");

  CLI::App* st = app.add_subcommand("sweep-theta", "pure-state bound over the Schmidt angle");
  add_io(st, false);
  add_opt(st);
  st->add_option("--grid-step", f.grid_step, "theta step (default pi/200)")
      ->check(CLI::PositiveNumber);
  st->add_option("--chi", f.chi_list, "comma-separated phase list (default 0,pi/2,pi,3pi/2)");

  CLI::App* sl = app.add_subcommand("sweep-lambda", "mixed-family bound over lambda in [0,4]");
  add_io(sl, false);
  add_opt(sl);
  sl->add_option("--grid-step", f.grid_step, "lambda step (default 0.01)")
      ->check(CLI::PositiveNumber);

  CLI::App* ver = app.add_subcommand("verify", "run the cross-module property suites");
  ver->add_option("--output", f.output, "output path (default: standard output)");
  add_opt(ver);
  ver->add_option("--samples", f.samples, "sample budget; 1000 = documented full run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*info) return run_state_info(f);
    if (*bound) return run_bound(f);
    if (*st) return run_sweep_theta(f);
    if (*sl) return run_sweep_lambda(f);
    if (*ver) return run_verify(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
