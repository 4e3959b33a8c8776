#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "logcave/parallel.hpp"

namespace logcave {

// One flat config covering every subcommand; unused sections are ignored.
// JSON keys match the field names; unknown keys are rejected.
struct ExperimentConfig {
  std::string subcommand = "approx";
  std::uint64_t seed = 0;
  bool serial = false;        // force single-threaded execution
  std::string density_json;   // optional truth density (inline JSON object)

  // polytope-rate
  std::string shape = "disk";  // disk | ball
  std::vector<std::size_t> direction_counts{8, 16, 32, 64, 128};
  std::size_t mc_budget = 1000000;

  // approx
  std::vector<double> epsilons{0.4, 0.2, 0.1};
  std::size_t budget = 200000;
  std::size_t sandwich_heights = 10;

  // estimate
  double epsilon = 0.1;
  std::size_t trials = 100;
  std::size_t n_samples = 0;  // 0: derived from vc_proxy/epsilon/sample_constant
  double vc_proxy = 2.0;
  double sample_constant = 5.0;
  double contamination = 0.0;  // mixture weight of the off-model component
  std::vector<double> candidate_means{-1.0, -0.5, 0.0, 0.5, 1.0};

  // vc
  std::vector<std::size_t> rate_sizes{100, 400, 1600, 6400};
  std::size_t rate_replicates = 30;

  // rate (estimator learning curve)
  std::vector<std::size_t> learn_sizes{250, 1000, 4000};
  std::size_t learn_replicates = 3;
  double learn_c_L = 1.5;
  double learn_exponent = 0.4;  // accuracy schedule eps_n = n^(-learn_exponent)

  Exec exec() const { return serial ? Exec::Serial : Exec::Parallel; }
};

// Parse/serialize the config. Parsing fills defaults and rejects unknown keys.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& c, int indent = 2);

struct ResultRecord {
  std::string subcommand;
  std::string config_json;  // resolved config echo
  std::vector<std::pair<std::string, double>> metrics;      // ordered key scalars
  std::vector<std::pair<std::string, std::string>> tables;  // name -> CSV text
  std::vector<std::pair<std::string, std::string>> charts;  // name -> SVG text
};

// JSON form of a record. The timestamp is optional so that byte-identical
// reproduction stays checkable; CSV tables never carry one.
std::string record_to_json(const ResultRecord& r, bool with_timestamp = false, int indent = 2);

ResultRecord run_polytope_rate(const ExperimentConfig& cfg);
ResultRecord run_approx(const ExperimentConfig& cfg);
ResultRecord run_estimate(const ExperimentConfig& cfg);
ResultRecord run_vc(const ExperimentConfig& cfg);
ResultRecord run_rate(const ExperimentConfig& cfg);

// Dispatch on cfg.subcommand.
ResultRecord run_experiment(const ExperimentConfig& cfg);

}  // namespace logcave
