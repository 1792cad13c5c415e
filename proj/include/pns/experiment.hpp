#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pns/continuous.hpp"
#include "pns/models.hpp"
#include "pns/samplers.hpp"
#include "pns/scheme.hpp"

namespace pns {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelSpec {
  enum class Kind { Triangle, Hypercube16, Qubo, QuboFile, Donuts };
  Kind kind = Kind::Triangle;
  int n = 16;
  double std_dev = 10.0;
  std::uint64_t seed = 1;
  std::string path;
  double mu0 = 9.0;
  double sigma = 0.1;

  std::string label() const;
};

// "triangle", "hypercube16", "qubo:n=16,std=10,seed=1",
// "qubo:file=PATH", "donuts:mu0=9,sigma=0.1"
ModelSpec parse_model_spec(const std::string& text);

using BuiltModel = std::variant<TabularModel, QuboModel, DonutsModel>;
BuiltModel build_model(const ModelSpec& spec);

enum class MetricKind { Tvd, Proportions, DonutsBias };

// Declarative sweep: methods x budgets, `replications` chains per point.
struct ExperimentConfig {
  ModelSpec model;
  std::vector<Method> methods;
  std::vector<std::uint64_t> budgets;
  std::uint64_t replications = 1;
  std::uint64_t global_seed = 0;
  BurnIn burn_in = BurnIn::discard();
  PartialNeighborScheme scheme;
  double proposal_std = 1.0;  // continuous M-H step scale
  std::vector<MetricKind> metrics;
  std::string output_path;
};

ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig parse_experiment_config_file(const std::string& path);
void validate_experiment_config(const ExperimentConfig& cfg);

// One row per (replication, metric).
struct ResultRow {
  std::string method;
  std::string model;
  std::string scheme;
  int set_size = 0;
  std::uint64_t l0 = 0;
  std::uint64_t budget = 0;
  std::uint64_t replication = 0;
  std::uint64_t seed = 0;
  std::uint64_t jump_size = 0;
  double cpu_seconds = 0.0;
  double burnin_cpu_seconds = 0.0;
  std::string metric;
  double value = 0.0;
};

extern const char* const kCsvHeader;
std::string to_csv_line(const ResultRow& row);

// Deterministic, collision-free seed stream for the sweep grid.
std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t grid_index,
                          std::uint64_t replication);

// Runs the sweep, appending rows to the output as they finish and rewriting
// the file sorted on completion. Returns the number of rows written.
std::size_t run_experiment(const ExperimentConfig& cfg);

const char* method_name(Method m);
Method method_from_name(const std::string& name);

}  // namespace pns
