#include "pns/experiment.hpp"

#include <time.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "pns/metrics.hpp"
#include "pns/parallel.hpp"

namespace pns {

namespace {

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ConfigError("bad integer for " + what + ": '" + s + "'");
  }
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw ConfigError("bad number for " + what + ": '" + s + "'");
  }
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::MH: return "mh";
    case Method::RF: return "rf";
    case Method::BasicPNS: return "basic_pns";
    case Method::MHAlternating: return "mh_alternating";
    case Method::RFAlternating: return "rf_alternating";
    case Method::UnbiasedPNS: return "unbiased_pns";
    case Method::UnbiasedPNSNaive: return "unbiased_pns_naive";
    case Method::MHContinuous: return "mh_continuous";
    case Method::UnbiasedPNSContinuous: return "unbiased_pns_continuous";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  static const std::map<std::string, Method> table = {
      {"mh", Method::MH},
      {"rf", Method::RF},
      {"basic_pns", Method::BasicPNS},
      {"mh_alternating", Method::MHAlternating},
      {"rf_alternating", Method::RFAlternating},
      {"unbiased_pns", Method::UnbiasedPNS},
      {"unbiased_pns_naive", Method::UnbiasedPNSNaive},
      {"mh_continuous", Method::MHContinuous},
      {"unbiased_pns_continuous", Method::UnbiasedPNSContinuous},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown method: '" + name + "'");
  return it->second;
}

std::string ModelSpec::label() const {
  char buf[128];
  switch (kind) {
    case Kind::Triangle: return "triangle";
    case Kind::Hypercube16: return "hypercube16";
    case Kind::Qubo:
      std::snprintf(buf, sizeof buf, "qubo%d(std=%g,seed=%llu)", n, std_dev,
                    static_cast<unsigned long long>(seed));
      return buf;
    case Kind::QuboFile: return "qubo_file(" + path + ")";
    case Kind::Donuts:
      std::snprintf(buf, sizeof buf, "donuts(mu0=%g,sigma=%g)", mu0, sigma);
      return buf;
  }
  return "?";
}

ModelSpec parse_model_spec(const std::string& text) {
  ModelSpec spec;
  const auto colon = text.find(':');
  const std::string head = trim(text.substr(0, colon));
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    for (const auto& part : split(text.substr(colon + 1), ',')) {
      const auto eq = part.find('=');
      if (eq == std::string::npos)
        throw ConfigError("bad model option: '" + part + "'");
      kv[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
    }
  }
  auto take = [&kv](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::string();
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  if (head == "triangle") {
    spec.kind = ModelSpec::Kind::Triangle;
  } else if (head == "hypercube16") {
    spec.kind = ModelSpec::Kind::Hypercube16;
  } else if (head == "qubo") {
    if (std::string p = take("file"); !p.empty()) {
      spec.kind = ModelSpec::Kind::QuboFile;
      spec.path = p;
    } else {
      spec.kind = ModelSpec::Kind::Qubo;
      if (std::string v = take("n"); !v.empty())
        spec.n = static_cast<int>(parse_u64(v, "model n"));
      if (std::string v = take("std"); !v.empty())
        spec.std_dev = parse_double(v, "model std");
      if (std::string v = take("seed"); !v.empty())
        spec.seed = parse_u64(v, "model seed");
    }
  } else if (head == "donuts") {
    spec.kind = ModelSpec::Kind::Donuts;
    if (std::string v = take("mu0"); !v.empty())
      spec.mu0 = parse_double(v, "model mu0");
    if (std::string v = take("sigma"); !v.empty())
      spec.sigma = parse_double(v, "model sigma");
  } else {
    throw ConfigError("unknown model kind: '" + head + "'");
  }
  if (!kv.empty())
    throw ConfigError("unknown model option: '" + kv.begin()->first + "'");
  return spec;
}

BuiltModel build_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelSpec::Kind::Triangle: return make_triangle();
    case ModelSpec::Kind::Hypercube16: return make_hypercube16();
    case ModelSpec::Kind::Qubo:
      return QuboModel::random(spec.n, spec.std_dev, spec.seed);
    case ModelSpec::Kind::QuboFile: return load_qubo(spec.path);
    case ModelSpec::Kind::Donuts: return DonutsModel{spec.mu0, spec.sigma};
  }
  throw ConfigError("unreachable model kind");
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig cfg;
  cfg.metrics.clear();
  std::string line, section;
  std::size_t lineno = 0;
  bool have_model = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("bad section header at line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " +
                        std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == "model") {
      if (key == "kind") {
        // re-parse options already seen is unsupported; kind must come first
        cfg.model = parse_model_spec(value);
        have_model = true;
      } else if (!have_model) {
        throw ConfigError("[model] kind must come before other model keys");
      } else if (key == "n") {
        cfg.model.n = static_cast<int>(parse_u64(value, key));
      } else if (key == "std") {
        cfg.model.std_dev = parse_double(value, key);
      } else if (key == "seed") {
        cfg.model.seed = parse_u64(value, key);
      } else if (key == "path") {
        cfg.model.path = value;
      } else if (key == "mu0") {
        cfg.model.mu0 = parse_double(value, key);
      } else if (key == "sigma") {
        cfg.model.sigma = parse_double(value, key);
      } else {
        throw ConfigError("unknown [model] key: '" + key + "'");
      }
    } else if (section == "sweep") {
      if (key == "methods") {
        for (const auto& name : split(value, ','))
          cfg.methods.push_back(method_from_name(name));
      } else if (key == "budgets") {
        for (const auto& b : split(value, ','))
          cfg.budgets.push_back(parse_u64(b, "budget"));
      } else if (key == "replications") {
        cfg.replications = parse_u64(value, key);
      } else if (key == "global_seed") {
        cfg.global_seed = parse_u64(value, key);
      } else if (key == "burn_in") {
        if (value == "none") {
          cfg.burn_in = BurnIn::none();
        } else if (value == "discard") {
          cfg.burn_in = BurnIn::discard();
        } else if (value.rfind("discard:", 0) == 0) {
          cfg.burn_in = BurnIn::discard(parse_u64(value.substr(8), key));
        } else if (value.rfind("optimize:", 0) == 0) {
          cfg.burn_in = BurnIn::optimize(parse_u64(value.substr(9), key));
        } else {
          throw ConfigError("bad burn_in: '" + value + "'");
        }
      } else {
        throw ConfigError("unknown [sweep] key: '" + key + "'");
      }
    } else if (section == "scheme") {
      if (key == "kind") {
        if (value == "full") cfg.scheme.kind = SchemeKind::Full;
        else if (value == "systematic")
          cfg.scheme.kind = SchemeKind::SystematicPartition;
        else if (value == "random") cfg.scheme.kind = SchemeKind::RandomSubset;
        else if (value == "explicit") cfg.scheme.kind = SchemeKind::ExplicitSets;
        else if (value == "pairs")
          cfg.scheme.kind = SchemeKind::ContinuousSymmetricPairs;
        else throw ConfigError("unknown scheme kind: '" + value + "'");
      } else if (key == "set_size") {
        cfg.scheme.set_size = static_cast<int>(parse_u64(value, key));
      } else if (key == "num_sets") {
        cfg.scheme.num_sets = static_cast<int>(parse_u64(value, key));
      } else if (key == "num_pairs") {
        cfg.scheme.num_pairs = static_cast<int>(parse_u64(value, key));
      } else if (key == "l0") {
        cfg.scheme.budget_l0 = parse_u64(value, key);
      } else if (key == "sets") {
        cfg.scheme.explicit_sets.clear();
        for (const auto& group : split(value, ';')) {
          std::vector<int> set;
          std::istringstream gs(group);
          std::string tok;
          while (gs >> tok)
            set.push_back(static_cast<int>(parse_u64(tok, "set index")));
          if (!set.empty()) cfg.scheme.explicit_sets.push_back(std::move(set));
        }
      } else if (key == "proposal_std") {
        cfg.proposal_std = parse_double(value, key);
      } else {
        throw ConfigError("unknown [scheme] key: '" + key + "'");
      }
    } else if (section == "output") {
      if (key == "path") {
        cfg.output_path = value;
      } else if (key == "metrics") {
        for (const auto& m : split(value, ',')) {
          if (m == "tvd") cfg.metrics.push_back(MetricKind::Tvd);
          else if (m == "proportions")
            cfg.metrics.push_back(MetricKind::Proportions);
          else if (m == "donuts_bias")
            cfg.metrics.push_back(MetricKind::DonutsBias);
          else throw ConfigError("unknown metric: '" + m + "'");
        }
      } else {
        throw ConfigError("unknown [output] key: '" + key + "'");
      }
    } else {
      throw ConfigError("key outside a known section at line " +
                        std::to_string(lineno));
    }
  }
  return cfg;
}

ExperimentConfig parse_experiment_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  return parse_experiment_config(in);
}

void validate_experiment_config(const ExperimentConfig& cfg) {
  if (cfg.methods.empty()) throw ConfigError("no methods configured");
  if (cfg.budgets.empty()) throw ConfigError("empty budget list");
  for (std::uint64_t b : cfg.budgets)
    if (b < 1) throw ConfigError("budgets must be >= 1");
  if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
  if (cfg.metrics.empty()) throw ConfigError("no metrics configured");
  if (cfg.output_path.empty()) throw ConfigError("no output path configured");
  const bool continuous_model = cfg.model.kind == ModelSpec::Kind::Donuts;
  for (Method m : cfg.methods) {
    const bool continuous_method =
        m == Method::MHContinuous || m == Method::UnbiasedPNSContinuous;
    if (continuous_method != continuous_model)
      throw ConfigError(std::string("method ") + method_name(m) +
                        " is incompatible with model " + cfg.model.label());
  }
  for (MetricKind mk : cfg.metrics) {
    if (mk == MetricKind::DonutsBias && !continuous_model)
      throw ConfigError("donuts_bias metric needs the donuts model");
    if ((mk == MetricKind::Tvd || mk == MetricKind::Proportions) &&
        continuous_model)
      throw ConfigError("exact-distribution metrics need an enumerable model");
  }
  if (continuous_model) {
    for (Method m : cfg.methods) {
      if (m == Method::UnbiasedPNSContinuous && cfg.scheme.num_pairs < 1)
        throw ConfigError("continuous PNS needs num_pairs >= 1");
      if (m == Method::MHContinuous && !(cfg.proposal_std > 0.0))
        throw ConfigError("continuous M-H needs proposal_std > 0");
    }
    if (cfg.model.sigma <= 0.0) throw ConfigError("donuts sigma must be > 0");
  }
  if (!continuous_model) {
    const BuiltModel built = build_model(cfg.model);
    std::visit(
        [&](const auto& model) {
          using T = std::decay_t<decltype(model)>;
          if constexpr (!std::is_same_v<T, DonutsModel>) {
            for (MetricKind mk : cfg.metrics) {
              if (mk == MetricKind::Tvd && model.state_count() > kExactStateGuard)
                throw ConfigError("state space too large for exact TVD");
              if (mk == MetricKind::Proportions && model.state_count() > 1024)
                throw ConfigError("state space too large for proportions");
            }
            for (Method m : cfg.methods) {
              SamplerConfig sc;
              sc.method = m;
              sc.scheme = cfg.scheme;
              sc.budget = 1;
              validate_sampler_config(sc, model.move_count(), model.degree());
            }
          }
        },
        built);
  }
}

const char* const kCsvHeader =
    "method,model,scheme,set_size,l0,budget,replication,seed,jump_size,"
    "cpu_seconds,burnin_cpu_seconds,metric,value";

std::string to_csv_line(const ResultRow& row) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%s,%s,%s,%d,%llu,%llu,%llu,%llu,%llu,%.17g,%.17g,%s,%.17g",
                row.method.c_str(), row.model.c_str(), row.scheme.c_str(),
                row.set_size, static_cast<unsigned long long>(row.l0),
                static_cast<unsigned long long>(row.budget),
                static_cast<unsigned long long>(row.replication),
                static_cast<unsigned long long>(row.seed),
                static_cast<unsigned long long>(row.jump_size),
                row.cpu_seconds, row.burnin_cpu_seconds, row.metric.c_str(),
                row.value);
  return buf;
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t grid_index,
                          std::uint64_t replication) {
  std::uint64_t z = splitmix64(global_seed ^
                               0x9E3779B97F4A7C15ull * (grid_index + 1));
  z = splitmix64(z ^ 0xBF58476D1CE4E5B9ull * (replication + 1));
  return z;
}

namespace {

const char* scheme_name(SchemeKind k) {
  switch (k) {
    case SchemeKind::Full: return "full";
    case SchemeKind::SystematicPartition: return "systematic";
    case SchemeKind::RandomSubset: return "random";
    case SchemeKind::ExplicitSets: return "explicit";
    case SchemeKind::ContinuousSymmetricPairs: return "pairs";
  }
  return "?";
}

struct TaskResult {
  std::vector<ResultRow> rows;
};

bool row_less(const ResultRow& a, const ResultRow& b) {
  const auto key = [](const ResultRow& r) {
    return std::tie(r.method, r.model, r.scheme, r.set_size, r.l0, r.budget,
                    r.replication, r.metric);
  };
  return key(a) < key(b);
}

}  // namespace

std::size_t run_experiment(const ExperimentConfig& cfg) {
  validate_experiment_config(cfg);
  const BuiltModel built = build_model(cfg.model);
  const std::string model_label = cfg.model.label();
  const bool continuous_model = cfg.model.kind == ModelSpec::Kind::Donuts;

  // Shared exact table for tvd/proportions.
  ExactDistribution exact;
  bool need_exact = false;
  for (MetricKind mk : cfg.metrics)
    if (mk == MetricKind::Tvd) need_exact = true;
  if (need_exact && !continuous_model) {
    std::visit(
        [&](const auto& model) {
          using T = std::decay_t<decltype(model)>;
          if constexpr (!std::is_same_v<T, DonutsModel>)
            exact = exact_distribution(model);
        },
        built);
  }

  const std::size_t n_methods = cfg.methods.size();
  const std::size_t n_budgets = cfg.budgets.size();
  const std::size_t n_tasks = n_methods * n_budgets * cfg.replications;
  std::vector<TaskResult> results(n_tasks);

  std::ofstream partial(cfg.output_path, std::ios::trunc);
  if (!partial)
    throw ConfigError("cannot write output: " + cfg.output_path);
  partial << kCsvHeader << "\n" << std::flush;
  std::mutex io_mu;

  auto run_task = [&](std::size_t task) {
    const std::size_t rep = task % cfg.replications;
    const std::size_t grid = task / cfg.replications;
    const std::size_t bi = grid % n_budgets;
    const std::size_t mi = grid / n_budgets;
    const Method method = cfg.methods[mi];
    const std::uint64_t budget = cfg.budgets[bi];
    const std::uint64_t seed = derive_seed(cfg.global_seed, grid, rep);

    ResultRow base;
    base.method = method_name(method);
    base.model = model_label;
    base.scheme = scheme_name(cfg.scheme.kind);
    base.set_size = cfg.scheme.kind == SchemeKind::ContinuousSymmetricPairs
                        ? 2 * cfg.scheme.num_pairs
                        : cfg.scheme.set_size;
    base.l0 = cfg.scheme.budget_l0;
    base.budget = budget;
    base.replication = rep;
    base.seed = seed;

    std::vector<ResultRow>& rows = results[task].rows;
    const double t0 = thread_cpu_seconds();
    double t_first_emit = t0;
    bool saw_emit = false;

    if (!continuous_model) {
      WeightedEmpirical emp;
      std::uint64_t entries = 0;
      auto sink = [&](PackedState s, std::uint64_t m) {
        if (!saw_emit) {
          t_first_emit = thread_cpu_seconds();
          saw_emit = true;
        }
        emp.add(s, m);
        ++entries;
      };
      SamplerConfig sc;
      sc.method = method;
      sc.scheme = cfg.scheme;
      sc.budget = budget;
      sc.seed = seed;
      sc.burn_in = cfg.burn_in;
      std::visit(
          [&](const auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (!std::is_same_v<T, DonutsModel>)
              run_sampler_into(model, sc, sink);
          },
          built);
      const double t1 = thread_cpu_seconds();
      base.jump_size = entries;
      base.cpu_seconds = std::max(t1 - t_first_emit, 1e-9);
      base.burnin_cpu_seconds = std::max(t_first_emit - t0, 0.0);
      for (MetricKind mk : cfg.metrics) {
        if (mk == MetricKind::Tvd) {
          ResultRow r = base;
          r.metric = "tvd";
          r.value = tvd(emp, exact);
          rows.push_back(std::move(r));
        } else if (mk == MetricKind::Proportions) {
          std::uint64_t states = 0;
          std::visit(
              [&](const auto& model) {
                using T = std::decay_t<decltype(model)>;
                if constexpr (!std::is_same_v<T, DonutsModel>)
                  states = model.state_count();
              },
              built);
          for (std::uint64_t s = 0; s < states; ++s) {
            ResultRow r = base;
            r.metric = "prop_" + std::to_string(s);
            const auto it = emp.mass.find(s);
            r.value = it == emp.mass.end()
                          ? 0.0
                          : static_cast<double>(it->second) /
                                static_cast<double>(emp.total);
            rows.push_back(std::move(r));
          }
        }
      }
    } else {
      const DonutsModel& donuts = std::get<DonutsModel>(built);
      RingMomentAccumulator acc;
      std::uint64_t entries = 0;
      auto sink = [&](const Vec2& s, std::uint64_t m) {
        if (!saw_emit) {
          t_first_emit = thread_cpu_seconds();
          saw_emit = true;
        }
        acc.add(s, m);
        ++entries;
      };
      if (method == Method::MHContinuous) {
        mh_continuous_into(donuts, cfg.proposal_std, budget, seed, sink);
      } else {
        unbiased_pns_continuous_into(donuts, cfg.scheme.num_pairs,
                                     cfg.scheme.budget_l0, budget, seed, sink);
      }
      const double t1 = thread_cpu_seconds();
      base.jump_size = entries;
      base.cpu_seconds = std::max(t1 - t_first_emit, 1e-9);
      base.burnin_cpu_seconds = std::max(t_first_emit - t0, 0.0);
      for (MetricKind mk : cfg.metrics) {
        if (mk != MetricKind::DonutsBias) continue;
        const DonutsBias bias = donuts_bias(
            acc, ring_reference_moments(donuts.mu0, donuts.sigma));
        const std::pair<const char*, double> parts[] = {
            {"bias_first", bias.first},
            {"bias_second", bias.second},
            {"bias_fourth", bias.fourth},
            {"bias_positive_rate", bias.positive_rate},
        };
        for (const auto& [name, value] : parts) {
          ResultRow r = base;
          r.metric = name;
          r.value = value;
          rows.push_back(std::move(r));
        }
      }
    }
    {
      std::scoped_lock lock(io_mu);
      for (const ResultRow& r : rows) partial << to_csv_line(r) << "\n";
      partial.flush();
    }
  };

  parallel_for(n_tasks, run_task);
  partial.close();

  // Deterministic final order regardless of scheduling.
  std::vector<ResultRow> all;
  for (const TaskResult& tr : results)
    all.insert(all.end(), tr.rows.begin(), tr.rows.end());
  std::sort(all.begin(), all.end(), row_less);
  std::ofstream out(cfg.output_path, std::ios::trunc);
  if (!out) throw ConfigError("cannot rewrite output: " + cfg.output_path);
  out << kCsvHeader << "\n";
  for (const ResultRow& r : all) out << to_csv_line(r) << "\n";
  return all.size();
}

}  // namespace pns
