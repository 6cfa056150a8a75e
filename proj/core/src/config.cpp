#include "dmcmc/config.hpp"

#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dmcmc/io.hpp"

namespace dmcmc {

std::string to_string(ProblemKind kind) {
  return kind == ProblemKind::linreg ? "linreg" : "logreg";
}

ProblemKind problem_kind_from_string(const std::string& s) {
  if (s == "linreg") return ProblemKind::linreg;
  if (s == "logreg") return ProblemKind::logreg;
  throw std::invalid_argument("unknown problem kind: " + s);
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void config_error(const std::string& message) {
  throw std::invalid_argument("config error: " + message);
}

/// Schema-checked access to one section; rejects unknown and duplicate keys.
class SectionReader {
 public:
  SectionReader(std::string name, const std::vector<std::pair<std::string, std::string>>& kv)
      : name_(std::move(name)) {
    for (const auto& [k, v] : kv) {
      if (!values_.emplace(k, v).second)
        config_error("duplicate field " + name_ + "." + k);
    }
  }

  std::optional<std::string> get(const std::string& key) {
    used_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::string require(const std::string& key) {
    auto v = get(key);
    if (!v) config_error("missing required field " + name_ + "." + key);
    return *v;
  }

  double require_double(const std::string& key) { return to_double(key, require(key)); }

  double get_double(const std::string& key, double fallback) {
    auto v = get(key);
    return v ? to_double(key, *v) : fallback;
  }

  std::optional<double> get_double_opt(const std::string& key) {
    auto v = get(key);
    if (!v) return std::nullopt;
    return to_double(key, *v);
  }

  long get_long(const std::string& key, long fallback) {
    auto v = get(key);
    if (!v) return fallback;
    try {
      return std::stol(*v);
    } catch (const std::exception&) {
      config_error("field " + name_ + "." + key + " is not an integer: " + *v);
    }
  }

  long require_long(const std::string& key) {
    const std::string v = require(key);
    try {
      return std::stol(v);
    } catch (const std::exception&) {
      config_error("field " + name_ + "." + key + " is not an integer: " + v);
    }
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
    auto v = get(key);
    if (!v) return fallback;
    try {
      return std::stoull(*v);
    } catch (const std::exception&) {
      config_error("field " + name_ + "." + key + " is not an unsigned integer: " + *v);
    }
  }

  bool get_bool(const std::string& key, bool fallback) {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    config_error("field " + name_ + "." + key + " is not a boolean: " + *v);
  }

  void finish() const {
    for (const auto& [k, v] : values_)
      if (!used_.count(k)) config_error("unknown field " + name_ + "." + k);
  }

 private:
  double to_double(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      config_error("field " + name_ + "." + key + " is not a number: " + v);
    }
  }

  std::string name_;
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

AlgorithmSpec parse_algorithm(SectionReader& sec, const std::string& label_hint) {
  AlgorithmSpec spec;
  spec.params.algo = algorithm_from_string(sec.require("name"));
  spec.label = label_hint.empty() ? to_string(spec.params.algo) : label_hint;
  switch (spec.params.algo) {
    case Algorithm::dadmms:
    case Algorithm::admm:
      spec.params.rho = sec.get_double("rho", 5.0);
      if (spec.params.rho <= 0) config_error("algorithm.rho must be positive");
      break;
    case Algorithm::dsgld:
      spec.params.eta = sec.require_double("eta");
      break;
    case Algorithm::dsghmc:
      spec.params.eta = sec.require_double("eta");
      spec.params.friction = sec.require_double("gamma");
      break;
    case Algorithm::dula:
      spec.params.dula.chi1 = sec.require_double("chi1");
      spec.params.dula.chi2 = sec.require_double("chi2");
      spec.params.dula.alpha_scale = sec.get_double("alpha_scale", 0.00082);
      spec.params.dula.zeta_scale = sec.get_double("zeta_scale", 0.48);
      spec.params.dula.offset = sec.get_double("schedule_offset", 230.0);
      // Decreasing schedules need nonnegative exponents and positive scales.
      if (spec.params.dula.chi1 < 0 || spec.params.dula.chi2 < 0)
        config_error("algorithm.chi1/chi2 must be nonnegative");
      if (spec.params.dula.alpha_scale <= 0 || spec.params.dula.zeta_scale <= 0 ||
          spec.params.dula.offset <= 0)
        config_error("algorithm schedule scales and offset must be positive");
      break;
  }
  sec.finish();
  return spec;
}

}  // namespace

IniDocument parse_ini(const std::string& text) {
  IniDocument doc;
  std::istringstream is(text);
  std::string line;
  std::string current;
  int lineno = 0;
  std::set<std::string> seen_sections;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        config_error("line " + std::to_string(lineno) + ": malformed section header");
      current = trim(t.substr(1, t.size() - 2));
      if (current.empty())
        config_error("line " + std::to_string(lineno) + ": empty section name");
      if (!seen_sections.insert(current).second)
        config_error("duplicate section [" + current + "]");
      doc.emplace_back(current, std::vector<std::pair<std::string, std::string>>{});
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      config_error("line " + std::to_string(lineno) + ": expected key = value");
    if (current.empty())
      config_error("line " + std::to_string(lineno) + ": key outside any section");
    doc.back().second.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return doc;
}

ConfigFile parse_config(const std::string& text) {
  const IniDocument doc = parse_ini(text);
  ConfigFile cfg;
  bool saw_topology = false;
  bool saw_problem = false;

  for (const auto& [section, kv] : doc) {
    SectionReader sec(section, kv);
    if (section == "problem") {
      saw_problem = true;
      ProblemSpec p;
      p.kind = problem_kind_from_string(sec.require("kind"));
      p.d = static_cast<int>(sec.get_long("d", p.kind == ProblemKind::linreg ? 2 : 3));
      p.lambda = sec.get_double("lambda", 10.0);
      p.n_per_agent = static_cast<int>(sec.get_long("n_per_agent", 50));
      if (const auto ds = sec.get("data_seed")) {
        try {
          p.data_seed = std::stoull(*ds);
        } catch (const std::exception&) {
          config_error("field problem.data_seed is not an unsigned integer: " + *ds);
        }
      }
      if (p.kind == ProblemKind::linreg)
        p.xi = sec.get_double("xi", 4.0);
      else if (sec.get("xi"))
        config_error("problem.xi only applies to linreg");
      if (p.d < 1 || p.n_per_agent < 1 || p.lambda <= 0)
        config_error("problem sizes must be positive");
      sec.finish();
      cfg.problem = p;
    } else if (section == "topology") {
      saw_topology = true;
      cfg.topology.kind = topology_kind_from_string(sec.require("kind"));
      cfg.topology.n_agents = static_cast<int>(sec.require_long("n_agents"));
      if (cfg.topology.n_agents < 1) config_error("topology.n_agents must be positive");
      sec.finish();
    } else if (section == "algorithm" || section.starts_with("algorithm.")) {
      const std::string label =
          section == "algorithm" ? "" : section.substr(std::string("algorithm.").size());
      cfg.algorithms.push_back(parse_algorithm(sec, label));
    } else if (section == "run") {
      cfg.run.n_trials = sec.get_long("n_trials", 100);
      cfg.run.n_iters = sec.get_long("n_iters", 0);
      cfg.run.seed = sec.get_u64("seed", 1);
      cfg.run.out = sec.get("out").value_or("");
      cfg.run.thin = sec.get_long("thin", 1);
      cfg.run.workers = static_cast<int>(sec.get_long("workers", 0));
      cfg.run.dump_iterates = sec.get_bool("dump_iterates", false);
      cfg.run.dump_dataset = sec.get_bool("dump_dataset", false);
      if (cfg.run.n_trials < 1 || cfg.run.thin < 1 || cfg.run.n_iters < 0)
        config_error("run sizes must be positive");
      sec.finish();
    } else if (section == "function") {
      cfg.theory.m_f = sec.get_double_opt("m_f");
      cfg.theory.M_f = sec.get_double_opt("M_f");
      sec.finish();
    } else if (section == "theory") {
      cfg.theory.kappa = sec.get_double_opt("kappa");
      cfg.theory.rho = sec.get_double_opt("rho");
      sec.finish();
    } else {
      config_error("unknown section [" + section + "]");
    }
  }
  if (!saw_topology) config_error("missing required section [topology]");
  if (saw_problem && cfg.topology.kind == TopologyKind::ring_cyclic &&
      cfg.topology.n_agents < 3)
    config_error("ring_cyclic requires n_agents >= 3");
  return cfg;
}

ConfigFile load_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

ExperimentConfig ConfigFile::single_experiment() const {
  if (!problem) config_error("missing required section [problem]");
  if (algorithms.size() != 1)
    config_error("run expects exactly one [algorithm] section");
  ExperimentConfig out;
  out.problem = *problem;
  out.topology = topology;
  out.algorithm = algorithms.front();
  out.run = run;
  return out;
}

std::vector<ExperimentConfig> ConfigFile::compare_experiments() const {
  if (!problem) config_error("missing required section [problem]");
  if (algorithms.empty())
    config_error("compare expects at least one [algorithm.<label>] section");
  std::vector<ExperimentConfig> out;
  std::set<std::string> labels;
  for (const auto& alg : algorithms) {
    if (!labels.insert(alg.label).second)
      config_error("duplicate algorithm label " + alg.label);
    ExperimentConfig c;
    c.problem = *problem;
    c.topology = topology;
    c.algorithm = alg;
    c.run = run;
    out.push_back(std::move(c));
  }
  return out;
}

std::string config_echo(const ExperimentConfig& config) {
  std::ostringstream os;
  os << "[problem]\n";
  os << "kind = " << to_string(config.problem.kind) << "\n";
  os << "d = " << config.problem.d << "\n";
  if (config.problem.kind == ProblemKind::linreg)
    os << "xi = " << format_double(config.problem.xi) << "\n";
  os << "lambda = " << format_double(config.problem.lambda) << "\n";
  os << "n_per_agent = " << config.problem.n_per_agent << "\n";
  os << "data_seed = " << config.problem.data_seed.value_or(config.run.seed) << "\n";
  os << "[topology]\n";
  os << "kind = " << to_string(config.topology.kind) << "\n";
  os << "n_agents = " << config.topology.n_agents << "\n";
  os << "[algorithm]\n";
  os << "name = " << to_string(config.algorithm.params.algo) << "\n";
  switch (config.algorithm.params.algo) {
    case Algorithm::dadmms:
    case Algorithm::admm:
      os << "rho = " << format_double(config.algorithm.params.rho) << "\n";
      break;
    case Algorithm::dsgld:
      os << "eta = " << format_double(config.algorithm.params.eta) << "\n";
      break;
    case Algorithm::dsghmc:
      os << "eta = " << format_double(config.algorithm.params.eta) << "\n";
      os << "gamma = " << format_double(config.algorithm.params.friction) << "\n";
      break;
    case Algorithm::dula:
      os << "chi1 = " << format_double(config.algorithm.params.dula.chi1) << "\n";
      os << "chi2 = " << format_double(config.algorithm.params.dula.chi2) << "\n";
      os << "alpha_scale = " << format_double(config.algorithm.params.dula.alpha_scale)
         << "\n";
      os << "zeta_scale = " << format_double(config.algorithm.params.dula.zeta_scale)
         << "\n";
      os << "schedule_offset = " << format_double(config.algorithm.params.dula.offset)
         << "\n";
      break;
  }
  os << "[run]\n";
  os << "n_trials = " << config.run.n_trials << "\n";
  os << "n_iters = " << config.effective_iters() << "\n";
  os << "seed = " << config.run.seed << "\n";
  os << "thin = " << config.run.thin << "\n";
  return os.str();
}

int resolve_workers(int configured, long n_trials) {
  int workers = configured;
  if (workers <= 0) {
    if (const char* env = std::getenv("DMCMC_WORKERS")) workers = std::atoi(env);
  }
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (n_trials > 0 && workers > n_trials) workers = static_cast<int>(n_trials);
  return workers;
}

}  // namespace dmcmc
