#include "experiment.hpp"

#include "sinrperc/estimators.hpp"
#include "sinrperc/parallel.hpp"
#include "sinrperc/random.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace sinrperc::cli {

using json = nlohmann::ordered_json;

const std::vector<ExperimentInfo>& registry() {
  static const std::vector<ExperimentInfo> kinds = {
      {"graph-sample", "one realization of G_gamma: vertices with cluster labels and the edge list",
       {"model", "lambda"}},
      {"degree-sweep", "maximum degree against the bound 1 + 1/(tau gamma) over a gamma grid",
       {"model", "lambda", "gammas"}},
      {"crossing-sweep", "left-right crossing probability over a lambda x gamma grid",
       {"model", "lambdas", "gammas", "window"}},
      {"lambda-c", "critical intensity of the Poisson-Gilbert graph by crossing-probability bisection",
       {"radius"}},
      {"gamma-star", "critical interference factor gamma*(lambda) by bisection in gamma",
       {"model", "lambdas", "windows"}},
      {"theorem1", "search for a percolating (lambda, gamma > 0) witness with site diagnostics",
       {"model"}},
      {"theorem2", "degree <= 2 and non-percolation trends at gamma = 1/(2 tau)",
       {"model", "lambdas or lambda_factors"}},
      {"theorem3", "lambda_c(r_B) against the SINR threshold for constant powers",
       {"model"}},
      {"renorm-scan", "good, tame and nice site frequencies and edge preservation in nice blocks",
       {"model", "lambda", "r", "M"}},
  };
  return kinds;
}

void print_registry(std::ostream& os) {
  os << "sinrperc " << kToolVersion << "\n\nexperiments:\n";
  for (const auto& e : registry()) {
    os << "  " << std::left << std::setw(16) << e.kind << e.description << "\n";
    os << "  " << std::setw(16) << "" << "required:";
    for (const auto& r : e.required) os << " " << r;
    os << "\n";
  }
  os << "\nusage: sinrperc run <config.json> [--seed N] [--out DIR] [--replicas N] [--workers N]\n";
}

namespace {

class InvariantViolation : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads one JSON object, records resolved values and rejects unknown keys.
class Fields {
public:
  Fields(const json& in, std::string path) : in_(in), path_(std::move(path)) {
    if (!in_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return in_.contains(key); }

  double number(const std::string& key, std::optional<double> def, double min = -HUGE_VAL,
                bool strict = false) {
    seen_.insert(key);
    double v;
    if (!in_.contains(key)) {
      if (!def) throw ConfigError(at(key), "required field missing");
      v = *def;
    } else {
      if (!in_[key].is_number()) throw ConfigError(at(key), "expected a number");
      v = in_[key].get<double>();
    }
    check(key, v, min, strict);
    out[key] = v;
    return v;
  }

  std::optional<double> optional_number(const std::string& key, double min = -HUGE_VAL, bool strict = false) {
    if (!in_.contains(key)) {
      seen_.insert(key);
      return std::nullopt;
    }
    return number(key, std::nullopt, min, strict);
  }

  long integer(const std::string& key, std::optional<long> def, long min) {
    seen_.insert(key);
    long v;
    if (!in_.contains(key)) {
      if (!def) throw ConfigError(at(key), "required field missing");
      v = *def;
    } else {
      if (!in_[key].is_number_integer()) throw ConfigError(at(key), "expected an integer");
      v = in_[key].get<long>();
    }
    if (v < min) throw ConfigError(at(key), "must be >= " + std::to_string(min));
    out[key] = v;
    return v;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t def) {
    seen_.insert(key);
    std::uint64_t v = def;
    if (in_.contains(key)) {
      if (!in_[key].is_number_unsigned() && !(in_[key].is_number_integer() && in_[key].get<long>() >= 0))
        throw ConfigError(at(key), "expected a non-negative integer");
      v = in_[key].get<std::uint64_t>();
    }
    out[key] = v;
    return v;
  }

  std::string string(const std::string& key, std::optional<std::string> def) {
    seen_.insert(key);
    std::string v;
    if (!in_.contains(key)) {
      if (!def) throw ConfigError(at(key), "required field missing");
      v = *def;
    } else {
      if (!in_[key].is_string()) throw ConfigError(at(key), "expected a string");
      v = in_[key].get<std::string>();
    }
    out[key] = v;
    return v;
  }

  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> def,
                              double min = -HUGE_VAL, bool strict = false) {
    seen_.insert(key);
    std::vector<double> v;
    if (!in_.contains(key)) {
      if (!def) throw ConfigError(at(key), "required field missing");
      v = *def;
    } else {
      const json& a = in_[key];
      if (!a.is_array() || a.empty()) throw ConfigError(at(key), "expected a non-empty array of numbers");
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (!a[k].is_number()) throw ConfigError(at(key) + "[" + std::to_string(k) + "]", "expected a number");
        v.push_back(a[k].get<double>());
      }
    }
    for (std::size_t k = 0; k < v.size(); ++k) check(key + "[" + std::to_string(k) + "]", v[k], min, strict);
    out[key] = v;
    return v;
  }

  Fields child(const std::string& key, const json& empty) {
    seen_.insert(key);
    return Fields(in_.contains(key) ? in_[key] : empty, at(key));
  }

  void finish() const {
    for (const auto& [key, value] : in_.items())
      if (!seen_.count(key)) throw ConfigError(at(key), "unknown field");
  }

  json out = json::object();

private:
  void check(const std::string& key, double v, double min, bool strict) const {
    if (!std::isfinite(v)) throw ConfigError(at(key), "must be finite");
    if (strict ? !(v > min) : !(v >= min)) {
      std::ostringstream os;
      os << "must be " << (strict ? "> " : ">= ") << min;
      throw ConfigError(at(key), os.str());
    }
  }

  const json& in_;
  std::string path_;
  std::set<std::string> seen_;
};

struct Config {
  std::string kind;
  std::uint64_t seed = 1;
  long replicas = 200;
  int workers = 1;
  std::string output;
  ModelConfig model;

  double lambda = 0.0;
  std::optional<double> gamma;
  double window = 0.0;
  double radius = 0.0;
  std::vector<double> lambdas, gammas, windows, factors, lambda_c_windows;
  bool relative = false;
  std::optional<double> lambda_c;
  double lambda_start = 1.0;
  long max_doublings = 8;
  long n = 1;
  double r = 0.0;
  double r_o = 0.0;
  double M = 0.0;
  BlockVariant variant = BlockVariant::Six;

  json echo;
  std::uint64_t hash = 0;

  MonteCarlo mc() const { return {replicas, seed, workers}; }
};

template <typename F>
auto building(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

ModelConfig resolve_model(Fields& f, json& out) {
  static const json empty = json::object();
  Fields m = f.child("model", empty);
  ModelConfig model;
  model.dim = static_cast<int>(m.integer("dim", 2, 1));
  if (model.dim > 8) throw ConfigError(m.at("dim"), "must be <= 8");

  Fields me = m.child("measure", empty);
  const std::string mk = me.string("kind", "lebesgue");
  model.measure = building(me.at("kind"), [&] {
    if (mk == "lebesgue") return DirectingMeasureSpec::lebesgue();
    if (mk == "modulated")
      return DirectingMeasureSpec::modulated(me.number("lambda_in", std::nullopt, 0.0),
                                             me.number("lambda_out", std::nullopt, 0.0),
                                             me.number("nucleus_intensity", std::nullopt, 0.0, true),
                                             me.number("ball_radius", std::nullopt, 0.0, true));
    if (mk == "shot-noise") {
      Kernel k;
      const std::string shape = me.string("kernel_shape", "ball");
      if (shape == "ball") k.shape = Kernel::Shape::Ball;
      else if (shape == "bump") k.shape = Kernel::Shape::Bump;
      else throw ConfigError(me.at("kernel_shape"), "expected 'ball' or 'bump'");
      k.height = me.number("kernel_height", 1.0, 0.0, true);
      k.radius = me.number("kernel_radius", 1.0, 0.0, true);
      return DirectingMeasureSpec::shot_noise(me.number("nucleus_intensity", std::nullopt, 0.0, true), k);
    }
    if (mk == "voronoi-edge")
      return DirectingMeasureSpec::voronoi_edge(me.number("nucleus_intensity", 1.0, 0.0, true));
    throw ConfigError(me.at("kind"), "unknown measure '" + mk + "'; valid: lebesgue, modulated, shot-noise, voronoi-edge");
  });
  building(m.at("measure"), [&] {
    model.measure.validate(model.dim);
    return 0;
  });
  me.finish();

  Fields pw = m.child("powers", empty);
  const std::string pk = pw.string("kind", "dirac");
  model.mu = building(pw.at("kind"), [&] {
    if (pk == "dirac") return PowerDistribution::dirac(pw.number("p", 1.0, 0.0, true));
    if (pk == "exponential") return PowerDistribution::exponential(pw.number("mean", 1.0, 0.0, true));
    if (pk == "pareto")
      return PowerDistribution::pareto(pw.number("shape", std::nullopt, 0.0, true),
                                       pw.number("scale", 1.0, 0.0, true));
    if (pk == "uniform")
      return PowerDistribution::uniform(pw.number("lo", std::nullopt, 0.0), pw.number("hi", std::nullopt, 0.0, true));
    throw ConfigError(pw.at("kind"), "unknown power law '" + pk + "'; valid: dirac, exponential, pareto, uniform");
  });
  pw.finish();

  Fields pl = m.child("pathloss", empty);
  const std::string lk = pl.string("kind", "power-law");
  model.ell = building(pl.at("kind"), [&] {
    if (lk == "power-law")
      return PathLoss::power_law(pl.number("d_o", 0.5, 0.0, true), pl.number("alpha", 6.0, 0.0, true), model.dim);
    if (lk == "bounded-cone")
      return PathLoss::bounded_cone(pl.number("d_o", 0.5, 0.0), pl.number("rho", std::nullopt, 0.0, true),
                                    model.dim, pl.number("ell0", 1.0, 0.0, true));
    throw ConfigError(pl.at("kind"), "unknown path loss '" + lk + "'; valid: power-law, bounded-cone");
  });
  pl.finish();

  model.tau = m.number("tau", 1.0, 0.0, true);
  model.noise = m.number("noise", 1.0 / 64.0, 0.0);
  m.finish();

  m.out["measure"] = me.out;
  m.out["powers"] = pw.out;
  m.out["pathloss"] = pl.out;
  out["model"] = m.out;
  return model;
}

Config resolve(const json& root, const Overrides& ov) {
  Fields f(root, "");
  Config c;
  c.kind = f.string("experiment", std::nullopt);
  bool known = false;
  std::string valid;
  for (const auto& e : registry()) {
    known = known || e.kind == c.kind;
    valid += (valid.empty() ? "" : ", ") + e.kind;
  }
  if (!known) throw ConfigError("experiment", "unknown experiment kind '" + c.kind + "'; valid kinds: " + valid);

  f.unsigned_integer("seed", 1);
  if (ov.seed) f.out["seed"] = *ov.seed;
  c.seed = f.out["seed"].get<std::uint64_t>();
  f.integer("replicas", 200, 1);
  if (ov.replicas) {
    if (*ov.replicas < 1) throw ConfigError("replicas", "override must be >= 1");
    f.out["replicas"] = *ov.replicas;
  }
  c.replicas = f.out["replicas"].get<long>();
  c.workers = static_cast<int>(f.integer("workers", 1, 0));
  if (ov.workers) c.workers = *ov.workers;
  c.output = f.string("output", "results/" + c.kind);
  if (ov.out) c.output = *ov.out;

  const bool needs_model = c.kind != "lambda-c";
  if (needs_model || f.has("model")) c.model = resolve_model(f, f.out);

  const std::string& k = c.kind;
  if (k == "graph-sample") {
    c.lambda = f.number("lambda", std::nullopt, 0.0);
    c.gamma = f.number("gamma", 0.0, 0.0);
    c.window = f.number("window", 32.0, 0.0, true);
  } else if (k == "degree-sweep") {
    c.lambda = f.number("lambda", std::nullopt, 0.0);
    c.gammas = f.numbers("gammas", std::nullopt, 0.0, true);
    c.window = f.number("window", 32.0, 0.0, true);
  } else if (k == "crossing-sweep") {
    c.lambdas = f.numbers("lambdas", std::nullopt, 0.0);
    c.gammas = f.numbers("gammas", std::nullopt, 0.0);
    c.window = f.number("window", std::nullopt, 0.0, true);
  } else if (k == "lambda-c") {
    c.radius = f.number("radius", std::nullopt, 0.0, true);
    c.windows = f.numbers("windows", std::vector<double>{32, 64, 128}, 0.0, true);
    if (!f.has("model")) c.model.dim = static_cast<int>(f.integer("dim", 2, 2));
    if (c.model.dim < 2) throw ConfigError("model.dim", "lambda-c needs dimension >= 2");
  } else if (k == "gamma-star") {
    c.lambdas = f.numbers("lambdas", std::nullopt, 0.0, true);
    c.windows = f.numbers("windows", std::nullopt, 0.0, true);
  } else if (k == "theorem1") {
    c.lambda_start = f.number("lambda_start", 1.0, 0.0, true);
    c.window = f.number("window", 64.0, 0.0, true);
    c.max_doublings = f.integer("max_doublings", 8, 0);
  } else if (k == "theorem2") {
    if (f.has("lambdas") == f.has("lambda_factors"))
      throw ConfigError("lambdas", "give exactly one of 'lambdas' and 'lambda_factors'");
    if (f.has("lambdas")) {
      c.lambdas = f.numbers("lambdas", std::nullopt, 0.0, true);
    } else {
      c.relative = true;
      c.factors = f.numbers("lambda_factors", std::nullopt, 0.0, true);
      c.lambda_c = f.optional_number("lambda_c", 0.0, true);
      c.lambda_c_windows = f.numbers("lambda_c_windows", std::vector<double>{32, 64, 128}, 0.0, true);
    }
    c.windows = f.numbers("windows", std::vector<double>{25, 50, 100}, 0.0, true);
    c.gamma = f.optional_number("gamma", 1.0 / (2.0 * c.model.tau));
  } else if (k == "theorem3") {
    c.factors = f.numbers("factors", std::vector<double>{0.8, 0.95, 1.05, 1.2, 1.5}, 0.0, true);
    c.windows = f.numbers("windows", std::vector<double>{32, 64, 128}, 0.0, true);
    c.lambda_c = f.optional_number("lambda_c", 0.0, true);
    if (c.model.measure.kind != DirectingMeasureSpec::Kind::Lebesgue)
      throw ConfigError("model.measure.kind", "theorem3 requires 'lebesgue'");
    if (c.model.mu.kind() != PowerDistribution::Kind::Dirac)
      throw ConfigError("model.powers.kind", "theorem3 requires 'dirac'");
    if (c.model.dim < 2) throw ConfigError("model.dim", "theorem3 needs dimension >= 2");
  } else if (k == "renorm-scan") {
    c.lambda = f.number("lambda", std::nullopt, 0.0);
    c.gamma = f.optional_number("gamma", 0.0);
    c.window = f.number("window", 64.0, 0.0, true);
    c.n = f.integer("n", 1, 1);
    c.r = f.number("r", std::nullopt, c.model.ell.plateau(), true);
    c.r_o = f.number("r_o", c.r * std::pow(1.0 / 0.8, 1.0 / c.model.dim), c.r, true);
    c.M = f.number("M", std::nullopt, 0.0, true);
    const std::string v = f.string("variant", "six");
    if (v == "six") c.variant = BlockVariant::Six;
    else if (v == "seven") c.variant = BlockVariant::Seven;
    else throw ConfigError("variant", "expected 'six' or 'seven'");
    if (c.r_o > c.model.ell.support_sup()) throw ConfigError("r_o", "beyond the support of the path loss");
  }
  f.finish();

  c.echo = f.out;
  c.echo.erase("workers");
  c.echo.erase("output");
  c.hash = fnv1a(c.echo.dump());
  return c;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

class Output {
public:
  Output(const Config& c) : dir_(c.output), hash_(hex(c.hash)) {
    std::filesystem::create_directories(dir_);
    results_.open(dir_ / "results.jsonl", std::ios::trunc);
    if (!results_) throw std::runtime_error("cannot write " + (dir_ / "results.jsonl").string());
    json header;
    header["record"] = "header";
    header["tool"] = "sinrperc";
    header["version"] = kToolVersion;
    header["config_hash"] = hash_;
    header["config"] = c.echo;
    line(header);
  }

  void record(json r) {
    json full;
    full["record"] = "point";
    for (auto& [k, v] : r.items()) full[k] = v;
    line(full);
  }

  void summary(json r) {
    r["record"] = "summary";
    line(r);
  }

  void fail(const std::string& reason) {
    json r;
    r["record"] = "failure";
    r["reason"] = reason;
    line(r);
  }

  /// Starts table `name`.tsv with the given columns.
  void table(const std::string& name, const std::vector<std::string>& columns) {
    auto& t = tables_[name];
    t.open(dir_ / (name + ".tsv"), std::ios::trunc);
    if (!t) throw std::runtime_error("cannot write " + name + ".tsv");
    t << "# sinrperc " << kToolVersion << " config_hash=" << hash_ << "\n";
    for (std::size_t k = 0; k < columns.size(); ++k) t << (k ? "\t" : "") << columns[k];
    t << "\n";
    t.flush();
  }

  void row(const std::string& name, const std::vector<std::string>& cells) {
    auto& t = tables_.at(name);
    for (std::size_t k = 0; k < cells.size(); ++k) t << (k ? "\t" : "") << cells[k];
    t << "\n";
    t.flush();
  }

  const std::filesystem::path& dir() const { return dir_; }

private:
  void line(const json& j) {
    results_ << j.dump() << "\n";
    results_.flush();
  }

  std::filesystem::path dir_;
  std::string hash_;
  std::ofstream results_;
  std::map<std::string, std::ofstream> tables_;
};

json estimate_fields(const Estimate& e) {
  return {{"estimate", e.value}, {"ci_lo", e.ci_lo}, {"ci_hi", e.ci_hi}, {"se", e.se}, {"replicas", e.replicas}};
}

json with(json base, const json& extra) {
  for (auto& [k, v] : extra.items()) base[k] = v;
  return base;
}

void graph_sample(const Config& c, Output& out, std::ostream&) {
  const Margin margin = sinr_margin(c.model, c.lambda, c.window);
  const auto config = simulate_replica(c.model, c.lambda, c.window, margin.value, replica_seed(c.seed, 0));
  const auto g = build_sinr_graph(config, c.model.sinr(*c.gamma), c.model.ell, {margin.value});
  const auto sizes = cluster_sizes(g);
  const auto deg = degree_stats(g);
  const bool cross = crossing_exists(g, 0, c.model.connection_scale());
  std::vector<char> in_cluster(g.size(), 0);
  Index clusters = 0;
  for (Index i = 0; i < g.size(); ++i)
    if (g.observed[i] && !in_cluster[g.labels[i]]) in_cluster[g.labels[i]] = 1, ++clusters;
  out.record({{"lambda", c.lambda},
              {"gamma", *c.gamma},
              {"window", c.window},
              {"margin", margin.value},
              {"vertices", g.observed_count()},
              {"edges", static_cast<Index>(g.edges.size())},
              {"clusters", clusters},
              {"largest_cluster", sizes.empty() ? 0 : sizes.front()},
              {"max_degree", deg.max_degree},
              {"crossing", cross},
              {"estimate", cross ? 1.0 : 0.0},
              {"ci_lo", cross ? 1.0 : 0.0},
              {"ci_hi", cross ? 1.0 : 0.0},
              {"replicas", 1}});
  std::vector<std::string> cols = {"vertex"};
  for (int k = 0; k < config.dim(); ++k) cols.push_back("x" + std::to_string(k));
  cols.insert(cols.end(), {"power", "observed", "cluster"});
  out.table("plot", cols);
  for (Index i = 0; i < g.size(); ++i) {
    std::vector<std::string> cells = {std::to_string(i)};
    for (int k = 0; k < config.dim(); ++k) cells.push_back(num(config.points(k, i)));
    cells.push_back(num(config.powers[i]));
    cells.push_back(g.observed[i] ? "1" : "0");
    cells.push_back(g.observed[i] ? std::to_string(g.labels[i]) : "-1");
    out.row("plot", cells);
  }
  out.table("edges", {"u", "v"});
  for (const auto& e : g.edges) out.row("edges", {std::to_string(e.u), std::to_string(e.v)});
  if (*c.gamma > 0.0 && static_cast<double>(deg.max_degree) >= 1.0 + 1.0 / (c.model.tau * *c.gamma))
    throw InvariantViolation("degree bound breached: max degree " + std::to_string(deg.max_degree));
}

void degree_sweep(const Config& c, Output& out, std::ostream&) {
  const Margin margin = sinr_margin(c.model, c.lambda, c.window);
  const std::size_t G = c.gammas.size();
  struct One {
    std::vector<Index> max_degree;
    std::vector<double> mean_degree;
  };
  const auto runs = parallel_map(c.replicas, c.workers, [&](Index k) {
    const auto config = simulate_replica(c.model, c.lambda, c.window, margin.value, replica_seed(c.seed, k));
    const auto links = sinr_links(config, c.model.tau, c.model.noise, c.model.ell, {margin.value});
    One o;
    for (double gamma : c.gammas) {
      const auto g = graph_from_links(config, links, c.model.tau, c.model.noise, gamma);
      const auto s = degree_stats(g);
      o.max_degree.push_back(s.max_degree);
      const Index obs = g.observed_count();
      o.mean_degree.push_back(obs ? 2.0 * static_cast<double>(g.edges.size()) / obs : 0.0);
    }
    return o;
  });
  out.table("plot", {"gamma", "tau_gamma", "bound", "max_degree", "mean_degree", "within", "ci_lo", "ci_hi", "replicas"});
  Index violations = 0;
  for (std::size_t a = 0; a < G; ++a) {
    const double gamma = c.gammas[a];
    const double bound = 1.0 + 1.0 / (c.model.tau * gamma);
    Index within = 0, max_degree = 0;
    double mean = 0.0;
    for (const auto& o : runs) {
      within += static_cast<double>(o.max_degree[a]) < bound;
      max_degree = std::max(max_degree, o.max_degree[a]);
      mean += o.mean_degree[a] / c.replicas;
    }
    violations += c.replicas - within;
    const Estimate e = wilson(within, c.replicas);
    out.record(with({{"lambda", c.lambda}, {"gamma", gamma}, {"tau_gamma", c.model.tau * gamma}, {"bound", bound},
                     {"max_degree", max_degree}, {"mean_degree", mean}, {"window", c.window}},
                    estimate_fields(e)));
    out.row("plot", {num(gamma), num(c.model.tau * gamma), num(bound), std::to_string(max_degree), num(mean),
                     num(e.value), num(e.ci_lo), num(e.ci_hi), std::to_string(c.replicas)});
  }
  if (violations > 0)
    throw InvariantViolation("degree bound breached on " + std::to_string(violations) + " realizations");
}

void crossing(const Config& c, Output& out, std::ostream&) {
  const auto sweep = crossing_sweep(c.model, c.lambdas, c.gammas, c.window, c.mc());
  out.table("plot", {"lambda", "gamma", "window", "crossing", "ci_lo", "ci_hi", "se", "replicas"});
  for (const auto& p : sweep.points) {
    out.record(with({{"lambda", p.lambda}, {"gamma", p.gamma}, {"window", c.window}}, estimate_fields(p.crossing)));
    out.row("plot", {num(p.lambda), num(p.gamma), num(c.window), num(p.crossing.value), num(p.crossing.ci_lo),
                     num(p.crossing.ci_hi), num(p.crossing.se), std::to_string(p.crossing.replicas)});
  }
}

void write_lambda_c(const LambdaCEstimate& lc, Output& out, const std::string& table) {
  out.table(table, {"r", "window", "lambda_c", "ci_lo", "ci_hi", "replicas", "iterations"});
  for (const auto& w : lc.windows) {
    out.record({{"quantity", "lambda_c"}, {"r", lc.r}, {"window", w.window}, {"estimate", w.value},
                {"ci_lo", w.ci_lo}, {"ci_hi", w.ci_hi}, {"replicas", w.replicas}, {"iterations", w.iterations}});
    out.row(table, {num(lc.r), num(w.window), num(w.value), num(w.ci_lo), num(w.ci_hi), std::to_string(w.replicas),
                    std::to_string(w.iterations)});
  }
  const auto& top = lc.windows.back();
  out.summary({{"quantity", "lambda_c"}, {"r", lc.r}, {"window", top.window}, {"estimate", lc.value},
               {"ci_lo", top.ci_lo}, {"ci_hi", top.ci_hi}, {"spread", lc.spread}, {"replicas", top.replicas}});
}

void lambda_c(const Config& c, Output& out, std::ostream&) {
  write_lambda_c(estimate_lambda_c_gilbert(c.model.dim, c.radius, c.windows, c.mc()), out, "plot");
}

void gamma_star(const Config& c, Output& out, std::ostream&) {
  out.table("plot", {"lambda", "window", "gamma_star", "ci_lo", "ci_hi", "crossing_at_zero", "replicas", "bound"});
  const double bound = 1.0 / (2.0 * c.model.tau);
  for (double lambda : c.lambdas) {
    const auto gs = estimate_gamma_star(c.model, lambda, c.windows, c.mc());
    for (const auto& w : gs.windows) {
      out.record({{"quantity", "gamma_star"}, {"lambda", lambda}, {"window", w.window}, {"estimate", w.value},
                  {"ci_lo", w.ci_lo}, {"ci_hi", w.ci_hi}, {"crossing_at_zero", w.at_zero},
                  {"replicas", w.replicas}, {"iterations", w.iterations}});
      out.row("plot", {num(lambda), num(w.window), num(w.value), num(w.ci_lo), num(w.ci_hi), num(w.at_zero),
                       std::to_string(w.replicas), num(bound)});
    }
    json profile = json::array();
    for (const auto& [g, p] : gs.profile) profile.push_back({g, p});
    const auto& top = gs.windows.back();
    out.summary({{"quantity", "gamma_star"}, {"lambda", lambda}, {"estimate", gs.value}, {"ci_lo", top.ci_lo},
                 {"ci_hi", top.ci_hi}, {"spread", gs.spread}, {"subcritical", gs.subcritical},
                 {"unbounded", gs.unbounded}, {"replicas", top.replicas}, {"profile", profile}});
  }
}

void theorem1(const Config& c, Output& out, std::ostream&) {
  const auto rep = theorem1_experiment(c.model, c.lambda_start, c.window, c.mc(), static_cast<int>(c.max_doublings));
  out.table("plot", {"lambda", "gamma", "crossing", "ci_lo", "ci_hi", "replicas"});
  for (const auto& [lambda, e] : rep.lambda_search) {
    out.record(with({{"stage", "lambda-search"}, {"lambda", lambda}, {"gamma", 0.0}, {"window", rep.window}},
                    estimate_fields(e)));
    out.row("plot", {num(lambda), "0", num(e.value), num(e.ci_lo), num(e.ci_hi), std::to_string(e.replicas)});
  }
  if (rep.at_gamma.replicas > 0) {
    out.record(with({{"stage", "witness"}, {"lambda", rep.lambda}, {"gamma", rep.gamma}, {"window", rep.window}},
                    estimate_fields(rep.at_gamma)));
    out.row("plot", {num(rep.lambda), num(rep.gamma), num(rep.at_gamma.value), num(rep.at_gamma.ci_lo),
                     num(rep.at_gamma.ci_hi), std::to_string(rep.at_gamma.replicas)});
  }
  json summary = {{"condition", rep.condition}, {"assumption_flags", rep.assumption_flags},
                  {"lambda", rep.lambda}, {"gamma", rep.gamma}, {"witness", rep.witness},
                  {"margin", rep.margin}, {"margin_capped", rep.margin_capped}};
  summary = with(summary, estimate_fields(rep.at_gamma.replicas ? rep.at_gamma : rep.lambda_search.back().second));
  if (rep.sites) {
    const auto& s = *rep.sites;
    summary["sites"] = {{"count", s.sites}, {"good", s.good}, {"tame", s.tame}, {"nice", s.nice},
                        {"nice_crossing", s.crossing}, {"r", s.r}, {"r_o", s.r_o}, {"M", s.M}};
  }
  out.summary(summary);
}

void theorem2(const Config& c, Output& out, std::ostream& log) {
  std::vector<double> lambdas = c.lambdas;
  if (c.relative) {
    const double r_B = c.model.connection_scale();
    double lc;
    if (c.lambda_c) {
      lc = *c.lambda_c;
    } else {
      const auto est = estimate_lambda_c_gilbert(c.model.dim, r_B, c.lambda_c_windows, c.mc());
      write_lambda_c(est, out, "lambda_c");
      lc = est.value;
    }
    log << "lambda_c(r_B = " << r_B << ") = " << lc << "\n";
    for (double f : c.factors) lambdas.push_back(f * lc);
  }
  const auto rep = theorem2_experiment(c.model, lambdas, c.windows, c.mc(), c.gamma);
  out.table("plot", {"lambda", "window", "crossing", "ci_lo", "ci_hi", "se", "replicas", "max_degree",
                     "mean_largest_cluster", "cycles", "paths"});
  for (const auto& r : rep.rows) {
    out.record(with({{"lambda", r.lambda}, {"gamma", rep.gamma}, {"window", r.window}, {"max_degree", r.max_degree},
                     {"mean_largest_cluster", r.mean_largest_cluster}, {"cycles", r.cycles}, {"paths", r.paths}},
                    estimate_fields(r.crossing)));
    out.row("plot", {num(r.lambda), num(r.window), num(r.crossing.value), num(r.crossing.ci_lo),
                     num(r.crossing.ci_hi), num(r.crossing.se), std::to_string(r.crossing.replicas),
                     std::to_string(r.max_degree), num(r.mean_largest_cluster), std::to_string(r.cycles),
                     std::to_string(r.paths)});
  }
  const std::size_t W = c.windows.size();
  for (std::size_t a = 0; a < lambdas.size(); ++a) {
    const auto& big = rep.rows[a * W + W - 1];
    out.summary(with({{"lambda", lambdas[a]}, {"gamma", rep.gamma}, {"window", big.window},
                      {"nonincreasing", static_cast<bool>(rep.nonincreasing[a])},
                      {"sublinear", static_cast<bool>(rep.sublinear[a])}},
                     estimate_fields(big.crossing)));
  }
  if (rep.degree_violations > 0)
    throw InvariantViolation("degree above 2 on " + std::to_string(rep.degree_violations) + " realizations");
}

void theorem3(const Config& c, Output& out, std::ostream&) {
  std::optional<LambdaCEstimate> given;
  if (c.lambda_c) {
    LambdaCEstimate lc;
    lc.r = c.model.connection_scale();
    lc.value = *c.lambda_c;
    lc.windows.push_back({*std::max_element(c.windows.begin(), c.windows.end()), lc.value, lc.value, lc.value, 0, 0, 0.0});
    given = lc;
  }
  const auto rep = theorem3_experiment(c.model, c.factors, c.windows, c.mc(), given);
  if (!c.lambda_c) write_lambda_c(rep.lambda_c, out, "lambda_c");
  out.table("plot", {"factor", "lambda", "crossing_at_zero", "ci_lo", "ci_hi", "gamma_star", "gamma",
                     "crossing_at_gamma", "gamma_ci_lo", "gamma_ci_hi", "witness"});
  for (const auto& r : rep.rows) {
    json rec = with({{"factor", r.factor}, {"lambda", r.lambda}, {"gamma", 0.0}}, estimate_fields(r.at_zero));
    out.record(rec);
    if (r.at_gamma.replicas > 0)
      out.record(with({{"factor", r.factor}, {"lambda", r.lambda}, {"gamma", r.gamma}, {"gamma_star", r.gamma_star},
                       {"witness", r.witness}},
                      estimate_fields(r.at_gamma)));
    out.row("plot", {num(r.factor), num(r.lambda), num(r.at_zero.value), num(r.at_zero.ci_lo), num(r.at_zero.ci_hi),
                     num(r.gamma_star), num(r.gamma), num(r.at_gamma.value), num(r.at_gamma.ci_lo),
                     num(r.at_gamma.ci_hi), r.witness ? "1" : "0"});
  }
  const auto& top = rep.lambda_c.windows.back();
  out.summary({{"quantity", "lambda_sinr_bracket"}, {"r_B", rep.r_B}, {"lambda_c", rep.lambda_c.value},
               {"estimate", rep.lambda_c.value}, {"ci_lo", top.ci_lo}, {"ci_hi", top.ci_hi},
               {"replicas", top.replicas}, {"spread", rep.lambda_c.spread},
               {"bracket_lo", jnum(rep.bracket_lo)}, {"bracket_hi", jnum(rep.bracket_hi)},
               {"stable", rep.stable}, {"bracket_within", rep.bracket_within}});
}

void renorm_scan(const Config& c, Output& out, std::ostream&) {
  RenormParams p;
  p.n = static_cast<int>(c.n);
  p.r = c.r;
  p.r_o = c.r_o;
  p.M = c.M;
  p.lambda = c.lambda;
  building("r", [&] {
    p.validate(c.model.ell);
    return 0;
  });
  const SinrParams sinr = c.model.sinr(0.0);
  const double gp = gamma_prime(p.r, p.r_o, p.M, sinr, c.model.ell);
  const double gamma = c.gamma.value_or(gp / 2.0);
  const double s = p.block_side(c.variant);
  const double margin =
      std::max(sinr_margin(c.model, c.lambda, c.window).value, (c.variant == BlockVariant::Six ? 3.0 : 3.5) * s);
  const auto scans = parallel_map(c.replicas, c.workers, [&](Index k) {
    const auto config = simulate_replica(c.model, c.lambda, c.window, margin, replica_seed(c.seed, k));
    return nice_site_scan(p, config, gamma, sinr, c.model.ell, c.model.measure, c.variant);
  });
  out.table("plot", {"replica", "sites", "good", "tame", "nice", "crossing", "edges_checked", "edges_violated"});
  Index crossings = 0, checked = 0, violated = 0;
  double guaranteed = 0.0;
  for (std::size_t k = 0; k < scans.size(); ++k) {
    const auto& sc = scans[k];
    const double n = std::max<double>(1.0, static_cast<double>(sc.sites.size()));
    Index good = 0, tame = 0;
    for (const auto& f : sc.sites) good += f.good, tame += f.tame;
    crossings += sc.crossing;
    checked += sc.edges_checked;
    violated += sc.edges_violated;
    guaranteed = sc.gamma_guaranteed;
    out.row("plot", {std::to_string(k), std::to_string(sc.sites.size()), num(good / n), num(tame / n),
                     num(sc.nice_count() / n), sc.crossing ? "1" : "0", std::to_string(sc.edges_checked),
                     std::to_string(sc.edges_violated)});
  }
  const Estimate e = wilson(crossings, c.replicas);
  out.record(with({{"quantity", "nice_crossing"}, {"lambda", c.lambda}, {"gamma", gamma}, {"n", c.n}, {"r", c.r},
                   {"r_o", c.r_o}, {"M", c.M}, {"window", c.window}},
                  estimate_fields(e)));
  out.summary(with({{"gamma", gamma}, {"gamma_prime", gp}, {"gamma_guaranteed", guaranteed},
                    {"edges_checked", checked}, {"edges_violated", violated}},
                   estimate_fields(e)));
  if (violated > 0 && gamma <= guaranteed)
    throw InvariantViolation("edge preservation failed for " + std::to_string(violated) + " edges in nice blocks");
}

void dispatch(const Config& c, Output& out, std::ostream& log) {
  const std::string& k = c.kind;
  if (k == "graph-sample") graph_sample(c, out, log);
  else if (k == "degree-sweep") degree_sweep(c, out, log);
  else if (k == "crossing-sweep") crossing(c, out, log);
  else if (k == "lambda-c") lambda_c(c, out, log);
  else if (k == "gamma-star") gamma_star(c, out, log);
  else if (k == "theorem1") theorem1(c, out, log);
  else if (k == "theorem2") theorem2(c, out, log);
  else if (k == "theorem3") theorem3(c, out, log);
  else if (k == "renorm-scan") renorm_scan(c, out, log);
}

}  // namespace

int run(const std::filesystem::path& path, const Overrides& overrides, std::ostream& log) {
  std::ifstream in(path);
  if (!in) {
    log << "error: cannot read config '" << path.string() << "'\n";
    return kBadConfig;
  }
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    log << "error: config is not valid JSON: " << e.what() << "\n";
    return kBadConfig;
  }
  Config c;
  try {
    c = resolve(root, overrides);
    if (c.kind != "lambda-c") c.model = prepare_model(c.model, derive_seed(c.seed, "calibration", 0));
  } catch (const ConfigError& e) {
    log << "error: schema violation at " << e.what() << "\n";
    return kBadConfig;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  std::string reason;
  std::unique_ptr<Output> out;
  try {
    out = std::make_unique<Output>(c);
    dispatch(c, *out, log);
  } catch (const InvariantViolation& e) {
    code = kInvariant;
    reason = std::string("invariant violation: ") + e.what();
  } catch (const ConfigError& e) {
    code = kBadConfig;
    reason = std::string("schema violation at ") + e.what();
  } catch (const std::exception& e) {
    code = 1;
    reason = std::string("run failed: ") + e.what();
  }
  if (code != kOk) {
    log << "error: " << reason << "\n";
    if (out) out->fail(reason);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::filesystem::create_directories(c.output);
  std::ofstream meta(std::filesystem::path(c.output) / "run_meta.json", std::ios::trunc);
  meta << json{{"tool", "sinrperc"}, {"version", kToolVersion}, {"config_hash", hex(c.hash)},
               {"config_path", path.string()}, {"seed", c.seed}, {"workers", resolve_workers(c.workers)},
               {"wall_clock_seconds", seconds}, {"exit_code", code}}
              .dump(2)
       << "\n";
  if (code == kOk) log << "wrote " << c.output << "/results.jsonl\n";
  return code;
}

}  // namespace sinrperc::cli
