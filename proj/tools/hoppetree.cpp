// hoppetree: simulate Hoppe trees, evaluate the exact laws, build the
// internal-path-length limit population, and run the verification suite.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hoppetree/core.hpp"
#include "hoppetree/distribution.hpp"
#include "hoppetree/formulas.hpp"
#include "hoppetree/limitdist.hpp"
#include "hoppetree/montecarlo.hpp"
#include "hoppetree/verify.hpp"

namespace {

using nlohmann::json;
using namespace hoppetree;

constexpr const char* kSchema = "hoppetree/1";

// Locale-independent shortest round-trip formatting.
std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_int(std::int64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Writes to --out when given, stdout otherwise.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) {
        throw std::runtime_error("cannot open output file: " + path);
      }
    }
  }

  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool to_stdout() const { return !file_.is_open(); }

 private:
  std::ofstream file_;
};

json moments_json(const mc::StatMoments& m) {
  return {{"count", m.count}, {"mean", m.mean},     {"variance", m.variance},
          {"min", m.min},     {"max", m.max}};
}

// --------------------------------------------------------------------------
// simulate
// --------------------------------------------------------------------------

struct SimulateArgs {
  double theta = 1.0;
  std::int64_t nodes = 1;
  std::int64_t replicates = 1;
  std::uint64_t seed = 0;
  std::string stat = "depth";
  std::string format = "csv";
  std::string out;
  int workers = 0;
  bool extremal = false;
};

int cmd_simulate(const SimulateArgs& args) {
  Timer timer;
  const Statistic stat = statistic_from_name(args.stat);

  mc::ExperimentConfig cfg;
  cfg.theta = args.theta;
  cfg.n = args.nodes;
  cfg.replicates = args.replicates;
  cfg.seed = args.seed;
  cfg.statistics = {stat};
  cfg.workers = args.workers;
  cfg.theta_zero_extremal = args.extremal;

  const mc::SampleSummary summary = mc::run_experiment(cfg);
  const auto& values = summary.samples.at(stat);
  const mc::StatMoments& m = summary.moments.at(stat);

  json summary_doc = {{"schema", kSchema},
                      {"command", "simulate"},
                      {"theta", args.theta},
                      {"nodes", args.nodes},
                      {"replicates", args.replicates},
                      {"seed", args.seed},
                      {"statistic", args.stat},
                      {"summary", moments_json(m)}};

  OutputTarget target(args.out);
  if (args.format == "json") {
    json doc = summary_doc;
    doc["values"] = values;
    target.stream() << doc.dump() << "\n";
    if (!target.to_stdout()) std::cout << summary_doc.dump() << "\n";
  } else if (args.format == "csv") {
    std::ostream& os = target.stream();
    os << "replicate," << args.stat << "\n";
    for (std::size_t r = 0; r < values.size(); ++r) {
      os << fmt_int(static_cast<std::int64_t>(r)) << "," << fmt_int(values[r]) << "\n";
    }
    // Keep stdout parseable when the records themselves go there.
    (target.to_stdout() ? std::cerr : std::cout) << summary_doc.dump() << "\n";
  } else {
    throw std::invalid_argument("simulate: format must be csv or json");
  }

  std::cerr << "simulate: " << fmt_double(timer.seconds()) << " s\n";
  return 0;
}

// --------------------------------------------------------------------------
// exact
// --------------------------------------------------------------------------

struct ExactArgs {
  double theta = 1.0;
  std::int64_t nodes = 1;
  std::string stat = "depth";
  std::string format = "csv";
  std::string out;
  bool pmf = false;
  bool tv = false;
  std::optional<double> eps;
  std::optional<double> tail_t;
  std::optional<std::int64_t> index;
};

void emit_pmf(OutputTarget& target, const std::string& format,
              const DiscreteDistribution& dist, json header) {
  if (format == "json") {
    json rows = json::array();
    for (std::int64_t k = dist.offset(); k <= dist.max_support(); ++k) {
      rows.push_back({{"value", k}, {"probability", dist.prob(k)}});
    }
    header["pmf"] = std::move(rows);
    target.stream() << header.dump() << "\n";
  } else {
    std::ostream& os = target.stream();
    os << "value,probability\n";
    for (std::int64_t k = dist.offset(); k <= dist.max_support(); ++k) {
      os << fmt_int(k) << "," << fmt_double(dist.prob(k)) << "\n";
    }
  }
}

void emit_fields(OutputTarget& target, const std::string& format, json header,
                 const std::vector<std::pair<std::string, double>>& fields) {
  if (format == "json") {
    for (const auto& [key, value] : fields) header[key] = value;
    target.stream() << header.dump() << "\n";
  } else {
    std::ostream& os = target.stream();
    for (std::size_t i = 0; i < fields.size(); ++i) {
      os << fields[i].first << (i + 1 < fields.size() ? "," : "\n");
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      os << fmt_double(fields[i].second) << (i + 1 < fields.size() ? "," : "\n");
    }
  }
}

int cmd_exact(const ExactArgs& args) {
  if (args.format != "csv" && args.format != "json") {
    throw std::invalid_argument("exact: format must be csv or json");
  }
  const Statistic stat = args.stat == "ancestor" || args.stat == "height"
                             ? Statistic::depth_last  // placeholder, unused
                             : statistic_from_name(args.stat);
  OutputTarget target(args.out);

  json header = {{"schema", kSchema}, {"command", "exact"},      {"theta", args.theta},
                 {"nodes", args.nodes}, {"statistic", args.stat}};

  if (args.stat == "depth") {
    if (args.pmf) {
      emit_pmf(target, args.format, formulas::depth_pmf_exact(args.theta, args.nodes),
               std::move(header));
    } else if (args.tv) {
      emit_fields(target, args.format, std::move(header),
                  {{"poisson_tv", formulas::depth_poisson_tv(args.theta, args.nodes)}});
    } else {
      const MomentReport m = formulas::depth_moments(args.theta, args.nodes);
      emit_fields(target, args.format, std::move(header),
                  {{"mean", m.mean}, {"variance", m.variance}});
    }
  } else if (args.stat == "leaves") {
    std::vector<std::pair<std::string, double>> fields = {
        {"mean", formulas::leaf_mean_exact(args.theta, args.nodes)},
        {"variance", formulas::leaf_var_exact(args.theta, args.nodes)}};
    if (args.tail_t) {
      fields.emplace_back("tail_bound",
                          formulas::leaf_tail_bound(args.theta, args.nodes, *args.tail_t));
    }
    emit_fields(target, args.format, std::move(header), fields);
  } else if (args.stat == "ipl") {
    emit_fields(target, args.format, std::move(header),
                {{"mean", formulas::ipl_mean_exact(args.theta, args.nodes)},
                 {"variance_coefficient", formulas::ipl_var_coefficient(args.theta)}});
  } else if (args.stat == "subtree") {
    if (args.pmf) {
      emit_pmf(target, args.format, formulas::subtree_pmf_exact(args.theta, args.nodes),
               std::move(header));
    } else if (args.eps) {
      emit_fields(target, args.format, std::move(header),
                  {{"small_subtree_bound",
                    formulas::small_subtree_bound(args.theta, *args.eps)}});
    } else {
      const DiscreteDistribution d = formulas::subtree_pmf_exact(args.theta, args.nodes);
      emit_fields(target, args.format, std::move(header),
                  {{"mean", d.mean()}, {"variance", d.variance()}});
    }
  } else if (args.stat == "height") {
    emit_fields(target, args.format, std::move(header),
                {{"band_center", formulas::height_band(args.nodes)}});
  } else if (args.stat == "ancestor") {
    if (!args.index) {
      throw std::invalid_argument("exact: --index is required for --stat ancestor");
    }
    const formulas::AncestorStats a =
        formulas::ancestor_stats(args.theta, *args.index, args.nodes);
    emit_fields(target, args.format, std::move(header),
                {{"probability", a.probability},
                 {"expected_descendants", a.expected_descendants}});
  } else {
    throw std::invalid_argument("exact: unknown statistic " + args.stat);
  }
  (void)stat;
  return 0;
}

// --------------------------------------------------------------------------
// verify
// --------------------------------------------------------------------------

struct VerifyArgs {
  std::string tier = "all";
  std::uint64_t seed = 1;
  int workers = 0;
  bool inject_fault = false;
};

int cmd_verify(const VerifyArgs& args) {
  Timer timer;
  verify::VerifyOptions options;
  options.tier = verify::tier_from_name(args.tier);
  options.seed = args.seed;
  options.workers = args.workers;
  options.inject_fault = args.inject_fault;

  const auto checks = verify::run_verification(options);
  for (const auto& check : checks) {
    verify::print_check(std::cout, check);
  }
  const bool ok = verify::all_passed(checks);
  std::cout << (ok ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << " ("
            << checks.size() << " checks, tier " << args.tier << ", seed " << args.seed
            << ")\n";
  std::cerr << "verify: " << fmt_double(timer.seconds()) << " s\n";
  return ok ? 0 : 1;
}

// --------------------------------------------------------------------------
// limit
// --------------------------------------------------------------------------

struct LimitArgs {
  double theta = 1.0;
  std::int64_t population = 100000;
  int iterations = 40;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
  int workers = 0;
};

json population_json(const limitdist::Population& pop) {
  const auto [mean_target, var_target] = limitdist::limit_moments(pop.theta);
  return {{"theta", pop.theta},
          {"generations", pop.generations},
          {"converged", pop.converged},
          {"achieved", {{"mean", pop.mean}, {"variance", pop.variance}}},
          {"target", {{"mean", mean_target}, {"variance", var_target}}}};
}

int cmd_limit(const LimitArgs& args) {
  Timer timer;
  if (args.population < 0) {
    throw std::invalid_argument("limit: population must be positive");
  }
  const limitdist::PicardResult result =
      limitdist::picard(args.theta, static_cast<std::size_t>(args.population),
                        args.iterations, args.seed, nullptr, args.workers);

  json header = {{"schema", kSchema},
                 {"command", "limit"},
                 {"theta", args.theta},
                 {"population", args.population},
                 {"iterations", args.iterations},
                 {"seed", args.seed},
                 {"stage", population_json(result.population)}};
  if (result.stage1) {
    header["stage1"] = population_json(*result.stage1);
  }
  if (!result.population.converged && args.iterations > 0) {
    std::cerr << "limit: drift tolerance not reached within " << args.iterations
              << " iterations\n";
  }

  OutputTarget target(args.out);
  if (args.format == "json") {
    json doc = header;
    doc["values"] = result.population.values;
    target.stream() << doc.dump() << "\n";
  } else if (args.format == "csv") {
    std::ostream& os = target.stream();
    os << header.dump() << "\n";
    for (const double v : result.population.values) {
      os << fmt_double(v) << "\n";
    }
  } else {
    throw std::invalid_argument("limit: format must be csv or json");
  }
  if (!target.to_stdout()) {
    std::cout << header.dump() << "\n";
  }
  std::cerr << "limit: " << fmt_double(timer.seconds()) << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hoppe tree simulation, exact laws, and verification"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run replicated tree simulations");
  simulate->add_option("--theta", sim.theta, "Root weight theta (> 0)")->required();
  simulate->add_option("--nodes", sim.nodes, "Tree size n")->required();
  simulate->add_option("--replicates", sim.replicates, "Number of replicates")->required();
  simulate->add_option("--seed", sim.seed, "Base seed (per-replicate streams derive from it)")
      ->required();
  simulate->add_option("--stat", sim.stat, "depth|height|ipl|leaves|subtree")
      ->default_val("depth");
  simulate->add_option("--format", sim.format, "csv|json")->default_val("csv");
  simulate->add_option("--out", sim.out, "Output path (stdout when omitted)");
  simulate->add_option("--workers", sim.workers, "Worker threads (0 = auto)");
  simulate->add_flag("--extremal", sim.extremal,
                     "Grow the theta = 0 extremal tree (requires --theta 0)");

  ExactArgs ex;
  CLI::App* exact = app.add_subcommand("exact", "Evaluate exact laws and bounds");
  exact->add_option("--theta", ex.theta, "Root weight theta (> 0)")->default_val(1.0);
  exact->add_option("--nodes", ex.nodes, "Tree size n")->required();
  exact->add_option("--stat", ex.stat, "depth|leaves|ipl|subtree|height|ancestor")
      ->required();
  exact->add_option("--format", ex.format, "csv|json")->default_val("csv");
  exact->add_option("--out", ex.out, "Output path (stdout when omitted)");
  exact->add_flag("--pmf", ex.pmf, "Emit the full pmf (depth, subtree)");
  exact->add_flag("--tv", ex.tv, "Poisson total-variation distance (depth)");
  double eps_val = 0.0;
  CLI::Option* eps_opt =
      exact->add_option("--eps", eps_val, "Small-subtree bound at eps (subtree)");
  double tail_val = 0.0;
  CLI::Option* tail_opt =
      exact->add_option("--tail-t", tail_val, "Tail bound at t (leaves)");
  std::int64_t index_val = 0;
  CLI::Option* index_opt =
      exact->add_option("--index", index_val, "Node index i (ancestor)");

  VerifyArgs ver;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the verification suite");
  verify_cmd->add_option("--tier", ver.tier, "exact|statistical|all")->default_val("all");
  verify_cmd->add_option("--seed", ver.seed, "Seed for the statistical tier")
      ->default_val(1);
  verify_cmd->add_option("--workers", ver.workers, "Worker threads (0 = auto)");
  verify_cmd->add_flag("--inject-fault", ver.inject_fault, "Harness self-test hook")
      ->group("");  // hidden

  LimitArgs lim;
  CLI::App* limit = app.add_subcommand("limit", "Build the limit-law population");
  limit->add_option("--theta", lim.theta, "Root weight theta (> 0)")->required();
  limit->add_option("--population", lim.population, "Population size (>= 10000)")
      ->default_val(100000);
  limit->add_option("--iterations", lim.iterations, "Max Picard iterations")
      ->default_val(40);
  limit->add_option("--seed", lim.seed, "Seed")->required();
  limit->add_option("--format", lim.format, "csv|json")->default_val("csv");
  limit->add_option("--out", lim.out, "Output path (stdout when omitted)");
  limit->add_option("--workers", lim.workers, "Worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (eps_opt->count() > 0) ex.eps = eps_val;
    if (tail_opt->count() > 0) ex.tail_t = tail_val;
    if (index_opt->count() > 0) ex.index = index_val;

    if (simulate->parsed()) return cmd_simulate(sim);
    if (exact->parsed()) return cmd_exact(ex);
    if (verify_cmd->parsed()) return cmd_verify(ver);
    if (limit->parsed()) return cmd_limit(lim);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
