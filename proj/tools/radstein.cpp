#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radstein/chaos.hpp"
#include "radstein/enumeration.hpp"
#include "radstein/report.hpp"
#include "radstein/verify.hpp"

namespace {

using radstein::BoundMode;
using radstein::RateStudyConfig;
using radstein::StatisticKind;

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "csv";
  std::string config_path;
};

// Statistic/study flags shared by `bound`, `rate` and `decompose`.
struct StudyOpts {
  std::string statistic = "triangles";
  double alpha = 0.0;
  double theta = 0.3;
  int d = 0;
  std::string pattern = "triangle";
  int tree_degree = 2;
  double tree_p = 0.5;
  std::vector<int> sizes;
  int size = 0;
  std::size_t samples = 100000;
  int batches = 100;
  std::int64_t pilot_multiplier = 10;
  std::string mode = "mc";
  double r = 0, s = 0, t = 0;
};

void add_study_flags(CLI::App* cmd, StudyOpts* o) {
  cmd->add_option("--statistic", o->statistic, "triangles|subgraph|degrees|tree");
  cmd->add_option("--alpha", o->alpha, "sparsity exponent: p = theta * n^-alpha");
  cmd->add_option("--theta", o->theta, "edge probability prefactor");
  cmd->add_option("--d", o->d, "target degree for the degree statistic");
  cmd->add_option("--pattern", o->pattern, "triangle|path<k>|cycle<k>");
  cmd->add_option("--tree-degree", o->tree_degree, "offspring count of the regular tree");
  cmd->add_option("--tree-p", o->tree_p, "edge retention probability on the tree");
  cmd->add_option("--samples", o->samples, "Monte Carlo sample count per size");
  cmd->add_option("--batches", o->batches, "batch count for standard errors");
  cmd->add_option("--pilot-multiplier", o->pilot_multiplier,
                  "pilot sample size as a multiple of --samples");
  cmd->add_option("--mode", o->mode, "exact|mc");
  cmd->add_option("--r", o->r, "Holder exponent r (with --s, --t)");
  cmd->add_option("--s", o->s, "Holder exponent s");
  cmd->add_option("--t", o->t, "Holder exponent t");
}

RateStudyConfig make_config(const GlobalOpts& g, const StudyOpts& o, const CLI::App* cmd) {
  RateStudyConfig config;
  if (!g.config_path.empty()) config = radstein::parse_config_file(g.config_path);
  auto given = [&](const std::string& flag) { return cmd->count(flag) > 0; };
  if (g.config_path.empty() || given("--statistic"))
    config.kind = radstein::statistic_kind_from_string(o.statistic);
  if (given("--alpha")) config.alpha = o.alpha;
  if (given("--theta")) config.theta = o.theta;
  if (given("--d")) config.degree = o.d;
  if (given("--pattern")) {
    if (o.pattern == "triangle") config.pattern = radstein::SubgraphPattern::triangle();
    else if (o.pattern.rfind("path", 0) == 0)
      config.pattern = radstein::SubgraphPattern::path(std::stoi(o.pattern.substr(4)));
    else if (o.pattern.rfind("cycle", 0) == 0)
      config.pattern = radstein::SubgraphPattern::cycle(std::stoi(o.pattern.substr(5)));
    else throw CLI::ValidationError("--pattern", "expected triangle|path<k>|cycle<k>");
  }
  if (given("--tree-degree")) config.tree_degree = o.tree_degree;
  if (given("--tree-p")) config.tree_p = o.tree_p;
  if (given("--samples")) config.samples = o.samples;
  if (given("--batches")) config.batches = o.batches;
  if (given("--pilot-multiplier")) config.pilot_multiplier = o.pilot_multiplier;
  if (given("--mode"))
    config.mode = o.mode == "exact" ? BoundMode::Exact : BoundMode::MonteCarlo;
  if (given("--r") || given("--s") || given("--t")) {
    radstein::HolderTriple triple{o.r, o.s, o.t};
    if (!triple.valid())
      throw CLI::ValidationError("--r/--s/--t", "need 1/r + 1/s + 1/t = 1, all > 1");
    config.triple = triple;
  }
  config.seed = g.seed;
  config.threads = g.threads;
  return config;
}

int cmd_verify(const GlobalOpts& g, int cap) {
  const radstein::VerifyReport report = radstein::run_verify(cap, g.seed);
  if (g.format == "json") {
    nlohmann::json j;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks)
      j["checks"].push_back({{"name", c.name},
                             {"residual", c.residual},
                             {"tolerance", c.tolerance},
                             {"passed", c.passed}});
    j["all_passed"] = report.all_passed;
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("check,residual,tolerance,passed\n");
    for (const auto& c : report.checks)
      std::printf("%s,%.6e,%.0e,%s\n", c.name.c_str(), c.residual, c.tolerance,
                  c.passed ? "pass" : "FAIL");
  }
  return report.all_passed ? 0 : 1;
}

int cmd_bound(const RateStudyConfig& config, int size) {
  radstein::BoundBreakdown bb;
  const radstein::BoundRow row = radstein::run_bound(config, size, &bb);
  nlohmann::json j;
  j["statistic"] = row.statistic;
  j["n"] = row.n;
  j["p"] = row.p;
  j["terms"] = row.terms;
  j["stderrs"] = bb.stderrs;
  j["total"] = row.total;
  j["total_stderr"] = bb.total_stderr;
  j["triple"] = {{"r", bb.triple.r}, {"s", bb.triple.s}, {"t", bb.triple.t}};
  j["mode"] = row.mode;
  j["normalization"] = {{"mean", bb.normalization.mean},
                        {"stddev", bb.normalization.stddev},
                        {"estimated", bb.normalization.estimated}};
  j["dK_emp"] = row.dk_emp;
  j["dK_stderr"] = row.dk_stderr;
  j["seed"] = row.seed;
  std::printf("%s\n", j.dump(2).c_str());
  return 0;
}

int cmd_rate(const GlobalOpts& g, const RateStudyConfig& config) {
  const radstein::RateReport report = radstein::run_rate(config);
  if (g.format == "json") {
    std::printf("%s\n", radstein::to_json(report).c_str());
  } else {
    std::fputs(radstein::to_csv(report).c_str(), stdout);
    std::printf("# slope=%.6f r_squared=%.6f dK_slope=%.6f theoretical=%.6f\n", report.slope,
                report.r_squared, report.dk_slope, report.theoretical);
  }
  return 0;
}

int cmd_decompose(const RateStudyConfig& config, int size, const std::string& format) {
  const radstein::BuiltStatistic built = radstein::build_statistic(config, size);
  if (built.space.size() > radstein::kDefaultEnumerationCap)
    throw CLI::ValidationError("--size", "decompose requires <= 24 coordinates");
  const radstein::ChaosDecomposition decomp =
      radstein::stroock_decompose(built.space, built.f);
  if (format == "json") {
    nlohmann::json j;
    j["mean"] = decomp.mean;
    j["kernels"] = nlohmann::json::array();
    for (const auto& kernel : decomp.kernels)
      for (const auto& [tuple, value] : kernel.entries)
        j["kernels"].push_back(
            {{"order", kernel.order}, {"indices", tuple}, {"value", value}});
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
  }
  std::printf("order,indices,value\n");
  std::printf("0,,%.17g\n", decomp.mean);
  for (const auto& kernel : decomp.kernels)
    for (const auto& [tuple, value] : kernel.entries) {
      std::string idx;
      for (std::size_t i = 0; i < tuple.size(); ++i)
        idx += (i ? ";" : "") + std::to_string(tuple[i]);
      std::printf("%d,%s,%.17g\n", kernel.order, idx.c_str(), value);
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Malliavin-Stein bounds on finite Rademacher spaces"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker thread count")->capture_default_str();
  app.add_option("--format", g.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--config", g.config_path, "key=value config file");

  CLI::App* verify = app.add_subcommand("verify", "run the operator-identity suite");
  int cap = radstein::kDefaultEnumerationCap;
  verify->add_option("--cap", cap, "enumeration cap");

  StudyOpts bound_opts;
  CLI::App* bound = app.add_subcommand("bound", "evaluate the bound at one size");
  add_study_flags(bound, &bound_opts);
  bound->add_option("--size", bound_opts.size, "vertex count (depth for trees)")->required();

  StudyOpts rate_opts;
  CLI::App* rate = app.add_subcommand("rate", "bound totals across sizes with slope fit");
  add_study_flags(rate, &rate_opts);
  rate->add_option("--sizes", rate_opts.sizes, "comma-separated size sweep")->delimiter(',');

  StudyOpts dec_opts;
  CLI::App* decompose = app.add_subcommand("decompose", "print chaos kernels");
  add_study_flags(decompose, &dec_opts);
  decompose->add_option("--size", dec_opts.size, "vertex count (depth for trees)")->required();

  // Let --seed/--threads/--format/--config appear after the subcommand too.
  for (CLI::App* sub : {verify, bound, rate, decompose}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmd_verify(g, cap);
    if (bound->parsed()) return cmd_bound(make_config(g, bound_opts, bound), bound_opts.size);
    if (rate->parsed()) {
      RateStudyConfig config = make_config(g, rate_opts, rate);
      if (!rate_opts.sizes.empty()) config.sizes = rate_opts.sizes;
      return cmd_rate(g, config);
    }
    if (decompose->parsed())
      return cmd_decompose(make_config(g, dec_opts, decompose), dec_opts.size, g.format);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
