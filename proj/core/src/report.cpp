#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "radstein/enumeration.hpp"
#include "radstein/montecarlo.hpp"
#include "radstein/report.hpp"

namespace radstein {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Empirical Kolmogorov distance together with the empirical CDF level at the
// maximizing point, for a binomial standard-error estimate.
std::pair<double, double> kolmogorov_with_level(const std::vector<double>& sorted) {
  const double n = static_cast<double>(sorted.size());
  double best = 0.0, level = 0.5;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double phi = normal_cdf(sorted[i]);
    const double above = std::abs((i + 1) / n - phi);
    const double below = std::abs(i / n - phi);
    if (above > best) { best = above; level = (i + 1) / n; }
    if (below > best) { best = below; level = i / n; }
  }
  return {best, level};
}

}  // namespace

HolderTriple RateStudyConfig::effective_triple() const {
  if (triple) return *triple;
  // The sparsity-driven exponent selection is specific to triangle counts;
  // every other statistic uses the default r=2, s=t=4.
  return kind == StatisticKind::Triangles ? holder_select(alpha) : HolderTriple{};
}

void RateStudyConfig::validate() const {
  if (sizes.size() < 3)
    throw std::invalid_argument("rate study needs at least three sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("rate study sizes must be strictly increasing");
}

BuiltStatistic build_statistic(const RateStudyConfig& config, int size) {
  switch (config.kind) {
    case StatisticKind::Triangles: {
      ErdosRenyiModel model(size, config.alpha, config.theta);
      Functional f = triangle_statistic(model);
      return {model.space(), f, edge_transitive_orbits(model, f),
              size, static_cast<double>(size), model.p(), "triangles"};
    }
    case StatisticKind::Subgraph: {
      ErdosRenyiModel model(size, config.alpha, config.theta);
      Functional f = subgraph_statistic(model, config.pattern);
      std::string name = "subgraph_v" + std::to_string(config.pattern.vertex_count) + "e" +
                         std::to_string(static_cast<int>(config.pattern.edges.size()));
      return {model.space(), f, edge_transitive_orbits(model, f),
              size, static_cast<double>(size), model.p(), std::move(name)};
    }
    case StatisticKind::Degrees: {
      ErdosRenyiModel model(size, config.alpha, config.theta);
      Functional f = degree_statistic(model, config.degree);
      return {model.space(), f, edge_transitive_orbits(model, f),
              size, static_cast<double>(size), model.p(),
              "degrees_d" + std::to_string(config.degree)};
    }
    case StatisticKind::TreePercolation: {
      TreeModel tree = TreeModel::regular(config.tree_degree, size);
      Functional f = percolation_statistic(tree, config.tree_p);
      return {tree.space(config.tree_p), f, direct_orbits(f),
              size, static_cast<double>(tree.edge_count()), config.tree_p,
              "tree_deg" + std::to_string(config.tree_degree)};
    }
  }
  throw std::invalid_argument("unknown statistic kind");
}

BoundRow run_bound(const RateStudyConfig& config, int size, BoundBreakdown* breakdown) {
  BuiltStatistic built = build_statistic(config, size);
  const HolderTriple triple = config.effective_triple();
  BoundRow row;
  row.statistic = built.name;
  row.n = static_cast<int>(built.x);
  row.p = built.p;
  row.seed = config.seed;
  if (config.mode == BoundMode::Exact) {
    const auto [mean, sd] = exact_mean_stddev(built.space, built.f);
    Functional norm = normalize(built.f, mean, sd);
    BoundBreakdown bb = second_order_bound(built.space, norm, triple, BoundMode::Exact);
    bb.normalization = {mean, sd, false};
    if (breakdown) *breakdown = bb;
    row.terms = bb.terms;
    row.total = bb.total;
    row.dk_emp = exact_kolmogorov(enumerate_distribution(built.space, norm));
    row.dk_stderr = 0.0;
    row.mode = "exact";
    return row;
  }
  McParams mc;
  mc.spec.count = config.samples;
  mc.spec.batches = config.batches;
  mc.spec.seed = rng::mix64(config.seed ^ (0x73697a65ULL + static_cast<std::uint64_t>(size)));
  mc.threads = config.threads;
  mc.pilot_multiplier = config.pilot_multiplier;
  mc.orbits = &built.orbits;
  std::vector<double> samples;
  mc.f_samples = &samples;
  BoundBreakdown bb = second_order_bound(built.space, built.f, triple, BoundMode::MonteCarlo, mc);
  if (breakdown) *breakdown = bb;
  row.terms = bb.terms;
  row.total = bb.total;
  std::sort(samples.begin(), samples.end());
  const auto [dk, level] = kolmogorov_with_level(samples);
  row.dk_emp = dk;
  row.dk_stderr = std::sqrt(level * (1.0 - level) / static_cast<double>(samples.size()));
  row.mode = "mc";
  return row;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line needs >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i]; sy += y[i];
    sxx += x[i] * x[i]; sxy += x[i] * y[i]; syy += y[i] * y[i];
  }
  const double vxx = sxx - sx * sx / n;
  const double vxy = sxy - sx * sy / n;
  const double vyy = syy - sy * sy / n;
  LineFit fit;
  fit.slope = vxy / vxx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = vyy > 0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return fit;
}

RateReport run_rate(const RateStudyConfig& config) {
  config.validate();
  RateReport report;
  std::vector<double> logx, logt, logdk_x, logdk;
  for (int size : config.sizes) {
    BoundRow row = run_bound(config, size);
    logx.push_back(std::log(static_cast<double>(row.n)));
    logt.push_back(std::log(row.total));
    if (row.dk_emp > 0) {
      logdk_x.push_back(logx.back());
      logdk.push_back(std::log(row.dk_emp));
    }
    report.rows.push_back(std::move(row));
  }
  const LineFit fit = fit_line(logx, logt);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.r_squared = fit.r_squared;
  for (std::size_t i = 0; i < logx.size(); ++i)
    report.residuals.push_back(logt[i] - (fit.intercept + fit.slope * logx[i]));
  report.dk_slope = logdk.size() >= 2 ? fit_line(logdk_x, logdk).slope
                                      : std::numeric_limits<double>::quiet_NaN();
  try {
    report.theoretical = theoretical_rate(config.kind, config.alpha, config.degree);
  } catch (const std::exception&) {
    report.theoretical = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

std::string rate_csv_header() {
  return "statistic,n,p,term_A1,term_A2,term_A3,term_A4,term_A5,term_A6,term_A7,"
         "total,dK_emp,dK_stderr,mode,seed";
}

std::string to_csv_row(const BoundRow& row) {
  std::ostringstream out;
  out << row.statistic << ',' << row.n << ',' << format_double(row.p);
  for (double t : row.terms) out << ',' << format_double(t);
  out << ',' << format_double(row.total) << ',' << format_double(row.dk_emp) << ','
      << format_double(row.dk_stderr) << ',' << row.mode << ',' << row.seed;
  return out.str();
}

std::string to_csv(const RateReport& report) {
  std::ostringstream out;
  out << rate_csv_header() << '\n';
  for (const BoundRow& row : report.rows) out << to_csv_row(row) << '\n';
  return out.str();
}

std::vector<BoundRow> parse_csv_rows(const std::string& csv) {
  std::vector<BoundRow> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("statistic,", 0) == 0) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 15)
      throw std::invalid_argument("bad CSV row: " + line);
    BoundRow row;
    row.statistic = fields[0];
    row.n = std::stoi(fields[1]);
    row.p = std::stod(fields[2]);
    for (int i = 0; i < 7; ++i) row.terms[i] = std::stod(fields[3 + i]);
    row.total = std::stod(fields[10]);
    row.dk_emp = std::stod(fields[11]);
    row.dk_stderr = std::stod(fields[12]);
    row.mode = fields[13];
    row.seed = std::stoull(fields[14]);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

json row_to_json(const BoundRow& row) {
  json j;
  j["statistic"] = row.statistic;
  j["n"] = row.n;
  j["p"] = row.p;
  for (int i = 0; i < 7; ++i) j["term_A" + std::to_string(i + 1)] = row.terms[i];
  j["total"] = row.total;
  j["dK_emp"] = row.dk_emp;
  j["dK_stderr"] = row.dk_stderr;
  j["mode"] = row.mode;
  j["seed"] = row.seed;
  return j;
}

BoundRow row_from_json(const json& j) {
  BoundRow row;
  row.statistic = j.at("statistic").get<std::string>();
  row.n = j.at("n").get<int>();
  row.p = j.at("p").get<double>();
  for (int i = 0; i < 7; ++i) row.terms[i] = j.at("term_A" + std::to_string(i + 1)).get<double>();
  row.total = j.at("total").get<double>();
  row.dk_emp = j.at("dK_emp").get<double>();
  row.dk_stderr = j.at("dK_stderr").get<double>();
  row.mode = j.at("mode").get<std::string>();
  row.seed = j.at("seed").get<std::uint64_t>();
  return row;
}

}  // namespace

std::string to_json(const BoundRow& row) { return row_to_json(row).dump(2); }

std::string to_json(const RateReport& report) {
  json j;
  j["rows"] = json::array();
  for (const BoundRow& row : report.rows) j["rows"].push_back(row_to_json(row));
  j["slope"] = report.slope;
  j["intercept"] = report.intercept;
  j["r_squared"] = report.r_squared;
  j["residuals"] = report.residuals;
  j["dK_slope"] = report.dk_slope;
  if (std::isnan(report.theoretical))
    j["theoretical"] = nullptr;
  else
    j["theoretical"] = report.theoretical;
  return j.dump(2);
}

BoundRow bound_row_from_json(const std::string& text) {
  return row_from_json(json::parse(text));
}

std::vector<BoundRow> rate_rows_from_json(const std::string& text) {
  const json j = json::parse(text);
  std::vector<BoundRow> rows;
  for (const json& r : j.at("rows")) rows.push_back(row_from_json(r));
  return rows;
}

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) out.push_back(std::stoi(piece));
  return out;
}

SubgraphPattern parse_pattern(const std::string& text) {
  if (text == "triangle") return SubgraphPattern::triangle();
  if (text.rfind("path", 0) == 0) return SubgraphPattern::path(std::stoi(text.substr(4)));
  if (text.rfind("cycle", 0) == 0) return SubgraphPattern::cycle(std::stoi(text.substr(5)));
  throw std::invalid_argument("unknown pattern: " + text);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

RateStudyConfig parse_config(std::istream& in) {
  RateStudyConfig config;
  HolderTriple triple;
  bool triple_set = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "statistic") config.kind = statistic_kind_from_string(value);
    else if (key == "alpha") config.alpha = std::stod(value);
    else if (key == "theta") config.theta = std::stod(value);
    else if (key == "d") config.degree = std::stoi(value);
    else if (key == "pattern") config.pattern = parse_pattern(value);
    else if (key == "tree_degree") config.tree_degree = std::stoi(value);
    else if (key == "tree_p") config.tree_p = std::stod(value);
    else if (key == "sizes") config.sizes = parse_int_list(value);
    else if (key == "samples") config.samples = std::stoull(value);
    else if (key == "batches") config.batches = std::stoi(value);
    else if (key == "seed") config.seed = std::stoull(value);
    else if (key == "threads") config.threads = std::stoi(value);
    else if (key == "pilot_multiplier") config.pilot_multiplier = std::stoll(value);
    else if (key == "mode") {
      if (value == "exact") config.mode = BoundMode::Exact;
      else if (value == "mc") config.mode = BoundMode::MonteCarlo;
      else throw std::invalid_argument("mode must be exact or mc");
    } else if (key == "r") { triple.r = std::stod(value); triple_set = true; }
    else if (key == "s") { triple.s = std::stod(value); triple_set = true; }
    else if (key == "t") { triple.t = std::stod(value); triple_set = true; }
    else throw std::invalid_argument("unknown config key: " + key);
  }
  if (triple_set) config.triple = triple;
  return config;
}

RateStudyConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace radstein
