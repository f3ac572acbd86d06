#include "perclab/cli.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "perclab/estimators.hpp"
#include "perclab/json_io.hpp"
#include "perclab/lemma_suite.hpp"
#include "perclab/output.hpp"

#ifndef PERCLAB_BUILD_ID
#define PERCLAB_BUILD_ID "unknown"
#endif

namespace perclab {
namespace {

using nlohmann::json;

constexpr int kManifestSchema = 1;

/// Result of one command: a table (CSV rows / JSON array) and a summary
/// that also goes into the manifest.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;
  json summary = json::object();
  int exit_code = kExitOk;
};

std::string cell(const json& v) {
  if (v.is_number_float()) return format_real(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

std::string render(const Table& t, const std::string& format) {
  if (format == "csv") {
    CsvTable csv(t.header);
    for (const auto& row : t.rows) {
      std::vector<std::string> cells;
      for (const auto& v : row) cells.push_back(cell(v));
      csv.add_row(std::move(cells));
    }
    return csv.str();
  }
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < t.header.size(); ++i) obj[t.header[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  return json{{"rows", std::move(rows)}, {"summary", t.summary}}.dump(2) + "\n";
}

std::string iso_time(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void require_writable(const std::string& out) {
  if (out.empty()) return;
  const std::filesystem::path path(out);
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  if (!std::filesystem::is_directory(dir)) {
    throw std::invalid_argument("output directory " + dir.string() + " does not exist; create it or change --out");
  }
  if (::access(dir.c_str(), W_OK) != 0) {
    throw std::invalid_argument("output directory " + dir.string() + " is not writable; choose another --out");
  }
  if (std::filesystem::is_directory(path)) throw std::invalid_argument("--out " + out + " is a directory");
}

struct Options {
  unsigned n = 0;
  double kappa = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;
  unsigned threads = default_threads();
  std::string out;
  std::string format = "csv";
  bool timestamps = false;

  std::string p_grid;
  bool geometric = false;
  double theta = 0.5;
  double eps = 0.1;
  double p = 0.0;
  double dp = 1e-3;
  std::string method = "auto";
  std::vector<unsigned> dists;
  std::uint64_t pair_samples = 200;
  double delta = 0.2;
  unsigned boost_k_max = 8;
  std::string instance;
  unsigned k = 2;
  double c2 = 4.0;
  unsigned n_star = 0;
  std::vector<double> c2_list{1.0, 2.0, 4.0};
  std::uint64_t sequence_samples = 10000;
  std::uint64_t cases = 1000;
  unsigned n_max = 64;
  unsigned n_enum_max = 12;
  unsigned suite_k_max = 5;
  std::string mutate = "none";
  std::string backend = "bitparallel";
};

ModelParams model(const Options& o) { return ModelParams(o.n, o.kappa); }

json base_config(const Options& o) {
  return json{{"n", o.n}, {"kappa", o.kappa}};
}

// ---------------------------------------------------------------------------
// Commands

Table run_curve(const Options& o, json& config) {
  const auto ps = parse_p_grid(o.p_grid, o.geometric);
  config.update({{"seed", o.seed}, {"trials", o.trials}, {"p_grid", o.p_grid}, {"geometric", o.geometric}});
  Table t{{"p", "trials", "empty_hits", "theta_hat", "ci_lo", "ci_hi"}, {}};
  for (const auto& c : estimate_curve(model(o), ps, o.trials, o.seed, o.threads)) {
    t.rows.push_back({c.p, c.trials, c.empty_hits, c.theta_hat, c.ci_lo, c.ci_hi});
  }
  t.summary = {{"points", t.rows.size()}};
  return t;
}

std::vector<json> threshold_row(const ThresholdEstimate& e, unsigned n) {
  return {e.theta, e.p_hat, e.p_lo, e.p_hi, e.trials_per_eval, e.seed, e.theta_lo, e.theta_hi, e.separated,
          e.evaluations, e.p_hat * std::ldexp(1.0, static_cast<int>(n)) / n};
}

Table run_threshold(const Options& o, json& config) {
  config.update({{"seed", o.seed}, {"trials", o.trials}, {"theta", o.theta}});
  const auto e = find_threshold(model(o), o.theta, o.trials, o.seed, o.threads);
  Table t{{"theta", "p_hat", "p_lo", "p_hi", "trials_per_eval", "seed", "theta_lo", "theta_hi", "separated",
           "evaluations", "alpha_hat"},
          {threshold_row(e, o.n)}};
  t.summary = {{"p_hat", e.p_hat}, {"alpha_hat", t.rows[0].back()}};
  return t;
}

Table run_sharpness(const Options& o, json& config) {
  config.update({{"seed", o.seed}, {"trials", o.trials}, {"eps", o.eps}});
  const auto w = sharpness_window(model(o), o.eps, o.trials, o.seed, o.threads);
  Table t{{"eps", "p_eps", "p_one_minus_eps", "ratio", "trials_per_eval", "seed"},
          {{w.eps, w.lower.p_hat, w.upper.p_hat, w.ratio, o.trials, o.seed}}};
  t.summary = {{"ratio", w.ratio}};
  return t;
}

Table run_influence(const Options& o, json& config, bool has_seed) {
  const bool exact = o.method == "exact" || (o.method == "auto" && o.n <= kMaxEnumerationN);
  if (!exact && !has_seed) throw std::invalid_argument("influence: --seed is required for the Monte Carlo method");
  config.update({{"p", o.p}, {"method", exact ? "exact" : "mc"}});
  if (!exact) config.update({{"seed", o.seed}, {"trials", o.trials}});
  const auto e = exact ? influence_exact(model(o), o.p) : influence_mc(model(o), o.p, o.trials, o.seed, o.threads);
  Table t{{"p", "i_hat", "method", "stderr", "trials"},
          {{e.p, e.i_hat, to_string(e.method), e.standard_error, e.trials}}};
  t.summary = {{"i_hat", e.i_hat}, {"stderr", e.standard_error}};
  return t;
}

Table run_mr_check(const Options& o, json& config) {
  config.update({{"p", o.p}, {"dp", o.dp}});
  const auto r = margulis_russo_check(model(o), o.p, o.dp);
  Table t{{"p", "dp", "lhs", "rhs", "gap"}, {{r.p, r.dp, r.lhs, r.rhs, r.gap}}};
  t.summary = {{"gap", r.gap}};
  return t;
}

Table run_angle_scan(const Options& o, json& config) {
  std::vector<unsigned> dists = o.dists;
  if (dists.empty()) {
    for (unsigned m = 1; m <= o.n; ++m) dists.push_back(m);
  }
  config.update({{"seed", o.seed}, {"samples", o.pair_samples}, {"dists", dists}});
  Table t{{"m", "samples", "max_diff", "max_ratio"}, {}};
  double overall = 0.0;
  for (const auto& r : angle_scan(model(o), dists, o.pair_samples, o.seed, o.threads)) {
    t.rows.push_back({r.m, r.samples, r.max_diff, r.max_ratio});
    overall = std::max(overall, r.max_ratio);
  }
  t.summary = {{"max_ratio", overall}};
  return t;
}

Table run_boost_search(const Options& o, json& config) {
  config.update({{"seed", o.seed}, {"trials", o.trials}, {"p", o.p}, {"delta", o.delta}, {"k_max", o.boost_k_max}});
  std::optional<Disorder> d;
  if (!o.instance.empty()) {
    d = read_instance(o.instance);
    if (d->params().n() != o.n || d->params().kappa() != o.kappa) {
      throw std::invalid_argument("boost-search: instance n/kappa differ from --n/--kappa");
    }
    config["instance"] = std::filesystem::path(o.instance).filename().string();
  } else {
    auto rng = stream_rng(o.seed, Stream::kReference, 0);
    d = sample_disorder(model(o), o.p, rng);
  }
  const auto cert = boosting_search(*d, o.p, o.delta, o.boost_k_max, o.trials, o.seed, o.threads);
  Table t{{"found", "size", "set", "delta", "confidence", "trials", "estimate", "ci_lo", "active_centers"}, {}};
  if (cert) {
    std::string set;
    for (const auto& v : cert->set) set += (set.empty() ? "" : " ") + v.to_string();
    t.rows.push_back({true, cert->set.size(), set, cert->delta, cert->confidence, cert->trials,
                      cert->estimate.estimate, cert->estimate.ci_lo, d->size()});
  } else {
    t.rows.push_back({false, 0, "", o.delta, 0.95, o.trials, nullptr, nullptr, d->size()});
  }
  t.summary = {{"found", cert.has_value()}, {"size", cert ? cert->set.size() : 0}};
  return t;
}

Table run_removal(const Options& o, json& config) {
  const auto params = model(o);
  auto rp = RemovalExperimentParams::for_dimension(o.n, o.k, o.trials);
  if (o.n_star > 0) rp.n_star = o.n_star;
  validate(rp, o.n);
  config.update({{"seed", o.seed}, {"trials", o.trials}, {"p", o.p}, {"k", o.k}, {"c2", o.c2}, {"n_star", rp.n_star}});

  // A: solution set of the first sampled disorder whose intersection is nonempty.
  std::vector<std::uint64_t> a;
  for (std::uint64_t attempt = 0; attempt < 1000 && a.empty(); ++attempt) {
    auto rng = stream_rng(o.seed, Stream::kReference, attempt);
    a = solution_set(sample_disorder(params, o.p, rng));
  }
  if (a.empty()) throw std::runtime_error("removal: no sampled disorder at this p has a nonempty intersection");

  const AdmissibilityParams admissibility{o.c2};
  validate(admissibility);
  std::optional<GentleMap> map;
  for (std::uint64_t attempt = 0; attempt < 1000 && !map; ++attempt) {
    auto rng = stream_rng(o.seed, Stream::kReference, (std::uint64_t{1} << 32) | attempt);
    auto reference = random_sequence(o.n, o.k, rng);
    if (is_admissible(reference, admissibility)) map = build_gentle_map(reference, admissibility);
  }
  if (!map) throw std::runtime_error("removal: no admissible reference sequence found; raise --c2");

  const auto r = removal_experiment(params, a, *map, rp, o.seed, o.threads);
  Table t{{"budget", "blocks", "trials", "removal_hits", "removal_rate", "q_hat", "q_stderr", "c_hat"}, {}};
  for (std::uint64_t b = 1; b <= rp.budget(); ++b) {
    const auto hits = r.removal_curve_hits[b - 1];
    const double rate = static_cast<double>(hits) / static_cast<double>(rp.trials);
    const double blocks = static_cast<double>(b) / o.k;
    const double c = rate >= 1.0                  ? std::numeric_limits<double>::infinity()
                     : r.q.estimate * blocks > 0.0 ? -std::log1p(-rate) / (r.q.estimate * blocks)
                                                   : std::numeric_limits<double>::quiet_NaN();
    t.rows.push_back({b, blocks, rp.trials, hits, rate, r.q.estimate, r.q.standard_error(), c});
  }
  t.summary = {{"a_size", a.size()},
               {"n_star", rp.n_star},
               {"budget", rp.budget()},
               {"q_hat", r.q.estimate},
               {"q_stderr", r.q.standard_error()},
               {"q_threshold", rp.q_threshold},
               {"q_above_threshold", r.q.estimate >= rp.q_threshold},
               {"removal_rate", r.removal.estimate},
               {"removal_stderr", r.removal.standard_error()},
               {"c_hat", r.c_hat}};
  return t;
}

Table run_lemma_suite_command(const Options& o, json& config) {
  LemmaSuiteConfig cfg;
  cfg.cases = o.cases;
  cfg.seed = o.seed;
  cfg.n_max = o.n_max;
  cfg.n_enum_max = o.n_enum_max;
  cfg.k_max = o.suite_k_max;
  cfg.c2 = o.c2;
  cfg.threads = o.threads;
  cfg.mutation = parse_mutation(o.mutate);
  config = json{{"seed", o.seed},          {"cases", o.cases},          {"n_max", o.n_max},
                {"n_enum_max", o.n_enum_max}, {"k_max", o.suite_k_max}, {"c2", o.c2}};
  if (cfg.mutation != Mutation::kNone) config["mutation"] = to_string(cfg.mutation);
  const auto report = run_lemma_suite(cfg);
  Table t{{"check", "cases", "failures", "status"}, {}};
  std::uint64_t failures = 0;
  for (const auto& row : report.rows) {
    t.rows.push_back({row.check, row.cases, row.failures, row.failures == 0 ? "PASS" : "FAIL"});
    failures += row.failures;
  }
  t.summary = {{"checks", report.rows.size()}, {"failures", failures}, {"all_passed", report.all_passed()}};
  t.exit_code = report.all_passed() ? kExitOk : kExitRuntimeError;
  return t;
}

Table run_admissibility(const Options& o, json& config) {
  config = json{{"n", o.n}, {"k", o.k}, {"c2", o.c2_list}, {"samples", o.sequence_samples}, {"seed", o.seed}};
  Table t{{"c2", "samples", "inadmissible", "rate"}, {}};
  bool monotone = true;
  std::uint64_t last = std::numeric_limits<std::uint64_t>::max();
  auto sorted = o.c2_list;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& r : admissibility_scan(o.n, o.k, sorted, o.sequence_samples, o.seed, o.threads)) {
    t.rows.push_back({r.c2, r.samples, r.inadmissible, static_cast<double>(r.inadmissible) / r.samples});
    monotone = monotone && r.inadmissible <= last;
    last = r.inadmissible;
  }
  t.summary = {{"nonincreasing", monotone}};
  return t;
}

Table run_solve(const Options& o, json& config) {
  const auto d = read_instance(o.instance);
  const auto backend = parse_backend(o.backend);
  config = json{{"instance", std::filesystem::path(o.instance).filename().string()}, {"backend", o.backend}};
  const auto r = solve(d, backend);
  Table t{{"empty", "count", "witness", "backend"},
          {{r.empty, r.count, r.witness ? json(r.witness->to_string()) : json(nullptr), to_string(r.backend)}}};
  t.summary = to_json(r);
  return t;
}

// ---------------------------------------------------------------------------
// Flag wiring

void add_model(CLI::App* sub, Options& o, unsigned n_cap = kExactCap) {
  sub->add_option("--n", o.n, "Dimension n")->required()->check(CLI::Range(1u, n_cap));
  sub->add_option("--kappa", o.kappa, "Margin kappa (half-cube threshold kappa*sqrt(n))")->capture_default_str();
}

void add_output(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Output file; a <out>.manifest.json is written next to it (default: stdout)");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--threads", o.threads, "Worker threads (default: $PERCLAB_THREADS, else all cores)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--timestamps", o.timestamps, "Record start/end times and wall time in the manifest");
}

void add_seed(CLI::App* sub, Options& o, bool required = true) {
  auto* opt = sub->add_option("--seed", o.seed, "Master seed (64-bit)");
  if (required) opt->required();
}

void add_trials(CLI::App* sub, Options& o, const std::string& what = "Monte Carlo trials") {
  sub->add_option("--trials", o.trials, what)->check(CLI::PositiveNumber)->capture_default_str();
}

void write_outputs(const Options& o, const std::string& command, const json& config, const Table& t,
                   std::chrono::system_clock::time_point started, std::ostream& out) {
  const std::string body = render(t, o.format);
  if (o.out.empty()) {
    out << body;
    return;
  }
  write_atomically(o.out, body);
  json manifest = {{"schema", kManifestSchema},
                   {"command", command},
                   {"config", config},
                   {"build", PERCLAB_BUILD_ID},
                   {"output", std::filesystem::path(o.out).filename().string()},
                   {"format", o.format},
                   {"rows", t.rows.size()},
                   {"summary", t.summary},
                   {"exit_status", t.exit_code}};
  if (o.timestamps) {
    const auto finished = std::chrono::system_clock::now();
    manifest["started"] = iso_time(started);
    manifest["finished"] = iso_time(finished);
    manifest["wall_time_s"] = std::chrono::duration<double>(finished - started).count();
  }
  write_atomically(o.out + ".manifest.json", manifest.dump(2) + "\n");
  out << command << ": wrote " << o.out << " (" << t.rows.size() << " rows)";
  for (const auto& [key, value] : t.summary.items()) out << ' ' << key << '=' << cell(value);
  out << '\n';
}

}  // namespace

std::vector<double> parse_p_grid(const std::string& grid, bool geometric) {
  std::vector<std::string> parts;
  std::stringstream ss(grid);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw std::invalid_argument("--p-grid must look like a:b:k (got '" + grid + "')");
  double a = 0.0;
  double b = 0.0;
  long k = 0;
  try {
    std::size_t pos = 0;
    a = std::stod(parts[0], &pos);
    if (pos != parts[0].size()) throw std::invalid_argument("a");
    b = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument("b");
    k = std::stol(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument("k");
  } catch (const std::exception&) {
    throw std::invalid_argument("--p-grid must look like a:b:k with numbers a, b and a count k (got '" + grid + "')");
  }
  if (k < 1) throw std::invalid_argument("--p-grid: k must be >= 1");
  std::vector<double> ps;
  for (long i = 0; i < k; ++i) {
    const double p = geometric ? a * std::pow(b, static_cast<double>(i)) : a + static_cast<double>(i) * b;
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("--p-grid: point " + std::to_string(i) + " = " + format_real(p) + " is outside [0,1]");
    }
    ps.push_back(p);
  }
  return ps;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"perclab: exact and Monte Carlo experiments on the Bernoulli-disorder Ising perceptron"};
  app.set_config("--config", "", "TOML file with option values ([<command>] sections); flags override it");
  app.require_subcommand(1);
  // Each command binds its own Options so config sections of other commands
  // never leak into the one being run.
  std::map<const CLI::App*, Options> options;

  auto* curve = app.add_subcommand("curve", "Emptiness probability theta(p) on a grid of p");
  {
    Options& o = options[curve];
    add_model(curve, o);
    add_seed(curve, o);
    add_trials(curve, o);
    curve->add_option("--p-grid", o.p_grid,
                      "a:b:k -> k points a + i*b (linear) or a*b^i (with --geometric), i = 0..k-1")
        ->required();
    curve->add_flag("--geometric", o.geometric, "Interpret --p-grid geometrically");
    add_output(curve, o);
  }

  auto* threshold = app.add_subcommand("threshold", "Bisection estimate of p_N(theta)");
  {
    Options& o = options[threshold];
    add_model(threshold, o);
    add_seed(threshold, o);
    add_trials(threshold, o, "Trials per curve evaluation");
    threshold->add_option("--theta", o.theta, "Target emptiness probability in (0,1)")->capture_default_str();
    add_output(threshold, o);
  }

  auto* sharpness = app.add_subcommand("sharpness", "Window ratio p_N(1-eps)/p_N(eps)");
  {
    Options& o = options[sharpness];
    add_model(sharpness, o);
    add_seed(sharpness, o);
    add_trials(sharpness, o, "Trials per curve evaluation");
    sharpness->add_option("--eps", o.eps, "eps in (0, 1/2)")->capture_default_str();
    add_output(sharpness, o);
  }

  auto* influence = app.add_subcommand("influence", "Total influence I_f(p)");
  {
    Options& o = options[influence];
    add_model(influence, o, 20);
    add_seed(influence, o, false);
    add_trials(influence, o);
    influence->add_option("--p", o.p, "Selection probability")->required();
    influence->add_option("--method", o.method, "exact (n <= 4), mc, or auto")
        ->check(CLI::IsMember({"auto", "exact", "mc"}))
        ->capture_default_str();
    add_output(influence, o);
  }

  auto* mr = app.add_subcommand("mr-check", "Finite-difference dE_p[f]/dp against I_f(p)/(2p(1-p)), exact, n <= 4");
  {
    Options& o = options[mr];
    mr->add_option("--n", o.n, "Dimension n")->required()->check(CLI::Range(1u, kMaxEnumerationN));
    mr->add_option("--kappa", o.kappa, "Margin kappa")->capture_default_str();
    mr->add_option("--p", o.p, "Selection probability")->required();
    mr->add_option("--dp", o.dp, "Finite-difference step")->capture_default_str();
    add_output(mr, o);
  }

  auto* angle = app.add_subcommand("angle-scan", "Largest |H(x)\\H(y)| / (sqrt(m ln n / n) 2^n) per distance m");
  {
    Options& o = options[angle];
    add_model(angle, o);
    add_seed(angle, o);
    angle->add_option("--dists", o.dists, "Hamming distances m (default 1..n)")->delimiter(',');
    angle->add_option("--samples", o.pair_samples, "Pairs per distance")->check(CLI::PositiveNumber)->capture_default_str();
    add_output(angle, o);
  }

  auto* boost = app.add_subcommand("boost-search", "Greedy boosting-set search with a Wilson certificate");
  {
    Options& o = options[boost];
    add_model(boost, o);
    add_seed(boost, o);
    add_trials(boost, o, "Fresh disorders per estimate");
    boost->add_option("--p", o.p, "Selection probability")->required();
    boost->add_option("--delta", o.delta, "Target 1 - delta")->capture_default_str();
    boost->add_option("--k-max", o.boost_k_max, "Largest set to try")->capture_default_str();
    boost->add_option("--instance", o.instance, "Disorder JSON (default: sampled at --p from the seed)");
    add_output(boost, o);
  }

  auto* removal = app.add_subcommand("removal", "q(A) and the removal rate of k*n_star uniform half-cubes");
  {
    Options& o = options[removal];
    add_model(removal, o);
    add_seed(removal, o);
    add_trials(removal, o);
    removal->add_option("--p", o.p, "Selection probability of the disorder defining A")->required();
    removal->add_option("--k", o.k, "Sequence length k")->check(CLI::Range(1u, kMaxSequenceLength))->capture_default_str();
    removal->add_option("--c2", o.c2, "Admissibility constant of the gentle map")->capture_default_str();
    removal->add_option("--n-star", o.n_star, "Override n_star (default floor(n / sqrt(ln n)))");
    add_output(removal, o);
  }

  auto* suite = app.add_subcommand("lemma-suite", "Exact property battery; nonzero exit on any failure");
  {
    Options& o = options[suite];
    add_seed(suite, o);
    suite->add_option("--cases", o.cases, "Random cases per check")->check(CLI::PositiveNumber)->capture_default_str();
    suite->add_option("--n-max", o.n_max, "Largest n for vector checks")->capture_default_str();
    suite->add_option("--n-enum-max", o.n_enum_max, "Largest n for whole-cube checks")->capture_default_str();
    suite->add_option("--k-max", o.suite_k_max, "Longest sequence")->capture_default_str();
    suite->add_option("--c2", o.c2, "Admissibility constant")->capture_default_str();
  #ifdef PERCLAB_TEST_HOOKS
    suite->add_option("--self-test-mutate", o.mutate, "Inject a defect: sign-switch, decode, witness or gentle")
        ->expected(0, 1)
        ->default_str("witness");
  #endif
    add_output(suite, o);
  }

  auto* adm = app.add_subcommand("admissibility", "Inadmissibility counts of uniform k-sequences per c2");
  {
    Options& o = options[adm];
    adm->add_option("--n", o.n, "Dimension n")->required()->check(CLI::Range(1u, 1u << 20));
    add_seed(adm, o);
    adm->add_option("--k", o.k, "Sequence length k")->check(CLI::Range(1u, kMaxSequenceLength))->capture_default_str();
    adm->add_option("--c2", o.c2_list, "Values of c2")->delimiter(',')->capture_default_str();
    adm->add_option("--samples", o.sequence_samples, "Sequences")->check(CLI::PositiveNumber)->capture_default_str();
    add_output(adm, o);
  }

  auto* solve_cmd = app.add_subcommand("solve", "Exact emptiness and solution count of an instance file");
  {
    Options& o = options[solve_cmd];
    solve_cmd->add_option("--instance", o.instance, "Instance JSON {n, kappa, active}")->required();
    solve_cmd->add_option("--backend", o.backend, "naive, graycode or bitparallel")
        ->check(CLI::IsMember({"naive", "graycode", "bitparallel"}))
        ->capture_default_str();
    add_output(solve_cmd, o);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  const auto started = std::chrono::system_clock::now();
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const Options& o = options[sub];
  try {
    require_writable(o.out);
    json config = base_config(o);
    Table t;
    if (sub == curve) t = run_curve(o, config);
    else if (sub == threshold) t = run_threshold(o, config);
    else if (sub == sharpness) t = run_sharpness(o, config);
    else if (sub == influence) t = run_influence(o, config, influence->count("--seed") > 0);
    else if (sub == mr) t = run_mr_check(o, config);
    else if (sub == angle) t = run_angle_scan(o, config);
    else if (sub == boost) t = run_boost_search(o, config);
    else if (sub == removal) t = run_removal(o, config);
    else if (sub == suite) t = run_lemma_suite_command(o, config);
    else if (sub == adm) t = run_admissibility(o, config);
    else t = run_solve(o, config);
    write_outputs(o, command, config, t, started, out);
    if (t.exit_code != kExitOk) err << command << ": FAILED (see output)\n";
    return t.exit_code;
  } catch (const std::invalid_argument& e) {
    err << command << ": error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const ExactRegimeError& e) {
    err << command << ": error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const std::exception& e) {
    err << command << ": runtime error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

}  // namespace perclab
