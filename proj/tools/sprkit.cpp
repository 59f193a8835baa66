// sprkit: command-line front end for the terminal-minor toolkit.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "sprkit/sprkit.hpp"

namespace {

using namespace sprkit;

enum Exit { kOk = 0, kViolation = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string report = "json";
  std::string out;
  bool timing = false;
};

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw UsageError("cannot open " + path + " for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit_json(const Globals& gl, const std::string& command, json body) {
  Sink sink(gl.out);
  sink.stream() << make_document(command, std::move(body)).dump(2) << '\n';
}

WeightedGraph load(const std::string& path) {
  try {
    return path == "-" ? read_edge_list(std::cin) : read_edge_list_file(path);
  } catch (const GraphError& e) {
    throw UsageError(e.what());
  }
}

bool all_sound(const AmplifiedResult& a) {
  for (const auto& t : a.trials)
    if (!t.ok() || !t.valid_partition || !t.dominated) return false;
  return true;
}

void write_minor(const std::string& path, const TerminalMinor& m, bool provenance) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open " + path + " for writing");
  if (provenance)
    f << to_json(m, true).dump(2) << '\n';
  else
    write_minor_edge_list(f, m);
}

json trace_json(const BallGrowingResult& r) {
  json steps = json::array();
  for (const auto& s : r.trace)
    steps.push_back({{"iteration", s.iteration},
                     {"terminal", s.terminal},
                     {"increment", s.increment},
                     {"radius", s.radius},
                     {"added", s.added}});
  return steps;
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
  std::string family = "cycle";
  std::string placement = "spread";
  GeneratorParams params;
};

void add_gen(CLI::App& app, GenArgs& a) {
  app.add_option("--family", a.family, "cycle|grid|random_tree|gnp_weighted|barbell|clusters");
  app.add_option("--n", a.params.n, "vertex count");
  app.add_option("--rows", a.params.rows);
  app.add_option("--cols", a.params.cols);
  app.add_option("--k", a.params.k, "terminal count");
  app.add_option("--placement", a.placement, "uniform|spread");
  app.add_option("--p", a.params.p, "edge probability (gnp_weighted)");
  app.add_option("--min-weight", a.params.min_weight);
  app.add_option("--max-weight", a.params.max_weight);
  app.add_option("--clique", a.params.clique, "barbell side size");
  app.add_option("--bridge-weight", a.params.bridge_weight);
  app.add_option("--clusters", a.params.clusters);
  app.add_option("--cluster-size", a.params.cluster_size);
}

int run_gen(const Globals& gl, GenArgs a) {
  const auto family = parse_family(a.family);
  if (!family) throw UsageError("unknown family: " + a.family);
  if (a.placement == "uniform")
    a.params.placement = Placement::uniform;
  else if (a.placement == "spread")
    a.params.placement = Placement::spread;
  else
    throw UsageError("unknown placement: " + a.placement);
  WeightedGraph g = [&] {
    try {
      return generate(*family, a.params, gl.seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  Sink sink(gl.out);
  sink.stream() << "# " << to_string(*family) << " seed=" << gl.seed << '\n';
  write_edge_list(sink.stream(), g);
  return kOk;
}

// ---- spr ------------------------------------------------------------------

struct SprArgs {
  std::string input;
  std::size_t trials = 1;
  bool trace = false;
  std::optional<double> b_override;
  bool rate = false;
  std::string minor_out;
  bool provenance = false;
};

int run_spr(const Globals& gl, const SprArgs& a) {
  const auto g = load(a.input);
  RunOptions opts;
  opts.inner.b_override = a.b_override;
  opts.inner.rate_interpretation = a.rate;
  opts.inner.check_invariants = true;
  const auto result = amplify(g, Algorithm::alg1, a.trials, gl.seed, opts);
  const auto best_seed = result.trials[result.best_index].seed;
  const auto best = run_trial(g, Algorithm::alg1, best_seed, opts);
  write_minor(a.minor_out, best.minor, a.provenance);

  if (gl.report == "csv") {
    Sink sink(gl.out);
    csv::trials(sink.stream(), result, {gl.timing});
  } else {
    json body = to_json(result, {gl.timing});
    body["num_vertices"] = g.num_vertices();
    body["num_terminals"] = g.num_terminals();
    if (a.trace) {
      Rng rng(best_seed);
      auto inner = opts.inner;
      inner.record_trace = true;
      const auto rescaled = g.num_terminals() < 2 ? RescaledGraph{g, 1.0} : rescale_to_unit_min(g);
      const auto traced = run_partition(rescaled.graph, rng, inner);
      body["trace"] = {{"scale", rescaled.scale}, {"b", traced.b}, {"steps", trace_json(traced)}};
    }
    emit_json(gl, "spr", std::move(body));
  }
  return all_sound(result) ? kOk : kViolation;
}

// ---- spr-general ----------------------------------------------------------

struct GeneralArgs {
  std::string input;
  double threshold = kDefaultThreshold;
  bool cubic = false;
  std::size_t trials = 1;
  std::string minor_out;
  bool provenance = false;
};

int run_general(const Globals& gl, const GeneralArgs& a) {
  const auto g = load(a.input);
  RunOptions opts;
  opts.threshold = a.threshold;
  if (a.cubic) {
    const auto cubic = cubic_threshold(g.num_terminals());
    if (!cubic) throw UsageError("2^(k^3) is not representable for k = " + std::to_string(g.num_terminals()));
    opts.threshold = *cubic;
  }
  opts.inner.check_invariants = true;
  const auto result = amplify(g, Algorithm::general, a.trials, gl.seed, opts);
  const auto best = run_trial(g, Algorithm::general, result.trials[result.best_index].seed, opts);
  write_minor(a.minor_out, best.minor, a.provenance);
  bool claims = true;
  for (const auto& l : best.levels) claims = claims && l.claims_hold();

  if (gl.report == "csv") {
    Sink sink(gl.out);
    csv::trials(sink.stream(), result, {gl.timing});
    sink.stream() << '\n';
    csv::levels(sink.stream(), best.levels);
  } else {
    json body = to_json(result, {gl.timing});
    body["threshold"] = a.threshold;
    body["levels"] = json::array();
    for (const auto& l : best.levels) body["levels"].push_back(to_json(l));
    emit_json(gl, "spr-general", std::move(body));
  }
  return all_sound(result) && claims ? kOk : kViolation;
}

// ---- decompose ------------------------------------------------------------

struct DecomposeArgs {
  std::string input;
  double delta = 0.0;
  std::size_t trials = 1000;
  std::size_t random_pairs = 50;
};

int run_decompose(const Globals& gl, const DecomposeArgs& a) {
  const auto g = load(a.input);
  if (!(a.delta > 0.0)) throw UsageError("--delta must be positive");
  if (a.trials == 0) throw UsageError("--trials must be at least 1");
  const auto stats = verify_decomposition(g, a.delta, a.trials, gl.seed, {.random_pairs = a.random_pairs});
  const auto checks = check_requirements(stats);
  if (gl.report == "csv") {
    Sink sink(gl.out);
    csv::decomposition(sink.stream(), stats, checks);
  } else {
    emit_json(gl, "decompose", to_json(stats, checks));
  }
  for (const auto& c : checks)
    if (!c.passed) return kViolation;
  return kOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string input;
  std::string partition;
  std::string minor_out;
  bool provenance = false;
};

int run_eval(const Globals& gl, const EvalArgs& a) {
  const auto g = load(a.input);
  std::ifstream pf(a.partition);
  if (!pf) throw UsageError("cannot read " + a.partition);
  PartialPartition part;
  try {
    part = read_partition(pf);
  } catch (const GraphError& e) {
    throw UsageError(e.what());
  }
  const auto check = validate_partition(g, part, true);
  json body;
  body["valid_partition"] = check.ok();
  if (!check.ok()) {
    body["violation"] = to_string(check.violation);
    body["message"] = check.message;
    if (gl.report == "csv") {
      Sink sink(gl.out);
      sink.stream() << "valid_partition,violation\n0," << to_string(check.violation) << '\n';
    } else {
      emit_json(gl, "eval", std::move(body));
    }
    return kViolation;
  }
  const auto minor = contract(g, part);
  write_minor(a.minor_out, minor, a.provenance);
  const auto d = distortion(g, minor);
  bool dominated = true;
  std::vector<std::vector<double>> stretch(d.stretch.size(), std::vector<double>(d.stretch.size()));
  for (std::size_t i = 0; i < d.stretch.size(); ++i)
    for (std::size_t j = 0; j < d.stretch.size(); ++j) {
      stretch[i][j] = d.stretch(i, j);
      if (i != j && d.stretch(i, j) < 1.0 - kStretchSlack) dominated = false;
    }
  if (gl.report == "csv") {
    Sink sink(gl.out);
    sink.stream() << "valid_partition,dominated,max_stretch\n1," << dominated << ',' << csv::number(d.max_stretch) << '\n';
  } else {
    body["dominated"] = dominated;
    body["max_stretch"] = d.max_stretch;
    body["stretch"] = stretch;
    body["minor"] = to_json(minor, a.provenance);
    emit_json(gl, "eval", std::move(body));
  }
  return dominated ? kOk : kViolation;
}

// ---- compare --------------------------------------------------------------

struct CompareArgs {
  std::string input;
  std::size_t trials = 32;
  std::string algorithm = "general";
  double threshold = kDefaultThreshold;
};

int run_compare(const Globals& gl, const CompareArgs& a) {
  const auto g = load(a.input);
  const auto alg = parse_algorithm(a.algorithm);
  if (!alg || *alg == Algorithm::baseline) throw UsageError("--algorithm must be alg1 or general");
  RunOptions opts;
  opts.threshold = a.threshold;
  const auto c = compare_baseline(g, a.trials, gl.seed, *alg, opts);
  if (gl.report == "csv") {
    Sink sink(gl.out);
    sink.stream() << "baseline_max_stretch,algorithm,best_max_stretch,ratio\n"
                  << csv::number(c.baseline.max_stretch) << ',' << to_string(*alg) << ','
                  << csv::number(c.algorithm.best_max_stretch) << ',' << csv::number(c.ratio) << '\n';
  } else {
    json body;
    body["baseline"] = to_json(c.baseline, {gl.timing});
    body["algorithm"] = to_json(c.algorithm, {gl.timing});
    body["ratio"] = c.ratio;
    emit_json(gl, "compare", std::move(body));
  }
  const bool sound = all_sound(c.algorithm) && c.baseline.ok() && c.baseline.valid_partition && c.baseline.dominated;
  return sound ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Terminal-minor construction and evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals gl;
  app.add_option("--seed", gl.seed, "master seed")->capture_default_str();
  app.add_option("--report", gl.report, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", gl.out, "output file (default stdout)");
  app.add_flag("--timing", gl.timing, "include wall_time in reports");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate an instance as an edge list");
  add_gen(*gen_cmd, gen);

  SprArgs spr;
  auto* spr_cmd = app.add_subcommand("spr", "ball-growing partition (bounded aspect ratio)");
  spr_cmd->add_option("--input", spr.input, "edge-list file, - for stdin")->required();
  spr_cmd->add_option("--trials", spr.trials, "independent trials; the best is kept")->check(CLI::PositiveNumber);
  spr_cmd->add_flag("--trace", spr.trace, "record the growth steps of the best trial");
  spr_cmd->add_option("--b-override", spr.b_override, "growth base")->check(CLI::PositiveNumber);
  spr_cmd->add_flag("--rate-interpretation", spr.rate, "use b^-i as the exponential mean");
  spr_cmd->add_option("--minor", spr.minor_out, "write the best minor here");
  spr_cmd->add_flag("--provenance", spr.provenance, "write the minor as JSON with edge provenance");

  GeneralArgs general;
  auto* gen2_cmd = app.add_subcommand("spr-general", "recursive partition for arbitrary aspect ratio");
  gen2_cmd->add_option("--input", general.input)->required();
  gen2_cmd->add_option("--threshold", general.threshold, "aspect ratio handled directly")->check(CLI::PositiveNumber);
  gen2_cmd->add_flag("--cubic-threshold", general.cubic, "use 2^(k^3) as the threshold")->excludes("--threshold");
  gen2_cmd->add_option("--trials", general.trials)->check(CLI::PositiveNumber);
  gen2_cmd->add_option("--minor", general.minor_out);
  gen2_cmd->add_flag("--provenance", general.provenance);

  DecomposeArgs decomp;
  auto* dec_cmd = app.add_subcommand("decompose", "Monte-Carlo check of ball carving");
  dec_cmd->add_option("--input", decomp.input)->required();
  dec_cmd->add_option("--delta", decomp.delta, "carving scale")->required();
  dec_cmd->add_option("--trials", decomp.trials)->capture_default_str();
  dec_cmd->add_option("--random-pairs", decomp.random_pairs)->capture_default_str();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "validate a partition and measure its stretch");
  eval_cmd->add_option("--input", eval.input)->required();
  eval_cmd->add_option("--partition", eval.partition, "partition file")->required();
  eval_cmd->add_option("--minor", eval.minor_out);
  eval_cmd->add_flag("--provenance", eval.provenance);

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "amplified algorithm against the nearest-terminal baseline");
  cmp_cmd->add_option("--input", cmp.input)->required();
  cmp_cmd->add_option("--trials", cmp.trials)->check(CLI::PositiveNumber)->capture_default_str();
  cmp_cmd->add_option("--algorithm", cmp.algorithm)->check(CLI::IsMember({"alg1", "general"}))->capture_default_str();
  cmp_cmd->add_option("--threshold", cmp.threshold)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gl, gen);
    if (*spr_cmd) return run_spr(gl, spr);
    if (*gen2_cmd) return run_general(gl, general);
    if (*dec_cmd) return run_decompose(gl, decomp);
    if (*eval_cmd) return run_eval(gl, eval);
    if (*cmp_cmd) return run_compare(gl, cmp);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "violation: " << e.what() << '\n';
    return kViolation;
  }
  return kUsage;
}
