// Command-line front end: generate instances, run the distance estimator and
// sparsity tester, compute exact ground truth, and drive batch experiments.
// Single-run records are printed as JSON on stdout; experiments write CSV.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffst/estimator.hpp"
#include "ffst/exact.hpp"
#include "ffst/instances.hpp"
#include "ffst/io.hpp"
#include "ffst/parallel.hpp"

namespace {

using nlohmann::json;

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// CSV files carry a header row, one row per trial, and a final summary row.
// No timing columns, so a fixed seed reproduces the file byte for byte.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> columns)
      : columns_(std::move(columns)) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write csv: " + path);
    }
    std::string head;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) head += ',';
      head += columns_[i];
    }
    line(head);
  }

  void row(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    line(s);
  }

 private:
  void line(const std::string& s) {
    if (file_.is_open()) {
      file_ << s << '\n';
    } else {
      std::cout << s << '\n';
    }
  }

  std::vector<std::string> columns_;
  std::ofstream file_;
};

struct EstimateFlags {
  std::string input;
  long s = 1;
  double eps = 0.25;
  double delta = 1.0 / 3;
  double norm = 1.0;
  long measure_norm = 0;
  std::uint64_t seed = 0;
  double gamma_mult = 4.0;
  std::optional<int> ell;
  std::optional<int> reps;
  std::optional<int> d_override;
};

void add_estimate_flags(CLI::App* cmd, EstimateFlags& f, bool require_norm) {
  cmd->add_option("--input", f.input, "function file (JSON)")->required();
  cmd->add_option("--s", f.s, "target sparsity")->required();
  cmd->add_option("--eps", f.eps, "additive accuracy in (0,1]")->required();
  cmd->add_option("--delta", f.delta, "failure probability");
  auto* norm_opt = cmd->add_option("--norm", f.norm, "known squared norm of f");
  auto* measure_opt = cmd->add_option(
      "--measure-norm", f.measure_norm,
      "estimate the squared norm from this many extra queries");
  cmd->add_option("--seed", f.seed, "rng seed");
  cmd->add_option("--gamma-mult", f.gamma_mult, "sample-count multiplier");
  cmd->add_option("--ell", f.ell, "override repetition count (odd)");
  cmd->add_option("--reps", f.reps, "override amplification runs (odd)");
  cmd->add_option("--d-override", f.d_override, "override bucket codimension");
  if (require_norm) {
    // The tester needs a known norm: exactly one of the two sources.
    norm_opt->excludes(measure_opt);
    cmd->callback([norm_opt, measure_opt] {
      if (norm_opt->count() == 0 && measure_opt->count() == 0) {
        throw CLI::ValidationError(
            "test", "either --norm or --measure-norm is required");
      }
    });
  }
}

ffst::EstimatorParams params_from_flags(const EstimateFlags& f) {
  ffst::EstimatorParams p;
  p.s = f.s;
  p.eps = f.eps;
  p.delta = f.delta;
  p.c_gamma = f.gamma_mult;
  p.known_norm = f.norm;
  p.ell_override = f.ell;
  p.r_override = f.reps;
  p.d_override = f.d_override;
  return p;
}

json derived_json(const ffst::DerivedParams& d) {
  return json{{"d", d.d}, {"gamma", d.gamma}, {"ell", d.ell}, {"r", d.r}};
}

int cmd_gen(const std::string& kind, int n, long s, double rho,
            std::uint64_t seed, const std::string& output) {
  json record;
  record["command"] = "gen";
  record["kind"] = kind;
  record["seed"] = seed;
  record["output"] = output;

  ffst::InstanceMeta meta;
  meta.kind = kind;
  meta.n = n;
  meta.s = s;
  meta.rho = rho;
  meta.seed = seed;

  if (kind == "sparse") {
    auto inst = ffst::gen_sparse(n, s, seed);
    meta.exact_distance = inst.exact_distance;
    ffst::save_function(inst.oracle, output);
  } else if (kind == "noisy-sparse") {
    auto inst = ffst::gen_noisy_sparse(n, s, rho, seed);
    meta.exact_distance = inst.exact_distance;
    ffst::save_function(inst.oracle, output);
  } else if (kind == "flat") {
    auto inst = ffst::gen_flat(n, seed);
    meta.s = 0;
    meta.exact_distance = std::numeric_limits<double>::quiet_NaN();
    ffst::save_function(inst.oracle, output);
  } else if (kind == "dyes") {
    auto inst = ffst::gen_dyes(n, s, seed);
    meta.exact_distance = 0.0;
    ffst::save_function(inst.oracle, output);
  } else if (kind == "dno") {
    auto inst = ffst::gen_dno(n, seed);
    meta.s = 0;
    meta.exact_distance = std::numeric_limits<double>::quiet_NaN();
    ffst::save_function(inst.oracle, output);
  } else if (kind == "dense-gaussian") {
    auto inst = ffst::gen_dense_gaussian(n, seed);
    meta.s = 0;
    meta.exact_distance = std::numeric_limits<double>::quiet_NaN();
    ffst::save_function(inst.oracle, output);
  } else {
    throw std::invalid_argument("gen: unknown kind \"" + kind + "\"");
  }

  const std::string meta_path = ffst::meta_path_for(output);
  ffst::save_instance_meta(meta, meta_path);
  record["meta"] = meta_path;
  std::cout << record.dump() << '\n';
  return 0;
}

int cmd_estimate(const EstimateFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  ffst::FunctionOracle oracle = ffst::load_function(flags.input);
  ffst::QueryLedger ledger;
  ffst::EstimatorParams params = params_from_flags(flags);
  if (flags.measure_norm > 0) {
    ffst::Rng norm_rng(ffst::substream_seed(flags.seed, 0xFFF));
    params.known_norm =
        ffst::estimate_squared_norm(oracle, ledger, flags.measure_norm, norm_rng);
  }
  const auto report =
      ffst::estimate_distance_report(oracle, ledger, params, flags.seed);

  json record;
  record["command"] = "estimate";
  record["params"] = {{"input", flags.input},   {"n", oracle.n()},
                      {"s", params.s},          {"eps", params.eps},
                      {"delta", params.delta},  {"norm", params.known_norm},
                      {"seed", flags.seed},     {"derived", derived_json(report.params)}};
  record["outputs"] = {{"xi", report.xi_final},
                       {"distance", report.distance},
                       {"queries_used", ledger.count()}};
  record["wall_time_s"] = elapsed_seconds(t0);
  std::cout << record.dump() << '\n';
  return 0;
}

int cmd_test(const EstimateFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  ffst::FunctionOracle oracle = ffst::load_function(flags.input);
  ffst::QueryLedger ledger;
  ffst::EstimatorParams params = params_from_flags(flags);
  if (flags.measure_norm > 0) {
    ffst::Rng norm_rng(ffst::substream_seed(flags.seed, 0xFFF));
    params.known_norm =
        ffst::estimate_squared_norm(oracle, ledger, flags.measure_norm, norm_rng);
  }
  const auto verdict = ffst::ffst_test(oracle, ledger, params, flags.seed);

  json record;
  record["command"] = "test";
  record["params"] = {{"input", flags.input},  {"n", oracle.n()},
                      {"s", params.s},         {"eps", params.eps},
                      {"delta", params.delta}, {"norm", params.known_norm},
                      {"seed", flags.seed}};
  record["outputs"] = {{"accept", verdict.accept},
                       {"xi", verdict.xi},
                       {"threshold", verdict.threshold},
                       {"queries_used", ledger.count()}};
  record["wall_time_s"] = elapsed_seconds(t0);
  std::cout << record.dump() << '\n';
  return 0;
}

int cmd_exact(const std::string& input, long s, std::optional<int> hash_d,
              std::uint64_t hash_seed) {
  ffst::FunctionOracle oracle = ffst::load_function(input);
  const ffst::RankedSpectrum ranked = ffst::exact_spectrum(oracle);
  const double norm_sq = ffst::squared_norm_exact(oracle);
  const double top = ffst::exact_top_s_energy(ranked, s);

  json record;
  record["command"] = "exact";
  record["params"] = {{"input", input}, {"n", oracle.n()}, {"s", s}};
  record["outputs"] = {{"norm_sq", norm_sq},
                       {"top_s_energy", top},
                       {"exact_distance", std::clamp(norm_sq - top, 0.0, norm_sq)}};
  if (hash_d) {
    ffst::Rng rng(hash_seed);
    const auto hash = ffst::CosetHash::sample(*hash_d, oracle.n(), rng);
    record["outputs"]["hash_d"] = *hash_d;
    record["outputs"]["hash_seed"] = hash_seed;
    record["outputs"]["hashing_error"] = ffst::exact_hashing_error(ranked, hash, s);
  }
  std::cout << record.dump() << '\n';
  return 0;
}

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stol(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

struct ExperimentFlags {
  int n = 10;
  std::string s_list = "8";
  double eps = 0.25;
  double delta = 1.0 / 3;
  long q = 4;
  long trials = 1;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::string rule = "norm";
  std::string output;
};

int experiment_query_scaling(const ExperimentFlags& f) {
  const auto s_values = parse_long_list(f.s_list);
  const auto base = ffst::gen_dense_gaussian(f.n, ffst::substream_seed(f.seed, 0));
  CsvWriter csv(f.output, {"trial", "s", "d", "gamma", "ell", "r",
                           "queries_predicted", "queries_used", "xi", "distance"});
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    ffst::EstimatorParams p;
    p.s = s_values[i];
    p.eps = f.eps;
    p.delta = f.delta;
    ffst::QueryLedger ledger;
    const auto rep = ffst::estimate_distance_report(
        base.oracle, ledger, p, ffst::substream_seed(f.seed, 1 + i));
    const std::uint64_t predicted = 2ULL *
                                    static_cast<std::uint64_t>(rep.params.gamma) *
                                    rep.params.ell * rep.params.r;
    total += ledger.count();
    csv.row({std::to_string(i), std::to_string(s_values[i]),
             std::to_string(rep.params.d), std::to_string(rep.params.gamma),
             std::to_string(rep.params.ell), std::to_string(rep.params.r),
             std::to_string(predicted), std::to_string(ledger.count()),
             fmt_number(rep.xi_final), fmt_number(rep.distance)});
  }
  csv.row({"summary", "", "", "", "", "", "", std::to_string(total), "", ""});
  return 0;
}

int experiment_hashing_error(const ExperimentFlags& f) {
  const long s = parse_long_list(f.s_list).front();
  const auto inst = ffst::gen_flat(f.n, ffst::substream_seed(f.seed, 0));
  const auto ranked = ffst::exact_spectrum(inst.oracle);
  const double e4 = std::pow(f.eps, 4.0);
  const int d = std::min(
      f.n, static_cast<int>(std::ceil(std::log2(std::max(2.0, 2.0 * s / e4)))));
  const double bound = 5.0 * f.eps * f.eps;

  CsvWriter csv(f.output, {"trial", "err", "bound", "within"});
  std::vector<double> errs(static_cast<std::size_t>(f.trials));
  ffst::parallel_for(static_cast<std::size_t>(f.trials), f.jobs, [&](std::size_t i) {
    ffst::Rng rng(ffst::substream_seed(f.seed, 1 + i));
    const auto hash = ffst::CosetHash::sample(d, f.n, rng);
    errs[i] = ffst::exact_hashing_error(ranked, hash, s);
  });
  long within = 0;
  for (long i = 0; i < f.trials; ++i) {
    const bool ok = errs[static_cast<std::size_t>(i)] <= bound;
    within += ok;
    csv.row({std::to_string(i), fmt_number(errs[static_cast<std::size_t>(i)]),
             fmt_number(bound), ok ? "1" : "0"});
  }
  csv.row({"summary", "", "",
           fmt_number(static_cast<double>(within) / static_cast<double>(f.trials))});
  return 0;
}

int experiment_mse(const ExperimentFlags& f) {
  const long s = parse_long_list(f.s_list).front();
  const auto inst = ffst::gen_dense_gaussian(f.n, ffst::substream_seed(f.seed, 0));
  ffst::Rng hash_rng(ffst::substream_seed(f.seed, 1));
  const double e4 = std::pow(f.eps, 4.0);
  const int d = std::min(
      f.n, static_cast<int>(std::ceil(std::log2(std::max(2.0, 2.0 * s / e4)))));
  const auto hash = ffst::CosetHash::sample(d, f.n, hash_rng);
  const auto exact = ffst::exact_bucket_energies(
      ffst::wht_forward(*inst.oracle.dense_table()), hash);
  const long gamma = static_cast<long>(std::ceil(4.0 * s / e4));

  CsvWriter csv(f.output, {"trial", "mse"});
  std::vector<double> mses(static_cast<std::size_t>(f.trials));
  ffst::parallel_for(static_cast<std::size_t>(f.trials), f.jobs, [&](std::size_t i) {
    ffst::QueryLedger ledger;
    const auto medians = ffst::estimate_bucket_medians(
        inst.oracle, ledger, hash, gamma, 1, ffst::substream_seed(f.seed, 2 + i));
    double sum = 0.0;
    for (std::size_t t = 0; t < medians.size(); ++t) {
      const double diff = medians[t] - exact[t];
      sum += diff * diff;
    }
    mses[i] = sum / static_cast<double>(medians.size());
  });
  double mean = 0.0;
  for (long i = 0; i < f.trials; ++i) {
    mean += mses[static_cast<std::size_t>(i)];
    csv.row({std::to_string(i), fmt_number(mses[static_cast<std::size_t>(i)])});
  }
  mean /= static_cast<double>(f.trials);
  csv.row({"summary", fmt_number(mean)});
  std::cerr << "mean mse " << mean << " vs bound " << 2.0 * e4 / s << '\n';
  return 0;
}

int experiment_lower_bound(const ExperimentFlags& f) {
  const long s = parse_long_list(f.s_list).front();
  ffst::DecisionRule rule;
  if (f.rule == "norm") {
    rule = ffst::norm_threshold_rule(1.0);
  } else if (f.rule == "exact") {
    rule = ffst::exact_sparsity_rule(f.n, s);
  } else {
    throw std::invalid_argument("lower-bound: unknown rule \"" + f.rule + "\"");
  }
  const auto outcome =
      ffst::distinguishing_experiment(f.n, s, f.q, f.trials, rule, f.seed);

  CsvWriter csv(f.output, {"trial", "yes_accept", "no_accept"});
  for (long i = 0; i < f.trials; ++i) {
    csv.row({std::to_string(i),
             outcome.yes_accept[static_cast<std::size_t>(i)] ? "1" : "0",
             outcome.no_accept[static_cast<std::size_t>(i)] ? "1" : "0"});
  }
  csv.row({"summary", fmt_number(outcome.advantage), ""});
  return 0;
}

int experiment_estimate_accuracy(const ExperimentFlags& f) {
  const long s = parse_long_list(f.s_list).front();
  CsvWriter csv(f.output,
                {"trial", "exact_distance", "estimated", "error", "within_eps"});
  struct Row {
    double exact, est;
  };
  std::vector<Row> rows(static_cast<std::size_t>(f.trials));
  ffst::parallel_for(static_cast<std::size_t>(f.trials), f.jobs, [&](std::size_t i) {
    const auto inst =
        ffst::gen_dense_gaussian(f.n, ffst::substream_seed(f.seed, 2 * i));
    ffst::EstimatorParams p;
    p.s = s;
    p.eps = f.eps;
    p.delta = f.delta;
    ffst::QueryLedger ledger;
    rows[i].exact = ffst::exact_distance_to_sparsity(inst.oracle, s);
    rows[i].est = ffst::estimate_distance(inst.oracle, ledger, p,
                                          ffst::substream_seed(f.seed, 2 * i + 1));
  });
  long within = 0;
  for (long i = 0; i < f.trials; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    const double err = std::abs(r.est - r.exact);
    const bool ok = err <= f.eps;
    within += ok;
    csv.row({std::to_string(i), fmt_number(r.exact), fmt_number(r.est),
             fmt_number(err), ok ? "1" : "0"});
  }
  csv.row({"summary", "", "", "",
           fmt_number(static_cast<double>(within) / static_cast<double>(f.trials))});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-spectrum distance estimation and testing on the Boolean cube"};
  app.require_subcommand(1);

  // gen
  std::string gen_kind, gen_output = "function.json";
  int gen_n = 10;
  long gen_s = 8;
  double gen_rho = 0.0;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("kind", gen_kind,
                  "sparse | noisy-sparse | flat | dyes | dno | dense-gaussian")
      ->required();
  gen->add_option("--n", gen_n, "dimension")->required();
  gen->add_option("--s", gen_s, "sparsity (where applicable)");
  gen->add_option("--rho", gen_rho, "noise mass for noisy-sparse");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--output", gen_output, "function file to write")->required();

  // estimate / test
  EstimateFlags est_flags, test_flags;
  auto* est = app.add_subcommand("estimate", "estimate distance to s-sparsity");
  add_estimate_flags(est, est_flags, /*require_norm=*/false);
  auto* tst = app.add_subcommand("test", "accept/reject s-sparsity");
  add_estimate_flags(tst, test_flags, /*require_norm=*/true);

  // exact
  std::string exact_input;
  long exact_s = 1;
  std::optional<int> exact_hash_d;
  std::uint64_t exact_hash_seed = 0;
  auto* exa = app.add_subcommand("exact", "brute-force ground truth");
  exa->add_option("--input", exact_input, "function file (JSON)")->required();
  exa->add_option("--s", exact_s, "sparsity")->required();
  exa->add_option("--hash-d", exact_hash_d, "also report hashing error at this codimension");
  exa->add_option("--hash-seed", exact_hash_seed, "seed for the hash draw");

  // experiment
  ExperimentFlags exp_flags;
  std::string exp_name;
  auto* exp = app.add_subcommand("experiment", "batch experiment with CSV output");
  exp->add_option("name", exp_name,
                  "query-scaling | hashing-error | mse | lower-bound | estimate-accuracy")
      ->required();
  exp->add_option("--n", exp_flags.n, "dimension");
  exp->add_option("--s", exp_flags.s_list, "sparsity (comma list for query-scaling)");
  exp->add_option("--eps", exp_flags.eps, "accuracy");
  exp->add_option("--delta", exp_flags.delta, "failure probability");
  exp->add_option("--q", exp_flags.q, "query budget (lower-bound)");
  exp->add_option("--trials", exp_flags.trials, "trial count")
      ->check(CLI::PositiveNumber);
  exp->add_option("--jobs", exp_flags.jobs, "worker threads");
  exp->add_option("--seed", exp_flags.seed, "rng seed");
  exp->add_option("--rule", exp_flags.rule, "decision rule: norm | exact");
  exp->add_option("--output", exp_flags.output, "csv file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_gen(gen_kind, gen_n, gen_s, gen_rho, gen_seed, gen_output);
    }
    if (est->parsed()) return cmd_estimate(est_flags);
    if (tst->parsed()) return cmd_test(test_flags);
    if (exa->parsed()) {
      return cmd_exact(exact_input, exact_s, exact_hash_d, exact_hash_seed);
    }
    if (exp->parsed()) {
      if (exp_name == "query-scaling") return experiment_query_scaling(exp_flags);
      if (exp_name == "hashing-error") return experiment_hashing_error(exp_flags);
      if (exp_name == "mse") return experiment_mse(exp_flags);
      if (exp_name == "lower-bound") return experiment_lower_bound(exp_flags);
      if (exp_name == "estimate-accuracy") {
        return experiment_estimate_accuracy(exp_flags);
      }
      throw std::invalid_argument("unknown experiment \"" + exp_name + "\"");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
