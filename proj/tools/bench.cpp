// bench: runtime and accuracy experiments for the 2D sparse FFTs.
//
//   bench run --algos sfft,atsfft,dense --sizes 256,512 --sparsities 2,8 \
//             --trials 20 --seed 7 --out results.csv
//   bench summarize results.csv --format table|csv
//   bench verify
//   bench signal --size 256 --sparsity 8 --seed 7 --out signal.sf2d
//
// SFFT_THREADS sets the internal thread count of each transform.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfft/bench.hpp"
#include "sfft/signal.hpp"

namespace {

using namespace sfft::bench;

int cmd_run(const ExperimentSpec& spec_in, bool quiet) {
  ExperimentSpec spec = spec_in;
  spec.validate();
  std::ofstream csv(spec.out_path);
  if (!csv) {
    std::cerr << "bench: cannot write " << spec.out_path << "\n";
    return 2;
  }
  int failed = 0;
  const ExperimentResult result = run_experiment(spec, [&](const ResultRow& r) {
    if (!r.ok()) ++failed;
    if (!quiet && r.trial + 1 == spec.trials) {
      std::fprintf(stderr, "done %-6s N=%-5d k=%-4d (%d trials)\n", algorithm_name(r.algorithm).c_str(), r.n, r.k,
                   spec.trials);
    }
  });
  write_csv(csv, result.rows);
  std::ofstream(spec.out_path + ".json") << sidecar_json(spec, result);
  if (!quiet) {
    std::fprintf(stderr, "wrote %zu rows to %s (%d infeasible)\n", result.rows.size(), spec.out_path.c_str(), failed);
  }
  return 0;
}

int cmd_summarize(const std::string& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "bench: cannot read " << path << "\n";
    return 2;
  }
  const Summary s = summarize(read_csv(in));
  if (format == "csv") {
    write_summary_csv(std::cout, s);
  } else {
    write_summary_table(std::cout, s);
  }
  return 0;
}

int cmd_verify() {
  int failures = 0;
  for (const CheckResult& c : run_verify_suite()) {
    std::printf("%s  %s (%s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    if (!c.passed) ++failures;
  }
  std::printf("%d check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}

int cmd_signal(int n, int k, std::uint64_t seed, const std::string& path) {
  const sfft::PlantedSignal s = sfft::generate_planted(n, k, seed);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "bench: cannot write " << path << "\n";
    return 2;
  }
  sfft::write_signal(out, s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmarks for the 2D sparse FFTs"};
  app.require_subcommand(1);

  ExperimentSpec spec;
  std::vector<std::string> algos{"sfft", "atsfft", "dense"};
  bool quiet = false;
  spec.sizes = {256, 512, 1024};
  spec.sparsities = {2, 8, 32};
  spec.threads = threads_from_env(1);
  auto* run = app.add_subcommand("run", "Run an experiment grid and write CSV plus a JSON sidecar");
  run->add_option("--algos", algos, "Comma-separated: sfft, atsfft, dense")->delimiter(',');
  run->add_option("--sizes", spec.sizes, "Comma-separated signal sides N (powers of 2)")->delimiter(',');
  run->add_option("--sparsities", spec.sparsities, "Comma-separated sparsities k")->delimiter(',');
  run->add_option("--trials", spec.trials, "Trials per cell")->capture_default_str();
  run->add_option("--seed", spec.seed, "Master seed")->capture_default_str();
  run->add_option("--out", spec.out_path, "Output CSV path")->required();
  run->add_option("--loops", spec.loops, "SFFT loops and ATSFFT estimation loops")->capture_default_str();
  run->add_option("--threads", spec.threads, "Threads per transform (default: SFFT_THREADS or 1)");
  run->add_flag("--include-setup", spec.include_setup, "Include window construction in each timing");
  run->add_flag("-q,--quiet", quiet, "No progress output");

  std::string summary_path;
  std::string format = "table";
  auto* summ = app.add_subcommand("summarize", "Aggregate a results CSV");
  summ->add_option("results", summary_path, "Results CSV")->required();
  summ->add_option("--format", format, "table or csv")->check(CLI::IsMember({"table", "csv"}))->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run the oracle and identity checks");

  int sig_n = 256, sig_k = 8;
  std::uint64_t sig_seed = 1;
  std::string sig_path;
  auto* sig = app.add_subcommand("signal", "Write a planted signal in the binary signal format");
  sig->add_option("--size", sig_n, "Side N")->capture_default_str();
  sig->add_option("--sparsity", sig_k, "Sparsity k")->capture_default_str();
  sig->add_option("--seed", sig_seed, "Seed")->capture_default_str();
  sig->add_option("--out", sig_path, "Output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      spec.algorithms.clear();
      for (const std::string& a : algos) spec.algorithms.push_back(parse_algorithm(a));
      return cmd_run(spec, quiet);
    }
    if (*summ) return cmd_summarize(summary_path, format);
    if (*verify) return cmd_verify();
    if (*sig) return cmd_signal(sig_n, sig_k, sig_seed, sig_path);
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
