#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sfft::bench {

enum class Algorithm { Dense, Sfft, Atsfft };

/// "dense" (or "dense-fft", "fft"), "sfft", "atsfft"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm a);

struct ExperimentSpec {
  std::vector<Algorithm> algorithms;
  std::vector<int> sizes;
  std::vector<int> sparsities;
  int trials = 100;
  std::uint64_t seed = 1;
  std::string out_path;       // informational; run_experiment does not write files
  bool include_setup = false;  // time window construction inside each run
  int threads = 1;             // internal threads of each transform
  int loops = 8;               // sfft location/estimation loops; atsfft estimation loops

  /// Throws std::invalid_argument for an empty or malformed spec.
  void validate() const;
};

struct ResultRow {
  Algorithm algorithm = Algorithm::Dense;
  int n = 0;
  int k = 0;
  int trial = 0;
  double wall_time_seconds = 0.0;
  double error_metric = 0.0;
  std::optional<int> detected_k;  // atsfft only
  std::optional<bool> converged;  // atsfft only
  std::optional<int> b_final;     // sparse transforms only
  std::string status = "ok";      // "ok", or a description of why the cell failed

  bool ok() const { return status == "ok"; }
  bool operator==(const ResultRow&) const = default;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::map<int, double> setup_seconds;  // window construction time per N
};

/// Seed of the planted signal for (N, k, trial); shared by all algorithms.
std::uint64_t signal_seed(std::uint64_t master, int n, int k, int trial);

using Progress = std::function<void(const ResultRow&)>;

/// Runs every (N, k, trial, algorithm) on the same planted signal per
/// (N, k, trial). One untimed warm-up run precedes each timed cell. Rows
/// come out ordered by N, k, trial, then algorithm in the order given.
ExperimentResult run_experiment(const ExperimentSpec& spec, const Progress& progress = {});

// CSV with a fixed header; doubles are written with 17 significant digits
// so parse(emit(rows)) == rows.
extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Throws std::runtime_error on a malformed header or row.
std::vector<ResultRow> read_csv(std::istream& in);

/// JSON sidecar with the ExperimentSpec, setup times and build environment.
std::string sidecar_json(const ExperimentSpec& spec, const ExperimentResult& result);

struct CellSummary {
  Algorithm algorithm = Algorithm::Dense;
  int n = 0;
  int k = 0;
  int rows = 0;     // all rows of the cell
  int ok_rows = 0;  // rows the aggregates are computed from
  double mean_time = 0.0;
  double median_time = 0.0;
  double mean_error = 0.0;
  double median_error = 0.0;
  std::optional<double> detection_rate;  // atsfft: fraction with detected_k == k
};

struct SpeedupEntry {
  std::string label;  // "atsfft/sfft": mean time of sfft over mean time of atsfft
  int n = 0;
  int k = 0;
  double value = 0.0;
};

struct Summary {
  std::vector<CellSummary> cells;
  std::vector<SpeedupEntry> speedups;
  const CellSummary* find(Algorithm a, int n, int k) const;
};

/// Per-(algorithm, N, k) aggregates over ok rows, and the three speedup
/// ratios for every (N, k) where both algorithms have ok rows. Throws
/// std::invalid_argument on an empty table.
Summary summarize(const std::vector<ResultRow>& rows);

/// Long-form CSV: table,algorithm,N,k,value.
void write_summary_csv(std::ostream& out, const Summary& s);
/// Text tables: runtime, speedup (one column per ratio, rows by N, blocks
/// by k), error (one column per algorithm) and detection rate.
void write_summary_table(std::ostream& out, const Summary& s);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Oracle and identity checks behind `bench verify`.
std::vector<CheckResult> run_verify_suite(std::uint64_t seed = 2024);

/// SFFT_THREADS if set to a positive integer, else `fallback`.
int threads_from_env(int fallback = 1);

}  // namespace sfft::bench
