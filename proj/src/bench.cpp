#include "sfft/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "sfft/atsfft.hpp"
#include "sfft/fft.hpp"
#include "sfft/random.hpp"
#include "sfft/sfft.hpp"
#include "sfft/signal.hpp"

namespace sfft::bench {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "dense" || name == "dense-fft" || name == "fft") return Algorithm::Dense;
  if (name == "sfft") return Algorithm::Sfft;
  if (name == "atsfft") return Algorithm::Atsfft;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected dense, sfft or atsfft)");
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Dense:
      return "dense";
    case Algorithm::Sfft:
      return "sfft";
    case Algorithm::Atsfft:
      return "atsfft";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  if (algorithms.empty()) throw std::invalid_argument("experiment: no algorithms");
  if (sizes.empty()) throw std::invalid_argument("experiment: no sizes");
  if (sparsities.empty()) throw std::invalid_argument("experiment: no sparsities");
  for (int n : sizes) {
    if (n < 2 || !is_power_of_two(n)) throw std::invalid_argument("experiment: size " + std::to_string(n) + " is not a power of 2 >= 2");
  }
  for (int k : sparsities) {
    if (k < 0) throw std::invalid_argument("experiment: negative sparsity");
  }
  if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (threads < 1) throw std::invalid_argument("experiment: threads must be >= 1");
  if (loops < 1) throw std::invalid_argument("experiment: loops must be >= 1");
}

std::uint64_t signal_seed(std::uint64_t master, int n, int k, int trial) {
  return derive_seed(derive_seed(master, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)),
                     0x5167, static_cast<std::uint64_t>(trial));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

struct Runner {
  const ExperimentSpec& spec;
  WindowCache& cache;

  ResultRow run(Algorithm algo, const PlantedSignal& sig, int n, int k, int trial) const {
    ResultRow row;
    row.algorithm = algo;
    row.n = n;
    row.k = k;
    row.trial = trial;
    const std::uint64_t seed = derive_seed(sig.seed, 100 + static_cast<std::uint64_t>(algo));
    try {
      switch (algo) {
        case Algorithm::Dense: {
          const auto start = Clock::now();
          const ComplexMatrix full = fft2d(sig.x, spec.threads);
          row.wall_time_seconds = seconds_since(start);
          SparseSpectrum on_support(n);
          for (const auto& [c, v] : sig.truth) on_support.set(c, full(c.i, c.j));
          row.error_metric = error_metric(on_support, sig.truth, k);
          break;
        }
        case Algorithm::Sfft: {
          SfftConfig cfg;
          cfg.n = n;
          cfg.k = k;
          cfg.loops = spec.loops;
          cfg.threads = spec.threads;
          cfg.validate();
          std::unique_ptr<WindowCache> fresh;
          if (spec.include_setup) fresh = std::make_unique<WindowCache>(cache.delta_stop());
          const auto start = Clock::now();
          const SparseSpectrum out = sfft2d(sig.x, cfg, seed, fresh ? fresh.get() : &cache);
          row.wall_time_seconds = seconds_since(start);
          row.error_metric = error_metric(out, sig.truth, k);
          row.b_final = cfg.resolved_bins();
          break;
        }
        case Algorithm::Atsfft: {
          TunerConfig cfg;
          cfg.threads = spec.threads;
          std::unique_ptr<WindowCache> fresh;
          if (spec.include_setup) fresh = std::make_unique<WindowCache>(cache.delta_stop());
          const auto start = Clock::now();
          const AtsfftResult out = atsfft2d(sig.x, cfg, spec.loops, seed, fresh ? fresh.get() : &cache);
          row.wall_time_seconds = seconds_since(start);
          row.error_metric = error_metric(out.spectrum, sig.truth, k);
          row.detected_k = out.state.detected_k;
          row.converged = out.state.converged;
          row.b_final = out.state.final_bins;
          break;
        }
      }
    } catch (const std::invalid_argument& e) {
      row.status = one_line(std::string("infeasible: ") + e.what());
      row.wall_time_seconds = 0.0;
      row.error_metric = 0.0;
    }
    return row;
  }
};

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const Progress& progress) {
  spec.validate();
  ExperimentResult result;
  const bool sparse = std::any_of(spec.algorithms.begin(), spec.algorithms.end(),
                                  [](Algorithm a) { return a != Algorithm::Dense; });
  for (int n : spec.sizes) {
    WindowCache cache;
    if (sparse) {
      const auto start = Clock::now();
      cache.prewarm(n);
      result.setup_seconds[n] = seconds_since(start);
    }
    const Runner runner{spec, cache};
    for (int k : spec.sparsities) {
      const auto cells = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
      if (static_cast<std::uint64_t>(k) > cells) {
        for (int trial = 0; trial < spec.trials; ++trial) {
          for (Algorithm algo : spec.algorithms) {
            ResultRow row;
            row.algorithm = algo;
            row.n = n;
            row.k = k;
            row.trial = trial;
            row.status = "infeasible: k exceeds N^2";
            result.rows.push_back(row);
            if (progress) progress(row);
          }
        }
        continue;
      }
      std::set<Algorithm> warmed;
      for (int trial = 0; trial < spec.trials; ++trial) {
        const PlantedSignal sig = generate_planted(n, k, signal_seed(spec.seed, n, k, trial));
        for (Algorithm algo : spec.algorithms) {
          if (warmed.insert(algo).second) (void)runner.run(algo, sig, n, k, trial);
          result.rows.push_back(runner.run(algo, sig, n, k, trial));
          if (progress) progress(result.rows.back());
        }
      }
    }
  }
  return result;
}

const char* const kCsvHeader =
    "algorithm,N,k,trial,wall_time_seconds,error_metric,detected_k,converged,B_final,status";

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

int parse_int(const std::string& s, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw std::runtime_error(std::string("csv: bad ") + what + " '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const char* what) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::runtime_error(std::string("csv: bad ") + what + " '" + s + "'");
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    out << algorithm_name(r.algorithm) << ',' << r.n << ',' << r.k << ',' << r.trial << ','
        << fmt_double(r.wall_time_seconds) << ',' << fmt_double(r.error_metric) << ',';
    if (r.detected_k) out << *r.detected_k;
    out << ',';
    if (r.converged) out << (*r.converged ? 1 : 0);
    out << ',';
    if (r.b_final) out << *r.b_final;
    out << ',' << one_line(r.status) << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) throw std::runtime_error("csv: expected 10 fields in '" + line + "'");
    ResultRow r;
    try {
      r.algorithm = parse_algorithm(f[0]);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string("csv: ") + e.what());
    }
    r.n = parse_int(f[1], "N");
    r.k = parse_int(f[2], "k");
    r.trial = parse_int(f[3], "trial");
    r.wall_time_seconds = parse_double(f[4], "wall_time_seconds");
    r.error_metric = parse_double(f[5], "error_metric");
    if (!f[6].empty()) r.detected_k = parse_int(f[6], "detected_k");
    if (!f[7].empty()) {
      if (f[7] != "0" && f[7] != "1") throw std::runtime_error("csv: bad converged '" + f[7] + "'");
      r.converged = f[7] == "1";
    }
    if (!f[8].empty()) r.b_final = parse_int(f[8], "B_final");
    r.status = f[9];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string sidecar_json(const ExperimentSpec& spec, const ExperimentResult& result) {
  nlohmann::ordered_json j;
  std::vector<std::string> algos;
  for (Algorithm a : spec.algorithms) algos.push_back(algorithm_name(a));
  j["spec"] = {{"algorithms", algos},
               {"sizes", spec.sizes},
               {"sparsities", spec.sparsities},
               {"trials", spec.trials},
               {"seed", spec.seed},
               {"loops", spec.loops},
               {"threads", spec.threads},
               {"include_setup", spec.include_setup},
               {"out", spec.out_path}};
  nlohmann::ordered_json setup = nlohmann::ordered_json::object();
  for (const auto& [n, s] : result.setup_seconds) setup[std::to_string(n)] = s;
  j["window_setup_seconds"] = setup;
  j["timing"] = spec.include_setup ? "window construction included in each run"
                                   : "window construction excluded (see window_setup_seconds)";
  j["environment"] = {{"compiler", __VERSION__},
                      {"cplusplus", static_cast<long>(__cplusplus)},
#ifdef NDEBUG
                      {"assertions", false},
#else
                      {"assertions", true},
#endif
                      {"hardware_concurrency", std::thread::hardware_concurrency()}};
  j["rows"] = result.rows.size();
  return j.dump(2) + "\n";
}

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

const CellSummary* Summary::find(Algorithm a, int n, int k) const {
  for (const CellSummary& c : cells) {
    if (c.algorithm == a && c.n == n && c.k == k) return &c;
  }
  return nullptr;
}

Summary summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("summarize: empty result table");
  std::map<std::tuple<int, int, Algorithm>, std::vector<const ResultRow*>> groups;
  for (const ResultRow& r : rows) groups[{r.n, r.k, r.algorithm}].push_back(&r);

  Summary s;
  for (const auto& [key, members] : groups) {
    CellSummary c;
    std::tie(c.n, c.k, c.algorithm) = key;
    c.rows = static_cast<int>(members.size());
    std::vector<double> times;
    std::vector<double> errors;
    int detected = 0;
    for (const ResultRow* r : members) {
      if (!r->ok()) continue;
      times.push_back(r->wall_time_seconds);
      errors.push_back(r->error_metric);
      if (r->detected_k && *r->detected_k == r->k) ++detected;
    }
    c.ok_rows = static_cast<int>(times.size());
    if (c.ok_rows > 0) {
      c.mean_time = mean_of(times);
      c.median_time = median_sorted(times);
      c.mean_error = mean_of(errors);
      c.median_error = median_sorted(errors);
      if (c.algorithm == Algorithm::Atsfft) c.detection_rate = static_cast<double>(detected) / c.ok_rows;
    }
    s.cells.push_back(c);
  }

  const std::tuple<const char*, Algorithm, Algorithm> ratios[] = {
      {"atsfft/sfft", Algorithm::Atsfft, Algorithm::Sfft},
      {"sfft/dense", Algorithm::Sfft, Algorithm::Dense},
      {"atsfft/dense", Algorithm::Atsfft, Algorithm::Dense},
  };
  std::set<std::pair<int, int>> nk;
  for (const CellSummary& c : s.cells) nk.insert({c.n, c.k});
  for (const auto& [label, fast, base] : ratios) {
    for (const auto& [n, k] : nk) {
      const CellSummary* a = s.find(fast, n, k);
      const CellSummary* b = s.find(base, n, k);
      if (a == nullptr || b == nullptr || a->ok_rows == 0 || b->ok_rows == 0 || a->mean_time <= 0.0) continue;
      s.speedups.push_back({label, n, k, b->mean_time / a->mean_time});
    }
  }
  return s;
}

void write_summary_csv(std::ostream& out, const Summary& s) {
  out << "table,algorithm,N,k,value\n";
  auto line = [&](const char* table, const std::string& algo, int n, int k, double v) {
    out << table << ',' << algo << ',' << n << ',' << k << ',' << fmt_double(v) << '\n';
  };
  for (const CellSummary& c : s.cells) {
    const std::string a = algorithm_name(c.algorithm);
    line("rows", a, c.n, c.k, c.rows);
    line("ok_rows", a, c.n, c.k, c.ok_rows);
    if (c.ok_rows == 0) continue;
    line("mean_time", a, c.n, c.k, c.mean_time);
    line("median_time", a, c.n, c.k, c.median_time);
    line("mean_error", a, c.n, c.k, c.mean_error);
    line("median_error", a, c.n, c.k, c.median_error);
    if (c.detection_rate) line("detection_rate", a, c.n, c.k, *c.detection_rate);
  }
  for (const SpeedupEntry& e : s.speedups) line("speedup", e.label, e.n, e.k, e.value);
}

namespace {

std::string cell_text(std::optional<double> v, const char* fmt) {
  if (!v) return "-";
  char buf[48];
  std::snprintf(buf, sizeof buf, fmt, *v);
  return buf;
}

void print_row(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, i == 0 ? "%-8s" : "%16s", cols[i].c_str());
    out << buf;
  }
  out << '\n';
}

}  // namespace

void write_summary_table(std::ostream& out, const Summary& s) {
  std::set<int> ns, ks;
  std::set<Algorithm> algos;
  for (const CellSummary& c : s.cells) {
    ns.insert(c.n);
    ks.insert(c.k);
    algos.insert(c.algorithm);
  }
  auto stat = [&](Algorithm a, int n, int k, auto field) -> std::optional<double> {
    const CellSummary* c = s.find(a, n, k);
    if (c == nullptr || c->ok_rows == 0) return std::nullopt;
    return field(*c);
  };
  auto speedup = [&](const std::string& label, int n, int k) -> std::optional<double> {
    for (const SpeedupEntry& e : s.speedups) {
      if (e.label == label && e.n == n && e.k == k) return e.value;
    }
    return std::nullopt;
  };

  for (int k : ks) {
    out << "Runtime, mean seconds (k = " << k << ")\n";
    std::vector<std::string> head{"N"};
    for (Algorithm a : algos) head.push_back(algorithm_name(a));
    print_row(out, head);
    for (int n : ns) {
      std::vector<std::string> row{std::to_string(n)};
      for (Algorithm a : algos) row.push_back(cell_text(stat(a, n, k, [](const CellSummary& c) { return c.mean_time; }), "%.6g"));
      print_row(out, row);
    }
    out << '\n';

    out << "Speedup (k = " << k << ")\n";
    print_row(out, {"N", "ATSFFT/SFFT", "SFFT/Dense", "ATSFFT/Dense"});
    for (int n : ns) {
      print_row(out, {std::to_string(n), cell_text(speedup("atsfft/sfft", n, k), "%.3fx"),
                      cell_text(speedup("sfft/dense", n, k), "%.3fx"), cell_text(speedup("atsfft/dense", n, k), "%.3fx")});
    }
    out << '\n';

    out << "Error, mean average L1 (k = " << k << ")\n";
    print_row(out, {"N", "ATSFFT", "SFFT", "Dense"});
    for (int n : ns) {
      auto err = [&](Algorithm a) { return cell_text(stat(a, n, k, [](const CellSummary& c) { return c.mean_error; }), "%.3e"); };
      print_row(out, {std::to_string(n), err(Algorithm::Atsfft), err(Algorithm::Sfft), err(Algorithm::Dense)});
    }
    out << '\n';

    if (algos.count(Algorithm::Atsfft) != 0) {
      out << "ATSFFT detection rate (k = " << k << ")\n";
      print_row(out, {"N", "detected"});
      for (int n : ns) {
        const CellSummary* c = s.find(Algorithm::Atsfft, n, k);
        print_row(out, {std::to_string(n), cell_text(c != nullptr ? c->detection_rate : std::nullopt, "%.3f")});
      }
      out << '\n';
    }
  }
}

int threads_from_env(int fallback) {
  const char* v = std::getenv("SFFT_THREADS");
  if (v == nullptr || *v == '\0') return fallback;
  char* end = nullptr;
  const long t = std::strtol(v, &end, 10);
  if (*end != '\0' || t < 1 || t > 4096) return fallback;
  return static_cast<int>(t);
}

}  // namespace sfft::bench
