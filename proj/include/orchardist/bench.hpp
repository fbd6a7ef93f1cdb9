#pragma once

// Batch benchmarking over (leaves, reticulations) grids.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "orchardist/errors.hpp"
#include "orchardist/gen.hpp"
#include "orchardist/solver.hpp"

namespace orchardist {

struct GridCell {
  std::size_t leaves;
  std::size_t reticulations;
};

// "20x5,50x10"; 'X' and the multiplication sign are accepted as well.
inline std::vector<GridCell> parse_grid(std::string_view text) {
  std::vector<GridCell> cells;
  std::string s(text);
  for (const std::string sign : {"\xc3\x97", "X"}) {
    for (auto p = s.find(sign); p != std::string::npos; p = s.find(sign)) s.replace(p, sign.size(), "x");
  }
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    const auto x = item.find('x');
    std::size_t l = 0, r = 0, used_l = 0, used_r = 0;
    try {
      if (x == std::string::npos) throw std::invalid_argument("no x");
      l = std::stoul(item.substr(0, x), &used_l);
      r = std::stoul(item.substr(x + 1), &used_r);
    } catch (const std::logic_error&) {
      throw GenerationError(GenerationError::Reason::kBadConfig, "bad grid cell '" + item + "'");
    }
    if (used_l != x || used_r != item.size() - x - 1) {
      throw GenerationError(GenerationError::Reason::kBadConfig, "bad grid cell '" + item + "'");
    }
    cells.push_back({l, r});
  }
  return cells;
}

struct BenchRecord {
  std::string id;
  std::size_t leaves = 0;
  std::size_t reticulations = 0;
  double nu = 0.0;
  std::string method = "bnb";
  std::size_t l_or = 0;
  bool optimal = false;
  double seconds = 0.0;
  std::size_t nodes = 0;
};

struct BenchOptions {
  std::size_t per_cell = 50;
  double timeout_seconds = 3600.0;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0: ORCHARDIST_THREADS, else hardware
  const std::atomic<bool>* cancel = nullptr;
};

inline std::size_t worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ORCHARDIST_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Instance seeds depend only on the base seed, the cell and the index.
inline std::uint64_t instance_seed(std::uint64_t base, const GridCell& cell, std::size_t i) {
  std::uint64_t h = base * 0x9E3779B97F4A7C15ull;
  for (std::uint64_t v : {static_cast<std::uint64_t>(cell.leaves),
                          static_cast<std::uint64_t>(cell.reticulations),
                          static_cast<std::uint64_t>(i)}) {
    h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return h;
}

inline std::string instance_id(const GridCell& cell, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "L%zu_R%zu_%04zu", cell.leaves, cell.reticulations, i);
  return buf;
}

// Generates and solves every instance on a bounded pool of workers. Records
// come back in (cell, index) order whatever the scheduling; instances not
// started before cancellation are missing.
inline std::vector<BenchRecord> run_bench(const std::vector<GridCell>& grid,
                                          const BenchOptions& options) {
  struct Job {
    GridCell cell;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (const auto& cell : grid) {
    for (std::size_t i = 0; i < options.per_cell; ++i) jobs.push_back({cell, i});
  }
  std::vector<std::optional<BenchRecord>> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::optional<GenerationError> failure;

  auto worker = [&]() {
    while (true) {
      if (options.cancel && options.cancel->load()) return;
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job& job = jobs[j];
      GenConfig config;
      config.leaves = job.cell.leaves;
      config.reticulations = job.cell.reticulations;
      config.seed = instance_seed(options.seed, job.cell, job.index);
      try {
        const Generated g = generate(config);
        SolveOptions solve;
        solve.timeout_seconds = options.timeout_seconds;
        solve.cancel = options.cancel;
        const SolveResult result = solve_bnb(g.network, solve);
        if (options.cancel && options.cancel->load() && !result.optimal) return;
        BenchRecord rec;
        rec.id = instance_id(job.cell, job.index);
        rec.leaves = job.cell.leaves;
        rec.reticulations = job.cell.reticulations;
        rec.nu = g.nu;
        rec.l_or = result.l_or;
        rec.optimal = result.optimal;
        rec.seconds = result.stats.seconds;
        rec.nodes = result.stats.nodes;
        slots[j] = rec;
      } catch (const GenerationError& e) {
        std::lock_guard lock(error_mutex);
        if (!failure) failure = e;
        return;
      }
    }
  };
  const std::size_t n = std::min(worker_count(options.threads), std::max<std::size_t>(1, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) throw *failure;
  std::vector<BenchRecord> records;
  for (auto& s : slots) {
    if (s) records.push_back(std::move(*s));
  }
  return records;
}

// Nearest-rank quantile: the smallest value with at least q of the sample
// at or below it.
template <typename T>
T nearest_rank(std::vector<T> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

inline std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::string out = "id,leaves,reticulations,nu,method,l_or,optimal,seconds,nodes\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.6f,%s,%zu,%d,%.6f,%zu\n", r.id.c_str(),
                  r.leaves, r.reticulations, r.nu, r.method.c_str(), r.l_or,
                  r.optimal ? 1 : 0, r.seconds, r.nodes);
    out += buf;
  }
  return out;
}

struct CellSummary {
  GridCell cell;
  std::size_t instances = 0;
  std::size_t completed = 0;
  std::vector<double> runtime;            // 5%, 50%, 95% over completed
  std::vector<std::size_t> distance;      // 5%, 50%, 95% over completed
};

inline std::vector<CellSummary> summarize(const std::vector<GridCell>& grid,
                                          const std::vector<BenchRecord>& records) {
  std::vector<CellSummary> out;
  for (const auto& cell : grid) {
    CellSummary s{cell, 0, 0, {}, {}};
    std::vector<double> times;
    std::vector<std::size_t> values;
    for (const auto& r : records) {
      if (r.leaves != cell.leaves || r.reticulations != cell.reticulations) continue;
      ++s.instances;
      if (!r.optimal) continue;
      ++s.completed;
      times.push_back(r.seconds);
      values.push_back(r.l_or);
    }
    if (!times.empty()) {
      for (double q : {0.05, 0.5, 0.95}) {
        s.runtime.push_back(nearest_rank(times, q));
        s.distance.push_back(nearest_rank(values, q));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::string summary_table(const std::vector<CellSummary>& cells) {
  std::string out =
      "    L     R  Compl.(%)   t5%(s)   t50%(s)   t95%(s)   L_OR 5%  50%  95%\n";
  char buf[256];
  for (const auto& s : cells) {
    const double pct = s.instances ? 100.0 * s.completed / s.instances : 0.0;
    if (s.runtime.empty()) {
      std::snprintf(buf, sizeof buf, "%5zu %5zu %10.1f %8s %9s %9s %9s %4s %4s\n",
                    s.cell.leaves, s.cell.reticulations, pct, "-", "-", "-", "-", "-", "-");
    } else {
      std::snprintf(buf, sizeof buf, "%5zu %5zu %10.1f %8.3f %9.3f %9.3f %9zu %4zu %4zu\n",
                    s.cell.leaves, s.cell.reticulations, pct, s.runtime[0], s.runtime[1],
                    s.runtime[2], s.distance[0], s.distance[1], s.distance[2]);
    }
    out += buf;
  }
  return out;
}

}  // namespace orchardist
