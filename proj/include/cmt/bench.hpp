#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cmt/bytes.hpp"
#include "cmt/tree.hpp"

namespace cmt::bench {

enum class Structure { kCmt, kSmt };

std::string to_string(Structure s);

struct CounterStats {
  std::string name;
  std::size_t min = 0;
  double avg = 0.0;
  std::size_t max = 0;
};

/// One (structure, operation, n) cell. Operations are "insert" and "remove",
/// plus "prove" when proof sizes are requested (CMT: keys+digests carried by a
/// membership proof; SMT: sibling count on the leaf path).
struct BenchReport {
  Structure structure = Structure::kCmt;
  std::string op;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<CounterStats> counters;

  const CounterStats& counter(const std::string& name) const;
};

struct BenchOptions {
  std::vector<std::size_t> sizes{100, 1000, 5000, 10000};
  std::uint64_t seed = 1;
  std::vector<Structure> structures{Structure::kCmt, Structure::kSmt};
  bool proof_sizes = false;
};

/// Uniform random keys of `width` bytes for size `n`. Depends only on
/// (seed, n, width), so every structure sees the same key sequence.
std::vector<Key> random_keys(std::size_t n, std::uint64_t seed, std::size_t width = kDefaultWidth);

/// Inserts n random keys then removes all of them (in a shuffled order),
/// recording per-operation counters. Runs over (structure, n) are independent
/// and execute in parallel; output order is fixed: structures outer, sizes,
/// then insert/remove/prove.
std::vector<BenchReport> run_benchmark(const BenchOptions& options);

/// Single-threaded reference for run_benchmark; must produce identical reports.
std::vector<BenchReport> run_benchmark_serial(const BenchOptions& options);

/// Columns: structure,op,n,counter,min,avg,max,seed. One row per counter.
std::string emit_csv(const std::vector<BenchReport>& reports);

/// Summary stats over a list of samples.
CounterStats summarize(std::string name, const std::vector<std::size_t>& samples);

}  // namespace cmt::bench
