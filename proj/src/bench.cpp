#include "cmt/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>

#include "cmt/hashing.hpp"
#include "cmt/proof.hpp"
#include "cmt/smt.hpp"

namespace cmt::bench {

namespace {

const char* const kCounterNames[] = {"hash_calls", "rotations", "node_reads", "node_writes",
                                     "depth"};

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t n) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(n),
                    static_cast<std::uint32_t>(n >> 32)};
  return std::mt19937_64(seq);
}

// Fisher-Yates with explicit index draws so the permutation is identical on
// every standard library.
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

struct Samples {
  std::vector<std::size_t> values[5];

  void add(const OpCounters& c) {
    values[0].push_back(c.hash_calls);
    values[1].push_back(c.rotations);
    values[2].push_back(c.node_reads);
    values[3].push_back(c.node_writes);
    values[4].push_back(c.depth);
  }

  std::vector<CounterStats> stats() const {
    std::vector<CounterStats> out;
    for (std::size_t i = 0; i < 5; ++i) out.push_back(summarize(kCounterNames[i], values[i]));
    return out;
  }
};

struct Job {
  Structure structure;
  std::size_t n;
};

std::vector<BenchReport> run_job(const Job& job, const BenchOptions& opt) {
  const HashScheme scheme = make_sha256_scheme();
  std::vector<Key> keys = random_keys(job.n, opt.seed, scheme.width());
  std::vector<Key> removal = keys;
  auto rng = make_rng(opt.seed, 2, job.n);
  shuffle(removal, rng);

  Samples inserts;
  Samples removes;
  std::vector<std::size_t> proof_entries;

  auto make_report = [&](const char* op, std::vector<CounterStats> counters) {
    return BenchReport{job.structure, op, job.n, opt.seed, std::move(counters)};
  };

  if (job.structure == Structure::kCmt) {
    Tree tree(scheme);
    for (const auto& k : keys) inserts.add(tree.insert(k).counters);
    if (opt.proof_sizes) {
      for (const auto& k : keys) proof_entries.push_back(proof_size(generate_proof(tree, k)));
    }
    for (const auto& k : removal) removes.add(tree.remove(k).counters);
  } else {
    SparseMerkleTree smt(scheme);
    for (const auto& k : keys) inserts.add(smt.insert(k).counters);
    if (opt.proof_sizes) {
      for (const auto& k : keys) proof_entries.push_back(*smt.depth_of(k));
    }
    for (const auto& k : removal) removes.add(smt.remove(k).counters);
  }

  std::vector<BenchReport> out;
  out.push_back(make_report("insert", inserts.stats()));
  out.push_back(make_report("remove", removes.stats()));
  if (opt.proof_sizes) {
    out.push_back(make_report("prove", {summarize("proof_entries", proof_entries)}));
  }
  return out;
}

std::vector<Job> plan(const BenchOptions& opt) {
  std::vector<Job> jobs;
  for (Structure s : opt.structures) {
    for (std::size_t n : opt.sizes) {
      if (n == 0) throw InvalidInput("benchmark sizes must be positive");
      jobs.push_back({s, n});
    }
  }
  return jobs;
}

std::vector<BenchReport> flatten(std::vector<std::vector<BenchReport>>& parts) {
  std::vector<BenchReport> out;
  for (auto& p : parts) {
    for (auto& r : p) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string to_string(Structure s) { return s == Structure::kCmt ? "CMT" : "SMT"; }

const CounterStats& BenchReport::counter(const std::string& name) const {
  for (const auto& c : counters) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no counter named " + name);
}

std::vector<Key> random_keys(std::size_t n, std::uint64_t seed, std::size_t width) {
  auto rng = make_rng(seed, 1, n);
  std::vector<Key> keys;
  keys.reserve(n);
  std::set<Key> seen;
  std::vector<std::uint8_t> buf(width);
  while (keys.size() < n) {
    for (std::size_t i = 0; i < width; i += 8) {
      std::uint64_t word = rng();
      for (std::size_t j = 0; j < 8 && i + j < width; ++j) {
        buf[i + j] = static_cast<std::uint8_t>(word >> (56 - 8 * j));
      }
    }
    Key k = Key::from_bytes(buf);
    if (seen.insert(k).second) keys.push_back(k);
  }
  return keys;
}

CounterStats summarize(std::string name, const std::vector<std::size_t>& samples) {
  CounterStats s;
  s.name = std::move(name);
  if (samples.empty()) return s;
  auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  s.min = *lo;
  s.max = *hi;
  double total = 0;
  for (auto v : samples) total += static_cast<double>(v);
  s.avg = total / static_cast<double>(samples.size());
  return s;
}

std::vector<BenchReport> run_benchmark_serial(const BenchOptions& options) {
  const auto jobs = plan(options);
  std::vector<std::vector<BenchReport>> parts;
  for (const auto& job : jobs) parts.push_back(run_job(job, options));
  return flatten(parts);
}

std::vector<BenchReport> run_benchmark(const BenchOptions& options) {
  const auto jobs = plan(options);
  std::vector<std::vector<BenchReport>> parts(jobs.size());
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      parts[i] = run_job(jobs[i], options);
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return flatten(parts);
}

std::string emit_csv(const std::vector<BenchReport>& reports) {
  std::string out = "structure,op,n,counter,min,avg,max,seed\n";
  char line[256];
  for (const auto& r : reports) {
    for (const auto& c : r.counters) {
      std::snprintf(line, sizeof line, "%s,%s,%zu,%s,%zu,%.4f,%zu,%llu\n",
                    to_string(r.structure).c_str(), r.op.c_str(), r.n, c.name.c_str(), c.min,
                    c.avg, c.max, static_cast<unsigned long long>(r.seed));
      out += line;
    }
  }
  return out;
}

}  // namespace cmt::bench
