// Wall-clock comparison of the serial reference paths against their OpenMP
// counterparts: batch proof generation, batch verification, and the counter
// benchmark grid. Also checks that both paths agree.
//
//   cmt_perf [n] [seed]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "cmt/bench.hpp"
#include "cmt/proof.hpp"
#include "cmt/tree.hpp"

namespace {

template <typename F>
double time_ms(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* what, double serial_ms, double parallel_ms, bool agree) {
  std::printf("%-22s serial %9.2f ms  parallel %9.2f ms  speedup %5.2fx  %s\n", what, serial_ms,
              parallel_ms, serial_ms / parallel_ms, agree ? "agree" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 7;
  std::printf("threads=%d n=%zu seed=%llu\n", omp_get_max_threads(), n,
              static_cast<unsigned long long>(seed));

  const auto scheme = cmt::make_sha256_scheme();
  const auto keys = cmt::bench::random_keys(n, seed);
  cmt::Tree tree(scheme);
  for (const auto& k : keys) tree.insert(k);
  const auto root = tree.root_digest();

  std::vector<cmt::Proof> serial_proofs, parallel_proofs;
  double gen_s = time_ms([&] { serial_proofs = cmt::generate_batch_serial(tree, keys); });
  double gen_p = time_ms([&] { parallel_proofs = cmt::generate_batch(tree, keys); });
  row("generate proofs", gen_s, gen_p, serial_proofs == parallel_proofs);

  std::vector<char> serial_ok, parallel_ok;
  double ver_s =
      time_ms([&] { serial_ok = cmt::verify_batch_serial(scheme, serial_proofs, keys, root); });
  double ver_p = time_ms([&] { parallel_ok = cmt::verify_batch(scheme, serial_proofs, keys, root); });
  row("verify proofs", ver_s, ver_p, serial_ok == parallel_ok);

  cmt::bench::BenchOptions opts;
  opts.sizes = {100, 1000, 5000, 10000};
  opts.seed = seed;
  std::string csv_s, csv_p;
  double grid_s = time_ms([&] { csv_s = cmt::bench::emit_csv(cmt::bench::run_benchmark_serial(opts)); });
  double grid_p = time_ms([&] { csv_p = cmt::bench::emit_csv(cmt::bench::run_benchmark(opts)); });
  row("benchmark grid", grid_s, grid_p, csv_s == csv_p);

  bool all_valid = true;
  for (char ok : serial_ok) all_valid = all_valid && ok;
  return all_valid && serial_ok == parallel_ok && serial_proofs == parallel_proofs && csv_s == csv_p
             ? 0
             : 1;
}
