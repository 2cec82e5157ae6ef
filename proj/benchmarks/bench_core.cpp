#include <benchmark/benchmark.h>

#include "taubound/bounds.hpp"
#include "taubound/lemmas.hpp"
#include "taubound/precision.hpp"
#include "taubound/primes.hpp"
#include "taubound/search.hpp"
#include "taubound/solvers.hpp"

using namespace taubound;

namespace {

const PrimeTable& table() {
  static PrimeTable t = first_primes(1000);
  return t;
}

void BM_sieve_100k(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sieve_upto(100000));
  }
}
BENCHMARK(BM_sieve_100k);

void BM_prime_table_1k(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(first_primes(1000));
  }
}
BENCHMARK(BM_prime_table_1k);

void BM_lambda(benchmark::State& state) {
  Factorization f = search::thm5_maximizer(table());
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambda_of(f));
  }
}
BENCHMARK(BM_lambda);

void BM_upsilon_root(benchmark::State& state) {
  Factorization n44 = primorial(table(), 44);
  for (auto _ : state) {
    solvers::RootProblem p;
    p.eval = [&](const Real& L) { return upsilon_log(n44, L, table()); };
    p.target = Real(1);
    p.lo = Real(100);
    p.hi = Real(20000);
    p.increasing = false;
    p.tol = active_context().root_tol;
    benchmark::DoNotOptimize(solvers::solve_monotone(p));
  }
}
BENCHMARK(BM_upsilon_root);

void BM_psi_minimize(benchmark::State& state) {
  const Real A = table().log_primorial(44);
  const Real B = 44 * table().log_prime(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lemmas::psi_minimize(A, B, dec("10640.8"), dec("10641.8"), Real(1), Real(1)));
  }
}
BENCHMARK(BM_psi_minimize);

void BM_f_max(benchmark::State& state) {
  const int js[] = {20, 7};
  FCutoffs c = FCutoffs::make(1, 74, js);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_max(c, table(), dec("1e-30")));
  }
}
BENCHMARK(BM_f_max);

void BM_box_scan(benchmark::State& state) {
  search::CandidateBox box;
  for (std::uint32_t i = 1; i <= 8; ++i) {
    box.prime_ranks.push_back(i);
    box.ranges.push_back({1, 8});
  }
  for (auto _ : state) {
    auto total = search::enumerate_box<std::uint64_t>(
        box, table(), 1, false, 0,
        [](std::uint64_t& acc, std::span<const std::int64_t>, double, double) { ++acc; },
        [](std::uint64_t& a, const std::uint64_t& b) { a += b; });
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_box_scan);

}  // namespace

int main(int argc, char** argv) {
  taubound::install(taubound::PrecisionContext::make(60));
  ::benchmark::Initialize(&argc, argv);
  if (::benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  ::benchmark::RunSpecifiedBenchmarks();
  ::benchmark::Shutdown();
  return 0;
}
