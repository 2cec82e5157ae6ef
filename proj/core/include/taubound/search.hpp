#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "taubound/bounds.hpp"
#include "taubound/factorization.hpp"
#include "taubound/precision.hpp"
#include "taubound/primes.hpp"
#include "taubound/report.hpp"

namespace taubound::search {

/// u(x) = max { l >= 0 : n_l <= x }, evaluated on log x.  Comparisons carry
/// the active comparison slack so that exact primorial arguments land on
/// their own rank.
std::size_t u_of(const Real& log_x, const PrimeTable& table);

/// Same multiset of exponents, sorted descending and assigned to the first
/// omega(n) primes; tau is preserved and log n never increases.
Factorization canonicalize(const Factorization& f, const PrimeTable& table);

/// Inclusive integer exponent range; empty when hi < lo.
struct ExponentRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  bool empty() const { return hi < lo; }
  std::uint64_t size() const { return empty() ? 0 : static_cast<std::uint64_t>(hi - lo + 1); }
  ExponentRange hull(const ExponentRange& o) const;
};

/// J_delta(p, j): the exponents of prime rank r compatible with relative
/// error delta while log n lies in I_j = [10639.8 + j, 10640.8 + j].
ExponentRange j_delta(std::size_t prime_rank, int j, const Real& delta, const Window44& c,
                      const PrimeTable& table);

/// eps_j(p): minimal attainable per-prime deviation over I_j.
Real epsilon_j(std::size_t prime_rank, int j, const Window44& c, const PrimeTable& table);

/// One window interval I_j with an equal-length subdivision.
struct IntervalGrid {
  int j = 1;
  int subdivisions = 1;
  Real lo() const;
  Real hi() const;
  std::pair<Real, Real> cell(int r) const;  // r in [0, subdivisions)
};

/// A Cartesian product of per-prime exponent ranges.
struct CandidateBox {
  std::vector<std::uint32_t> prime_ranks;
  std::vector<ExponentRange> ranges;
  std::map<std::size_t, std::int64_t> fixed_overrides;  // coordinate -> pinned exponent
  std::vector<std::string> provenance;

  BigInt cardinality() const;
  /// Ranges with overrides applied (singleton ranges at pinned coordinates).
  std::vector<ExponentRange> effective_ranges() const;
};

/// Deterministic partitioned scan over a box.  The hook sees the exponent
/// vector plus incrementally maintained double-precision log n and log tau
/// (screening values; exact decisions must be re-derived from the exponents).
/// Partition results merge in partition order, so any in-order-associative
/// accumulator reduces deterministically regardless of worker count.
struct ScanStats {
  std::uint64_t visited = 0;
};

namespace detail {
void scan_box_range(const std::vector<ExponentRange>& ranges,
                    const std::vector<double>& log_p, std::uint64_t begin, std::uint64_t end,
                    const std::function<void(std::span<const std::int64_t>, double, double)>& hook);
}  // namespace detail

/// Guard: boxes larger than 2^48 vectors require the long-running flag.
inline constexpr std::uint64_t kBoxGuard = std::uint64_t{1} << 48;

template <class Acc>
Acc enumerate_box(const CandidateBox& box, const PrimeTable& table, int workers,
                  bool long_running, Acc init,
                  const std::function<void(Acc&, std::span<const std::int64_t>, double, double)>& hook,
                  const std::function<void(Acc&, const Acc&)>& merge) {
  const std::vector<ExponentRange> ranges = box.effective_ranges();
  BigInt card = 1;
  for (const auto& r : ranges) card *= r.size();
  if (card == 0) return init;
  if (card > BigInt(kBoxGuard) && !long_running) {
    throw std::domain_error("enumerate_box: cardinality above 2^48 requires long_running");
  }
  if (card >= BigInt(std::uint64_t{1} << 63)) {
    throw std::domain_error("enumerate_box: cardinality does not fit the index space");
  }
  const std::uint64_t total = card.convert_to<std::uint64_t>();

  std::vector<double> log_p(ranges.size());
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    log_p[i] = static_cast<double>(table.log_prime(box.prime_ranks[i]));
  }

  if (workers < 1) workers = 1;
  const std::uint64_t nparts = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers) * 4, total);
  std::vector<Acc> parts(nparts, init);
  const PrecisionContext ctx = active_context();

  std::vector<std::thread> pool;
  std::atomic<std::uint64_t> next{0};
  auto run = [&] {
    install_in_worker(ctx);
    for (;;) {
      std::uint64_t part = next.fetch_add(1);
      if (part >= nparts) break;
      std::uint64_t begin = total / nparts * part + std::min<std::uint64_t>(part, total % nparts);
      std::uint64_t len = total / nparts + (part < total % nparts ? 1 : 0);
      Acc& acc = parts[part];
      detail::scan_box_range(ranges, log_p, begin, begin + len,
                             [&](std::span<const std::int64_t> exps, double ln, double lt) {
                               hook(acc, exps, ln, lt);
                             });
    }
  };
  if (workers == 1) {
    run();
  } else {
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }

  Acc out = std::move(parts[0]);
  for (std::size_t i = 1; i < parts.size(); ++i) merge(out, parts[i]);
  return out;
}

/// Options shared by the verification drivers.
struct VerifyOptions {
  int workers = 1;
  bool long_running = false;
  std::string checkpoint_path;
};

/// Named witnesses used across the drivers.
Factorization thm3_maximizer(const PrimeTable& table);  // 720 n_7
Factorization witness73(const PrimeTable& table);
Factorization witness74(const PrimeTable& table);
Factorization thm5_maximizer(const PrimeTable& table);  // the 44-prime extremal integer
const std::vector<std::uint32_t>& thm5_exponents();

VerificationReport verify_thm1(const PrimeTable& table, const VerifyOptions& opt = {});
VerificationReport verify_thm2(const PrimeTable& table, const VerifyOptions& opt = {});
VerificationReport verify_thm3(const PrimeTable& table, const VerifyOptions& opt = {});

/// stage: 0 = all, otherwise 1..4.
VerificationReport verify_thm4(const PrimeTable& table, int stage, const VerifyOptions& opt = {});

enum class Thm5Phase { prelim, tables, type1, type2, reduce, final_scan };

/// j: 0 = every applicable window index; bucket: 0 = every bucket (final phase).
VerificationReport verify_thm5(const PrimeTable& table, Thm5Phase phase, int j = 0,
                               int bucket = 0, const VerifyOptions& opt = {});

/// Exhaustive desk-scale inequality checks over 2 <= n <= n_max.
/// ids: ramanujan, jensen1, fond1, fond2, inequality1, inequality2,
/// inequality3, result74.
VerificationReport brute_check(const std::string& inequality_id, std::uint64_t n_max,
                               const VerifyOptions& opt = {});

/// Recomputed table (ids 1..10) in the row/column layout of the CSV output.
struct TableData {
  int id = 0;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
TableData compute_table(int id, const PrimeTable& table, const VerifyOptions& opt = {});

/// Prime-table size each driver needs.
std::size_t required_primes(int theorem);

}  // namespace taubound::search
