#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include <json.hpp>

#include "taubound/factorization.hpp"
#include "taubound/precision.hpp"
#include "taubound/report.hpp"

namespace taubound::search::detail {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

inline std::string real_str(const Real& x, unsigned digits = 30) {
  return x.str(digits);
}

inline nlohmann::json witness_json(const Factorization& f, const PrimeTable& table,
                                   std::initializer_list<std::pair<const char*, Real>> values) {
  nlohmann::json j;
  j["n"] = to_string(f, table);
  j["factorization"] = to_json(f);
  j["log_n"] = real_str(f.log_n);
  for (const auto& [name, v] : values) j[name] = real_str(v);
  return j;
}

/// Shared driver machinery (defined in theorem1.cpp / theorem3.cpp).
Real solve_r1_root(std::size_t k, const Real& target, const PrimeTable& table);
long long max_admissible_exponent(int ell, std::size_t k, const Real& log_z, const Real& log_p);
std::vector<std::vector<std::uint32_t>> descending_prefixes(std::span<const std::uint32_t> caps);
Real solve_upsilon_root(const Factorization& f, const Real& target, const PrimeTable& table);

/// Index-parallel loop; results must be written to pre-sized slots so the
/// outcome is independent of scheduling.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& fn) {
  if (workers < 2 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const PrecisionContext ctx = active_context();
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      install_in_worker(ctx);
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace taubound::search::detail
