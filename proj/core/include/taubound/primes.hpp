#pragma once

#include <cstdint>
#include <vector>

#include "taubound/precision.hpp"

namespace taubound {

/// The first K primes with their working-precision logarithms.
///
/// Ranks are 1-based everywhere: prime(1) == 2.  cum_log[k] is log n_k, the
/// logarithm of the product of the first k primes (cum_log[0] == 0), and
/// cum_loglog[k] is the corresponding prefix sum of log log p_i, so that
/// -cum_loglog[k] == log beta(n_k).
struct PrimeTable {
  std::vector<std::uint64_t> primes;
  std::vector<Real> log_primes;
  std::vector<Real> loglog_primes;
  std::vector<Real> cum_log;
  std::vector<Real> cum_loglog;

  std::size_t size() const { return primes.size(); }

  std::uint64_t prime(std::size_t rank) const;
  const Real& log_prime(std::size_t rank) const;
  const Real& loglog_prime(std::size_t rank) const;

  /// log n_k.  k may be 0.
  const Real& log_primorial(std::size_t k) const;
  /// log beta(n_k) = -sum_{i<=k} log log p_i.
  Real log_beta_primorial(std::size_t k) const;

  /// Rank of prime p, or 0 when p is not in the table.
  std::size_t rank_of(std::uint64_t p) const;
};

/// Builds the table of exactly the first K primes (segmented sieve).
PrimeTable first_primes(std::size_t K);

/// All primes <= limit, by a segmented sieve of Eratosthenes.
std::vector<std::uint64_t> sieve_upto(std::uint64_t limit);

/// n_k as an exact integer.  Guarded: refuses k beyond `max_bits` worth of
/// product so that theorem-scale candidates are never materialized.
BigInt primorial_exact(const PrimeTable& table, std::size_t k, unsigned max_bits = 512);

}  // namespace taubound
