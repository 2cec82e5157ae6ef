#include "taubound/primes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace taubound {

namespace {

// Upper bound for the K-th prime, p_K < K(log K + log log K) for K >= 6.
std::uint64_t nth_prime_bound(std::size_t K) {
  if (K < 6) return 13;
  double k = static_cast<double>(K);
  double lk = std::log(k);
  return static_cast<std::uint64_t>(k * (lk + std::log(lk)) * 1.05) + 16;
}

}  // namespace

std::vector<std::uint64_t> sieve_upto(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;

  const std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  std::vector<bool> small(root + 1, true);
  small[0] = small[1] = false;
  for (std::uint64_t i = 2; i * i <= root; ++i) {
    if (small[i]) {
      for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
    }
  }
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (small[i]) base.push_back(i);
  }

  const std::uint64_t segment = 1u << 18;
  std::vector<bool> mark(segment);
  for (std::uint64_t lo = 2; lo <= limit; lo += segment) {
    const std::uint64_t hi = std::min(limit, lo + segment - 1);
    std::fill(mark.begin(), mark.end(), true);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
      for (std::uint64_t j = start; j <= hi; j += p) mark[j - lo] = false;
    }
    for (std::uint64_t v = lo; v <= hi; ++v) {
      if (v >= 2 && mark[v - lo]) primes.push_back(v);
    }
  }
  return primes;
}

PrimeTable first_primes(std::size_t K) {
  if (K == 0) throw std::invalid_argument("first_primes: K must be >= 1");

  std::uint64_t bound = nth_prime_bound(K);
  std::vector<std::uint64_t> primes = sieve_upto(bound);
  while (primes.size() < K) {
    bound = bound * 2;
    primes = sieve_upto(bound);
  }
  primes.resize(K);

  PrimeTable table;
  table.primes = std::move(primes);
  table.log_primes.reserve(K);
  table.loglog_primes.reserve(K);
  table.cum_log.reserve(K + 1);
  table.cum_loglog.reserve(K + 1);
  table.cum_log.push_back(Real(0));
  table.cum_loglog.push_back(Real(0));
  for (std::size_t i = 0; i < K; ++i) {
    Real lp = log(Real(table.primes[i]));
    table.log_primes.push_back(lp);
    table.loglog_primes.push_back(log(lp));
    table.cum_log.push_back(table.cum_log.back() + table.log_primes.back());
    table.cum_loglog.push_back(table.cum_loglog.back() + table.loglog_primes.back());
  }
  return table;
}

std::uint64_t PrimeTable::prime(std::size_t rank) const {
  if (rank == 0 || rank > primes.size()) {
    throw std::out_of_range("PrimeTable::prime: rank " + std::to_string(rank) +
                            " outside table of size " + std::to_string(primes.size()));
  }
  return primes[rank - 1];
}

const Real& PrimeTable::log_prime(std::size_t rank) const {
  if (rank == 0 || rank > primes.size()) throw std::out_of_range("PrimeTable::log_prime");
  return log_primes[rank - 1];
}

const Real& PrimeTable::loglog_prime(std::size_t rank) const {
  if (rank == 0 || rank > primes.size()) throw std::out_of_range("PrimeTable::loglog_prime");
  return loglog_primes[rank - 1];
}

const Real& PrimeTable::log_primorial(std::size_t k) const {
  if (k >= cum_log.size()) throw std::out_of_range("PrimeTable::log_primorial");
  return cum_log[k];
}

Real PrimeTable::log_beta_primorial(std::size_t k) const {
  if (k >= cum_loglog.size()) throw std::out_of_range("PrimeTable::log_beta_primorial");
  return -cum_loglog[k];
}

std::size_t PrimeTable::rank_of(std::uint64_t p) const {
  auto it = std::lower_bound(primes.begin(), primes.end(), p);
  if (it == primes.end() || *it != p) return 0;
  return static_cast<std::size_t>(it - primes.begin()) + 1;
}

BigInt primorial_exact(const PrimeTable& table, std::size_t k, unsigned max_bits) {
  if (k > table.size()) throw std::out_of_range("primorial_exact: k beyond table");
  BigInt n = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    n *= table.prime(i);
    if (msb(n) + 1 > max_bits) {
      throw std::domain_error("primorial_exact: product exceeds materialization guard");
    }
  }
  return n;
}

}  // namespace taubound
