#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "taubound/precision.hpp"
#include "taubound/primes.hpp"

namespace taubound {

/// An integer in exponent-vector form: n = prod p_{rank_i}^{exp_i}.
///
/// Candidates at theorem scale (log n ~ 10^4) exist only in this form; the
/// cached log_n is the value every size comparison runs on.
struct Factorization {
  std::vector<std::uint32_t> prime_ranks;  // strictly ascending, 1-based
  std::vector<std::uint32_t> exponents;    // same length, all >= 1
  Real log_n;

  std::size_t omega() const { return prime_ranks.size(); }
};

/// Validates the rank/exponent lists and computes log n from the table.
Factorization make_factorization(std::span<const std::uint32_t> ranks,
                                 std::span<const std::uint32_t> exps,
                                 const PrimeTable& table);

/// n_k as a factorization (all exponents 1).
Factorization primorial(const PrimeTable& table, std::size_t k);

/// tau(n) = prod (exp_i + 1), exact.
BigInt tau(const Factorization& f);

/// log tau(n) at working precision.
Real log_tau(const Factorization& f);

std::size_t omega(const Factorization& f);
std::uint64_t big_omega(const Factorization& f);

/// log gamma(n): sum of the logs of the distinct primes.
Real gamma_log(const Factorization& f, const PrimeTable& table);

/// log beta(n) = -sum log log p over p | n.
Real beta_log(const Factorization& f, const PrimeTable& table);

/// log max(2, x).
Real log_plus(const Real& x);

/// Trial-division factorization for oracle-scale integers.  The bound is the
/// materialization guard; raise it explicitly when a larger oracle value is
/// genuinely needed.
Factorization factorize_small(std::uint64_t n, const PrimeTable& table,
                              std::uint64_t bound = 1'000'000'000);

/// Exact value of a factorization small enough to materialize.
BigInt to_integer_exact(const Factorization& f, const PrimeTable& table,
                        unsigned max_bits = 512);

/// "2^5 * 3^3 * 5" style rendering.
std::string to_string(const Factorization& f, const PrimeTable& table);

/// Compact JSON form {"idx":[...],"exp":[...]}.
nlohmann::json to_json(const Factorization& f);
Factorization factorization_from_json(const nlohmann::json& j, const PrimeTable& table);

/// Parses the text forms accepted on the command line: products of
/// `p^a` factors, plain integers (trial-factored), and `n<k>` primorial
/// tokens, e.g. "720*n7" or "2^5*3^3*5^2*7*11*13*17*19".
Factorization parse_factorization(const std::string& text, const PrimeTable& table,
                                  std::uint64_t bound = 1'000'000'000);

}  // namespace taubound
