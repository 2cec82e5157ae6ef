#include "taubound/factorization.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace taubound {

Factorization make_factorization(std::span<const std::uint32_t> ranks,
                                 std::span<const std::uint32_t> exps,
                                 const PrimeTable& table) {
  if (ranks.size() != exps.size()) {
    throw std::invalid_argument("Factorization: rank/exponent length mismatch");
  }
  if (ranks.empty()) {
    throw std::invalid_argument("Factorization: empty (n=1 is not representable)");
  }
  Factorization f;
  f.prime_ranks.assign(ranks.begin(), ranks.end());
  f.exponents.assign(exps.begin(), exps.end());
  f.log_n = Real(0);
  std::uint32_t prev = 0;
  for (std::size_t i = 0; i < f.prime_ranks.size(); ++i) {
    if (f.prime_ranks[i] <= prev) {
      throw std::invalid_argument("Factorization: prime ranks must be strictly ascending");
    }
    if (f.exponents[i] == 0) {
      throw std::invalid_argument("Factorization: exponents must be >= 1");
    }
    prev = f.prime_ranks[i];
    f.log_n += Real(f.exponents[i]) * table.log_prime(f.prime_ranks[i]);
  }
  return f;
}

Factorization primorial(const PrimeTable& table, std::size_t k) {
  if (k == 0 || k > table.size()) throw std::out_of_range("primorial: bad k");
  Factorization f;
  f.prime_ranks.resize(k);
  f.exponents.assign(k, 1);
  for (std::size_t i = 0; i < k; ++i) f.prime_ranks[i] = static_cast<std::uint32_t>(i + 1);
  f.log_n = table.log_primorial(k);
  return f;
}

BigInt tau(const Factorization& f) {
  BigInt t = 1;
  for (std::uint32_t a : f.exponents) t *= (a + 1);
  return t;
}

Real log_tau(const Factorization& f) {
  Real t = 0;
  for (std::uint32_t a : f.exponents) t += log(Real(a + 1));
  return t;
}

std::size_t omega(const Factorization& f) { return f.prime_ranks.size(); }

std::uint64_t big_omega(const Factorization& f) {
  std::uint64_t s = 0;
  for (std::uint32_t a : f.exponents) s += a;
  return s;
}

Real gamma_log(const Factorization& f, const PrimeTable& table) {
  Real s = 0;
  for (std::uint32_t r : f.prime_ranks) s += table.log_prime(r);
  return s;
}

Real beta_log(const Factorization& f, const PrimeTable& table) {
  Real s = 0;
  for (std::uint32_t r : f.prime_ranks) s += table.loglog_prime(r);
  return -s;
}

Real log_plus(const Real& x) {
  if (!(x > 0)) throw std::domain_error("log_plus: argument must be positive");
  if (x <= 2) return log(Real(2));
  return log(x);
}

Factorization factorize_small(std::uint64_t n, const PrimeTable& table, std::uint64_t bound) {
  if (n < 2) throw std::invalid_argument("factorize_small: n must be >= 2");
  if (n > bound) {
    throw std::domain_error("factorize_small: " + std::to_string(n) +
                            " exceeds the materialization bound " + std::to_string(bound));
  }
  std::vector<std::uint32_t> ranks, exps;
  std::uint64_t m = n;
  auto push = [&](std::uint64_t p, std::uint32_t e) {
    std::size_t r = table.rank_of(p);
    if (r == 0) {
      throw std::out_of_range("factorize_small: prime factor " + std::to_string(p) +
                              " beyond the prime table; build a larger table");
    }
    ranks.push_back(static_cast<std::uint32_t>(r));
    exps.push_back(e);
  };
  for (std::uint64_t p : {std::uint64_t{2}, std::uint64_t{3}, std::uint64_t{5}}) {
    if (m % p == 0) {
      std::uint32_t e = 0;
      while (m % p == 0) m /= p, ++e;
      push(p, e);
    }
  }
  for (std::uint64_t d = 7, step = 4; d * d <= m; d += step, step = 6 - step) {
    if (m % d == 0) {
      std::uint32_t e = 0;
      while (m % d == 0) m /= d, ++e;
      push(d, e);
    }
  }
  if (m > 1) push(m, 1);
  return make_factorization(ranks, exps, table);
}

BigInt to_integer_exact(const Factorization& f, const PrimeTable& table, unsigned max_bits) {
  BigInt n = 1;
  for (std::size_t i = 0; i < f.prime_ranks.size(); ++i) {
    BigInt p = table.prime(f.prime_ranks[i]);
    for (std::uint32_t e = 0; e < f.exponents[i]; ++e) {
      n *= p;
      if (msb(n) + 1 > max_bits) {
        throw std::domain_error("to_integer_exact: value exceeds materialization guard");
      }
    }
  }
  return n;
}

std::string to_string(const Factorization& f, const PrimeTable& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < f.prime_ranks.size(); ++i) {
    if (i) out << " * ";
    out << table.prime(f.prime_ranks[i]);
    if (f.exponents[i] > 1) out << '^' << f.exponents[i];
  }
  return out.str();
}

nlohmann::json to_json(const Factorization& f) {
  return nlohmann::json{{"idx", f.prime_ranks}, {"exp", f.exponents}};
}

Factorization factorization_from_json(const nlohmann::json& j, const PrimeTable& table) {
  std::vector<std::uint32_t> ranks = j.at("idx").get<std::vector<std::uint32_t>>();
  std::vector<std::uint32_t> exps = j.at("exp").get<std::vector<std::uint32_t>>();
  return make_factorization(ranks, exps, table);
}

Factorization parse_factorization(const std::string& text, const PrimeTable& table,
                                  std::uint64_t bound) {
  // collect exponents per rank, multiplying repeated factors together
  std::map<std::uint32_t, std::uint64_t> acc;
  auto add = [&](const Factorization& f, std::uint64_t times = 1) {
    for (std::size_t i = 0; i < f.prime_ranks.size(); ++i) {
      acc[f.prime_ranks[i]] += static_cast<std::uint64_t>(f.exponents[i]) * times;
    }
  };

  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("parse_factorization: empty literal");

  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t star = s.find('*', pos);
    std::string term = s.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
    pos = star == std::string::npos ? s.size() : star + 1;
    if (term.empty()) throw std::invalid_argument("parse_factorization: empty term");

    if (term[0] == 'n' || term[0] == 'N') {
      std::uint64_t k = std::stoull(term.substr(1));
      if (k == 0 || k > table.size()) {
        throw std::invalid_argument("parse_factorization: primorial rank out of range");
      }
      add(primorial(table, static_cast<std::size_t>(k)));
      continue;
    }

    std::size_t caret = term.find('^');
    std::uint64_t base = std::stoull(term.substr(0, caret));
    std::uint64_t expo = 1;
    if (caret != std::string::npos) expo = std::stoull(term.substr(caret + 1));
    if (base < 2) throw std::invalid_argument("parse_factorization: base must be >= 2");
    if (expo == 0) throw std::invalid_argument("parse_factorization: exponent must be >= 1");
    std::size_t r = table.rank_of(base);
    if (r != 0) {
      acc[static_cast<std::uint32_t>(r)] += expo;
    } else {
      add(factorize_small(base, table, bound), expo);
    }
  }

  std::vector<std::uint32_t> ranks, exps;
  for (const auto& [r, e] : acc) {
    ranks.push_back(r);
    if (e > 0xffffffffull) throw std::invalid_argument("parse_factorization: exponent overflow");
    exps.push_back(static_cast<std::uint32_t>(e));
  }
  return make_factorization(ranks, exps, table);
}

}  // namespace taubound
