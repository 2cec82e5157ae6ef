#include "taubound/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "taubound/lemmas.hpp"

namespace taubound::search {

std::size_t u_of(const Real& log_x, const PrimeTable& table) {
  if (log_x < 0) throw std::domain_error("u_of: log x must be >= 0");
  const Real slack = active_context().comparison_slack() * (1 + abs(log_x));
  // largest l with cum_log[l] <= log_x (+ slack for exact primorial inputs)
  std::size_t lo = 0, hi = table.size();
  if (table.log_primorial(hi) <= log_x + slack) return hi;
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (table.log_primorial(mid) <= log_x + slack) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

Factorization canonicalize(const Factorization& f, const PrimeTable& table) {
  std::vector<std::uint32_t> exps = f.exponents;
  std::sort(exps.begin(), exps.end(), std::greater<>());
  std::vector<std::uint32_t> ranks(exps.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) ranks[i] = static_cast<std::uint32_t>(i + 1);
  return make_factorization(ranks, exps, table);
}

ExponentRange ExponentRange::hull(const ExponentRange& o) const {
  if (empty()) return o;
  if (o.empty()) return *this;
  return ExponentRange{std::min(lo, o.lo), std::max(hi, o.hi)};
}

Real IntervalGrid::lo() const { return dec("10639.8") + j; }
Real IntervalGrid::hi() const { return dec("10640.8") + j; }

std::pair<Real, Real> IntervalGrid::cell(int r) const {
  if (r < 0 || r >= subdivisions) throw std::out_of_range("IntervalGrid::cell");
  const Real width = (hi() - lo()) / subdivisions;
  return {lo() + width * r, lo() + width * (r + 1)};
}

ExponentRange j_delta(std::size_t prime_rank, int j, const Real& delta, const Window44& c,
                      const PrimeTable& table) {
  if (j < 1 || j > 118) throw std::out_of_range("j_delta: j must be in 1..118");
  if (delta < 0) throw std::domain_error("j_delta: delta must be >= 0");
  IntervalGrid grid{j, 1};
  const Real B = 44 * table.log_prime(prime_rank);
  ExponentRange r;
  r.lo = ceil(((1 - delta) * grid.lo() + c.log_n44) / B).convert_to<std::int64_t>() - 1;
  r.hi = floor(((1 + delta) * grid.hi() + c.log_n44) / B).convert_to<std::int64_t>() - 1;
  return r;
}

Real epsilon_j(std::size_t prime_rank, int j, const Window44& c, const PrimeTable& table) {
  IntervalGrid grid{j, 1};
  const Real B = 44 * table.log_prime(prime_rank);
  return lemmas::psi_minimize(c.log_n44, B, grid.lo(), grid.hi(), Real(1), Real(1)).value;
}

BigInt CandidateBox::cardinality() const {
  BigInt card = 1;
  for (const auto& r : effective_ranges()) card *= r.size();
  return card;
}

std::vector<ExponentRange> CandidateBox::effective_ranges() const {
  if (prime_ranks.size() != ranges.size()) {
    throw std::logic_error("CandidateBox: rank/range length mismatch");
  }
  std::vector<ExponentRange> out = ranges;
  for (const auto& [coord, value] : fixed_overrides) {
    if (coord >= out.size()) throw std::out_of_range("CandidateBox: override out of range");
    out[coord] = ExponentRange{value, value};
  }
  return out;
}

namespace detail {

void scan_box_range(const std::vector<ExponentRange>& ranges, const std::vector<double>& log_p,
                    std::uint64_t begin, std::uint64_t end,
                    const std::function<void(std::span<const std::int64_t>, double, double)>& hook) {
  const std::size_t dim = ranges.size();
  if (begin >= end) return;

  // decode `begin` in mixed radix, most significant coordinate first
  std::vector<std::uint64_t> radix(dim);
  for (std::size_t i = 0; i < dim; ++i) radix[i] = ranges[i].size();
  std::vector<std::uint64_t> digit(dim, 0);
  {
    std::uint64_t rest = begin;
    for (std::size_t i = dim; i-- > 0;) {
      digit[i] = rest % radix[i];
      rest /= radix[i];
    }
  }

  std::vector<std::int64_t> exps(dim);
  std::vector<double> log1p_tab;  // log of small integers for tau increments
  auto log_int = [&](std::int64_t v) -> double {
    if (v < 0) throw std::domain_error("scan_box_range: negative exponent");
    const std::size_t idx = static_cast<std::size_t>(v);
    while (log1p_tab.size() <= idx) {
      log1p_tab.push_back(std::log(static_cast<double>(log1p_tab.size())));
    }
    return log1p_tab[idx];
  };

  double log_n = 0, log_tau = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    exps[i] = ranges[i].lo + static_cast<std::int64_t>(digit[i]);
    log_n += static_cast<double>(exps[i]) * log_p[i];
    log_tau += log_int(exps[i] + 1);
  }

  for (std::uint64_t idx = begin; idx < end; ++idx) {
    if (((idx - begin) & 0xfff) == 0 && idx != begin) {
      // re-anchor the incremental sums so rounding drift stays bounded
      log_n = 0;
      log_tau = 0;
      for (std::size_t i = 0; i < dim; ++i) {
        log_n += static_cast<double>(exps[i]) * log_p[i];
        log_tau += log_int(exps[i] + 1);
      }
    }
    hook(exps, log_n, log_tau);
    // odometer increment with incremental partial sums
    std::size_t i = dim;
    while (i-- > 0) {
      if (static_cast<std::uint64_t>(exps[i] - ranges[i].lo) + 1 < radix[i]) {
        log_n += log_p[i];
        log_tau += log_int(exps[i] + 2) - log_int(exps[i] + 1);
        exps[i] += 1;
        break;
      }
      log_n -= static_cast<double>(exps[i] - ranges[i].lo) * log_p[i];
      log_tau += log_int(ranges[i].lo + 1) - log_int(exps[i] + 1);
      exps[i] = ranges[i].lo;
      if (i == 0) return;  // wrapped past the most significant digit
    }
  }
}

}  // namespace detail

const std::vector<std::uint32_t>& thm5_exponents() {
  static const std::vector<std::uint32_t> v = {
      354, 223, 152, 125, 102, 95, 86, 83, 77, 72, 71, 67, 65, 64, 63,
      61,  59,  59,  57,  57,  56, 55, 55, 54, 53, 52, 52, 52, 51, 51,
      50,  49,  49,  49,  48,  48, 48, 47, 47, 47, 46, 46, 46, 46};
  return v;
}

Factorization thm3_maximizer(const PrimeTable& table) {
  const std::uint32_t ranks[] = {1, 2, 3, 4, 5, 6, 7};
  const std::uint32_t exps[] = {5, 3, 2, 1, 1, 1, 1};
  return make_factorization(ranks, exps, table);
}

namespace {

Factorization remark_witness(const PrimeTable& table, std::size_t k) {
  // 2^13 3^8 5^5 7^4 11^3 13^3 17^3, squares through rank 16, then squarefree
  std::vector<std::uint32_t> ranks(k), exps(k);
  const std::uint32_t head[] = {13, 8, 5, 4, 3, 3, 3};
  for (std::size_t i = 0; i < k; ++i) {
    ranks[i] = static_cast<std::uint32_t>(i + 1);
    if (i < 7) {
      exps[i] = head[i];
    } else if (i < 16) {
      exps[i] = 2;
    } else {
      exps[i] = 1;
    }
  }
  return make_factorization(ranks, exps, table);
}

}  // namespace

Factorization witness73(const PrimeTable& table) { return remark_witness(table, 73); }
Factorization witness74(const PrimeTable& table) { return remark_witness(table, 74); }

Factorization thm5_maximizer(const PrimeTable& table) {
  const auto& exps = thm5_exponents();
  std::vector<std::uint32_t> ranks(exps.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) ranks[i] = static_cast<std::uint32_t>(i + 1);
  return make_factorization(ranks, exps, table);
}

std::size_t required_primes(int theorem) {
  switch (theorem) {
    case 1:
      return 10000;  // beta(n_k) <= (log k)^{-k} sweep
    case 2:
      return 10000;
    case 3:
      return 10000;
    case 4:
      return 35806;  // upsilon(n_k, n_k) < 1 sweep
    case 5:
      return 100;
    default:
      throw std::invalid_argument("required_primes: theorem id must be 1..5");
  }
}

}  // namespace taubound::search
