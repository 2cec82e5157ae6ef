#include <cmath>
#include <cstring>

#include "taubound/bounds.hpp"
#include "taubound/search.hpp"

#include "driver_util.hpp"

namespace taubound::search {

namespace {

struct SmallFactors {
  std::uint64_t primes[16];
  std::uint32_t exps[16];
  int count = 0;
  std::uint32_t tau = 1;
  std::uint32_t big_om = 0;
};

void factor_with_spf(std::uint64_t n, const std::vector<std::uint32_t>& spf, SmallFactors& f) {
  f.count = 0;
  f.tau = 1;
  f.big_om = 0;
  while (n > 1) {
    const std::uint64_t p = spf[n];
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.primes[f.count] = p;
    f.exps[f.count] = e;
    ++f.count;
    f.tau *= e + 1;
    f.big_om += e;
  }
}

// Exact high-precision recheck of one inequality instance; true when the
// inequality (non-strict) holds.
bool holds_exact(const std::string& id, std::uint64_t n, const SmallFactors& f,
                 const Real& eta2v, const Real& eta3v) {
  const int k = f.count;
  Real log_n = 0, log_gamma = 0, log_beta = 0, log_tau = 0;
  for (int i = 0; i < k; ++i) {
    const Real lp = log(Real(f.primes[i]));
    log_n += Real(f.exps[i]) * lp;
    log_gamma += lp;
    log_beta -= log(lp);
    log_tau += log(Real(f.exps[i] + 1));
  }
  const Real kk(k);
  const Real slack = active_context().comparison_slack();
  auto le = [&](const Real& a, const Real& b) { return a <= b + slack * (1 + abs(b)); };
  (void)n;

  if (id == "ramanujan") {
    return le(log_tau, kk * log((log_n + log_gamma) / kk) + log_beta);
  }
  if (id == "fond1") {
    return le(log_tau, kk * log(log_n / kk) + kk * log(1 + log_gamma / log_n) + log_beta);
  }
  if (id == "fond2") {
    return le(log_tau, kk * log(2 * log_n / kk) + log_beta);
  }
  const Real logplus_k = k == 1 ? log(Real(2)) : log(kk);
  if (id == "inequality1") {
    return le(log_tau, kk * log(eta2v * log_n / (kk * logplus_k)));
  }
  if (id == "inequality2") {
    return le(log_tau, kk * log(2 * log_n / (kk * logplus_k)));
  }
  if (id == "inequality3") {
    return le(log_tau, kk * log(1 + eta3v * log_n / (kk * logplus_k)));
  }
  if (id == "result74") {
    return log_tau < kk * log(1 + log_n / (kk * logplus_k));
  }
  throw std::invalid_argument("brute_check: unknown inequality id " + id);
}

}  // namespace

VerificationReport brute_check(const std::string& inequality_id, std::uint64_t n_max,
                               const VerifyOptions& opt) {
  detail::Timer timer;
  if (n_max < 2 || n_max > 10'000'000) {
    throw std::invalid_argument("brute_check: n_max must be in [2, 10^7]");
  }
  VerificationReport rep;
  rep.id = "brute-" + inequality_id;
  rep.digits = active_context().digits;
  rep.parameters["n_max"] = n_max;

  const Real eta2v = eta2();
  PrimeTable small_table = first_primes(16);
  const Real eta3v = eta3(small_table);
  const double eta2d = static_cast<double>(eta2v);
  const double eta3d = static_cast<double>(eta3v);

  // smallest-prime-factor sieve
  std::vector<std::uint32_t> spf(n_max + 1, 0);
  for (std::uint64_t i = 2; i <= n_max; ++i) {
    if (spf[i] == 0) {
      for (std::uint64_t j = i; j <= n_max; j += i) {
        if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
      }
    }
  }

  const bool jensen = inequality_id == "jensen1";
  const double margin = 1e-9;
  std::uint64_t checked = 0, rechecked = 0, counterexamples = 0;
  std::uint64_t ce_omega_min = ~0ull, ce_omega_max = 0;
  std::uint64_t ce_largest = 0;
  std::vector<nlohmann::json> sample_witnesses;

  SmallFactors f;
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    factor_with_spf(n, spf, f);
    ++checked;
    const int k = f.count;

    if (jensen) {
      // 2^omega <= tau <= (1 + Omega/omega)^omega; tau k^k <= (k + Omega)^k
      // keeps both sides in exact integers
      bool ok = (std::uint64_t{1} << k) <= f.tau;
      if (ok) {
        unsigned __int128 lhs = f.tau, rhs = 1;
        for (int i = 0; i < k; ++i) {
          lhs *= static_cast<unsigned>(k);
          rhs *= static_cast<unsigned>(k) + f.big_om;
        }
        ok = lhs <= rhs;
      }
      if (!ok) {
        ++counterexamples;
        if (sample_witnesses.size() < 8) sample_witnesses.push_back({{"n", n}});
      }
      continue;
    }

    // double-precision screen
    double log_n = 0, log_gamma = 0, log_beta = 0, log_tau = 0;
    for (int i = 0; i < k; ++i) {
      const double lp = std::log(static_cast<double>(f.primes[i]));
      log_n += f.exps[i] * lp;
      log_gamma += lp;
      log_beta -= std::log(lp);
      log_tau += std::log(static_cast<double>(f.exps[i] + 1));
    }
    const double kd = k;
    const double logplus_k = k == 1 ? std::log(2.0) : std::log(kd);
    double rhs;
    bool exact_by_identity = false;
    if (inequality_id == "ramanujan") {
      rhs = kd * std::log((log_n + log_gamma) / kd) + log_beta;
      exact_by_identity = (k == 1);  // equality at prime powers
    } else if (inequality_id == "fond1") {
      rhs = kd * std::log(log_n / kd) + kd * std::log1p(log_gamma / log_n) + log_beta;
      exact_by_identity = (k == 1);
    } else if (inequality_id == "fond2") {
      rhs = kd * std::log(2 * log_n / kd) + log_beta;
    } else if (inequality_id == "inequality1") {
      rhs = kd * std::log(eta2d * log_n / (kd * logplus_k));
    } else if (inequality_id == "inequality2") {
      rhs = kd * std::log(2 * log_n / (kd * logplus_k));
    } else if (inequality_id == "inequality3") {
      rhs = kd * std::log1p(eta3d * log_n / (kd * logplus_k));
    } else if (inequality_id == "result74") {
      if (k < 74) continue;  // statement restricted to omega >= 74
      rhs = kd * std::log1p(log_n / (kd * logplus_k));
    } else {
      throw std::invalid_argument("brute_check: unknown inequality id " + inequality_id);
    }

    bool holds;
    if (exact_by_identity) {
      holds = true;
    } else if (log_tau < rhs - margin) {
      holds = true;
    } else if (log_tau > rhs + margin) {
      holds = false;
    } else {
      ++rechecked;
      holds = holds_exact(inequality_id, n, f, eta2v, eta3v);
    }

    if (!holds) {
      ++counterexamples;
      ce_largest = n;
      ce_omega_min = std::min<std::uint64_t>(ce_omega_min, k);
      ce_omega_max = std::max<std::uint64_t>(ce_omega_max, k);
      if (sample_witnesses.size() < 8) {
        sample_witnesses.push_back({{"n", n}, {"omega", k}, {"tau", f.tau}});
      }
    }
  }
  (void)opt;

  rep.exhaustion["enumerated"] = checked;
  rep.exhaustion["rejected"] = counterexamples;
  rep.exhaustion["accepted"] = checked - counterexamples;
  rep.exhaustion["rechecked_exactly"] = rechecked;
  rep.exhaustion["counterexamples"] = counterexamples;
  if (counterexamples > 0) {
    rep.exhaustion["counterexample_omega_min"] = ce_omega_min;
    rep.exhaustion["counterexample_omega_max"] = ce_omega_max;
    rep.exhaustion["counterexample_largest"] = ce_largest;
  }
  rep.witnesses = sample_witnesses;

  if (inequality_id == "inequality2") {
    // counterexamples must all sit in the stated exclusion set
    rep.confirmed = counterexamples == 0 ||
                    (ce_omega_min >= 4 && BigInt(ce_largest) <= BigInt("782139803452561073520"));
  } else {
    rep.confirmed = counterexamples == 0;
  }
  rep.wall_seconds = timer.seconds();
  return rep;
}

}  // namespace taubound::search
