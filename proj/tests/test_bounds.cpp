#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "taubound/bounds.hpp"
#include "taubound/factorization.hpp"
#include "taubound/precision.hpp"
#include "taubound/primes.hpp"
#include "taubound/solvers.hpp"

#include "oracle_helpers.hpp"

using namespace taubound;

namespace {

bool close(const Real& a, const Real& b, const Real& rel) {
  return abs(a - b) <= rel * (1 + abs(b));
}

Factorization random_factorization(test::Rng& rng, const PrimeTable& t, std::size_t min_omega,
                                   std::size_t max_omega, std::uint32_t max_exp) {
  for (;;) {
    std::vector<std::uint32_t> r, e;
    std::size_t want = min_omega + rng.below(max_omega - min_omega + 1);
    std::uint32_t rank = 0;
    while (r.size() < want) {
      rank += 1 + static_cast<std::uint32_t>(rng.below(3));
      r.push_back(rank);
      e.push_back(1 + static_cast<std::uint32_t>(rng.below(max_exp)));
    }
    return make_factorization(r, e, t);
  }
}

}  // namespace

TEST_CASE("lambda values") {
  PrimeTable t = first_primes(64);
  CHECK(close(lambda_of(parse_factorization("720*n7", t)), dec("1.1999953"), dec("1e-6")));

  // direct formula for n = 6, cross-checked by solving the implicit
  // definition numerically
  Factorization f6 = factorize_small(6, t);
  const Real direct = 2 * log(Real(2)) / log(Real(6));
  CHECK(close(lambda_of(f6), direct, dec("1e-40")));
  solvers::RootProblem p;
  p.eval = [&](const Real& lam) {
    return pow(1 + lam * f6.log_n / (2 * log(Real(2))), 2);  // k = 2
  };
  p.target = Real(4);  // tau(6)
  p.lo = dec("0.01");
  p.hi = Real(4);
  p.increasing = true;
  p.tol = active_context().root_tol;
  CHECK(close(solvers::solve_monotone(p), lambda_of(f6), dec("1e-25")));

  CHECK_THROWS(lambda_of(factorize_small(8, t)));  // omega = 1
}

TEST_CASE("lambda reconstruction identity") {
  PrimeTable t = first_primes(64);
  test::Rng rng(17);
  for (int iter = 0; iter < 300; ++iter) {
    Factorization f = random_factorization(rng, t, 2, 10, 5);
    if (f.log_n > log(Real("1e9"))) continue;
    const std::size_t k = omega(f);
    const Real klogk = Real(k) * log(Real(k));
    const Real rebuilt = Real(k) * log(1 + lambda_of(f) * f.log_n / klogk);
    CHECK(abs(rebuilt - log_tau(f)) <= dec("1e-40") * (1 + abs(log_tau(f))));
  }
}

TEST_CASE("t values") {
  PrimeTable t = first_primes(64);
  CHECK(close(t_of(factorize_small(2, t)), 2 / log(Real(2)), dec("1e-40")));
  CHECK(close(t_of(factorize_small(6, t)), 2 / log(Real(6)), dec("1e-40")));
  CHECK(close(t_of(factorize_small(60060, t)),
              pow(Real(96), Real(1) / 6) / log(Real(60060)), dec("1e-40")));
}

TEST_CASE("r values") {
  PrimeTable t = first_primes(64);
  const Real r_star = r_of(factorize_small(60060, t));
  CHECK(close(r_star, dec("0.737505"), dec("1e-6")));
  CHECK(close(exp(r_star), eta2(), dec("1e-40")));
  CHECK(r_of(factorize_small(30, t)) < log(Real(2)));

  // defining identity round-trip at n = 36
  Factorization f36 = factorize_small(36, t);
  const Real rv = r_of(f36);
  const Real rebuilt = 2 * log(exp(rv) * f36.log_n / (2 * log(Real(2))));
  CHECK(abs(rebuilt - log_tau(f36)) <= dec("1e-40"));
}

TEST_CASE("upsilon") {
  PrimeTable t = first_primes(120);
  Factorization n94 = primorial(t, 94);
  Factorization n95 = primorial(t, 95);
  CHECK(upsilon(n95, n95, t) < 1);
  CHECK(upsilon(n94, n94, t) > 1);

  // strictly decreasing along a z-grid
  Factorization n44 = primorial(t, 44);
  Real prev = upsilon_log(n44, Real(100), t);
  for (int i = 1; i <= 50; ++i) {
    Real cur = upsilon_log(n44, Real(100) + Real(300) * i, t);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS(upsilon(n44, Real(1), t));
}

TEST_CASE("r1 dominates r and decreases in z") {
  PrimeTable t = first_primes(64);
  Factorization f = factorize_small(60060, t);
  CHECK(r1(f.log_n, 6, t) >= r_of(f));
  Real prev = r1(Real(3), 6, t);
  for (int i = 1; i < 40; ++i) {
    Real cur = r1(Real(3) + i, 6, t);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("eta constants") {
  PrimeTable t = first_primes(16);
  CHECK(close(eta2(), dec("2.0907132"), dec("1e-6")));
  CHECK(close(eta3(t), dec("1.1999953"), dec("1e-6")));
}

TEST_CASE("divisor-growth ratio at the factor-log maximizer") {
  PrimeTable t = first_primes(16);
  Factorization f = factorize_small(6983776800ull, t, 10'000'000'000ull);
  CHECK(abs(nicolas_robin_ratio(f) - dec("1.5379")) <= dec("1e-4"));
}

TEST_CASE("corollary bounds and the upsilon chain hold on a sampled range") {
  PrimeTable t = first_primes(80000);  // covers every prime below 10^6
  test::Rng rng(23);
  for (int iter = 0; iter < 400; ++iter) {
    std::uint64_t n = 2 + rng.below(1'000'000);
    Factorization f = factorize_small(n, t);
    const Real k(omega(f));
    const Real lt = log_tau(f);
    // tau <= (log n / k)^k (1 + log gamma/log n)^k beta(n)
    CHECK(lt <= k * log(f.log_n / k) + k * log(1 + gamma_log(f, t) / f.log_n) +
                    beta_log(f, t) + dec("1e-45"));
    // tau <= (2 log n / k)^k beta(n)
    CHECK(lt <= k * log(2 * f.log_n / k) + beta_log(f, t) + dec("1e-45"));
    // Ramanujan form
    CHECK(lt <= k * log((f.log_n + gamma_log(f, t)) / k) + beta_log(f, t) + dec("1e-45"));
    if (omega(f) >= 2) {
      CHECK(lambda_of(f) <= upsilon_log(f, f.log_n, t) + dec("1e-45"));
    }
  }
}

TEST_CASE("partition statistics") {
  PrimeTable t = first_primes(64);
  test::Rng rng(29);
  for (int iter = 0; iter < 200; ++iter) {
    Factorization f = random_factorization(rng, t, 2, 12, 6);
    PartitionStats st = partition_stats(f, t);
    const Real k(omega(f));
    CHECK(st.w >= 0);
    CHECK(st.w1 >= 0);
    CHECK(st.w2 >= 0);
    CHECK(st.m >= 1);
    CHECK(st.m <= static_cast<int>(omega(f)) - 1);
    CHECK(close(st.mu, (1 + gamma_log(f, t) / f.log_n) / k, dec("1e-50")));
    CHECK(close(st.mu1, st.mu - st.w / (2 * st.m * k), dec("1e-45")));
    CHECK(close(st.mu2, st.mu + st.w / (2 * (k - st.m) * k), dec("1e-45")));
  }
}

TEST_CASE("two-factor window bound") {
  PrimeTable t = first_primes(64);
  Window44 win = Window44::make(t);

  // the zero-deviation root does not depend on m and sits at 10758.2...
  for (int m : {1, 11, 22, 33, 43}) {
    solvers::RootProblem p;
    p.eval = [&](const Real& z) { return upsilon_m(z, Real(0), m, win); };
    p.target = Real(1);
    p.lo = Real(2000);
    p.hi = Real(20000);
    p.increasing = false;
    p.tol = dec("1e-20");
    CHECK(abs(solvers::solve_monotone(p) - dec("10758.2")) <= dec("0.1"));
  }

  // increasing the deviation lowers the bound
  const Real z = dec("10640.8");
  Real prev = upsilon_m(z, Real(0), 22, win);
  for (int i = 1; i <= 20; ++i) {
    Real cur = upsilon_m(z, Real(i) / 100, 22, win);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS(upsilon_m(z, Real(60), 1, win));  // nonpositive factor
}

TEST_CASE("four-factor window bound") {
  PrimeTable t = first_primes(64);
  Window44 win = Window44::make(t);
  const Real z = dec("10640.8");
  const Real w = dec("0.2037");

  // w1 = w2 = 0 degenerates to the two-factor bound
  for (int m : {11, 22, 33}) {
    auto s = PartitionSizes::make(m, m > 1 ? m - 1 : 1, 5);
    CHECK(close(upsilon_m_m1_m2(z, w, Real(0), Real(0), s, win), upsilon_m(z, w, m, win),
                dec("1e-50")));
  }

  // decreasing in w2 at fixed other arguments (finite differences)
  auto s = PartitionSizes::make(11, 5, 10);
  Real prev = upsilon_m_m1_m2(z, w, dec("0.01"), Real(0), s, win);
  for (int i = 1; i <= 10; ++i) {
    Real cur = upsilon_m_m1_m2(z, w, dec("0.01"), Real(i) / 200, s, win);
    CHECK(cur < prev);
    prev = cur;
  }

  // quoted split bounds push every root below the window floor
  const Real w1 = dec("0.010296421544");
  const Real w2 = dec("0.093154520284");
  for (int m1 = 1; m1 <= 10; ++m1) {
    for (int m2 : {1, 10, 20, 32}) {
      auto sz = PartitionSizes::make(11, m1, m2);
      CHECK(upsilon_m_m1_m2_max_over_w(z, w - dec("0.01"), w, w1, w2, sz, win) < 1);
    }
  }

  CHECK_THROWS(PartitionSizes::make(11, 11, 5));  // m1 must stay below m
}

TEST_CASE("elimination family constants match the explicit low-order forms") {
  PrimeTable t = first_primes(120);
  // first family: c1 = 2^{(k-j1)/k} 3^{(j1-j2)/k} j2^{-j2/k} beta(n_{j2})^{1/k},
  // c2 = log(n_k n_{j1} / n_{j2}^3)
  for (std::size_t k : {74, 80, 94}) {
    for (int j1 : {10, 20, 40}) {
      for (int j2 : {1, 5, 10}) {
        const int js1[] = {j1, j2};
        FCutoffs c1s = FCutoffs::make(1, k, js1);
        const Real kk(k);
        Real want_c1 = pow(Real(2), Real(k - j1) / kk) * pow(Real(3), Real(j1 - j2) / kk) *
                       pow(Real(j2), -Real(j2) / kk) *
                       exp(t.log_beta_primorial(j2) / kk);
        CHECK(close(f_c1(c1s, t), want_c1, dec("1e-45")));
        Real want_c2 =
            t.log_primorial(k) + t.log_primorial(j1) - 3 * t.log_primorial(j2);
        if (want_c2 > 0) CHECK(close(f_c2(c1s, t), want_c2, dec("1e-45")));

        // second family with j3 = j2 (degenerate nesting)
        const int js2[] = {j1, j2, j2};
        FCutoffs c2s = FCutoffs::make(2, k, js2);
        Real want2_c1 = pow(Real(2), Real(k - j1) / kk) * pow(Real(3), Real(j1 - j2) / kk) *
                        pow(Real(4), Real(0) / kk) * pow(Real(j2), -Real(j2) / kk) *
                        exp(t.log_beta_primorial(j2) / kk);
        CHECK(close(f_c1(c2s, t), want2_c1, dec("1e-45")));
        Real want2_c2 = t.log_primorial(k) + t.log_primorial(j1) + t.log_primorial(j2) -
                        4 * t.log_primorial(j2);
        if (want2_c2 > 0) CHECK(close(f_c2(c2s, t), want2_c2, dec("1e-45")));
      }
    }
  }
}

TEST_CASE("the elimination family dominates synthetic profiles") {
  PrimeTable t = first_primes(120);
  test::Rng rng(31);
  for (int iter = 0; iter < 50; ++iter) {
    const std::size_t k = 74 + rng.below(21);
    const int j1 = 5 + static_cast<int>(rng.below(20));
    const int j2 = 1 + static_cast<int>(rng.below(j1));

    // synthetic n' = p1^a1 ... p_{j2}^{a_{j2}} squares to j1, singles to k
    std::vector<std::uint32_t> ranks(k), exps(k, 1);
    std::uint32_t prev_a = 6;
    std::vector<std::uint32_t> head(j2);
    for (int i = 0; i < j2; ++i) {
      prev_a = 3 + rng.below(prev_a - 2);
      head[i] = prev_a;
    }
    for (std::size_t i = 0; i < k; ++i) {
      ranks[i] = static_cast<std::uint32_t>(i + 1);
      if (i < static_cast<std::size_t>(j2)) {
        exps[i] = head[i];
      } else if (i < static_cast<std::size_t>(j1)) {
        exps[i] = 2;
      }
    }
    Factorization f = make_factorization(ranks, exps, t);
    const int js[] = {j1, j2};
    FCutoffs c = FCutoffs::make(1, k, js);
    CHECK(lambda_of(f) <= f_value(c, f.log_n, t) + dec("1e-45"));
    FMax m = f_max(c, t, active_context().root_tol);
    CHECK(lambda_of(f) <= m.value + dec("1e-45"));
  }
}

TEST_CASE("pinned profiles evaluate exactly") {
  PrimeTable t = first_primes(120);
  // profile (j1) with j2 = 0: n = n_k n_{j1}, tau = 2^{k-j1} 3^{j1}
  const std::size_t k = 80;
  const int j1 = 12;
  std::vector<std::uint32_t> ranks(k), exps(k, 1);
  for (std::size_t i = 0; i < k; ++i) {
    ranks[i] = static_cast<std::uint32_t>(i + 1);
    if (i < static_cast<std::size_t>(j1)) exps[i] = 2;
  }
  Factorization f = make_factorization(ranks, exps, t);
  const int js[] = {j1};
  CHECK(close(pinned_profile_lambda(k, js, t), lambda_of(f), dec("1e-50")));
  CHECK(close(pinned_profile_lambda(k, {}, t), lambda_of(primorial(t, k)), dec("1e-50")));
}
