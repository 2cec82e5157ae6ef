#include "taubound/bounds.hpp"

#include <algorithm>
#include <stdexcept>

#include "taubound/lemmas.hpp"

namespace taubound {

namespace {

Real log_int(std::uint64_t v) { return log(Real(v)); }

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace

Real lambda_of(const Factorization& f) {
  const std::size_t k = f.omega();
  require(k >= 2, "lambda_of: omega(n) must be >= 2");
  const Real klogk = Real(k) * log_int(k);
  return (exp(log_tau(f) / Real(k)) - 1) * klogk / f.log_n;
}

Real t_of(const Factorization& f) {
  require(f.omega() >= 1, "t_of: omega(n) must be >= 1");
  return exp(log_tau(f) / Real(f.omega())) / f.log_n;
}

Real r_of(const Factorization& f) {
  const std::size_t k = f.omega();
  require(k >= 2, "r_of: omega(n) must be >= 2");
  const Real klogk = Real(k) * log_int(k);
  return log_tau(f) / Real(k) - log(f.log_n / klogk);
}

Real upsilon_log(const Factorization& f, const Real& log_z, const PrimeTable& table) {
  const std::size_t k = f.omega();
  require(k >= 2, "upsilon: omega(n) must be >= 2");
  require(log_z > 0, "upsilon: z must be > 1");
  const Real logk = log_int(k);
  const Real beta_pow = exp(beta_log(f, table) / Real(k));
  return logk * (1 + gamma_log(f, table) / log_z) * beta_pow - Real(k) * logk / log_z;
}

Real upsilon(const Factorization& f, const Real& z, const PrimeTable& table) {
  require(z > 1, "upsilon: z must be > 1");
  return upsilon_log(f, log(z), table);
}

Real upsilon(const Factorization& f, const Factorization& z, const PrimeTable& table) {
  return upsilon_log(f, z.log_n, table);
}

Real r1(const Real& log_z, std::size_t k, const PrimeTable& table) {
  require(k >= 2, "r1: k must be >= 2");
  require(log_z > 0, "r1: z must be > 1");
  return table.log_beta_primorial(k) / Real(k) + log(log_int(k)) +
         log(1 + table.log_primorial(k) / log_z);
}

Real log_d_k(std::size_t k, std::size_t u_k, const Real& log_zk, const PrimeTable& table) {
  require(k >= 2 && u_k >= 1 && u_k <= k, "log_d_k: bad k/u_k");
  const Real base = log_zk + 2 * table.log_primorial(u_k) - table.log_primorial(k);
  require(base > 0, "log_d_k: nonpositive log argument");
  return Real(k - u_k) * log_int(2) + table.log_beta_primorial(u_k) -
         Real(u_k) * log_int(u_k) + Real(u_k) * log(base);
}

Real r2(const Real& log_z, std::size_t k, const Real& log_dk) {
  require(k >= 2, "r2: k must be >= 2");
  require(log_z > 0, "r2: z must be > 1");
  return log_dk / Real(k) - log(log_z / (Real(k) * log_int(k)));
}

Real eta2() {
  return exp(log_int(96) / 6 - log(log_int(60060) / (6 * log_int(6))));
}

Real eta3(const PrimeTable& table) {
  const std::uint32_t ranks[] = {1, 2, 3, 4, 5, 6, 7};
  const std::uint32_t exps[] = {5, 3, 2, 1, 1, 1, 1};  // 720 n_7 = 2^5 3^3 5^2 7 11 13 17
  return lambda_of(make_factorization(ranks, exps, table));
}

Real nicolas_robin_ratio(const Factorization& f) {
  require(f.log_n > 1, "nicolas_robin_ratio: n must be >= 3");
  return log_tau(f) * log(f.log_n) / (log_int(2) * f.log_n);
}

PartitionStats partition_stats(const Factorization& f, const PrimeTable& table) {
  const std::size_t k = f.omega();
  require(k >= 2, "partition_stats: omega(n) must be >= 2");
  std::vector<Real> xs;
  xs.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    xs.push_back(Real(f.exponents[i] + 1) * table.log_prime(f.prime_ranks[i]) / f.log_n);
  }
  std::sort(xs.begin(), xs.end());

  PartitionStats st;
  st.mu = (1 + gamma_log(f, table) / f.log_n) / Real(k);
  Real dev = 0;
  int m = 0;
  for (const Real& x : xs) {
    dev += abs(x - st.mu);
    if (x <= st.mu) ++m;
  }
  if (m == static_cast<int>(k)) m = static_cast<int>(k) - 1;  // all x_i equal to mu
  st.m = m;
  st.w = Real(k) * dev;
  st.mu1 = st.mu - st.w / (2 * m * Real(k));
  st.mu2 = st.mu + st.w / (2 * (Real(k) - m) * Real(k));
  Real d1 = 0, d2 = 0;
  for (int i = 0; i < static_cast<int>(k); ++i) {
    if (i < m) {
      d1 += abs(xs[i] - st.mu1);
    } else {
      d2 += abs(xs[i] - st.mu2);
    }
  }
  st.w1 = Real(k) * d1;
  st.w2 = Real(k) * d2;
  return st;
}

Window44 Window44::make(const PrimeTable& table) {
  require(table.size() >= 44, "Window44: prime table must cover 44 primes");
  Window44 c;
  c.log_n44 = table.log_primorial(44);
  c.beta_pow = exp(table.log_beta_primorial(44) / 44);
  c.log_k = log_int(44);
  c.k_log_k = 44 * c.log_k;
  return c;
}

PartitionSizes PartitionSizes::make(int m, int m1, int m2, int k) {
  PartitionSizes s;
  s.k = k;
  s.m = m;
  s.m1 = m1;
  s.m2 = m2;
  require(k >= 4, "PartitionSizes: k must be >= 4");
  require(m >= 1 && m <= k - 1, "PartitionSizes: need 1 <= m <= k-1");
  require(m1 >= 1 && m1 <= m - 1, "PartitionSizes: need 1 <= m1 <= m-1");
  require(m2 >= 1 && m2 <= k - m - 1, "PartitionSizes: need 1 <= m2 <= k-m-1");
  return s;
}

Real upsilon_m(const Real& z, const Real& w, int m, const Window44& c) {
  require(z > 0, "upsilon_m: z must be > 0");
  require(w >= 0, "upsilon_m: w must be >= 0");
  require(m >= 1 && m <= 43, "upsilon_m: m must be in 1..43");
  const Real base = 1 + c.log_n44 / z;
  const Real f1 = base - w / (2 * Real(m));
  const Real f2 = base + w / (2 * Real(44 - m));
  require(f1 > 0, "upsilon_m: nonpositive base factor");
  const Real mm = Real(m) / 44;
  return c.beta_pow * c.log_k * pow(f1, mm) * pow(f2, 1 - mm) - c.k_log_k / z;
}

namespace {

struct Upsilon2Factors {
  Real f1, f2, f3, f4;
  Real e1, e2, e3, e4;  // exponents m1/44 etc.
};

Upsilon2Factors upsilon2_factors(const Real& z, const Real& w, const Real& w1, const Real& w2,
                                 const PartitionSizes& s, const Window44& c) {
  require(z > 0, "upsilon_m_m1_m2: z must be > 0");
  require(w >= 0 && w1 >= 0 && w2 >= 0, "upsilon_m_m1_m2: deviations must be >= 0");
  const Real base = 1 + c.log_n44 / z;
  const Real lo = base - w / (2 * Real(s.m));
  const Real hi = base + w / (2 * Real(s.k - s.m));
  Upsilon2Factors r;
  r.f1 = lo - w1 / (2 * Real(s.m1));
  r.f2 = lo + w1 / (2 * Real(s.m - s.m1));
  r.f3 = hi - w2 / (2 * Real(s.m2));
  r.f4 = hi + w2 / (2 * Real(s.k - s.m - s.m2));
  require(r.f1 > 0 && r.f3 > 0, "upsilon_m_m1_m2: nonpositive base factor");
  const Real kk(s.k);
  r.e1 = Real(s.m1) / kk;
  r.e2 = Real(s.m - s.m1) / kk;
  r.e3 = Real(s.m2) / kk;
  r.e4 = Real(s.k - s.m - s.m2) / kk;
  return r;
}

}  // namespace

Real upsilon_m_m1_m2(const Real& z, const Real& w, const Real& w1, const Real& w2,
                     const PartitionSizes& s, const Window44& c) {
  const auto f = upsilon2_factors(z, w, w1, w2, s, c);
  return c.beta_pow * c.log_k * pow(f.f1, f.e1) * pow(f.f2, f.e2) * pow(f.f3, f.e3) *
             pow(f.f4, f.e4) -
         c.k_log_k / z;
}

Real upsilon_m_m1_m2_max_over_w(const Real& z, const Real& w_lo, const Real& w_hi,
                                const Real& w1, const Real& w2, const PartitionSizes& s,
                                const Window44& c) {
  require(w_lo <= w_hi, "upsilon_m_m1_m2_max_over_w: empty w interval");
  const Real base = 1 + c.log_n44 / z;
  auto logderiv = [&](const Real& w) {
    lemmas::FourFactorParams p;
    p.mu = base;
    p.w = w;
    p.w1 = w1;
    p.w2 = w2;
    p.k = s.k;
    p.m = s.m;
    p.m1 = s.m1;
    p.m2 = s.m2;
    return lemmas::four_factor_logderiv(p);
  };
  auto value = [&](const Real& w) { return upsilon_m_m1_m2(z, w, w1, w2, s, c); };

  // The log-derivative of the product part is strictly decreasing in w, so
  // the product rises then falls; at most one interior stationary point.
  if (logderiv(w_lo) <= 0) return value(w_lo);
  if (logderiv(w_hi) >= 0) return value(w_hi);
  Real a = w_lo, b = w_hi;
  const Real tol = active_context().root_tol;
  while (b - a > tol) {
    Real mid = (a + b) / 2;
    if (logderiv(mid) > 0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return value((a + b) / 2);
}

FCutoffs FCutoffs::make(int s, std::size_t k, std::span<const int> js) {
  require(s >= 1 && s <= 4, "FCutoffs: family index must be 1..4");
  require(js.size() == static_cast<std::size_t>(s) + 1, "FCutoffs: need j_1..j_{s+1}");
  FCutoffs c;
  c.s = s;
  c.k = k;
  int prev = static_cast<int>(k);
  for (int t = 0; t <= s; ++t) {
    require(js[t] >= 1, "FCutoffs: cutoffs must be >= 1");
    require(js[t] <= prev, "FCutoffs: cutoffs must not increase");
    c.j[t] = js[t];
    prev = js[t];
  }
  return c;
}

Real f_c1(const FCutoffs& c, const PrimeTable& table) {
  const Real kk(c.k);
  int prev = static_cast<int>(c.k);
  Real log_c1 = 0;
  for (int t = 0; t <= c.s; ++t) {
    log_c1 += Real(prev - c.j[t]) * log_int(t + 2) / kk;
    prev = c.j[t];
  }
  const int last = c.j[c.s];
  log_c1 += -Real(last) * log_int(last) / kk + table.log_beta_primorial(last) / kk;
  Real c1 = exp(log_c1);
  require(c1 > 0, "f_c1: c1 must be positive");
  return c1;
}

Real f_c2(const FCutoffs& c, const PrimeTable& table) {
  Real c2 = table.log_primorial(c.k);
  for (int t = 0; t < c.s; ++t) c2 += table.log_primorial(c.j[t]);
  c2 -= Real(c.s + 2) * table.log_primorial(c.j[c.s]);
  require(c2 > 0, "f_c2: nonpositive c2");
  return c2;
}

Real f_value(const FCutoffs& c, const Real& log_z, const PrimeTable& table) {
  const Real c1 = f_c1(c, table);
  const Real c2 = f_c2(c, table);
  require(log_z > c2, "f_value: log z must exceed c2");
  const Real alpha = Real(c.j[c.s]) / Real(c.k);
  const Real klogk = Real(c.k) * log_int(c.k);
  return (c1 * pow(log_z - c2, alpha) - 1) * klogk / log_z;
}

FMax f_max(const FCutoffs& c, const PrimeTable& table, const Real& tol) {
  const Real c1 = f_c1(c, table);
  const Real c2 = f_c2(c, table);
  const Real alpha = Real(c.j[c.s]) / Real(c.k);
  const auto gm = lemmas::g_unique_max(c1, c2, alpha, tol);
  FMax out;
  out.arg_log_z = gm.z0;
  out.value = Real(c.k) * log_int(c.k) * gm.value;
  return out;
}

Real pinned_profile_lambda(std::size_t k, std::span<const int> js, const PrimeTable& table) {
  // js = (j_1, ..., j_s) with k >= j_1 >= ... >= j_s >= 0; rank r carries the
  // exponent 1 + #{t : r <= j_t}, so n = n_k n_{j_1} ... n_{j_s} exactly.
  require(k >= 2, "pinned_profile_lambda: k must be >= 2");
  const Real kk(k);
  int prev = static_cast<int>(k);
  Real logtau = 0;
  Real logn = table.log_primorial(k);
  for (std::size_t t = 0; t < js.size(); ++t) {
    require(js[t] >= 0 && js[t] <= prev, "pinned_profile_lambda: cutoffs must not increase");
    logtau += Real(prev - js[t]) * log_int(t + 2);
    logn += table.log_primorial(static_cast<std::size_t>(js[t]));
    prev = js[t];
  }
  logtau += Real(prev) * log_int(js.size() + 2);
  const Real klogk = kk * log_int(k);
  return (exp(logtau / kk) - 1) * klogk / logn;
}

}  // namespace taubound
