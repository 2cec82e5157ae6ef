#include "taubound/lemmas.hpp"

#include <algorithm>
#include <stdexcept>

#include "taubound/solvers.hpp"

namespace taubound::lemmas {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

long long to_ll(const Real& x) { return x.convert_to<long long>(); }

long long floor_ll(const Real& x) { return to_ll(floor(x)); }
long long ceil_ll(const Real& x) { return to_ll(ceil(x)); }

}  // namespace

Real amgm_partition_bound(std::span<const Real> xs, int level, int m, int m1, int m2) {
  const int k = static_cast<int>(xs.size());
  require(k >= 1, "amgm: empty input");
  for (int i = 0; i + 1 < k; ++i) {
    require(xs[i] <= xs[i + 1], "amgm: xs must be sorted ascending");
  }
  require(xs[0] > 0, "amgm: xs must be positive");

  Real sum = 0;
  for (const Real& x : xs) sum += x;
  const Real mu = sum / k;

  if (level == 1) return pow(mu, k);

  require(k >= 2 && m >= 1 && m <= k - 1, "amgm: need 1 <= m <= k-1");
  require(xs[m - 1] <= mu && mu <= xs[m], "amgm: m does not split at the mean");
  Real dev = 0;
  for (const Real& x : xs) dev += abs(x - mu);
  const Real muA = mu - dev / (2 * m);
  const Real muB = mu + dev / (2 * (k - m));

  if (level == 2) return pow(muA, m) * pow(muB, k - m);

  require(level == 3, "amgm: level must be 1, 2 or 3");
  require(k >= 4, "amgm: level 3 needs k >= 4");
  require(m >= 2 && m <= k - 2, "amgm: level 3 needs 2 <= m <= k-2");
  require(m1 >= 1 && m1 <= m - 1, "amgm: need 1 <= m1 <= m-1");
  require(m2 >= 1 && m2 <= k - m - 1, "amgm: need 1 <= m2 <= k-m-1");
  require(xs[m1 - 1] <= muA && muA <= xs[m1], "amgm: m1 does not split at mu_1");
  require(xs[m + m2 - 1] <= muB && muB <= xs[m + m2], "amgm: m2 does not split at mu_2");

  Real dev1 = 0, dev2 = 0;
  for (int i = 0; i < m; ++i) dev1 += abs(xs[i] - muA);
  for (int i = m; i < k; ++i) dev2 += abs(xs[i] - muB);

  return pow(muA - dev1 / (2 * m1), m1) * pow(muA + dev1 / (2 * (m - m1)), m - m1) *
         pow(muB - dev2 / (2 * m2), m2) * pow(muB + dev2 / (2 * (k - m - m2)), k - m - m2);
}

Real ineqfond_bound(std::span<const Real> zs, std::span<const Real> xs) {
  const int k = static_cast<int>(zs.size());
  require(k >= 1, "ineqfond: empty input");
  require(xs.size() == zs.size(), "ineqfond: length mismatch");
  Real sum = 0;
  for (int i = 0; i < k; ++i) {
    require(zs[i] > 0, "ineqfond: z must be positive");
    require(xs[i] >= -1 / zs[i], "ineqfond: x_i must be >= -1/z_i");
    sum += xs[i];
  }
  require(abs(sum - 1) <= active_context().comparison_slack(), "ineqfond: sum x != 1");

  Real rhs = 1;
  Real inv = 0;
  for (int i = 0; i < k; ++i) {
    rhs *= zs[i] / k;
    inv += 1 / zs[i];
  }
  return rhs * pow(1 + inv, k);
}

std::vector<Real> ineqfond_equality_point(std::span<const Real> zs) {
  const int k = static_cast<int>(zs.size());
  require(k >= 1, "ineqfond: empty input");
  Real inv = 0;
  for (const Real& z : zs) {
    require(z > 0, "ineqfond: z must be positive");
    inv += 1 / z;
  }
  std::vector<Real> xs;
  xs.reserve(k);
  for (const Real& z : zs) xs.push_back((1 + inv) / k - 1 / z);
  return xs;
}

bool g1_decreasing(const Real& mu, const Real& w, int m, int k) {
  require(mu > 0, "g1_decreasing: mu must be > 0");
  require(w >= 0, "g1_decreasing: w must be >= 0");
  require(m >= 1 && k - m >= 1, "g1_decreasing: need m >= 1 and k-m >= 1");
  require(mu - w / (2 * Real(m)) > 0, "g1_decreasing: left factor must stay positive");
  const Real d = -1 / (2 * mu - w / m) + 1 / (2 * mu + w / (k - m));
  return d < 0;
}

Real four_factor_logderiv(const FourFactorParams& p) {
  require(p.mu > 0 && p.w >= 0 && p.w1 >= 0 && p.w2 >= 0, "four_factor: bad deviations");
  require(p.m >= 1 && p.k - p.m >= 1 && p.m1 >= 1 && p.m - p.m1 >= 1 && p.m2 >= 1 &&
              p.k - p.m - p.m2 >= 1,
          "four_factor: bad split sizes");
  const Real lo = p.mu - p.w / (2 * Real(p.m));
  const Real hi = p.mu + p.w / (2 * Real(p.k - p.m));
  const Real f1 = lo - p.w1 / (2 * Real(p.m1));
  const Real f2 = lo + p.w1 / (2 * Real(p.m - p.m1));
  const Real f3 = hi - p.w2 / (2 * Real(p.m2));
  const Real f4 = hi + p.w2 / (2 * Real(p.k - p.m - p.m2));
  require(f1 > 0 && f3 > 0, "four_factor: factors must stay positive");
  const Real a = -1 / (2 * Real(p.m));
  const Real b = 1 / (2 * Real(p.k - p.m));
  return Real(p.m1) * a / f1 + Real(p.m - p.m1) * a / f2 + Real(p.m2) * b / f3 +
         Real(p.k - p.m - p.m2) * b / f4;
}

bool f_once_decreasing(const FourFactorParams& p) { return four_factor_logderiv(p) < 0; }

namespace {

bool z_decreasing_impl(const Real& A, const Real& B, const Real& C, std::span<const Real> g,
                       std::span<const Real> r, const Real& z) {
  require(A > 0 && B > 0 && C > 0 && z > 0, "z_decreasing: A,B,C,z must be positive");
  Real rsum = 0;
  Real prod = 1;
  Real harm = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    require(g[i] >= 0, "z_decreasing: gammas must be >= 0");
    require(r[i] >= 0, "z_decreasing: rhos must be >= 0");
    rsum += r[i];
    const Real base = g[i] + A / z;
    prod *= pow(base, r[i]);
    harm += r[i] / base;
  }
  require(abs(rsum - 1) <= active_context().comparison_slack(), "z_decreasing: rhos must sum to 1");
  require(C < A * B, "z_decreasing: hypothesis C < AB violated");
  // Closed form from the proof: decreasing iff C < AB prod (g_i+A/z)^{r_i} sum r_i/(g_i+A/z).
  return C < A * B * prod * harm;
}

}  // namespace

bool z2_decreasing(const Real& A, const Real& B, const Real& C, const Real& g1, const Real& g2,
                   const Real& r1, const Real& r2, const Real& z) {
  const Real g[2] = {g1, g2};
  const Real r[2] = {r1, r2};
  return z_decreasing_impl(A, B, C, std::span<const Real>(g, 2), std::span<const Real>(r, 2), z);
}

bool z4_decreasing(const Real& A, const Real& B, const Real& C, std::span<const Real, 4> g,
                   std::span<const Real, 4> r, const Real& z) {
  return z_decreasing_impl(A, B, C, std::span<const Real>(g.data(), 4),
                           std::span<const Real>(r.data(), 4), z);
}

namespace {

Real psi_value(const Real& A, const Real& B, long long alpha, const Real& x, const Real& phi) {
  return abs((Real(alpha + 1) * B - A) / x - phi);
}

void consider(PsiMin& best, const Real& A, const Real& B, long long alpha, const Real& x,
              const Real& phi) {
  Real v = psi_value(A, B, alpha, x, phi);
  if (best.argmin.empty() || v < best.value) {
    best.value = v;
    best.argmin.assign(1, PsiArgmin{alpha, x, phi});
  } else if (v == best.value) {
    best.argmin.push_back(PsiArgmin{alpha, x, phi});
  }
}

void tiebreak(PsiMin& m) {
  std::sort(m.argmin.begin(), m.argmin.end(), [](const PsiArgmin& a, const PsiArgmin& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    if (a.x != b.x) return a.x < b.x;
    return a.phi < b.phi;
  });
  m.argmin.erase(std::unique(m.argmin.begin(), m.argmin.end(),
                             [](const PsiArgmin& a, const PsiArgmin& b) {
                               return a.alpha == b.alpha && a.x == b.x && a.phi == b.phi;
                             }),
                 m.argmin.end());
}

}  // namespace

PsiMin psi_minimize(const Real& A, const Real& B, const Real& x1, const Real& x2,
                    const Real& phi1, const Real& phi2) {
  require(B > 0, "psi_minimize: B must be > 0");
  require(x1 > 0 && phi1 > 0, "psi_minimize: x1 and phi1 must be > 0");
  require(x1 <= x2 && phi1 <= phi2, "psi_minimize: empty interval");

  const long long lo = ceil_ll((x1 * phi1 + A) / B);
  const long long hi = floor_ll((x2 * phi2 + A) / B);
  if (lo <= hi) {
    // The zero is attainable: alpha + 1 = lo with x phi = (alpha+1)B - A.
    PsiMin m;
    m.value = Real(0);
    const Real target = Real(lo) * B - A;
    Real x = x1;
    if (target > 0) {
      // smallest feasible x with phi in range
      Real xmin = target / phi2;
      x = xmin > x1 ? xmin : x1;
    }
    Real phi = target / x;
    if (phi < phi1) phi = phi1;
    if (phi > phi2) phi = phi2;
    m.argmin.push_back(PsiArgmin{lo - 1, x, phi});
    return m;
  }

  PsiMin best;
  for (long long a : {hi - 1, lo - 1}) {
    for (const Real& x : {x1, x2}) {
      for (const Real& phi : {phi1, phi2}) {
        consider(best, A, B, a, x, phi);
      }
    }
  }
  tiebreak(best);
  return best;
}

std::pair<long long, long long> psi_excluded_window(const Real& A, const Real& B, const Real& x1,
                                                    const Real& x2, const Real& delta) {
  require(B > 0, "psi_excluded_window: B must be > 0");
  require(delta > 0, "psi_excluded_window: delta must be > 0");
  const long long lo = ceil_ll(((1 - delta) * x1 + A) / B) - 1;
  const long long hi = floor_ll(((1 + delta) * x2 + A) / B) - 1;
  return {lo, hi};
}

PsiMin psi_minimize_excluded(const Real& A, const Real& B, const Real& x1, const Real& x2,
                             const Real& delta) {
  require(x1 > 0 && x1 <= x2, "psi_minimize_excluded: bad x interval");
  const auto [wlo, whi] = psi_excluded_window(A, B, x1, x2, delta);
  PsiMin best;
  const Real one(1);
  for (long long a : {wlo - 1, whi + 1}) {
    for (const Real& x : {x1, x2}) {
      consider(best, A, B, a, x, one);
    }
  }
  tiebreak(best);
  return best;
}

Real ratio_bound(const Factorization& f, std::size_t prime_rank, int ell,
                 const PrimeTable& table) {
  require(ell == 1 || ell == 2, "ratio_bound: ell must be 1 or 2");
  const std::size_t k = f.omega();
  require(k >= 2, "ratio_bound: omega(n) must be >= 2");
  std::uint32_t alpha = 0;
  for (std::size_t i = 0; i < f.prime_ranks.size(); ++i) {
    if (f.prime_ranks[i] == prime_rank) {
      alpha = f.exponents[i];
      break;
    }
  }
  require(alpha >= 2, "ratio_bound: requires p^alpha || n with alpha >= 2");
  return (1 + Real(ell) / (Real(k) * alpha)) * (1 - table.log_prime(prime_rank) / f.log_n);
}

bool ratio_below_one(int ell, std::size_t k, std::uint32_t alpha, const Real& log_n,
                     const Real& log_p) {
  require(ell == 1 || ell == 2, "ratio_below_one: ell must be 1 or 2");
  require(alpha >= 1 && k >= 1, "ratio_below_one: bad alpha/k");
  // (1 + l/(k a))(1 - log p/log n) < 1  <=>  p > n^{l/(a k + l)}
  return log_p * (Real(alpha) * Real(k) + ell) > Real(ell) * log_n;
}

std::uint32_t ratio4_alpha(int ell, std::size_t k, const Real& log_n, const Real& log_p) {
  require(ell == 1 || ell == 2, "ratio4_alpha: ell must be 1 or 2");
  const Real need = Real(ell) / Real(k) * (log_n / log_p - 1);
  long long a = ceil_ll(need);
  if (a < 2) a = 2;
  return static_cast<std::uint32_t>(a);
}

GMax g_unique_max(const Real& c1, const Real& c2, const Real& alpha, const Real& tol) {
  require(c1 > 0, "g_unique_max: c1 must be > 0");
  require(c2 >= 0, "g_unique_max: c2 must be >= 0");
  require(alpha > 0 && alpha < 1, "g_unique_max: alpha must be in (0,1)");

  const Real edge = pow(c1, -1 / alpha) + c2;
  auto h = [&](const Real& z) {
    return c1 * alpha * z - c1 * (z - c2) + pow(z - c2, 1 - alpha);
  };

  // h(edge+) = c1 alpha edge > 0 and h is strictly decreasing on the domain.
  Real lo = edge * (1 + Real("1e-50")) + Real("1e-50");
  Real hi = lo + (lo > 1 ? lo : Real(1));
  int doublings = 0;
  while (h(hi) > 0) {
    hi += (hi - lo);
    if (++doublings > 64) throw std::domain_error("g_unique_max: bracket not found");
  }

  solvers::RootProblem p;
  p.eval = h;
  p.target = Real(0);
  p.lo = lo;
  p.hi = hi;
  p.increasing = false;
  p.tol = tol;
  GMax out;
  out.z0 = solvers::solve_monotone(p);
  out.value = (c1 * pow(out.z0 - c2, alpha) - 1) / out.z0;

  // the located point must dominate its neighborhood
  const Real eps = (1 + abs(out.z0)) * Real("1e-6");
  auto g = [&](const Real& z) { return (c1 * pow(z - c2, alpha) - 1) / z; };
  if (out.z0 - eps > edge && !(g(out.z0 - eps) < out.value && g(out.z0 + eps) < out.value)) {
    throw std::runtime_error("g_unique_max: maximum failed the neighborhood check");
  }
  return out;
}

}  // namespace taubound::lemmas
