#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "taubound/factorization.hpp"
#include "taubound/precision.hpp"
#include "taubound/primes.hpp"

namespace taubound {

/// Normalized divisor-growth score: tau(n) = (1 + lambda(n) log n / (k log k))^k
/// with k = omega(n) >= 2.
Real lambda_of(const Factorization& f);

/// t(n) = tau(n)^{1/k} / log n, k = omega(n) >= 1.
Real t_of(const Factorization& f);

/// r(n) = (1/k)(log tau(n) - k log(log n / (k log k))), k = omega(n) >= 2.
Real r_of(const Factorization& f);

/// upsilon(n, z) = log k (1 + log gamma(n)/log z) beta(n)^{1/k} - k log k / log z.
/// The `_log` form takes log z directly; witnesses exist only in log space.
Real upsilon_log(const Factorization& f, const Real& log_z, const PrimeTable& table);
Real upsilon(const Factorization& f, const Real& z, const PrimeTable& table);
Real upsilon(const Factorization& f, const Factorization& z, const PrimeTable& table);

/// r_1(z, k) = log beta(n_k)/k + log log k + log(1 + log n_k / log z),
/// decreasing in z.  Takes log z.
Real r1(const Real& log_z, std::size_t k, const PrimeTable& table);

/// log d_k = log( 2^{k-u} beta(n_u) / u^u * (log(z_k n_u^2 / n_k))^u ),
/// the divisor-count cap used to push counterexample bounds below 24 n_16.
Real log_d_k(std::size_t k, std::size_t u_k, const Real& log_zk, const PrimeTable& table);

/// r_2(z, k) = (1/k)(log d_k - k log(log z / (k log k))).  Takes log z.
Real r2(const Real& log_z, std::size_t k, const Real& log_dk);

/// eta_2 = exp((1/6) log 96 - log(log 60060 / (6 log 6))).
Real eta2();
/// eta_3 = lambda(720 n_7).
Real eta3(const PrimeTable& table);

/// log(tau(n)) log log n / (log 2 log n).
Real nicolas_robin_ratio(const Factorization& f);

/// The Definition-1 quantities evaluated on x_i = (a_i + 1) log q_i / log n.
/// w, w1, w2 are the primed (k-scaled) absolute deviations.
struct PartitionStats {
  Real mu, mu1, mu2;
  Real w, w1, w2;
  int m = 0;
};
PartitionStats partition_stats(const Factorization& f, const PrimeTable& table);

/// Constants of the 44-prime window shared by every upsilon_m-type bound.
struct Window44 {
  Real log_n44;   // log n_44
  Real beta_pow;  // beta(n_44)^{1/44}
  Real log_k;     // log 44
  Real k_log_k;   // 44 log 44
  static Window44 make(const PrimeTable& table);
};

/// Validated partition split sizes for the k = 44 bounds.
struct PartitionSizes {
  int k = 44;
  int m = 0;
  int m1 = 0;
  int m2 = 0;
  static PartitionSizes make(int m, int m1, int m2, int k = 44);
};

/// upsilon_m(z, w): two-factor bound at k = 44; z stands for log n.
/// Throws on a nonpositive base factor.
Real upsilon_m(const Real& z, const Real& w, int m, const Window44& c);

/// upsilon_{m,m1,m2}(z, w, w1, w2): four-factor refinement.
Real upsilon_m_m1_m2(const Real& z, const Real& w, const Real& w1, const Real& w2,
                     const PartitionSizes& s, const Window44& c);

/// max over w in [w_lo, w_hi] of upsilon_{m,m1,m2}(z, w, w1, w2).  Uses the
/// once-decreasing derivative certificate; falls back to locating the single
/// stationary point when the derivative starts positive.
Real upsilon_m_m1_m2_max_over_w(const Real& z, const Real& w_lo, const Real& w_hi,
                                const Real& w1, const Real& w2, const PartitionSizes& s,
                                const Window44& c);

/// Cutoff profile for the f_s elimination family.  j[0] = j_1 down to
/// j[s] = j_{s+1}; ranks with index <= j_t carry exponent >= t+1.
struct FCutoffs {
  int s = 1;
  std::size_t k = 0;
  std::array<int, 5> j{};

  static FCutoffs make(int s, std::size_t k, std::span<const int> js);
};

/// c_1 = prod_{t=1..s+1} (t+1)^{(j_{t-1}-j_t)/k} * j_{s+1}^{-j_{s+1}/k} * beta(n_{j_{s+1}})^{1/k}
/// with j_0 = k.  Always positive; additionally bounded by 6!/log 2.
Real f_c1(const FCutoffs& c, const PrimeTable& table);

/// c_2 = log(n_k n_{j_1} ... n_{j_s} / n_{j_{s+1}}^{s+2}).  Throws when <= 0.
Real f_c2(const FCutoffs& c, const PrimeTable& table);

/// f_s evaluated at log z = y:  (c_1 (y - c_2)^{j_{s+1}/k} - 1) k log k / y.
Real f_value(const FCutoffs& c, const Real& log_z, const PrimeTable& table);

struct FMax {
  Real arg_log_z;
  Real value;
};

/// Unique maximum of f_s over its domain, located through the h-root of the
/// associated scaled derivative.
FMax f_max(const FCutoffs& c, const PrimeTable& table, const Real& tol);

/// Exact lambda of a fully pinned profile (j_{s+1} = 0 degenerate cases):
/// js = (j_1, ..., j_s) with k >= j_1 >= ... >= j_s >= 0 and rank r carrying
/// exponent 1 + #{t : r <= j_t}.  An empty js is the squarefree profile.
Real pinned_profile_lambda(std::size_t k, std::span<const int> js, const PrimeTable& table);

}  // namespace taubound
