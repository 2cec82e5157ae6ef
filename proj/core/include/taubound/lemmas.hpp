#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "taubound/factorization.hpp"
#include "taubound/precision.hpp"

namespace taubound::lemmas {

/// AM-GM bound for a product of sorted positives, at three refinement levels:
/// level 1: mu^k; level 2: mu_1^m mu_2^{k-m}; level 3: the four-factor split
/// (m, m1, m2).  Validates the interleaving hypotheses and throws when the
/// ordering is violated.
Real amgm_partition_bound(std::span<const Real> xs, int level, int m = 0, int m1 = 0,
                          int m2 = 0);

/// prod (1 + x_i z_i) <= prod (z_i / k) (1 + sum 1/z_i)^k for sum x_i = 1,
/// x_i >= -1/z_i, z_i > 0.  Returns the right-hand side.
Real ineqfond_bound(std::span<const Real> zs, std::span<const Real> xs);

/// The x achieving equality: x_i = (1/k)(1 + sum 1/z_j) - 1/z_i.
std::vector<Real> ineqfond_equality_point(std::span<const Real> zs);

/// Certificate that (mu - w/2m)^m (mu + w/(2(k-m)))^{k-m} strictly decreases
/// at w: the closed-form logarithmic derivative is negative.  Hypotheses are
/// gated and throw when violated.
bool g1_decreasing(const Real& mu, const Real& w, int m, int k);

/// Parameters of the four-factor deviation function f(w).
struct FourFactorParams {
  Real mu;
  Real w;    // evaluation point w_0
  Real w1, w2;
  int k = 0, m = 0, m1 = 0, m2 = 0;
};

/// f'(w_0)/f(w_0) in closed form.
Real four_factor_logderiv(const FourFactorParams& p);

/// Certificate: f'(w_0) < 0, hence f(w) < f(w_0) for all w > w_0 (the
/// second derivative of the log-derivative is negative throughout).
bool f_once_decreasing(const FourFactorParams& p);

/// Certificates that B prod (g_i + A/z)^{r_i} - C/z decreases at z, for two
/// and four factors.  The hypothesis C < AB is gated (throws when violated,
/// and returns false only if the evaluated closed-form condition fails).
bool z2_decreasing(const Real& A, const Real& B, const Real& C, const Real& g1,
                   const Real& g2, const Real& r1, const Real& r2, const Real& z);
bool z4_decreasing(const Real& A, const Real& B, const Real& C,
                   std::span<const Real, 4> g, std::span<const Real, 4> r, const Real& z);

/// psi(alpha, x, phi) = |((alpha+1)B - A)/x - phi| minimization over
/// alpha in Z, x in [x1,x2], phi in [phi1,phi2].
struct PsiArgmin {
  long long alpha = 0;
  Real x;
  Real phi;
};
struct PsiMin {
  Real value;
  std::vector<PsiArgmin> argmin;  // tie-broken: smallest alpha, then x, then phi
};
PsiMin psi_minimize(const Real& A, const Real& B, const Real& x1, const Real& x2,
                    const Real& phi1, const Real& phi2);

/// The alpha window excluded in the restricted variant (phi = 1):
/// {ceil(((1-delta)x1+A)/B)-1, ..., floor(((1+delta)x2+A)/B)-1}.
std::pair<long long, long long> psi_excluded_window(const Real& A, const Real& B,
                                                    const Real& x1, const Real& x2,
                                                    const Real& delta);

/// Minimum of psi(alpha, x, 1) over x in [x1,x2] and alpha outside the
/// excluded window.
PsiMin psi_minimize_excluded(const Real& A, const Real& B, const Real& x1, const Real& x2,
                             const Real& delta);

/// (1 + l/(k alpha)) (1 - log p / log n) for p^alpha || n, alpha >= 2;
/// an upper bound for lambda(n)/lambda(n/p) (l = 2) and t(n)/t(n/p) (l = 1).
Real ratio_bound(const Factorization& f, std::size_t prime_rank, int ell,
                 const PrimeTable& table);

/// The equivalence: bound < 1  <=>  p > n^{l/(alpha k + l)}.
bool ratio_below_one(int ell, std::size_t k, std::uint32_t alpha, const Real& log_n,
                     const Real& log_p);

/// Smallest exponent guaranteeing the bound drops below 1:
/// max(2, ceil((l/k)(log n/log p - 1))).
std::uint32_t ratio4_alpha(int ell, std::size_t k, const Real& log_n, const Real& log_p);

/// Unique maximum of g(z) = (c1 (z - c2)^alpha - 1)/z on (c1^{-1/alpha}+c2, oo),
/// located as the root of h(z) = c1 alpha z - c1 (z-c2) + (z-c2)^{1-alpha},
/// which is strictly decreasing there.
struct GMax {
  Real z0;
  Real value;
};
GMax g_unique_max(const Real& c1, const Real& c2, const Real& alpha, const Real& tol);

}  // namespace taubound::lemmas
