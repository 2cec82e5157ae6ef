#include "taubound/solvers.hpp"

#include <stdexcept>

namespace taubound::solvers {

namespace {

int sign_vs_target(const Real& v, const Real& target) {
  if (v < target) return -1;
  if (v > target) return 1;
  return 0;
}

}  // namespace

Real solve_monotone(const RootProblem& p) {
  if (!p.eval) throw std::invalid_argument("solve_monotone: missing eval");
  if (!(p.tol > 0)) throw std::invalid_argument("solve_monotone: tol must be > 0");
  Real lo = p.lo, hi = p.hi;
  if (!(lo < hi)) throw std::invalid_argument("solve_monotone: bad bracket");

  Real flo = p.eval(lo);
  Real fhi = p.eval(hi);
  auto straddles = [&] {
    int a = sign_vs_target(flo, p.target);
    int b = sign_vs_target(fhi, p.target);
    return a == 0 || b == 0 || a != b;
  };

  // expand upward by doubling the width; the low edge is a domain boundary
  int doublings = 0;
  while (!straddles()) {
    const int need_hi_side = p.increasing ? 1 : -1;
    if (sign_vs_target(fhi, p.target) == need_hi_side) break;  // already past, hopeless low side
    hi += (hi - lo);
    fhi = p.eval(hi);
    if (++doublings >= 64) break;
  }
  if (!straddles()) {
    throw std::domain_error("solve_monotone: bracket does not straddle the target");
  }

  // spot-check the declared direction at 8 interior points
  {
    Real prev = flo;
    for (int i = 1; i <= 8; ++i) {
      Real x = lo + (hi - lo) * i / 9;
      Real v = p.eval(x);
      if (p.increasing ? (v < prev) : (v > prev)) {
        throw std::domain_error("solve_monotone: monotonicity spot-check failed");
      }
      prev = v;
    }
    if (p.increasing ? (fhi < prev) : (fhi > prev)) {
      throw std::domain_error("solve_monotone: monotonicity spot-check failed");
    }
  }

  const Real residual_tol = p.tol * (abs(p.target) > 1 ? abs(p.target) : Real(1));
  Real mid = (lo + hi) / 2;
  int steps = 0;
  for (; steps < 2048; ++steps) {
    const Real next = (lo + hi) / 2;
    if (next == lo || next == hi) break;  // precision exhausted
    mid = next;
    Real fmid = p.eval(mid);
    if (hi - lo <= p.tol && abs(fmid - p.target) <= residual_tol) break;
    const int s = sign_vs_target(fmid, p.target);
    if (s == 0) break;
    const bool go_right = p.increasing ? (s < 0) : (s > 0);
    if (go_right) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (p.steps_out) *p.steps_out = steps;

  if (abs(p.eval(mid) - p.target) > residual_tol) {
    throw std::runtime_error("solve_monotone: residual above tolerance after bisection");
  }
  return mid;
}

Extremum maximize_bracketed(const std::function<Real(const Real&)>& g, Real lo, Real hi,
                            const Real& tol) {
  if (!g) throw std::invalid_argument("maximize_bracketed: missing function");
  if (!(lo < hi)) throw std::invalid_argument("maximize_bracketed: bad bracket");
  if (!(tol > 0)) throw std::invalid_argument("maximize_bracketed: tol must be > 0");

  // unimodality spot-check: samples must rise to a peak then fall, and a
  // completely flat profile is rejected
  {
    constexpr int N = 9;
    Real v[N];
    bool all_equal = true;
    for (int i = 0; i < N; ++i) {
      v[i] = g(lo + (hi - lo) * i / (N - 1));
      if (i && v[i] != v[0]) all_equal = false;
    }
    if (all_equal) throw std::domain_error("maximize_bracketed: flat profile");
    int peak = 0;
    for (int i = 1; i < N; ++i) {
      if (v[i] > v[peak]) peak = i;
    }
    for (int i = 0; i + 1 < N; ++i) {
      if (i < peak && v[i] > v[i + 1]) {
        throw std::domain_error("maximize_bracketed: unimodality spot-check failed");
      }
      if (i >= peak && v[i] < v[i + 1]) {
        throw std::domain_error("maximize_bracketed: unimodality spot-check failed");
      }
    }
  }

  const Real invphi = (sqrt(Real(5)) - 1) / 2;
  Real a = lo, b = hi;
  Real c = b - invphi * (b - a);
  Real d = a + invphi * (b - a);
  Real fc = g(c), fd = g(d);
  for (int i = 0; i < 4096 && b - a > tol; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = g(d);
    }
  }
  Extremum out;
  out.arg = (a + b) / 2;
  out.value = g(out.arg);
  return out;
}

}  // namespace taubound::solvers
