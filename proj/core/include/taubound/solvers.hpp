#pragma once

#include <functional>

#include "taubound/precision.hpp"

namespace taubound::solvers {

/// A guarded monotone root problem: eval is declared increasing or
/// decreasing on [lo, hi], the bracket must straddle the target (after
/// doubling expansion), and the declared direction is spot-checked before
/// bisection starts.
struct RootProblem {
  std::function<Real(const Real&)> eval;
  Real target;
  Real lo;
  Real hi;
  bool increasing = false;
  Real tol;                 // width and residual tolerance
  int* steps_out = nullptr; // optional bisection step counter
};

/// Bisection root of a monotone problem.  Guarantees
/// |eval(root) - target| <= tol * max(1, |target|) and a final bracket width
/// <= tol; throws when no straddle can be established or the monotonicity
/// spot-check fails.
Real solve_monotone(const RootProblem& p);

struct Extremum {
  Real arg;
  Real value;
};

/// Golden-section maximum of a unimodal function on [lo, hi].  The
/// unimodality of the samples is checked first; a flat profile is rejected.
Extremum maximize_bracketed(const std::function<Real(const Real&)>& g, Real lo, Real hi,
                            const Real& tol);

}  // namespace taubound::solvers
