#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace taubound {

/// Radix-independent floating value; precision is set per thread in decimal
/// digits through PrecisionContext.  Expression templates are off so values
/// behave like ordinary scalars in lambdas and containers.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// Exact integer for divisor counts and small materialized candidates.
using BigInt = boost::multiprecision::mpz_int;

/// Working-precision policy for a verification run.
///
/// Every comparison against a printed constant goes through `digits`
/// significant decimals; 50 is the floor required for the elimination
/// criteria to have meaning, 60 is the default working headroom.
struct PrecisionContext {
  unsigned digits = 60;
  Real threshold;        // elimination criterion, strictly below 1
  Real root_tol;         // bisection width/residual tolerance
  bool widen_comparisons = false;  // paranoia mode: pad comparisons by comparison_slack()

  static PrecisionContext make(unsigned digits = 60);

  /// 10^-(digits-10): the error budget granted to equality-like comparisons.
  Real comparison_slack() const;
};

/// Installs `ctx` as the active context of the calling thread and sets the
/// default precision of newly created Real values accordingly.
void install(const PrecisionContext& ctx);

/// The context most recently installed in this thread (installs the default
/// one on first use).
const PrecisionContext& active_context();

/// Re-applies the active context of the spawning thread inside a worker.
/// Worker threads must call this before touching any Real.
void install_in_worker(const PrecisionContext& ctx);

/// Decimal constant at working precision.  All fractional literals in the
/// code base go through this so that values follow decimal, not binary,
/// rounding.
Real dec(const char* literal);

/// a <= b up to the active comparison slack when paranoia mode is on.
bool leq_with_slack(const Real& a, const Real& b);

}  // namespace taubound
