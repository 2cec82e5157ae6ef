#include "taubound/precision.hpp"

namespace taubound {

namespace {

// the 60-digit default must be in force before the first Real is created
[[maybe_unused]] const bool g_boot = [] {
  Real::default_precision(60);
  return true;
}();

thread_local PrecisionContext t_active = [] {
  Real::default_precision(60);
  PrecisionContext ctx;
  ctx.digits = 60;
  ctx.threshold = Real("0.999999");
  ctx.root_tol = Real("1e-30");
  return ctx;
}();

}  // namespace

PrecisionContext PrecisionContext::make(unsigned digits) {
  if (digits < 50) {
    throw std::invalid_argument("PrecisionContext: digits must be >= 50, got " +
                                std::to_string(digits));
  }
  // Construct the Real fields at the requested precision, not the caller's.
  unsigned saved = Real::default_precision();
  Real::default_precision(digits);
  PrecisionContext ctx;
  ctx.digits = digits;
  ctx.threshold = Real("0.999999");
  ctx.root_tol = Real("1e-30");
  Real::default_precision(saved);
  return ctx;
}

Real PrecisionContext::comparison_slack() const {
  return pow(Real(10), -static_cast<int>(digits) + 10);
}

void install(const PrecisionContext& ctx) {
  if (ctx.digits < 50) {
    throw std::invalid_argument("PrecisionContext: digits must be >= 50");
  }
  if (!(ctx.threshold < 1)) {
    throw std::invalid_argument("PrecisionContext: threshold must be < 1");
  }
  Real::default_precision(ctx.digits);
  t_active = ctx;
}

const PrecisionContext& active_context() { return t_active; }

void install_in_worker(const PrecisionContext& ctx) {
  Real::default_precision(ctx.digits);
  t_active = ctx;
}

Real dec(const char* literal) { return Real(literal); }

bool leq_with_slack(const Real& a, const Real& b) {
  if (t_active.widen_comparisons) {
    return a <= b + t_active.comparison_slack() * (1 + abs(b));
  }
  return a <= b;
}

}  // namespace taubound
