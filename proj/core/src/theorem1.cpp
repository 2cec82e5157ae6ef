#include "taubound/bounds.hpp"
#include "taubound/lemmas.hpp"
#include "taubound/search.hpp"
#include "taubound/solvers.hpp"

#include "driver_util.hpp"

namespace taubound::search {

using detail::real_str;

namespace detail {

// z with r1(z, k) = target, solved in log space.
Real solve_r1_root(std::size_t k, const Real& target, const PrimeTable& table) {
  solvers::RootProblem p;
  p.eval = [&](const Real& L) { return r1(L, k, table); };
  p.target = target;
  p.lo = dec("1e-3");
  p.hi = Real(100);
  p.increasing = false;
  p.tol = active_context().root_tol;
  return solvers::solve_monotone(p);
}

// Largest exponent alpha of p_j compatible with the t-ratio (ell = 1) or
// lambda-ratio (ell = 2) argument at size cap log z: alpha admissible iff
// alpha <= (ell/k)(log z / log p_j - 1).
long long max_admissible_exponent(int ell, std::size_t k, const Real& log_z,
                                  const Real& log_p) {
  const Real cap = Real(ell) / Real(k) * (log_z / log_p - 1);
  long long a = floor(cap).convert_to<long long>();
  return a < 1 ? 1 : a;
}

// Descending exponent prefixes bounded coordinate-wise by `caps` (tail is
// all-ones).  Returns the list of prefix vectors.
std::vector<std::vector<std::uint32_t>> descending_prefixes(std::span<const std::uint32_t> caps) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur(caps.size(), 1);
  const std::size_t d = caps.size();
  for (;;) {
    out.push_back(cur);
    std::size_t i = d;
    while (i-- > 0) {
      const std::uint32_t limit = i == 0 ? caps[0] : std::min(caps[i], cur[i - 1]);
      if (cur[i] < limit) {
        ++cur[i];
        for (std::size_t t = i + 1; t < d; ++t) cur[t] = 1;
        break;
      }
      if (i == 0) return out;
    }
  }
}

}  // namespace detail

VerificationReport verify_thm1(const PrimeTable& table, const VerifyOptions& opt) {
  detail::Timer timer;
  VerificationReport rep;
  rep.id = "theorem-1";
  rep.digits = active_context().digits;

  const Real log_eta2 = log(eta2());
  rep.parameters["eta2"] = real_str(eta2());

  // Large-k exclusion: beta(n_k) <= (log k)^{-k} pushes r below log 2.
  const std::size_t kmax = std::min<std::size_t>(table.size(), 10000);
  if (kmax < 10000) throw std::invalid_argument("verify_thm1: prime table too small");
  for (std::size_t k = 44; k <= kmax; ++k) {
    if (!(table.log_beta_primorial(k) <= -Real(k) * log(log(Real(k))))) {
      rep.witnesses.push_back({{"stage", "large-k"}, {"k", k}});
      rep.confirmed = false;
      return rep;
    }
  }
  rep.notes.push_back("k in [44, 10000]: beta(n_k) <= (log k)^{-k}, so r(n) <= log 2 there; "
                      "the inductive tail extends this to all k >= 44");

  // Middle bands: the k-only cap log 2 + log log k + log beta(n_k)/k stays
  // below log eta2 for k in [2,3] and [25,43].
  auto k_cap = [&](std::size_t k) {
    return log(Real(2)) + log(log(Real(k))) + table.log_beta_primorial(k) / Real(k);
  };
  for (std::size_t k = 2; k <= 43; ++k) {
    const bool excluded_band = (k <= 3) || (k >= 25);
    if (excluded_band && !(k_cap(k) < log_eta2)) {
      rep.witnesses.push_back({{"stage", "band"}, {"k", k}});
      rep.confirmed = false;
      return rep;
    }
  }

  // Enumeration bands k in 4..24 under the cap vector (4,2,2,1,...).
  const std::uint32_t caps[] = {4, 2, 2};
  const auto prefixes = detail::descending_prefixes(caps);
  Real best_r;
  Real second_r;
  Factorization best;
  bool have_best = false, have_second = false;
  std::uint64_t enumerated = 0;
  std::size_t max_uk = 0;

  for (std::size_t k = 4; k <= 24; ++k) {
    const Real L = detail::solve_r1_root(k, log_eta2, table);
    const std::size_t uk = u_of(L - table.log_primorial(k), table);
    max_uk = std::max(max_uk, uk);
    if (uk > 3) {
      rep.witnesses.push_back({{"stage", "u-cap"}, {"k", k}, {"u", uk}});
      rep.confirmed = false;
      return rep;
    }
    // ratio caps certify the enumeration bounds
    for (std::size_t jr = 1; jr <= 3; ++jr) {
      const long long cap = detail::max_admissible_exponent(1, k, L, table.log_prime(jr));
      if (cap > static_cast<long long>(caps[jr - 1])) {
        rep.witnesses.push_back({{"stage", "exponent-cap"}, {"k", k}, {"rank", jr}, {"cap", cap}});
        rep.confirmed = false;
        return rep;
      }
    }

    for (const auto& prefix : prefixes) {
      std::vector<std::uint32_t> ranks(k), exps(k, 1);
      for (std::size_t i = 0; i < k; ++i) ranks[i] = static_cast<std::uint32_t>(i + 1);
      for (std::size_t i = 0; i < prefix.size() && i < k; ++i) exps[i] = prefix[i];
      Factorization f = make_factorization(ranks, exps, table);
      ++enumerated;
      const Real rv = r_of(f);
      if (!have_best || rv > best_r) {
        if (have_best) {
          second_r = best_r;
          have_second = true;
        }
        best_r = rv;
        best = f;
        have_best = true;
      } else if (!have_second || rv > second_r) {
        second_r = rv;
        have_second = true;
      }
    }
  }
  (void)opt;

  const BigInt best_n = to_integer_exact(best, table);
  const bool maximizer_ok = best_n == 60060;
  const bool strict = have_second && second_r < best_r;
  rep.confirmed = maximizer_ok && strict;
  rep.witnesses.push_back(detail::witness_json(best, table, {{"r", best_r}}));
  rep.exhaustion["enumerated"] = enumerated;
  rep.exhaustion["accepted"] = 1;
  rep.exhaustion["rejected"] = enumerated - 1;
  rep.exhaustion["max_u"] = max_uk;
  rep.parameters["r_max"] = real_str(best_r);
  rep.parameters["log_eta2"] = real_str(log_eta2);
  rep.wall_seconds = timer.seconds();
  return rep;
}

}  // namespace taubound::search
