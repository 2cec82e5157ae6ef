#include <map>
#include <set>

#include "taubound/bounds.hpp"
#include "taubound/search.hpp"
#include "taubound/solvers.hpp"

#include "driver_util.hpp"

namespace taubound::search {

using detail::real_str;

namespace {

struct Thm4Prereq {
  std::map<std::size_t, Real> root;          // L_k = log z_k for k = 74..94
  std::map<std::size_t, std::size_t> uk;     // Table-2 ranks
  std::map<std::pair<int, std::size_t>, std::size_t> rank_cap;  // (alpha, k) -> max rank
  Real upsilon94, upsilon95;
};

std::size_t u_pos(const Real& budget, const PrimeTable& table) {
  if (budget < 0) return 0;
  return u_of(budget, table);
}

Thm4Prereq thm4_prereq(const PrimeTable& table, VerificationReport& rep) {
  if (table.size() < 35806) throw std::invalid_argument("verify_thm4: need 35806 primes");
  Thm4Prereq pre;

  // k >= 95 exclusion: upsilon(n_k, n_k) < 1 on the computed range, positive
  // tail margin beyond it.
  auto upsilon_primorial = [&](std::size_t k) {
    const Real logk = log(Real(k));
    return 2 * logk * exp(-table.cum_loglog[k] / Real(k)) -
           Real(k) * logk / table.log_primorial(k);
  };
  for (std::size_t k = 95; k <= 35806; ++k) {
    if (!(upsilon_primorial(k) < 1)) {
      rep.witnesses.push_back({{"stage", "large-k"}, {"k", k}});
      throw std::runtime_error("verify_thm4: upsilon(n_k,n_k) >= 1 in the sweep range");
    }
  }
  {
    // tail certificate: (log log k - 3/2)/log k - 1/(log k + log log k - 1/2) > 0
    const Real k0(35807);
    const Real lk = log(k0), llk = log(log(k0));
    const Real xi = (llk - Real("1.5")) / lk - 1 / (lk + llk - Real("0.5"));
    if (!(xi > 0)) throw std::runtime_error("verify_thm4: tail certificate failed");
  }
  pre.upsilon94 = upsilon_primorial(94);
  pre.upsilon95 = upsilon_primorial(95);

  for (std::size_t k = 74; k <= 94; ++k) {
    const Factorization nk = primorial(table, k);
    const Real L = detail::solve_upsilon_root(nk, Real(1), table);
    if (!(L / table.log_primorial(k) < 2)) {
      throw std::runtime_error("verify_thm4: log z_k / log n_k >= 2");
    }
    pre.root[k] = L;
    pre.uk[k] = u_of(L - table.log_primorial(k), table);
  }

  // ratio caps: p^alpha || n' forces rank(p) <= max rank with
  // p <= z_k^{2/(alpha k + 2)}
  for (std::size_t k = 74; k <= 94; ++k) {
    for (int alpha = 4; alpha <= 6; ++alpha) {
      const Real cap = 2 * pre.root[k] / (Real(alpha) * Real(k) + 2);
      std::size_t j = 0;
      while (j + 1 <= table.size() && table.log_prime(j + 1) <= cap) ++j;
      pre.rank_cap[{alpha, k}] = j;
    }
  }
  return pre;
}

using PairSet = std::set<std::pair<std::size_t, int>>;

struct StageOutcome {
  PairSet kept;
  Real max_c1{0};
  Real min_c2{0};
  Real max_c2{0};
  bool c_tracked = false;
};

// One elimination stage: a (k, j1) pair stays alive when some admissible
// cutoff tuple scores at or above the criterion.
StageOutcome run_stage(int stage, const PairSet& alive, const Thm4Prereq& pre,
                       const PrimeTable& table, int workers) {
  const Real crit = active_context().threshold;
  const Real tol = active_context().root_tol;
  std::vector<std::pair<std::size_t, int>> pairs(alive.begin(), alive.end());
  std::vector<char> keep(pairs.size(), 0);
  std::vector<StageOutcome> local(pairs.size());

  detail::parallel_for(pairs.size(), workers, [&](std::size_t idx) {
    const auto [k, j1] = pairs[idx];
    const Real Lk = pre.root.at(k);
    const Real log_nk = table.log_primorial(k);
    StageOutcome& st = local[idx];
    auto track = [&](const FCutoffs& c) {
      const Real c1 = f_c1(c, table);
      const Real c2 = f_c2(c, table);
      if (!st.c_tracked) {
        st.max_c1 = c1;
        st.min_c2 = c2;
        st.max_c2 = c2;
        st.c_tracked = true;
      } else {
        if (c1 > st.max_c1) st.max_c1 = c1;
        if (c2 < st.min_c2) st.min_c2 = c2;
        if (c2 > st.max_c2) st.max_c2 = c2;
      }
    };
    auto scored = [&](std::span<const int> js) {
      FCutoffs c = FCutoffs::make(stage, k, js);
      track(c);
      return f_max(c, table, tol).value;
    };
    auto pinned = [&](std::span<const int> js) {
      return pinned_profile_lambda(k, js, table);
    };
    bool found = false;

    if (stage == 1) {
      if (j1 == 0) {
        found = pinned({}) >= crit;
      } else {
        // a live tuple needs n_k n_{j1} n_{j2} <= z_k
        const int u2 = static_cast<int>(u_pos(Lk - table.log_primorial(j1) - log_nk, table));
        const int j2_hi = std::min({j1, static_cast<int>(pre.uk.at(k)), u2});
        const int pin[] = {j1};
        if (pinned(pin) >= crit) found = true;
        for (int j2 = 1; j2 <= j2_hi && !found; ++j2) {
          const int js[] = {j1, j2};
          if (scored(js) >= crit) found = true;
        }
      }
    } else {
      const int u2 = static_cast<int>(u_pos(Lk - table.log_primorial(j1) - log_nk, table));
      for (int j2 = 1; j2 <= std::min(j1, u2) && !found; ++j2) {
        const Real used2 = table.log_primorial(j2) + table.log_primorial(j1) + log_nk;
        int u3 = static_cast<int>(u_pos(Lk - used2, table));
        if (stage >= 3) {
          u3 = std::min<int>(u3, static_cast<int>(pre.rank_cap.at({4, k})));
        }
        if (stage == 2) {
          const int pin[] = {j1, j2};
          if (pinned(pin) >= crit) {
            found = true;
            break;
          }
          for (int j3 = 1; j3 <= std::min(j2, u3) && !found; ++j3) {
            const int js[] = {j1, j2, j3};
            if (scored(js) >= crit) found = true;
          }
          continue;
        }
        for (int j3 = 1; j3 <= std::min(j2, u3) && !found; ++j3) {
          const Real used3 = used2 + table.log_primorial(j3);
          int u4 = static_cast<int>(u_pos(Lk - used3, table));
          u4 = std::min<int>(u4, static_cast<int>(pre.rank_cap.at({5, k})));
          if (stage == 3) {
            const int pin[] = {j1, j2, j3};
            if (pinned(pin) >= crit) {
              found = true;
              break;
            }
            for (int j4 = 1; j4 <= std::min(j3, u4) && !found; ++j4) {
              const int js[] = {j1, j2, j3, j4};
              if (scored(js) >= crit) found = true;
            }
            continue;
          }
          for (int j4 = 1; j4 <= std::min(j3, u4) && !found; ++j4) {
            const Real used4 = used3 + table.log_primorial(j4);
            int u5 = static_cast<int>(u_pos(Lk - used4, table));
            u5 = std::min<int>(u5, static_cast<int>(pre.rank_cap.at({6, k})));
            const int pin[] = {j1, j2, j3, j4};
            if (pinned(pin) >= crit) {
              found = true;
              break;
            }
            for (int j5 = 1; j5 <= std::min(j4, u5) && !found; ++j5) {
              const int js[] = {j1, j2, j3, j4, j5};
              if (scored(js) >= crit) found = true;
            }
          }
        }
      }
    }
    keep[idx] = found ? 1 : 0;
  });

  StageOutcome out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (keep[i]) out.kept.insert(pairs[i]);
    if (local[i].c_tracked) {
      if (!out.c_tracked) {
        out = StageOutcome{out.kept, local[i].max_c1, local[i].min_c2, local[i].max_c2, true};
      } else {
        if (local[i].max_c1 > out.max_c1) out.max_c1 = local[i].max_c1;
        if (local[i].min_c2 < out.min_c2) out.min_c2 = local[i].min_c2;
        if (local[i].max_c2 > out.max_c2) out.max_c2 = local[i].max_c2;
      }
    }
  }
  return out;
}

PairSet expected_table3() {
  PairSet s;
  for (int j = 14; j <= 28; ++j) s.insert({74, j});
  for (int j = 16; j <= 26; ++j) s.insert({75, j});
  for (int j = 18; j <= 25; ++j) s.insert({76, j});
  for (int j = 20; j <= 23; ++j) s.insert({77, j});
  return s;
}

PairSet expected_table4() {
  PairSet s;
  for (int j = 14; j <= 23; ++j) s.insert({74, j});
  for (int j = 16; j <= 21; ++j) s.insert({75, j});
  s.insert({76, 18});
  s.insert({76, 19});
  return s;
}

nlohmann::json pairs_json(const PairSet& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [k, j] : s) out.push_back({{"k", k}, {"j1", j}});
  return out;
}

}  // namespace

VerificationReport verify_thm4(const PrimeTable& table, int stage, const VerifyOptions& opt) {
  detail::Timer timer;
  if (stage < 0 || stage > 4) throw std::invalid_argument("verify_thm4: stage must be 0..4");
  VerificationReport rep;
  rep.id = "theorem-4";
  rep.digits = active_context().digits;
  rep.parameters["stage"] = stage;

  Thm4Prereq pre = thm4_prereq(table, rep);
  rep.parameters["upsilon_n94"] = real_str(pre.upsilon94);
  rep.parameters["upsilon_n95"] = real_str(pre.upsilon95);
  if (!(pre.upsilon95 < 1 && pre.upsilon94 > 1)) return rep;

  {
    nlohmann::json t2 = nlohmann::json::array();
    for (const auto& [k, u] : pre.uk) t2.push_back({{"k", k}, {"u", u}});
    rep.exhaustion["table2"] = t2;
    const Real lw73 = lambda_of(witness73(table));
    const Real lw74 = lambda_of(witness74(table));
    rep.parameters["lambda_w73"] = real_str(lw73);
    rep.parameters["lambda_w74"] = real_str(lw74);
  }

  const std::set<int> stages_wanted = [&] {
    std::set<int> s;
    if (stage == 0) {
      s = {1, 2, 3, 4};
    } else {
      for (int t = 1; t <= stage; ++t) s.insert(t);
    }
    return s;
  }();
  const int last_stage = *stages_wanted.rbegin();
  if (last_stage >= 3 && !opt.long_running) {
    rep.partial = true;
    rep.notes.push_back("stages 3-4 skipped: pass long_running to run them");
  }

  PairSet alive;
  for (const auto& [k, u] : pre.uk) {
    for (int j1 = 0; j1 <= static_cast<int>(u); ++j1) alive.insert({k, j1});
  }

  bool tables_ok = true;
  Real max_c1(0), min_c2(0), max_c2(0);
  bool c_tracked = false;
  auto absorb = [&](const StageOutcome& st) {
    if (!st.c_tracked) return;
    if (!c_tracked) {
      max_c1 = st.max_c1;
      min_c2 = st.min_c2;
      max_c2 = st.max_c2;
      c_tracked = true;
    } else {
      if (st.max_c1 > max_c1) max_c1 = st.max_c1;
      if (st.min_c2 < min_c2) min_c2 = st.min_c2;
      if (st.max_c2 > max_c2) max_c2 = st.max_c2;
    }
  };

  for (int s = 1; s <= last_stage; ++s) {
    if (s >= 3 && !opt.long_running) break;
    StageOutcome st = run_stage(s, alive, pre, table, opt.workers);
    absorb(st);
    alive = st.kept;
    rep.exhaustion["stage" + std::to_string(s) + "_kept"] = pairs_json(alive);
    if (s == 1 && alive != expected_table3()) tables_ok = false;
    if (s == 2 && alive != expected_table4()) tables_ok = false;
    if (s == 3 && alive != PairSet{{74, 16}, {74, 17}, {74, 18}}) tables_ok = false;
    if (s == 4 && !alive.empty()) tables_ok = false;
  }

  if (c_tracked) {
    rep.parameters["max_c1"] = real_str(max_c1);
    rep.parameters["min_c2"] = real_str(min_c2);
    rep.parameters["max_c2"] = real_str(max_c2);
  }
  {
    nlohmann::json t5 = nlohmann::json::array();
    for (int alpha = 4; alpha <= 6; ++alpha) {
      for (std::size_t k = 74; k <= 76; ++k) {
        t5.push_back({{"alpha", alpha}, {"k", k}, {"max_rank", pre.rank_cap.at({alpha, k})}});
      }
    }
    rep.exhaustion["table5"] = t5;
  }

  rep.confirmed = tables_ok && !rep.partial;
  rep.wall_seconds = timer.seconds();
  return rep;
}

}  // namespace taubound::search
