#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "taubound/bounds.hpp"
#include "taubound/lemmas.hpp"
#include "taubound/search.hpp"
#include "taubound/solvers.hpp"

#include "driver_util.hpp"

namespace taubound::search {

using detail::real_str;

namespace {

Real type1_delta(int j) {
  if (j >= 1 && j <= 4) return dec("0.011");
  if (j >= 5 && j <= 14) return dec("0.01");
  throw std::out_of_range("type-1 delta schedule covers j in 1..14");
}

Real type2_delta(int j) {
  if (j < 1 || j > 39) throw std::out_of_range("type-2 delta schedule covers j in 1..39");
  if (j <= 6) return dec("0.0055");
  if (j <= 13) return dec("0.0054");
  if (j <= 19) return dec("0.005");
  if (j <= 23) return dec("0.0044");
  if (j <= 26) return dec("0.004");
  if (j <= 29) return dec("0.0035");
  return dec("0.003");
}

// term-wise union groups used to batch the window scans
std::vector<int> type1_group(int first) { return first == 1 ? std::vector<int>{1, 2, 3, 4}
                                                            : std::vector<int>{5, 6, 7, 8, 9, 10, 11, 12, 13, 14}; }

const std::vector<std::vector<int>>& type2_groups() {
  static const std::vector<std::vector<int>> g = {
      {1, 2, 3, 4, 5, 6},     {7, 8, 9},          {10, 11, 12, 13}, {14, 15, 16, 17, 18, 19},
      {20, 21, 22, 23},       {24, 25, 26},       {27, 28, 29},     {30, 31, 32, 33, 34, 35, 36, 37, 38, 39}};
  return g;
}

std::uint64_t union_size(std::vector<ExponentRange> rs) {
  std::erase_if(rs, [](const ExponentRange& r) { return r.empty(); });
  std::sort(rs.begin(), rs.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  std::uint64_t total = 0;
  std::int64_t cur_lo = 0, cur_hi = -1;
  bool open = false;
  for (const auto& r : rs) {
    if (open && r.lo <= cur_hi + 1) {
      cur_hi = std::max(cur_hi, r.hi);
    } else {
      if (open) total += static_cast<std::uint64_t>(cur_hi - cur_lo + 1);
      cur_lo = r.lo;
      cur_hi = r.hi;
      open = true;
    }
  }
  if (open) total += static_cast<std::uint64_t>(cur_hi - cur_lo + 1);
  return total;
}

struct JData {
  Real w;                  // threshold: deviations at or above force log n' below I_j
  Real varpi;              // certified lower bound for the deviation on I_j
  std::vector<Real> eps;   // per-prime minimal deviation over I_j
  Real delta8;             // w - sum eps (j <= 39)
  bool have_delta8 = false;
  bool reduced = false;    // the top 0.01 band of deviations is excluded
};

class Thm5Ctx {
 public:
  Thm5Ctx(const PrimeTable& table, const VerifyOptions& opt)
      : table_(table), opt_(opt), win_(Window44::make(table)) {}

  const PrimeTable& table() const { return table_; }
  const Window44& win() const { return win_; }
  const VerifyOptions& opt() const { return opt_; }

  Real t_lo(int j) const { return IntervalGrid{j, 1}.lo(); }

  // max over m of upsilon_m(z, w), skipping split sizes whose left factor is
  // not positive (no admissible configuration has them)
  Real max_upsilon_m(const Real& z, const Real& w) const {
    Real best;
    bool have = false;
    for (int m = 1; m <= 43; ++m) {
      if (!(1 + win_.log_n44 / z - w / (2 * Real(m)) > 0)) continue;
      Real v = upsilon_m(z, w, m, win_);
      if (!have || v > best) {
        best = v;
        have = true;
      }
    }
    if (!have) throw std::runtime_error("max_upsilon_m: no admissible m");
    return best;
  }

  JData& jdata(int j) {
    auto it = cache_.find(j);
    if (it != cache_.end()) return it->second;
    JData d;
    d.w = solve_w(j);
    d.eps.reserve(44);
    for (std::size_t i = 1; i <= 44; ++i) {
      d.eps.push_back(epsilon_j(i, j, win_, table_));
    }
    d.varpi = varpi_lower(j, 210);
    if (j <= 39) {
      Real s = 0;
      for (const Real& e : d.eps) s += e;
      d.delta8 = d.w - s;
      d.have_delta8 = true;
      if (!(d.delta8 > 0)) throw std::runtime_error("jdata: nonpositive error budget");
    }
    return cache_.emplace(j, std::move(d)).first->second;
  }

  // smallest deviation threshold w with max_m upsilon_m(T_j, w) < 1
  Real solve_w(int j) const {
    const Real T = t_lo(j);
    Real lo = 0, hi = dec("0.25");
    while (max_upsilon_m(T, hi) >= 1) {
      hi *= 2;
      if (hi > 2) throw std::runtime_error("solve_w: threshold out of range");
    }
    if (!(max_upsilon_m(T, lo) >= 1)) {
      throw std::runtime_error("solve_w: already excluded at zero deviation");
    }
    const Real tol = dec("1e-9");
    while (hi - lo > tol) {
      Real mid = (lo + hi) / 2;
      if (max_upsilon_m(T, mid) >= 1) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return hi;  // strict side
  }

  // certified lower bound for the total deviation when log n' is in I_j
  Real varpi_lower(int j, int cells) const {
    IntervalGrid grid{j, cells};
    Real best;
    bool have = false;
    for (int r = 0; r < cells; ++r) {
      const auto [x1, x2] = grid.cell(r);
      Real sum = 0;
      for (std::size_t i = 1; i <= 44; ++i) {
        sum += lemmas::psi_minimize(win_.log_n44, 44 * table_.log_prime(i), x1, x2, Real(1),
                                    Real(1))
                   .value;
      }
      if (!have || sum < best) {
        best = sum;
        have = true;
      }
    }
    return best;
  }

 private:
  const PrimeTable& table_;
  VerifyOptions opt_;
  Window44 win_;
  std::map<int, JData> cache_;
};

// ---------------------------------------------------------------------------
// window scans (type 1, type 2, final): double-precision screen with exact
// recheck of anything near the boundary
// ---------------------------------------------------------------------------

struct ScanAcc {
  std::uint64_t visited = 0;
  std::uint64_t pass_lambda = 0;
  std::uint64_t pass_low = 0;
  std::vector<std::vector<std::int64_t>> recheck;
};

struct ScanOutcome {
  std::uint64_t visited = 0;
  std::uint64_t pass_lambda = 0;
  std::uint64_t pass_low = 0;
  std::uint64_t rechecked = 0;
  std::uint64_t identity = 0;
  std::vector<nlohmann::json> violations;
};

// exact pass/fail: lambda < 1, log n below the window, or the extremal vector
bool recheck_exact(std::span<const std::int64_t> exps, Thm5Ctx& ctx, bool& is_identity) {
  const auto& target = thm5_exponents();
  is_identity = true;
  for (std::size_t i = 0; i < 44; ++i) {
    if (exps[i] != static_cast<std::int64_t>(target[i])) {
      is_identity = false;
      break;
    }
  }
  if (is_identity) return true;
  std::vector<std::uint32_t> ranks(44), es(44);
  for (std::size_t i = 0; i < 44; ++i) {
    ranks[i] = static_cast<std::uint32_t>(i + 1);
    if (exps[i] < 1) return true;  // omega < 44: outside this pipeline's scope
    es[i] = static_cast<std::uint32_t>(exps[i]);
  }
  Factorization f = make_factorization(ranks, es, ctx.table());
  if (f.log_n < dec("10640.8")) return true;
  return lambda_of(f) < 1;
}

void scan_one_box(const CandidateBox& box, Thm5Ctx& ctx, ScanOutcome& out) {
  constexpr double kMargin = 1e-8;
  const double wlo = 10640.8;
  const double c44 = 44.0 * std::log(44.0);

  std::function<void(ScanAcc&, std::span<const std::int64_t>, double, double)> hook =
      [&](ScanAcc& acc, std::span<const std::int64_t> exps, double log_n, double log_tau) {
        ++acc.visited;
        const double rhs = 44.0 * std::log1p(log_n / c44);
        if (log_tau < rhs - kMargin) {
          ++acc.pass_lambda;
          return;
        }
        if (log_n < wlo - kMargin) {
          ++acc.pass_low;
          return;
        }
        acc.recheck.emplace_back(exps.begin(), exps.end());
        if (acc.recheck.size() > (1u << 18)) {
          throw std::runtime_error("window scan: recheck backlog exceeded the guard");
        }
      };
  std::function<void(ScanAcc&, const ScanAcc&)> merge = [](ScanAcc& a, const ScanAcc& b) {
    a.visited += b.visited;
    a.pass_lambda += b.pass_lambda;
    a.pass_low += b.pass_low;
    a.recheck.insert(a.recheck.end(), b.recheck.begin(), b.recheck.end());
  };

  ScanAcc acc = enumerate_box<ScanAcc>(box, ctx.table(), 1, ctx.opt().long_running, ScanAcc{},
                                       hook, merge);
  out.visited += acc.visited;
  out.pass_lambda += acc.pass_lambda;
  out.pass_low += acc.pass_low;
  out.rechecked += acc.recheck.size();
  for (const auto& exps : acc.recheck) {
    bool identity = false;
    if (recheck_exact(exps, ctx, identity)) {
      if (identity) ++out.identity;
    } else {
      nlohmann::json v;
      v["exponents"] = exps;
      out.violations.push_back(v);
    }
  }
}

// scan a family of boxes in parallel, merging outcomes in box order
ScanOutcome scan_boxes(const std::vector<CandidateBox>& boxes, Thm5Ctx& ctx) {
  std::vector<ScanOutcome> partial(boxes.size());
  detail::parallel_for(boxes.size(), ctx.opt().workers, [&](std::size_t i) {
    scan_one_box(boxes[i], ctx, partial[i]);
  });
  ScanOutcome out;
  for (const auto& p : partial) {
    out.visited += p.visited;
    out.pass_lambda += p.pass_lambda;
    out.pass_low += p.pass_low;
    out.rechecked += p.rechecked;
    out.identity += p.identity;
    out.violations.insert(out.violations.end(), p.violations.begin(), p.violations.end());
  }
  return out;
}

CandidateBox window_box(int j, const std::function<Real(std::size_t)>& delta_of_rank,
                        Thm5Ctx& ctx, const std::string& provenance) {
  CandidateBox box;
  box.provenance.push_back(provenance);
  for (std::size_t i = 1; i <= 44; ++i) {
    ExponentRange r = j_delta(i, j, delta_of_rank(i), ctx.win(), ctx.table());
    if (r.lo < 1) r.lo = 1;  // all 44 primes divide the candidate
    if (r.empty()) throw std::runtime_error("window_box: empty exponent range");
    box.prime_ranks.push_back(static_cast<std::uint32_t>(i));
    box.ranges.push_back(r);
  }
  return box;
}

// the 946 two-coordinate widenings of one base box
std::vector<CandidateBox> pair_widened_boxes(const CandidateBox& base, int j, Thm5Ctx& ctx) {
  const JData& jd = ctx.jdata(j);
  std::vector<ExponentRange> widened(44);
  for (std::size_t i = 1; i <= 44; ++i) {
    ExponentRange r = j_delta(i, j, jd.eps[i - 1] + jd.delta8, ctx.win(), ctx.table());
    if (r.lo < 1) r.lo = 1;
    widened[i - 1] = r;
  }
  std::vector<CandidateBox> out;
  out.reserve(946);
  for (std::size_t a = 0; a < 44; ++a) {
    for (std::size_t b = a + 1; b < 44; ++b) {
      CandidateBox box = base;
      box.ranges[a] = widened[a];
      box.ranges[b] = widened[b];
      box.provenance.push_back("widened pair (" + std::to_string(a + 1) + "," +
                               std::to_string(b + 1) + ")");
      out.push_back(std::move(box));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// reduce phase: certified lower bounds for the split deviations
// ---------------------------------------------------------------------------

struct SplitBounds {
  Real w1, w2;
};

// lower bounds for the below/above split deviations at (j, m, s): s of the
// three anomalous coordinates sit below the mean, 3-s above
std::array<SplitBounds, 4> split_lower_bounds(int j, int m, const JData& jd,
                                              const Window44& win, const PrimeTable& table) {
  const Real delta1 = type1_delta(j);
  if (!(jd.w < 2 * Real(m) * delta1) || !(jd.w < 2 * Real(44 - m) * delta1)) {
    throw std::runtime_error("split_lower_bounds: forced-corner sign condition failed");
  }
  const Real A = win.log_n44;
  IntervalGrid grid{j, 30};
  const Real w_hi = jd.w;
  const Real w_lo = jd.w - dec("0.01");

  std::array<Real, 4> best1{}, best2{};
  std::array<bool, 4> have{};

  for (int r1 = 0; r1 < 30; ++r1) {
    const auto [x1, x2] = grid.cell(r1);
    for (int r2 = 0; r2 < 80; ++r2) {
      const Real wa = w_lo + (w_hi - w_lo) * r2 / 80;
      const Real wb = w_lo + (w_hi - w_lo) * (r2 + 1) / 80;

      std::vector<Real> forced_lo, free_lo, forced_hi, free_hi;
      forced_lo.reserve(44);
      free_lo.reserve(44);
      forced_hi.reserve(44);
      free_hi.reserve(44);
      for (std::size_t i = 1; i <= 44; ++i) {
        const Real B = 44 * table.log_prime(i);
        const ExponentRange window = j_delta(i, j, delta1, win, table);

        // anomalous below the mean: largest exponent under the window
        {
          const Real N = Real(window.lo) * B - A;  // (alpha+1) = window.lo
          Real m1v;
          bool first = true;
          for (const Real& x : {x1, x2}) {
            for (const Real& w : {wa, wb}) {
              Real v = abs(N / x - 1 + w / (2 * Real(m)));
              if (first || v < m1v) {
                m1v = v;
                first = false;
              }
            }
          }
          forced_lo.push_back(m1v);
        }
        // anomalous above the mean: smallest exponent over the window
        {
          const Real N = Real(window.hi + 2) * B - A;
          Real m2v;
          bool first = true;
          for (const Real& x : {x1, x2}) {
            for (const Real& w : {wa, wb}) {
              Real v = abs(N / x - 1 - w / (2 * Real(44 - m)));
              if (first || v < m2v) {
                m2v = v;
                first = false;
              }
            }
          }
          forced_hi.push_back(m2v);
        }
        // unconstrained minima on both sides
        free_lo.push_back(lemmas::psi_minimize(A, B, x1, x2, 1 - wb / (2 * Real(m)),
                                               1 - wa / (2 * Real(m)))
                              .value);
        free_hi.push_back(lemmas::psi_minimize(A, B, x1, x2, 1 + wa / (2 * Real(44 - m)),
                                               1 + wb / (2 * Real(44 - m)))
                              .value);
      }
      std::sort(forced_lo.begin(), forced_lo.end());
      std::sort(free_lo.begin(), free_lo.end());
      std::sort(forced_hi.begin(), forced_hi.end());
      std::sort(free_hi.begin(), free_hi.end());

      for (int s = 0; s <= 3; ++s) {
        Real v1 = 0, v2 = 0;
        for (int t = 0; t < s; ++t) v1 += forced_lo[t];
        for (int t = 0; t < m - s; ++t) v1 += free_lo[t];
        for (int t = 0; t < 3 - s; ++t) v2 += forced_hi[t];
        for (int t = 0; t < (44 - m) - (3 - s); ++t) v2 += free_hi[t];
        if (!have[s] || v1 < best1[s]) best1[s] = have[s] ? std::min(best1[s], v1) : v1;
        if (!have[s] || v2 < best2[s]) best2[s] = have[s] ? std::min(best2[s], v2) : v2;
        have[s] = true;
      }
    }
  }

  std::array<SplitBounds, 4> out;
  for (int s = 0; s <= 3; ++s) out[s] = SplitBounds{best1[s], best2[s]};
  return out;
}

std::pair<int, int> table9_range(int j) {
  if (j <= 6) return {11, 33};
  if (j == 7) return {12, 33};
  if (j <= 12) return {12, 32};
  if (j == 13) return {13, 32};
  if (j == 14) return {13, 31};
  throw std::out_of_range("table9_range: j in 1..14");
}

}  // namespace

VerificationReport verify_thm5(const PrimeTable& table, Thm5Phase phase, int j, int bucket,
                               const VerifyOptions& opt) {
  detail::Timer timer;
  if (table.size() < 100) throw std::invalid_argument("verify_thm5: need at least 100 primes");
  VerificationReport rep;
  rep.digits = active_context().digits;
  Thm5Ctx ctx(table, opt);
  CheckpointLog checkpoint(opt.checkpoint_path);

  switch (phase) {
    case Thm5Phase::prelim: {
      rep.id = "theorem-5/prelim";
      const Factorization nstar = thm5_maximizer(table);
      const Real lam = lambda_of(nstar);
      rep.witnesses.push_back(detail::witness_json(nstar, table, {{"lambda", lam}}));
      if (!(lam > 1)) return rep;

      // omega(n') = 44 forcing
      Real max45_73;
      for (std::size_t k = 45; k <= 73; ++k) {
        const Real L = detail::solve_upsilon_root(primorial(table, k), Real(1), table);
        if (k == 45 || L > max45_73) max45_73 = L;
      }
      rep.parameters["max_root_k45_73"] = real_str(max45_73);
      if (!(max45_73 <= dec("4569.68") + dec("0.01")) || !(max45_73 < nstar.log_n)) return rep;

      // gamma(n') = n_44 forcing: swap one of the first 44 primes for p_45
      Real maxS;
      for (std::size_t omit = 1; omit <= 44; ++omit) {
        std::vector<std::uint32_t> ranks, exps;
        for (std::uint32_t i = 1; i <= 45; ++i) {
          if (i == omit) continue;
          ranks.push_back(i);
          exps.push_back(1);
        }
        const Factorization ns = make_factorization(ranks, exps, table);
        const Real L = detail::solve_upsilon_root(ns, Real(1), table);
        if (omit == 1 || L > maxS) maxS = L;
      }
      rep.parameters["max_root_prime_swap"] = real_str(maxS);
      if (!(maxS <= dec("9927.67") + dec("0.01")) || !(maxS < nstar.log_n)) return rep;

      // the window itself
      const Real Lwin = detail::solve_upsilon_root(primorial(table, 44), Real(1), table);
      rep.parameters["window_top"] = real_str(Lwin);
      rep.parameters["window_bottom"] = real_str(nstar.log_n);
      if (!(abs(Lwin - dec("10758.21")) <= dec("0.01")) || !(Lwin < dec("10758.8"))) return rep;
      if (!(nstar.log_n >= dec("10640.8428") && nstar.log_n < dec("10640.8429"))) return rep;
      rep.confirmed = true;
      break;
    }

    case Thm5Phase::tables: {
      rep.id = "theorem-5/tables";
      std::vector<int> js;
      if (j == 0) {
        for (int t = 1; t <= 118; ++t) js.push_back(t);
      } else {
        js.push_back(j);
      }
      nlohmann::json rows = nlohmann::json::array();
      bool ok = true;
      std::vector<nlohmann::json> row_slots(js.size());
      detail::parallel_for(js.size(), opt.workers, [&](std::size_t idx) {
        Thm5Ctx local(table, opt);
        const int jj = js[idx];
        JData& d = local.jdata(jj);
        nlohmann::json row;
        row["j"] = jj;
        row["w"] = real_str(d.w);
        row["varpi_lower"] = real_str(d.varpi);
        if (d.have_delta8) {
          Real s = d.w - d.delta8;
          row["eps_sum"] = real_str(s);
          row["delta"] = real_str(d.delta8);
        }
        row["eliminated"] = jj >= 40 && d.varpi > d.w;
        row_slots[idx] = row;
      });
      for (std::size_t idx = 0; idx < js.size(); ++idx) {
        const int jj = js[idx];
        rows.push_back(row_slots[idx]);
        if (jj >= 40 && !row_slots[idx]["eliminated"].get<bool>()) ok = false;
      }
      rep.exhaustion["rows"] = rows;
      rep.confirmed = ok;
      break;
    }

    case Thm5Phase::type1:
    case Thm5Phase::type2: {
      const bool t1 = phase == Thm5Phase::type1;
      rep.id = t1 ? "theorem-5/type1" : "theorem-5/type2";

      // union-box cardinalities over the batching groups
      {
        nlohmann::json sizes = nlohmann::json::array();
        if (t1) {
          for (int first : {1, 5}) {
            const auto group = type1_group(first);
            BigInt card = 1;
            for (std::size_t i = 1; i <= 44; ++i) {
              std::vector<ExponentRange> rs;
              for (int jj : group) {
                rs.push_back(j_delta(i, jj, type1_delta(jj), ctx.win(), table));
              }
              card *= union_size(rs);
            }
            sizes.push_back({{"group_first_j", first}, {"cardinality", card.str()}});
          }
        } else {
          for (const auto& group : type2_groups()) {
            BigInt card = 1;
            for (std::size_t i = 1; i <= 44; ++i) {
              std::vector<ExponentRange> rs;
              for (int jj : group) {
                const Real d = ctx.jdata(jj).eps[i - 1] + type2_delta(jj);
                rs.push_back(j_delta(i, jj, d, ctx.win(), table));
              }
              card *= union_size(rs);
            }
            sizes.push_back({{"group_first_j", group.front()}, {"cardinality", card.str()}});
          }
        }
        rep.exhaustion["union_sizes"] = sizes;
      }

      std::vector<int> js;
      if (j == 0) {
        if (!opt.long_running) {
          rep.partial = true;
          rep.notes.push_back("full scan over every window needs long_running");
          rep.wall_seconds = timer.seconds();
          return rep;
        }
        const int top = t1 ? 14 : 39;
        for (int t = 1; t <= top; ++t) js.push_back(t);
      } else {
        js.push_back(j);
      }

      ScanOutcome total;
      for (int jj : js) {
        const std::string box_id = "j" + std::to_string(jj);
        if (checkpoint.completed(rep.id, box_id)) continue;
        CandidateBox base =
            t1 ? window_box(jj, [&](std::size_t) { return type1_delta(jj); }, ctx,
                            "tight window, j=" + std::to_string(jj))
               : window_box(jj,
                            [&](std::size_t i) {
                              return ctx.jdata(jj).eps[i - 1] + type2_delta(jj);
                            },
                            ctx, "per-prime window, j=" + std::to_string(jj));
        ScanOutcome one = scan_boxes(pair_widened_boxes(base, jj, ctx), ctx);
        checkpoint.record(rep.id, box_id,
                          one.violations.empty() ? "done" : "violation",
                          one.violations.empty() ? nlohmann::json() : one.violations.front());
        total.visited += one.visited;
        total.pass_lambda += one.pass_lambda;
        total.pass_low += one.pass_low;
        total.rechecked += one.rechecked;
        total.identity += one.identity;
        total.violations.insert(total.violations.end(), one.violations.begin(),
                                one.violations.end());
      }

      rep.exhaustion["enumerated"] = total.visited;
      rep.exhaustion["accepted"] = total.visited - total.violations.size();
      rep.exhaustion["rejected"] = total.violations.size();
      rep.exhaustion["below_window"] = total.pass_low;
      rep.exhaustion["rechecked_exactly"] = total.rechecked;
      rep.exhaustion["extremal_hits"] = total.identity;
      rep.witnesses = total.violations;
      rep.confirmed = total.violations.empty();
      break;
    }

    case Thm5Phase::reduce: {
      rep.id = "theorem-5/reduce";
      std::vector<int> js;
      if (j == 0) {
        if (!opt.long_running) {
          rep.partial = true;
          rep.notes.push_back("reduce over every window needs long_running");
          rep.wall_seconds = timer.seconds();
          return rep;
        }
        for (int t = 1; t <= 14; ++t) js.push_back(t);
      } else {
        if (j > 14) throw std::invalid_argument("reduce phase covers j in 1..14");
        js.push_back(j);
      }

      // the z-direction certificate backing evaluation at the interval edge
      {
        const Real A = ctx.win().log_n44;
        const Real B = ctx.win().beta_pow * ctx.win().log_k;
        const Real C = ctx.win().k_log_k;
        if (!(C < A * B)) throw std::runtime_error("reduce: z-monotonicity hypothesis failed");
      }

      nlohmann::json rows = nlohmann::json::array();
      bool all_ok = true;
      for (int jj : js) {
        JData& d = ctx.jdata(jj);
        const Real T = ctx.t_lo(jj);

        // surviving split counts
        std::vector<int> ms;
        for (int m = 1; m <= 43; ++m) {
          if (upsilon_m(T, d.varpi, m, ctx.win()) >= 1) ms.push_back(m);
        }
        const auto [m_lo, m_hi] = table9_range(jj);
        bool contiguous = !ms.empty();
        for (std::size_t t = 0; t + 1 < ms.size(); ++t) {
          if (ms[t + 1] != ms[t] + 1) contiguous = false;
        }
        const bool m_ok = contiguous && ms.front() == m_lo && ms.back() == m_hi;

        // excluded deviation band per (m, s, m1, m2)
        bool band_ok = true;
        std::vector<std::array<SplitBounds, 4>> bounds(ms.size());
        detail::parallel_for(ms.size(), opt.workers, [&](std::size_t mi) {
          bounds[mi] = split_lower_bounds(jj, ms[mi], d, ctx.win(), table);
        });
        for (std::size_t mi = 0; mi < ms.size() && band_ok; ++mi) {
          const int m = ms[mi];
          for (int s = 0; s <= 3 && band_ok; ++s) {
            const auto& sb = bounds[mi][s];
            for (int m1 = 1; m1 <= m - 1 && band_ok; ++m1) {
              for (int m2 = 1; m2 <= 43 - m && band_ok; ++m2) {
                const auto sizes = PartitionSizes::make(m, m1, m2);
                const Real v = upsilon_m_m1_m2_max_over_w(T, d.w - dec("0.01"), d.w, sb.w1,
                                                          sb.w2, sizes, ctx.win());
                if (!(v < 1)) band_ok = false;
              }
            }
          }
        }

        if (band_ok) d.reduced = true;
        all_ok = all_ok && m_ok && band_ok;
        nlohmann::json row;
        row["j"] = jj;
        row["m_min"] = ms.empty() ? 0 : ms.front();
        row["m_max"] = ms.empty() ? 0 : ms.back();
        row["m_expected"] = {m_lo, m_hi};
        row["band_excluded"] = band_ok;
        row["delta_reduced"] = real_str(d.delta8 - dec("0.01"));
        rows.push_back(row);
      }
      rep.exhaustion["rows"] = rows;
      rep.confirmed = all_ok;
      break;
    }

    case Thm5Phase::final_scan: {
      rep.id = "theorem-5/final";
      std::vector<int> js;
      if (j == 0) {
        if (!opt.long_running) {
          rep.partial = true;
          rep.notes.push_back("final scan over every window needs long_running");
          rep.wall_seconds = timer.seconds();
          return rep;
        }
        for (int t = 1; t <= 39; ++t) js.push_back(t);
      } else {
        if (j > 39) throw std::invalid_argument("final phase covers j in 1..39");
        js.push_back(j);
      }

      ScanOutcome total;
      nlohmann::json per_j = nlohmann::json::array();
      for (int jj : js) {
        JData& d = ctx.jdata(jj);
        Real delta_eff = d.delta8;
        if (jj <= 14) {
          // the reduce phase sharpens the budget by 0.01
          VerificationReport sub = verify_thm5(table, Thm5Phase::reduce, jj, 0, opt);
          if (!sub.confirmed) {
            rep.witnesses.push_back({{"stage", "reduce-prerequisite"}, {"j", jj}});
            rep.wall_seconds = timer.seconds();
            return rep;
          }
          delta_eff = d.delta8 - dec("0.01");
        }

        // triplet filtering over 25 subintervals
        IntervalGrid grid{jj, 25};
        const Real A = ctx.win().log_n44;
        std::vector<std::array<Real, 25>> err(44);
        for (std::size_t i = 1; i <= 44; ++i) {
          const Real B = 44 * table.log_prime(i);
          const Real dq = type2_delta(jj) + d.eps[i - 1];
          const ExponentRange window = j_delta(i, jj, dq, ctx.win(), table);
          for (int r = 0; r < 25; ++r) {
            const auto [x1, x2] = grid.cell(r);
            Real best;
            bool first = true;
            for (std::int64_t ap1 : {window.lo, window.hi + 2}) {  // alpha+1 just outside
              for (const Real& x : {x1, x2}) {
                Real v = abs((Real(ap1) * B - A) / x - 1);
                if (first || v < best) {
                  best = v;
                  first = false;
                }
              }
            }
            err[i - 1][r] = best;
          }
        }

        struct Triplet {
          std::size_t q1, q2, q3;
          Real rho;
        };
        std::vector<Triplet> kept;
        std::uint64_t triplets = 0;
        for (std::size_t a = 0; a < 44; ++a) {
          for (std::size_t b = a + 1; b < 44; ++b) {
            for (std::size_t c = b + 1; c < 44; ++c) {
              ++triplets;
              Real zeta;
              bool first = true;
              for (int r = 0; r < 25; ++r) {
                Real s = err[a][r] + err[b][r] + err[c][r];
                if (first || s < zeta) {
                  zeta = s;
                  first = false;
                }
              }
              const Real rho = zeta - d.eps[a] - d.eps[b] - d.eps[c];
              if (!(rho > delta_eff)) kept.push_back(Triplet{a + 1, b + 1, c + 1, rho});
            }
          }
        }

        nlohmann::json jrow;
        jrow["j"] = jj;
        jrow["triplets"] = triplets;
        jrow["kept_triplets"] = kept.size();
        if (kept.empty()) {
          jrow["buckets"] = 0;
          per_j.push_back(jrow);
          continue;
        }

        Real t_max = kept.front().rho, t_min = kept.front().rho;
        for (const auto& t : kept) {
          if (t.rho > t_max) t_max = t.rho;
          if (t.rho < t_min) t_min = t.rho;
        }
        const int buckets_needed =
            std::max(1, static_cast<int>(ceil((t_max - t_min) * 1000).convert_to<long>()));
        jrow["buckets"] = buckets_needed;
        jrow["rho_max"] = real_str(t_max);
        jrow["rho_min"] = real_str(t_min);

        std::vector<int> bucket_list;
        if (bucket == 0) {
          for (int u = 1; u <= buckets_needed; ++u) bucket_list.push_back(u);
        } else {
          bucket_list.push_back(bucket);
        }

        for (int u : bucket_list) {
          const std::string box_id = "j" + std::to_string(jj) + "-u" + std::to_string(u);
          if (checkpoint.completed(rep.id, box_id)) continue;
          const Real rho_floor = t_max - Real(u) / 1000;
          std::vector<Triplet> in_bucket;
          for (const auto& t : kept) {
            int assigned = std::max(
                1, static_cast<int>(ceil((t_max - t.rho) * 1000).convert_to<long>()));
            if (assigned == u) in_bucket.push_back(t);
          }
          jrow["bucket_" + std::to_string(u)] = in_bucket.size();
          if (in_bucket.empty()) {
            checkpoint.record(rep.id, box_id, "done", nlohmann::json());
            continue;
          }

          CandidateBox base = window_box(
              jj,
              [&](std::size_t i) {
                return delta_eff / 2 - rho_floor / 2 + d.eps[i - 1];
              },
              ctx, "half-budget base, j=" + std::to_string(jj) + " u=" + std::to_string(u));

          std::vector<CandidateBox> boxes;
          for (const auto& t : in_bucket) {
            for (std::size_t free = 1; free <= 44; ++free) {
              if (free == t.q1 || free == t.q2 || free == t.q3) continue;
              CandidateBox box = base;
              for (std::size_t qi : {t.q1, t.q2, t.q3}) {
                ExponentRange r =
                    j_delta(qi, jj, delta_eff + d.eps[qi - 1], ctx.win(), table);
                if (r.lo < 1) r.lo = 1;
                box.ranges[qi - 1] = r;
              }
              ExponentRange r =
                  j_delta(free, jj, delta_eff - t.rho + d.eps[free - 1], ctx.win(), table);
              if (r.lo < 1) r.lo = 1;
              box.ranges[free - 1] = r;
              box.provenance.push_back("triplet (" + std::to_string(t.q1) + "," +
                                       std::to_string(t.q2) + "," + std::to_string(t.q3) +
                                       ") free " + std::to_string(free));
              boxes.push_back(std::move(box));
            }
          }
          ScanOutcome one = scan_boxes(boxes, ctx);
          checkpoint.record(rep.id, box_id,
                            one.violations.empty() ? "done" : "violation",
                            one.violations.empty() ? nlohmann::json() : one.violations.front());
          total.visited += one.visited;
          total.pass_lambda += one.pass_lambda;
          total.pass_low += one.pass_low;
          total.rechecked += one.rechecked;
          total.identity += one.identity;
          total.violations.insert(total.violations.end(), one.violations.begin(),
                                  one.violations.end());
        }
        per_j.push_back(jrow);
      }

      rep.exhaustion["per_j"] = per_j;
      rep.exhaustion["enumerated"] = total.visited;
      rep.exhaustion["accepted"] = total.visited - total.violations.size();
      rep.exhaustion["rejected"] = total.violations.size();
      rep.exhaustion["rechecked_exactly"] = total.rechecked;
      rep.exhaustion["extremal_hits"] = total.identity;
      rep.witnesses = total.violations;
      rep.confirmed = total.violations.empty();
      break;
    }
  }

  rep.wall_seconds = timer.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// recomputed tables
// ---------------------------------------------------------------------------

TableData compute_table(int id, const PrimeTable& table, const VerifyOptions& opt) {
  TableData out;
  out.id = id;
  switch (id) {
    case 1: {
      VerificationReport rep = verify_thm2(table, opt);
      if (!rep.confirmed) throw std::runtime_error("table 1: pipeline did not confirm");
      out.header = {"k", "u_k"};
      const auto uk = rep.exhaustion.at("table1").get<std::vector<std::size_t>>();
      for (std::size_t i = 0; i < uk.size(); ++i) {
        out.rows.push_back({std::to_string(i + 4), std::to_string(uk[i])});
      }
      break;
    }
    case 2: {
      VerificationReport rep = verify_thm4(table, 1, opt);
      out.header = {"k", "u_k"};
      for (const auto& row : rep.exhaustion.at("table2")) {
        out.rows.push_back({std::to_string(row.at("k").get<std::size_t>()),
                            std::to_string(row.at("u").get<std::size_t>())});
      }
      break;
    }
    case 3:
    case 4: {
      VerificationReport rep = verify_thm4(table, id - 2, opt);
      out.header = {"k", "j1_min", "j1_max"};
      std::map<std::size_t, std::pair<int, int>> ranges;
      const char* key = id == 3 ? "stage1_kept" : "stage2_kept";
      for (const auto& row : rep.exhaustion.at(key)) {
        const std::size_t k = row.at("k").get<std::size_t>();
        const int j1 = row.at("j1").get<int>();
        auto it = ranges.find(k);
        if (it == ranges.end()) {
          ranges[k] = {j1, j1};
        } else {
          it->second.first = std::min(it->second.first, j1);
          it->second.second = std::max(it->second.second, j1);
        }
      }
      for (const auto& [k, r] : ranges) {
        out.rows.push_back(
            {std::to_string(k), std::to_string(r.first), std::to_string(r.second)});
      }
      break;
    }
    case 5: {
      VerificationReport rep = verify_thm4(table, 1, opt);
      out.header = {"alpha", "k", "max_rank"};
      for (const auto& row : rep.exhaustion.at("table5")) {
        out.rows.push_back({std::to_string(row.at("alpha").get<int>()),
                            std::to_string(row.at("k").get<std::size_t>()),
                            std::to_string(row.at("max_rank").get<std::size_t>())});
      }
      break;
    }
    case 6:
    case 7:
    case 8: {
      out.header = id == 6 ? std::vector<std::string>{"j", "w"}
                           : (id == 7 ? std::vector<std::string>{"j", "varpi_lower"}
                                      : std::vector<std::string>{"j", "delta"});
      for (int jj = 1; jj <= 39; ++jj) {
        VerificationReport rep = verify_thm5(table, Thm5Phase::tables, jj, 0, opt);
        const auto& row = rep.exhaustion.at("rows").at(0);
        const char* key = id == 6 ? "w" : (id == 7 ? "varpi_lower" : "delta");
        out.rows.push_back({std::to_string(jj), row.at(key).get<std::string>()});
      }
      break;
    }
    case 9:
    case 10: {
      for (int jj = 1; jj <= 14; ++jj) {
        VerificationReport rep = verify_thm5(table, Thm5Phase::reduce, jj, 0, opt);
        const auto& row = rep.exhaustion.at("rows").at(0);
        if (id == 9) {
          out.header = {"j", "m_min", "m_max"};
          out.rows.push_back({std::to_string(jj),
                              std::to_string(row.at("m_min").get<int>()),
                              std::to_string(row.at("m_max").get<int>())});
        } else {
          out.header = {"j", "delta"};
          out.rows.push_back({std::to_string(jj), row.at("delta_reduced").get<std::string>()});
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("compute_table: id must be 1..10");
  }
  return out;
}

}  // namespace taubound::search
