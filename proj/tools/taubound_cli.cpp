// Command-line front end: compute / verify / table / brute.
//
// Exit codes: 0 confirmed, 2 counterexample witness found, 3 partial (a
// guarded stage was skipped), 4 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "taubound/bounds.hpp"
#include "taubound/factorization.hpp"
#include "taubound/precision.hpp"
#include "taubound/primes.hpp"
#include "taubound/report.hpp"
#include "taubound/search.hpp"

namespace {

using namespace taubound;

constexpr int kExitOk = 0;
constexpr int kExitCounterexample = 2;
constexpr int kExitPartial = 3;
constexpr int kExitUsage = 4;

struct GlobalFlags {
  unsigned digits = 60;
  bool json = false;
  bool csv = false;
  int workers = 1;
  bool long_running = false;
  std::string checkpoint;
  std::string check_golden;
  std::uint64_t factor_bound = 1'000'000'000;
};

std::string printable(const Real& x, unsigned digits) {
  return x.str(digits) + "...";
}

Factorization parse_operand(const std::string& text, const PrimeTable& table,
                            std::uint64_t bound) {
  if (text == "w73") return search::witness73(table);
  if (text == "w74") return search::witness74(table);
  if (text == "nstar44") return search::thm5_maximizer(table);
  return parse_factorization(text, table, bound);
}

int run_compute(const std::vector<std::string>& args, const GlobalFlags& g) {
  if (args.empty()) {
    std::cerr << "compute: missing function name\n";
    return kExitUsage;
  }
  const std::string fn = args[0];
  PrimeTable table = first_primes(200);

  const std::map<std::string, int> arity = {
      {"tau", 1},     {"omega", 1},   {"bigomega", 1}, {"gamma_log", 1}, {"beta_log", 1},
      {"log_n", 1},   {"lambda", 1},  {"t", 1},        {"r", 1},         {"nr_ratio", 1},
      {"upsilon", 2}, {"r1", 2},      {"u", 1},        {"eta2", 0},      {"eta3", 0}};
  auto it = arity.find(fn);
  if (it == arity.end()) {
    std::cerr << "compute: unknown function '" << fn << "'\n";
    return kExitUsage;
  }
  if (args.size() != static_cast<std::size_t>(it->second) + 1) {
    std::cerr << "compute: " << fn << " expects " << it->second << " argument(s)\n";
    return kExitUsage;
  }

  nlohmann::json out;
  out["function"] = fn;
  out["digits"] = g.digits;
  std::string value;
  bool truncated = true;

  try {
    if (fn == "eta2") {
      value = printable(eta2(), g.digits);
      out["value"] = eta2().str(g.digits);
    } else if (fn == "eta3") {
      value = printable(eta3(table), g.digits);
      out["value"] = eta3(table).str(g.digits);
    } else if (fn == "u") {
      const Real x(args[1]);
      const std::size_t u = search::u_of(log(x), table);
      value = std::to_string(u);
      out["value"] = u;
      truncated = false;
    } else if (fn == "r1") {
      const Real z(args[1]);
      const std::size_t k = std::stoull(args[2]);
      const Real v = r1(log(z), k, table);
      value = printable(v, g.digits);
      out["value"] = v.str(g.digits);
    } else if (fn == "upsilon") {
      const Factorization f = parse_operand(args[1], table, g.factor_bound);
      Factorization z = parse_operand(args[2], table, g.factor_bound);
      const Real v = upsilon(f, z, table);
      value = printable(v, g.digits);
      out["value"] = v.str(g.digits);
    } else {
      const Factorization f = parse_operand(args[1], table, g.factor_bound);
      out["n"] = to_string(f, table);
      if (fn == "tau") {
        value = tau(f).str();
        out["value"] = value;
        truncated = false;
      } else if (fn == "omega") {
        value = std::to_string(omega(f));
        out["value"] = omega(f);
        truncated = false;
      } else if (fn == "bigomega") {
        value = std::to_string(big_omega(f));
        out["value"] = big_omega(f);
        truncated = false;
      } else {
        Real v;
        if (fn == "gamma_log") v = gamma_log(f, table);
        if (fn == "beta_log") v = beta_log(f, table);
        if (fn == "log_n") v = f.log_n;
        if (fn == "lambda") v = lambda_of(f);
        if (fn == "t") v = t_of(f);
        if (fn == "r") v = r_of(f);
        if (fn == "nr_ratio") v = nicolas_robin_ratio(f);
        value = printable(v, g.digits);
        out["value"] = v.str(g.digits);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "compute: " << e.what() << "\n";
    return kExitUsage;
  }

  out["truncated"] = truncated;
  if (g.json) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << value << "\n";
  }
  return kExitOk;
}

int report_exit(const VerificationReport& rep, const GlobalFlags& g) {
  if (g.json) {
    std::cout << rep.to_json().dump(2) << "\n";
  } else {
    std::cout << rep.id << ": "
              << (rep.confirmed ? "confirmed" : (rep.partial ? "partial" : "counterexample"))
              << " (" << rep.wall_seconds << " s)\n";
    for (const auto& w : rep.witnesses) std::cout << "  witness: " << w.dump() << "\n";
    for (const auto& n : rep.notes) std::cout << "  note: " << n << "\n";
  }
  if (rep.confirmed) return kExitOk;
  return rep.partial ? kExitPartial : kExitCounterexample;
}

int run_verify(int theorem, const std::string& stage, int jwin, int bucket,
               const GlobalFlags& g) {
  search::VerifyOptions opt;
  opt.workers = g.workers;
  opt.long_running = g.long_running;
  opt.checkpoint_path = g.checkpoint;

  PrimeTable table = first_primes(search::required_primes(theorem));
  VerificationReport rep;
  switch (theorem) {
    case 1:
      rep = search::verify_thm1(table, opt);
      break;
    case 2:
      rep = search::verify_thm2(table, opt);
      break;
    case 3:
      rep = search::verify_thm3(table, opt);
      break;
    case 4: {
      int s = 0;
      if (!stage.empty()) s = std::stoi(stage);
      rep = search::verify_thm4(table, s, opt);
      break;
    }
    case 5: {
      static const std::map<std::string, search::Thm5Phase> phases = {
          {"prelim", search::Thm5Phase::prelim}, {"tables", search::Thm5Phase::tables},
          {"type1", search::Thm5Phase::type1},   {"type2", search::Thm5Phase::type2},
          {"reduce", search::Thm5Phase::reduce}, {"final", search::Thm5Phase::final_scan}};
      if (stage.empty()) {
        // the desk-scale slice: prelim plus tables
        VerificationReport pre = search::verify_thm5(table, search::Thm5Phase::prelim, 0, 0, opt);
        if (!pre.confirmed) return report_exit(pre, g);
        rep = search::verify_thm5(table, search::Thm5Phase::tables, jwin, 0, opt);
        rep.notes.push_back("ran prelim+tables; request --stage type1/type2/reduce/final "
                            "for the window scans");
        rep.partial = true;
      } else {
        auto pit = phases.find(stage);
        if (pit == phases.end()) {
          std::cerr << "verify 5: unknown stage '" << stage << "'\n";
          return kExitUsage;
        }
        rep = search::verify_thm5(table, pit->second, jwin, bucket, opt);
      }
      break;
    }
    default:
      std::cerr << "verify: theorem must be 1..5\n";
      return kExitUsage;
  }
  return report_exit(rep, g);
}

int run_table(int id, const GlobalFlags& g) {
  search::VerifyOptions opt;
  opt.workers = g.workers;
  opt.long_running = g.long_running;
  opt.checkpoint_path = g.checkpoint;
  if (id >= 6 && !g.long_running) {
    std::cerr << "table: ids 6..10 need --long-running\n";
    return kExitPartial;
  }

  std::size_t need = id >= 6 ? 100 : search::required_primes(id <= 1 ? 2 : 4);
  if (id == 1) need = search::required_primes(2);
  PrimeTable table = first_primes(need);
  search::TableData data = search::compute_table(id, table, opt);

  std::ostringstream csv;
  for (std::size_t i = 0; i < data.header.size(); ++i) {
    csv << (i ? "," : "") << data.header[i];
  }
  csv << "\n";
  for (const auto& row : data.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i];
    csv << "\n";
  }
  std::cout << csv.str();

  if (!g.check_golden.empty()) {
    std::ifstream in(g.check_golden);
    if (!in) {
      std::cerr << "table: cannot open golden file " << g.check_golden << "\n";
      return kExitUsage;
    }
    std::stringstream golden;
    golden << in.rdbuf();
    // integral tables compare exactly; real-valued ones one-sidedly within 5e-4
    const bool exact = id <= 5 || id == 9;
    if (exact) {
      if (golden.str() != csv.str()) {
        std::cerr << "table: golden mismatch\n";
        return kExitCounterexample;
      }
    } else {
      std::istringstream ours(csv.str()), theirs(golden.str());
      std::string lo, lg;
      std::getline(ours, lo);
      std::getline(theirs, lg);
      const Real tol = dec("5e-4");
      while (std::getline(ours, lo) && std::getline(theirs, lg)) {
        const auto oc = lo.find(','), gc = lg.find(',');
        if (lo.substr(0, oc) != lg.substr(0, gc)) {
          std::cerr << "table: row key mismatch\n";
          return kExitCounterexample;
        }
        const Real vo(lo.substr(oc + 1)), vg(lg.substr(gc + 1));
        // table 7 rows are lower bounds, the rest upper bounds
        const bool ok = id == 7 ? vo >= vg - tol : vo <= vg + tol;
        if (!ok) {
          std::cerr << "table: golden tolerance violated at row " << lo.substr(0, oc) << "\n";
          return kExitCounterexample;
        }
      }
      if (std::getline(theirs, lg) || std::getline(ours, lo)) {
        std::cerr << "table: golden row count mismatch\n";
        return kExitCounterexample;
      }
    }
    std::cerr << "table: golden check passed\n";
  }
  return kExitOk;
}

int run_brute(const std::string& id, std::uint64_t nmax, const GlobalFlags& g) {
  search::VerifyOptions opt;
  opt.workers = g.workers;
  opt.long_running = g.long_running;
  VerificationReport rep = search::brute_check(id, nmax, opt);
  return report_exit(rep, g);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divisor-count bound verification engine"};
  app.require_subcommand(1);

  GlobalFlags g;
  if (const char* env = std::getenv("TAUBOUND_DIGITS")) {
    g.digits = static_cast<unsigned>(std::atoi(env));
  }
  app.add_option("--digits", g.digits, "working precision in decimal digits (>= 50)");
  app.add_flag("--json", g.json, "emit JSON");
  app.add_flag("--csv", g.csv, "emit CSV where applicable");
  app.add_option("--workers", g.workers, "worker threads");
  app.add_flag("--long-running", g.long_running, "allow long-running scans");
  app.add_option("--checkpoint", g.checkpoint, "newline-delimited JSON checkpoint log");
  app.add_option("--check", g.check_golden, "compare table output against a golden CSV");
  app.add_option("--factor-bound", g.factor_bound, "materialization bound for literals");

  auto* compute = app.add_subcommand("compute", "evaluate a bound function");
  std::vector<std::string> compute_args;
  compute->add_option("expr", compute_args, "function name and arguments");

  auto* verify = app.add_subcommand("verify", "run a theorem verification pipeline");
  int theorem = 0;
  std::string stage;
  int jwin = 0;
  int bucket = 0;
  verify->add_option("theorem", theorem, "theorem id (1..5)")->required();
  verify->add_option("--stage", stage, "stage (theorem 4: 1..4; theorem 5: phase name)");
  verify->add_option("--j", jwin, "window index (theorem 5)");
  verify->add_option("--bucket", bucket, "bucket index (theorem 5 final phase)");

  auto* tablecmd = app.add_subcommand("table", "recompute a reference table as CSV");
  int table_id = 0;
  tablecmd->add_option("id", table_id, "table id (1..10)")->required();

  auto* brute = app.add_subcommand("brute", "exhaustive inequality check");
  std::string ineq;
  std::uint64_t nmax = 1'000'000;
  brute->add_option("inequality", ineq, "ramanujan|jensen1|fond1|fond2|inequality1|"
                                        "inequality2|inequality3|result74")
      ->required();
  brute->add_option("--nmax", nmax, "upper end of the scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    taubound::install(taubound::PrecisionContext::make(g.digits));
    if (compute->parsed()) return run_compute(compute_args, g);
    if (verify->parsed()) return run_verify(theorem, stage, jwin, bucket, g);
    if (tablecmd->parsed()) return run_table(table_id, g);
    if (brute->parsed()) return run_brute(ineq, nmax, g);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCounterexample;
  }
  return kExitUsage;
}
