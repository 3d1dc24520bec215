// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// all criteria pass. Builds a 3x10^7 table (~240 MB, a few seconds).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "primeorder/format.hpp"
#include "primeorder/prime_table.hpp"
#include "primeorder/process.hpp"
#include "primeorder/search.hpp"

namespace {

using namespace primeorder;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kReferenceSetpoints[] = {86'028'121, 141'650'939, 533'000'389};

// Collects failed checks for one criterion and prints its verdict.
class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {}

  void check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }

  void note(const std::string& text) { std::cout << "    " << text << '\n'; }

  bool finish() const {
    std::cout << (failures_.empty() ? "[PASS] " : "[FAIL] ") << name_ << '\n';
    for (const auto& f : failures_) std::cout << "         - " << f << '\n';
    return failures_.empty();
  }

 private:
  std::string name_;
  std::vector<std::string> failures_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SearchRequest request_for(const PrimeTable& table, std::uint64_t w, ControlMode mode,
                          Tuning tuning) {
  SearchRequest r;
  r.w = w;
  r.initial_u = 1.0;
  r.config.mode = mode;
  r.config.tuning = tuning;
  r.config.clamp_high = static_cast<double>(table.count());
  r.config.max_steps = 100;
  return r;
}

// e = w - y and u_floored = floor(u_real) on every record, y = p(u_floored).
bool trace_consistent(const PrimeTable& table, const SearchResult& r) {
  if (r.trace.size() != r.steps) return false;
  for (const auto& s : r.trace) {
    if (static_cast<double>(s.u_floored) != std::floor(s.u_real)) return false;
    if (s.e != static_cast<std::int64_t>(r.w) - static_cast<std::int64_t>(s.y)) return false;
    if (s.y != table.nth_prime(s.u_floored)) return false;
  }
  return true;
}

std::string describe(const SearchResult& r, std::optional<Order> oracle) {
  std::ostringstream s;
  s << "w=" << r.w << " status=" << to_string(r.status) << " steps=" << r.steps
    << " order=" << (r.order ? std::to_string(*r.order) : "-")
    << " oracle=" << (oracle ? std::to_string(*oracle) : "-");
  return s.str();
}

std::vector<SearchResult> g_traces;  // every search run by criteria 3-5, for criterion 7

}  // namespace

int main() {
  std::cout << "building reference tables\n";
  auto t0 = Clock::now();
  const auto table_30m = build_table(30'000'000);
  const double build_30m_s = seconds_since(t0);
  t0 = Clock::now();
  const auto table_1e6 = build_table(1'000'000);
  const double build_1e6_s = seconds_since(t0);
  const auto table_1e7 = build_table(10'000'000);
  std::cout << "  N=3e7 built in " << format_number(build_30m_s, 2) << " s, N=1e6 in "
            << format_number(build_1e6_s, 3) << " s\n\n";

  bool all_pass = true;

  {
    Criterion c("1. table fidelity");
    const std::pair<Order, Prime> anchors[] = {
        {1, 2},
        {10, 29},
        {100, 541},
        {1000, 7919},
        {1'000'000, 15'485'863},
        {10'000'000, 179'424'673},
        {9'000'000, 160'481'183},
        {8'000'000, 141'650'939},
        {8'000'555, 141'661'147},
    };
    for (const auto& [u, p] : anchors) {
      c.check(table_30m.nth_prime(u) == p, "p(" + std::to_string(u) + ") != " + std::to_string(p));
    }
    c.check(table_1e6.nth_prime(1'000'000) == 15'485'863, "1e6 table last prime");
    c.check(build_1e6_s < 10.0, "N=1e6 build took " + format_number(build_1e6_s, 3) + " s");
    c.note("N=1e6 build " + format_number(build_1e6_s, 3) + " s (limit 10 s); N=3e7 build " +
           format_number(build_30m_s, 2) + " s");
    all_pass &= c.finish();
  }

  {
    Criterion c("2. gain anchors");
    const Order u = 30'000'000;
    const double actual = actual_gain(table_30m, u);
    const double plain = asymptotic_gain(u);
    const double refined = refined_gain(u);
    const double rel_err = std::abs(actual - plain) / actual;
    c.check(std::abs(actual - 19.1) <= 0.05, "actual gain " + format_number(actual));
    c.check(std::abs(plain - 17.2) <= 0.05, "ln u " + format_number(plain));
    c.check(std::abs(refined - 19.06) <= 0.01, "refined gain " + format_number(refined));
    c.check(std::abs(rel_err - 0.10) <= 0.01, "relative error " + format_number(rel_err));
    c.note("K(3e7)=" + format_number(actual, 4) + " ln u=" + format_number(plain, 4) +
           " refined=" + format_number(refined, 4) + " rel.err=" + format_number(rel_err * 100, 2) +
           "%");
    all_pass &= c.finish();
  }

  {
    Criterion c("3. integral convergence on the reference setpoints (log tuning, steps <= 5)");
    for (const auto w : kReferenceSetpoints) {
      const auto r = search(table_30m, request_for(table_30m, w, ControlMode::kIntegral,
                                                   Tuning::kLogarithmic));
      const auto oracle = table_30m.inverse_lookup(w);
      g_traces.push_back(r);
      c.note("N=3e7 " + describe(r, oracle));
      c.check(r.status == SearchStatus::kConverged, "w=" + std::to_string(w) + " did not converge");
      c.check(r.steps <= 5, "w=" + std::to_string(w) + " took " + std::to_string(r.steps) +
                                " steps");
      c.check(r.order.has_value() && r.order == oracle,
              "w=" + std::to_string(w) + " order differs from oracle");
    }
    for (const auto w : {kReferenceSetpoints[0], kReferenceSetpoints[1]}) {
      const auto r = search(table_1e7, request_for(table_1e7, w, ControlMode::kIntegral,
                                                   Tuning::kLogarithmic));
      const auto oracle = table_1e7.inverse_lookup(w);
      c.note("N=1e7 " + describe(r, oracle));
      c.check(r.status == SearchStatus::kConverged && r.steps <= 5 && r.order == oracle,
              "N=1e7 w=" + std::to_string(w) + ": " + describe(r, oracle));
    }
    all_pass &= c.finish();
  }

  {
    Criterion c("4. proportion mode (steps <= 10; linear process in one update)");
    for (const auto w : kReferenceSetpoints) {
      const auto r = search(table_30m, request_for(table_30m, w, ControlMode::kProportion,
                                                   Tuning::kLogarithmic));
      const auto oracle = table_30m.inverse_lookup(w);
      g_traces.push_back(r);
      c.note("N=3e7 " + describe(r, oracle));
      c.check(r.status == SearchStatus::kConverged && r.steps <= 10,
              "w=" + std::to_string(w) + " took " + std::to_string(r.steps) + " steps (" +
                  std::string(to_string(r.status)) + ")");
      c.check(r.order.has_value() && r.order == oracle,
              "w=" + std::to_string(w) + " order differs from oracle");
    }
    // One update step = two evaluations (the initial one counts as step 1).
    int linear_cases = 0;
    for (const int gain : {2, 7, 18, 19}) {
      const LinearProcess linear(gain, 100'000);
      for (const std::uint64_t target : {1u, 42u, 999u, 31'337u, 100'000u}) {
        for (const double u0 : {5.0, 77'777.0}) {
          if (static_cast<std::uint64_t>(u0) == target) continue;
          SearchRequest req;
          req.w = static_cast<std::uint64_t>(gain) * target;
          req.initial_u = u0;
          req.config.mode = ControlMode::kProportion;
          req.config.clamp_high = 100'000.0;
          const auto r = search(linear, req);
          ++linear_cases;
          c.check(r.status == SearchStatus::kConverged && r.order == target && r.steps == 2,
                  "linear K=" + std::to_string(gain) + " target=" + std::to_string(target) +
                      " steps=" + std::to_string(r.steps));
        }
      }
    }
    c.note("linear process: " + std::to_string(linear_cases) + " cases incl. K=7, w=7*42, u0=5");
    all_pass &= c.finish();
  }

  {
    Criterion c("5. oracle equivalence sweep (500 samples, N=1e6, max_steps=100, 100% agreement)");
    std::mt19937_64 rng(20261016);
    std::uniform_int_distribution<std::uint64_t> pick(1, table_1e6.count());
    std::vector<std::uint64_t> setpoints(500);
    for (auto& w : setpoints) w = table_1e6.nth_prime(pick(rng));

    struct Mode {
      const char* name;
      ControlMode mode;
      Tuning tuning;
    };
    for (const auto& m : {Mode{"integral balanced K=18", ControlMode::kIntegral, Tuning::kBalanced},
                          Mode{"integral log", ControlMode::kIntegral, Tuning::kLogarithmic},
                          Mode{"proportion", ControlMode::kProportion, Tuning::kLogarithmic}}) {
      int agree = 0;
      int converged = 0;
      int wrong = 0;
      std::uint64_t max_steps = 0;
      std::vector<std::string> misses;
      for (const auto w : setpoints) {
        const auto r = search(table_1e6, request_for(table_1e6, w, m.mode, m.tuning));
        g_traces.push_back(r);
        const auto oracle = table_1e6.inverse_lookup(w);
        if (r.status == SearchStatus::kConverged) {
          ++converged;
          max_steps = std::max(max_steps, r.steps);
          if (r.order == oracle) {
            ++agree;
          } else {
            ++wrong;
          }
        } else if (misses.size() < 3) {
          misses.push_back(describe(r, oracle));
        }
      }
      c.note(std::string(m.name) + ": " + std::to_string(agree) + "/500 agree, " +
             std::to_string(converged) + " converged (max " + std::to_string(max_steps) +
             " steps), " + std::to_string(wrong) + " wrong answers");
      for (const auto& miss : misses) c.note("  e.g. " + miss);
      c.check(agree == 500, std::string(m.name) + ": " + std::to_string(500 - agree) +
                                " samples without an oracle-matching answer");
    }
    all_pass &= c.finish();
  }

  {
    Criterion c("6. manual-trace fixture");
    const std::pair<Order, Prime> trace[] = {
        {10'000'000, 179'424'673}, {9'000'000, 160'481'183}, {8'000'000, 141'650'939},
        {8'000'200, 141'654'581},  {8'000'400, 141'658'373}, {8'000'500, 141'660'191},
        {8'000'550, 141'661'081},  {8'000'553, 141'661'129}, {8'000'554, 141'661'139},
        {8'000'555, 141'661'147},
    };
    for (const auto& [u, y] : trace) {
      c.check(table_30m.nth_prime(u) == y, "p(" + std::to_string(u) + ") = " +
                                               std::to_string(table_30m.nth_prime(u)) +
                                               ", expected " + std::to_string(y));
    }
    all_pass &= c.finish();
  }

  {
    Criterion c("7. property suites");
    const auto all = table_30m.values();
    c.check(std::adjacent_find(all.begin(), all.end(), std::greater_equal<>()) == all.end(),
            "table not strictly increasing");

    const auto naive = oracle::first_primes_trial(10'000);
    const auto sieved = build_table(10'000).values();
    c.check(std::equal(naive.begin(), naive.end(), sieved.begin(), sieved.end()),
            "sieve differs from trial division at N=1e4");

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> any_u(-1e9, 1e9);
    std::uniform_real_distribution<double> valid_u(1.0, 30'000'000.0);
    ControllerConfig config;
    config.ti = 18.0;
    bool idempotent = true;
    bool fixed_point = true;
    for (int i = 0; i < 100'000; ++i) {
      const double once = clamp_antiwindup(any_u(rng), config);
      idempotent &= clamp_antiwindup(once, config) == once;
      const ControllerState s{valid_u(rng), 0};
      fixed_point &= integral_step(s, 0, config).u == s.u;
      const std::uint64_t w = table_30m.nth_prime(1 + i % table_30m.count());
      fixed_point &= proportion_step(s, w, w, config).u == s.u;
    }
    c.check(idempotent, "clamp is not idempotent");
    c.check(fixed_point, "zero error moved the state");

    std::size_t records = 0;
    bool consistent = true;
    for (const auto& r : g_traces) {
      const auto& t = r.w > table_1e6.back() ? table_30m : table_1e6;
      consistent &= trace_consistent(t, r);
      records += r.trace.size();
    }
    c.check(consistent, "trace record violates e = w - y or floor consistency");
    c.note("trace consistency over " + std::to_string(g_traces.size()) + " searches, " +
           std::to_string(records) + " records");

    const auto path = std::filesystem::temp_directory_path() / "primeorder_acceptance.tbl";
    save_table(table_1e6, path);
    c.check(load_table(path) == table_1e6, "round trip changed the table");
    {
      std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
      f.seekp(kTableHeaderSize + 8 * 123'456);
      f.put('\x55');
    }
    bool rejected = false;
    try {
      (void)load_table(path);
    } catch (const TableError& e) {
      rejected = e.kind() == TableError::Kind::kChecksumMismatch;
    }
    c.check(rejected, "corrupted payload not rejected with checksum mismatch");
    std::filesystem::remove(path);
    all_pass &= c.finish();
  }

  {
    Criterion c("8. robustness");
    for (const auto mode : {ControlMode::kIntegral, ControlMode::kProportion}) {
      const auto r = search(table_30m, request_for(table_30m, 141'661'149, mode,
                                                   Tuning::kLogarithmic));
      c.check(r.status == SearchStatus::kSetpointNotInTable,
              "composite setpoint: " + std::string(to_string(r.status)));
    }

    auto mistuned = request_for(table_30m, 533'000'389, ControlMode::kIntegral, Tuning::kExplicit);
    mistuned.config.ti = 0.5;
    const auto r = search(table_30m, mistuned);
    c.note("T_i=0.5, w=533000389: " + describe(r, table_30m.inverse_lookup(533'000'389)));
    c.check(r.status == SearchStatus::kCycleDetected || r.status == SearchStatus::kBudgetExhausted,
            "mistuned run ended as " + std::string(to_string(r.status)));
    c.check(r.steps <= mistuned.config.max_steps, "mistuned run exceeded max_steps");

    auto unchecked = request_for(table_30m, 141'661'149, ControlMode::kIntegral,
                                 Tuning::kLogarithmic);
    unchecked.check_membership = false;
    const auto u = search(table_30m, unchecked);
    c.note("composite without pre-check: " + describe(u, std::nullopt));
    c.check(u.status != SearchStatus::kConverged && u.steps <= unchecked.config.max_steps,
            "composite without pre-check did not terminate cleanly");
    all_pass &= c.finish();
  }

  std::cout << '\n' << (all_pass ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << '\n';
  return all_pass ? 0 : 1;
}
