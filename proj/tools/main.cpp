// primeorder: command-line front end for prime tables and order searches.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "primeorder/format.hpp"
#include "primeorder/prime_table.hpp"
#include "primeorder/process.hpp"
#include "primeorder/search.hpp"

namespace {

using namespace primeorder;

// Process exit codes.
enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIoError = 3,
  kNotConverged = 4,
  kNotInTable = 5,
};

constexpr const char* kDefaultTable = "primes.tbl";
constexpr std::uint64_t kReferenceSetpoints[] = {86'028'121, 141'650'939, 533'000'389};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, ControlMode> kModeNames = {
    {"integral", ControlMode::kIntegral}, {"proportion", ControlMode::kProportion}};
const std::map<std::string, Tuning> kTuningNames = {
    {"balanced", Tuning::kBalanced}, {"log", Tuning::kLogarithmic}, {"explicit", Tuning::kExplicit}};

double parse_positive(const std::string& text, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !(value > 0.0)) {
    throw UsageError(std::string("invalid ") + what + " '" + text + "'");
  }
  return value;
}

// "integral:log", "integral:balanced", "integral:balanced=19.06",
// "integral:explicit=25", "proportion".
ControllerConfig parse_mode_arg(const std::string& arg, const ControllerConfig& base) {
  ControllerConfig config = base;
  const auto colon = arg.find(':');
  const std::string mode = arg.substr(0, colon);
  if (!kModeNames.contains(mode)) throw UsageError("unknown mode '" + mode + "'");
  config.mode = kModeNames.at(mode);
  if (colon == std::string::npos) {
    if (config.mode == ControlMode::kIntegral) config.tuning = Tuning::kLogarithmic;
    return config;
  }
  if (config.mode == ControlMode::kProportion) {
    throw UsageError("proportion mode takes no tuning: '" + arg + "'");
  }
  const std::string rest = arg.substr(colon + 1);
  const auto eq = rest.find('=');
  const std::string tuning = rest.substr(0, eq);
  if (!kTuningNames.contains(tuning)) throw UsageError("unknown tuning '" + tuning + "'");
  config.tuning = kTuningNames.at(tuning);
  const std::optional<std::string> value =
      eq == std::string::npos ? std::nullopt : std::optional(rest.substr(eq + 1));
  switch (config.tuning) {
    case Tuning::kBalanced:
      if (value) config.balanced_gain = parse_positive(*value, "gain");
      break;
    case Tuning::kExplicit:
      if (!value) throw UsageError("explicit tuning needs a value, e.g. integral:explicit=25");
      config.ti = parse_positive(*value, "T_i");
      break;
    case Tuning::kLogarithmic:
      if (value) throw UsageError("log tuning takes no value");
      break;
  }
  return config;
}

std::vector<std::uint64_t> read_setpoints(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableError(TableError::Kind::kIo, "cannot open " + path);
  std::vector<std::uint64_t> setpoints;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string_view token(line.data() + first, last - first + 1);
    std::uint64_t w = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), w);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw UsageError("bad setpoint '" + std::string(token) + "' in " + path);
    }
    setpoints.push_back(w);
  }
  return setpoints;
}

ControllerConfig base_config(const PrimeTable& table, std::uint64_t max_steps) {
  ControllerConfig config;
  config.clamp_high = static_cast<double>(table.count());
  config.max_steps = max_steps;
  return config;
}

int cmd_generate(std::uint64_t n, const std::string& out_path) {
  if (n < 1) throw UsageError("-n must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  const auto table = build_table(n);
  save_table(table, out_path);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  std::cout << "count: " << table.count() << '\n'
            << "largest: " << table.back() << '\n'
            << "elapsed_s: " << format_number(elapsed.count(), 3) << '\n'
            << "written: " << out_path << '\n';
  return kOk;
}

struct SearchOptions {
  std::string table = kDefaultTable;
  std::uint64_t w = 0;
  std::string mode = "integral";
  std::string tuning = "log";
  std::optional<double> ti;
  std::optional<double> gain;
  double u0 = 1.0;
  std::uint64_t max_steps = 100;
  std::string trace;
  bool no_membership_check = false;
};

int cmd_search(const SearchOptions& opt) {
  const auto table = load_table(opt.table);
  SearchRequest request;
  request.w = opt.w;
  request.initial_u = opt.u0;
  request.check_membership = !opt.no_membership_check;
  request.config = base_config(table, opt.max_steps);
  request.config.mode = kModeNames.at(opt.mode);
  request.config.tuning = kTuningNames.at(opt.tuning);
  if (request.config.tuning == Tuning::kExplicit) {
    if (!opt.ti) throw UsageError("--tuning explicit requires --ti");
    request.config.ti = *opt.ti;
  } else if (opt.ti) {
    throw UsageError("--ti only applies to --tuning explicit");
  }
  request.config.balanced_gain = opt.gain;

  const auto result = search(table, request);
  std::cout << "w: " << result.w << '\n' << "status: " << to_string(result.status) << '\n';
  if (result.order) std::cout << "order: " << *result.order << '\n';
  std::cout << "steps: " << result.steps << '\n';
  if (request.config.mode == ControlMode::kIntegral && result.ti > 0.0) {
    std::cout << "ti: " << format_number(result.ti) << '\n';
  }

  if (!opt.trace.empty() && !result.trace.empty()) {
    std::ofstream out(opt.trace);
    if (!out) throw TableError(TableError::Kind::kIo, "cannot open " + opt.trace);
    export_trace_csv(result, out);
  }

  switch (result.status) {
    case SearchStatus::kConverged: return kOk;
    case SearchStatus::kSetpointNotInTable: return kNotInTable;
    case SearchStatus::kBudgetExhausted:
    case SearchStatus::kCycleDetected: return kNotConverged;
  }
  return kInternal;
}

struct BenchOptions {
  std::string table = kDefaultTable;
  std::string setpoints;
  std::string preset;
  std::vector<std::string> configs;
  std::uint64_t max_steps = 100;
  std::string out;
};

int cmd_bench(const BenchOptions& opt) {
  const auto table = load_table(opt.table);
  std::vector<std::uint64_t> setpoints;
  if (!opt.setpoints.empty()) {
    setpoints = read_setpoints(opt.setpoints);
  } else {
    setpoints.assign(std::begin(kReferenceSetpoints), std::end(kReferenceSetpoints));
  }

  const auto base = base_config(table, opt.max_steps);
  std::vector<ControllerConfig> modes;
  const std::vector<std::string> mode_args =
      opt.configs.empty() ? std::vector<std::string>{"integral:log"} : opt.configs;
  for (const auto& arg : mode_args) modes.push_back(parse_mode_arg(arg, base));

  const auto report = run_benchmark(table, setpoints, modes);
  if (opt.out.empty()) {
    export_benchmark_csv(report, std::cout);
    write_benchmark_summary(report, std::cerr);
  } else {
    std::ofstream out(opt.out);
    if (!out) throw TableError(TableError::Kind::kIo, "cannot open " + opt.out);
    export_benchmark_csv(report, out);
    write_benchmark_summary(report, std::cout);
  }

  if (report.all_agree()) return kOk;
  for (const auto& row : report.rows) {
    if (row.status == SearchStatus::kSetpointNotInTable) return kNotInTable;
  }
  return kNotConverged;
}

int cmd_chars(const std::string& table_path, std::uint64_t samples, const std::string& out_path) {
  if (samples < 2) throw UsageError("--samples must be at least 2");
  const auto table = load_table(table_path);
  if (out_path.empty()) {
    export_static_characteristics(table, samples, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw TableError(TableError::Kind::kIo, "cannot open " + out_path);
    export_static_characteristics(table, samples, out);
  }
  return kOk;
}

int cmd_info(const std::string& table_path) {
  const auto table = load_table(table_path);
  std::cout << "count: " << table.count() << '\n'
            << "largest: " << table.back() << '\n'
            << "version: " << kTableVersion << '\n'
            << "checksum: " << payload_checksum(table.values()) << '\n';
  if (table.count() >= 2) {
    std::cout << "gain_at_N: " << format_number(actual_gain(table, table.count()), 6) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find the order of a prime with an integral-controller feedback loop"};
  app.require_subcommand(1, 1);

  std::uint64_t gen_n = 0;
  std::string gen_out = kDefaultTable;
  auto* generate = app.add_subcommand("generate", "Build and save a table of the first N primes");
  generate->add_option("-n,--count", gen_n, "Number of primes")->required();
  generate->add_option("-o,--output", gen_out, "Table file")->capture_default_str();

  SearchOptions search_opt;
  auto* search_cmd = app.add_subcommand("search", "Find the order of a prime setpoint");
  search_cmd->add_option("-t,--table", search_opt.table, "Table file")->capture_default_str();
  search_cmd->add_option("-w,--setpoint", search_opt.w, "Prime whose order is sought")
      ->required();
  search_cmd->add_option("-m,--mode", search_opt.mode, "integral or proportion")
      ->check(CLI::IsMember({"integral", "proportion"}))
      ->capture_default_str();
  search_cmd->add_option("--tuning", search_opt.tuning, "balanced, log or explicit")
      ->check(CLI::IsMember({"balanced", "log", "explicit"}))
      ->capture_default_str();
  search_cmd->add_option("--ti", search_opt.ti, "Integration time constant (explicit tuning)")
      ->check(CLI::PositiveNumber);
  search_cmd->add_option("--gain", search_opt.gain, "Gain for balanced tuning (default 18)")
      ->check(CLI::PositiveNumber);
  search_cmd->add_option("--u0", search_opt.u0, "Initial controller state")->capture_default_str();
  search_cmd->add_option("--max-steps", search_opt.max_steps, "Step budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  search_cmd->add_option("--trace", search_opt.trace, "Write the step trace as CSV");
  search_cmd->add_flag("--no-membership-check", search_opt.no_membership_check,
                       "Skip the table membership pre-check");

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "Run searches over a setpoint set");
  bench->add_option("-t,--table", bench_opt.table, "Table file")->capture_default_str();
  auto* setpoints_opt =
      bench->add_option("-s,--setpoints", bench_opt.setpoints, "File with one prime per line");
  bench->add_option("--preset", bench_opt.preset, "Built-in setpoint set")
      ->check(CLI::IsMember({"reference"}))
      ->excludes(setpoints_opt);
  bench->add_option("-c,--config", bench_opt.configs,
                    "Controller config, repeatable: integral:log, integral:balanced[=K], "
                    "integral:explicit=T, proportion (default integral:log)");
  bench->add_option("--max-steps", bench_opt.max_steps, "Step budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("-o,--output", bench_opt.out, "Report CSV (default stdout)");

  std::string chars_table = kDefaultTable;
  std::uint64_t chars_samples = 100;
  std::string chars_out;
  auto* chars = app.add_subcommand("chars", "Export u,p,K static characteristics as CSV");
  chars->add_option("-t,--table", chars_table, "Table file")->capture_default_str();
  chars->add_option("--samples", chars_samples, "Number of rows")->capture_default_str();
  chars->add_option("-o,--output", chars_out, "CSV file (default stdout)");

  std::string info_table = kDefaultTable;
  auto* info = app.add_subcommand("info", "Describe a table file");
  info->add_option("-t,--table", info_table, "Table file")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen_n, gen_out);
    if (search_cmd->parsed()) return cmd_search(search_opt);
    if (bench->parsed()) return cmd_bench(bench_opt);
    if (chars->parsed()) return cmd_chars(chars_table, chars_samples, chars_out);
    if (info->parsed()) return cmd_info(info_table);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const TableError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == TableError::Kind::kInvalidArgument ? kUsage : kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
