// rmfactor: generate semiprime datasets, factor numbers, benchmark methods.
//
// Exit codes: 0 success, 1 domain failure (abort, verification), 2 usage or
// parse error.

#include <rmfactor/rmfactor.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace rmfactor;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_u64(const std::string& flag, const std::string& text,
                        std::uint64_t min = 0) {
  Natural v;
  try {
    v = parse_natural(text);
  } catch (const InvalidInput& e) {
    throw UsageError(flag + ": " + e.what());
  }
  if (!mpz_fits_ulong_p(v.get_mpz_t()) || v < static_cast<unsigned long>(min))
    throw UsageError(flag + ": value " + text + " out of range (min " +
                     std::to_string(min) + ")");
  return v.get_ui();
}

Natural parse_multiplier(const std::string& flag, const std::string& text) {
  try {
    Natural v = parse_natural(text);
    if (v < 1) throw InvalidInput("must be >= 1");
    return v;
  } catch (const InvalidInput& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text) {
    if (c == ',') {
      out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  out.push_back(item);
  return out;
}

std::vector<DatasetRecord> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open dataset '" + path + "'");
  try {
    return read_dataset(in);
  } catch (const DatasetParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// --- generate --------------------------------------------------------------

struct GenerateArgs {
  std::string digits, count, seed = "0", out;
};

int cmd_generate(const GenerateArgs& args) {
  GeneratorSpec spec;
  spec.digits = static_cast<unsigned>(parse_u64("--digits", args.digits, 3));
  if (spec.digits > 100000) throw UsageError("--digits: too large");
  spec.count = parse_u64("--count", args.count, 1);
  spec.seed = parse_u64("--seed", args.seed);

  std::vector<DatasetRecord> records;
  try {
    records = generate_dataset(spec);
  } catch (const GenerationFailure& e) {
    std::cerr << "generation failed: " << e.what() << '\n';
    return kExitFailure;
  }
  std::ofstream out(args.out, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write '" << args.out << "'\n";
    return kExitFailure;
  }
  write_dataset(out, records);
  std::cout << "wrote " << records.size() << " records to " << args.out << '\n';
  return kExitOk;
}

// --- factor ----------------------------------------------------------------

struct FactorArgs {
  std::string n, method = "rm", multiplier, depth, cap;
  bool no_sieve = false;
};

int cmd_factor(const FactorArgs& args) {
  Natural n;
  try {
    n = parse_natural(args.n);
  } catch (const InvalidInput& e) {
    throw UsageError(std::string("n: ") + e.what());
  }
  if (n < 2) throw UsageError("n must be >= 2");

  MethodConfig cfg;
  try {
    cfg.method = parse_method(args.method);
  } catch (const InvalidInput& e) {
    throw UsageError(std::string("--method: ") + e.what());
  }
  if (!args.multiplier.empty())
    cfg.multiplier = parse_multiplier("--m", args.multiplier);
  else if (cfg.method == Method::sm)
    cfg.multiplier = 480;
  cfg.sieve_enabled = !args.no_sieve;
  if (!args.depth.empty())
    cfg.depth_override = static_cast<unsigned>(parse_u64("--depth", args.depth, 1));
  if (!args.cap.empty()) cfg.safety_cap = parse_u64("--cap", args.cap, 1);

  FactorOutcome outcome;
  try {
    outcome = factor(n, cfg);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }

  std::cout << "n: " << to_decimal(n) << '\n'
            << "method: " << method_name(cfg.method) << '\n';
  if (cfg.method == Method::sm || cfg.method == Method::rm)
    std::cout << "multiplier: " << to_decimal(cfg.multiplier) << '\n';
  std::cout << "verdict: " << verdict_name(outcome.verdict) << '\n';
  if (outcome.factor) {
    const Natural& f = *outcome.factor;
    const Natural cofactor = n / f;
    std::cout << "factor: " << to_decimal(f) << '\n'
              << "cofactor: " << to_decimal(cofactor) << '\n'
              << to_decimal(n) << " = " << to_decimal(f < cofactor ? f : cofactor)
              << " x " << to_decimal(f < cofactor ? cofactor : f) << '\n';
  }
  std::cout << "iterations: " << outcome.iterations << '\n'
            << "phase: " << phase_name(outcome.phase) << '\n';
  return outcome.verdict == Verdict::aborted ? kExitFailure : kExitOk;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string dataset, methods = "lehman,sm,rm", rm_m = "120", sm_m = "480",
                       workers, out;
  bool no_sieve = false;
};

int cmd_bench(const BenchArgs& args) {
  std::vector<MethodConfig> configs;
  for (const std::string& name : split_list(args.methods)) {
    MethodConfig cfg;
    try {
      cfg.method = parse_method(name);
    } catch (const InvalidInput& e) {
      throw UsageError(std::string("--methods: ") + e.what());
    }
    cfg.sieve_enabled = !args.no_sieve;
    if (cfg.method == Method::rm || cfg.method == Method::sm) {
      const bool rm = cfg.method == Method::rm;
      for (const std::string& m : split_list(rm ? args.rm_m : args.sm_m)) {
        cfg.multiplier = parse_multiplier(rm ? "--rm-m" : "--sm-m", m);
        configs.push_back(cfg);
      }
    } else {
      cfg.multiplier = 1;
      configs.push_back(cfg);
    }
  }
  const unsigned workers =
      args.workers.empty()
          ? std::max(1u, std::thread::hardware_concurrency())
          : static_cast<unsigned>(parse_u64("--workers", args.workers, 1));

  const std::vector<DatasetRecord> records = load_dataset(args.dataset);
  if (records.empty()) throw UsageError(args.dataset + ": no records");

  // One group per digit count, in ascending order.
  std::map<unsigned, std::vector<DatasetRecord>> groups;
  for (const auto& r : records) groups[r.digits].push_back(r);

  std::vector<BenchRow> rows;
  std::size_t failures = 0;
  for (const auto& [digits, group] : groups) {
    BenchResult result = run_benchmark(group, configs, workers);
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      for (std::size_t j = 0; j < result.mismatches[i].size() && j < 10; ++j) {
        const Mismatch& m = result.mismatches[i][j];
        std::cerr << "mismatch: " << method_name(result.rows[i].method)
                  << " n=" << to_decimal(m.n) << ": " << m.reason << '\n';
      }
      failures += result.rows[i].failures;
      rows.push_back(std::move(result.rows[i]));
    }
  }

  write_report_table(std::cout, rows);
  if (!args.out.empty()) {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write '" << args.out << "'\n";
      return kExitFailure;
    }
    write_report(out, rows);
  }
  return failures == 0 ? kExitOk : kExitFailure;
}

// --- verify ----------------------------------------------------------------

int cmd_verify(const std::string& path) {
  const std::vector<DatasetRecord> records = load_dataset(path);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (auto violation = validate_record(records[i])) {
      // +2: header is line 1
      std::cout << "line " << i + 2 << ": n=" << to_decimal(records[i].n)
                << ": " << *violation << '\n';
      return kExitFailure;
    }
  }
  std::cout << records.size() << " records ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fermat-family factoring and iteration-count benchmarks"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a seeded semiprime dataset");
  generate->add_option("--digits", gen.digits, "Decimal length of n (>= 3)")->required();
  generate->add_option("--count", gen.count, "Number of records")->required();
  generate->add_option("--seed", gen.seed, "64-bit seed")->capture_default_str();
  generate->add_option("--out", gen.out, "Output file")->required();

  FactorArgs fac;
  auto* factor_cmd = app.add_subcommand("factor", "Factor one number");
  factor_cmd->add_option("n", fac.n, "Number to factor")->required();
  factor_cmd->add_option("--method", fac.method, "trial|fermat|lehman|sm|rm")->capture_default_str();
  factor_cmd->add_option("--m", fac.multiplier, "Multiplier (rm default 120, sm default 480)");
  factor_cmd->add_flag("--no-sieve", fac.no_sieve, "Disable the rm duplicate filter");
  factor_cmd->add_option("--depth", fac.depth, "Force the rm recursion depth");
  factor_cmd->add_option("--cap", fac.cap, "Maximum square tests before aborting");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark methods on a dataset");
  bench_cmd->add_option("--dataset", bench.dataset, "Dataset file")->required();
  bench_cmd->add_option("--methods", bench.methods, "Comma-separated methods")->capture_default_str();
  bench_cmd->add_option("--rm-m", bench.rm_m, "Comma-separated rm multipliers")->capture_default_str();
  bench_cmd->add_option("--sm-m", bench.sm_m, "Comma-separated sm multipliers")->capture_default_str();
  bench_cmd->add_flag("--no-sieve", bench.no_sieve, "Disable the rm duplicate filter");
  bench_cmd->add_option("--workers", bench.workers, "Worker threads (default: hardware)");
  bench_cmd->add_option("--out", bench.out, "Report file");

  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "Check every dataset record invariant");
  verify->add_option("dataset,--dataset", verify_path, "Dataset file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*factor_cmd) return cmd_factor(fac);
    if (*bench_cmd) return cmd_bench(bench);
    if (*verify) return cmd_verify(verify_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
