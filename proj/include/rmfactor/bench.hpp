// Iteration-count benchmarking over semiprime datasets.
#pragma once

#include <rmfactor/factor.hpp>
#include <rmfactor/gen.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdint>
#include <exception>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace rmfactor {

struct BenchRow {
  unsigned digits = 0;
  Method method = Method::rm;
  Natural multiplier;
  std::size_t count = 0;
  std::uint64_t mean_iterations_floor = 0;
  std::size_t failures = 0;
  std::uint64_t wall_time_ms = 0;
};

struct Mismatch {
  std::size_t index = 0;
  Natural n;
  std::string reason;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  // mismatches[i] belongs to rows[i]
  std::vector<std::vector<Mismatch>> mismatches;
};

/// floor(sum / count)
inline std::uint64_t mean_iterations(std::span<const std::uint64_t> samples) {
  if (samples.empty()) throw InvalidInput("mean_iterations: no samples");
  Natural sum = 0;
  for (std::uint64_t s : samples) sum += static_cast<unsigned long>(s);
  sum /= static_cast<unsigned long>(samples.size());
  return sum.get_ui();
}

/// ceil(6 log10 m) as the smallest r with 10^r >= m^6.
inline unsigned predicted_crossover(const Natural& m_rm) {
  if (m_rm < 1) throw InvalidInput("predicted_crossover: m must be >= 1");
  Natural m6;
  mpz_pow_ui(m6.get_mpz_t(), m_rm.get_mpz_t(), 6);
  unsigned r = 0;
  Natural p = 1;
  while (p < m6) {
    p *= 10;
    ++r;
  }
  return r;
}

/// Checks each outcome against the record's known factors.
inline std::vector<Mismatch> verify_outcomes(
    std::span<const DatasetRecord> dataset,
    std::span<const FactorOutcome> outcomes) {
  if (dataset.size() != outcomes.size())
    throw InvalidInput("verify_outcomes: size mismatch");
  std::vector<Mismatch> out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const FactorOutcome& o = outcomes[i];
    const DatasetRecord& r = dataset[i];
    if (o.verdict != Verdict::factored) {
      out.push_back({i, r.n, std::string(verdict_name(o.verdict))});
    } else if (*o.factor != r.a && *o.factor != r.b) {
      out.push_back({i, r.n, "factor " + to_decimal(*o.factor) + " not in {a, b}"});
    }
  }
  return out;
}

namespace detail {

// Runs fn(i) for i in [0, count) on `workers` threads. Rethrows the first
// exception after all threads join.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Factors every record with every config and aggregates one row per config.
inline BenchResult run_benchmark(std::span<const DatasetRecord> dataset,
                                 std::span<const MethodConfig> configs,
                                 unsigned workers = 1) {
  if (dataset.empty()) throw InvalidInput("run_benchmark: empty dataset");
  const unsigned digits = dataset.front().digits;
  for (const auto& r : dataset)
    if (r.digits != digits)
      throw InvalidInput("run_benchmark: records have mixed digit counts");

  BenchResult result;
  std::vector<FactorOutcome> outcomes(dataset.size());
  std::vector<std::uint64_t> iterations(dataset.size());
  for (const MethodConfig& cfg : configs) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    detail::parallel_for(dataset.size(), workers, [&](std::size_t i) {
      outcomes[i] = factor(dataset[i].n, cfg);
    });
    const auto elapsed = std::chrono::steady_clock::now() - start;

    for (std::size_t i = 0; i < outcomes.size(); ++i)
      iterations[i] = outcomes[i].iterations;
    auto mismatches = verify_outcomes(dataset, outcomes);

    BenchRow row;
    row.digits = digits;
    row.method = cfg.method;
    row.multiplier = cfg.multiplier;
    row.count = dataset.size();
    row.mean_iterations_floor = mean_iterations(iterations);
    row.failures = mismatches.size();
    row.wall_time_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count());
    result.rows.push_back(std::move(row));
    result.mismatches.push_back(std::move(mismatches));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Report: '#'-prefixed text table, then CSV with a header row.

inline constexpr std::string_view kReportHeader =
    "digits,method,multiplier,count,mean_iterations_floor,failures,wall_time_ms";

inline void write_report_table(std::ostream& out, std::span<const BenchRow> rows,
                               std::string_view prefix = "") {
  char line[160];
  std::snprintf(line, sizeof line, "%-6s %-7s %10s %8s %14s %8s %10s", "digits",
                "method", "multiplier", "count", "mean_iter", "failures", "time_ms");
  out << prefix << line << '\n';
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-6u %-7s %10s %8zu %14llu %8zu %10llu",
                  r.digits, std::string(method_name(r.method)).c_str(),
                  to_decimal(r.multiplier).c_str(), r.count,
                  static_cast<unsigned long long>(r.mean_iterations_floor),
                  r.failures, static_cast<unsigned long long>(r.wall_time_ms));
    out << prefix << line << '\n';
  }
}

inline void write_report(std::ostream& out, std::span<const BenchRow> rows) {
  write_report_table(out, rows, "# ");
  out << kReportHeader << '\n';
  for (const auto& r : rows)
    out << r.digits << ',' << method_name(r.method) << ','
        << to_decimal(r.multiplier) << ',' << r.count << ','
        << r.mean_iterations_floor << ',' << r.failures << ','
        << r.wall_time_ms << '\n';
}

}  // namespace rmfactor
