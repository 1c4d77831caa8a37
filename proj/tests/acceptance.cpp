// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <rmfactor/rmfactor.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace rmfactor;

namespace {

constexpr std::size_t kRecords = 20000;
constexpr unsigned kMinDigits = 8;
constexpr unsigned kMaxDigits = 14;

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

MethodConfig config(Method method, unsigned long m, bool sieve = true) {
  MethodConfig cfg;
  cfg.method = method;
  cfg.multiplier = m;
  cfg.sieve_enabled = sieve;
  return cfg;
}

struct Key {
  unsigned digits;
  Method method;
  unsigned long m;
  auto operator<=>(const Key&) const = default;
};

struct Means {
  std::map<Key, std::uint64_t> mean;
  std::map<Key, std::size_t> failures;
};

int failed = 0;

void verdict(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failed;
}

void note(const std::string& line) {
  std::printf("  %s\n", line.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

bool divides(const Natural& n, const FactorOutcome& o) {
  return o.verdict == Verdict::factored && o.factor && *o.factor > 1 && *o.factor < n &&
         mpz_divisible_p(n.get_mpz_t(), o.factor->get_mpz_t());
}

// --- 1 ---------------------------------------------------------------------

void hard_cases() {
  struct Case { const char* n; const char* a; const char* b; };
  const Case cases[] = {{"9441101419801", "2174023", "4342687"},
                        {"96864103649179", "5680679", "17051501"},
                        {"99968287751261", "9994573", "10002257"}};
  const MethodConfig cfgs[] = {config(Method::rm, 120), config(Method::rm, 5040),
                               config(Method::sm, 480)};
  bool ok = true;
  double worst = 0;
  for (const Case& c : cases) {
    const Natural n(c.n, 10), a(c.a, 10), b(c.b, 10);
    for (const MethodConfig& cfg : cfgs) {
      const auto start = std::chrono::steady_clock::now();
      const FactorOutcome o = factor(n, cfg);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      worst = std::max(worst, secs);
      const bool hit = o.verdict == Verdict::factored && (*o.factor == a || *o.factor == b);
      ok = ok && hit && secs < 10.0;
      note(std::string(c.n) + " " + std::string(method_name(cfg.method)) + " m=" +
           cfg.multiplier.get_str() + ": " + (hit ? "ok" : "wrong") + ", " +
           std::to_string(o.iterations) + " iterations, " + fmt(secs) + " s");
    }
  }
  verdict(1, ok, "hard cases, slowest call " + fmt(worst) + " s");
}

// --- benchmark sweep shared by 2-6 ------------------------------------------

Means sweep() {
  Means out;
  for (unsigned r = kMinDigits; r <= kMaxDigits; ++r) {
    const auto dataset = generate_dataset({r, kRecords, 1000 + r});
    std::vector<MethodConfig> cfgs{config(Method::lehman, 1), config(Method::sm, 480),
                                   config(Method::rm, 120)};
    if (r == 13) cfgs.push_back(config(Method::rm, 5040));
    const BenchResult res = run_benchmark(dataset, cfgs, workers());
    for (const BenchRow& row : res.rows) {
      const Key key{r, row.method, row.multiplier.get_ui()};
      out.mean[key] = row.mean_iterations_floor;
      out.failures[key] = row.failures;
      note("r=" + std::to_string(r) + " " + std::string(method_name(row.method)) +
           " m=" + row.multiplier.get_str() + ": mean " +
           std::to_string(row.mean_iterations_floor) + ", failures " +
           std::to_string(row.failures) + ", " + std::to_string(row.wall_time_ms) + " ms");
    }
  }
  return out;
}

const Key kLehman(unsigned r) { return {r, Method::lehman, 1}; }
const Key kSm(unsigned r) { return {r, Method::sm, 480}; }
const Key kRm(unsigned r) { return {r, Method::rm, 120}; }

// --- 2 ---------------------------------------------------------------------

void table_one(const Means& s) {
  const std::uint64_t sm_ref[] = {52, 110, 241, 517, 1136};
  const std::uint64_t rm_ref[] = {52, 110, 241, 517, 1134};
  const std::uint64_t lehman_ref[] = {135, 294, 634, 1384, 2955};
  bool ok = true;
  double worst_sm_rm = 0, worst_lehman = 0;
  auto within = [&](const Key& k, std::uint64_t ref, double tol, double& worst) {
    const double dev = std::abs(static_cast<double>(s.mean.at(k)) - ref) / ref;
    worst = std::max(worst, dev);
    return dev <= tol && s.failures.at(k) == 0;
  };
  for (unsigned i = 0; i < 5; ++i) {
    const unsigned r = 8 + i;
    ok = within(kSm(r), sm_ref[i], 0.10, worst_sm_rm) && ok;
    ok = within(kRm(r), rm_ref[i], 0.10, worst_sm_rm) && ok;
    ok = within(kLehman(r), lehman_ref[i], 0.30, worst_lehman) && ok;
  }
  verdict(2, ok, "r=8..12 means vs reference: worst SM/RM deviation " + fmt(worst_sm_rm) +
                     " (tol 0.10), worst Lehman deviation " + fmt(worst_lehman) +
                     " (tol 0.30)");
}

// --- 3 ---------------------------------------------------------------------

void small_r_equality(const Means& s) {
  bool ok = true;
  double worst = 0;
  for (unsigned r = 8; r <= 11; ++r) {
    const double sm = static_cast<double>(s.mean.at(kSm(r)));
    const double rm = static_cast<double>(s.mean.at(kRm(r)));
    const double dev = std::abs(sm - rm) / sm;
    worst = std::max(worst, dev);
    ok = ok && dev <= 0.01;
  }
  verdict(3, ok, "SM(480) vs RM(120) for r=8..11: worst relative gap " + fmt(worst) +
                     " (tol 0.01)");
}

// --- 4 ---------------------------------------------------------------------

void table_two(const Means& s) {
  const double ratio = static_cast<double>(s.mean.at({13, Method::rm, 5040})) /
                       static_cast<double>(s.mean.at(kRm(13)));
  verdict(4, ratio >= 0.75 && ratio <= 0.95 && s.failures.at({13, Method::rm, 5040}) == 0,
          "r=13 mean(RM 5040)/mean(RM 120) = " + fmt(ratio) + " (range [0.75, 0.95])");
}

// --- 5 ---------------------------------------------------------------------

void growth(const Means& s) {
  bool ok = true;
  double sm_lo = 1e9, sm_hi = 0, lehman_lo = 1e9;
  for (unsigned r = 9; r <= 13; ++r) {
    for (const auto& key : {kSm, kRm}) {
      const double q = static_cast<double>(s.mean.at(key(r + 1))) /
                       static_cast<double>(s.mean.at(key(r)));
      sm_lo = std::min(sm_lo, q);
      sm_hi = std::max(sm_hi, q);
      ok = ok && q >= 1.8 && q <= 2.4;
    }
    const double q = static_cast<double>(s.mean.at(kLehman(r + 1))) /
                     static_cast<double>(s.mean.at(kLehman(r)));
    lehman_lo = std::min(lehman_lo, q);
    ok = ok && q >= 2.0;
  }
  verdict(5, ok, "mean(r+1)/mean(r), r=9..13: SM/RM in [" + fmt(sm_lo) + ", " + fmt(sm_hi) +
                     "] (range [1.8, 2.4]), Lehman min " + fmt(lehman_lo) + " (>= 2.0)");
}

// --- 6 ---------------------------------------------------------------------

void crossover(const Means& s) {
  const unsigned predicted = predicted_crossover(120);
  bool ok = predicted == 13;
  std::string detail = "predicted_crossover(120) = " + std::to_string(predicted);
  for (unsigned r = 13; r <= kMaxDigits; ++r) {
    const auto sm = s.mean.at(kSm(r)), rm = s.mean.at(kRm(r));
    ok = ok && sm > rm;
    detail += ", r=" + std::to_string(r) + " SM " + std::to_string(sm) + " vs RM " +
              std::to_string(rm);
  }
  verdict(6, ok, detail);
}

// --- 7 ---------------------------------------------------------------------

std::vector<bool> sieve(std::size_t limit) {
  std::vector<bool> prime(limit + 1, true);
  prime[0] = prime[1] = false;
  for (std::size_t i = 2; i * i <= limit; ++i)
    if (prime[i])
      for (std::size_t j = i * i; j <= limit; j += i) prime[j] = false;
  return prime;
}

void oracle_correctness() {
  constexpr unsigned long kLimit = 100'000;
  const auto prime = sieve(kLimit);
  const MethodConfig trial = config(Method::trial, 1), fermat = config(Method::fermat, 1),
                     lehman = config(Method::lehman, 1), sm = config(Method::sm, 480),
                     rm1 = config(Method::rm, 1), rm120 = config(Method::rm, 120);
  std::size_t errors = 0, checks = 0;
  std::string first_error;
  auto check = [&](const Natural& n, const MethodConfig& cfg, bool is_prime) {
    ++checks;
    const FactorOutcome o = factor(n, cfg);
    const bool good = is_prime ? o.verdict == Verdict::probable_prime : divides(n, o);
    if (!good && errors++ == 0)
      first_error = std::string(method_name(cfg.method)) + " m=" + cfg.multiplier.get_str() +
                    " on " + n.get_str();
  };

  for (unsigned long v = 4; v <= kLimit; ++v) {
    const Natural n(v);
    const bool p = prime[v];
    check(n, trial, p);
    check(n, rm1, p);
    check(n, rm120, p);
    if (v >= 8) check(n, lehman, p);
    if (!p) check(n, sm, false);
    if (!p && v % 2 == 1 && v >= 9) check(n, fermat, false);
  }
  const std::size_t exhaustive = checks;

  // Half balanced records from the generator, half arbitrary prime pairs.
  RandomStream stream(77);
  std::mt19937_64 rng(77);
  const Natural cap = pow10(12);
  for (int i = 0; i < 10'000; ++i) {
    Natural n;
    if (i % 2 == 0) {
      n = generate_record(4 + static_cast<unsigned>(rng() % 9), stream).n;
    } else {
      const unsigned bits = 2 + static_cast<unsigned>(rng() % 18);  // a < 2^19 < 10^6
      const Natural lo = Natural(1) << (bits - 1), hi = (Natural(1) << bits) - 1;
      const Natural a = random_probable_prime(lo, hi, stream);
      const Natural b = random_probable_prime(a, cap / a, stream);
      n = a * b;
    }
    check(n, trial, false);
    check(n, lehman, false);
    check(n, sm, false);
    check(n, rm1, false);
    check(n, rm120, false);
  }
  verdict(7, errors == 0,
          std::to_string(exhaustive) + " exhaustive checks on [4, 1e5] and " +
              std::to_string(checks - exhaustive) + " on random semiprimes <= 1e12, " +
              std::to_string(errors) + " errors" +
              (first_error.empty() ? "" : " (first: " + first_error + ")"));
}

// --- 8 ---------------------------------------------------------------------

void equivalence_and_sieve() {
  RandomStream stream(88);
  std::mt19937_64 rng(88);
  std::size_t bad_equiv = 0;
  for (int i = 0; i < 1000; ++i) {
    const Natural n = generate_record(6 + static_cast<unsigned>(rng() % 7), stream).n;
    const unsigned long m = 1 + rng() % 200;
    MethodConfig cfg = config(Method::rm, m);
    cfg.depth_override = 1;
    cfg.unbounded_leaf = true;
    const FactorOutcome sm = sm_factor(n, Natural(4 * m));
    const auto seq = rm_candidate_sequence(n, cfg, sm.iterations);
    bool same = seq.size() == sm.iterations;
    for (std::size_t j = 0; same && j < seq.size(); ++j) same = seq[j] == j + 1;
    const FactorOutcome rm = rm_factor(n, cfg);
    same = same && rm.verdict == sm.verdict && rm.factor == sm.factor &&
           rm.iterations == sm.iterations;
    if (!same) ++bad_equiv;
  }

  std::size_t bad_sieve = 0;
  std::uint64_t sum_on = 0, sum_off = 0;
  for (int i = 0; i < 1000; ++i) {
    const Natural n = generate_record(10, stream).n;
    for (unsigned long m : {1ul, 120ul}) {
      const FactorOutcome on = rm_factor(n, config(Method::rm, m, true));
      const FactorOutcome off = rm_factor(n, config(Method::rm, m, false));
      sum_on += on.iterations;
      sum_off += off.iterations;
      if (on.verdict != off.verdict || !divides(n, on) || !divides(n, off) ||
          on.iterations > off.iterations)
        ++bad_sieve;
    }
  }
  verdict(8, bad_equiv == 0 && bad_sieve == 0,
          "RM(depth 1, unbounded) vs SM(4m): " + std::to_string(bad_equiv) +
              "/1000 differ; sieve on/off: " + std::to_string(bad_sieve) +
              "/2000 violations, total iterations on " + std::to_string(sum_on) + " vs off " +
              std::to_string(sum_off));
}

// --- 9 ---------------------------------------------------------------------

void determinism() {
  auto bytes = [](const GeneratorSpec& spec) {
    std::ostringstream out;
    write_dataset(out, generate_dataset(spec));
    return out.str();
  };
  bool ok = true;
  for (unsigned r : {6u, 12u, 20u}) {
    const GeneratorSpec spec{r, 2000, 9 + r};
    ok = ok && bytes(spec) == bytes(spec);
  }
  const bool gen_ok = ok;

  const auto dataset = generate_dataset({11, 3000, 99});
  const std::vector<MethodConfig> cfgs{config(Method::lehman, 1), config(Method::sm, 480),
                                       config(Method::rm, 120)};
  const BenchResult one = run_benchmark(dataset, cfgs, 1);
  std::string means;
  for (unsigned w : {2u, 4u, 8u}) {
    const BenchResult many = run_benchmark(dataset, cfgs, w);
    for (std::size_t i = 0; i < cfgs.size(); ++i)
      ok = ok && many.rows[i].mean_iterations_floor == one.rows[i].mean_iterations_floor &&
           many.rows[i].failures == one.rows[i].failures;
  }
  for (const auto& row : one.rows) means += " " + std::to_string(row.mean_iterations_floor);
  verdict(9, ok, std::string("generator byte-identical: ") + (gen_ok ? "yes" : "no") +
                     "; bench means with 1/2/4/8 workers:" + means);
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  try {
    hard_cases();
    const Means s = sweep();
    table_one(s);
    small_r_equality(s);
    table_two(s);
    growth(s);
    crossover(s);
    oracle_correctness();
    equivalence_and_sieve();
    determinism();
  } catch (const std::exception& e) {
    std::printf("error: %s\n", e.what());
    return 1;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s: %d failing criteria, %.0f s\n", failed ? "FAIL" : "PASS", failed, secs);
  return failed ? 1 : 0;
}
