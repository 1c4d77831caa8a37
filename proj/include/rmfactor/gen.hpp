// Seeded semiprime datasets: n = a * b with a, b probable primes,
// n^(1/3) < a <= b and n of a fixed decimal length.
#pragma once

#include <rmfactor/arith.hpp>

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rmfactor {

class GenerationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetRecord {
  Natural n;
  Natural a;
  Natural b;
  unsigned digits = 0;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

struct GeneratorSpec {
  unsigned digits = 0;
  std::size_t count = 0;
  std::uint64_t seed = 0;

  void validate() const {
    if (digits < 3) throw InvalidInput("digits must be >= 3");
    if (count < 1) throw InvalidInput("count must be >= 1");
  }
};

inline constexpr unsigned kRetryBudget = 10'000;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// A deterministic stream of uniform naturals. std::mt19937_64 is fully
/// specified, so sequences match across platforms.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Sub-stream for record `index` of a dataset seeded with `seed`.
  static RandomStream derive(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
  }

  /// Uniform in [lo, hi] by rejection on the bit length of the span.
  Natural uniform(const Natural& lo, const Natural& hi) {
    if (hi < lo) throw InvalidInput("uniform: empty range");
    const Natural span = hi - lo + 1;
    const std::size_t bits = bit_length(span);
    const std::size_t words = (bits + 63) / 64;
    Natural v;
    do {
      v = 0;
      for (std::size_t i = 0; i < words; ++i) {
        v <<= 64;
        v += Natural(static_cast<unsigned long>(engine_()));
      }
      v >>= words * 64 - bits;
    } while (v >= span);
    return lo + v;
  }

 private:
  std::mt19937_64 engine_;
};

/// Samples a candidate in [lo, hi] and walks up to the next probable prime;
/// resamples if that walk leaves the interval.
inline Natural random_probable_prime(const Natural& lo, const Natural& hi,
                                     RandomStream& stream) {
  if (hi < lo) throw InvalidInput("random_probable_prime: lo > hi");
  for (unsigned attempt = 0; attempt < kRetryBudget; ++attempt) {
    Natural p = stream.uniform(lo, hi);
    if (p < 2) p = 2;
    if (p > 2 && mpz_even_p(p.get_mpz_t())) ++p;
    while (p <= hi && !is_probable_prime(p)) p += (p == 2 ? 1 : 2);
    if (p <= hi) return p;
  }
  throw GenerationFailure("no probable prime found in [" + to_decimal(lo) +
                          ", " + to_decimal(hi) + "]");
}

/// Window for the smaller factor: 10^((r-1)/3) < a < 10^(r/2).
inline std::pair<Natural, Natural> small_factor_window(unsigned digits) {
  const Natural lo = integer_root(pow10(digits - 1), 3) + 1;
  const Natural hi = isqrt_floor(pow10(digits) - 1);
  return {lo, hi};
}

/// Picks a bit length uniformly from those spanned by [lo, hi] and returns
/// the part of [lo, hi] with that bit length. The smaller factor is thus
/// spread evenly in log scale instead of piling up near sqrt(n).
inline std::pair<Natural, Natural> small_factor_bin(const Natural& lo,
                                                    const Natural& hi,
                                                    RandomStream& stream) {
  const std::size_t min_bits = bit_length(lo);
  const std::size_t max_bits = bit_length(hi);
  const std::size_t bits =
      min_bits + stream.uniform(0, static_cast<unsigned long>(max_bits - min_bits)).get_ui();
  Natural bin_lo, bin_hi;
  mpz_setbit(bin_lo.get_mpz_t(), bits - 1);
  bin_hi = (bin_lo << 1) - 1;
  return {bin_lo < lo ? lo : bin_lo, bin_hi > hi ? hi : bin_hi};
}

/// Violated invariant, if any.
inline std::optional<std::string> validate_record(const DatasetRecord& r) {
  if (r.a * r.b != r.n) return "n != a*b";
  if (r.a > r.b) return "a > b";
  if (!is_probable_prime(r.a)) return "a is not a probable prime";
  if (!is_probable_prime(r.b)) return "b is not a probable prime";
  if (decimal_length(r.n) != r.digits) return "decimal length of n != digits";
  if (r.a * r.a * r.a <= r.n) return "a^3 <= n";
  if (r.a * r.a > r.n) return "a^2 > n";
  return std::nullopt;
}

inline DatasetRecord generate_record(unsigned digits, RandomStream& stream) {
  if (digits < 3) throw InvalidInput("generate_record: digits must be >= 3");
  const auto [a_lo, a_hi] = small_factor_window(digits);
  const Natural n_lo = pow10(digits - 1);
  const Natural n_hi = pow10(digits) - 1;
  Natural b_lo, b_hi;
  for (unsigned attempt = 0; attempt < kRetryBudget; ++attempt) {
    DatasetRecord r;
    try {
      const auto [lo, hi] = small_factor_bin(a_lo, a_hi, stream);
      r.a = random_probable_prime(lo, hi, stream);
    } catch (const GenerationFailure&) {
      continue;
    }
    mpz_cdiv_q(b_lo.get_mpz_t(), n_lo.get_mpz_t(), r.a.get_mpz_t());
    mpz_fdiv_q(b_hi.get_mpz_t(), n_hi.get_mpz_t(), r.a.get_mpz_t());
    if (b_hi < b_lo) continue;
    try {
      r.b = random_probable_prime(b_lo, b_hi, stream);
    } catch (const GenerationFailure&) {
      continue;
    }
    if (r.b < r.a) std::swap(r.a, r.b);
    r.n = r.a * r.b;
    r.digits = digits;
    if (decimal_length(r.n) != digits) continue;
    if (r.a * r.a * r.a <= r.n) continue;
    return r;
  }
  throw GenerationFailure("retry budget exhausted for " +
                          std::to_string(digits) + "-digit record");
}

/// Record i comes from sub-stream (seed, i), so output does not depend on
/// generation order. Duplicates are allowed.
inline std::vector<DatasetRecord> generate_dataset(const GeneratorSpec& spec) {
  spec.validate();
  std::vector<DatasetRecord> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    RandomStream stream = RandomStream::derive(spec.seed, i);
    out.push_back(generate_record(spec.digits, stream));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dataset file: header "n,a,b,digits", then one decimal record per line.

inline constexpr std::string_view kDatasetHeader = "n,a,b,digits";

class DatasetParseError : public std::runtime_error {
 public:
  DatasetParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline void write_dataset(std::ostream& out,
                          const std::vector<DatasetRecord>& records) {
  out << kDatasetHeader << '\n';
  for (const auto& r : records)
    out << to_decimal(r.n) << ',' << to_decimal(r.a) << ',' << to_decimal(r.b)
        << ',' << r.digits << '\n';
}

/// Parses the format only; record invariants are checked by validate_record.
inline std::vector<DatasetRecord> read_dataset(std::istream& in) {
  std::vector<DatasetRecord> records;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DatasetParseError(1, "missing header");
  ++line_no;
  if (line != kDatasetHeader)
    throw DatasetParseError(line_no, "expected header '" + std::string(kDatasetHeader) + "'");
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 4)
      throw DatasetParseError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    DatasetRecord r;
    try {
      r.n = parse_natural(fields[0]);
      r.a = parse_natural(fields[1]);
      r.b = parse_natural(fields[2]);
      const Natural d = parse_natural(fields[3]);
      if (!mpz_fits_uint_p(d.get_mpz_t()) || d < 1)
        throw InvalidInput("digits out of range");
      r.digits = static_cast<unsigned>(d.get_ui());
    } catch (const InvalidInput& e) {
      throw DatasetParseError(line_no, e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace rmfactor
