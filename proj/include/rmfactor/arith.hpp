// Exact integer primitives shared by every factoring method.
//
// All quantities are arbitrary-precision naturals backed by GMP. Nothing in
// this header touches floating point.
#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rmfactor {

using Natural = mpz_class;

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses a plain decimal string ("0", "12345"). Signs, whitespace and
/// separators are rejected.
inline Natural parse_natural(std::string_view text) {
  if (text.empty()) throw InvalidInput("empty number");
  for (char c : text) {
    if (c < '0' || c > '9')
      throw InvalidInput("not a decimal natural: '" + std::string(text) + "'");
  }
  return Natural(std::string(text), 10);
}

inline std::string to_decimal(const Natural& x) { return x.get_str(10); }

/// Number of binary digits; 0 for 0.
inline std::size_t bit_length(const Natural& x) {
  return sgn(x) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline Natural pow10(unsigned long e) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

/// Exact decimal length (mpz_sizeinbase may overshoot by one for base 10).
inline std::size_t decimal_length(const Natural& x) {
  if (sgn(x) == 0) return 1;
  std::size_t len = mpz_sizeinbase(x.get_mpz_t(), 10);
  if (len > 1 && x < pow10(len - 1)) --len;
  return len;
}

inline Natural isqrt_floor(const Natural& x) {
  Natural r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  return r;
}

/// Smallest r with r*r >= x.
inline Natural isqrt_ceil(const Natural& x) {
  Natural r, rem;
  mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), x.get_mpz_t());
  if (sgn(rem) != 0) ++r;
  return r;
}

namespace detail {

template <unsigned Mod>
constexpr std::array<bool, Mod> square_residues() {
  std::array<bool, Mod> table{};
  for (unsigned i = 0; i < Mod; ++i) table[(i * i) % Mod] = true;
  return table;
}

inline constexpr auto kResidues64 = square_residues<64>();
inline constexpr auto kResidues63 = square_residues<63>();
inline constexpr auto kResidues65 = square_residues<65>();
inline constexpr auto kResidues11 = square_residues<11>();

// Rejects about 99.4% of non-squares without a root extraction.
inline bool may_be_square(std::uint64_t x) {
  if (!kResidues64[x & 63]) return false;
  const std::uint64_t r = x % (63ull * 65 * 11);
  return kResidues63[r % 63] && kResidues65[r % 65] && kResidues11[r % 11];
}

inline std::uint64_t isqrt_u64(std::uint64_t x) {
  if (x < 2) return x;
  // Newton from above; starting point exceeds sqrt(x).
  std::uint64_t r = std::uint64_t{1} << ((64 - __builtin_clzll(x) + 1) / 2);
  for (;;) {
    std::uint64_t next = (r + x / r) / 2;
    if (next >= r) return r;
    r = next;
  }
}

}  // namespace detail

struct SquareTest {
  bool square = false;
  Natural root;  // 0 unless square
};

/// Perfect-square test on a machine word; writes the root on success.
inline bool is_perfect_square(std::uint64_t x, std::uint64_t& root) {
  if (!detail::may_be_square(x)) return false;
  const std::uint64_t r = detail::isqrt_u64(x);
  if (r * r != x) return false;
  root = r;
  return true;
}

inline SquareTest is_perfect_square(const Natural& x) {
  if (mpz_fits_ulong_p(x.get_mpz_t())) {
    std::uint64_t root = 0;
    if (is_perfect_square(static_cast<std::uint64_t>(x.get_ui()), root))
      return {true, Natural(static_cast<unsigned long>(root))};
    return {};
  }
  if (!detail::may_be_square(mpz_fdiv_ui(x.get_mpz_t(), 64ul * 63 * 65 * 11)))
    return {};
  Natural r, rem;
  mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), x.get_mpz_t());
  if (sgn(rem) != 0) return {};
  return {true, r};
}

/// Largest r with r^t <= x, by binary search between bit-length bounds.
inline Natural integer_root(const Natural& x, std::uint64_t t) {
  if (t == 0) throw InvalidInput("integer_root: exponent must be >= 1");
  if (t == 1 || x < 2) return x;
  const std::size_t bits = bit_length(x);
  if (t >= bits) return 1;  // x < 2^bits <= 2^t
  // x < 2^bits, so the root is below 2^ceil(bits / t).
  Natural lo = 1;
  Natural hi;
  mpz_ui_pow_ui(hi.get_mpz_t(), 2, (bits + t - 1) / t);
  Natural mid, p;
  // Invariant: lo^t <= x < hi^t.
  while (hi - lo > 1) {
    mid = (lo + hi) >> 1;
    mpz_pow_ui(p.get_mpz_t(), mid.get_mpz_t(), t);
    if (p <= x)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

inline Natural gcd(const Natural& x, const Natural& y) {
  Natural r;
  mpz_gcd(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return r;
}

namespace detail {

// Bases 2..41 are a proven witness set for every n below this bound.
inline const Natural& deterministic_mr_bound() {
  static const Natural bound("3317044064679887385961981", 10);
  return bound;
}

inline constexpr std::array<unsigned long, 13> kWitnessPrimes = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

// One strong-probable-prime round; n odd, n > 3, d * 2^s = n - 1, d odd.
inline bool strong_probable_prime(const Natural& n, const Natural& n_minus_1,
                                  const Natural& d, unsigned long s,
                                  const Natural& base) {
  Natural y;
  mpz_powm(y.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (y == 1 || y == n_minus_1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    mpz_powm_ui(y.get_mpz_t(), y.get_mpz_t(), 2, n.get_mpz_t());
    if (y == n_minus_1) return true;
    if (y == 1) return false;
  }
  return false;
}

}  // namespace detail

/// Miller-Rabin. Deterministic below 3.3e24; above that, 64 rounds with
/// bases drawn from a fixed-seed generator so answers are reproducible.
inline bool is_probable_prime(const Natural& x) {
  if (x < 2) return false;
  for (unsigned long p : detail::kWitnessPrimes) {
    if (x == p) return true;
    if (mpz_divisible_ui_p(x.get_mpz_t(), p)) return false;
  }
  const Natural n_minus_1 = x - 1;
  const unsigned long s = mpz_scan1(n_minus_1.get_mpz_t(), 0);
  Natural d;
  mpz_fdiv_q_2exp(d.get_mpz_t(), n_minus_1.get_mpz_t(), s);

  if (x < detail::deterministic_mr_bound()) {
    for (unsigned long p : detail::kWitnessPrimes) {
      if (!detail::strong_probable_prime(x, n_minus_1, d, s, Natural(p)))
        return false;
    }
    return true;
  }

  std::mt19937_64 rng(0x5eedf00dULL);
  const std::size_t bits = bit_length(x);
  const Natural span = x - 3;  // bases in [2, x - 2]
  Natural base;
  for (int round = 0; round < 64; ++round) {
    do {
      base = 0;
      for (std::size_t got = 0; got < bits; got += 64) {
        base <<= 64;
        const std::uint64_t w = rng();
        base += Natural(static_cast<unsigned long>(w));
      }
      base >>= (bits + 63) / 64 * 64 - bits;
    } while (base >= span);
    base += 2;
    if (!detail::strong_probable_prime(x, n_minus_1, d, s, base)) return false;
  }
  return true;
}

enum class DepthRounding { ceiling, floor };

/// Number of multiplier levels for m*n. Ceiling form: smallest g >= 1 with
/// 3^g >= bit_length(mn). Floor form: largest g >= 1 with 2^(3^g) <= mn.
inline unsigned recursion_depth(const Natural& mn,
                                DepthRounding rounding = DepthRounding::ceiling) {
  if (mn < 2) throw InvalidInput("recursion_depth: m*n must be >= 2");
  const std::size_t bits = bit_length(mn);
  unsigned g = 1;
  std::uint64_t pow3 = 3;
  if (rounding == DepthRounding::ceiling) {
    while (pow3 < bits) {
      pow3 *= 3;
      ++g;
    }
    return g;
  }
  // 2^j <= mn  <=>  j <= bits - 1
  while (pow3 * 3 <= bits - 1) {
    pow3 *= 3;
    ++g;
  }
  return g;
}

}  // namespace rmfactor
