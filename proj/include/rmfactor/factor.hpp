// Fermat-family factoring: trial division, Fermat, Lehman, simple
// multiplication (SM) and recursive multiplication (RM).
//
// Every method reports the number of perfect-square candidate tests it ran.
// Trial-division probes are never counted.
#pragma once

#include <rmfactor/arith.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace rmfactor {

enum class Method { trial, fermat, lehman, sm, rm };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::trial: return "trial";
    case Method::fermat: return "fermat";
    case Method::lehman: return "lehman";
    case Method::sm: return "sm";
    case Method::rm: return "rm";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  if (name == "trial") return Method::trial;
  if (name == "fermat") return Method::fermat;
  if (name == "lehman") return Method::lehman;
  if (name == "sm") return Method::sm;
  if (name == "rm") return Method::rm;
  throw InvalidInput("unknown method '" + std::string(name) + "'");
}

inline constexpr std::uint64_t kDefaultSafetyCap = 1'000'000'000;

struct MethodConfig {
  Method method = Method::rm;
  // SM: the full multiplier M. RM: m, with the leaf radicand 4*m*n*K.
  Natural multiplier = 120;
  bool sieve_enabled = true;              // RM only
  std::optional<unsigned> depth_override;  // RM only
  // RM only: lift the level-1 limit so the innermost loop runs until a
  // factor or the safety cap.
  bool unbounded_leaf = false;
  std::uint64_t safety_cap = kDefaultSafetyCap;

  void validate() const {
    if (multiplier < 1) throw InvalidInput("multiplier must be >= 1");
    if (safety_cap < 1) throw InvalidInput("safety cap must be >= 1");
    if (depth_override && *depth_override < 1)
      throw InvalidInput("depth override must be >= 1");
  }
};

enum class Verdict { factored, probable_prime, aborted };
enum class Phase { trial_division, multiplier_search };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::factored: return "factored";
    case Verdict::probable_prime: return "probable-prime";
    case Verdict::aborted: return "aborted";
  }
  return "?";
}

inline std::string_view phase_name(Phase p) {
  return p == Phase::trial_division ? "trial-division" : "multiplier-search";
}

struct FactorOutcome {
  Verdict verdict = Verdict::aborted;
  std::optional<Natural> factor;  // set iff verdict == factored
  std::uint64_t iterations = 0;
  Phase phase = Phase::multiplier_search;

  static FactorOutcome factored(Natural f, std::uint64_t it, Phase ph) {
    return {Verdict::factored, std::move(f), it, ph};
  }
  static FactorOutcome prime(std::uint64_t it, Phase ph) {
    return {Verdict::probable_prime, std::nullopt, it, ph};
  }
  static FactorOutcome aborted(std::uint64_t it) {
    return {Verdict::aborted, std::nullopt, it, Phase::multiplier_search};
  }
};

/// Values seen at a successful leaf: s = ceil(sqrt(R)), d = s^2 - R,
/// root = sqrt(d), a = (s - root) / 2, for R = fourm * n * K.
struct LeafWitness {
  Natural multiplier_k;
  Natural s;
  Natural d;
  Natural root;
  Natural a;
};

// ---------------------------------------------------------------------------
// Phase 1

/// Smallest f in [2, bound] dividing n.
inline std::optional<Natural> trial_division(const Natural& n,
                                             const Natural& bound) {
  if (n < 2) throw InvalidInput("trial_division: n must be >= 2");
  if (bound < 2) return std::nullopt;
  if (mpz_even_p(n.get_mpz_t())) return Natural(2);

  // Past sqrt(n) the only remaining divisor is n itself.
  const Natural root = isqrt_floor(n);
  const Natural& stop_at = root < bound ? root : bound;
  const std::uint64_t stop = mpz_fits_ulong_p(stop_at.get_mpz_t())
                                 ? stop_at.get_ui()
                                 : std::numeric_limits<std::uint64_t>::max() - 2;
  if (mpz_fits_ulong_p(n.get_mpz_t())) {
    const std::uint64_t v = n.get_ui();
    for (std::uint64_t d = 3; d <= stop; d += 2)
      if (v % d == 0) return Natural(static_cast<unsigned long>(d));
  } else {
    for (std::uint64_t d = 3; d <= stop; d += 2)
      if (mpz_divisible_ui_p(n.get_mpz_t(), d))
        return Natural(static_cast<unsigned long>(d));
  }
  if (n <= bound) return n;
  return std::nullopt;
}

namespace detail {

inline Natural phase_one_bound(const Natural& n) {
  Natural b = integer_root(n, 3);
  return b < 2 ? Natural(2) : b;
}

// Smallest c with c^3 >= n.
inline Natural icbrt_ceil(const Natural& n) {
  Natural c = integer_root(n, 3);
  if (c * c * c < n) ++c;
  return c;
}

struct LeafScratch {
  Natural s, rem, d, root, a, f;
};

// Runs the square test on a radicand R. On success w.f holds a nontrivial
// factor of n and the other scratch fields form the witness.
inline bool leaf_test_radicand(const Natural& n, const Natural& radicand,
                               LeafScratch& w) {
  mpz_sqrtrem(w.s.get_mpz_t(), w.rem.get_mpz_t(), radicand.get_mpz_t());
  if (sgn(w.rem) == 0) {
    w.d = 0;
    w.root = 0;
  } else {
    // (s0 + 1)^2 - R = 2*s0 + 1 - (R - s0^2)
    w.d = w.s;
    w.d *= 2;
    w.d += 1;
    w.d -= w.rem;
    ++w.s;
    if (mpz_fits_ulong_p(w.d.get_mpz_t())) {
      std::uint64_t r = 0;
      if (!is_perfect_square(static_cast<std::uint64_t>(w.d.get_ui()), r))
        return false;
      w.root = static_cast<unsigned long>(r);
    } else {
      SquareTest t = is_perfect_square(w.d);
      if (!t.square) return false;
      w.root = std::move(t.root);
    }
  }
  w.a = w.s - w.root;
  if (mpz_even_p(w.a.get_mpz_t())) w.a >>= 1;
  mpz_gcd(w.f.get_mpz_t(), n.get_mpz_t(), w.a.get_mpz_t());
  return w.f > 1 && w.f < n;
}

}  // namespace detail

/// One square test at multiplier K with radicand fourm * n * K. Returns the
/// witness and the factor gcd(n, A) when that factor is nontrivial.
inline std::optional<std::pair<LeafWitness, Natural>> leaf_square_test(
    const Natural& n, const Natural& fourm, const Natural& k) {
  detail::LeafScratch w;
  const Natural radicand = fourm * n * k;
  if (!detail::leaf_test_radicand(n, radicand, w)) return std::nullopt;
  return std::pair{LeafWitness{k, w.s, w.d, w.root, w.a}, w.f};
}

// ---------------------------------------------------------------------------
// Fermat

inline FactorOutcome fermat_factor(const Natural& n,
                                   std::uint64_t safety_cap = kDefaultSafetyCap) {
  if (mpz_even_p(n.get_mpz_t()))
    throw InvalidInput("fermat_factor: n must be odd");
  if (n < 9) throw InvalidInput("fermat_factor: n must be >= 9");

  Natural x = isqrt_ceil(n);
  Natural t = x * x - n;  // x^2 - n, advanced by 2x + 1
  Natural f;
  std::uint64_t iterations = 0;
  while (iterations < safety_cap) {
    ++iterations;
    if (SquareTest sq = is_perfect_square(t); sq.square) {
      f = x - sq.root;
      if (f > 1 && f < n) return FactorOutcome::factored(f, iterations, Phase::multiplier_search);
    }
    t += x;
    t += x;
    t += 1;
    ++x;
  }
  return FactorOutcome::aborted(iterations);
}

// ---------------------------------------------------------------------------
// Lehman

inline FactorOutcome lehman_factor(const Natural& n,
                                   std::uint64_t safety_cap = kDefaultSafetyCap) {
  if (n < 8) throw InvalidInput("lehman_factor: n must be >= 8");

  // Trial division up to ceil(n^(1/3)), so divisors just above the floor of
  // the cube root are caught here.
  const Natural c = detail::icbrt_ceil(n);
  if (auto f = trial_division(n, c); f && *f < n)
    return FactorOutcome::factored(*f, 0, Phase::trial_division);

  // x runs from ceil(sqrt(4kn)) while x - sqrt(4kn) <= n^(1/6) / (4 sqrt k).
  // Writing e = x - sqrt(4kn), x^2 - 4kn = e (2 sqrt(4kn) + e), so the bound
  // is x^2 - 4kn <= n^(2/3) + n^(1/3) / (16k). Replacing n^(1/3) by c widens
  // it slightly: 16k (x^2 - 4kn) <= 16k c^2 + c.
  const Natural k_max = integer_root(n, 3) + 1;
  const Natural c2 = c * c;
  Natural four_kn, x, t, lhs, rhs, f, sum;
  std::uint64_t iterations = 0;
  for (Natural k = 1; k <= k_max; ++k) {
    four_kn = 4 * k * n;
    x = isqrt_ceil(four_kn);
    t = x * x - four_kn;
    rhs = 16 * k * c2 + c;
    bool first = true;
    for (;;) {
      if (!first) {
        lhs = 16 * k * t;
        if (lhs > rhs) break;
      }
      first = false;
      if (iterations == safety_cap) return FactorOutcome::aborted(iterations);
      ++iterations;
      if (SquareTest sq = is_perfect_square(t); sq.square) {
        sum = x + sq.root;
        f = gcd(sum, n);
        if (f > 1 && f < n)
          return FactorOutcome::factored(f, iterations, Phase::multiplier_search);
      }
      t += x;
      t += x;
      t += 1;
      ++x;
    }
  }
  return FactorOutcome::prime(iterations, Phase::multiplier_search);
}

// ---------------------------------------------------------------------------
// SM: constant multiplier M, k = 1, 2, 3, ...

inline FactorOutcome sm_factor(const Natural& n, const Natural& multiplier,
                               std::uint64_t safety_cap = kDefaultSafetyCap) {
  if (n < 2) throw InvalidInput("sm_factor: n must be >= 2");
  if (multiplier < 1) throw InvalidInput("sm_factor: multiplier must be >= 1");
  if (n < 4) return FactorOutcome::prime(0, Phase::trial_division);
  if (auto f = trial_division(n, detail::phase_one_bound(n)))
    return FactorOutcome::factored(*f, 0, Phase::trial_division);

  const Natural step = multiplier * n;
  Natural radicand = step;
  detail::LeafScratch w;
  std::uint64_t iterations = 0;
  while (iterations < safety_cap) {
    ++iterations;
    if (detail::leaf_test_radicand(n, radicand, w))
      return FactorOutcome::factored(w.f, iterations, Phase::multiplier_search);
    radicand += step;
  }
  return FactorOutcome::aborted(iterations);
}

// ---------------------------------------------------------------------------
// RM

/// floor((m*n)^(1/3^level)).
inline Natural level_limit(const Natural& mn, unsigned level) {
  if (level == 0) throw InvalidInput("level_limit: level must be >= 1");
  if (mn < 2) throw InvalidInput("level_limit: m*n must be >= 2");
  const std::size_t bits = bit_length(mn);
  std::uint64_t exponent = 1;
  for (unsigned i = 0; i < level; ++i) {
    exponent *= 3;
    if (exponent >= bits) return 1;
  }
  return integer_root(mn, exponent);
}

/// Remembers every multiplier K handed to it during one RM run.
class DuplicateFilter {
 public:
  /// True if K was presented before; otherwise records it and returns false.
  bool seen_before(const Natural& k) {
    if (!mpz_fits_ulong_p(k.get_mpz_t())) return !large_.insert(k).second;
    const std::uint64_t v = k.get_ui();
    if (v <= prefix_) return true;
    if (v == prefix_ + 1) {
      // 1..prefix_ are all recorded; fold in any run that now connects.
      ++prefix_;
      while (!small_.empty() && small_.erase(prefix_ + 1)) ++prefix_;
      return false;
    }
    return !small_.insert(v).second;
  }

  std::size_t size() const { return prefix_ + small_.size() + large_.size(); }

 private:
  std::uint64_t prefix_ = 0;
  std::unordered_set<std::uint64_t> small_;
  std::set<Natural> large_;
};

/// Per-level factor limits for one RM run; limits()[i] is level i + 1.
class MultiplierTree {
 public:
  MultiplierTree(const Natural& mn, unsigned depth, bool unbounded_leaf = false)
      : unbounded_leaf_(unbounded_leaf) {
    if (depth < 1) throw InvalidInput("depth must be >= 1");
    limits_.reserve(depth);
    for (unsigned level = 1; level <= depth; ++level)
      limits_.push_back(level_limit(mn, level));
  }

  unsigned depth() const { return static_cast<unsigned>(limits_.size()); }
  const std::vector<Natural>& limits() const { return limits_; }
  bool unbounded_leaf() const { return unbounded_leaf_; }

  /// Depth-first walk over K = k_g * ... * k_1 with k_g <= ... <= k_1 and
  /// k_i <= limit(i). `leaf(K)` is called for every K that passes the
  /// optional duplicate filter; returning true stops the walk. Returns true
  /// iff stopped.
  template <class Leaf>
  bool walk(bool sieve, Leaf&& leaf) const {
    DuplicateFilter filter;
    return descend(depth(), Natural(1), Natural(1), sieve, filter, leaf);
  }

 private:
  template <class Leaf>
  bool descend(unsigned level, const Natural& k_min, const Natural& k_parent,
               bool sieve, DuplicateFilter& filter, Leaf& leaf) const {
    const Natural& limit = limits_[level - 1];
    if (level > 1) {
      Natural k_child;
      for (Natural f = k_min; f <= limit; ++f) {
        k_child = k_parent * f;
        if (descend(level - 1, f, k_child, sieve, filter, leaf)) return true;
      }
      return false;
    }
    Natural k = k_parent * k_min;
    for (Natural f = k_min; unbounded_leaf_ || f <= limit; ++f, k += k_parent) {
      if (sieve && filter.seen_before(k)) continue;
      if (leaf(static_cast<const Natural&>(k))) return true;
    }
    return false;
  }

  std::vector<Natural> limits_;
  bool unbounded_leaf_;
};

namespace detail {

inline unsigned rm_depth(const Natural& mn, const MethodConfig& cfg) {
  return cfg.depth_override ? *cfg.depth_override : recursion_depth(mn);
}

}  // namespace detail

/// Recursive multiplication. Phase 1 trial-divides to floor(n^(1/3));
/// phase 2 walks the multiplier tree and square-tests 4*m*n*K at each leaf.
/// A fully walked tree means n is prime.
inline FactorOutcome rm_factor(const Natural& n, const MethodConfig& cfg) {
  if (n < 2) throw InvalidInput("rm_factor: n must be >= 2");
  cfg.validate();
  if (n < 4) return FactorOutcome::prime(0, Phase::trial_division);
  if (auto f = trial_division(n, detail::phase_one_bound(n)))
    return FactorOutcome::factored(*f, 0, Phase::trial_division);

  const Natural mn = cfg.multiplier * n;
  const Natural fourmn = 4 * mn;
  const MultiplierTree tree(mn, detail::rm_depth(mn, cfg), cfg.unbounded_leaf);

  detail::LeafScratch w;
  Natural radicand;
  std::uint64_t iterations = 0;
  bool capped = false;
  const bool found = tree.walk(cfg.sieve_enabled, [&](const Natural& k) {
    if (iterations == cfg.safety_cap) {
      capped = true;
      return true;
    }
    ++iterations;
    radicand = fourmn * k;
    if (!detail::leaf_test_radicand(n, radicand, w)) return false;
    // s^2 - D^2 = 4mnK forces s and D to share parity.
    if (mpz_odd_p(w.s.get_mpz_t()) != mpz_odd_p(w.root.get_mpz_t()))
      throw std::logic_error("rm_factor: leaf parity violated at K=" + to_decimal(k));
    return true;
  });
  if (capped) return FactorOutcome::aborted(iterations);
  if (found) return FactorOutcome::factored(w.f, iterations, Phase::multiplier_search);
  return FactorOutcome::prime(iterations, Phase::multiplier_search);
}

/// The K values RM would square-test for n, in order, after the duplicate
/// filter, with no early exit. At most `limit` values.
inline std::vector<Natural> rm_candidate_sequence(const Natural& n,
                                                  const MethodConfig& cfg,
                                                  std::size_t limit) {
  if (n < 2) throw InvalidInput("rm_candidate_sequence: n must be >= 2");
  cfg.validate();
  const Natural mn = cfg.multiplier * n;
  const MultiplierTree tree(mn, detail::rm_depth(mn, cfg), cfg.unbounded_leaf);
  std::vector<Natural> out;
  if (limit == 0) return out;
  tree.walk(cfg.sieve_enabled, [&](const Natural& k) {
    out.push_back(k);
    return out.size() >= limit;
  });
  return out;
}

// ---------------------------------------------------------------------------

/// Runs the method selected by cfg. n = 2, 3 report ProbablePrime.
inline FactorOutcome factor(const Natural& n, const MethodConfig& cfg) {
  cfg.validate();
  switch (cfg.method) {
    case Method::trial: {
      if (n < 2) throw InvalidInput("factor: n must be >= 2");
      const Natural root = isqrt_floor(n);
      if (root >= 2)
        if (auto f = trial_division(n, root))
          return FactorOutcome::factored(*f, 0, Phase::trial_division);
      return FactorOutcome::prime(0, Phase::trial_division);
    }
    case Method::fermat:
      return fermat_factor(n, cfg.safety_cap);
    case Method::lehman:
      return lehman_factor(n, cfg.safety_cap);
    case Method::sm:
      return sm_factor(n, cfg.multiplier, cfg.safety_cap);
    case Method::rm:
      return rm_factor(n, cfg);
  }
  throw InvalidInput("factor: unknown method");
}

}  // namespace rmfactor
