#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "gbs/errors.hpp"

namespace gbs {

using Int = boost::multiprecision::cpp_int;

// Element of N ∪ {∞}. Orbit sizes and phenotypes live here; 0 only appears
// transiently in valuation arithmetic.
struct ExtNat {
  bool is_inf = false;
  Int v = 0;

  ExtNat() = default;
  ExtNat(const Int& n) : v(n) {}          // NOLINT(runtime/explicit)
  ExtNat(long long n) : v(n) {}           // NOLINT(runtime/explicit)
  ExtNat(int n) : v(n) {}                 // NOLINT(runtime/explicit)
  static ExtNat inf() {
    ExtNat e;
    e.is_inf = true;
    return e;
  }

  bool finite() const { return !is_inf; }
  bool operator==(const ExtNat& o) const {
    return is_inf == o.is_inf && (is_inf || v == o.v);
  }
  bool operator!=(const ExtNat& o) const { return !(*this == o); }

  std::string str() const;
};

std::ostream& operator<<(std::ostream& os, const ExtNat& n);

// p-adic valuation of |n|; val(∞, p) = ∞. Throws DomainError on n = 0.
ExtNat val(const Int& n, const Int& p);
ExtNat val(const ExtNat& n, const Int& p);

// gcd with the conventions ∞ ∧ n = n ∧ ∞ = |n| and ∞ ∧ ∞ = ∞.
ExtNat egcd(const ExtNat& a, const ExtNat& b);
ExtNat egcd(const ExtNat& a, const Int& b);

// N / (N ∧ k), with ∞ / (∞ ∧ k) = ∞. k nonzero.
ExtNat div_gcd(const ExtNat& n, const Int& k);

// ExtNat product / exact division (n must be finite or result is ∞).
ExtNat mul(const ExtNat& n, const Int& k);

// Transfer Equation: N / (N ∧ k) = M / (M ∧ l).
bool transfer_ok(const ExtNat& n, const Int& k, const ExtNat& m, const Int& l);

// All M solving the Transfer Equation for given N, k, l:
// {Q·g : g | |l|, gcd(Q, |l|/g) = 1} with Q = N/(N∧k); {∞} when N = ∞.
std::vector<ExtNat> transfer_targets(const ExtNat& n, const Int& k,
                                     const Int& l);

// Prime factorization of |n| > 0, as sorted (prime, exponent) pairs.
std::vector<std::pair<Int, int>> factorize(const Int& n);

// Sorted distinct primes dividing |n| (n nonzero).
std::vector<Int> primes_of(const Int& n);

// Sorted union of prime lists.
std::vector<Int> prime_union(std::vector<Int> a, const std::vector<Int>& b);

}  // namespace gbs
