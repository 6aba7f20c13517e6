#include "gbs/arith.hpp"

#include <algorithm>
#include <boost/multiprecision/miller_rabin.hpp>
#include <map>
#include <random>
#include <set>

#include "gbs/extnat.hpp"

namespace gbs {

std::string ExtNat::str() const { return is_inf ? "inf" : v.str(); }

std::ostream& operator<<(std::ostream& os, const ExtNat& n) {
  return os << n.str();
}

ExtNat val(const Int& n, const Int& p) {
  if (n == 0) throw DomainError("val: zero argument");
  Int a = abs(n);
  Int c = 0;
  while (a % p == 0) {
    a /= p;
    ++c;
  }
  return ExtNat(c);
}

ExtNat val(const ExtNat& n, const Int& p) {
  if (n.is_inf) return ExtNat::inf();
  return val(n.v, p);
}

ExtNat egcd(const ExtNat& a, const ExtNat& b) {
  if (a.is_inf && b.is_inf) return ExtNat::inf();  // documented convention
  if (a.is_inf) return ExtNat(abs(b.v));
  if (b.is_inf) return ExtNat(abs(a.v));
  if (a.v == 0 && b.v == 0) throw DomainError("egcd: both arguments zero");
  return ExtNat(gcd(abs(a.v), abs(b.v)));
}

ExtNat egcd(const ExtNat& a, const Int& b) { return egcd(a, ExtNat(b)); }

ExtNat div_gcd(const ExtNat& n, const Int& k) {
  if (k == 0) throw DomainError("div_gcd: zero label");
  if (n.is_inf) return ExtNat::inf();
  return ExtNat(n.v / gcd(n.v, abs(k)));
}

ExtNat mul(const ExtNat& n, const Int& k) {
  if (n.is_inf) return ExtNat::inf();
  return ExtNat(n.v * abs(k));
}

bool transfer_ok(const ExtNat& n, const Int& k, const ExtNat& m,
                 const Int& l) {
  return div_gcd(n, k) == div_gcd(m, l);
}

std::vector<ExtNat> transfer_targets(const ExtNat& n, const Int& k,
                                     const Int& l) {
  if (k == 0 || l == 0) throw DomainError("transfer_targets: zero label");
  if (n.is_inf) return {ExtNat::inf()};
  Int q = div_gcd(n, k).v;
  Int al = abs(l);
  std::set<Int> out;
  for (Int g = 1; g <= al; ++g) {
    if (al % g != 0) continue;
    if (gcd(q, al / g) == 1) out.insert(q * g);
  }
  std::vector<ExtNat> res;
  for (const Int& m : out) res.push_back(ExtNat(m));
  return res;
}

namespace {

bool is_prime(const Int& n) {
  if (n < 2) return false;
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    if (n == p) return true;
  if (n % 2 == 0) return false;
  static std::mt19937_64 rng(0x5eedull);
  return boost::multiprecision::miller_rabin_test(n, 32, rng);
}

Int pollard_rho(const Int& n) {
  // n odd composite, not a prime power of a small prime.
  static std::mt19937_64 rng(0xabcdefull);
  while (true) {
    Int c = Int(rng() % 1000000) + 1;
    Int x = Int(rng() % 1000000) + 2, y = x, d = 1;
    auto f = [&](const Int& z) { return (z * z + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      if (x == y) break;
      d = gcd(abs(x - y), n);
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_rec(Int n, std::map<Int, int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n]++;
    return;
  }
  Int d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<Int, int>> factorize(const Int& n) {
  if (n == 0) throw DomainError("factorize: zero argument");
  Int a = abs(n);
  std::map<Int, int> m;
  for (int p : {2, 3, 5, 7, 11, 13}) {
    while (a % p == 0) {
      a /= p;
      m[p]++;
    }
  }
  // Trial division over a modest range keeps Pollard rho for rare leftovers.
  for (Int p = 17; p * p <= a && p < 100000; p += 2) {
    while (a % p == 0) {
      a /= p;
      m[p]++;
    }
  }
  if (a > 1) factor_rec(a, m);
  return {m.begin(), m.end()};
}

std::vector<Int> primes_of(const Int& n) {
  std::vector<Int> out;
  for (auto& [p, e] : factorize(n)) out.push_back(p);
  return out;
}

std::vector<Int> prime_union(std::vector<Int> a, const std::vector<Int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

ExtNat phenotype_bs(const Int& m, const Int& n, const ExtNat& N) {
  if (m == 0 || n == 0) throw DomainError("phenotype_bs: zero label");
  if (N.is_inf) return ExtNat::inf();
  if (N.v == 0) throw DomainError("phenotype_bs: zero N");
  Int out = 1;
  for (auto& [p, e] : factorize(N.v)) {
    Int vm = val(m, p).v, vn = val(n, p).v;
    if (vm == vn && Int(e) > vn) out *= pow(p, e);
  }
  return ExtNat(out);
}

ExtNat phi(const Int& m, const Int& n, const ExtNat& N) {
  if (m == 0 || n == 0) throw DomainError("phi: zero label");
  if (N.is_inf) return ExtNat::inf();
  if (N.v == 0) throw DomainError("phi: zero N");
  Int out = 1;
  std::vector<Int> ps = prime_union(primes_of(N.v),
                                    prime_union(primes_of(m), primes_of(n)));
  for (const Int& p : ps) {
    Int vN = val(N, p).v, vm = val(m, p).v, vn = val(n, p).v;
    if (vN > vn) out *= pow(p, static_cast<unsigned>(vN + vm - vn));
  }
  return ExtNat(out);
}

std::vector<Int> phenotype_set(const GbsGraph& h, int v, const ExtNat& N) {
  if (N.is_inf) throw DomainError("phenotype_set: infinite N");
  if (N.v == 0) throw DomainError("phenotype_set: zero N");
  std::vector<Int> cand = primes_of(N.v);
  for (const Int& lab : h.k)
    if (abs(lab) > 1) cand = prime_union(cand, primes_of(lab));
  std::vector<EdgePath> paths = simple_paths_from(h, v);
  std::vector<EdgePath> cycles = simple_cycles(h);
  std::vector<Int> out;
  for (const Int& p : cand) {
    bool good = true;
    for (const EdgePath& c : cycles) {
      Int a = 0, b = 0;
      for (int e : c) {
        a += val(h.ksrc(e), p).v;
        b += val(h.ktrg(e), p).v;
      }
      if (a != b) {
        good = false;
        break;
      }
    }
    if (!good) continue;
    Int vN = val(N, p).v;
    for (const EdgePath& c : paths) {
      bool nonloop_cycle =
          c.size() >= 2 && h.g.etrg[c.back()] == h.g.esrc[c.front()];
      if (nonloop_cycle) continue;  // covered by the cycle condition
      Int sum = 0;
      for (size_t i = 0; i < c.size(); ++i) {
        sum += val(h.ksrc(c[i]), p).v;
        if (i + 1 < c.size()) sum -= val(h.ktrg(c[i]), p).v;
      }
      if (vN <= sum) {
        good = false;
        break;
      }
    }
    if (good) out.push_back(p);
  }
  return out;
}

ExtNat phenotype(const GbsGraph& h, int v, const ExtNat& N) {
  if (N.is_inf) return ExtNat::inf();
  Int out = 1;
  for (const Int& p : phenotype_set(h, v, N)) {
    Int e = val(N, p).v;
    out *= pow(p, static_cast<unsigned>(e));
  }
  return ExtNat(out);
}

bool is_attained(const GbsGraph& h, int v, const ExtNat& N) {
  if (N.is_inf) return true;
  return phenotype(h, v, N) == N;
}

ExtNat propagate(const ExtNat& N1, const std::vector<std::pair<Int, Int>>& labels,
                 const Int& p) {
  if (N1.is_inf) return ExtNat::inf();
  Int vN = val(N1, p).v;
  Int acc_k = 0, acc_l = 0;
  for (auto& [k, l] : labels) {
    acc_k += val(k, p).v;
    if (vN <= acc_k - acc_l)
      throw DomainError("propagate: precondition violated");
    acc_l += val(l, p).v;
  }
  Int nv = vN - acc_k + acc_l;
  // Only the p-valuation of the result is meaningful; we return N1 with its
  // p-part replaced.
  Int base = N1.v;
  while (base % p == 0) base /= p;
  return ExtNat(base * pow(p, static_cast<unsigned>(nv)));
}

}  // namespace gbs
