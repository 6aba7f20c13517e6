#pragma once
#include <vector>

#include "gbs/core.hpp"
#include "gbs/extnat.hpp"

namespace gbs {

// The prime set P_{H,v}(N): primes p (dividing N or some label) such that
//  (i) |N|_p > Σ|k_i|_p − Σ_{i<r}|l_i|_p for every simple edge path based at
//      v that is not a non-loop cycle, and
// (ii) Σ|k_i|_p = Σ|l_i|_p for every simple cycle.
std::vector<Int> phenotype_set(const GbsGraph& h, int v, const ExtNat& N);

// Ph_{H,v}(N) = ∏_{p ∈ phenotype_set} p^{|N|_p}; Ph(∞) = ∞.
ExtNat phenotype(const GbsGraph& h, int v, const ExtNat& N);

// Baumslag–Solitar phenotype Ph_{m,n}.
ExtNat phenotype_bs(const Int& m, const Int& n, const ExtNat& N);

// N lies in Q_{H,v} ∪ {∞}, i.e. N = Ph_{H,v}(N).
bool is_attained(const GbsGraph& h, int v, const ExtNat& N);

// φ_{m,n}: |φ(N)|_p = |N|_p + |m|_p − |n|_p when |N|_p > |n|_p, else 0.
ExtNat phi(const Int& m, const Int& n, const ExtNat& N);

// Valuation propagation along a label chain (k_i, l_i); only the p-valuation
// of the result is meaningful. Throws when the precondition fails.
ExtNat propagate(const ExtNat& N1,
                 const std::vector<std::pair<Int, Int>>& labels, const Int& p);

}  // namespace gbs
