#pragma once

#include <string>
#include <vector>

#include "sopnlab/formula.hpp"

namespace sopnlab {

// Conjunction of a non-empty family of formulas sharing one vocabulary and one
// free-variable split. The result keeps that split.
Formula conj_chain(const std::vector<Formula>& phis);

// "y is reachable from x along a walk of exactly m edges":
//   exists z0..zm . x = z0 & y = zm & step(z0,z1) & .. & step(z_{m-1},zm)
// where step is symbol(a,b) when directed, else symbol(a,b) | symbol(b,a).
// Intermediate points may repeat, so this is walk reachability, not path
// reachability. Split is x;y.
Formula build_distance_formula(const Vocabulary& vocab, int m, bool directed,
                               const std::string& symbol = "R");

// Bounded transitive closure of a split formula phi(xs;ys):
//   OR over j = 1..m of  exists z_0..z_j . xs = z_0 & ys = z_j & phi-steps.
// Each z block has the split arity of phi; the result keeps phi's split.
Formula bounded_tc_formula(const Formula& phi, int m);

// Sentence asserting a phi-cycle of length n: exists blocks b_0..b_{n-1} with
// phi(b_l, b_{l+1 mod n}) for every l. Blocks need not be distinct. n >= 1.
Formula build_cycle_sentence(const Formula& phi, int n);

// Conjoins phi with the denial of any phi-cycle of length n through the given
// pair: phi(xs;ys) & !exists b_0..b_{n-1} (b_0 = xs & b_1 = ys & cycle edges).
// Requires n >= 3 so that the xs and ys blocks are distinct. Keeps phi's split.
Formula reduce_sop(const Formula& phi, int n);

}  // namespace sopnlab
