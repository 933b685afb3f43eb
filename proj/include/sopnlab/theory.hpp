#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sopnlab/formula.hpp"
#include "sopnlab/structure.hpp"

namespace sopnlab {

// A finitely axiomatized theory: closed formulas every model must satisfy,
// plus patterns no model may contain (checked as weak embeddings).
struct TheorySpec {
    std::string id;
    Vocabulary vocab;
    std::vector<Formula> axioms;
    std::vector<std::string> axiom_names;
    std::vector<Structure> forbidden;
    std::vector<std::string> forbidden_names;
};

// Catalog ids:
//   ord:N  layered orders: families lt_n_l for l <= n <= N, each family
//          monotone in l, total at the top level, irreflexive below it, and
//          closed under the additive composition rule
//          lt_n_l(x,y) & lt_n_k(y,z) -> lt_n_m(x,z) for l+k+1 = m <= n.
//   lev:N  sorted variant of ord:N: disjoint sorts P0..PN, partial projections
//          Fi from P_{i+1} to P_i, family n living on sort Pn, and projections
//          carrying level-l relations down one sort.
//   dcf:N  directed graphs with no loop and no directed cycle of length <= N.
//   ocf:N  graphs with no loop and no odd cycle of length <= N (N odd).
//   cf:N   graphs with no loop and no cycle of length <= N.
//   trf    triangle-free graphs (cf:3 under its usual name).
TheorySpec theory_spec(const std::string& id);

// Where a model check failed: an axiom with a falsifying assignment to its
// universal prefix, or a forbidden pattern with the embedding that was found.
struct Violation {
    std::string kind;  // "axiom" | "forbidden"
    int index = -1;
    std::string label;
    std::vector<std::string> var_names;
    std::vector<int> assignment;
    std::vector<int> embedding;
};

std::string describe(const Violation& v);

// First violation in catalog order (axioms before forbidden patterns).
std::optional<Violation> check_model(const Structure& s, const TheorySpec& t);

// Adds every tuple forced by the Horn-shaped axioms (a universal prefix over
// atoms implying a conjunction of atoms, or a bare atom) until a fixed point.
// Axioms of any other shape are ignored here. Returns a description of the
// first functional-head conflict, if one arises; s is left at the point of
// conflict in that case.
std::optional<std::string> chase_closure(Structure& s, const TheorySpec& t);

// The layered linear order on [0, n): level l of family f relates i to j when
// i < j, except the top level l = f, which relates every pair.
Structure linear_order_model(int n_star, int n);

}  // namespace sopnlab
