#pragma once

#include <optional>
#include <string>
#include <variant>

#include "sopnlab/embedding.hpp"
#include "sopnlab/sop.hpp"
#include "sopnlab/theory.hpp"

namespace sopnlab {

// Two structures to be merged over a common part: e1 embeds m0 into m1 and e2
// embeds m0 into m2, both with induced semantics.
struct AmalgamProblem {
    Structure m0, m1, m2;
    Embedding e1, e2;
};

// Throws unless the vocabularies agree and e1, e2 are induced embeddings.
void validate_problem(const AmalgamProblem& p);

// Union of m1 and m2 glued along the shared part. m1 keeps its labels; the
// elements of m2 outside the image of e2 follow in m2's order. h1 and h2 are
// the canonical maps of m1 and m2 into the result, and every tuple of the
// result comes from one side (no cross relations yet).
struct Pushout {
    Structure merged;
    Embedding h1, h2;
};

Pushout pushout_union(const AmalgamProblem& p);

// Why a merge failed: a model-check violation on the glued structure, or a
// functional-symbol conflict during closure (violation empty in that case).
struct Obstruction {
    std::optional<Violation> violation;
    std::string note;
};

using AmalgamResult = std::variant<Structure, Obstruction>;

// Amalgam of two layered-order models over a shared part, labeled as in
// pushout_union. Within each side relations are copied; a cross pair (a from
// one side, b from the other) is related at level m < n of family n exactly
// when some shared c composes them: a lt_n_l c and c lt_n_k b with
// l + k + 1 = m; the top level relates every cross pair both ways. The
// vocabulary must be a layered-order catalog vocabulary and m1, m2 must be
// models of that theory. The result is again a model, with m1 and m2 as
// induced substructures.
Structure ordered_amalgam(const AmalgamProblem& p);

// Pushout union, then the Horn closure of t's axioms, then a model check.
// m1 and m2 must be t-models; the result is a t-model embedding both sides,
// or the Obstruction that closure or checking ran into.
AmalgamResult closure_amalgam(const AmalgamProblem& p, const TheorySpec& t);

// Takes the substructure on two consecutive chain tuples as a gluing piece
// and arranges m copies of it in a cycle: copy l carries its first-tuple part
// on block C_l and its second-tuple part on block C_{l+1 mod m}, with the
// positions on which all chain tuples agree forming a fixed base. Labels go
// base first, then C_0..C_{m-1}. No relations beyond the copied pieces are
// added. Returns the glued structure if it is a t-model, else the
// Obstruction (for a chain built against cycles of length m, that is the
// forbidden cycle realized).
//
// Preconditions (errors): m >= 3; the chain has at least m + 2 tuples; all
// consecutive-pair substructures are isomorphic over the base via the
// position maps ("non-uniform chain" otherwise).
AmalgamResult cyclic_amalgam(const WitnessChain& chain, int m, const TheorySpec& t);

}  // namespace sopnlab
