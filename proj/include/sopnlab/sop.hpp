#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sopnlab/formula.hpp"
#include "sopnlab/theory.hpp"

namespace sopnlab {

// A finite model together with a formula and a list of tuples meant to form
// an increasing phi-chain: phi[tuples[k], tuples[m]] for all k < m.
struct WitnessChain {
    Structure model;
    Formula phi;
    std::vector<std::vector<int>> tuples;
    std::string theory_id;  // empty when the chain was not built from the catalog
    int n = 0;              // the cycle length the chain is a witness against
};

// Builds the canonical chain of length N (N >= 2) for a catalog theory.
//   dcf:  n must equal the theory parameter; N towers of n layered vertices,
//         phi follows the layer cycle.
//   ocf:  as dcf with the edges symmetrized.
//   ord:  the linear model on N points; n <= the catalog parameter picks
//         which level formula to use, with singleton tuples.
//   lev:  n must equal the catalog parameter; N towers of one element per
//         sort, phi projecting each tower onto the next and comparing
//         level-0 relations at every sort.
// cf and trf have no canonical chain; asking for one is an error, as is any
// other unsupported theory/parameter combination.
WitnessChain build_witness(const TheorySpec& t, int n, int N);

// phi_0..phi_{n_star} for the layered order: phi_n(x, y) is the conjunction
// of the level-0 relations of families 0..n.
std::vector<Formula> ord_phi_family(int n_star);

// Whether phi[tuples[k], tuples[m]] holds for every k < m, reporting the
// first failing pair in lexicographic order. A chain of one tuple (or none)
// passes vacuously. Tuple arities must match the split of phi.
struct ChainCheck {
    bool ok = false;
    int first_k = -1;
    int first_m = -1;
    std::string detail;
};

ChainCheck check_chain(const WitnessChain& w);

// Searches for tuples t_0..t_{n-1} (repeats allowed) with
// phi[t_l, t_{(l+1) mod n}] for every l. Candidates are the given tuples, or
// every tuple of the right arity when none are given. Returns the first
// cycle in lexicographic order over (t_0, .., t_{n-1}), or nothing.
std::optional<std::vector<std::vector<int>>> search_phi_cycle(
    const Structure& s, const Formula& phi, int n,
    const std::optional<std::vector<std::vector<int>>>& candidates = std::nullopt);

// Outcome of a chain + cycle-search examination of a witness chain.
//   verdict: "SOP_n-witnessed"        chain holds, no phi-cycle of length n
//            "SOP_n-refuted-at-bound" chain holds but a cycle was found
//            "inconclusive"           the chain condition itself fails
// space records where the cycle search looked ("chain-tuples" or
// "all-tuples"); exhaustive is false only when the search space was capped.
struct SopCertificate {
    std::string verdict;
    int n = 0;
    std::string space;
    bool exhaustive = true;
    ChainCheck chain;
    std::optional<std::vector<std::vector<int>>> cycle;
    std::string detail;
};

SopCertificate sop_check(const WitnessChain& w, int n, bool restrict_to_chain = true);

// Examines the binary relation phi defines on r-tuples (r = split arity).
// Chain length is counted in tuples, so a single point gives longest_chain 1;
// it is only computed when the relation is a strict partial order.
struct StrictOrderReport {
    bool irreflexive = false;
    bool antisymmetric = false;
    bool transitive = false;
    int longest_chain = 0;
    std::string detail;

    bool is_partial_order() const { return irreflexive && antisymmetric && transitive; }
};

StrictOrderReport check_strict_order(const Structure& s, const Formula& phi);

// Whether conclusion holds in every model of premise over the symbols that
// actually occur in the two formulas, up to universe size size_bound. The
// check enumerates all candidate structures when that is affordable and
// falls back to seeded sampling (exhaustive = false) otherwise.
struct EntailmentReport {
    bool holds = false;
    bool exhaustive = true;
    std::string detail;
};

EntailmentReport check_entailment(const Formula& premise, const Formula& conclusion,
                                  int size_bound, std::uint64_t seed = 0);

// Clause-by-clause examination of a would-be SOP sequence phi_0..phi_n with a
// witness tuple family per level, all evaluated in s:
//   shapes       each split extends the previous one by appended variables,
//                and witness tuples have matching arities
//   entailment   phi_{k+1} entails phi_k on shared variables, up to
//                size_bound (see check_entailment)
//   cycles       no phi_k-cycle of length m <= k among that level's tuples
//   coherence    level-k tuples are prefixes of level-(k+1) tuples, and each
//                level's chain decreases along the index order:
//                phi_k[t_b, t_a] for a < b
// Shape problems surface in the shapes clause, not as exceptions.
struct ClauseReport {
    bool ok = false;
    bool exhaustive = true;
    std::string detail;
};

struct SopSequenceReport {
    ClauseReport shapes;
    ClauseReport entailment;
    ClauseReport cycles;
    ClauseReport coherence;

    bool ok() const { return shapes.ok && entailment.ok && cycles.ok && coherence.ok; }
};

SopSequenceReport check_sop_sequence(const std::vector<Formula>& phis,
                                     const std::vector<std::vector<std::vector<int>>>& witness,
                                     const Structure& s, int size_bound,
                                     std::uint64_t seed = 0);

// Array condition for a pair of formulas against rows a_0..a_{K-1} and
// b_0..b_{K-1}:
//   contradictory   no x matches any single row under phi and psi at once
//   phi_pattern     i <= j  implies  phi[b_j, a_i]
//   psi_pattern     i > j   implies  psi[b_j, a_i]
//   conclusion      some x has phi(x, a_i) for all i in u and psi(x, a_j)
//                   for all j in v (u, v disjoint index sets into the rows;
//                   both empty asks only that the universe is nonempty)
// Each part is decided independently; failure details name the first bad
// index pair.
struct ArrayPatternReport {
    bool contradictory = false;
    bool phi_pattern = false;
    bool psi_pattern = false;
    bool conclusion = false;
    std::optional<std::vector<int>> conclusion_witness;
    std::string detail;

    bool ok() const { return contradictory && phi_pattern && psi_pattern && conclusion; }
};

ArrayPatternReport check_array_pattern(const Structure& s, const Formula& phi,
                                       const Formula& psi,
                                       const std::vector<std::vector<int>>& a_rows,
                                       const std::vector<std::vector<int>>& b_rows,
                                       const std::vector<int>& u, const std::vector<int>& v);

// Chain file format: optional "theory ID" and "n K" lines, then the structure
// (vocab/universe/rel lines), then "phi TEXT", "split TEXT", and one
// "tuple e1 .. eR" line per chain entry. print_chain and parse_chain are
// mutually inverse, byte for byte.
std::string print_chain(const WitnessChain& w);
WitnessChain parse_chain(const std::string& text);

}  // namespace sopnlab
