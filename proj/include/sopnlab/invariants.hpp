#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sopnlab/formula.hpp"
#include "sopnlab/structure.hpp"

namespace sopnlab {

// One cut: a strictly increasing set of points below delta, with a subset
// annotated as accumulation points. Finite sets have no genuine accumulation
// points, so the annotation is explicit input rather than something computed.
struct CutEntry {
    int delta = 0;
    std::vector<int> points;
    std::vector<int> acc;

    bool operator==(const CutEntry&) const = default;
};

using CutSystem = std::vector<CutEntry>;

// Text form, one line per cut: "cut DELTA: p1 p2 p3" with an optional
// trailing "acc: a1 a2" marking the annotated points. parse and print are
// mutually inverse on canonical text; '#' starts a comment.
CutSystem parse_cuts(const std::string& text);
std::string print_cuts(const CutSystem& cuts);

// The points of the cut not annotated as accumulation points.
std::vector<int> nacc_points(const CutEntry& cut);

// Invariant of element x over a linear order: the non-accumulation points
// alpha (across all cuts) admitting y, z below alpha with y < x < z in the
// order, such that every element below the largest cut point under alpha
// falls outside the order interval (y, z). The order structure must carry
// exactly one binary relation and it must be a strict linear order; elements
// are compared to alpha by their index.
std::set<int> order_invariant(const Structure& order, const CutSystem& cuts, int x);

// Invariant of element x in a model under a binary formula phi: the
// non-accumulation points alpha (across all cuts) for which some b below
// alpha dominates x, in the forward reading of phi or in the reversed one.
// With d1 the largest cut point under alpha, "b dominates x" forward means
// phi(b,x) and every c below d1 with phi(c,x) admits y below d1 with
// phi(c,y) and phi(y,b); the reversed reading swaps both arguments of phi
// throughout. phi's two arguments are its split halves when a split is
// present, otherwise its free variables in name order.
std::set<int> model_invariant(const Structure& m, const Formula& phi, const CutSystem& cuts,
                              int x);

struct InvariantReport {
    std::map<int, std::set<int>> per_element;
    std::set<std::set<int>> aggregate;  // exactly the image of per_element
};

InvariantReport order_invariant_report(const Structure& order, const CutSystem& cuts);
InvariantReport model_invariant_report(const Structure& m, const Formula& phi,
                                       const CutSystem& cuts);

// Every initial segment an invariant quantifier can range over: all deltas
// and all cut points, sorted and deduplicated.
std::vector<int> block_breakpoints(const CutSystem& cuts);

// A seeded permutation of [0, size) that maps [0, p) onto itself for every
// breakpoint p. Conjugating a structure by such a permutation leaves both
// aggregate invariants unchanged.
std::vector<int> block_permutation(int size, const std::vector<int>& breakpoints,
                                   std::uint64_t seed);

}  // namespace sopnlab
