#pragma once

#include <string>
#include <vector>

#include "sopnlab/vocabulary.hpp"

namespace sopnlab {

// A finite relational structure. The universe is always the initial segment
// [0, size) of the naturals; callers relabel with order-preserving maps.
// Tables are kept sorted and duplicate-free; symmetric symbols store both
// orientations of every pair, functional symbols allow one tuple per first
// coordinate.
struct Structure {
    Vocabulary vocab;
    int size = 0;
    std::vector<std::vector<std::vector<int>>> tables;

    bool operator==(const Structure&) const = default;
};

Structure make_structure(const Vocabulary& vocab, int size);
Structure make_structure(const Vocabulary& vocab, int size,
                         const std::vector<std::pair<std::string, std::vector<int>>>& tuples);

// Inserts a tuple (and its mirror for symmetric symbols). Rejects out-of-range
// elements, arity mismatches and functional conflicts. Re-inserting is a noop.
void add_tuple(Structure& s, int sym, const std::vector<int>& tuple);
void add_tuple(Structure& s, const std::string& sym_name, const std::vector<int>& tuple);

bool has_tuple(const Structure& s, int sym, const std::vector<int>& tuple);

// Substructure induced on the given elements (duplicates collapsed), relabeled
// order-preservingly onto [0, k).
Structure induced_substructure(const Structure& s, const std::vector<int>& elements);

// Same, but elements[i] becomes i, so the caller controls the labeling.
// Elements must be distinct.
Structure induced_with_order(const Structure& s, const std::vector<int>& elements);

// Relabels element i to perm[i]; perm must be a permutation of [0, size).
Structure apply_permutation(const Structure& s, const std::vector<int>& perm);

// Text format, one declaration per line:
//   vocab NAME/ARITY [directed|symmetric|functional]
//   universe N
//   rel NAME e1 e2 ... eK
// Symmetric pairs are listed once (smaller endpoint first). parse/print
// round-trips bit-exactly: parse_structure(print_structure(s)) == s and
// print emits a canonical form (vocab order, sorted tuples, one trailing
// newline).
std::string print_structure(const Structure& s);
Structure parse_structure(const std::string& text);

}  // namespace sopnlab
