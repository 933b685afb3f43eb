#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sopnlab/structure.hpp"
#include "sopnlab/theory.hpp"

namespace sopnlab {

// A one-point extension type: how a single new element may sit over a small
// part of a model. extension lives on site.size() + 1 labels, label i being
// site[i] and the last label the new element; its site part equals the
// induced substructure of base on the site.
struct ExtensionProblem {
    Structure base;
    std::vector<int> site;  // strictly increasing base elements
    Structure extension;
};

// Every admissible one-point extension type over sites of at most site_size
// elements. A type is admissible when freely adjoining the new element with
// its atoms to the full base, closing under the Horn axioms, and re-checking
// the theory succeeds without disturbing the site; types whose atoms do not
// touch every site element are reported over the smaller site they actually
// use. Sites are ordered by size then lexicographically, and duplicate types
// over a site are collapsed. The base must be a t-model, and the per-site
// atom space must stay enumerable (at most 16 candidate atoms).
std::vector<ExtensionProblem> enumerate_extensions(const Structure& base, const TheorySpec& t,
                                                   int site_size);

// Whether some element of s realizes the type exactly: the induced structure
// on site + that element equals the extension.
bool problem_realized(const Structure& s, const ExtensionProblem& p);

struct CompletenessReport {
    bool complete = false;
    int problems = 0;
    int unrealized = 0;
    std::string detail;
};

// Re-enumerates every extension problem over s and searches realizations;
// independent of how s was built.
CompletenessReport verify_extension_complete(const Structure& s, const TheorySpec& t,
                                             int site_size);

struct EcResult {
    Structure structure;
    bool complete = false;  // final verify_extension_complete verdict
    int steps = 0;          // realizations performed, in place or by growth
    std::string detail;
};

// Grows start toward an existentially closed approximation. Each round
// re-enumerates the extension problems and sweeps the outstanding ones from a
// round-robin starting point, realizing each on a seeded-random witness
// already in the universe when one fits; a problem with no in-place witness
// is realized by adjoining a fresh element, but only while the universe is
// below target_size. When everything is realized early, the empty-site type
// pads the universe up to the target. Identical inputs give identical output;
// start must be a t-model (the empty structure qualifies) no larger than
// target_size.
EcResult ec_extend(const Structure& start, const TheorySpec& t, int site_size, int target_size,
                   std::uint64_t seed);

}  // namespace sopnlab
