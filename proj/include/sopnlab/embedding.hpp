#pragma once

#include <optional>
#include <vector>

#include "sopnlab/structure.hpp"

namespace sopnlab {

// Injective map from a pattern's universe into a host's; map[i] is the image
// of pattern element i.
struct Embedding {
    std::vector<int> map;

    bool operator==(const Embedding&) const = default;
    bool operator<(const Embedding& o) const { return map < o.map; }
};

// Weak: pattern tuples must land in the host. Induced: host tuples over the
// image must also pull back (a strong/full embedding).
enum class EmbedMode { Weak, Induced };

bool is_embedding(const Structure& pattern, const Structure& host, const Embedding& e,
                  EmbedMode mode);

// All embeddings, in lexicographic order of the map vector; limit < 0 means
// unbounded. Plain backtracking with degree-ordered pattern vertices.
std::vector<Embedding> find_embeddings(const Structure& pattern, const Structure& host,
                                       EmbedMode mode, int limit = -1);

std::optional<Embedding> find_one_embedding(const Structure& pattern, const Structure& host,
                                            EmbedMode mode);

// An isomorphism a -> b if one exists (sizes equal + bijective induced
// embedding).
std::optional<Embedding> are_isomorphic(const Structure& a, const Structure& b);

// compose(f: A->B, g: B->C) = g after f : A->C.
Embedding compose(const Embedding& f, const Embedding& g);

}  // namespace sopnlab
