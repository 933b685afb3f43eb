#include "sopnlab/amalgam.hpp"

#include <algorithm>
#include <set>

#include "sopnlab/util.hpp"

namespace sopnlab {

namespace {

// Parameter of the layered-order theory this vocabulary belongs to, if any.
int ord_param_for(const Vocabulary& vocab) {
    int count = vocab.size();
    int n = 0;
    while ((n + 1) * (n + 2) / 2 < count) ++n;
    require((n + 1) * (n + 2) / 2 == count, "ordered amalgam: not a layered-order vocabulary");
    return n;
}

void require_model(const Structure& s, const TheorySpec& t, const std::string& which) {
    auto v = check_model(s, t);
    require(!v, cat("amalgam: ", which, " is not a ", t.id, "-model: ", v ? describe(*v) : ""));
}

}  // namespace

void validate_problem(const AmalgamProblem& p) {
    require(p.m0.vocab == p.m1.vocab && p.m0.vocab == p.m2.vocab,
            "amalgam: vocabularies differ");
    require(is_embedding(p.m0, p.m1, p.e1, EmbedMode::Induced),
            "amalgam: e1 is not an induced embedding of m0 into m1");
    require(is_embedding(p.m0, p.m2, p.e2, EmbedMode::Induced),
            "amalgam: e2 is not an induced embedding of m0 into m2");
}

Pushout pushout_union(const AmalgamProblem& p) {
    validate_problem(p);
    std::vector<int> into(static_cast<size_t>(p.m2.size), -1);
    for (int z = 0; z < p.m0.size; ++z) {
        into[static_cast<size_t>(p.e2.map[static_cast<size_t>(z)])] =
            p.e1.map[static_cast<size_t>(z)];
    }
    int next = p.m1.size;
    for (int x = 0; x < p.m2.size; ++x) {
        if (into[static_cast<size_t>(x)] < 0) into[static_cast<size_t>(x)] = next++;
    }

    Pushout out;
    out.merged = make_structure(p.m0.vocab, next);
    for (int sym = 0; sym < p.m1.vocab.size(); ++sym) {
        for (const auto& tuple : p.m1.tables[static_cast<size_t>(sym)]) {
            add_tuple(out.merged, sym, tuple);
        }
    }
    for (int sym = 0; sym < p.m2.vocab.size(); ++sym) {
        for (const auto& tuple : p.m2.tables[static_cast<size_t>(sym)]) {
            std::vector<int> image;
            image.reserve(tuple.size());
            for (int e : tuple) image.push_back(into[static_cast<size_t>(e)]);
            add_tuple(out.merged, sym, image);
        }
    }
    out.h1.map.resize(static_cast<size_t>(p.m1.size));
    for (int x = 0; x < p.m1.size; ++x) out.h1.map[static_cast<size_t>(x)] = x;
    out.h2.map = into;
    return out;
}

Structure ordered_amalgam(const AmalgamProblem& p) {
    validate_problem(p);
    int n_star = ord_param_for(p.m1.vocab);
    TheorySpec t = theory_spec(cat("ord:", n_star));
    require(t.vocab == p.m1.vocab, "ordered amalgam: not a layered-order vocabulary");
    require_model(p.m1, t, "m1");
    require_model(p.m2, t, "m2");
    Pushout po = pushout_union(p);
    Structure& s = po.merged;

    std::vector<char> shared(static_cast<size_t>(s.size), 0);
    for (int z = 0; z < p.m0.size; ++z) shared[static_cast<size_t>(p.e1.map[static_cast<size_t>(z)])] = 1;
    std::vector<int> side1, side2;
    for (int x = 0; x < p.m1.size; ++x) {
        if (!shared[static_cast<size_t>(x)]) side1.push_back(x);
    }
    for (int x = p.m1.size; x < s.size; ++x) side2.push_back(x);
    std::vector<int> base;
    for (int x = 0; x < s.size; ++x) {
        if (shared[static_cast<size_t>(x)]) base.push_back(x);
    }

    for (int n = 0; n <= n_star; ++n) {
        std::vector<int> lt(static_cast<size_t>(n) + 1);
        for (int l = 0; l <= n; ++l) {
            lt[static_cast<size_t>(l)] = t.vocab.index_of(cat("lt_", n, "_", l));
        }
        // Cross pairs at level m < n arise exactly from compositions through
        // the shared part; both reads below are within-side tuples, so adding
        // cross tuples as we go cannot feed back into the rule.
        auto relate = [&](int a, int b) {
            for (int m = 1; m < n; ++m) {
                bool holds = false;
                for (int c : base) {
                    for (int l = 0; l + 1 <= m && !holds; ++l) {
                        int k = m - 1 - l;
                        if (has_tuple(s, lt[static_cast<size_t>(l)], {a, c}) &&
                            has_tuple(s, lt[static_cast<size_t>(k)], {c, b})) {
                            holds = true;
                        }
                    }
                    if (holds) break;
                }
                if (holds) add_tuple(s, lt[static_cast<size_t>(m)], {a, b});
            }
            add_tuple(s, lt[static_cast<size_t>(n)], {a, b});
        };
        for (int a : side1) {
            for (int b : side2) {
                relate(a, b);
                relate(b, a);
            }
        }
    }
    return s;
}

AmalgamResult closure_amalgam(const AmalgamProblem& p, const TheorySpec& t) {
    validate_problem(p);
    require(p.m0.vocab == t.vocab, "amalgam: vocabulary does not match the theory");
    require_model(p.m1, t, "m1");
    require_model(p.m2, t, "m2");
    Structure merged;
    try {
        merged = pushout_union(p).merged;
    } catch (const Error& e) {
        return Obstruction{std::nullopt, cat("union impossible: ", e.what())};
    }
    if (auto conflict = chase_closure(merged, t)) {
        return Obstruction{std::nullopt, *conflict};
    }
    if (auto v = check_model(merged, t)) {
        return Obstruction{v, describe(*v)};
    }
    return merged;
}

AmalgamResult cyclic_amalgam(const WitnessChain& chain, int m, const TheorySpec& t) {
    require(m >= 3, "cyclic amalgam: m must be at least 3");
    require(chain.model.vocab == t.vocab, "cyclic amalgam: vocabulary does not match the theory");
    int count = static_cast<int>(chain.tuples.size());
    require(count >= m + 2,
            cat("cyclic amalgam: chain too short (", count, " tuples, need at least ", m + 2, ")"));
    int r = split_arity(chain.phi);
    for (const auto& tuple : chain.tuples) {
        require(static_cast<int>(tuple.size()) == r, "cyclic amalgam: tuple arity mismatch");
        for (int e : tuple) {
            require(e >= 0 && e < chain.model.size, "cyclic amalgam: tuple element out of range");
        }
    }

    // Positions on which every tuple agrees form the fixed base; all other
    // positions must hold globally distinct elements.
    std::vector<int> free_pos;
    std::vector<int> base;
    std::set<int> taken;
    for (int pos = 0; pos < r; ++pos) {
        bool constant = true;
        for (int k = 1; k < count && constant; ++k) {
            constant = chain.tuples[static_cast<size_t>(k)][static_cast<size_t>(pos)] ==
                       chain.tuples[0][static_cast<size_t>(pos)];
        }
        if (constant) {
            int e = chain.tuples[0][static_cast<size_t>(pos)];
            if (taken.insert(e).second) base.push_back(e);
        } else {
            free_pos.push_back(pos);
        }
    }
    require(!free_pos.empty(), "cyclic amalgam: non-uniform chain (tuples coincide everywhere)");
    for (int k = 0; k < count; ++k) {
        for (int pos : free_pos) {
            int e = chain.tuples[static_cast<size_t>(k)][static_cast<size_t>(pos)];
            require(taken.insert(e).second,
                    cat("cyclic amalgam: non-uniform chain (element ", e,
                        " reused across tuple positions)"));
        }
    }

    int nb = static_cast<int>(free_pos.size());
    int nbase = static_cast<int>(base.size());
    auto piece_elements = [&](int k) {
        std::vector<int> elems = base;
        for (int pos : free_pos) {
            elems.push_back(chain.tuples[static_cast<size_t>(k)][static_cast<size_t>(pos)]);
        }
        for (int pos : free_pos) {
            elems.push_back(chain.tuples[static_cast<size_t>(k) + 1][static_cast<size_t>(pos)]);
        }
        return elems;
    };
    Structure piece = induced_with_order(chain.model, piece_elements(0));
    for (int k = 1; k + 1 < count; ++k) {
        require(induced_with_order(chain.model, piece_elements(k)) == piece,
                cat("cyclic amalgam: non-uniform chain (pair ", k, " differs from pair 0)"));
    }

    Structure glued = make_structure(t.vocab, nbase + m * nb);
    auto relabel = [&](int copy, int x) {
        if (x < nbase) return x;
        if (x < nbase + nb) return nbase + copy * nb + (x - nbase);
        return nbase + ((copy + 1) % m) * nb + (x - nbase - nb);
    };
    try {
        for (int copy = 0; copy < m; ++copy) {
            for (int sym = 0; sym < piece.vocab.size(); ++sym) {
                for (const auto& tuple : piece.tables[static_cast<size_t>(sym)]) {
                    std::vector<int> image;
                    image.reserve(tuple.size());
                    for (int e : tuple) image.push_back(relabel(copy, e));
                    add_tuple(glued, sym, image);
                }
            }
        }
    } catch (const Error& e) {
        return Obstruction{std::nullopt, cat("gluing impossible: ", e.what())};
    }
    if (auto v = check_model(glued, t)) {
        return Obstruction{v, describe(*v)};
    }
    return glued;
}

}  // namespace sopnlab
