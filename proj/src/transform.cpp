#include "sopnlab/transform.hpp"

#include <map>

#include "sopnlab/util.hpp"

namespace sopnlab {

namespace {

// De Bruijn index, seen from depth 0 under `binders` binders, of binder number
// `index` counted from the outermost one.
int db_of(int binders, int index) { return binders - 1 - index; }

// Copy of phi's body with its split variables replaced by bound references.
// left_db/right_db give the de Bruijn indices at the instantiation site.
NodePtr instantiate(const Formula& phi, const std::vector<int>& left_db,
                    const std::vector<int>& right_db) {
    std::map<std::string, int> subst;
    for (size_t i = 0; i < left_db.size(); ++i) subst[phi.split->left[i]] = left_db[i];
    for (size_t i = 0; i < right_db.size(); ++i) subst[phi.split->right[i]] = right_db[i];
    return subst_free(phi.root, subst);
}

std::vector<int> block_dbs(int binders, int block, int r) {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(r));
    for (int j = 0; j < r; ++j) out.push_back(db_of(binders, block * r + j));
    return out;
}

NodePtr wrap_exists(NodePtr body, const std::vector<std::string>& hints) {
    for (auto it = hints.rbegin(); it != hints.rend(); ++it) body = mk_exists(*it, body);
    return body;
}

std::vector<std::string> block_hints(const std::string& stem, int blocks, int r) {
    std::vector<std::string> hints;
    for (int b = 0; b < blocks; ++b) {
        for (int j = 0; j < r; ++j) {
            hints.push_back(r == 1 ? cat(stem, b) : cat(stem, b, "_", j));
        }
    }
    return hints;
}

}  // namespace

Formula conj_chain(const std::vector<Formula>& phis) {
    require(!phis.empty(), "conj_chain: empty family");
    std::vector<NodePtr> roots;
    for (const Formula& f : phis) {
        require(f.vocab == phis[0].vocab, "conj_chain: vocabulary mismatch");
        require(f.split == phis[0].split, "conj_chain: split mismatch");
        roots.push_back(f.root);
    }
    return Formula{phis[0].vocab, mk_and_all(roots), phis[0].split};
}

Formula build_distance_formula(const Vocabulary& vocab, int m, bool directed,
                               const std::string& symbol) {
    require(m >= 1, "distance: need m >= 1");
    int sym = vocab.index_of(symbol);
    require(sym >= 0, cat("distance: unknown symbol '", symbol, "'"));
    require(vocab.at(sym).arity == 2, cat("distance: symbol '", symbol, "' is not binary"));

    int binders = m + 1;  // z0..zm
    auto z = [&](int i) { return VarRef{db_of(binders, i), ""}; };
    std::vector<NodePtr> parts;
    parts.push_back(mk_eq(VarRef{-1, "x"}, z(0)));
    parts.push_back(mk_eq(VarRef{-1, "y"}, z(m)));
    for (int l = 0; l < m; ++l) {
        NodePtr step = mk_atom(sym, {z(l), z(l + 1)});
        if (!directed) step = mk_or(step, mk_atom(sym, {z(l + 1), z(l)}));
        parts.push_back(step);
    }
    std::vector<std::string> hints;
    for (int i = 0; i <= m; ++i) hints.push_back(cat("z", i));
    return Formula{vocab, wrap_exists(mk_and_all(parts), hints),
                   FreeSplit{{"x"}, {"y"}}};
}

Formula bounded_tc_formula(const Formula& phi, int m) {
    require(m >= 1, "bounded_tc: need m >= 1");
    int r = split_arity(phi);
    std::vector<NodePtr> disjuncts;
    for (int j = 1; j <= m; ++j) {
        int binders = (j + 1) * r;
        std::vector<NodePtr> parts;
        for (int i = 0; i < r; ++i) {
            parts.push_back(mk_eq(VarRef{-1, phi.split->left[static_cast<size_t>(i)]},
                                  VarRef{db_of(binders, i), ""}));
        }
        for (int i = 0; i < r; ++i) {
            parts.push_back(mk_eq(VarRef{-1, phi.split->right[static_cast<size_t>(i)]},
                                  VarRef{db_of(binders, j * r + i), ""}));
        }
        for (int l = 0; l < j; ++l) {
            parts.push_back(instantiate(phi, block_dbs(binders, l, r), block_dbs(binders, l + 1, r)));
        }
        disjuncts.push_back(wrap_exists(mk_and_all(parts), block_hints("z", j + 1, r)));
    }
    return Formula{phi.vocab, mk_or_all(disjuncts), phi.split};
}

Formula build_cycle_sentence(const Formula& phi, int n) {
    require(n >= 1, "cycle sentence: need n >= 1");
    int r = split_arity(phi);
    int binders = n * r;
    std::vector<NodePtr> parts;
    for (int l = 0; l < n; ++l) {
        parts.push_back(
            instantiate(phi, block_dbs(binders, l, r), block_dbs(binders, (l + 1) % n, r)));
    }
    return Formula{phi.vocab, wrap_exists(mk_and_all(parts), block_hints("c", n, r)),
                   std::nullopt};
}

Formula reduce_sop(const Formula& phi, int n) {
    require(n >= 3, "reduce: need n >= 3");
    int r = split_arity(phi);
    int binders = n * r;
    std::vector<NodePtr> parts;
    for (int i = 0; i < r; ++i) {
        parts.push_back(mk_eq(VarRef{db_of(binders, i), ""},
                              VarRef{-1, phi.split->left[static_cast<size_t>(i)]}));
    }
    for (int i = 0; i < r; ++i) {
        parts.push_back(mk_eq(VarRef{db_of(binders, r + i), ""},
                              VarRef{-1, phi.split->right[static_cast<size_t>(i)]}));
    }
    for (int l = 0; l < n; ++l) {
        parts.push_back(
            instantiate(phi, block_dbs(binders, l, r), block_dbs(binders, (l + 1) % n, r)));
    }
    NodePtr block = wrap_exists(mk_and_all(parts), block_hints("c", n, r));
    return Formula{phi.vocab, mk_and(phi.root, mk_not(block)), phi.split};
}

}  // namespace sopnlab
