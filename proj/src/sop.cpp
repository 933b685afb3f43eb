#include "sopnlab/sop.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>

#include "sopnlab/util.hpp"

namespace sopnlab {

namespace {

std::string tuple_text(const std::vector<int>& t) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ")";
    return os.str();
}

// size^r, or -1 on overflow past `cap`.
std::int64_t power_count(int size, int r, std::int64_t cap) {
    std::int64_t n = 1;
    for (int i = 0; i < r; ++i) {
        n *= size;
        if (n > cap || n < 0) return -1;
    }
    return n;
}

std::vector<std::vector<int>> all_tuples(int size, int r) {
    std::vector<std::vector<int>> out;
    if (size <= 0) return out;
    std::vector<int> cur(static_cast<size_t>(r), 0);
    while (true) {
        out.push_back(cur);
        int pos = r - 1;
        while (pos >= 0 && cur[static_cast<size_t>(pos)] == size - 1) {
            cur[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++cur[static_cast<size_t>(pos)];
    }
    return out;
}

void validate_tuples(const Structure& s, int r, const std::vector<std::vector<int>>& tuples,
                     const std::string& what) {
    for (const auto& t : tuples) {
        require(static_cast<int>(t.size()) == r,
                cat(what, ": tuple ", tuple_text(t), " has arity ", t.size(), ", expected ", r));
        for (int e : t) {
            require(e >= 0 && e < s.size,
                    cat(what, ": element ", e, " out of range in ", tuple_text(t)));
        }
    }
}

// Square bit matrix with row-major 64-bit blocks.
struct BitMatrix {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> bits;

    explicit BitMatrix(int size) : n(size), words((size + 63) / 64) {
        bits.assign(static_cast<size_t>(n) * static_cast<size_t>(words), 0);
    }

    void set(int i, int j) {
        bits[static_cast<size_t>(i) * words + static_cast<size_t>(j >> 6)] |= 1ull << (j & 63);
    }
    bool get(int i, int j) const {
        return (bits[static_cast<size_t>(i) * words + static_cast<size_t>(j >> 6)] >>
                (j & 63)) & 1u;
    }
    const std::uint64_t* row(int i) const { return bits.data() + static_cast<size_t>(i) * words; }
};

BitMatrix phi_edge_matrix(const Structure& s, const Formula& phi,
                          const std::vector<std::vector<int>>& cands) {
    int c = static_cast<int>(cands.size());
    BitMatrix edges(c);
    parallel_for(c, [&](int i) {
        for (int j = 0; j < c; ++j) {
            if (evaluate_pair(s, phi, cands[static_cast<size_t>(i)],
                              cands[static_cast<size_t>(j)])) {
                edges.set(i, j);
            }
        }
    });
    return edges;
}

bool intersects(const std::uint64_t* a, const std::uint64_t* b, int words) {
    for (int w = 0; w < words; ++w) {
        if (a[w] & b[w]) return true;
    }
    return false;
}

// reach[k][j] = a walk of exactly k edges from j ends at t0. reach[0] is the
// singleton {t0}; higher layers intersect each row with the layer below.
std::vector<std::vector<std::uint64_t>> exact_walks_to(const BitMatrix& edges, int t0, int n) {
    std::vector<std::vector<std::uint64_t>> reach(
        static_cast<size_t>(n) + 1, std::vector<std::uint64_t>(static_cast<size_t>(edges.words), 0));
    reach[0][static_cast<size_t>(t0 >> 6)] = 1ull << (t0 & 63);
    for (int k = 1; k <= n; ++k) {
        for (int j = 0; j < edges.n; ++j) {
            if (intersects(edges.row(j), reach[static_cast<size_t>(k) - 1].data(), edges.words)) {
                reach[static_cast<size_t>(k)][static_cast<size_t>(j >> 6)] |= 1ull << (j & 63);
            }
        }
    }
    return reach;
}

bool bit_at(const std::vector<std::uint64_t>& row, int j) {
    return (row[static_cast<size_t>(j >> 6)] >> (j & 63)) & 1u;
}

std::set<int> occurring_symbols(const NodePtr& node) {
    std::set<int> out;
    std::vector<NodePtr> stack{node};
    while (!stack.empty()) {
        NodePtr cur = stack.back();
        stack.pop_back();
        if (!cur) continue;
        if (cur->kind == NodeKind::Atom) out.insert(cur->sym);
        stack.push_back(cur->a);
        stack.push_back(cur->b);
    }
    return out;
}

bool quantifier_free(const NodePtr& node) {
    if (!node) return true;
    if (node->kind == NodeKind::Forall || node->kind == NodeKind::Exists) return false;
    return quantifier_free(node->a) && quantifier_free(node->b);
}

// Tuple slots of one symbol at universe size m, in a fixed order, so that a
// bitmask over the concatenated slot lists enumerates structures.
std::vector<std::vector<int>> symbol_slots(const Symbol& sym, int m) {
    if (sym.kind == SymbolKind::Symmetric) {
        std::vector<std::vector<int>> out;
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) out.push_back({i, j});
        }
        return out;
    }
    return all_tuples(m, sym.arity);
}

std::string one_line_tables(const Structure& s) {
    std::ostringstream os;
    bool first = true;
    for (int sym = 0; sym < s.vocab.size(); ++sym) {
        const Symbol& symbol = s.vocab.at(sym);
        for (const auto& tuple : s.tables[static_cast<size_t>(sym)]) {
            if (symbol.kind == SymbolKind::Symmetric && tuple[0] > tuple[1]) continue;
            os << (first ? "" : ", ") << symbol.name << tuple_text(tuple);
            first = false;
        }
    }
    return first ? "empty tables" : os.str();
}

std::string assignment_text(const std::vector<std::string>& vars, const std::vector<int>& vals) {
    std::ostringstream os;
    for (size_t i = 0; i < vars.size(); ++i) os << (i ? " " : "") << vars[i] << "=" << vals[i];
    return os.str();
}

struct TheoryName {
    std::string kind;
    int param = -1;
};

TheoryName parse_theory_id(const std::string& id) {
    TheoryName out;
    auto colon = id.find(':');
    out.kind = id.substr(0, colon);
    if (colon != std::string::npos) {
        try {
            out.param = std::stoi(id.substr(colon + 1));
        } catch (...) {
            throw Error(cat("witness: bad theory id '", id, "'"));
        }
    }
    return out;
}

Formula layer_cycle_formula(const Vocabulary& vocab, int sym, int n) {
    std::vector<NodePtr> parts;
    auto var = [](const std::string& stem, int i) { return VarRef{-1, cat(stem, i)}; };
    for (int l = 0; l + 1 < n; ++l) parts.push_back(mk_atom(sym, {var("x", l), var("y", l + 1)}));
    parts.push_back(mk_atom(sym, {var("x", n - 1), var("y", 0)}));
    FreeSplit split;
    for (int l = 0; l < n; ++l) split.left.push_back(cat("x", l));
    for (int l = 0; l < n; ++l) split.right.push_back(cat("y", l));
    return Formula{vocab, mk_and_all(parts), split};
}

// N towers of n layered vertices; edges step up one layer (wrapping at the
// top) while strictly increasing the tower index, so the digraph is acyclic.
WitnessChain layered_witness(const TheorySpec& t, int n, int N) {
    WitnessChain w;
    w.theory_id = t.id;
    w.n = n;
    int sym = 0;  // dcf and ocf have a single edge symbol
    w.model = make_structure(t.vocab, N * n);
    auto el = [n](int tower, int layer) { return tower * n + layer; };
    for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
            for (int l = 0; l + 1 < n; ++l) add_tuple(w.model, sym, {el(i, l), el(j, l + 1)});
            add_tuple(w.model, sym, {el(i, n - 1), el(j, 0)});
        }
    }
    w.phi = layer_cycle_formula(t.vocab, sym, n);
    for (int i = 0; i < N; ++i) {
        std::vector<int> tuple;
        for (int l = 0; l < n; ++l) tuple.push_back(el(i, l));
        w.tuples.push_back(tuple);
    }
    return w;
}

WitnessChain tower_witness(const TheorySpec& t, int n, int N) {
    WitnessChain w;
    w.theory_id = t.id;
    w.n = n;
    int height = n + 1;
    w.model = make_structure(t.vocab, N * height);
    auto el = [height](int tower, int sort) { return tower * height + sort; };
    for (int i = 0; i < N; ++i) {
        for (int s = 0; s <= n; ++s) add_tuple(w.model, cat("P", s), {el(i, s)});
        for (int s = 0; s < n; ++s) add_tuple(w.model, cat("F", s), {el(i, s + 1), el(i, s)});
    }
    for (int f = 0; f <= n; ++f) {
        for (int l = 0; l <= f; ++l) {
            for (int i = 0; i < N; ++i) {
                for (int j = 0; j < N; ++j) {
                    if (l == f || i < j) {
                        add_tuple(w.model, cat("lt_", f, "_", l), {el(i, f), el(j, f)});
                    }
                }
            }
        }
    }
    auto var = [](const std::string& stem, int i) { return VarRef{-1, cat(stem, i)}; };
    std::vector<NodePtr> parts;
    for (int s = 0; s < n; ++s) {
        int fs = t.vocab.index_of(cat("F", s));
        parts.push_back(mk_atom(fs, {var("x", s + 1), var("x", s)}));
        parts.push_back(mk_atom(fs, {var("y", s + 1), var("y", s)}));
    }
    for (int s = 0; s <= n; ++s) {
        parts.push_back(mk_atom(t.vocab.index_of(cat("lt_", s, "_0")), {var("x", s), var("y", s)}));
    }
    FreeSplit split;
    for (int s = 0; s <= n; ++s) split.left.push_back(cat("x", s));
    for (int s = 0; s <= n; ++s) split.right.push_back(cat("y", s));
    w.phi = Formula{t.vocab, mk_and_all(parts), split};
    for (int i = 0; i < N; ++i) {
        std::vector<int> tuple;
        for (int s = 0; s <= n; ++s) tuple.push_back(el(i, s));
        w.tuples.push_back(tuple);
    }
    return w;
}

}  // namespace

WitnessChain build_witness(const TheorySpec& t, int n, int N) {
    require(N >= 2, "witness: chain length must be at least 2");
    TheoryName name = parse_theory_id(t.id);
    if (name.kind == "ord") {
        require(n >= 0 && n <= name.param,
                cat("witness: ", t.id, " supports levels 0..", name.param));
        WitnessChain w;
        w.theory_id = t.id;
        w.n = n;
        w.model = linear_order_model(name.param, N);
        w.phi = ord_phi_family(name.param)[static_cast<size_t>(n)];
        for (int i = 0; i < N; ++i) w.tuples.push_back({i});
        return w;
    }
    if (name.kind == "dcf" || name.kind == "ocf") {
        require(n == name.param,
                cat("witness: ", t.id, " builds SOP_", name.param, " chains only"));
        return layered_witness(t, n, N);
    }
    if (name.kind == "lev") {
        require(n == name.param,
                cat("witness: ", t.id, " builds SOP_", name.param, " chains only"));
        return tower_witness(t, n, N);
    }
    throw Error(cat("witness: unsupported theory/parameter combination (", t.id, ", n=", n, ")"));
}

std::vector<Formula> ord_phi_family(int n_star) {
    Vocabulary vocab = theory_spec(cat("ord:", n_star)).vocab;
    std::vector<Formula> out;
    VarRef x{-1, "x"}, y{-1, "y"};
    std::vector<NodePtr> parts;
    for (int n = 0; n <= n_star; ++n) {
        parts.push_back(mk_atom(vocab.index_of(cat("lt_", n, "_0")), {x, y}));
        out.push_back(Formula{vocab, mk_and_all(parts), FreeSplit{{"x"}, {"y"}}});
    }
    return out;
}

ChainCheck check_chain(const WitnessChain& w) {
    int r = split_arity(w.phi);
    validate_tuples(w.model, r, w.tuples, "chain");
    ChainCheck out;
    int count = static_cast<int>(w.tuples.size());
    for (int k = 0; k < count; ++k) {
        for (int m = k + 1; m < count; ++m) {
            if (!evaluate_pair(w.model, w.phi, w.tuples[static_cast<size_t>(k)],
                               w.tuples[static_cast<size_t>(m)])) {
                out.ok = false;
                out.first_k = k;
                out.first_m = m;
                out.detail = cat("phi fails at pair (", k, ", ", m, "): ",
                                 tuple_text(w.tuples[static_cast<size_t>(k)]), " -> ",
                                 tuple_text(w.tuples[static_cast<size_t>(m)]));
                return out;
            }
        }
    }
    out.ok = true;
    out.detail = count < 2 ? "vacuous (fewer than two tuples)"
                           : cat("all ", count * (count - 1) / 2, " pairs increasing");
    return out;
}

std::optional<std::vector<std::vector<int>>> search_phi_cycle(
    const Structure& s, const Formula& phi, int n,
    const std::optional<std::vector<std::vector<int>>>& candidates) {
    require(n >= 1, "cycle search: length must be at least 1");
    int r = split_arity(phi);
    std::vector<std::vector<int>> cands;
    if (candidates) {
        cands = *candidates;
        validate_tuples(s, r, cands, "cycle search");
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    } else {
        require(power_count(s.size, r, 1 << 14) >= 0,
                cat("cycle search: tuple space ", s.size, "^", r, " too large"));
        cands = all_tuples(s.size, r);
    }
    int c = static_cast<int>(cands.size());
    if (c == 0) return std::nullopt;

    BitMatrix edges = phi_edge_matrix(s, phi, cands);

    // A start tuple works when some walk of exactly n edges returns to it;
    // threads race over starts and the smallest feasible one wins.
    std::atomic<int> best{c};
    parallel_for(c, [&](int t0) {
        if (t0 >= best.load(std::memory_order_relaxed)) return;
        auto reach = exact_walks_to(edges, t0, n);
        if (!bit_at(reach[static_cast<size_t>(n)], t0)) return;
        int cur = best.load(std::memory_order_relaxed);
        while (t0 < cur && !best.compare_exchange_weak(cur, t0)) {
        }
    });
    int t0 = best.load();
    if (t0 >= c) return std::nullopt;

    // Rebuild the lexicographically least cycle from the winning start: every
    // step picks the smallest next tuple that can still close the walk.
    auto reach = exact_walks_to(edges, t0, n);
    std::vector<std::vector<int>> cycle{cands[static_cast<size_t>(t0)]};
    int cur = t0;
    for (int p = 1; p < n; ++p) {
        for (int next = 0; next < c; ++next) {
            if (edges.get(cur, next) && bit_at(reach[static_cast<size_t>(n - p)], next)) {
                cycle.push_back(cands[static_cast<size_t>(next)]);
                cur = next;
                break;
            }
        }
    }
    require(static_cast<int>(cycle.size()) == n, "cycle search: reconstruction failed");
    return cycle;
}

SopCertificate sop_check(const WitnessChain& w, int n, bool restrict_to_chain) {
    require(n >= 1, "sop check: n must be at least 1");
    SopCertificate cert;
    cert.n = n;
    cert.chain = check_chain(w);
    if (!cert.chain.ok) {
        cert.verdict = "inconclusive";
        cert.space = restrict_to_chain ? "chain-tuples" : "all-tuples";
        cert.detail = cat("chain condition fails: ", cert.chain.detail);
        return cert;
    }
    int r = split_arity(w.phi);
    std::optional<std::vector<std::vector<int>>> space;
    if (restrict_to_chain) {
        cert.space = "chain-tuples";
        space = w.tuples;
    } else if (power_count(w.model.size, r, 2048) >= 0) {
        cert.space = "all-tuples";
    } else {
        // The full tuple space is past the search budget; fall back to the
        // chain tuples and say so.
        cert.space = "chain-tuples";
        cert.exhaustive = false;
        space = w.tuples;
    }
    cert.cycle = search_phi_cycle(w.model, w.phi, n, space);
    if (cert.cycle) {
        cert.verdict = cat("SOP_", n, "-refuted-at-bound");
        std::ostringstream os;
        for (size_t i = 0; i < cert.cycle->size(); ++i) {
            os << (i ? " " : "") << tuple_text((*cert.cycle)[i]);
        }
        cert.detail = cat("chain holds but a phi-cycle of length ", n, " exists: ", os.str());
    } else {
        cert.verdict = cat("SOP_", n, "-witnessed");
        cert.detail = cat("chain holds and no phi-cycle of length ", n, " in the ", cert.space,
                          " space", cert.exhaustive ? "" : " (search space capped)");
    }
    return cert;
}

StrictOrderReport check_strict_order(const Structure& s, const Formula& phi) {
    int r = split_arity(phi);
    require(power_count(s.size, r, 4096) >= 0,
            cat("strict order: tuple space ", s.size, "^", r, " too large"));
    std::vector<std::vector<int>> tuples = all_tuples(s.size, r);
    int c = static_cast<int>(tuples.size());
    StrictOrderReport out;
    if (c == 0) {
        out.irreflexive = out.antisymmetric = out.transitive = true;
        out.detail = "empty tuple space";
        return out;
    }
    BitMatrix edges = phi_edge_matrix(s, phi, tuples);

    out.irreflexive = true;
    for (int i = 0; i < c && out.irreflexive; ++i) {
        if (edges.get(i, i)) {
            out.irreflexive = false;
            out.detail = cat("reflexive at ", tuple_text(tuples[static_cast<size_t>(i)]));
        }
    }
    out.antisymmetric = true;
    for (int i = 0; i < c && out.antisymmetric; ++i) {
        for (int j = i + 1; j < c; ++j) {
            if (edges.get(i, j) && edges.get(j, i)) {
                out.antisymmetric = false;
                if (out.detail.empty()) {
                    out.detail = cat("two-cycle between ", tuple_text(tuples[static_cast<size_t>(i)]),
                                     " and ", tuple_text(tuples[static_cast<size_t>(j)]));
                }
                break;
            }
        }
    }
    out.transitive = true;
    for (int i = 0; i < c && out.transitive; ++i) {
        for (int j = 0; j < c && out.transitive; ++j) {
            if (!edges.get(i, j)) continue;
            // row(j) must be a subset of row(i)
            for (int w = 0; w < edges.words; ++w) {
                std::uint64_t missing = edges.row(j)[w] & ~edges.row(i)[w];
                if (!missing) continue;
                out.transitive = false;
                if (out.detail.empty()) {
                    int k = w * 64 + __builtin_ctzll(missing);
                    out.detail = cat("transitivity fails at ",
                                     tuple_text(tuples[static_cast<size_t>(i)]), " -> ",
                                     tuple_text(tuples[static_cast<size_t>(j)]), " -> ",
                                     tuple_text(tuples[static_cast<size_t>(k)]));
                }
                break;
            }
        }
    }
    if (!out.is_partial_order()) return out;

    // Longest chain in the induced partial order, counted in tuples. The
    // relation is acyclic here, so a post-order pass computes path lengths.
    std::vector<int> longest(static_cast<size_t>(c), 0);
    std::vector<int> state(static_cast<size_t>(c), 0);
    std::vector<int> stack;
    for (int start = 0; start < c; ++start) {
        if (state[static_cast<size_t>(start)] == 2) continue;
        stack.push_back(start);
        while (!stack.empty()) {
            int i = stack.back();
            if (state[static_cast<size_t>(i)] == 2) {
                stack.pop_back();
                continue;
            }
            if (state[static_cast<size_t>(i)] == 0) {
                state[static_cast<size_t>(i)] = 1;
                for (int j = 0; j < c; ++j) {
                    if (edges.get(i, j) && state[static_cast<size_t>(j)] == 0) stack.push_back(j);
                }
                continue;
            }
            int best = 0;
            for (int j = 0; j < c; ++j) {
                if (edges.get(i, j)) best = std::max(best, longest[static_cast<size_t>(j)]);
            }
            longest[static_cast<size_t>(i)] = best + 1;
            state[static_cast<size_t>(i)] = 2;
            stack.pop_back();
        }
    }
    out.longest_chain = *std::max_element(longest.begin(), longest.end());
    out.detail = cat("strict partial order; longest chain ", out.longest_chain);
    return out;
}

EntailmentReport check_entailment(const Formula& premise, const Formula& conclusion,
                                  int size_bound, std::uint64_t seed) {
    require(premise.vocab == conclusion.vocab, "entailment: vocabularies differ");
    require(size_bound >= 1, "entailment: size bound must be at least 1");
    const Vocabulary& vocab = premise.vocab;

    std::set<int> syms = occurring_symbols(premise.root);
    for (int sym : occurring_symbols(conclusion.root)) syms.insert(sym);

    std::vector<std::string> vars = free_variables(premise);
    for (const auto& v : free_variables(conclusion)) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    int f = static_cast<int>(vars.size());

    bool qf = quantifier_free(premise.root) && quantifier_free(conclusion.root);
    int bound = size_bound;
    std::string bound_note;
    if (qf && f >= 1 && f < size_bound) {
        // A quantifier-free counterexample survives restriction to the values
        // of its free variables, so larger universes add nothing.
        bound = f;
        bound_note = cat(" (quantifier-free; sizes above ", f, " add nothing)");
    }

    EntailmentReport out;
    out.holds = true;
    for (int m = 1; m <= bound; ++m) {
        std::vector<int> sym_list(syms.begin(), syms.end());
        bool maskable = true;
        std::int64_t total_bits = 0;
        std::vector<std::vector<std::vector<int>>> slots;
        for (int sym : sym_list) {
            const Symbol& symbol = vocab.at(sym);
            if (symbol.kind == SymbolKind::Functional) {
                maskable = false;
                break;
            }
            slots.push_back(symbol_slots(symbol, m));
            total_bits += static_cast<std::int64_t>(slots.back().size());
        }
        std::int64_t assignments = power_count(m, f, 1 << 20);

        auto violates = [&](const Structure& st, const std::vector<int>& vals) {
            std::map<std::string, int> asg;
            for (int i = 0; i < f; ++i) asg[vars[static_cast<size_t>(i)]] = vals[static_cast<size_t>(i)];
            return evaluate(st, premise, asg) && !evaluate(st, conclusion, asg);
        };
        auto first_bad_assignment = [&](const Structure& st) -> std::optional<std::vector<int>> {
            std::vector<int> vals(static_cast<size_t>(f), 0);
            while (true) {
                if (violates(st, vals)) return vals;
                int pos = f - 1;
                while (pos >= 0 && vals[static_cast<size_t>(pos)] == m - 1) {
                    vals[static_cast<size_t>(pos)] = 0;
                    --pos;
                }
                if (pos < 0) return std::nullopt;
                ++vals[static_cast<size_t>(pos)];
            }
        };
        auto structure_from_mask = [&](std::uint64_t mask) {
            Structure st = make_structure(vocab, m);
            int bit = 0;
            for (size_t si = 0; si < sym_list.size(); ++si) {
                for (const auto& tuple : slots[si]) {
                    if ((mask >> bit) & 1u) add_tuple(st, sym_list[si], tuple);
                    ++bit;
                }
            }
            return st;
        };

        if (maskable && total_bits <= 22 && assignments >= 0 &&
            (std::int64_t(1) << total_bits) * assignments <= (std::int64_t(1) << 23)) {
            std::int64_t n_masks = std::int64_t(1) << total_bits;
            std::atomic<std::int64_t> first_bad{n_masks};
            parallel_for(static_cast<int>(n_masks), [&](int mask) {
                if (mask >= first_bad.load(std::memory_order_relaxed)) return;
                Structure st = structure_from_mask(static_cast<std::uint64_t>(mask));
                if (!first_bad_assignment(st)) return;
                std::int64_t cur = first_bad.load(std::memory_order_relaxed);
                while (mask < cur && !first_bad.compare_exchange_weak(cur, mask)) {
                }
            });
            if (first_bad.load() < n_masks) {
                Structure st = structure_from_mask(static_cast<std::uint64_t>(first_bad.load()));
                auto vals = first_bad_assignment(st);
                out.holds = false;
                out.detail = cat("counterexample at size ", m, ": ", assignment_text(vars, *vals),
                                 " with ", one_line_tables(st));
                return out;
            }
        } else {
            out.exhaustive = false;
            std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(m + 1)));
            std::uniform_int_distribution<int> element(0, m - 1);
            std::uniform_int_distribution<int> coin(0, 1);
            for (int sample = 0; sample < 2048; ++sample) {
                Structure st = make_structure(vocab, m);
                for (int sym : sym_list) {
                    const Symbol& symbol = vocab.at(sym);
                    if (symbol.kind == SymbolKind::Functional) {
                        for (int x = 0; x < m; ++x) {
                            if (coin(rng)) add_tuple(st, sym, {x, element(rng)});
                        }
                        continue;
                    }
                    for (const auto& tuple : symbol_slots(symbol, m)) {
                        if (coin(rng)) add_tuple(st, sym, tuple);
                    }
                }
                std::optional<std::vector<int>> bad;
                if (assignments >= 0 && assignments <= 256) {
                    bad = first_bad_assignment(st);
                } else {
                    for (int trial = 0; trial < 256 && !bad; ++trial) {
                        std::vector<int> vals;
                        for (int i = 0; i < f; ++i) vals.push_back(element(rng));
                        if (violates(st, vals)) bad = vals;
                    }
                }
                if (bad) {
                    out.holds = false;
                    out.detail = cat("counterexample at size ", m, " (sampled): ",
                                     assignment_text(vars, *bad), " with ", one_line_tables(st));
                    return out;
                }
            }
        }
    }
    out.detail = cat(out.exhaustive ? "holds for every structure" : "no counterexample sampled",
                     " up to size ", bound, bound_note);
    return out;
}

SopSequenceReport check_sop_sequence(const std::vector<Formula>& phis,
                                     const std::vector<std::vector<std::vector<int>>>& witness,
                                     const Structure& s, int size_bound, std::uint64_t seed) {
    SopSequenceReport out;

    // Shapes: splits present, consecutive splits extend by appended variables,
    // and witness tuples line up with the splits. Problems are reported here
    // rather than thrown.
    out.shapes.ok = true;
    std::vector<int> arities;
    for (size_t k = 0; k < phis.size() && out.shapes.ok; ++k) {
        try {
            arities.push_back(split_arity(phis[k]));
        } catch (const Error& e) {
            out.shapes.ok = false;
            out.shapes.detail = cat("phi_", k, ": ", e.what());
        }
    }
    for (size_t k = 0; k + 1 < phis.size() && out.shapes.ok; ++k) {
        const FreeSplit& a = *phis[k].split;
        const FreeSplit& b = *phis[k + 1].split;
        bool prefix = a.left.size() <= b.left.size() &&
                      std::equal(a.left.begin(), a.left.end(), b.left.begin()) &&
                      std::equal(a.right.begin(), a.right.end(), b.right.begin());
        if (!prefix) {
            out.shapes.ok = false;
            out.shapes.detail = cat("split of phi_", k + 1, " does not extend split of phi_", k,
                                    " by appended variables");
        }
    }
    if (out.shapes.ok && witness.size() != phis.size()) {
        out.shapes.ok = false;
        out.shapes.detail = cat("expected ", phis.size(), " witness levels, got ", witness.size());
    }
    for (size_t k = 0; k < witness.size() && out.shapes.ok; ++k) {
        for (const auto& t : witness[k]) {
            if (static_cast<int>(t.size()) != arities[k]) {
                out.shapes.ok = false;
                out.shapes.detail = cat("level ", k, " tuple ", tuple_text(t), " has arity ",
                                        t.size(), ", expected ", arities[k]);
                break;
            }
            for (int e : t) {
                if (e < 0 || e >= s.size) {
                    out.shapes.ok = false;
                    out.shapes.detail = cat("level ", k, " tuple ", tuple_text(t),
                                            " leaves the universe");
                    break;
                }
            }
        }
        if (out.shapes.ok && k > 0 && witness[k].size() != witness[0].size()) {
            out.shapes.ok = false;
            out.shapes.detail = cat("level ", k, " has ", witness[k].size(), " tuples, level 0 has ",
                                    witness[0].size());
        }
    }
    if (out.shapes.ok) out.shapes.detail = cat(phis.size(), " levels, shapes consistent");
    if (!out.shapes.ok) {
        out.entailment.detail = "skipped (shape check failed)";
        out.cycles.detail = "skipped (shape check failed)";
        out.coherence.detail = "skipped (shape check failed)";
        return out;
    }

    out.entailment.ok = true;
    for (size_t k = 0; k + 1 < phis.size(); ++k) {
        EntailmentReport r = check_entailment(phis[k + 1], phis[k], size_bound,
                                              seed + static_cast<std::uint64_t>(k));
        out.entailment.exhaustive = out.entailment.exhaustive && r.exhaustive;
        if (!r.holds) {
            out.entailment.ok = false;
            out.entailment.detail = cat("phi_", k + 1, " does not entail phi_", k, ": ", r.detail);
            break;
        }
    }
    if (out.entailment.ok) {
        out.entailment.detail = phis.size() < 2 ? "vacuous (single level)"
                                                : cat("each level entails the one below, up to size ",
                                                      size_bound);
    }

    out.cycles.ok = true;
    for (size_t k = 0; k < phis.size() && out.cycles.ok; ++k) {
        for (int m = 1; m <= static_cast<int>(k); ++m) {
            auto cycle = search_phi_cycle(s, phis[k], m, witness[k]);
            if (cycle) {
                out.cycles.ok = false;
                out.cycles.detail = cat("phi_", k, "-cycle of length ", m, " starting at ",
                                        tuple_text((*cycle)[0]));
                break;
            }
        }
    }
    if (out.cycles.ok) out.cycles.detail = "no short cycles among the witness tuples";

    // Coherence: each level's tuples restrict the next level's, and each
    // level's chain decreases along the index order.
    out.coherence.ok = true;
    for (size_t k = 0; k + 1 < phis.size() && out.coherence.ok; ++k) {
        for (size_t a = 0; a < witness[k].size(); ++a) {
            const auto& low = witness[k][a];
            const auto& high = witness[k + 1][a];
            if (!std::equal(low.begin(), low.end(), high.begin())) {
                out.coherence.ok = false;
                out.coherence.detail = cat("level ", k, " tuple ", a,
                                           " is not the restriction of the level ", k + 1, " tuple");
                break;
            }
        }
    }
    for (size_t k = 0; k < phis.size() && out.coherence.ok; ++k) {
        for (size_t a = 0; a < witness[k].size() && out.coherence.ok; ++a) {
            for (size_t b = a + 1; b < witness[k].size(); ++b) {
                if (!evaluate_pair(s, phis[k], witness[k][b], witness[k][a])) {
                    out.coherence.ok = false;
                    out.coherence.detail = cat("phi_", k, " fails at witness pair (", b, ", ", a,
                                               ")");
                    break;
                }
            }
        }
    }
    if (out.coherence.ok) out.coherence.detail = "restrictions and chain order consistent";
    return out;
}

ArrayPatternReport check_array_pattern(const Structure& s, const Formula& phi, const Formula& psi,
                                       const std::vector<std::vector<int>>& a_rows,
                                       const std::vector<std::vector<int>>& b_rows,
                                       const std::vector<int>& u, const std::vector<int>& v) {
    int r = split_arity(phi);
    require(split_arity(psi) == r, "array pattern: phi and psi must share tuple arity");
    require(a_rows.size() == b_rows.size(), "array pattern: row lists differ in length");
    validate_tuples(s, r, a_rows, "array pattern");
    validate_tuples(s, r, b_rows, "array pattern");
    int rows = static_cast<int>(a_rows.size());
    for (int i : u) require(i >= 0 && i < rows, cat("array pattern: u index ", i, " out of range"));
    for (int j : v) require(j >= 0 && j < rows, cat("array pattern: v index ", j, " out of range"));
    for (int i : u) {
        require(std::find(v.begin(), v.end(), i) == v.end(),
                cat("array pattern: index ", i, " in both u and v"));
    }
    require(power_count(s.size, r, 512) >= 0,
            cat("array pattern: tuple space ", s.size, "^", r, " too large"));

    ArrayPatternReport out;
    std::ostringstream bad;

    std::vector<std::vector<int>> xs = all_tuples(s.size, r);
    out.contradictory = true;
    for (const auto& x : xs) {
        for (const auto& y : xs) {
            if (evaluate_pair(s, phi, x, y) && evaluate_pair(s, psi, x, y)) {
                out.contradictory = false;
                bad << "phi&psi both hold at " << tuple_text(x) << "," << tuple_text(y) << "; ";
                break;
            }
        }
        if (!out.contradictory) break;
    }

    out.phi_pattern = true;
    for (int j = 0; j < rows && out.phi_pattern; ++j) {
        for (int i = 0; i <= j; ++i) {
            if (!evaluate_pair(s, phi, b_rows[static_cast<size_t>(j)],
                               a_rows[static_cast<size_t>(i)])) {
                out.phi_pattern = false;
                bad << "phi fails at (i=" << i << ", j=" << j << "); ";
                break;
            }
        }
    }
    out.psi_pattern = true;
    for (int j = 0; j < rows && out.psi_pattern; ++j) {
        for (int i = j + 1; i < rows; ++i) {
            if (!evaluate_pair(s, psi, b_rows[static_cast<size_t>(j)],
                               a_rows[static_cast<size_t>(i)])) {
                out.psi_pattern = false;
                bad << "psi fails at (i=" << i << ", j=" << j << "); ";
                break;
            }
        }
    }

    out.conclusion = false;
    for (const auto& x : xs) {
        bool good = true;
        for (int i : u) {
            if (!evaluate_pair(s, phi, x, a_rows[static_cast<size_t>(i)])) {
                good = false;
                break;
            }
        }
        for (int j : v) {
            if (!good) break;
            if (!evaluate_pair(s, psi, x, a_rows[static_cast<size_t>(j)])) good = false;
        }
        if (good) {
            out.conclusion = true;
            out.conclusion_witness = x;
            break;
        }
    }
    if (!out.conclusion) bad << "no tuple satisfies the conclusion; ";

    if (out.ok()) {
        out.detail = cat("all parts hold; conclusion witnessed by ",
                         tuple_text(*out.conclusion_witness));
    } else {
        std::string text = bad.str();
        out.detail = text.substr(0, text.size() - 2);
    }
    return out;
}

std::string print_chain(const WitnessChain& w) {
    std::ostringstream os;
    if (!w.theory_id.empty()) os << "theory " << w.theory_id << "\n";
    if (w.n > 0) os << "n " << w.n << "\n";
    os << print_structure(w.model);
    os << "phi " << print_formula(w.phi) << "\n";
    require(w.phi.split.has_value(), "chain: phi must carry a split");
    os << "split " << print_split(*w.phi.split) << "\n";
    for (const auto& tuple : w.tuples) {
        os << "tuple";
        for (int e : tuple) os << " " << e;
        os << "\n";
    }
    return os.str();
}

WitnessChain parse_chain(const std::string& text) {
    WitnessChain w;
    std::ostringstream structure_text;
    std::string phi_text, split_text;
    bool have_phi = false, have_split = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "theory") {
            require(!(ls >> w.theory_id).fail(), cat("chain line ", lineno, ": missing theory id"));
        } else if (head == "n") {
            require(static_cast<bool>(ls >> w.n) && w.n >= 1,
                    cat("chain line ", lineno, ": bad n"));
        } else if (head == "vocab" || head == "universe" || head == "rel") {
            structure_text << line << "\n";
        } else if (head == "phi") {
            require(!have_phi, cat("chain line ", lineno, ": duplicate phi"));
            auto pos = raw.find("phi");
            phi_text = trim(raw.substr(pos + 3));
            have_phi = true;
        } else if (head == "split") {
            require(!have_split, cat("chain line ", lineno, ": duplicate split"));
            auto pos = raw.find("split");
            split_text = trim(raw.substr(pos + 5));
            have_split = true;
        } else if (head == "tuple") {
            std::vector<int> tuple;
            int e;
            while (ls >> e) tuple.push_back(e);
            require(!ls.bad() && ls.eof(), cat("chain line ", lineno, ": bad tuple"));
            w.tuples.push_back(tuple);
        } else {
            throw Error(cat("chain line ", lineno, ": unknown directive '", head, "'"));
        }
    }
    require(have_phi, "chain: missing phi line");
    require(have_split, "chain: missing split line");
    w.model = parse_structure(structure_text.str());
    w.phi = parse_formula(phi_text, w.model.vocab);
    w.phi.split = parse_split(split_text);
    int r = split_arity(w.phi);
    validate_tuples(w.model, r, w.tuples, "chain");
    return w;
}

}  // namespace sopnlab
