#include "sopnlab/theory.hpp"

#include <algorithm>

#include "sopnlab/embedding.hpp"
#include "sopnlab/util.hpp"

namespace sopnlab {

namespace {

// Bound reference to binder `index` (outermost = 0) seen under `binders`
// binders.
VarRef bv(int binders, int index) { return VarRef{binders - 1 - index, ""}; }

Formula closed(const Vocabulary& vocab, NodePtr body, const std::vector<std::string>& hints) {
    for (auto it = hints.rbegin(); it != hints.rend(); ++it) body = mk_forall(*it, body);
    return Formula{vocab, body, std::nullopt};
}

std::string lt_name(int n, int l) { return cat("lt_", n, "_", l); }

struct TheoryBuilder {
    TheorySpec t;

    void axiom(const std::string& name, const Formula& f) {
        t.axioms.push_back(f);
        t.axiom_names.push_back(name);
    }

    void forbid(const std::string& name, const Structure& pattern) {
        t.forbidden.push_back(pattern);
        t.forbidden_names.push_back(name);
    }

    // The shared order axioms for family n of either layered theory. For lev
    // the totality axiom is guarded by the sort predicate; sort < 0 means ord.
    void family_axioms(int n, int sort_sym) {
        const Vocabulary& v = t.vocab;
        auto lt = [&](int l) { return v.index_of(lt_name(n, l)); };
        for (int m = 1; m <= n; ++m) {
            axiom(cat("mono_", n, "_", m),
                  closed(v,
                         mk_implies(mk_atom(lt(m - 1), {bv(2, 0), bv(2, 1)}),
                                    mk_atom(lt(m), {bv(2, 0), bv(2, 1)})),
                         {"x", "y"}));
        }
        NodePtr total = mk_or(mk_atom(lt(n), {bv(2, 0), bv(2, 1)}),
                              mk_atom(lt(n), {bv(2, 1), bv(2, 0)}));
        if (sort_sym >= 0) {
            total = mk_implies(mk_and(mk_atom(sort_sym, {bv(2, 0)}), mk_atom(sort_sym, {bv(2, 1)})),
                               total);
        }
        axiom(cat("total_", n), closed(v, total, {"x", "y"}));
        if (n >= 1) {
            axiom(cat("irr_", n),
                  closed(v, mk_not(mk_atom(lt(n - 1), {bv(1, 0), bv(1, 0)})), {"x"}));
        }
        for (int l = 0; l <= n; ++l) {
            for (int k = 0; l + k + 1 <= n; ++k) {
                int m = l + k + 1;
                axiom(cat("trans_", n, "_", l, "_", k),
                      closed(v,
                             mk_implies(mk_and(mk_atom(lt(l), {bv(3, 0), bv(3, 1)}),
                                               mk_atom(lt(k), {bv(3, 1), bv(3, 2)})),
                                        mk_atom(lt(m), {bv(3, 0), bv(3, 2)})),
                             {"x", "y", "z"}));
            }
        }
    }
};

TheorySpec make_ord(int n_star) {
    require(n_star >= 0, "theory: ord needs a level >= 0");
    TheoryBuilder b;
    b.t.id = cat("ord:", n_star);
    for (int n = 0; n <= n_star; ++n) {
        for (int l = 0; l <= n; ++l) b.t.vocab.add({lt_name(n, l), 2, SymbolKind::Directed});
    }
    for (int n = 0; n <= n_star; ++n) b.family_axioms(n, -1);
    return b.t;
}

TheorySpec make_lev(int n_star) {
    require(n_star >= 0, "theory: lev needs a level >= 0");
    TheoryBuilder b;
    b.t.id = cat("lev:", n_star);
    Vocabulary& v = b.t.vocab;
    for (int i = 0; i <= n_star; ++i) v.add({cat("P", i), 1, SymbolKind::Directed});
    for (int i = 0; i < n_star; ++i) v.add({cat("F", i), 2, SymbolKind::Functional});
    for (int n = 0; n <= n_star; ++n) {
        for (int l = 0; l <= n; ++l) v.add({lt_name(n, l), 2, SymbolKind::Directed});
    }
    auto P = [&](int i) { return v.index_of(cat("P", i)); };
    auto F = [&](int i) { return v.index_of(cat("F", i)); };

    for (int i = 0; i <= n_star; ++i) {
        for (int j = i + 1; j <= n_star; ++j) {
            b.axiom(cat("disj_", i, "_", j),
                    closed(v, mk_not(mk_and(mk_atom(P(i), {bv(1, 0)}), mk_atom(P(j), {bv(1, 0)}))),
                           {"x"}));
        }
    }
    for (int i = 0; i < n_star; ++i) {
        b.axiom(cat("ftype_", i),
                closed(v,
                       mk_implies(mk_atom(F(i), {bv(2, 0), bv(2, 1)}),
                                  mk_and(mk_atom(P(i + 1), {bv(2, 0)}), mk_atom(P(i), {bv(2, 1)}))),
                       {"x", "y"}));
    }
    for (int n = 0; n <= n_star; ++n) {
        for (int l = 0; l <= n; ++l) {
            b.axiom(cat("sort_", n, "_", l),
                    closed(v,
                           mk_implies(mk_atom(v.index_of(lt_name(n, l)), {bv(2, 0), bv(2, 1)}),
                                      mk_and(mk_atom(P(n), {bv(2, 0)}), mk_atom(P(n), {bv(2, 1)}))),
                           {"x", "y"}));
        }
    }
    for (int n = 0; n <= n_star; ++n) b.family_axioms(n, P(n));
    // Projections carry the level-l comparison from sort n+1 down to sort n.
    for (int n = 0; n < n_star; ++n) {
        for (int l = 0; l <= n; ++l) {
            int up = v.index_of(lt_name(n + 1, l));
            int down = v.index_of(lt_name(n, l));
            b.axiom(cat("coh_", n, "_", l),
                    closed(v,
                           mk_implies(mk_and(mk_and(mk_atom(F(n), {bv(4, 0), bv(4, 1)}),
                                                    mk_atom(F(n), {bv(4, 2), bv(4, 3)})),
                                             mk_atom(up, {bv(4, 0), bv(4, 2)})),
                                      mk_atom(down, {bv(4, 1), bv(4, 3)})),
                           {"x", "xp", "y", "yp"}));
        }
    }
    return b.t;
}

Structure cycle_pattern(const Vocabulary& vocab, int sym, int length) {
    Structure p = make_structure(vocab, length);
    for (int i = 0; i < length; ++i) add_tuple(p, sym, {i, (i + 1) % length});
    return p;
}

Structure loop_pattern(const Vocabulary& vocab, int sym) {
    Structure p = make_structure(vocab, 1);
    add_tuple(p, sym, {0, 0});
    return p;
}

TheorySpec make_cycle_free(const std::string& id, const std::string& sym_name, SymbolKind kind,
                           int n, int step, int first) {
    TheoryBuilder b;
    b.t.id = id;
    int sym = b.t.vocab.add({sym_name, 2, kind});
    b.forbid("loop", loop_pattern(b.t.vocab, sym));
    for (int k = first; k <= n; k += step) {
        b.forbid(cat("cycle_", k), cycle_pattern(b.t.vocab, sym, k));
    }
    return b.t;
}

}  // namespace

TheorySpec theory_spec(const std::string& id) {
    std::string name = id;
    int param = -1;
    size_t colon = id.find(':');
    if (colon != std::string::npos) {
        name = id.substr(0, colon);
        try {
            param = std::stoi(id.substr(colon + 1));
        } catch (const std::exception&) {
            throw Error(cat("theory: bad parameter in '", id, "'"));
        }
    }
    if (name == "ord") {
        require(colon != std::string::npos, "theory: ord needs a level, e.g. ord:2");
        return make_ord(param);
    }
    if (name == "lev") {
        require(colon != std::string::npos, "theory: lev needs a level, e.g. lev:2");
        return make_lev(param);
    }
    if (name == "dcf") {
        require(colon != std::string::npos && param >= 2, "theory: dcf needs a bound >= 2");
        return make_cycle_free(id, "R", SymbolKind::Directed, param, 1, 2);
    }
    if (name == "ocf") {
        require(colon != std::string::npos && param >= 3 && param % 2 == 1,
                "theory: ocf needs an odd bound >= 3");
        return make_cycle_free(id, "E", SymbolKind::Symmetric, param, 2, 3);
    }
    if (name == "cf") {
        require(colon != std::string::npos && param >= 3, "theory: cf needs a bound >= 3");
        return make_cycle_free(id, "E", SymbolKind::Symmetric, param, 1, 3);
    }
    if (name == "trf") {
        require(colon == std::string::npos, "theory: trf takes no parameter");
        return make_cycle_free("trf", "E", SymbolKind::Symmetric, 3, 1, 3);
    }
    throw Error(cat("theory: unknown id '", id, "'"));
}

std::string describe(const Violation& v) {
    std::ostringstream os;
    os << v.kind << " " << v.index << " (" << v.label << ")";
    if (v.kind == "axiom") {
        os << " fails at";
        for (size_t i = 0; i < v.var_names.size(); ++i) {
            os << " " << v.var_names[i] << "=" << v.assignment[i];
        }
    } else {
        os << " embeds at";
        for (int e : v.embedding) os << " " << e;
    }
    return os.str();
}

namespace {

// Splits a closed axiom into its universal prefix (binder hints) and body.
NodePtr strip_prefix(const NodePtr& root, std::vector<std::string>& hints) {
    NodePtr node = root;
    while (node->kind == NodeKind::Forall) {
        hints.push_back(node->hint.empty() ? cat("v", hints.size()) : node->hint);
        node = node->a;
    }
    return node;
}

// Lexicographic odometer over assignments [0, size)^k; returns false once
// exhausted.
bool advance(std::vector<int>& values, int size) {
    for (size_t i = values.size(); i-- > 0;) {
        if (++values[i] < size) return true;
        values[i] = 0;
    }
    return false;
}

}  // namespace

std::optional<Violation> check_model(const Structure& s, const TheorySpec& t) {
    require(s.vocab == t.vocab, "check_model: vocabulary mismatch");
    for (size_t i = 0; i < t.axioms.size(); ++i) {
        std::vector<std::string> hints;
        NodePtr body = strip_prefix(t.axioms[i].root, hints);
        if (hints.empty()) {
            if (!evaluate_open(s, body, {})) {
                return Violation{"axiom", static_cast<int>(i), t.axiom_names[i], {}, {}, {}};
            }
            continue;
        }
        if (s.size == 0) continue;
        std::vector<int> values(hints.size(), 0);
        do {
            if (!evaluate_open(s, body, values)) {
                return Violation{"axiom", static_cast<int>(i), t.axiom_names[i], hints, values, {}};
            }
        } while (advance(values, s.size));
    }
    for (size_t i = 0; i < t.forbidden.size(); ++i) {
        if (auto e = find_one_embedding(t.forbidden[i], s, EmbedMode::Weak)) {
            return Violation{"forbidden", static_cast<int>(i), t.forbidden_names[i], {}, {}, e->map};
        }
    }
    return std::nullopt;
}

namespace {

struct HornRule {
    int vars = 0;
    std::vector<const Node*> premises;  // atoms
    std::vector<const Node*> heads;     // atoms
};

bool atoms_only(const NodePtr& node, std::vector<const Node*>& out) {
    if (node->kind == NodeKind::Atom) {
        out.push_back(node.get());
        return true;
    }
    if (node->kind == NodeKind::And) return atoms_only(node->a, out) && atoms_only(node->b, out);
    return false;
}

std::optional<HornRule> classify_horn(const Formula& axiom) {
    HornRule rule;
    std::vector<std::string> hints;
    NodePtr body = strip_prefix(axiom.root, hints);
    rule.vars = static_cast<int>(hints.size());
    if (body->kind == NodeKind::Implies) {
        if (!atoms_only(body->a, rule.premises)) return std::nullopt;
        if (!atoms_only(body->b, rule.heads)) return std::nullopt;
        return rule;
    }
    if (atoms_only(body, rule.heads)) return rule;
    return std::nullopt;
}

std::vector<int> atom_tuple(const Node* atom, const std::vector<int>& values) {
    std::vector<int> tuple;
    tuple.reserve(atom->args.size());
    for (const VarRef& v : atom->args) {
        require(v.is_bound(), "chase: axiom with free variables");
        int idx = static_cast<int>(values.size()) - 1 - v.db;
        require(idx >= 0, "chase: binder index out of range");
        tuple.push_back(values[static_cast<size_t>(idx)]);
    }
    return tuple;
}

}  // namespace

std::optional<std::string> chase_closure(Structure& s, const TheorySpec& t) {
    require(s.vocab == t.vocab, "chase: vocabulary mismatch");
    std::vector<HornRule> rules;
    std::vector<size_t> rule_axiom;
    for (size_t i = 0; i < t.axioms.size(); ++i) {
        if (auto rule = classify_horn(t.axioms[i])) {
            rules.push_back(*rule);
            rule_axiom.push_back(i);
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t ri = 0; ri < rules.size(); ++ri) {
            const HornRule& rule = rules[ri];
            if (rule.vars > 0 && s.size == 0) continue;
            std::vector<int> values(static_cast<size_t>(rule.vars), 0);
            do {
                bool fire = true;
                for (const Node* premise : rule.premises) {
                    if (!has_tuple(s, premise->sym, atom_tuple(premise, values))) {
                        fire = false;
                        break;
                    }
                }
                if (!fire) continue;
                for (const Node* head : rule.heads) {
                    std::vector<int> tuple = atom_tuple(head, values);
                    if (has_tuple(s, head->sym, tuple)) continue;
                    if (s.vocab.at(head->sym).kind == SymbolKind::Functional) {
                        for (const auto& existing : s.tables[static_cast<size_t>(head->sym)]) {
                            if (existing[0] == tuple[0] && existing[1] != tuple[1]) {
                                return cat("axiom ", t.axiom_names[rule_axiom[ri]],
                                           " forces ", s.vocab.at(head->sym).name, "(", tuple[0],
                                           ",", tuple[1], ") against existing value ", existing[1]);
                            }
                        }
                    }
                    add_tuple(s, head->sym, tuple);
                    changed = true;
                }
            } while (rule.vars > 0 && advance(values, s.size));
        }
    }
    return std::nullopt;
}

Structure linear_order_model(int n_star, int n) {
    require(n >= 0, "linear order: negative size");
    TheorySpec t = theory_spec(cat("ord:", n_star));
    Structure s = make_structure(t.vocab, n);
    for (int f = 0; f <= n_star; ++f) {
        for (int l = 0; l <= f; ++l) {
            int sym = t.vocab.index_of(lt_name(f, l));
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (l == f ? true : i < j) add_tuple(s, sym, {i, j});
                }
            }
        }
    }
    return s;
}

}  // namespace sopnlab
