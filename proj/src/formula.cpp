#include "sopnlab/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "sopnlab/util.hpp"

namespace sopnlab {

NodePtr mk_atom(int sym, std::vector<VarRef> args) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Atom;
    n->sym = sym;
    n->args = std::move(args);
    return n;
}

NodePtr mk_eq(VarRef x, VarRef y) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Eq;
    n->args = {std::move(x), std::move(y)};
    return n;
}

static NodePtr mk1(NodeKind kind, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->a = std::move(a);
    return n;
}

static NodePtr mk2(NodeKind kind, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr mk_not(NodePtr f) { return mk1(NodeKind::Not, std::move(f)); }
NodePtr mk_and(NodePtr l, NodePtr r) { return mk2(NodeKind::And, std::move(l), std::move(r)); }
NodePtr mk_or(NodePtr l, NodePtr r) { return mk2(NodeKind::Or, std::move(l), std::move(r)); }
NodePtr mk_implies(NodePtr l, NodePtr r) { return mk2(NodeKind::Implies, std::move(l), std::move(r)); }

static NodePtr mk_quant(NodeKind kind, std::string hint, NodePtr f) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->hint = std::move(hint);
    n->a = std::move(f);
    return n;
}

NodePtr mk_forall(std::string hint, NodePtr f) {
    return mk_quant(NodeKind::Forall, std::move(hint), std::move(f));
}

NodePtr mk_exists(std::string hint, NodePtr f) {
    return mk_quant(NodeKind::Exists, std::move(hint), std::move(f));
}

NodePtr mk_and_all(const std::vector<NodePtr>& parts) {
    require(!parts.empty(), "mk_and_all: empty conjunction");
    NodePtr acc = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) acc = mk_and(acc, parts[i]);
    return acc;
}

NodePtr mk_or_all(const std::vector<NodePtr>& parts) {
    require(!parts.empty(), "mk_or_all: empty disjunction");
    NodePtr acc = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) acc = mk_or(acc, parts[i]);
    return acc;
}

bool alpha_equal(const NodePtr& x, const NodePtr& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind || x->sym != y->sym || x->args != y->args) return false;
    if ((x->a != nullptr) != (y->a != nullptr) || (x->b != nullptr) != (y->b != nullptr)) return false;
    if (x->a && !alpha_equal(x->a, y->a)) return false;
    if (x->b && !alpha_equal(x->b, y->b)) return false;
    return true;
}

// ---------------------------------------------------------------- parsing --

namespace {

struct Lexer {
    std::string text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    // Token kinds: "id", "(", ")", ",", "=", "&", "|", "!", "->", ".", "end".
    std::pair<std::string, std::string> peek() {
        skip_ws();
        if (pos >= text.size()) return {"end", ""};
        char c = text[pos];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = pos;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            return {"id", text.substr(pos, j - pos)};
        }
        if (c == '-') {
            if (pos + 1 < text.size() && text[pos + 1] == '>') return {"->", "->"};
            throw Error(cat("formula: stray '-' at offset ", pos));
        }
        std::string one(1, c);
        if (one == "(" || one == ")" || one == "," || one == "=" || one == "&" || one == "|" ||
            one == "!" || one == ".")
            return {one, one};
        throw Error(cat("formula: unexpected character '", one, "' at offset ", pos));
    }

    std::pair<std::string, std::string> next() {
        auto t = peek();
        pos += t.second.size();
        return t;
    }

    void expect(const std::string& kind) {
        auto t = next();
        require(t.first == kind, cat("formula: expected '", kind, "', got '",
                                     t.second.empty() ? t.first : t.second, "'"));
    }
};

struct Parser {
    Lexer lex;
    const Vocabulary& vocab;
    std::vector<std::string> scope;  // binder names, innermost last

    explicit Parser(const std::string& text, const Vocabulary& v) : vocab(v) { lex.text = text; }

    VarRef resolve(const std::string& name) {
        for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i) {
            if (scope[static_cast<size_t>(i)] == name) {
                return VarRef{static_cast<int>(scope.size()) - 1 - i, ""};
            }
        }
        return VarRef{-1, name};
    }

    NodePtr formula() {
        auto t = lex.peek();
        if (t.first == "id" && (t.second == "forall" || t.second == "exists")) {
            lex.next();
            auto var = lex.next();
            require(var.first == "id" && var.second != "forall" && var.second != "exists",
                    "formula: expected variable after quantifier");
            lex.expect(".");
            scope.push_back(var.second);
            NodePtr body = formula();
            scope.pop_back();
            return t.second == "forall" ? mk_forall(var.second, body) : mk_exists(var.second, body);
        }
        return imp();
    }

    NodePtr imp() {
        NodePtr left = disj();
        if (lex.peek().first == "->") {
            lex.next();
            return mk_implies(left, imp());
        }
        return left;
    }

    NodePtr disj() {
        NodePtr acc = conj();
        while (lex.peek().first == "|") {
            lex.next();
            acc = mk_or(acc, conj());
        }
        return acc;
    }

    NodePtr conj() {
        NodePtr acc = unary();
        while (lex.peek().first == "&") {
            lex.next();
            acc = mk_and(acc, unary());
        }
        return acc;
    }

    NodePtr unary() {
        auto t = lex.peek();
        if (t.first == "!") {
            lex.next();
            return mk_not(unary());
        }
        if (t.first == "(") {
            lex.next();
            NodePtr inner = formula();
            lex.expect(")");
            return inner;
        }
        return atom();
    }

    NodePtr atom() {
        auto t = lex.next();
        require(t.first == "id", cat("formula: expected atom, got '", t.second.empty() ? t.first : t.second, "'"));
        require(t.second != "forall" && t.second != "exists",
                "formula: quantifier not allowed here (parenthesize it)");
        if (lex.peek().first == "(") {
            int sym = vocab.index_of(t.second);
            require(sym >= 0, cat("formula: unknown relation '", t.second, "'"));
            lex.next();
            std::vector<VarRef> args;
            while (true) {
                auto v = lex.next();
                require(v.first == "id" && v.second != "forall" && v.second != "exists",
                        "formula: expected variable in atom");
                args.push_back(resolve(v.second));
                auto sep = lex.next();
                if (sep.first == ")") break;
                require(sep.first == ",", "formula: expected ',' or ')' in atom");
            }
            require(static_cast<int>(args.size()) == vocab.at(sym).arity,
                    cat("formula: relation '", t.second, "' expects arity ", vocab.at(sym).arity));
            return mk_atom(sym, std::move(args));
        }
        lex.expect("=");
        auto v = lex.next();
        require(v.first == "id" && v.second != "forall" && v.second != "exists",
                "formula: expected variable after '='");
        return mk_eq(resolve(t.second), resolve(v.second));
    }
};

}  // namespace

Formula parse_formula(const std::string& text, const Vocabulary& vocab) {
    Parser p(text, vocab);
    NodePtr root = p.formula();
    auto t = p.lex.next();
    require(t.first == "end", cat("formula: trailing input at '", t.second, "'"));
    return Formula{vocab, root, std::nullopt};
}

// --------------------------------------------------------------- printing --

namespace {

// Names the subtree must still be able to reference from the enclosing scope:
// free-variable names plus the stack names of bound references escaping the
// subtree. A fresh binder name must avoid all of them.
void blocked_names(const NodePtr& node, const std::vector<std::string>& stack, int depth,
                   std::set<std::string>& out) {
    if (!node) return;
    for (const VarRef& v : node->args) {
        if (!v.is_bound()) {
            out.insert(v.name);
        } else if (v.db >= depth) {
            int up = v.db - depth;
            int idx = static_cast<int>(stack.size()) - 1 - up;
            if (idx >= 0) out.insert(stack[static_cast<size_t>(idx)]);
        }
    }
    int child_depth = (node->kind == NodeKind::Forall || node->kind == NodeKind::Exists)
                          ? depth + 1
                          : depth;
    blocked_names(node->a, stack, child_depth, out);
    blocked_names(node->b, stack, depth, out);
}

int node_prec(const Node& n) {
    switch (n.kind) {
        case NodeKind::Forall:
        case NodeKind::Exists: return 0;
        case NodeKind::Implies: return 1;
        case NodeKind::Or: return 2;
        case NodeKind::And: return 3;
        case NodeKind::Not: return 4;
        default: return 5;
    }
}

struct Printer {
    const Vocabulary& vocab;
    std::vector<std::string> stack;
    std::ostringstream os;

    std::string var_name(const VarRef& v) {
        if (!v.is_bound()) return v.name;
        int idx = static_cast<int>(stack.size()) - 1 - v.db;
        require(idx >= 0, "print: dangling bound variable");
        return stack[static_cast<size_t>(idx)];
    }

    void print(const NodePtr& node, int min_prec) {
        int prec = node_prec(*node);
        bool parens = prec < min_prec;
        if (parens) os << "(";
        switch (node->kind) {
            case NodeKind::Forall:
            case NodeKind::Exists: {
                std::set<std::string> blocked;
                blocked_names(node->a, stack, 1, blocked);
                std::string name = node->hint.empty() ? "v" : node->hint;
                std::string chosen = name;
                for (int k = 2; blocked.count(chosen); ++k) chosen = cat(name, "_", k);
                os << (node->kind == NodeKind::Forall ? "forall " : "exists ") << chosen << " . ";
                stack.push_back(chosen);
                print(node->a, 0);
                stack.pop_back();
                break;
            }
            case NodeKind::Implies:
                print(node->a, 2);
                os << " -> ";
                print(node->b, 1);
                break;
            case NodeKind::Or:
                print(node->a, 2);
                os << " | ";
                print(node->b, 3);
                break;
            case NodeKind::And:
                print(node->a, 3);
                os << " & ";
                print(node->b, 4);
                break;
            case NodeKind::Not:
                os << "!";
                print(node->a, 4);
                break;
            case NodeKind::Eq:
                os << var_name(node->args[0]) << " = " << var_name(node->args[1]);
                break;
            case NodeKind::Atom: {
                os << vocab.at(node->sym).name << "(";
                for (size_t i = 0; i < node->args.size(); ++i) {
                    if (i) os << ",";
                    os << var_name(node->args[i]);
                }
                os << ")";
                break;
            }
        }
        if (parens) os << ")";
    }
};

}  // namespace

std::string print_formula(const Formula& f) {
    require(f.root != nullptr, "print: empty formula");
    Printer p{f.vocab, {}, {}};
    p.print(f.root, 0);
    return p.os.str();
}

FreeSplit parse_split(const std::string& text) {
    auto halves = split_string(text, ';');
    require(halves.size() == 2, "split: expected 'x0,..;y0,..'");
    FreeSplit out;
    std::set<std::string> seen;
    for (int side = 0; side < 2; ++side) {
        auto& dst = side == 0 ? out.left : out.right;
        for (const auto& part : split_string(halves[static_cast<size_t>(side)], ',')) {
            std::string name = trim(part);
            if (name.empty()) continue;
            require(is_identifier(name), cat("split: bad variable '", name, "'"));
            require(seen.insert(name).second, cat("split: duplicate variable '", name, "'"));
            dst.push_back(name);
        }
    }
    require(!out.left.empty() && !out.right.empty(), "split: both halves must be non-empty");
    require(out.left.size() == out.right.size(), "split: halves must have equal length");
    return out;
}

std::string print_split(const FreeSplit& split) {
    std::ostringstream os;
    for (size_t i = 0; i < split.left.size(); ++i) os << (i ? "," : "") << split.left[i];
    os << ";";
    for (size_t i = 0; i < split.right.size(); ++i) os << (i ? "," : "") << split.right[i];
    return os.str();
}

static void collect_free(const NodePtr& node, std::set<std::string>& out) {
    if (!node) return;
    for (const VarRef& v : node->args) {
        if (!v.is_bound()) out.insert(v.name);
    }
    collect_free(node->a, out);
    collect_free(node->b, out);
}

std::vector<std::string> free_variables(const Formula& f) {
    std::set<std::string> names;
    collect_free(f.root, names);
    return {names.begin(), names.end()};
}

static NodePtr subst_node(const NodePtr& node, const std::map<std::string, int>& base_db,
                          int depth) {
    if (!node) return nullptr;
    auto n = std::make_shared<Node>(*node);
    for (VarRef& v : n->args) {
        if (!v.is_bound()) {
            auto it = base_db.find(v.name);
            if (it != base_db.end()) v = VarRef{it->second + depth, ""};
        }
    }
    int child_depth = (node->kind == NodeKind::Forall || node->kind == NodeKind::Exists)
                          ? depth + 1
                          : depth;
    n->a = subst_node(node->a, base_db, child_depth);
    n->b = subst_node(node->b, base_db, depth);
    return n;
}

NodePtr subst_free(const NodePtr& node, const std::map<std::string, int>& base_db) {
    return subst_node(node, base_db, 0);
}

// ------------------------------------------------------------- evaluation --

namespace {

struct Evaluator {
    const Structure& s;
    const std::map<std::string, int>& free_asg;
    std::vector<int> stack;

    int value(const VarRef& v) {
        if (v.is_bound()) {
            int idx = static_cast<int>(stack.size()) - 1 - v.db;
            require(idx >= 0, "evaluate: dangling bound variable");
            return stack[static_cast<size_t>(idx)];
        }
        auto it = free_asg.find(v.name);
        require(it != free_asg.end(), cat("evaluate: unassigned free variable '", v.name, "'"));
        require(it->second >= 0 && it->second < s.size,
                cat("evaluate: assignment for '", v.name, "' out of range"));
        return it->second;
    }

    bool eval(const NodePtr& node) {
        switch (node->kind) {
            case NodeKind::Atom: {
                std::vector<int> tuple;
                tuple.reserve(node->args.size());
                for (const VarRef& v : node->args) tuple.push_back(value(v));
                return has_tuple(s, node->sym, tuple);
            }
            case NodeKind::Eq: return value(node->args[0]) == value(node->args[1]);
            case NodeKind::Not: return !eval(node->a);
            case NodeKind::And: return eval(node->a) && eval(node->b);
            case NodeKind::Or: return eval(node->a) || eval(node->b);
            case NodeKind::Implies: return !eval(node->a) || eval(node->b);
            case NodeKind::Forall:
                for (int e = 0; e < s.size; ++e) {
                    stack.push_back(e);
                    bool ok = eval(node->a);
                    stack.pop_back();
                    if (!ok) return false;
                }
                return true;
            case NodeKind::Exists:
                for (int e = 0; e < s.size; ++e) {
                    stack.push_back(e);
                    bool ok = eval(node->a);
                    stack.pop_back();
                    if (ok) return true;
                }
                return false;
        }
        return false;
    }
};

}  // namespace

bool evaluate(const Structure& s, const Formula& f, const std::map<std::string, int>& assignment) {
    require(f.vocab == s.vocab, "evaluate: vocabulary mismatch");
    require(f.root != nullptr, "evaluate: empty formula");
    Evaluator ev{s, assignment, {}};
    return ev.eval(f.root);
}

bool evaluate_open(const Structure& s, const NodePtr& node, const std::vector<int>& bound_stack,
                   const std::map<std::string, int>& assignment) {
    require(node != nullptr, "evaluate: empty formula");
    Evaluator ev{s, assignment, bound_stack};
    return ev.eval(node);
}

bool evaluate_pair(const Structure& s, const Formula& f, const std::vector<int>& xs,
                   const std::vector<int>& ys) {
    require(f.split.has_value(), "evaluate_pair: formula has no split");
    require(xs.size() == f.split->left.size() && ys.size() == f.split->right.size(),
            "evaluate_pair: tuple length mismatch");
    std::map<std::string, int> asg;
    for (size_t i = 0; i < xs.size(); ++i) asg[f.split->left[i]] = xs[i];
    for (size_t i = 0; i < ys.size(); ++i) asg[f.split->right[i]] = ys[i];
    return evaluate(s, f, asg);
}

int split_arity(const Formula& f) {
    require(f.split.has_value(), "formula: missing free-variable split");
    const FreeSplit& sp = *f.split;
    require(sp.left.size() == sp.right.size() && !sp.left.empty(),
            "formula: split halves must be non-empty and of equal length");
    std::set<std::string> names(sp.left.begin(), sp.left.end());
    names.insert(sp.right.begin(), sp.right.end());
    for (const std::string& v : free_variables(f)) {
        require(names.count(v), cat("formula: free variable '", v, "' not covered by split"));
    }
    return static_cast<int>(sp.left.size());
}

}  // namespace sopnlab
