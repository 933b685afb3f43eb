#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sopnlab/structure.hpp"

namespace sopnlab {

// Bound variables are de Bruijn indices (0 = innermost binder), free
// variables are names. Surface syntax is always named; binder hints are kept
// for printing only and ignored by equality.
struct VarRef {
    int db = -1;
    std::string name;

    bool is_bound() const { return db >= 0; }
    bool operator==(const VarRef& o) const {
        if (is_bound() != o.is_bound()) return false;
        return is_bound() ? db == o.db : name == o.name;
    }
};

enum class NodeKind { Atom, Eq, Not, And, Or, Implies, Forall, Exists };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    int sym = -1;                // Atom: vocabulary index
    std::vector<VarRef> args;    // Atom arguments; Eq uses args[0], args[1]
    NodePtr a, b;                // children (quantifiers and Not use a only)
    std::string hint;            // binder name hint
};

NodePtr mk_atom(int sym, std::vector<VarRef> args);
NodePtr mk_eq(VarRef x, VarRef y);
NodePtr mk_not(NodePtr f);
NodePtr mk_and(NodePtr l, NodePtr r);
NodePtr mk_or(NodePtr l, NodePtr r);
NodePtr mk_implies(NodePtr l, NodePtr r);
NodePtr mk_forall(std::string hint, NodePtr f);
NodePtr mk_exists(std::string hint, NodePtr f);

// Left-folded conjunction of a non-empty list.
NodePtr mk_and_all(const std::vector<NodePtr>& parts);
NodePtr mk_or_all(const std::vector<NodePtr>& parts);

bool alpha_equal(const NodePtr& x, const NodePtr& y);

// Designated split of the free variables into an (x̄; ȳ) pair.
struct FreeSplit {
    std::vector<std::string> left, right;

    bool operator==(const FreeSplit&) const = default;
};

struct Formula {
    Vocabulary vocab;
    NodePtr root;
    std::optional<FreeSplit> split;

    bool operator==(const Formula& o) const {
        return vocab == o.vocab && alpha_equal(root, o.root) && split == o.split;
    }
};

// Grammar (precedence ! > & > | > ->, -> right-associative, quantifier bodies
// extend maximally):
//   formula := 'forall' VAR '.' formula | 'exists' VAR '.' formula | imp
//   imp     := disj ('->' imp)?
//   disj    := conj ('|' conj)*
//   conj    := unary ('&' unary)*
//   unary   := '!' unary | '(' formula ')' | atom
//   atom    := NAME '(' VAR (',' VAR)* ')' | VAR '=' VAR
Formula parse_formula(const std::string& text, const Vocabulary& vocab);

// Canonical printing; parse_formula(print_formula(f), f.vocab) == f. Binder
// hints are freshened if they would capture a variable referenced beneath.
std::string print_formula(const Formula& f);

// "x0,x1;y0,y1" -> FreeSplit. Names must be distinct identifiers.
FreeSplit parse_split(const std::string& text);
std::string print_split(const FreeSplit& split);

// Sorted names of the free variables.
std::vector<std::string> free_variables(const Formula& f);

// Replaces free variables by bound references: a name mapped to base prints
// as de Bruijn index base+depth at binder depth `depth`. Used to build
// quantified instantiations of a formula.
NodePtr subst_free(const NodePtr& node, const std::map<std::string, int>& base_db);

// Naive recursive evaluation (quantifiers enumerate the universe, connectives
// short-circuit). Unassigned free variables are an error.
bool evaluate(const Structure& s, const Formula& f, const std::map<std::string, int>& assignment);

// Convenience for split formulas: assigns the left half to xs, right to ys.
bool evaluate_pair(const Structure& s, const Formula& f, const std::vector<int>& xs,
                   const std::vector<int>& ys);

// Evaluation with explicit values for enclosing binders (outermost first). Lets
// axiom checkers strip a universal prefix and report the failing assignment.
bool evaluate_open(const Structure& s, const NodePtr& node, const std::vector<int>& bound_stack,
                   const std::map<std::string, int>& assignment = {});

// Checks that f has a split with |left| == |right| == r > 0 and that the split
// covers all free variables; returns r.
int split_arity(const Formula& f);

}  // namespace sopnlab
