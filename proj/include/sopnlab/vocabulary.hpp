#pragma once

#include <string>
#include <vector>

namespace sopnlab {

// How a relation symbol's table is maintained:
//   Directed:   no constraint.
//   Symmetric:  arity 2; the table is closed under swapping the pair and the
//               text format lists each unordered pair once.
//   Functional: arity 2, read as a partial function on the first coordinate;
//               at most one tuple per first element.
enum class SymbolKind { Directed, Symmetric, Functional };

struct Symbol {
    std::string name;
    int arity = 0;
    SymbolKind kind = SymbolKind::Directed;

    bool operator==(const Symbol&) const = default;
};

class Vocabulary {
  public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<Symbol> symbols);

    // Appends a symbol; names must be unique, identifier-shaped
    // ([A-Za-z_][A-Za-z0-9_]*), with arity >= 1. Returns its index.
    int add(const Symbol& sym);

    int index_of(const std::string& name) const;  // -1 if absent
    const Symbol& at(int index) const;
    int size() const { return static_cast<int>(symbols_.size()); }
    const std::vector<Symbol>& symbols() const { return symbols_; }

    bool operator==(const Vocabulary&) const = default;

  private:
    std::vector<Symbol> symbols_;
};

bool is_identifier(const std::string& name);
std::string kind_token(SymbolKind kind);

// One-line vocabulary spec "name/arity[:kind],name/arity[:kind],...", e.g.
// "R/2,E/2:symmetric". Kind defaults to directed. print inverts parse exactly.
Vocabulary parse_vocab_spec(const std::string& spec);
std::string print_vocab_spec(const Vocabulary& vocab);

}  // namespace sopnlab
