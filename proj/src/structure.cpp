#include "sopnlab/structure.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "sopnlab/util.hpp"

namespace sopnlab {

Structure make_structure(const Vocabulary& vocab, int size) {
    require(size >= 0, "structure: negative universe size");
    Structure s;
    s.vocab = vocab;
    s.size = size;
    s.tables.resize(static_cast<size_t>(vocab.size()));
    return s;
}

Structure make_structure(const Vocabulary& vocab, int size,
                         const std::vector<std::pair<std::string, std::vector<int>>>& tuples) {
    Structure s = make_structure(vocab, size);
    for (const auto& [name, tuple] : tuples) add_tuple(s, name, tuple);
    return s;
}

static void insert_sorted(std::vector<std::vector<int>>& table, const std::vector<int>& tuple) {
    auto it = std::lower_bound(table.begin(), table.end(), tuple);
    if (it == table.end() || *it != tuple) table.insert(it, tuple);
}

void add_tuple(Structure& s, int sym, const std::vector<int>& tuple) {
    const Symbol& symbol = s.vocab.at(sym);
    require(static_cast<int>(tuple.size()) == symbol.arity,
            cat("structure: arity mismatch for '", symbol.name, "'"));
    for (int e : tuple) {
        require(e >= 0 && e < s.size, cat("structure: element ", e, " out of range"));
    }
    auto& table = s.tables[static_cast<size_t>(sym)];
    if (symbol.kind == SymbolKind::Functional) {
        for (const auto& t : table) {
            if (t[0] == tuple[0]) {
                require(t[1] == tuple[1],
                        cat("structure: functional conflict for '", symbol.name, "' at ", tuple[0]));
                return;
            }
        }
    }
    insert_sorted(table, tuple);
    if (symbol.kind == SymbolKind::Symmetric && tuple[0] != tuple[1]) {
        insert_sorted(table, {tuple[1], tuple[0]});
    }
}

void add_tuple(Structure& s, const std::string& sym_name, const std::vector<int>& tuple) {
    int sym = s.vocab.index_of(sym_name);
    require(sym >= 0, cat("structure: unknown symbol '", sym_name, "'"));
    add_tuple(s, sym, tuple);
}

bool has_tuple(const Structure& s, int sym, const std::vector<int>& tuple) {
    const auto& table = s.tables[static_cast<size_t>(sym)];
    return std::binary_search(table.begin(), table.end(), tuple);
}

Structure induced_substructure(const Structure& s, const std::vector<int>& elements) {
    std::vector<int> keep = elements;
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<int> relabel(static_cast<size_t>(s.size), -1);
    for (size_t i = 0; i < keep.size(); ++i) {
        require(keep[i] >= 0 && keep[i] < s.size, cat("induced: element ", keep[i], " out of range"));
        relabel[static_cast<size_t>(keep[i])] = static_cast<int>(i);
    }
    Structure out = make_structure(s.vocab, static_cast<int>(keep.size()));
    for (int sym = 0; sym < s.vocab.size(); ++sym) {
        for (const auto& tuple : s.tables[static_cast<size_t>(sym)]) {
            std::vector<int> image;
            image.reserve(tuple.size());
            bool inside = true;
            for (int e : tuple) {
                int r = relabel[static_cast<size_t>(e)];
                if (r < 0) {
                    inside = false;
                    break;
                }
                image.push_back(r);
            }
            if (inside) insert_sorted(out.tables[static_cast<size_t>(sym)], image);
        }
    }
    return out;
}

Structure induced_with_order(const Structure& s, const std::vector<int>& elements) {
    std::vector<int> relabel(static_cast<size_t>(s.size), -1);
    for (size_t i = 0; i < elements.size(); ++i) {
        int e = elements[i];
        require(e >= 0 && e < s.size, cat("induced: element ", e, " out of range"));
        require(relabel[static_cast<size_t>(e)] < 0, cat("induced: element ", e, " repeated"));
        relabel[static_cast<size_t>(e)] = static_cast<int>(i);
    }
    Structure out = make_structure(s.vocab, static_cast<int>(elements.size()));
    for (int sym = 0; sym < s.vocab.size(); ++sym) {
        for (const auto& tuple : s.tables[static_cast<size_t>(sym)]) {
            std::vector<int> image;
            image.reserve(tuple.size());
            bool inside = true;
            for (int e : tuple) {
                int r = relabel[static_cast<size_t>(e)];
                if (r < 0) {
                    inside = false;
                    break;
                }
                image.push_back(r);
            }
            if (inside) insert_sorted(out.tables[static_cast<size_t>(sym)], image);
        }
    }
    return out;
}

Structure apply_permutation(const Structure& s, const std::vector<int>& perm) {
    require(static_cast<int>(perm.size()) == s.size, "permutation: wrong length");
    std::vector<bool> seen(static_cast<size_t>(s.size), false);
    for (int p : perm) {
        require(p >= 0 && p < s.size && !seen[static_cast<size_t>(p)], "permutation: not a bijection");
        seen[static_cast<size_t>(p)] = true;
    }
    Structure out = make_structure(s.vocab, s.size);
    for (int sym = 0; sym < s.vocab.size(); ++sym) {
        for (const auto& tuple : s.tables[static_cast<size_t>(sym)]) {
            std::vector<int> image;
            image.reserve(tuple.size());
            for (int e : tuple) image.push_back(perm[static_cast<size_t>(e)]);
            insert_sorted(out.tables[static_cast<size_t>(sym)], image);
        }
    }
    return out;
}

std::string print_structure(const Structure& s) {
    std::ostringstream os;
    for (const Symbol& sym : s.vocab.symbols()) {
        os << "vocab " << sym.name << "/" << sym.arity;
        if (sym.arity == 2) os << " " << kind_token(sym.kind);
        os << "\n";
    }
    os << "universe " << s.size << "\n";
    for (int sym = 0; sym < s.vocab.size(); ++sym) {
        const Symbol& symbol = s.vocab.at(sym);
        for (const auto& tuple : s.tables[static_cast<size_t>(sym)]) {
            if (symbol.kind == SymbolKind::Symmetric && tuple[0] > tuple[1]) continue;
            os << "rel " << symbol.name;
            for (int e : tuple) os << " " << e;
            os << "\n";
        }
    }
    return os.str();
}

Structure parse_structure(const std::string& text) {
    Vocabulary vocab;
    int universe = -1;
    std::vector<std::pair<std::string, std::vector<int>>> rels;

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
        if (head == "vocab") {
            require(universe < 0, cat("structure line ", lineno, ": vocab after universe"));
            std::string decl, kind;
            ls >> decl;
            auto slash = decl.find('/');
            require(slash != std::string::npos, cat("structure line ", lineno, ": expected NAME/ARITY"));
            Symbol sym;
            sym.name = decl.substr(0, slash);
            try {
                sym.arity = std::stoi(decl.substr(slash + 1));
            } catch (...) {
                throw Error(cat("structure line ", lineno, ": bad arity"));
            }
            if (ls >> kind) {
                if (kind == "directed") sym.kind = SymbolKind::Directed;
                else if (kind == "symmetric") sym.kind = SymbolKind::Symmetric;
                else if (kind == "functional") sym.kind = SymbolKind::Functional;
                else throw Error(cat("structure line ", lineno, ": unknown kind '", kind, "'"));
            }
            vocab.add(sym);
        } else if (head == "universe") {
            require(universe < 0, cat("structure line ", lineno, ": duplicate universe"));
            require(static_cast<bool>(ls >> universe) && universe >= 0,
                    cat("structure line ", lineno, ": bad universe size"));
        } else if (head == "rel") {
            require(universe >= 0, cat("structure line ", lineno, ": rel before universe"));
            std::string name;
            ls >> name;
            std::vector<int> tuple;
            int e;
            while (ls >> e) tuple.push_back(e);
            ls.clear();
            std::string junk;
            if (ls >> junk) throw Error(cat("structure line ", lineno, ": bad element '", junk, "'"));
            rels.emplace_back(name, tuple);
        } else {
            throw Error(cat("structure line ", lineno, ": unknown directive '", head, "'"));
        }
        std::string rest;
        if (ls >> rest) throw Error(cat("structure line ", lineno, ": trailing tokens"));
    }
    require(universe >= 0, "structure: missing universe line");
    Structure s = make_structure(vocab, universe);
    for (const auto& [name, tuple] : rels) add_tuple(s, name, tuple);
    return s;
}

}  // namespace sopnlab
