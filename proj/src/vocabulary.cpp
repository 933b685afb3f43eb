#include "sopnlab/vocabulary.hpp"

#include <cctype>

#include "sopnlab/util.hpp"

namespace sopnlab {

bool is_identifier(const std::string& name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    for (char c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

std::string kind_token(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Directed: return "directed";
        case SymbolKind::Symmetric: return "symmetric";
        case SymbolKind::Functional: return "functional";
    }
    return "directed";
}

Vocabulary::Vocabulary(std::vector<Symbol> symbols) {
    for (const auto& s : symbols) add(s);
}

int Vocabulary::add(const Symbol& sym) {
    require(is_identifier(sym.name), cat("vocabulary: bad symbol name '", sym.name, "'"));
    require(sym.arity >= 1, cat("vocabulary: symbol '", sym.name, "' needs arity >= 1"));
    require((sym.kind == SymbolKind::Directed) || sym.arity == 2,
            cat("vocabulary: symbol '", sym.name, "' must be binary for its kind"));
    require(index_of(sym.name) < 0, cat("vocabulary: duplicate symbol '", sym.name, "'"));
    symbols_.push_back(sym);
    return size() - 1;
}

int Vocabulary::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i) {
        if (symbols_[i].name == name) return i;
    }
    return -1;
}

const Symbol& Vocabulary::at(int index) const {
    require(index >= 0 && index < size(), "vocabulary: symbol index out of range");
    return symbols_[static_cast<size_t>(index)];
}

Vocabulary parse_vocab_spec(const std::string& spec) {
    Vocabulary vocab;
    for (const std::string& raw : split_string(spec, ',')) {
        std::string part = trim(raw);
        require(!part.empty(), "vocab spec: empty entry");
        Symbol sym;
        size_t slash = part.find('/');
        require(slash != std::string::npos, cat("vocab spec: missing '/' in '", part, "'"));
        sym.name = part.substr(0, slash);
        std::string rest = part.substr(slash + 1);
        size_t colon = rest.find(':');
        std::string arity_text = colon == std::string::npos ? rest : rest.substr(0, colon);
        try {
            sym.arity = std::stoi(arity_text);
        } catch (const std::exception&) {
            throw Error(cat("vocab spec: bad arity in '", part, "'"));
        }
        if (colon != std::string::npos) {
            std::string kind = rest.substr(colon + 1);
            if (kind == "directed") sym.kind = SymbolKind::Directed;
            else if (kind == "symmetric") sym.kind = SymbolKind::Symmetric;
            else if (kind == "functional") sym.kind = SymbolKind::Functional;
            else throw Error(cat("vocab spec: unknown kind '", kind, "'"));
        }
        vocab.add(sym);
    }
    require(vocab.size() > 0, "vocab spec: empty");
    return vocab;
}

std::string print_vocab_spec(const Vocabulary& vocab) {
    std::string out;
    for (int i = 0; i < vocab.size(); ++i) {
        const Symbol& sym = vocab.at(i);
        if (i) out += ",";
        out += cat(sym.name, "/", sym.arity);
        if (sym.kind != SymbolKind::Directed) out += cat(":", kind_token(sym.kind));
    }
    return out;
}

}  // namespace sopnlab
