#include "sopnlab/invariants.hpp"

#include <algorithm>
#include <random>

#include "sopnlab/util.hpp"

namespace sopnlab {

namespace {

void validate_cut(const CutEntry& cut, int lineno) {
    std::string where = lineno > 0 ? cat("cut line ", lineno, ": ") : "cut system: ";
    require(cut.delta >= 0, cat(where, "negative delta"));
    for (size_t i = 0; i < cut.points.size(); ++i) {
        require(cut.points[i] >= 0 && cut.points[i] < cut.delta,
                cat(where, "point ", cut.points[i], " not below delta ", cut.delta));
        require(i == 0 || cut.points[i - 1] < cut.points[i],
                cat(where, "points not strictly increasing"));
    }
    for (size_t i = 0; i < cut.acc.size(); ++i) {
        require(std::binary_search(cut.points.begin(), cut.points.end(), cut.acc[i]),
                cat(where, "acc point ", cut.acc[i], " is not a cut point"));
        require(i == 0 || cut.acc[i - 1] < cut.acc[i],
                cat(where, "acc points not strictly increasing"));
    }
}

void validate_cuts(const CutSystem& cuts, int size) {
    for (size_t i = 0; i < cuts.size(); ++i) {
        validate_cut(cuts[i], 0);
        require(i == 0 || cuts[i - 1].delta < cuts[i].delta,
                "cut system: deltas not strictly increasing");
        require(cuts[i].delta <= size,
                cat("cut system: delta ", cuts[i].delta, " exceeds universe size ", size));
    }
}

// A binary relation snapshot; both invariants quantify over it pairwise.
struct PairRel {
    int n = 0;
    std::vector<char> bits;
    bool at(int a, int b) const { return bits[static_cast<size_t>(a) * n + b] != 0; }
};

PairRel order_relation(const Structure& order) {
    require(order.vocab.size() == 1 && order.vocab.at(0).arity == 2 &&
                order.vocab.at(0).kind == SymbolKind::Directed,
            "not a linear order: expected one directed binary symbol");
    PairRel rel;
    rel.n = order.size;
    rel.bits.assign(static_cast<size_t>(rel.n) * rel.n, 0);
    for (const auto& t : order.tables[0]) {
        rel.bits[static_cast<size_t>(t[0]) * rel.n + t[1]] = 1;
    }
    for (int a = 0; a < rel.n; ++a) {
        require(!rel.at(a, a), cat("not a linear order: reflexive at ", a));
        for (int b = a + 1; b < rel.n; ++b) {
            require(rel.at(a, b) != rel.at(b, a),
                    cat("not a linear order: elements ", a, " and ", b,
                        rel.at(a, b) ? " related both ways" : " incomparable"));
        }
    }
    for (int a = 0; a < rel.n; ++a) {
        for (int b = 0; b < rel.n; ++b) {
            if (!rel.at(a, b)) continue;
            for (int c = 0; c < rel.n; ++c) {
                require(!rel.at(b, c) || rel.at(a, c),
                        cat("not a linear order: transitivity fails at (", a, ",", b, ",", c, ")"));
            }
        }
    }
    return rel;
}

PairRel formula_relation(const Structure& m, const Formula& phi) {
    std::string first, second;
    if (phi.split) {
        require(phi.split->left.size() == 1 && phi.split->right.size() == 1,
                "phi not binary: split halves must be single variables");
        first = phi.split->left[0];
        second = phi.split->right[0];
    } else {
        auto fv = free_variables(phi);
        require(fv.size() == 2, cat("phi not binary: ", fv.size(), " free variables"));
        first = fv[0];
        second = fv[1];
    }
    PairRel rel;
    rel.n = m.size;
    rel.bits.assign(static_cast<size_t>(rel.n) * rel.n, 0);
    parallel_for(rel.n, [&](int a) {
        std::map<std::string, int> assignment{{first, a}, {second, 0}};
        for (int b = 0; b < rel.n; ++b) {
            assignment[second] = b;
            if (evaluate(m, phi, assignment)) {
                rel.bits[static_cast<size_t>(a) * rel.n + b] = 1;
            }
        }
    });
    return rel;
}

// Largest cut point below alpha, or 0 when there is none.
int sup_below(const CutEntry& cut, int alpha) {
    int best = 0;
    for (int p : cut.points) {
        if (p < alpha) best = p;
    }
    return best;
}

std::set<int> order_inv_core(const PairRel& lt, const CutSystem& cuts, int x) {
    std::set<int> out;
    for (const auto& cut : cuts) {
        for (int alpha : nacc_points(cut)) {
            int d1 = sup_below(cut, alpha);
            bool found = false;
            for (int y = 0; y < alpha && !found; ++y) {
                if (!lt.at(y, x)) continue;
                for (int z = 0; z < alpha && !found; ++z) {
                    if (!lt.at(x, z)) continue;
                    bool clear = true;
                    for (int s = 0; s < d1 && clear; ++s) {
                        clear = lt.at(s, y) || lt.at(z, s);
                    }
                    found = clear;
                }
            }
            if (found) out.insert(alpha);
        }
    }
    return out;
}

std::set<int> model_inv_core(const PairRel& phi, const CutSystem& cuts, int x) {
    std::set<int> out;
    for (const auto& cut : cuts) {
        for (int alpha : nacc_points(cut)) {
            int d1 = sup_below(cut, alpha);
            int d2 = alpha;
            bool found = false;
            for (int b = 0; b < d2 && !found; ++b) {
                if (phi.at(b, x)) {
                    bool ok = true;
                    for (int c = 0; c < d1 && ok; ++c) {
                        if (!phi.at(c, x)) continue;
                        bool bridged = false;
                        for (int y = 0; y < d1 && !bridged; ++y) {
                            bridged = phi.at(c, y) && phi.at(y, b);
                        }
                        ok = bridged;
                    }
                    found = ok;
                }
                if (found) break;
                if (phi.at(x, b)) {
                    bool ok = true;
                    for (int c = 0; c < d1 && ok; ++c) {
                        if (!phi.at(x, c)) continue;
                        bool bridged = false;
                        for (int y = 0; y < d1 && !bridged; ++y) {
                            bridged = phi.at(y, c) && phi.at(b, y);
                        }
                        ok = bridged;
                    }
                    found = ok;
                }
            }
            if (found) out.insert(alpha);
        }
    }
    return out;
}

InvariantReport build_report(int size, const std::function<std::set<int>(int)>& inv_of) {
    std::vector<std::set<int>> rows(static_cast<size_t>(size));
    parallel_for(size, [&](int x) { rows[static_cast<size_t>(x)] = inv_of(x); });
    InvariantReport rep;
    for (int x = 0; x < size; ++x) {
        rep.aggregate.insert(rows[static_cast<size_t>(x)]);
        rep.per_element.emplace(x, std::move(rows[static_cast<size_t>(x)]));
    }
    return rep;
}

}  // namespace

CutSystem parse_cuts(const std::string& text) {
    CutSystem cuts;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head, delta_tok;
        ls >> head >> delta_tok;
        require(head == "cut", cat("cut line ", lineno, ": expected 'cut'"));
        require(!delta_tok.empty() && delta_tok.back() == ':',
                cat("cut line ", lineno, ": expected 'cut DELTA:'"));
        CutEntry cut;
        try {
            cut.delta = std::stoi(delta_tok.substr(0, delta_tok.size() - 1));
        } catch (...) {
            throw Error(cat("cut line ", lineno, ": bad delta"));
        }
        bool in_acc = false;
        std::string tok;
        while (ls >> tok) {
            if (tok == "acc:") {
                require(!in_acc, cat("cut line ", lineno, ": duplicate acc marker"));
                in_acc = true;
                continue;
            }
            int value = 0;
            try {
                value = std::stoi(tok);
            } catch (...) {
                throw Error(cat("cut line ", lineno, ": bad point '", tok, "'"));
            }
            (in_acc ? cut.acc : cut.points).push_back(value);
        }
        require(!in_acc || !cut.acc.empty(), cat("cut line ", lineno, ": empty acc list"));
        validate_cut(cut, lineno);
        require(cuts.empty() || cuts.back().delta < cut.delta,
                cat("cut line ", lineno, ": deltas not strictly increasing"));
        cuts.push_back(std::move(cut));
    }
    return cuts;
}

std::string print_cuts(const CutSystem& cuts) {
    std::ostringstream os;
    for (const auto& cut : cuts) {
        os << "cut " << cut.delta << ":";
        for (int p : cut.points) os << " " << p;
        if (!cut.acc.empty()) {
            os << " acc:";
            for (int a : cut.acc) os << " " << a;
        }
        os << "\n";
    }
    return os.str();
}

std::vector<int> nacc_points(const CutEntry& cut) {
    std::vector<int> out;
    for (int p : cut.points) {
        if (!std::binary_search(cut.acc.begin(), cut.acc.end(), p)) out.push_back(p);
    }
    return out;
}

std::set<int> order_invariant(const Structure& order, const CutSystem& cuts, int x) {
    validate_cuts(cuts, order.size);
    require(x >= 0 && x < order.size, cat("order invariant: element ", x, " out of range"));
    return order_inv_core(order_relation(order), cuts, x);
}

std::set<int> model_invariant(const Structure& m, const Formula& phi, const CutSystem& cuts,
                              int x) {
    validate_cuts(cuts, m.size);
    require(x >= 0 && x < m.size, cat("model invariant: element ", x, " out of range"));
    require(phi.vocab == m.vocab, "model invariant: formula vocabulary mismatch");
    return model_inv_core(formula_relation(m, phi), cuts, x);
}

InvariantReport order_invariant_report(const Structure& order, const CutSystem& cuts) {
    validate_cuts(cuts, order.size);
    PairRel lt = order_relation(order);
    return build_report(order.size, [&](int x) { return order_inv_core(lt, cuts, x); });
}

InvariantReport model_invariant_report(const Structure& m, const Formula& phi,
                                       const CutSystem& cuts) {
    validate_cuts(cuts, m.size);
    require(phi.vocab == m.vocab, "model invariant: formula vocabulary mismatch");
    PairRel rel = formula_relation(m, phi);
    return build_report(m.size, [&](int x) { return model_inv_core(rel, cuts, x); });
}

std::vector<int> block_breakpoints(const CutSystem& cuts) {
    std::vector<int> out;
    for (const auto& cut : cuts) {
        out.push_back(cut.delta);
        out.insert(out.end(), cut.points.begin(), cut.points.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> block_permutation(int size, const std::vector<int>& breakpoints,
                                   std::uint64_t seed) {
    require(size >= 0, "block permutation: negative size");
    std::vector<int> perm(static_cast<size_t>(size));
    for (int i = 0; i < size; ++i) perm[static_cast<size_t>(i)] = i;
    std::vector<int> bounds = breakpoints;
    bounds.push_back(0);
    bounds.push_back(size);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
    for (int b : bounds) {
        require(b >= 0 && b <= size, cat("block permutation: breakpoint ", b, " out of range"));
    }
    std::mt19937_64 rng(seed);
    for (size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        int lo = bounds[seg];
        int hi = bounds[seg + 1];
        for (int i = hi - lo; i > 1; --i) {
            std::swap(perm[static_cast<size_t>(lo + i - 1)],
                      perm[static_cast<size_t>(lo) + rng() % i]);
        }
    }
    return perm;
}

}  // namespace sopnlab
