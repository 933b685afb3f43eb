#include "sopnlab/generic.hpp"

#include <algorithm>
#include <atomic>
#include <random>

#include "sopnlab/util.hpp"

namespace sopnlab {

namespace {

std::string site_text(const std::vector<int>& site) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < site.size(); ++i) os << (i ? "," : "") << site[i];
    os << "}";
    return os.str();
}

// Strictly increasing subsets of [0, n), smallest size first, lexicographic
// within a size.
std::vector<std::vector<int>> enumerate_sites(int n, int site_size) {
    std::vector<std::vector<int>> out;
    for (int k = 0; k <= site_size; ++k) {
        if (k > n) break;
        std::vector<int> site(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) site[static_cast<size_t>(i)] = i;
        while (true) {
            out.push_back(site);
            int pos = k - 1;
            while (pos >= 0 && site[static_cast<size_t>(pos)] == n - k + pos) --pos;
            if (pos < 0) break;
            ++site[static_cast<size_t>(pos)];
            for (int i = pos + 1; i < k; ++i) {
                site[static_cast<size_t>(i)] = site[static_cast<size_t>(i) - 1] + 1;
            }
        }
    }
    return out;
}

struct AtomSlot {
    int sym;
    std::vector<int> tuple;
};

// Atoms over k + 1 labels (label k = the new element) that mention label k.
// Symmetric symbols contribute each unordered pair once.
std::vector<AtomSlot> site_atom_slots(const Vocabulary& vocab, int k) {
    std::vector<AtomSlot> out;
    for (int sym = 0; sym < vocab.size(); ++sym) {
        const Symbol& symbol = vocab.at(sym);
        std::vector<int> tuple(static_cast<size_t>(symbol.arity), 0);
        while (true) {
            bool mentions = std::find(tuple.begin(), tuple.end(), k) != tuple.end();
            bool normalized = symbol.kind != SymbolKind::Symmetric || tuple[0] <= tuple[1];
            if (mentions && normalized) out.push_back({sym, tuple});
            int pos = symbol.arity - 1;
            while (pos >= 0 && tuple[static_cast<size_t>(pos)] == k) {
                tuple[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++tuple[static_cast<size_t>(pos)];
        }
    }
    return out;
}

Structure adjoin_point(const Structure& base) {
    Structure out = make_structure(base.vocab, base.size + 1);
    for (int sym = 0; sym < base.vocab.size(); ++sym) {
        for (const auto& tuple : base.tables[static_cast<size_t>(sym)]) {
            add_tuple(out, sym, tuple);
        }
    }
    return out;
}

// Freely adjoins the new element with the masked atoms, closes, and checks.
// Returns the closed type over site + new element, or nothing when the trial
// violates the theory or disturbs the site.
std::optional<Structure> close_and_check(const Structure& base, const TheorySpec& t,
                                         const std::vector<int>& site,
                                         const std::vector<AtomSlot>& slots, std::uint32_t mask) {
    int k = static_cast<int>(site.size());
    int w = base.size;
    Structure trial = adjoin_point(base);
    try {
        for (size_t a = 0; a < slots.size(); ++a) {
            if (!((mask >> a) & 1u)) continue;
            std::vector<int> image;
            for (int label : slots[a].tuple) {
                image.push_back(label < k ? site[static_cast<size_t>(label)] : w);
            }
            add_tuple(trial, slots[a].sym, image);
        }
    } catch (const Error&) {
        return std::nullopt;  // functional conflict among the chosen atoms
    }
    if (chase_closure(trial, t)) return std::nullopt;
    if (check_model(trial, t)) return std::nullopt;
    std::vector<int> elems = site;
    elems.push_back(w);
    if (induced_with_order(trial, site) != induced_with_order(base, site)) return std::nullopt;
    return induced_with_order(trial, elems);
}

// Site elements (in extension labels) mentioned by atoms of the chosen mask.
bool mask_supports_site(const std::vector<AtomSlot>& slots, std::uint32_t mask, int k) {
    std::vector<char> hit(static_cast<size_t>(k), 0);
    for (size_t a = 0; a < slots.size(); ++a) {
        if (!((mask >> a) & 1u)) continue;
        for (int label : slots[a].tuple) {
            if (label < k) hit[static_cast<size_t>(label)] = 1;
        }
    }
    return std::find(hit.begin(), hit.end(), 0) == hit.end();
}

template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[static_cast<size_t>(rng() % i)]);
    }
}

// The extension's atoms carried over to concrete elements: site labels map to
// the site, the last label to w.
void add_mapped_atoms(Structure& s, const ExtensionProblem& p, int w) {
    int k = static_cast<int>(p.site.size());
    for (int sym = 0; sym < p.extension.vocab.size(); ++sym) {
        for (const auto& tuple : p.extension.tables[static_cast<size_t>(sym)]) {
            std::vector<int> image;
            for (int label : tuple) {
                image.push_back(label < k ? p.site[static_cast<size_t>(label)] : w);
            }
            add_tuple(s, sym, image);
        }
    }
}

// Tries to realize the problem on an element already present, visiting
// witnesses in seeded order. A witness works when its current atoms over the
// site are a subset of the type and adding the missing ones survives closure
// and the theory check. Growing the universe stays a last resort; witnessing
// in place is what lets the process converge at a fixed size.
bool realize_in_place(Structure& cur, const ExtensionProblem& p, const TheorySpec& t,
                      std::mt19937_64& rng) {
    std::vector<int> witnesses;
    for (int w = 0; w < cur.size; ++w) {
        if (!std::binary_search(p.site.begin(), p.site.end(), w)) witnesses.push_back(w);
    }
    seeded_shuffle(witnesses, rng);
    for (int w : witnesses) {
        std::vector<int> elems = p.site;
        elems.push_back(w);
        Structure present = induced_with_order(cur, elems);
        if (present == p.extension) return true;
        bool subset = true;
        for (int sym = 0; sym < present.vocab.size() && subset; ++sym) {
            const auto& have = present.tables[static_cast<size_t>(sym)];
            const auto& want = p.extension.tables[static_cast<size_t>(sym)];
            subset = std::includes(want.begin(), want.end(), have.begin(), have.end());
        }
        if (!subset) continue;
        Structure trial = cur;
        try {
            add_mapped_atoms(trial, p, w);
        } catch (const Error&) {
            continue;
        }
        if (chase_closure(trial, t)) continue;
        if (check_model(trial, t)) continue;
        if (induced_with_order(trial, elems) != p.extension) continue;
        cur = std::move(trial);
        return true;
    }
    return false;
}

// Adjoins a fresh element carrying exactly the type's atoms. The problem was
// enumerated against cur, so closure and the theory check must go through.
void realize_by_growth(Structure& cur, const ExtensionProblem& p, const TheorySpec& t) {
    Structure grown = adjoin_point(cur);
    add_mapped_atoms(grown, p, cur.size);
    auto conflict = chase_closure(grown, t);
    require(!conflict,
            cat("ec extend: closure conflict while realizing: ", conflict ? *conflict : ""));
    require(!check_model(grown, t).has_value(), "ec extend: violation while realizing");
    cur = std::move(grown);
}

}  // namespace

std::vector<ExtensionProblem> enumerate_extensions(const Structure& base, const TheorySpec& t,
                                                   int site_size) {
    require(base.vocab == t.vocab, "extension enumeration: vocabulary mismatch");
    require(site_size >= 0, "extension enumeration: negative site size");
    if (auto v = check_model(base, t)) {
        throw Error(cat("extension enumeration: base is not a ", t.id, "-model: ", describe(*v)));
    }
    std::vector<ExtensionProblem> out;
    for (const auto& site : enumerate_sites(base.size, site_size)) {
        int k = static_cast<int>(site.size());
        auto slots = site_atom_slots(t.vocab, k);
        require(slots.size() <= 16,
                cat("extension enumeration: site atom space too large (", slots.size(), " atoms)"));
        std::vector<Structure> seen;
        for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
            if (!mask_supports_site(slots, mask, k)) continue;
            auto type = close_and_check(base, t, site, slots, mask);
            if (!type) continue;
            if (std::find(seen.begin(), seen.end(), *type) != seen.end()) continue;
            seen.push_back(*type);
            out.push_back({base, site, *type});
        }
    }
    return out;
}

bool problem_realized(const Structure& s, const ExtensionProblem& p) {
    for (int e : p.site) {
        require(e >= 0 && e < s.size, cat("realization check: site element ", e, " out of range"));
    }
    for (int w = 0; w < s.size; ++w) {
        if (std::binary_search(p.site.begin(), p.site.end(), w)) continue;
        std::vector<int> elems = p.site;
        elems.push_back(w);
        if (induced_with_order(s, elems) == p.extension) return true;
    }
    return false;
}

CompletenessReport verify_extension_complete(const Structure& s, const TheorySpec& t,
                                             int site_size) {
    std::vector<ExtensionProblem> problems = enumerate_extensions(s, t, site_size);
    CompletenessReport rep;
    rep.problems = static_cast<int>(problems.size());
    std::atomic<int> first_missing{rep.problems};
    std::atomic<int> missing{0};
    parallel_for(rep.problems, [&](int i) {
        if (problem_realized(s, problems[static_cast<size_t>(i)])) return;
        missing.fetch_add(1);
        int cur = first_missing.load(std::memory_order_relaxed);
        while (i < cur && !first_missing.compare_exchange_weak(cur, i)) {
        }
    });
    rep.unrealized = missing.load();
    rep.complete = rep.unrealized == 0;
    if (rep.complete) {
        rep.detail = cat(site_size, "-extension-complete (", rep.problems, " problems)");
    } else {
        const auto& miss = problems[static_cast<size_t>(first_missing.load())];
        rep.detail = cat(rep.unrealized, " of ", rep.problems,
                         " problems unrealized; first over site ", site_text(miss.site));
    }
    return rep;
}

EcResult ec_extend(const Structure& start, const TheorySpec& t, int site_size, int target_size,
                   std::uint64_t seed) {
    require(start.vocab == t.vocab, "ec extend: vocabulary mismatch");
    require(target_size >= start.size, "ec extend: target below start size");
    if (auto v = check_model(start, t)) {
        throw Error(cat("ec extend: start is not a ", t.id, "-model: ", describe(*v)));
    }
    std::mt19937_64 rng(seed);
    Structure cur = start;
    int steps = 0;
    std::uint64_t pointer = 0;
    std::string stall;
    while (true) {
        std::vector<ExtensionProblem> problems = enumerate_extensions(cur, t, site_size);
        std::vector<int> outstanding;
        for (size_t i = 0; i < problems.size(); ++i) {
            if (!problem_realized(cur, problems[i])) outstanding.push_back(static_cast<int>(i));
        }
        if (outstanding.empty()) {
            if (cur.size >= target_size) break;
            int pad = -1;
            for (size_t i = 0; i < problems.size(); ++i) {
                if (problems[i].site.empty()) {
                    pad = static_cast<int>(i);
                    break;
                }
            }
            if (pad < 0) {
                stall = "no empty-site type to pad with";
                break;
            }
            realize_by_growth(cur, problems[static_cast<size_t>(pad)], t);
            ++steps;
            continue;
        }
        // One sweep over the outstanding problems, round-robin start. Earlier
        // fixes can realize or break later ones, so each is re-checked at its
        // turn.
        bool progress = false;
        size_t off = pointer % outstanding.size();
        ++pointer;
        for (size_t j = 0; j < outstanding.size(); ++j) {
            int idx = outstanding[(off + j) % outstanding.size()];
            const ExtensionProblem& q = problems[static_cast<size_t>(idx)];
            if (problem_realized(cur, q)) continue;
            if (realize_in_place(cur, q, t, rng)) {
                progress = true;
                ++steps;
            }
        }
        // Grow only off a clean enumeration: in-place fixes above may have
        // invalidated the admissibility the problem list was computed with.
        if (!progress && cur.size < target_size) {
            int idx = outstanding[off];
            realize_by_growth(cur, problems[static_cast<size_t>(idx)], t);
            progress = true;
            ++steps;
        }
        if (!progress) break;  // at the size cap with no witness to add
    }
    CompletenessReport rep = verify_extension_complete(cur, t, site_size);
    EcResult out;
    out.structure = cur;
    out.complete = rep.complete;
    out.steps = steps;
    if (!stall.empty()) {
        out.detail = cat("stopped early: ", stall);
    } else if (rep.complete) {
        out.detail = cat(rep.detail, " after ", steps, " additions");
    } else {
        out.detail = cat("size budget reached; ", rep.detail);
    }
    return out;
}

}  // namespace sopnlab
