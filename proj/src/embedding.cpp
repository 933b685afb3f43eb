#include "sopnlab/embedding.hpp"

#include <algorithm>

#include "sopnlab/util.hpp"

namespace sopnlab {

bool is_embedding(const Structure& pattern, const Structure& host, const Embedding& e,
                  EmbedMode mode) {
    if (pattern.vocab != host.vocab) return false;
    if (static_cast<int>(e.map.size()) != pattern.size) return false;
    std::vector<bool> used(static_cast<size_t>(host.size), false);
    for (int h : e.map) {
        if (h < 0 || h >= host.size || used[static_cast<size_t>(h)]) return false;
        used[static_cast<size_t>(h)] = true;
    }
    std::vector<int> image;
    for (int sym = 0; sym < pattern.vocab.size(); ++sym) {
        for (const auto& tuple : pattern.tables[static_cast<size_t>(sym)]) {
            image.clear();
            for (int v : tuple) image.push_back(e.map[static_cast<size_t>(v)]);
            if (!has_tuple(host, sym, image)) return false;
        }
    }
    if (mode == EmbedMode::Induced) {
        // Host tuples that live entirely on the image must pull back.
        std::vector<int> back(static_cast<size_t>(host.size), -1);
        for (int v = 0; v < pattern.size; ++v) back[static_cast<size_t>(e.map[static_cast<size_t>(v)])] = v;
        std::vector<int> pre;
        for (int sym = 0; sym < host.vocab.size(); ++sym) {
            for (const auto& tuple : host.tables[static_cast<size_t>(sym)]) {
                pre.clear();
                bool on_image = true;
                for (int h : tuple) {
                    int v = back[static_cast<size_t>(h)];
                    if (v < 0) {
                        on_image = false;
                        break;
                    }
                    pre.push_back(v);
                }
                if (on_image && !has_tuple(pattern, sym, pre)) return false;
            }
        }
    }
    return true;
}

namespace {

struct Searcher {
    const Structure& pattern;
    const Structure& host;
    EmbedMode mode;
    int limit;
    std::vector<int> order;       // pattern vertices, search order
    std::vector<int> asg;         // pattern vertex -> host element or -1
    std::vector<bool> used;       // host elements taken
    std::vector<std::vector<std::pair<int, const std::vector<int>*>>> touching;
    std::vector<Embedding> out;

    Searcher(const Structure& p, const Structure& h, EmbedMode m, int lim)
        : pattern(p), host(h), mode(m), limit(lim) {
        // Degree-based candidate ordering: most-constrained pattern vertices
        // first, ties by index.
        std::vector<int> degree(static_cast<size_t>(p.size), 0);
        touching.resize(static_cast<size_t>(p.size));
        for (int sym = 0; sym < p.vocab.size(); ++sym) {
            for (const auto& tuple : p.tables[static_cast<size_t>(sym)]) {
                for (int v : tuple) ++degree[static_cast<size_t>(v)];
                for (int v : tuple) {
                    auto& list = touching[static_cast<size_t>(v)];
                    if (list.empty() || list.back().second != &tuple) list.emplace_back(sym, &tuple);
                }
            }
        }
        order.resize(static_cast<size_t>(p.size));
        for (int v = 0; v < p.size; ++v) order[static_cast<size_t>(v)] = v;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return degree[static_cast<size_t>(a)] > degree[static_cast<size_t>(b)];
        });
        asg.assign(static_cast<size_t>(p.size), -1);
        used.assign(static_cast<size_t>(h.size), false);
    }

    bool consistent(int v) {
        std::vector<int> image;
        for (const auto& [sym, tuple] : touching[static_cast<size_t>(v)]) {
            image.clear();
            bool ready = true;
            for (int u : *tuple) {
                int h = asg[static_cast<size_t>(u)];
                if (h < 0) {
                    ready = false;
                    break;
                }
                image.push_back(h);
            }
            if (ready && !has_tuple(host, sym, image)) return false;
        }
        if (mode == EmbedMode::Induced) {
            // Every tuple over the assigned vertices that mentions v must agree
            // between pattern and host.
            std::vector<int> assigned;
            for (int u = 0; u < pattern.size; ++u) {
                if (asg[static_cast<size_t>(u)] >= 0) assigned.push_back(u);
            }
            for (int sym = 0; sym < pattern.vocab.size(); ++sym) {
                int arity = pattern.vocab.at(sym).arity;
                std::vector<int> pick(static_cast<size_t>(arity), 0);
                while (true) {
                    std::vector<int> pt, ht;
                    bool mentions = false;
                    for (int pos = 0; pos < arity; ++pos) {
                        int u = assigned[static_cast<size_t>(pick[static_cast<size_t>(pos)])];
                        if (u == v) mentions = true;
                        pt.push_back(u);
                        ht.push_back(asg[static_cast<size_t>(u)]);
                    }
                    if (mentions && has_tuple(pattern, sym, pt) != has_tuple(host, sym, ht)) return false;
                    int pos = arity - 1;
                    while (pos >= 0 && pick[static_cast<size_t>(pos)] + 1 == static_cast<int>(assigned.size())) {
                        pick[static_cast<size_t>(pos)] = 0;
                        --pos;
                    }
                    if (pos < 0) break;
                    ++pick[static_cast<size_t>(pos)];
                }
            }
        }
        return true;
    }

    bool run(size_t depth) {
        if (limit >= 0 && static_cast<int>(out.size()) >= limit) return true;
        if (depth == order.size()) {
            out.push_back(Embedding{asg});
            return limit >= 0 && static_cast<int>(out.size()) >= limit;
        }
        int v = order[depth];
        for (int h = 0; h < host.size; ++h) {
            if (used[static_cast<size_t>(h)]) continue;
            asg[static_cast<size_t>(v)] = h;
            used[static_cast<size_t>(h)] = true;
            if (consistent(v) && run(depth + 1)) {
                used[static_cast<size_t>(h)] = false;
                asg[static_cast<size_t>(v)] = -1;
                return true;
            }
            used[static_cast<size_t>(h)] = false;
            asg[static_cast<size_t>(v)] = -1;
        }
        return false;
    }
};

}  // namespace

std::vector<Embedding> find_embeddings(const Structure& pattern, const Structure& host,
                                       EmbedMode mode, int limit) {
    require(pattern.vocab == host.vocab, "find_embeddings: vocabulary mismatch");
    if (pattern.size > host.size) return {};
    if (pattern.size == 0) return {Embedding{}};
    Searcher searcher(pattern, host, mode, limit);
    searcher.run(0);
    if (limit < 0) std::sort(searcher.out.begin(), searcher.out.end());
    return std::move(searcher.out);
}

std::optional<Embedding> find_one_embedding(const Structure& pattern, const Structure& host,
                                            EmbedMode mode) {
    auto found = find_embeddings(pattern, host, mode, 1);
    if (found.empty()) return std::nullopt;
    return found.front();
}

std::optional<Embedding> are_isomorphic(const Structure& a, const Structure& b) {
    if (a.vocab != b.vocab || a.size != b.size) return std::nullopt;
    for (int sym = 0; sym < a.vocab.size(); ++sym) {
        if (a.tables[static_cast<size_t>(sym)].size() != b.tables[static_cast<size_t>(sym)].size())
            return std::nullopt;
    }
    return find_one_embedding(a, b, EmbedMode::Induced);
}

Embedding compose(const Embedding& f, const Embedding& g) {
    Embedding out;
    out.map.reserve(f.map.size());
    for (int mid : f.map) {
        require(mid >= 0 && mid < static_cast<int>(g.map.size()), "compose: range mismatch");
        out.map.push_back(g.map[static_cast<size_t>(mid)]);
    }
    return out;
}

}  // namespace sopnlab
