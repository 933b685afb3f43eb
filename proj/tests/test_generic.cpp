#include <algorithm>

#include "doctest.h"
#include "sopnlab/embedding.hpp"
#include "sopnlab/generic.hpp"
#include "sopnlab/theory.hpp"
#include "sopnlab/util.hpp"

using namespace sopnlab;

namespace {

int count_over_site_size(const std::vector<ExtensionProblem>& problems, size_t k) {
    int n = 0;
    for (const auto& p : problems) {
        if (p.site.size() == k) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("a single edge admits exactly three one-point extension types") {
    TheorySpec t = theory_spec("trf");
    Structure edge = make_structure(t.vocab, 2, {{"E", {0, 1}}});
    std::vector<ExtensionProblem> problems = enumerate_extensions(edge, t, 2);
    REQUIRE(problems.size() == 3);
    // isolated point, neighbor of 0, neighbor of 1; joining both closes a
    // triangle and is not admissible, so no two-point site survives
    CHECK(count_over_site_size(problems, 0) == 1);
    CHECK(count_over_site_size(problems, 1) == 2);
    CHECK(count_over_site_size(problems, 2) == 0);
    for (const auto& p : problems) {
        CHECK(p.base == edge);
        CHECK(p.extension.size == int(p.site.size()) + 1);
        CHECK(std::is_sorted(p.site.begin(), p.site.end()));
    }
}

TEST_CASE("a single vertex under short-cycle-freedom has in, out, and isolated types") {
    TheorySpec t = theory_spec("dcf:3");
    Structure point = make_structure(t.vocab, 1);
    std::vector<ExtensionProblem> problems = enumerate_extensions(point, t, 2);
    REQUIRE(problems.size() == 3);
    CHECK(count_over_site_size(problems, 0) == 1);
    CHECK(count_over_site_size(problems, 1) == 2);
    // the two one-site types are the incoming and outgoing edge
    std::vector<std::vector<std::vector<int>>> edges;
    for (const auto& p : problems) {
        if (p.site.size() == 1) edges.push_back(p.extension.tables[0]);
    }
    std::sort(edges.begin(), edges.end());
    CHECK(edges[0] == std::vector<std::vector<int>>{{0, 1}});
    CHECK(edges[1] == std::vector<std::vector<int>>{{1, 0}});
}

TEST_CASE("extension enumeration validates its inputs") {
    TheorySpec t = theory_spec("trf");
    Structure tri = make_structure(t.vocab, 3, {{"E", {0, 1}}, {"E", {1, 2}}, {"E", {0, 2}}});
    CHECK_THROWS_AS(enumerate_extensions(tri, t, 1), Error);  // base not a model

    // the layered vocabulary has six binary symbols, far past the atom budget
    TheorySpec ord = theory_spec("ord:2");
    CHECK_THROWS_AS(enumerate_extensions(linear_order_model(2, 2), ord, 1), Error);
    CHECK(enumerate_extensions(linear_order_model(2, 2), ord, 0).size() <= 1);
}

TEST_CASE("problem_realized looks for an exact induced copy") {
    TheorySpec t = theory_spec("trf");
    Structure edge = make_structure(t.vocab, 2, {{"E", {0, 1}}});
    std::vector<ExtensionProblem> problems = enumerate_extensions(edge, t, 2);
    // the edge realizes all three of its own types: each endpoint is the
    // other's neighbor, and anything at all witnesses the isolated type
    for (const auto& p : problems) CHECK(problem_realized(edge, p));

    // with the edge deleted only the isolated type survives
    Structure blank = make_structure(t.vocab, 2);
    int realized = 0;
    for (const auto& p : problems) {
        if (problem_realized(blank, p)) ++realized;
    }
    CHECK(realized == 1);

    Structure point = make_structure(t.vocab, 1);
    for (const auto& p : problems) {
        if (p.site.size() == 1 && p.site[0] == 1) {
            CHECK_THROWS_AS(problem_realized(point, p), Error);
        }
    }
}

TEST_CASE("completeness verification counts what is missing") {
    TheorySpec t = theory_spec("trf");
    Structure lonely = make_structure(t.vocab, 3);
    CompletenessReport rep = verify_extension_complete(lonely, t, 1);
    CHECK_FALSE(rep.complete);
    CHECK(rep.problems == 4);    // isolated + one neighbor type per point
    CHECK(rep.unrealized == 3);  // no point has any neighbor
    CHECK(rep.detail.find("unrealized") != std::string::npos);
}

TEST_CASE("closing over the empty site just pads with isolated points") {
    TheorySpec t = theory_spec("trf");
    EcResult r = ec_extend(make_structure(t.vocab, 0), t, 0, 5, 11);
    CHECK(r.complete);
    CHECK(r.structure.size == 5);
    CHECK(r.structure.tables[0].empty());
    CHECK(verify_extension_complete(r.structure, t, 0).complete);
}

TEST_CASE("triangle-free closure at desk scale is complete and frozen") {
    TheorySpec t = theory_spec("trf");
    EcResult r = ec_extend(make_structure(t.vocab, 0), t, 2, 12, 7);
    CHECK(r.complete);
    CHECK(r.structure.size == 12);
    CHECK(r.steps == 22);
    CHECK(r.detail == "2-extension-complete (68 problems) after 22 additions");
    CHECK_FALSE(check_model(r.structure, t).has_value());

    // the verdict is reproducible from the structure alone
    CompletenessReport rep = verify_extension_complete(r.structure, t, 2);
    CHECK(rep.complete);
    CHECK(rep.problems == 68);
    CHECK(rep.unrealized == 0);
}

TEST_CASE("directed closure realizes both directions everywhere") {
    // over one-point sites every vertex needs an in- and an out-neighbor;
    // two-point sites spawn problems faster than a small universe can answer,
    // so the builder honestly reports the shortfall there
    TheorySpec t = theory_spec("dcf:3");
    EcResult r = ec_extend(make_structure(t.vocab, 0), t, 1, 10, 1);
    CHECK(r.complete);
    CHECK(r.structure.size == 10);
    CHECK(r.steps == 23);
    CHECK(r.detail == "1-extension-complete (21 problems) after 23 additions");
    CHECK_FALSE(check_model(r.structure, t).has_value());
    CHECK(verify_extension_complete(r.structure, t, 1).complete);

    EcResult hard = ec_extend(make_structure(t.vocab, 0), t, 2, 12, 1);
    CHECK_FALSE(hard.complete);
    CHECK(hard.detail.find("size budget reached") != std::string::npos);
    CHECK(verify_extension_complete(hard.structure, t, 2).unrealized > 0);
}

TEST_CASE("closure is deterministic in the seed and keeps the start's tuples") {
    TheorySpec t = theory_spec("trf");
    Structure start = make_structure(t.vocab, 3, {{"E", {0, 1}}});
    EcResult a = ec_extend(start, t, 2, 10, 5);
    EcResult b = ec_extend(start, t, 2, 10, 5);
    CHECK(a.structure == b.structure);
    CHECK(a.steps == b.steps);
    CHECK(a.detail == b.detail);
    // realizations may wire new edges among old points, but never remove any
    Embedding id{{0, 1, 2}};
    CHECK(is_embedding(start, a.structure, id, EmbedMode::Weak));
}

TEST_CASE("a full universe cannot grow, only rewire") {
    TheorySpec t = theory_spec("trf");
    Structure start = make_structure(t.vocab, 4, {{"E", {0, 1}}});
    EcResult r = ec_extend(start, t, 1, 4, 3);
    CHECK(r.structure.size == 4);
    // over one-point sites each vertex needs a neighbor; in-place wiring can
    // deliver that without new points
    CHECK(r.complete);
    for (int x = 0; x < 4; ++x) {
        bool has_neighbor = false;
        for (const auto& e : r.structure.tables[0]) has_neighbor |= (e[0] == x);
        CHECK(has_neighbor);
    }
}

TEST_CASE("closure rejects malformed requests") {
    TheorySpec t = theory_spec("trf");
    Structure tri = make_structure(t.vocab, 3, {{"E", {0, 1}}, {"E", {1, 2}}, {"E", {0, 2}}});
    CHECK_THROWS_AS(ec_extend(tri, t, 2, 10, 0), Error);  // start violates the theory
    CHECK_THROWS_AS(ec_extend(make_structure(t.vocab, 5), t, 2, 4, 0), Error);  // too big
    CHECK_THROWS_AS(ec_extend(make_structure(t.vocab, 0), t, -1, 4, 0), Error);
}
