#include <set>

#include "doctest.h"
#include "sopnlab/embedding.hpp"
#include "sopnlab/formula.hpp"
#include "sopnlab/invariants.hpp"
#include "sopnlab/structure.hpp"
#include "sopnlab/util.hpp"

using namespace sopnlab;

namespace {

Structure identity_order(int n) {
    Vocabulary v = parse_vocab_spec("lt/2");
    Structure s = make_structure(v, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) add_tuple(s, 0, {i, j});
    }
    return s;
}

const char* kCanonicalCuts = "cut 9: 2 5 8 acc: 2\n";

}  // namespace

TEST_CASE("cut systems round-trip through their text form") {
    CutSystem cuts = parse_cuts(kCanonicalCuts);
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0] == CutEntry{9, {2, 5, 8}, {2}});
    CHECK(print_cuts(cuts) == kCanonicalCuts);

    CutSystem two = parse_cuts("# header comment\ncut 4: 1\n\ncut 9: 2 5 8 acc: 2 5\n");
    REQUIRE(two.size() == 2);
    CHECK(two[0] == CutEntry{4, {1}, {}});
    CHECK(two[1] == CutEntry{9, {2, 5, 8}, {2, 5}});
    CHECK(parse_cuts(print_cuts(two)) == two);

    // a cut may carry no points at all
    CutSystem bare = parse_cuts("cut 3:\n");
    CHECK(bare[0] == CutEntry{3, {}, {}});
}

TEST_CASE("cut parsing rejects malformed lines") {
    CHECK_THROWS_WITH_AS(parse_cuts("slice 9: 2\n"), "cut line 1: expected 'cut'", Error);
    CHECK_THROWS_WITH_AS(parse_cuts("cut x: 2\n"), "cut line 1: bad delta", Error);
    CHECK_THROWS_WITH_AS(parse_cuts("cut 9: 2 q\n"), "cut line 1: bad point 'q'", Error);
    CHECK_THROWS_WITH_AS(parse_cuts("cut 9: 2 acc: 2 acc: 2\n"),
                         "cut line 1: duplicate acc marker", Error);
    CHECK_THROWS_WITH_AS(parse_cuts("cut 9: 2 acc:\n"), "cut line 1: empty acc list", Error);
    CHECK_THROWS_AS(parse_cuts("cut 9: 5 2\n"), Error);         // points must increase
    CHECK_THROWS_AS(parse_cuts("cut 9: 2 2\n"), Error);         // strictly
    CHECK_THROWS_AS(parse_cuts("cut 9: 9\n"), Error);           // point below delta
    CHECK_THROWS_AS(parse_cuts("cut 9: 2 acc: 3\n"), Error);    // acc must be a point
    CHECK_THROWS_AS(parse_cuts("cut 9: 2\ncut 4: 1\n"), Error); // deltas must increase
}

TEST_CASE("nacc_points drops exactly the annotated points") {
    CutEntry cut{9, {2, 5, 8}, {2}};
    CHECK(nacc_points(cut) == std::vector<int>{5, 8});
    CHECK(nacc_points(CutEntry{9, {2, 5, 8}, {}}) == std::vector<int>{2, 5, 8});
    CHECK(nacc_points(CutEntry{9, {2, 5, 8}, {2, 5, 8}}).empty());
}

TEST_CASE("order invariant of the identity order is frozen") {
    Structure ord = identity_order(10);
    CutSystem cuts = parse_cuts(kCanonicalCuts);
    // an unannotated point alpha lands in the set of x exactly when the gap
    // between the previous point and alpha leaves room for y < x < z with the
    // lower part exhausted: here the single slot after each predecessor
    for (int x = 0; x < 10; ++x) {
        std::set<int> expect;
        if (x == 3) expect = {5};
        if (x == 6) expect = {8};
        CHECK(order_invariant(ord, cuts, x) == expect);
    }
    CHECK_THROWS_AS(order_invariant(ord, cuts, 10), Error);
    CHECK_THROWS_AS(order_invariant(ord, cuts, -1), Error);
}

TEST_CASE("model invariant of the identity order under lt is frozen") {
    Structure ord = identity_order(10);
    Formula phi = parse_formula("lt(x,y)", ord.vocab);
    CutSystem cuts = parse_cuts(kCanonicalCuts);
    for (int x = 0; x < 10; ++x) {
        std::set<int> expect;
        if (x >= 1 && x <= 3) expect = {5};
        if (x >= 4 && x <= 6) expect = {8};
        CHECK(model_invariant(ord, phi, cuts, x) == expect);
    }

    // without the annotation the point 2 has no cut point below it, the inner
    // guard is vacuous, and 2 enters every element's set through one reading
    // of phi or the other
    CutSystem noacc = parse_cuts("cut 9: 2 5 8\n");
    for (int x = 0; x < 10; ++x) {
        std::set<int> expect = {2};
        if (x >= 1 && x <= 3) expect.insert(5);
        if (x >= 4 && x <= 6) expect.insert(8);
        CHECK(model_invariant(ord, phi, noacc, x) == expect);
    }
}

TEST_CASE("reports collect per-element sets and their image") {
    Structure ord = identity_order(10);
    Formula phi = parse_formula("lt(x,y)", ord.vocab);
    CutSystem cuts = parse_cuts(kCanonicalCuts);

    InvariantReport onv = order_invariant_report(ord, cuts);
    InvariantReport mnv = model_invariant_report(ord, phi, cuts);
    CHECK(onv.per_element.size() == 10);
    CHECK(mnv.per_element.size() == 10);
    std::set<std::set<int>> oimg, mimg;
    for (int x = 0; x < 10; ++x) {
        CHECK(onv.per_element.at(x) == order_invariant(ord, cuts, x));
        CHECK(mnv.per_element.at(x) == model_invariant(ord, phi, cuts, x));
        oimg.insert(onv.per_element.at(x));
        mimg.insert(mnv.per_element.at(x));
    }
    CHECK(onv.aggregate == oimg);
    CHECK(mnv.aggregate == mimg);
    std::set<std::set<int>> expect = {{}, {5}, {8}};
    CHECK(onv.aggregate == expect);
    CHECK(mnv.aggregate == expect);
}

TEST_CASE("the order argument must really be a strict linear order") {
    CutSystem cuts = parse_cuts("cut 3: 1\n");
    Vocabulary v = parse_vocab_spec("lt/2");

    Structure reflexive = identity_order(4);
    add_tuple(reflexive, 0, {2, 2});
    CHECK_THROWS_WITH_AS(order_invariant(reflexive, cuts, 0),
                         "not a linear order: reflexive at 2", Error);

    Structure partial = make_structure(v, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (i == 1 && j == 2) continue;  // leave one pair incomparable
            add_tuple(partial, 0, {i, j});
        }
    }
    CHECK_THROWS_AS(order_invariant(partial, cuts, 0), Error);

    Structure cyclic = make_structure(v, 3, {{"lt", {0, 1}}, {"lt", {1, 2}}, {"lt", {2, 0}}});
    CHECK_THROWS_AS(order_invariant(cyclic, cuts, 0), Error);  // intransitive

    Structure two_rels = make_structure(parse_vocab_spec("lt/2,e/1"), 4);
    CHECK_THROWS_AS(order_invariant(two_rels, cuts, 0), Error);
    CHECK_THROWS_AS(order_invariant(make_structure(parse_vocab_spec("p/1"), 4), cuts, 0), Error);
}

TEST_CASE("model invariant checks its formula against the structure") {
    Structure ord = identity_order(6);
    CutSystem cuts = parse_cuts("cut 5: 2\n");

    Formula wrong_vocab = parse_formula("E(x,y)", parse_vocab_spec("E/2:symmetric"));
    CHECK_THROWS_WITH_AS(model_invariant(ord, wrong_vocab, cuts, 0),
                         "model invariant: formula vocabulary mismatch", Error);

    Formula three = parse_formula("lt(x,y) & lt(y,z)", ord.vocab);
    CHECK_THROWS_AS(model_invariant(ord, three, cuts, 0), Error);  // not binary

    Formula wide = parse_formula("lt(x0,y0) & lt(x1,y1)", ord.vocab);
    wide.split = parse_split("x0,x1;y0,y1");
    CHECK_THROWS_AS(model_invariant(ord, wide, cuts, 0), Error);  // split halves too wide

    // a split singles out the pair even when extra quantified variables appear
    Formula guarded = parse_formula("exists u . lt(x,u) & lt(u,y)", ord.vocab);
    guarded.split = parse_split("x;y");
    CHECK_NOTHROW(model_invariant(ord, guarded, cuts, 3));

    CHECK_THROWS_AS(model_invariant(ord, parse_formula("lt(x,y)", ord.vocab), cuts, 6), Error);
}

TEST_CASE("cuts are validated against the universe they apply to") {
    Structure ord = identity_order(5);
    CHECK_THROWS_AS(order_invariant(ord, parse_cuts("cut 9: 2\n"), 0), Error);
    CHECK_NOTHROW(order_invariant(ord, parse_cuts("cut 5: 2\n"), 0));
}

TEST_CASE("breakpoints merge deltas and points") {
    CutSystem cuts = parse_cuts("cut 4: 1\ncut 9: 2 5 8 acc: 2\n");
    CHECK(block_breakpoints(cuts) == std::vector<int>{1, 2, 4, 5, 8, 9});
    CHECK(block_breakpoints({}).empty());
}

TEST_CASE("block permutations respect every initial segment") {
    std::vector<int> bps = block_breakpoints(parse_cuts(kCanonicalCuts));
    CHECK(bps == std::vector<int>{2, 5, 8, 9});
    std::set<std::vector<int>> distinct;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::vector<int> pi = block_permutation(10, bps, seed);
        REQUIRE(pi.size() == 10);
        std::vector<bool> hit(10, false);
        for (int y : pi) {
            REQUIRE((y >= 0 && y < 10));
            CHECK_FALSE(hit[size_t(y)]);
            hit[size_t(y)] = true;
        }
        for (int p : bps) {
            for (int x = 0; x < p; ++x) CHECK(pi[size_t(x)] < p);
        }
        CHECK(block_permutation(10, bps, seed) == pi);  // seed-deterministic
        distinct.insert(pi);
    }
    CHECK(distinct.size() > 1);

    CHECK_THROWS_AS(block_permutation(-1, {}, 0), Error);
    CHECK_THROWS_AS(block_permutation(4, {5}, 0), Error);
}

TEST_CASE("conjugating by a block permutation fixes both aggregates") {
    Structure ord = identity_order(10);
    Formula phi = parse_formula("lt(x,y)", ord.vocab);
    CutSystem cuts = parse_cuts(kCanonicalCuts);
    std::vector<int> bps = block_breakpoints(cuts);

    InvariantReport base_o = order_invariant_report(ord, cuts);
    InvariantReport base_m = model_invariant_report(ord, phi, cuts);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::vector<int> pi = block_permutation(10, bps, seed);
        Structure conj = apply_permutation(ord, pi);
        InvariantReport o = order_invariant_report(conj, cuts);
        InvariantReport m = model_invariant_report(conj, phi, cuts);
        CHECK(o.aggregate == base_o.aggregate);
        CHECK(m.aggregate == base_m.aggregate);
        // the per-element sets travel along the permutation
        for (int x = 0; x < 10; ++x) {
            CHECK(o.per_element.at(pi[size_t(x)]) == base_o.per_element.at(x));
            CHECK(m.per_element.at(pi[size_t(x)]) == base_m.per_element.at(x));
        }
    }
}

TEST_CASE("the order aggregate sits inside the model aggregate here") {
    Structure ord = identity_order(10);
    Formula phi = parse_formula("lt(x,y)", ord.vocab);
    CutSystem cuts = parse_cuts(kCanonicalCuts);
    InvariantReport o = order_invariant_report(ord, cuts);
    InvariantReport m = model_invariant_report(ord, phi, cuts);
    for (const auto& s : o.aggregate) CHECK(m.aggregate.count(s) == 1);
}

TEST_CASE("membership survives new cut points outside the critical gap") {
    // alpha stays in or out of an element's set when a fresh point lands
    // outside the open interval between alpha's predecessor and alpha; a
    // point inside that interval can evict alpha (7 next to 8 leaves no room
    // below 8), so unrestricted point-addition is not monotone
    Structure ord = identity_order(10);
    CutSystem base = parse_cuts(kCanonicalCuts);

    auto with_point = [](int q) {
        std::vector<int> pts = {2, 5, 8};
        pts.insert(std::lower_bound(pts.begin(), pts.end(), q), q);
        CutSystem cuts(1);
        cuts[0] = CutEntry{9, pts, {2}};
        return cuts;
    };

    for (int q : {0, 1, 3, 4}) {  // outside (5, 8): membership of 8 unchanged
        CutSystem grown = with_point(q);
        for (int x = 0; x < 10; ++x) {
            bool before = order_invariant(ord, base, x).count(8) == 1;
            bool after = order_invariant(ord, grown, x).count(8) == 1;
            CHECK(before == after);
        }
    }
    for (int q : {0, 1, 6, 7}) {  // outside (2, 5): membership of 5 unchanged
        CutSystem grown = with_point(q);
        for (int x = 0; x < 10; ++x) {
            bool before = order_invariant(ord, base, x).count(5) == 1;
            bool after = order_invariant(ord, grown, x).count(5) == 1;
            CHECK(before == after);
        }
    }

    // the documented counterexample: 7 inside (5, 8) evicts 8 from inv(6)
    CHECK(order_invariant(ord, base, 6) == std::set<int>{8});
    CHECK(order_invariant(ord, with_point(7), 6).count(8) == 0);
}
