#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flute/family.hpp"
#include "flute/geometry.hpp"
#include "flute/shift.hpp"

#include <random>

using namespace flute;

namespace {

Code arc(const char* s) { return parse_code(s, Flavor::Arc); }
Code seg(const char* s) { return parse_code(s, Flavor::Segment); }

const char* kAlpha1 = "Ps 0o 1o 2o 2u 1o 0o 0u 1o 2u 2o 1o 0o Ps";

const char* kAlpha2 =
    "Ps 0o 1o 2o 2u 1o 0o Pu -1u -1o Pu 0o 1o 2o 2u 1o 0o Pu -1o -1u Pu 0o 1o 2u 2o 1o 0o "
    "Pu Po 0o 1o 2o 3o 3u 2o 1o 0o Po Pu 0o 1o 2o 2u 1o 0o Pu -1u -1o Pu 0o 1o 2u 2o 1o 0o "
    "Pu -1o -1u Pu 0o 1o 2u 2o 1o 0o Pu Po 0o 1o 2o 2u 1o 0o 0u 1o 2u 2o 1o 0o Po Pu 0o 1o "
    "2o 2u 1o 0o Pu -1u -1o Pu 0o 1o 2o 2u 1o 0o Pu -1o -1u Pu 0o 1o 2u 2o 1o 0o Pu Po 0o "
    "1o 2o 3u 3o 2o 1o 0o Po Pu 0o 1o 2o 2u 1o 0o Pu -1u -1o Pu 0o 1o 2u 2o 1o 0o Pu -1o "
    "-1u Pu 0o 1o 2u 2o 1o 0o Ps";

} // namespace

TEST_CASE("shift spec validation and index map") {
    auto h1 = family_shift(FamilyKind::H1);
    CHECK(h1.direction() == Direction::Right);
    CHECK(h1.n1() == -1);
    CHECK(h1.n2() == 1);
    CHECK(h1.boundary_side(Index::P()) == Kind::Under);
    CHECK(h1.boundary_side(Index::of(0)) == Kind::Under);

    CHECK(h1.shift_index(Index::of(-1)) == Index::of(1));
    CHECK(h1.shift_index(Index::of(5)) == Index::of(6));
    CHECK(h1.shift_index(Index::of(-3)) == Index::of(-2));

    auto h2 = family_shift(FamilyKind::H2, 1);
    CHECK(h2.direction() == Direction::Left);
    CHECK(h2.n1() == 2);
    CHECK(h2.n2() == -2);
    CHECK(h2.boundary_side(Index::of(-1)) == Kind::Under);
    CHECK(h2.boundary_side(Index::P()) == Kind::Over);
    CHECK(h2.boundary_side(Index::of(0)) == Kind::Over);
    CHECK(h2.boundary_side(Index::of(1)) == Kind::Under);
    CHECK(h2.shift_index(Index::of(2)) == Index::of(-2));
    CHECK(h2.shift_index(Index::of(3)) == Index::of(2));

    auto h3 = family_shift(FamilyKind::H3, 2);
    CHECK(h3.direction() == Direction::Right);
    for (int j = -2; j <= 2; ++j) CHECK(h3.boundary_side(Index::of(j)) == Kind::Over);
    CHECK(h3.boundary_side(Index::P()) == Kind::Under);

    CHECK_THROWS_AS(make_shift(Direction::Right, 1, -1, {}), shift_error);
    CHECK_THROWS_AS(make_shift(Direction::Right, 2, 5,
                               {{Index::of(3), Kind::Over}, {Index::of(4), Kind::Over}}),
                    shift_error);
    CHECK_THROWS_AS(make_shift(Direction::Right, -1, 1, {{Index::P(), Kind::Under}}),
                    shift_error);
}

TEST_CASE("boundary segments") {
    auto h1 = family_shift(FamilyKind::H1);
    CHECK(format_code(h1.boundary_segment(Index::P(), Index::of(0))) == "Pu 0u");
    auto h3 = family_shift(FamilyKind::H3, 1);
    CHECK(format_code(h3.boundary_segment(Index::of(-1), Index::of(1))) == "-1o Pu 0o 1o");
    auto h2 = family_shift(FamilyKind::H2, 2);
    CHECK(format_code(h2.boundary_segment(Index::of(-2), Index::of(2))) ==
          "-2o -1u Po 0o 1u 2o");
}

TEST_CASE("worked image: fixed arcs") {
    Code a0 = arc("Ps 0o 0u Ps");
    CHECK(apply_shift(family_shift(FamilyKind::H1), a0) == a0);
    CHECK(apply_shift(family_shift(FamilyKind::H2, 1), a0) == a0);
}

TEST_CASE("worked image: double crossing produces the first orbit arc") {
    Code a0 = arc("Ps 0o 0u Ps");
    Code img = apply_shift(family_shift(FamilyKind::H3, 1), a0);
    CHECK(format_code(img) == format_code(arc(kAlpha1)));
}

TEST_CASE("worked image: straight half crossing") {
    // right shift, turbulent (0,5), boundary all over
    ShiftSpec h(Direction::Right, 0, 5,
                {{Index::of(1), Kind::Over},
                 {Index::of(2), Kind::Over},
                 {Index::of(3), Kind::Over},
                 {Index::of(4), Kind::Over}});
    Code g = seg("1u 2o 3o 4o 5u");
    CHECK(format_code(apply_shift(h, g)) == "1u 2o 3o 4o 5o 6u");
}

TEST_CASE("worked image: cascading cancellation") {
    auto h = make_shift(Direction::Left, 3, -1,
                        {{Index::of(0), Kind::Under},
                         {Index::of(1), Kind::Over},
                         {Index::of(2), Kind::Under}});
    Code d = seg("3u 2u 1o 0u");
    CHECK(format_code(apply_shift(h, d)) == "3u 2u 1o 0u -1u -1o");
}

TEST_CASE("worked image: geodesic axis base arc") {
    Code b2 = arc("Ps -1o -2o -3o -3u -2o -1o Ps");
    Code img = apply_shift(family_shift(FamilyKind::H1), b2);
    CHECK(format_code(img) == "Ps -1o -2o -2u -1o Ps");
}

TEST_CASE("worked image: second half under h2 then h3") {
    // The back half of h1(alpha-half-1 0u) at n = 1, carried through h2 and h3.
    auto h2 = family_shift(FamilyKind::H2, 1);
    Code in = seg("3o 3u 2o 1o 0o 0u");
    Code mid = apply_shift(h2, in);
    CHECK(format_code(mid) == "2o 2u 1o 0o Po -1u -2o -2u -1u Po 0u");

    auto h3 = family_shift(FamilyKind::H3, 1);
    Code out = apply_shift(h3, mid);
    // ends with chi1-bar Pu Po chi1 0u, where chi1 = 0o 1o 2o 2u 1o 0o
    std::string tail = "0o 1o 2u 2o 1o 0o Pu Po 0o 1o 2o 2u 1o 0o 0u";
    std::string full = format_code(out);
    REQUIRE(full.size() >= tail.size());
    CHECK(full.substr(full.size() - tail.size()) == tail);
}

TEST_CASE("golden orbit codes") {
    Code a1 = apply_g(1, alpha0(), 1);
    CHECK(format_code(a1) == format_code(arc(kAlpha1)));
    Code a2 = apply_g(1, a1, 1);
    CHECK(format_code(a2) == format_code(arc(kAlpha2)));
}

TEST_CASE("reversal equivariance") {
    auto h3 = family_shift(FamilyKind::H3, 1);
    Code a0 = arc("Ps 0o 0u Ps");
    CHECK(apply_shift(h3, reverse(a0)) == reverse(apply_shift(h3, a0)));
    Code b2 = arc("Ps -1o -2o -3o -3u -2o -1o Ps");
    auto h1 = family_shift(FamilyKind::H1);
    CHECK(apply_shift(h1, reverse(b2)) == reverse(apply_shift(h1, b2)));
}

TEST_CASE("loop triviality direct") {
    auto h1 = family_shift(FamilyKind::H1);
    CHECK(loop_is_trivial_direct(h1, seg("0u Pu -1o -1u Pu 0u")));
    CHECK_FALSE(loop_is_trivial_direct(h1, seg("0o Pu -1o -1u Pu 0o")));
    CHECK_FALSE(loop_is_trivial_direct(h1, seg("0o 0u")));
    // a loop containing a back loop is never trivial
    CHECK_FALSE(loop_is_trivial_direct(h1, seg("0u Pu -1o C -1o -1u Pu 0u")));
}

TEST_CASE("loop theorem closed form") {
    auto h1 = family_shift(FamilyKind::H1);
    CHECK(loop_theorem_form(h1, seg("0u Pu -1o -1u Pu 0u")));
    CHECK(loop_theorem_form(h1, seg("0u Pu -1u -1o Pu 0u")));
    CHECK_FALSE(loop_theorem_form(h1, seg("0o Pu -1o -1u Pu 0o")));
    CHECK_FALSE(loop_theorem_form(h1, seg("0o 0u")));
    auto h3 = family_shift(FamilyKind::H3, 1);
    CHECK(loop_theorem_form(h3, seg("1o 0o Pu -1o -2o -2u -1o Pu 0o 1o")));
    CHECK(loop_is_trivial_direct(h3, seg("1o 0o Pu -1o -2o -2u -1o Pu 0o 1o")));
}

namespace {

// Random reduced arcs supported on a window, as direction-consistent walks.
Code random_arc(std::mt19937& rng, int lo, int hi, int steps) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<Character> t;
    t.push_back(Character::start());
    Index pos = coin(rng) ? Index::of(0) : Index::of(-1);
    int dir = pos >= Index::of(0) ? +1 : -1;
    t.push_back({coin(rng) ? Kind::Over : Kind::Under, pos});
    bool just_turned = false;
    for (int k = 0; k < steps; ++k) {
        bool can_fwd = dir > 0 ? (pos < Index::of(hi)) : (pos > Index::of(lo));
        bool turn = !just_turned && (!can_fwd || coin(rng) == 0);
        if (!can_fwd && just_turned) break;
        Index nxt = turn ? pos : (dir > 0 ? pos.succ() : pos.pred());
        if (turn) dir = -dir;
        Kind kind = coin(rng) ? Kind::Over : Kind::Under;
        if (turn) kind = t.back().kind == Kind::Over ? Kind::Under : Kind::Over;
        t.push_back({kind, nxt});
        pos = nxt;
        just_turned = turn;
    }
    // march back to p so the arc can close
    while (!(pos == Index::of(0) || pos == Index::of(-1)) || dir > 0 == (pos >= Index::of(0))) {
        Index nxt;
        if (dir > 0 && pos < Index::of(0))
            nxt = pos.succ();
        else if (dir < 0 && pos > Index::of(0))
            nxt = pos.pred();
        else if (dir < 0 && pos == Index::of(0))
            break;
        else if (dir > 0 && pos == Index::of(-1))
            break;
        else {
            dir = -dir;
            t.push_back({t.back().kind == Kind::Over ? Kind::Under : Kind::Over, pos});
            continue;
        }
        t.push_back({coin(rng) ? Kind::Over : Kind::Under, nxt});
        pos = nxt;
    }
    t.push_back(Character::start());
    return reduce(Code::arc(std::move(t)));
}

} // namespace

TEST_CASE("round trips on random arcs") {
    std::mt19937 rng(20240817);
    std::vector<ShiftSpec> shifts;
    shifts.push_back(family_shift(FamilyKind::H1));
    for (int n : {1, 2, 3}) {
        shifts.push_back(family_shift(FamilyKind::H2, n));
        shifts.push_back(family_shift(FamilyKind::H3, n));
    }
    for (const auto& s : shifts) {
        for (int k = 0; k < 150; ++k) {
            Code c = random_arc(rng, -4, 4, 12);
            if (!is_embeddable(c)) continue;
            Code fwd = apply_shift(s, c);
            CAPTURE(format_code(c));
            CAPTURE(format_code(fwd));
            REQUIRE(format_code(apply_inverse(s, fwd)) == format_code(c));
            Code bwd = apply_inverse(s, c);
            REQUIRE(format_code(apply_shift(s, bwd)) == format_code(c));
        }
    }
}

TEST_CASE("reversal equivariance on random arcs") {
    std::mt19937 rng(7);
    auto h3 = family_shift(FamilyKind::H3, 1);
    auto h2 = family_shift(FamilyKind::H2, 1);
    for (int k = 0; k < 200; ++k) {
        Code c = random_arc(rng, -3, 3, 10);
        if (!is_embeddable(c)) continue;
        CAPTURE(format_code(c));
        REQUIRE(format_code(apply_shift(h3, reverse(c))) ==
                format_code(reverse(apply_shift(h3, c))));
        REQUIRE(format_code(apply_shift(h2, reverse(c))) ==
                format_code(reverse(apply_shift(h2, c))));
    }
}

TEST_CASE("shift region loops persist") {
    // A planted loop beyond the turbulent region survives with its index
    // advanced by one.
    auto h1 = family_shift(FamilyKind::H1);
    Code c = arc("Ps 0u Pu -1o -2o -2u -1u Pu 0u Ps");
    Code img = apply_shift(h1, c);
    std::string s = format_code(img);
    CHECK(s.find("-1o -1u") != std::string::npos);
}

TEST_CASE("disagreeing characters persist") {
    auto h3 = family_shift(FamilyKind::H3, 1);
    // 0u disagrees with the boundary of h3; it must appear in the image.
    Code c = arc("Ps 0u 1u 2o 2u 1u 0u Ps");
    Code img = apply_shift(h3, c);
    CHECK(format_code(img).find("0u") != std::string::npos);
}

TEST_CASE("standard decomposition shapes") {
    ShiftSpec h(Direction::Right, 0, 5,
                {{Index::of(1), Kind::Over},
                 {Index::of(2), Kind::Over},
                 {Index::of(3), Kind::Over},
                 {Index::of(4), Kind::Over}});
    auto d = standard_decomposition(h, seg("1u 2o 3o 4o 5u"));
    REQUIRE(d.pieces.size() == 3);
    CHECK(d.pieces[0].tag == PieceTag::Turbulent);
    CHECK(d.pieces[1].tag == PieceTag::Connector);
    CHECK(d.pieces[1].tokens.size() == 2);
    CHECK(d.pieces[2].tag == PieceTag::ShiftRegion);

    auto d2 = standard_decomposition(h, seg("6o 7o 7u 6u"));
    REQUIRE(d2.pieces.size() == 1);
    CHECK(d2.pieces[0].tag == PieceTag::ShiftRegion);

    auto d3 = standard_decomposition(family_shift(FamilyKind::H3, 1), seg("0u"));
    REQUIRE(d3.pieces.size() == 1);
    CHECK(d3.pieces[0].tag == PieceTag::Turbulent);
    CHECK(d3.crossings.empty());
}

TEST_CASE("shift record round trip") {
    auto h2 = family_shift(FamilyKind::H2, 2);
    auto back = parse_shift(format_shift(h2));
    CHECK(back.direction() == h2.direction());
    CHECK(back.n1() == h2.n1());
    CHECK(back.n2() == h2.n2());
    CHECK(back.boundary() == h2.boundary());
}
