#ifndef FLUTE_SHIFT_HPP
#define FLUTE_SHIFT_HPP

#include "flute/code.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace flute {

struct shift_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Direction : unsigned char { Right, Left };

// A permissible shift: direction, the turbulent region endpoints n1/n2, and
// the over/under pattern of the domain boundary across the turbulent region.
class ShiftSpec {
public:
    ShiftSpec(Direction dir, std::int64_t n1, std::int64_t n2,
              std::unordered_map<Index, Kind> boundary);

    Direction direction() const { return dir_; }
    std::int64_t n1() const { return n1_; }
    std::int64_t n2() const { return n2_; }
    Index n1_index() const { return Index::of(n1_); }
    Index n2_index() const { return Index::of(n2_); }
    const std::unordered_map<Index, Kind>& boundary() const { return boundary_; }

    // Open turbulent interval membership.
    bool turbulent(Index i) const;
    // Passage indices outside the open turbulent interval (n1, n2 included).
    bool in_domain(Index i) const { return !turbulent(i); }

    Kind boundary_side(Index i) const;

    // Successor (right shift) / predecessor (left shift) within the ordered
    // set of domain punctures; n1 maps to n2.
    Index shift_index(Index k) const;

    ShiftSpec inverted() const;

    // The boundary code over [a, b], read in increasing index order.
    Code boundary_segment(Index a, Index b) const;

private:
    Direction dir_;
    std::int64_t n1_, n2_;
    std::unordered_map<Index, Kind> boundary_;
};

ShiftSpec make_shift(Direction dir, std::int64_t n1, std::int64_t n2,
                     std::unordered_map<Index, Kind> boundary);

// Image of a reduced code under the shift, as a reduced code.
Code apply_shift(const ShiftSpec& s, const Code& c);
// Image under the inverse shift; apply_inverse(s, apply_shift(s, c)) == c.
Code apply_inverse(const ShiftSpec& s, const Code& c);

// Standard position decomposition data.
enum class PieceTag : unsigned char {
    Turbulent,
    Connector,
    ShiftRegion,
    BackLoop,
    BackLoopConnector
};
struct Piece {
    PieceTag tag;
    std::vector<Character> tokens;
};
struct CrossingNote {
    std::size_t position;  // token position the crossing precedes
    bool enters_from_above;
};
struct Decomposition {
    std::vector<Piece> pieces;
    std::vector<CrossingNote> crossings;
};

Decomposition standard_decomposition(const ShiftSpec& s, const Code& c);

// Loops per the over-under / regular / back-loop classification.
bool is_loop(const Code& c);
// True iff the image of the loop reduces to the empty segment.
bool loop_is_trivial_direct(const ShiftSpec& s, const Code& c);
// True iff the loop matches the closed-form characterization of loops with
// trivial image: a boundary-following walk around an n1 loop.
bool loop_theorem_form(const ShiftSpec& s, const Code& c);

// Text record round trip for --shift-file.
std::string format_shift(const ShiftSpec& s);
ShiftSpec parse_shift(std::string_view text);

} // namespace flute

#endif
