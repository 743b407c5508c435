#ifndef FLUTE_CODE_HPP
#define FLUTE_CODE_HPP

#include "flute/index.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flute {

// Thrown on malformed token text.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Thrown on structurally invalid codes (misplaced start, bad adjacency, ...)
// and on precondition violations of code operations.
struct code_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Kind : unsigned char { Start, Over, Under, Back };

// One code character: the start marker Ps, an over/under passage k_o / k_u,
// or a back loop C.
struct Character {
    Kind kind = Kind::Start;
    Index index; // P for Start, unused for Back

    static Character start() { return {Kind::Start, Index::P()}; }
    static Character over(Index i) { return {Kind::Over, i}; }
    static Character under(Index i) { return {Kind::Under, i}; }
    static Character back() { return {Kind::Back, Index::P()}; }

    bool is_passage() const { return kind == Kind::Over || kind == Kind::Under; }
    bool is_over() const { return kind == Kind::Over; }
    bool is_under() const { return kind == Kind::Under; }
    Character flipped() const {
        if (!is_passage()) throw std::logic_error("flip of non-passage");
        return {is_over() ? Kind::Under : Kind::Over, index};
    }

    std::string str() const;

    friend bool operator==(const Character& a, const Character& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::Over || a.kind == Kind::Under || a.kind == Kind::Start)
            return a.index == b.index;
        return true;
    }
    friend bool operator!=(const Character& a, const Character& b) { return !(a == b); }
};

enum class Flavor : unsigned char { Arc, Segment };

// A code: a validated token sequence for an arc (starts and ends with Ps)
// or a segment (at most one Ps, at an end).
class Code {
public:
    Code() : flavor_(Flavor::Segment) {}
    Code(std::vector<Character> toks, Flavor f);

    static Code arc(std::vector<Character> toks) { return Code(std::move(toks), Flavor::Arc); }
    static Code segment(std::vector<Character> toks) {
        return Code(std::move(toks), Flavor::Segment);
    }
    // For results living in a translated integer frame, where the usual
    // adjacency around the special puncture does not apply.
    static Code unchecked(std::vector<Character> toks, Flavor f) {
        Code c;
        c.toks_ = std::move(toks);
        c.flavor_ = f;
        return c;
    }

    const std::vector<Character>& tokens() const { return toks_; }
    Flavor flavor() const { return flavor_; }
    bool is_arc() const { return flavor_ == Flavor::Arc; }
    std::size_t size() const { return toks_.size(); }
    bool empty() const { return toks_.empty(); }
    const Character& operator[](std::size_t i) const { return toks_[i]; }

    bool has_back_loop() const;
    // True iff every passage index lies in [lo, hi].
    bool supported_on(Index lo, Index hi) const;

    std::string str() const;

    friend bool operator==(const Code& a, const Code& b) {
        return a.flavor_ == b.flavor_ && a.toks_ == b.toks_;
    }
    friend bool operator!=(const Code& a, const Code& b) { return !(a == b); }

private:
    std::vector<Character> toks_;
    Flavor flavor_;
};

std::ostream& operator<<(std::ostream& os, const Code& c);

// Text grammar: whitespace separated tokens, token := INDEX ("o"|"u"|"s") | "C",
// INDEX := "P" | integer. "Ps" is the only legal use of the s suffix.
Code parse_code(std::string_view text, Flavor flavor);
// Parses as an arc when the text starts with Ps, else as a segment.
Code parse_auto(std::string_view text);
std::string format_code(const Code& c);

// Removes adjacent equal passage pairs (and start-adjacent P passages) until
// the code is reduced. Confluent, so the result is canonical.
Code reduce(const Code& c);
bool is_reduced(const Code& c);

Code reverse(const Code& c);

// Joins two segments overlapping in one shared character; the shared
// character is kept once. Reduces the result.
Code efficient_concat(const Code& a, const Code& b);
// Plain concatenation (no overlap); validates the seam.
Code concat(const Code& a, const Code& b);

std::size_t code_length(const Code& c);

// Initial subsegment of floor(len/2) tokens, and the rest.
std::pair<Code, Code> half_split(const Code& c);

// Maximum over the four initial/terminal comparisons of the longest common
// token prefix of a and b.
std::size_t overlap_length(const Code& a, const Code& b);

// True iff c = delta q1 q2 reverse(delta) with q1, q2 passages of equal index.
bool is_symmetric(const Code& c);

} // namespace flute

#endif
