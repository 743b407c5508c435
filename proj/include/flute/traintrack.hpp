#ifndef FLUTE_TRAINTRACK_HPP
#define FLUTE_TRAINTRACK_HPP

#include "flute/code.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace flute {

struct traintrack_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed curve obtained from a symmetric arc by trading the start markers for
// a closure around the special puncture; stored as a cyclic token word with
// the closure pair at the end.
struct CurveCode {
    std::vector<Character> word;
    friend bool operator==(const CurveCode& a, const CurveCode& b) { return a.word == b.word; }
};

CurveCode to_curve(const Code& arc);
// Inverse of to_curve.
Code from_curve(const CurveCode& c);
std::string format_curve(const CurveCode& c);

// Tokens of the pants-decomposition train track: cuff segments reuse the
// over/under kinds; L/R/RR name the connectors.
enum class ThetaKind : unsigned char { Over, Under, L, R, RR };
struct ThetaToken {
    ThetaKind kind;
    Index index;
    std::string str() const;
    friend bool operator==(const ThetaToken& a, const ThetaToken& b) {
        return a.kind == b.kind && a.index == b.index;
    }
};

struct ThetaCode {
    std::vector<ThetaToken> word; // cyclic
};

ThetaCode theta_encode(const CurveCode& c);
std::string format_theta(const ThetaCode& t);
std::size_t theta_length(const ThetaCode& t);
// Length of the longest common prefix of the two cyclic words read from their
// fixed basepoints.
std::size_t theta_prefix_agreement(const ThetaCode& a, const ThetaCode& b);

struct TransitionMatrix {
    std::size_t dim = 0;
    std::vector<std::int64_t> entries; // row major
    std::int64_t at(std::size_t r, std::size_t c) const { return entries[r * dim + c]; }
};

TransitionMatrix transition_matrix(int n);
bool perron_frobenius_check(const TransitionMatrix& m);
double leading_eigenvalue(const TransitionMatrix& m);
std::string format_matrix(const TransitionMatrix& m);

} // namespace flute

#endif
