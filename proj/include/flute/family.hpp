#ifndef FLUTE_FAMILY_HPP
#define FLUTE_FAMILY_HPP

#include "flute/shift.hpp"

#include <cstdint>
#include <vector>

namespace flute {

enum class FamilyKind : unsigned char { H1, H2, H3 };

struct FamilyShift {
    FamilyKind kind;
    int n = 1; // ignored for H1
};

// The three building-block shifts: h1 fixed, h2/h3 widening with n.
ShiftSpec family_shift(FamilyShift f);
ShiftSpec family_shift(FamilyKind kind, int n = 1);

// Token cap for orbit computations (codes grow geometrically).
struct cap_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
std::size_t max_tokens();
void set_max_tokens(std::size_t cap);

// g_n = h3 o h2 o h1; negative powers via the inverses in reverse order.
Code apply_g(int n, const Code& c, std::int64_t power = 1);

Code alpha0();
Code beta0(int n);
// alpha_i^(n) = g_n^i(alpha_0); memoized per (n, i).
Code alpha_arc(int n, std::int64_t i);
Code beta_arc(int n, std::int64_t i);

// First-half segment of alpha_i (floor(len/2) tokens).
Code alpha_half(int n, std::int64_t i);
// alpha_half without its leading start marker.
Code chi(int n, std::int64_t i);

// Largest i >= 0 such that c starts like alpha_i^(n); 0 if none.
std::int64_t phi_starts_like(int n, const Code& c);
std::int64_t distance_lower_bound(int n, const Code& a, const Code& b);

enum class LaneSide : unsigned char { Left, Right };
struct Lane {
    LaneSide side;
    Code tokens;
    std::size_t lane_length;
    bool innermost;
    std::size_t position; // token position of the P-pair in the arc
    bool reversed;        // matched as the reverse form
};

std::vector<Lane> find_lanes(const Code& c);
bool highway_check(int n, std::int64_t i);

} // namespace flute

#endif
