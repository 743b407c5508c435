#include "flute/family.hpp"

#include <map>
#include <mutex>

namespace flute {

ShiftSpec family_shift(FamilyShift f) {
    if (f.kind != FamilyKind::H1 && f.n < 1) throw shift_error("family shift needs n >= 1");
    std::unordered_map<Index, Kind> bnd;
    switch (f.kind) {
    case FamilyKind::H1:
        bnd[Index::P()] = Kind::Under;
        bnd[Index::of(0)] = Kind::Under;
        return ShiftSpec(Direction::Right, -1, 1, std::move(bnd));
    case FamilyKind::H2: {
        // Over p and B_0; under B_j for odd |j| <= n, over for even.
        bnd[Index::P()] = Kind::Over;
        bnd[Index::of(0)] = Kind::Over;
        for (int j = 1; j <= f.n; ++j) {
            Kind k = (j % 2 != 0) ? Kind::Under : Kind::Over;
            bnd[Index::of(j)] = k;
            bnd[Index::of(-j)] = k;
        }
        return ShiftSpec(Direction::Left, f.n + 1, -f.n - 1, std::move(bnd));
    }
    case FamilyKind::H3: {
        // Under p, over every B_j in [-n, n].
        bnd[Index::P()] = Kind::Under;
        for (int j = -f.n; j <= f.n; ++j) bnd[Index::of(j)] = Kind::Over;
        return ShiftSpec(Direction::Right, -f.n - 1, f.n + 1, std::move(bnd));
    }
    }
    throw shift_error("bad family kind");
}

ShiftSpec family_shift(FamilyKind kind, int n) { return family_shift(FamilyShift{kind, n}); }

namespace {
std::size_t g_max_tokens = 10'000'000;
}

std::size_t max_tokens() { return g_max_tokens; }
void set_max_tokens(std::size_t cap) { g_max_tokens = cap; }

namespace {

void check_cap(const Code& c) {
    if (c.size() > g_max_tokens)
        throw cap_exceeded("code length " + std::to_string(c.size()) + " exceeds cap " +
                           std::to_string(g_max_tokens));
}

Code apply_g_once(int n, const Code& c) {
    Code r = apply_shift(family_shift(FamilyKind::H1, n), c);
    r = apply_shift(family_shift(FamilyKind::H2, n), r);
    r = apply_shift(family_shift(FamilyKind::H3, n), r);
    check_cap(r);
    return r;
}

Code apply_g_inv_once(int n, const Code& c) {
    Code r = apply_inverse(family_shift(FamilyKind::H3, n), c);
    r = apply_inverse(family_shift(FamilyKind::H2, n), r);
    r = apply_inverse(family_shift(FamilyKind::H1, n), r);
    check_cap(r);
    return r;
}

} // namespace

Code apply_g(int n, const Code& c, std::int64_t power) {
    Code r = is_reduced(c) ? c : reduce(c);
    for (std::int64_t k = 0; k < power; ++k) r = apply_g_once(n, r);
    for (std::int64_t k = 0; k > power; --k) r = apply_g_inv_once(n, r);
    return r;
}

Code alpha0() { return parse_code("Ps 0o 0u Ps", Flavor::Arc); }

Code beta0(int n) {
    std::vector<Character> t;
    t.push_back(Character::start());
    for (int j = 1; j <= n + 1; ++j) t.push_back(Character::over(Index::of(-j)));
    t.push_back(Character::under(Index::of(-n - 1)));
    for (int j = n; j >= 1; --j) t.push_back(Character::over(Index::of(-j)));
    t.push_back(Character::start());
    return Code::arc(std::move(t));
}

namespace {

std::mutex g_cache_mutex;
std::map<std::pair<int, std::int64_t>, Code> g_alpha_cache;

} // namespace

Code alpha_arc(int n, std::int64_t i) {
    {
        std::lock_guard<std::mutex> lk(g_cache_mutex);
        auto it = g_alpha_cache.find({n, i});
        if (it != g_alpha_cache.end()) return it->second;
    }
    Code r;
    if (i == 0) {
        r = alpha0();
    } else if (i > 0) {
        r = apply_g_once(n, alpha_arc(n, i - 1));
    } else {
        r = apply_g_inv_once(n, alpha_arc(n, i + 1));
    }
    std::lock_guard<std::mutex> lk(g_cache_mutex);
    g_alpha_cache.emplace(std::make_pair(n, i), r);
    return r;
}

Code beta_arc(int n, std::int64_t i) { return apply_g(n, beta0(n), i); }

Code alpha_half(int n, std::int64_t i) { return half_split(alpha_arc(n, i)).first; }

Code chi(int n, std::int64_t i) {
    Code h = alpha_half(n, i);
    std::vector<Character> t(h.tokens().begin() + 1, h.tokens().end());
    return Code::segment(std::move(t));
}

std::int64_t phi_starts_like(int n, const Code& c) {
    Code r = is_reduced(c) ? c : reduce(c);
    std::int64_t best = 0;
    for (std::int64_t i = 1;; ++i) {
        Code a = alpha_arc(n, i);
        std::size_t need = a.size() / 2;
        if (need > r.size()) break;
        if (overlap_length(r, a) >= need) best = i;
    }
    return best;
}

std::int64_t distance_lower_bound(int n, const Code& a, const Code& b) {
    std::int64_t pa = phi_starts_like(n, a), pb = phi_starts_like(n, b);
    return pa > pb ? pa - pb : pb - pa;
}

namespace {

// Longest m such that gamma = c[pos..pos+m) matches the initial segment of c
// after Ps and, reversed, the terminal segment before Ps. dir = +1 scans
// forward from pos, -1 scans backward.
std::size_t lane_extent(const Code& c, std::size_t pos, int dir) {
    const auto& t = c.tokens();
    std::size_t n = t.size();
    std::size_t m = 0;
    while (true) {
        std::size_t src = dir > 0 ? pos + m : pos - m; // candidate gamma token
        if (dir > 0 && src >= n - 1) break;
        if (dir < 0 && (pos < m || src == 0)) break;
        if (!t[src].is_passage() && t[src].kind != Kind::Back) break;
        if (t[src].kind == Kind::Back) break; // lanes avoid back loops
        std::size_t ini = 1 + m;     // position in the initial segment (after Ps)
        std::size_t ter = n - 2 - m; // mirrored position in the terminal segment
        if (ini >= n || ter == 0) break;
        if (t[src] != t[ini] || t[src] != t[ter]) break;
        ++m;
    }
    return m;
}

} // namespace

std::vector<Lane> find_lanes(const Code& c) {
    std::vector<Lane> lanes;
    if (!c.is_arc() || c.size() < 4) return lanes;
    const auto& t = c.tokens();
    std::size_t n = t.size();
    // Internal P-pairs; the pair orientation names the lane side.
    for (std::size_t i = 1; i + 2 < n; ++i) {
        if (!(t[i].is_passage() && t[i + 1].is_passage())) continue;
        if (!(t[i].index.is_p() && t[i + 1].index.is_p())) continue;
        if (t[i].kind == t[i + 1].kind) continue;
        bool po_pu = t[i].is_over(); // Po Pu starts a left lane; Pu Po a right lane
        // Forward form: pair then gamma.
        {
            std::size_t m = lane_extent(c, i + 2, +1);
            if (m > 0) {
                std::vector<Character> toks(t.begin() + static_cast<std::ptrdiff_t>(i),
                                            t.begin() + static_cast<std::ptrdiff_t>(i + 2 + m));
                lanes.push_back({po_pu ? LaneSide::Left : LaneSide::Right,
                                 Code::segment(std::move(toks)), m + 1, false, i, false});
            }
        }
        // Reverse form: gamma-bar then pair.
        {
            std::size_t m = i >= 1 ? lane_extent(c, i - 1, -1) : 0;
            if (m > 0) {
                std::vector<Character> toks(t.begin() + static_cast<std::ptrdiff_t>(i - m),
                                            t.begin() + static_cast<std::ptrdiff_t>(i + 2));
                lanes.push_back({po_pu ? LaneSide::Right : LaneSide::Left,
                                 Code::segment(std::move(toks)), m + 1, false, i, true});
            }
        }
    }
    // Innermost: the longest lane on each side.
    for (LaneSide side : {LaneSide::Left, LaneSide::Right}) {
        std::size_t best = 0;
        for (const auto& l : lanes)
            if (l.side == side) best = std::max(best, l.lane_length);
        for (auto& l : lanes)
            if (l.side == side && l.lane_length == best && best > 0) {
                l.innermost = true;
                break;
            }
    }
    return lanes;
}

bool highway_check(int n, std::int64_t i) {
    if (i < 2) throw shift_error("highway_check needs i >= 2");
    Code half = alpha_half(n, i);
    Code x = chi(n, i - 1);
    const auto& h = half.tokens();
    const auto& xs = x.tokens();
    std::size_t need = 2 * xs.size() + 2;
    if (h.size() < need) return false;
    std::size_t off = h.size() - need;
    // chi-bar, Pu, Po, chi
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (h[off + k] != xs[xs.size() - 1 - k]) return false;
    if (h[off + xs.size()] != Character::under(Index::P())) return false;
    if (h[off + xs.size() + 1] != Character::over(Index::P())) return false;
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (h[off + xs.size() + 2 + k] != xs[k]) return false;
    return true;
}

} // namespace flute
