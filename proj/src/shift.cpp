#include "flute/shift.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <sstream>

namespace flute {

namespace {



} // namespace

ShiftSpec::ShiftSpec(Direction dir, std::int64_t n1, std::int64_t n2,
                     std::unordered_map<Index, Kind> boundary)
    : dir_(dir), n1_(n1), n2_(n2), boundary_(std::move(boundary)) {
    if (dir_ == Direction::Right) {
        if (!(n1_ < n2_)) throw shift_error("right shift needs n1 < n2");
    } else {
        if (!(n2_ < n1_)) throw shift_error("left shift needs n2 < n1");
    }
    std::int64_t lo = std::min(n1_, n2_), hi = std::max(n1_, n2_);
    std::size_t count = 0;
    for (Index i = Index::of(lo).succ(); i < Index::of(hi); i = i.succ()) {
        auto it = boundary_.find(i);
        if (it == boundary_.end()) {
            // The special puncture may sit outside the picture when a shift
            // is instantiated on a plain integer corridor.
            if (i.is_p()) continue;
            throw shift_error("boundary missing index " + i.str());
        }
        if (it->second != Kind::Over && it->second != Kind::Under)
            throw shift_error("boundary missing index " + i.str());
        ++count;
    }
    if (count != boundary_.size()) throw shift_error("boundary has extra indices");
}

bool ShiftSpec::turbulent(Index i) const {
    if (i.is_p()) return true; // the special puncture is never carried
    std::int64_t lo = std::min(n1_, n2_), hi = std::max(n1_, n2_);
    return Index::of(lo) < i && i < Index::of(hi);
}

Kind ShiftSpec::boundary_side(Index i) const {
    auto it = boundary_.find(i);
    if (it == boundary_.end()) throw shift_error("no boundary side at " + i.str());
    return it->second;
}

Index ShiftSpec::shift_index(Index k) const {
    if (!k.is_p() && k.value() == n1_) return Index::of(n2_);
    if (turbulent(k) || k.is_p()) throw shift_error("shift_index outside domain: " + k.str());
    return Index::of(dir_ == Direction::Right ? k.value() + 1 : k.value() - 1);
}

ShiftSpec ShiftSpec::inverted() const {
    Direction d = dir_ == Direction::Right ? Direction::Left : Direction::Right;
    return ShiftSpec(d, n2_, n1_, boundary_);
}

Code ShiftSpec::boundary_segment(Index a, Index b) const {
    if (a > b) std::swap(a, b);
    std::vector<Character> toks;
    for (Index i = a;; i = i.succ()) {
        if (!turbulent(i))
            throw shift_error("boundary_segment outside turbulent region at " + i.str());
        toks.push_back({boundary_side(i), i});
        if (i == b) break;
    }
    return Code::segment(std::move(toks));
}

ShiftSpec make_shift(Direction dir, std::int64_t n1, std::int64_t n2,
                     std::unordered_map<Index, Kind> boundary) {
    // A mapping class fixing the special puncture keeps it out of the shift
    // region, so the turbulent region must straddle it.
    std::int64_t lo = std::min(n1, n2), hi = std::max(n1, n2);
    if (!(lo <= -1 && hi >= 0)) throw shift_error("P must lie in the turbulent region");
    return ShiftSpec(dir, n1, n2, std::move(boundary));
}

namespace {

enum class Side : unsigned char { Unset, Above, Below };

Side flip(Side s) {
    if (s == Side::Above) return Side::Below;
    if (s == Side::Below) return Side::Above;
    return Side::Unset;
}

// Relation of a passage to the domain boundary when their sides differ:
// over a puncture the boundary passes under means the strand runs above it.
Side forced_side(const ShiftSpec& s, const Character& t) {
    if (!t.is_passage() || !s.turbulent(t.index)) return Side::Unset;
    auto it = s.boundary().find(t.index);
    if (it == s.boundary().end()) return Side::Unset;
    if (t.kind == it->second) return Side::Unset;
    return t.is_over() ? Side::Above : Side::Below;
}

// Side constraints for passages at n1 itself (hugging the whole domain).
Side n1_float_side(const Character& t) { return t.is_over() ? Side::Above : Side::Below; }

// A slot between adjacent indices, named by its smaller bounding index
// (so slot(a) sits between a and succ(a)).
struct Slot {
    Index lower;
};

struct Engine {
    const ShiftSpec& s;
    bool right;
    Index n1, n2;

    explicit Engine(const ShiftSpec& spec)
        : s(spec), right(spec.direction() == Direction::Right), n1(spec.n1_index()),
          n2(spec.n2_index()) {}

    bool n2ward_of(Index a, Index b) const { return right ? a > b : a < b; } // a beyond b toward n2

    // Turbulent indices strictly beyond the slot toward n2, ordered toward n2.
    std::vector<Character> walk(Slot from) const {
        std::vector<Character> out;
        auto push = [&](Index i) {
            auto it = s.boundary().find(i);
            if (it != s.boundary().end()) out.push_back({it->second, i});
        };
        if (right) {
            for (Index i = from.lower.succ(); i < n2; i = i.succ()) push(i);
        } else {
            for (Index i = from.lower; i > n2; i = i.pred()) push(i);
        }
        return out;
    }

    // Slot just ahead of a passage at idx travelling in direction d (+1/-1).
    Slot slot_ahead(Index idx, int d) const { return {d > 0 ? idx : idx.pred()}; }
    // Slot just behind a passage at idx approached travelling in direction d.
    Slot slot_behind(Index idx, int d) const { return {d > 0 ? idx.pred() : idx}; }
    // Slot between n1 and the turbulent region.
    Slot n1_slot() const { return {right ? n1 : n1.pred()}; }
    // Slot between the turbulent region and n2.
    Slot n2_slot() const { return {right ? n2.pred() : n2}; }

    Character n2_char(Kind k) const { return {k, n2}; }

    void emit_excursion(std::vector<Character>& out, Slot dive, Slot resurface,
                        Side entry) const {
        auto o = walk(dive);
        out.insert(out.end(), o.begin(), o.end());
        Kind first = entry == Side::Below ? Kind::Under : Kind::Over;
        out.push_back(n2_char(first));
        out.push_back(n2_char(first == Kind::Over ? Kind::Under : Kind::Over));
        auto b = walk(resurface);
        out.insert(out.end(), b.rbegin(), b.rend());
    }
};

// Per-token travel directions: +1 rightward, -1 leftward. Turns flip.
std::vector<int> travel_dirs(const std::vector<Character>& toks) {
    std::vector<std::size_t> pass;
    for (std::size_t i = 0; i < toks.size(); ++i)
        if (toks[i].is_passage()) pass.push_back(i);
    std::vector<int> dir(toks.size(), +1);
    if (pass.empty()) return dir;
    // Direction of the first passage: from the start marker (at P) or from the
    // first moving step; leading turns flip back from there.
    int d0 = 0;
    if (toks.front().kind == Kind::Start) {
        d0 = toks[pass[0]].index >= Index::of(0) ? +1 : -1;
    } else {
        std::size_t k = 0;
        int flips = 0;
        while (k + 1 < pass.size() && toks[pass[k + 1]].index == toks[pass[k]].index) {
            ++k;
            ++flips;
        }
        if (k + 1 < pass.size()) {
            int dmove = toks[pass[k + 1]].index > toks[pass[k]].index ? +1 : -1;
            d0 = (flips % 2 == 0) ? dmove : -dmove;
        } else {
            d0 = +1;
        }
    }
    dir[pass[0]] = d0;
    for (std::size_t k = 1; k < pass.size(); ++k) {
        Index prev = toks[pass[k - 1]].index, cur = toks[pass[k]].index;
        if (cur == prev)
            dir[pass[k]] = -dir[pass[k - 1]];
        else
            dir[pass[k]] = cur > prev ? +1 : -1;
    }
    return dir;
}

struct Run {
    std::size_t begin, end; // token range [begin, end)
    bool n1_side;
};

} // namespace

namespace {

// Shifts instantiated on a plain integer corridor (no boundary entry at the
// special puncture) are computed in a frame translated clear of it.
Code apply_shift_translated(const ShiftSpec& spec, const Code& c) {
    std::int64_t lo = std::min(spec.n1(), spec.n2());
    std::int64_t off = 1 - lo;
    auto move = [&](const Code& code, std::int64_t d, bool checked) {
        std::vector<Character> t;
        for (const auto& tok : code.tokens()) {
            if (tok.is_passage()) {
                if (tok.index.is_p())
                    throw shift_error("code passes the special puncture but the shift "
                                      "does not cover it");
                t.push_back({tok.kind, Index::of(tok.index.value() + d)});
            } else {
                t.push_back(tok);
            }
        }
        if (!checked) return Code::unchecked(std::move(t), code.flavor());
        return Code(std::move(t), code.flavor());
    };
    std::unordered_map<Index, Kind> bnd;
    for (const auto& [k, v] : spec.boundary()) bnd[Index::of(k.value() + off)] = v;
    ShiftSpec moved(spec.direction(), spec.n1() + off, spec.n2() + off, std::move(bnd));
    return move(apply_shift(moved, move(c, off, true)), -off, false);
}

} // namespace

Code apply_shift(const ShiftSpec& spec, const Code& input) {
    Code c = is_reduced(input) ? input : reduce(input);
    if (spec.boundary().find(Index::P()) == spec.boundary().end() &&
        std::min(spec.n1(), spec.n2()) < 1)
        return apply_shift_translated(spec, c);
    const auto& toks = c.tokens();
    Engine eng(spec);
    const Index n1 = eng.n1;

    auto dirs = travel_dirs(toks);

    // Locate maximal domain runs.
    std::vector<Run> runs;
    for (std::size_t i = 0; i < toks.size();) {
        if (toks[i].is_passage() && spec.in_domain(toks[i].index)) {
            std::size_t j = i;
            while (j < toks.size() && toks[j].is_passage() && spec.in_domain(toks[j].index)) ++j;
            bool on_n1_side = eng.right ? toks[i].index <= n1 : toks[i].index >= n1;
            runs.push_back({i, j, on_n1_side});
            i = j;
        } else {
            ++i;
        }
    }
    auto run_at = [&](std::size_t i) -> const Run* {
        for (const auto& r : runs)
            if (r.begin == i) return &r;
        return nullptr;
    };

    Side p_side = Side::Unset;
    {
        auto it = spec.boundary().find(Index::P());
        if (it != spec.boundary().end())
            p_side = it->second == Kind::Under ? Side::Above : Side::Below;
    }
    const bool is_arc = c.is_arc();

    std::vector<Character> out;
    out.reserve(toks.size() * 2);

    Side state = Side::Unset;

    // Turn membership: a passage sharing its index with the preceding or
    // following passage sits on a turn, whose slot hosts the band crossings.
    std::vector<bool> turn_first(toks.size(), false), turn_second(toks.size(), false);
    {
        std::size_t prev = toks.size();
        for (std::size_t k = 0; k < toks.size(); ++k) {
            if (!toks[k].is_passage()) continue;
            if (prev != toks.size() && toks[prev].index == toks[k].index) {
                turn_first[prev] = true;
                turn_second[k] = true;
            }
            prev = k;
        }
    }
    // Crossings leave next to the puncture side of an opening turn and land
    // next to the puncture side of a closing one; the two rules mirror each
    // other under reversal of the code.
    auto pward_slot = [&](Index i) {
        return i >= Index::of(0) ? Slot{i.pred()} : Slot{i};
    };
    auto paway_slot = [&](Index i) {
        return i >= Index::of(0) ? Slot{i} : Slot{i.pred()};
    };
    auto n2ward_flank = [&](Index i) {
        return eng.right ? Slot{i} : Slot{i.pred()};
    };
    auto dive_slot = [&](std::size_t k) {
        Index i = toks[k].index;
        if (!i.is_p() && turn_first[k]) return pward_slot(i);
        if (turn_second[k]) return n2ward_flank(i);
        return eng.slot_ahead(i, dirs[k]);
    };
    auto resurface_slot = [&](std::size_t k) {
        Index i = toks[k].index;
        if (!i.is_p() && turn_second[k]) return pward_slot(i);
        if (turn_first[k]) return n2ward_flank(i);
        return eng.slot_behind(i, dirs[k]);
    };
    (void)paway_slot;

    // Crossing bookkeeping: when the pinned side flips, the boundary-following
    // stretch emitted since the previous anchor is absorbed into the crossing
    // excursion, which re-traces it inside the domain. Stretches the walks
    // cannot re-trace stay put and the dive moves up to them instead.
    std::size_t anchor_pos = 0;
    std::optional<Slot> anchor_slot;
    std::optional<Slot> last_dive;
    auto covered = [&](Index idx, Slot from) {
        return eng.right ? idx > from.lower : idx <= from.lower;
    };
    auto charge_crossing = [&](Slot resurface, Side new_side) {
        if (state != Side::Unset && new_side != Side::Unset && state != new_side &&
            anchor_slot) {
            bool absorbable = true;
            for (std::size_t k = anchor_pos; k < out.size(); ++k)
                if (!out[k].is_passage() ||
                    (!covered(out[k].index, *anchor_slot) &&
                     !covered(out[k].index, resurface)))
                    absorbable = false;
            Slot dive = *anchor_slot;
            if (absorbable)
                out.resize(anchor_pos);
            else if (last_dive)
                dive = *last_dive;
            eng.emit_excursion(out, dive, resurface, state);
        }
        if (new_side != Side::Unset) state = new_side;
    };
    auto set_anchor = [&](Slot s) {
        anchor_pos = out.size();
        anchor_slot = s;
        last_dive = s;
    };

    // The strand leaves and re-enters the puncture on the n2-ward side.
    const Slot p_slot{eng.right ? Index::P() : Index::of(-1)};
    std::size_t i = 0;
    // Initial anchor.
    if (is_arc) {
        out.push_back(Character::start());
        state = p_side;
        set_anchor(p_slot);
        i = 1;
    }

    std::size_t end = is_arc ? toks.size() - 1 : toks.size();
    while (i < end) {
        const Character& t = toks[i];
        if (t.kind == Kind::Back) {
            out.push_back(t);
            ++i;
            continue;
        }
        if (const Run* r = run_at(i)) {
            std::size_t len = r->end - r->begin;
            // Free segment ends inside the shift region are carried along
            // with the punctures; arc endpoints stay pinned at p.
            bool free_start = !is_arc && r->begin == 0;
            bool free_end = !is_arc && r->end == toks.size();
            if (!r->n1_side) {
                // n2 side. Both a dragged core (deep passages, plus passages
                // at n2 bordering them or carried turns) and floating stays at
                // n2 can occur; the core travels one slot deeper with new n2
                // passages at its junctions, on whichever side of the domain
                // the strand was pinned to.
                auto deep_tok = [&](std::size_t k) { return toks[k].index != eng.n2; };
                auto in_core = [&](std::size_t k) {
                    if (deep_tok(k)) return true;
                    bool pd = k > r->begin && deep_tok(k - 1);
                    bool nd = k + 1 < r->end && deep_tok(k + 1);
                    if (pd || nd) return true;
                    // a turn at n2 bends inside the domain and is carried
                    bool pair_next = k + 1 < r->end && !deep_tok(k + 1) &&
                                     toks[k].kind != toks[k + 1].kind;
                    bool pair_prev = k > r->begin && !deep_tok(k - 1) &&
                                     toks[k].kind != toks[k - 1].kind;
                    bool at_free = (k == r->begin && free_start) || (k + 1 == r->end && free_end);
                    return pair_next || pair_prev || at_free;
                };
                auto insert_kind = [&](const Character& bdry, bool lone) {
                    if (lone && (free_start || free_end))
                        return bdry.is_over() ? Kind::Under : Kind::Over;
                    if (state == Side::Above) return Kind::Over;
                    if (state == Side::Below) return Kind::Under;
                    return bdry.kind;
                };
                std::size_t k = r->begin;
                while (k < r->end) {
                    if (!in_core(k)) {
                        // floating passage at n2, pinned to one side
                        charge_crossing(eng.n2_slot(), n1_float_side(toks[k]));
                        out.push_back(toks[k]);
                        set_anchor(eng.n2_slot());
                        ++k;
                        continue;
                    }
                    std::size_t e = k;
                    while (e < r->end && in_core(e)) ++e;
                    bool core_at_start = k == r->begin && free_start;
                    bool core_at_end = e == r->end && free_end;
                    bool lone = e - k == 1;
                    if (!core_at_start)
                        out.push_back(eng.n2_char(insert_kind(toks[k], lone)));
                    for (std::size_t j = k; j < e; ++j)
                        out.push_back({toks[j].kind, spec.shift_index(toks[j].index)});
                    set_anchor(eng.n2_slot());
                    if (!core_at_end) {
                        Kind ek = insert_kind(toks[e - 1], lone);
                        out.push_back(eng.n2_char(ek));
                        state = ek == Kind::Over ? Side::Above : Side::Below;
                    } else {
                        state = Side::Unset;
                    }
                    set_anchor(eng.n2_slot());
                    k = e;
                }
                i = r->end;
                continue;
            }
            // n1 side. Deeper material is carried one slot over; a passage at
            // n1 bordering deeper material is superseded by the carried copy,
            // but still pins which side of the domain the strand runs on.
            bool has_deep = false;
            for (std::size_t k = r->begin; k < r->end; ++k)
                if (toks[k].index != n1) has_deep = true;
            if (has_deep) {
                bool entry_n1 = toks[r->begin].index == n1 && !free_start;
                if (entry_n1) charge_crossing(eng.n1_slot(), n1_float_side(toks[r->begin]));
                set_anchor(eng.n1_slot());
                for (std::size_t k = r->begin; k < r->end; ++k) {
                    if (toks[k].index != n1) {
                        out.push_back({toks[k].kind, spec.shift_index(toks[k].index)});
                        set_anchor(eng.n1_slot());
                        continue;
                    }
                    bool prev_deep = k > r->begin && toks[k - 1].index != n1;
                    bool next_deep = k + 1 < r->end && toks[k + 1].index != n1;
                    bool pair = k + 1 < r->end && toks[k + 1].index == n1;
                    bool pair_next_deep = pair && k + 2 < r->end && toks[k + 2].index != n1;
                    if (pair && prev_deep && pair_next_deep) {
                        // A turn hugging B_{n1} between deep passages travels
                        // with the carried material and wraps around n2.
                        Side entry = n1_float_side(toks[k]);
                        eng.emit_excursion(out, eng.n1_slot(), eng.n1_slot(), entry);
                        set_anchor(eng.n1_slot());
                        ++k;
                        continue;
                    }
                    if (prev_deep || next_deep) continue; // superseded
                    // floats beside the domain, pinned to one side
                    charge_crossing(eng.n1_slot(), n1_float_side(toks[k]));
                    out.push_back(toks[k]);
                    state = n1_float_side(toks[k]);
                    set_anchor(eng.n1_slot());
                }
                if (toks[r->end - 1].index == n1 && !free_end)
                    state = n1_float_side(toks[r->end - 1]);
                else
                    state = Side::Unset;
                set_anchor(eng.n1_slot());
                i = r->end;
                continue;
            }
            // Runs made of passages at n1 only.
            if (len == 2 && !free_start && !free_end) {
                // A loop hugging B_{n1}: enters one side of the domain and
                // leaves the other; its image is absorbed into the walks.
                Side entry = toks[r->begin].is_over() ? Side::Above : Side::Below;
                charge_crossing(eng.n1_slot(), entry);
                state = flip(entry);
                set_anchor(eng.n1_slot());
                i = r->end;
                continue;
            }
            if (len == 1 && (free_start || free_end)) {
                // A lone passage at n1 next to a free end: the strand pierces
                // the domain and the image loops around n2.
                const Character& tok = toks[r->begin];
                Side entry = n1_float_side(tok);
                if (free_start) {
                    out.push_back(tok);
                    eng.emit_excursion(out, eng.n1_slot(), eng.n1_slot(), entry);
                    state = flip(entry);
                } else {
                    charge_crossing(eng.n1_slot(), entry);
                    // Mirrored pierce: loop first, then the passage.
                    eng.emit_excursion(out, eng.n1_slot(), eng.n1_slot(), flip(entry));
                    out.push_back(tok);
                    state = entry;
                }
                set_anchor(eng.n1_slot());
                i = r->end;
                continue;
            }
            if (len == 1) {
                // Floating touch at n1 outside the domain: fixed, but it pins
                // the strand to one side.
                charge_crossing(eng.n1_slot(), n1_float_side(toks[r->begin]));
                out.push_back(toks[r->begin]);
                set_anchor(eng.n1_slot());
                i = r->end;
                continue;
            }
            // Longer stays at n1 (or wraps against a free end) ride with the
            // carried material out to n2 and back.
            {
                if (!free_start) {
                    charge_crossing(eng.n1_slot(), n1_float_side(toks[r->begin]));
                    auto w = eng.walk(eng.n1_slot());
                    out.insert(out.end(), w.begin(), w.end());
                }
                for (std::size_t k = r->begin; k < r->end; ++k)
                    out.push_back(eng.n2_char(toks[k].kind));
                if (!free_end) {
                    auto w = eng.walk(eng.n1_slot());
                    out.insert(out.end(), w.rbegin(), w.rend());
                    state = n1_float_side(toks[r->end - 1]);
                } else {
                    state = Side::Unset;
                }
                set_anchor(eng.n1_slot());
                i = r->end;
                continue;
            }
        }
        // Turbulent passage.
        Side f = forced_side(spec, t);
        if (f != Side::Unset) charge_crossing(resurface_slot(i), f);
        out.push_back(t);
        if (f != Side::Unset)
            set_anchor(dive_slot(i));
        else
            last_dive = turn_second[i] ? n2ward_flank(t.index)
                                       : eng.slot_ahead(t.index, dirs[i]);
        ++i;
    }

    if (is_arc) {
        // Terminal anchor at p.
        charge_crossing(p_slot, p_side);
        out.push_back(Character::start());
    }

    Flavor f = is_arc ? Flavor::Arc : Flavor::Segment;
    return reduce(Code(std::move(out), f));
}

Code apply_inverse(const ShiftSpec& s, const Code& c) { return apply_shift(s.inverted(), c); }

Decomposition standard_decomposition(const ShiftSpec& spec, const Code& input) {
    Code c = is_reduced(input) ? input : reduce(input);
    const auto& toks = c.tokens();
    Engine eng(spec);
    Decomposition d;

    // Pieces: maximal turbulent runs, maximal domain runs, back loops, and
    // two-token connectors/back-loop connectors at the junctions.
    std::size_t i = 0;
    auto passage_class = [&](std::size_t k) -> int {
        if (!toks[k].is_passage()) return 0; // start marker: part of turbulent context
        if (toks[k].kind == Kind::Back) return 2;
        return spec.in_domain(toks[k].index) ? 1 : 0;
    };
    std::optional<int> prev_class;
    std::size_t run_start = 0;
    auto close_run = [&](std::size_t endpos) {
        if (!prev_class) return;
        std::vector<Character> piece(toks.begin() + static_cast<std::ptrdiff_t>(run_start),
                                     toks.begin() + static_cast<std::ptrdiff_t>(endpos));
        PieceTag tag = *prev_class == 1 ? PieceTag::ShiftRegion : PieceTag::Turbulent;
        d.pieces.push_back({tag, std::move(piece)});
    };
    while (i < toks.size()) {
        if (toks[i].kind == Kind::Back) {
            close_run(i);
            if (i > 0 && toks[i - 1].is_passage())
                d.pieces.push_back(
                    {PieceTag::BackLoopConnector, {toks[i - 1], Character::back()}});
            d.pieces.push_back({PieceTag::BackLoop, {Character::back()}});
            if (i + 1 < toks.size() && toks[i + 1].is_passage())
                d.pieces.push_back(
                    {PieceTag::BackLoopConnector, {Character::back(), toks[i + 1]}});
            prev_class.reset();
            ++i;
            run_start = i;
            continue;
        }
        int cls = passage_class(i);
        if (prev_class && cls != *prev_class) {
            close_run(i);
            if (toks[i - 1].is_passage() && toks[i].is_passage())
                d.pieces.push_back({PieceTag::Connector, {toks[i - 1], toks[i]}});
            run_start = i;
        }
        if (!prev_class) run_start = i;
        prev_class = cls;
        ++i;
    }
    close_run(toks.size());

    // Crossing annotations from the side-alternation scan.
    Side state = Side::Unset;
    Side p_side = Side::Unset;
    if (auto it = spec.boundary().find(Index::P()); it != spec.boundary().end())
        p_side = it->second == Kind::Under ? Side::Above : Side::Below;
    if (c.is_arc()) state = p_side;
    for (std::size_t k = 0; k < toks.size(); ++k) {
        const Character& t = toks[k];
        if (!t.is_passage()) continue;
        Side f;
        if (spec.turbulent(t.index))
            f = forced_side(spec, t);
        else if (t.index == eng.n1)
            f = n1_float_side(t);
        else {
            state = Side::Unset;
            continue;
        }
        if (f == Side::Unset) continue;
        if (state != Side::Unset && f != state)
            d.crossings.push_back({k, state == Side::Above});
        state = f;
    }
    if (c.is_arc() && state != Side::Unset && state != p_side)
        d.crossings.push_back({toks.size() - 1, state == Side::Above});
    return d;
}

bool is_loop(const Code& c) {
    const auto& t = c.tokens();
    if (t.size() == 1 && t[0].kind == Kind::Back) return true;
    if (t.empty()) return false;
    bool has_turn = false;
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (t[i].is_passage() && t[i + 1].is_passage() && t[i].index == t[i + 1].index &&
            t[i].kind != t[i + 1].kind)
            has_turn = true;
    if (t.size() == 2) return has_turn;
    return has_turn && t.front() == t.back();
}

bool loop_is_trivial_direct(const ShiftSpec& s, const Code& c) {
    if (!is_loop(c)) throw shift_error("not a loop: " + c.str());
    return apply_shift(s, c).empty();
}

bool loop_theorem_form(const ShiftSpec& s, const Code& c) {
    if (!is_loop(c)) throw shift_error("not a loop: " + c.str());
    const auto& t = c.tokens();
    if (t.size() < 4 || t.size() % 2 != 0) return false;
    std::size_t m = t.size() / 2 - 1; // wrap at positions m, m+1
    Index n1 = s.n1_index();
    if (!(t[m].is_passage() && t[m + 1].is_passage())) return false;
    if (t[m].index != n1 || t[m + 1].index != n1 || t[m].kind == t[m + 1].kind) return false;
    // Both walks follow the boundary outward from n1 to some turbulent k.
    for (std::size_t j = 0; j < m; ++j) {
        const Character& a = t[j];
        const Character& b = t[t.size() - 1 - j];
        if (!a.is_passage() || a != b) return false;
        if (!s.turbulent(a.index)) return false;
        if (a.kind != s.boundary_side(a.index)) return false;
    }
    // The walk must march monotonically from k to the n1 end.
    for (std::size_t j = 0; j + 1 < m; ++j) {
        Index cur = t[j].index, nxt = t[j + 1].index;
        bool toward = s.direction() == Direction::Right ? nxt == cur.pred() : nxt == cur.succ();
        if (!toward) return false;
    }
    if (m > 0) {
        Index last = t[m - 1].index;
        bool adj = s.direction() == Direction::Right ? last == n1.succ() : last == n1.pred();
        if (!adj) return false;
    }
    return m > 0;
}

std::string format_shift(const ShiftSpec& s) {
    std::ostringstream os;
    os << (s.direction() == Direction::Right ? "right" : "left") << ' ' << s.n1() << ' '
       << s.n2();
    std::vector<Index> keys;
    for (const auto& [k, v] : s.boundary()) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (Index k : keys)
        os << ' ' << k.str() << ':' << (s.boundary_side(k) == Kind::Over ? 'o' : 'u');
    return os.str();
}

ShiftSpec parse_shift(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string dir;
    std::int64_t n1, n2;
    if (!(is >> dir >> n1 >> n2)) throw shift_error("bad shift record");
    Direction d;
    if (dir == "right")
        d = Direction::Right;
    else if (dir == "left")
        d = Direction::Left;
    else
        throw shift_error("bad direction: " + dir);
    std::unordered_map<Index, Kind> bnd;
    std::string item;
    while (is >> item) {
        auto colon = item.find(':');
        if (colon == std::string::npos || colon + 2 != item.size())
            throw shift_error("bad boundary item: " + item);
        std::string idx = item.substr(0, colon);
        char side = item[colon + 1];
        Index index = idx == "P" ? Index::P() : Index::of(std::stoll(idx));
        if (side != 'o' && side != 'u') throw shift_error("bad boundary side: " + item);
        bnd[index] = side == 'o' ? Kind::Over : Kind::Under;
    }
    return make_shift(d, n1, n2, std::move(bnd));
}

} // namespace flute
