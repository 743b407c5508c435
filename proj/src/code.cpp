#include "flute/code.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

namespace flute {

std::string Character::str() const {
    switch (kind) {
    case Kind::Start: return "Ps";
    case Kind::Over: return index.str() + "o";
    case Kind::Under: return index.str() + "u";
    case Kind::Back: return "C";
    }
    return "?";
}

namespace {

// Adjacency between consecutive tokens. Start acts like index P. Back loops
// re-enter the front between the same pair of punctures, so their neighbors
// carry equal or adjacent indices.
bool tokens_adjacent(const Character& a, const Character& b) {
    if (a.kind == Kind::Back && b.kind == Kind::Back) return false;
    if (a.kind == Kind::Back || b.kind == Kind::Back) return true;
    Index ia = a.index, ib = b.index;
    return ia == ib || ia.adjacent(ib);
}

void validate(const std::vector<Character>& t, Flavor f) {
    if (f == Flavor::Arc) {
        if (t.size() < 2 || t.front().kind != Kind::Start || t.back().kind != Kind::Start)
            throw code_error("arc must start and end with Ps");
        for (std::size_t i = 1; i + 1 < t.size(); ++i)
            if (t[i].kind == Kind::Start) throw code_error("interior Ps in arc");
    } else {
        for (std::size_t i = 0; i < t.size(); ++i)
            if (t[i].kind == Kind::Start && i != 0 && i + 1 != t.size())
                throw code_error("interior Ps in segment");
        if (t.size() >= 2 && t.front().kind == Kind::Start && t.back().kind == Kind::Start)
            throw code_error("segment has two Ps");
    }
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (!tokens_adjacent(t[i], t[i + 1]))
            throw code_error("non-adjacent indices: " + t[i].str() + " " + t[i + 1].str());
    }
    // A back loop needs front passages on both sides (or a free segment end).
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i].kind != Kind::Back) continue;
        if (i > 0 && !t[i - 1].is_passage()) throw code_error("C next to " + t[i - 1].str());
        if (i + 1 < t.size() && !t[i + 1].is_passage())
            throw code_error("C next to " + t[i + 1].str());
    }
}

} // namespace

Code::Code(std::vector<Character> toks, Flavor f) : toks_(std::move(toks)), flavor_(f) {
    validate(toks_, flavor_);
}

bool Code::has_back_loop() const {
    return std::any_of(toks_.begin(), toks_.end(),
                       [](const Character& c) { return c.kind == Kind::Back; });
}

bool Code::supported_on(Index lo, Index hi) const {
    for (const auto& t : toks_)
        if (t.is_passage() && (t.index < lo || t.index > hi)) return false;
    return true;
}

std::string Code::str() const { return format_code(*this); }

std::ostream& operator<<(std::ostream& os, const Code& c) { return os << format_code(c); }

Code parse_code(std::string_view text, Flavor flavor) {
    std::vector<Character> toks;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    while (i < text.size()) {
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        std::string_view tok = text.substr(i, j - i);
        i = j;
        skip_ws();

        if (tok == "C") {
            toks.push_back(Character::back());
            continue;
        }
        if (tok.size() < 2) throw parse_error("bad token: " + std::string(tok));
        char suffix = tok.back();
        std::string_view idx = tok.substr(0, tok.size() - 1);
        Index index;
        if (idx == "P") {
            index = Index::P();
        } else {
            std::size_t pos = 0;
            bool neg = idx[pos] == '-';
            if (neg) ++pos;
            if (pos >= idx.size()) throw parse_error("bad token: " + std::string(tok));
            std::int64_t v = 0;
            for (; pos < idx.size(); ++pos) {
                if (!std::isdigit(static_cast<unsigned char>(idx[pos])))
                    throw parse_error("bad token: " + std::string(tok));
                v = v * 10 + (idx[pos] - '0');
            }
            index = Index::of(neg ? -v : v);
        }
        switch (suffix) {
        case 'o': toks.push_back(Character::over(index)); break;
        case 'u': toks.push_back(Character::under(index)); break;
        case 's':
            if (!index.is_p()) throw parse_error("s suffix requires index P: " + std::string(tok));
            toks.push_back(Character::start());
            break;
        default: throw parse_error("bad suffix: " + std::string(tok));
        }
    }
    return Code(std::move(toks), flavor);
}

Code parse_auto(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    bool arc = text.substr(i, 2) == "Ps";
    return parse_code(text, arc ? Flavor::Arc : Flavor::Segment);
}

std::string format_code(const Code& c) {
    std::ostringstream os;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) os << ' ';
        os << c[i].str();
    }
    return os.str();
}

namespace {

// One pass of the stack reduction plus the boundary rule; returns true if
// anything changed.
bool reduce_pass(std::vector<Character>& t) {
    bool changed = false;
    std::vector<Character> out;
    out.reserve(t.size());
    for (const auto& tok : t) {
        if (!out.empty() && out.back().is_passage() && tok.is_passage() && out.back() == tok) {
            out.pop_back();
            changed = true;
            continue;
        }
        if (!out.empty() && out.back().kind == Kind::Back && tok.kind == Kind::Back) {
            // Two back excursions through the same gap merge into one.
            changed = true;
            continue;
        }
        out.push_back(tok);
    }
    // A P passage next to a start marker unwinds into the puncture.
    auto drop_at = [&](std::size_t idx) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(idx));
        changed = true;
    };
    bool trimmed = true;
    while (trimmed) {
        trimmed = false;
        if (out.size() >= 2 && out.front().kind == Kind::Start && out[1].is_passage() &&
            out[1].index.is_p()) {
            drop_at(1);
            trimmed = true;
        }
        if (out.size() >= 2 && out.back().kind == Kind::Start &&
            out[out.size() - 2].is_passage() && out[out.size() - 2].index.is_p()) {
            drop_at(out.size() - 2);
            trimmed = true;
        }
    }
    t = std::move(out);
    return changed;
}

} // namespace

Code reduce(const Code& c) {
    std::vector<Character> t = c.tokens();
    while (reduce_pass(t)) {
    }
    return Code(std::move(t), c.flavor());
}

bool is_reduced(const Code& c) {
    std::vector<Character> t = c.tokens();
    return !reduce_pass(t);
}

Code reverse(const Code& c) {
    std::vector<Character> t = c.tokens();
    std::reverse(t.begin(), t.end());
    return Code(std::move(t), c.flavor());
}

Code efficient_concat(const Code& a, const Code& b) {
    if (a.empty() || b.empty()) throw code_error("efficient_concat of empty code");
    if (a.tokens().back() != b.tokens().front())
        throw code_error("efficient_concat mismatch: " + a.tokens().back().str() + " vs " +
                         b.tokens().front().str());
    std::vector<Character> t(a.tokens().begin(), a.tokens().end() - 1);
    t.insert(t.end(), b.tokens().begin(), b.tokens().end());
    Flavor f = (!t.empty() && t.front().kind == Kind::Start && t.back().kind == Kind::Start)
                   ? Flavor::Arc
                   : Flavor::Segment;
    return reduce(Code(std::move(t), f));
}

Code concat(const Code& a, const Code& b) {
    std::vector<Character> t = a.tokens();
    t.insert(t.end(), b.tokens().begin(), b.tokens().end());
    Flavor f = (t.size() >= 2 && t.front().kind == Kind::Start && t.back().kind == Kind::Start)
                   ? Flavor::Arc
                   : Flavor::Segment;
    return Code(std::move(t), f);
}

std::size_t code_length(const Code& c) { return c.size(); }

std::pair<Code, Code> half_split(const Code& c) {
    if (!c.is_arc()) throw code_error("half_split needs an arc");
    if (!is_reduced(c)) throw code_error("half_split needs a reduced arc");
    std::size_t h = c.size() / 2;
    std::vector<Character> ring(c.tokens().begin(), c.tokens().begin() + static_cast<std::ptrdiff_t>(h));
    std::vector<Character> rest(c.tokens().begin() + static_cast<std::ptrdiff_t>(h), c.tokens().end());
    return {Code::segment(std::move(ring)), Code::segment(std::move(rest))};
}

namespace {

std::size_t lcp(const std::vector<Character>& a, const std::vector<Character>& b) {
    std::size_t n = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < n && a[i] == b[i]) ++i;
    return i;
}

} // namespace

std::size_t overlap_length(const Code& a, const Code& b) {
    const auto& ta = a.tokens();
    const auto& tb = b.tokens();
    std::vector<Character> ra = ta, rb = tb;
    std::reverse(ra.begin(), ra.end());
    std::reverse(rb.begin(), rb.end());
    std::size_t m = lcp(ta, tb);
    m = std::max(m, lcp(ta, rb));
    m = std::max(m, lcp(ra, tb));
    m = std::max(m, lcp(ra, rb));
    return m;
}

bool is_symmetric(const Code& c) {
    if (!c.is_arc()) return false;
    std::size_t n = c.size();
    if (n < 4 || n % 2 != 0) return false;
    for (std::size_t i = 0; i < n / 2 - 1; ++i)
        if (c[i] != c[n - 1 - i]) return false;
    const Character& q1 = c[n / 2 - 1];
    const Character& q2 = c[n / 2];
    return q1.is_passage() && q2.is_passage() && q1.index == q2.index;
}

} // namespace flute
