#include "flute/traintrack.hpp"

#include <cmath>
#include <sstream>

namespace flute {

CurveCode to_curve(const Code& arc) {
    if (!is_symmetric(arc)) throw traintrack_error("to_curve needs a symmetric arc");
    std::vector<Character> w(arc.tokens().begin() + 1, arc.tokens().end() - 1);
    // Close up around the puncture on the side that keeps p with the central
    // puncture; the basepoint convention puts the closure pair last.
    w.push_back(Character::under(Index::P()));
    w.push_back(Character::over(Index::P()));
    return {std::move(w)};
}

Code from_curve(const CurveCode& c) {
    if (c.word.size() < 2) throw traintrack_error("curve word too short");
    std::vector<Character> t;
    t.push_back(Character::start());
    t.insert(t.end(), c.word.begin(), c.word.end() - 2);
    t.push_back(Character::start());
    return Code::arc(std::move(t));
}

std::string format_curve(const CurveCode& c) {
    std::ostringstream os;
    for (std::size_t i = 0; i < c.word.size(); ++i) {
        if (i) os << ' ';
        os << c.word[i].str();
    }
    return os.str();
}

std::string ThetaToken::str() const {
    switch (kind) {
    case ThetaKind::Over: return index.str() + "o";
    case ThetaKind::Under: return index.str() + "u";
    case ThetaKind::L: return index.str() + "L";
    case ThetaKind::R: return index.str() + "R";
    case ThetaKind::RR: return index.str() + "RR";
    }
    return "?";
}

namespace {

bool p_cluster(Index i) { return i.is_p() || i == Index::of(-1); }

// Connector path between the pants of consecutive passages. The pants around
// the special puncture meet their neighbors through dedicated gap pants; all
// other adjacent cuffs are identified.
void emit_connectors(std::vector<ThetaToken>& out, Index from, Index to) {
    if (from == to || (p_cluster(from) && p_cluster(to))) return;
    bool rightward = to > from;
    if (p_cluster(from)) {
        if (rightward) { // to == 0
            out.push_back({ThetaKind::R, Index::of(-1)});
            out.push_back({ThetaKind::RR, Index::of(-1)});
            out.push_back({ThetaKind::L, Index::of(0)});
        } else { // to == -2
            out.push_back({ThetaKind::L, Index::of(-1)});
            out.push_back({ThetaKind::RR, Index::of(-2)});
            out.push_back({ThetaKind::R, Index::of(-2)});
        }
        return;
    }
    if (p_cluster(to)) {
        if (rightward) { // from == -2
            out.push_back({ThetaKind::R, Index::of(-2)});
            out.push_back({ThetaKind::RR, Index::of(-2)});
            out.push_back({ThetaKind::L, Index::of(-1)});
        } else { // from == 0
            out.push_back({ThetaKind::L, Index::of(0)});
            out.push_back({ThetaKind::RR, Index::of(-1)});
            out.push_back({ThetaKind::R, Index::of(-1)});
        }
        return;
    }
    if (rightward) {
        out.push_back({ThetaKind::R, from});
        out.push_back({ThetaKind::L, to});
    } else {
        out.push_back({ThetaKind::L, from});
        out.push_back({ThetaKind::R, to});
    }
}

} // namespace

ThetaCode theta_encode(const CurveCode& c) {
    for (const auto& t : c.word)
        if (!t.is_passage()) throw traintrack_error("unsupported token " + t.str());
    std::vector<ThetaToken> out;
    std::size_t n = c.word.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Character& t = c.word[i];
        out.push_back({t.is_over() ? ThetaKind::Over : ThetaKind::Under, t.index});
        const Character& nxt = c.word[(i + 1) % n];
        emit_connectors(out, t.index, nxt.index);
    }
    // cyclic merge of adjacent duplicates
    bool changed = true;
    while (changed && out.size() > 1) {
        changed = false;
        for (std::size_t i = 0; i < out.size(); ++i) {
            std::size_t j = (i + 1) % out.size();
            if (out[i] == out[j]) {
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(j));
                changed = true;
                break;
            }
        }
    }
    // rotate so the word starts at the Po of the closure
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].kind == ThetaKind::Over && out[i].index.is_p()) {
            std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(i), out.end());
            break;
        }
    }
    return {std::move(out)};
}

std::string format_theta(const ThetaCode& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.word.size(); ++i) {
        if (i) os << ' ';
        os << t.word[i].str();
    }
    return os.str();
}

std::size_t theta_length(const ThetaCode& t) { return t.word.size(); }

std::size_t theta_prefix_agreement(const ThetaCode& a, const ThetaCode& b) {
    std::size_t n = std::min(a.word.size(), b.word.size());
    std::size_t i = 0;
    while (i < n && a.word[i] == b.word[i]) ++i;
    return i;
}

TransitionMatrix transition_matrix(int n) {
    if (n < 1) throw traintrack_error("transition_matrix needs n >= 1");
    if (n <= 2) {
        return {4,
                {5, 6, 0, 2, //
                 6, 9, 0, 2, //
                 10, 10, 2, 3, //
                 6, 6, 1, 2}};
    }
    return {5,
            {5, 6, 0, 2, 0, //
             6, 9, 0, 2, 0, //
             10, 10, 2, 2, 1, //
             6, 6, 1, 1, 1, //
             6, 6, 1, 2, 0}};
}

bool perron_frobenius_check(const TransitionMatrix& m) {
    std::size_t d = m.dim;
    if (d == 0) return false;
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            std::int64_t v = 0;
            for (std::size_t k = 0; k < d; ++k) v += m.at(r, k) * m.at(k, c);
            if (v <= 0) return false;
        }
    return true;
}

double leading_eigenvalue(const TransitionMatrix& m) {
    std::size_t d = m.dim;
    if (d == 0) throw traintrack_error("empty matrix");
    if (d == 1) return static_cast<double>(m.at(0, 0));
    std::vector<double> v(d, 1.0), w(d, 0.0);
    double lambda = 0.0;
    for (int iter = 0; iter < 200000; ++iter) {
        double norm = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c)
                s += static_cast<double>(m.at(r, c)) * v[c];
            w[r] = s;
            norm += std::abs(s);
        }
        if (norm == 0.0) return 0.0;
        double next = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
            w[r] /= norm;
            next += w[r];
        }
        // Rayleigh-style estimate via the normalization factor
        double est = norm / [&] {
            double s = 0.0;
            for (double x : v) s += std::abs(x);
            return s;
        }();
        v.swap(w);
        if (iter > 2 && std::abs(est - lambda) <= 1e-12 * std::max(1.0, std::abs(est)))
            return est;
        lambda = est;
    }
    throw traintrack_error("power iteration did not converge");
}

std::string format_matrix(const TransitionMatrix& m) {
    std::ostringstream os;
    for (std::size_t r = 0; r < m.dim; ++r) {
        for (std::size_t c = 0; c < m.dim; ++c) {
            if (c) os << ' ';
            os << m.at(r, c);
        }
        os << '\n';
    }
    return os.str();
}

} // namespace flute
