#include "flute/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

namespace flute {

namespace {

// ---------------------------------------------------------------- events

struct Event {
    std::int64_t station; // Index::key() of the puncture line
    int cls;              // 0 under, 1 attachment, 2 over
    int dir;              // travel direction at this event: +1 right, -1 left
};

struct Strand {
    std::vector<Event> events;
    std::vector<Character> tokens; // passages only, aligned with events[off..]
    bool arc = false;
};

int direction_of_first(const std::vector<Character>& p) {
    if (p.empty()) return +1;
    std::size_t k = 0;
    int flips = 0;
    while (k + 1 < p.size() && p[k + 1].index == p[k].index) {
        ++k;
        ++flips;
    }
    if (k + 1 < p.size()) {
        int d = p[k + 1].index > p[k].index ? +1 : -1;
        return flips % 2 == 0 ? d : -d;
    }
    return +1;
}

Strand build_strand(const Code& c) {
    if (c.has_back_loop()) throw geometry_error("back loops have no planar realization");
    if (!is_reduced(c)) throw geometry_error("realize needs a reduced code");
    Strand s;
    s.arc = c.is_arc();
    std::vector<Character> p;
    for (const auto& t : c.tokens())
        if (t.is_passage()) p.push_back(t);
    std::vector<int> dir(p.size(), +1);
    if (!p.empty()) {
        if (s.arc)
            dir[0] = p[0].index >= Index::of(0) ? +1 : -1;
        else
            dir[0] = direction_of_first(p);
        for (std::size_t i = 1; i < p.size(); ++i) {
            if (p[i].index == p[i - 1].index)
                dir[i] = -dir[i - 1];
            else
                dir[i] = p[i].index > p[i - 1].index ? +1 : -1;
        }
        // The code fixes the direction of every step; an inconsistent turn
        // means the token word bounds no embedded strand.
        for (std::size_t i = 1; i < p.size(); ++i) {
            if (p[i].index != p[i - 1].index) {
                int step = p[i].index > p[i - 1].index ? +1 : -1;
                if (step != dir[i]) throw geometry_error("code is not realizable: " + c.str());
            }
        }
    }
    if (s.arc) s.events.push_back({Index::P().key(), 1, p.empty() ? +1 : dir[0]});
    for (std::size_t i = 0; i < p.size(); ++i)
        s.events.push_back({p[i].index.key(), p[i].is_over() ? 2 : 0, dir[i]});
    if (s.arc) s.events.push_back({Index::P().key(), 1, p.empty() ? +1 : -dir[p.size() - 1]});
    s.tokens = std::move(p);
    return s;
}

// ---------------------------------------------------------- visit ordering

struct VisitRef {
    int strand;
    int pos;
};

class Diagram {
public:
    std::vector<Strand> strands;

    const Event& ev(VisitRef v) const {
        return strands[static_cast<std::size_t>(v.strand)]
            .events[static_cast<std::size_t>(v.pos)];
    }
    bool valid(int strand, int pos) const {
        return pos >= 0 &&
               pos < static_cast<int>(strands[static_cast<std::size_t>(strand)].events.size());
    }

    // Walk state: a visit plus the walking orientation through the event list.
    struct Walk {
        int strand;
        int pos;
        int orient; // +1 along the list, -1 against it
    };

    std::optional<Event> step(Walk& w) const {
        int np = w.pos + w.orient;
        if (!valid(w.strand, np)) return std::nullopt;
        w.pos = np;
        Event e = ev({w.strand, np});
        if (w.orient < 0) e.dir = -e.dir;
        return e;
    }

    // Compares two co-located visits walking outward in the same spatial
    // direction; returns -1 if a stays closer to the puncture, +1 if b does,
    // 0 on a full tie.
    int compare_walk(Walk a, Walk b) const {
        Event ea = ev({a.strand, a.pos});
        Event eb = ev({b.strand, b.pos});
        if (a.orient < 0) ea.dir = -ea.dir;
        if (b.orient < 0) eb.dir = -eb.dir;
        long guard = static_cast<long>(strands[static_cast<std::size_t>(a.strand)].events.size() +
                                       strands[static_cast<std::size_t>(b.strand)].events.size()) +
                     4;
        while (guard-- > 0) {
            std::int64_t st = ea.station;
            int cls = ea.cls;
            auto na = a, nb = b;
            auto sa = step(na), sb = step(nb);
            if (!sa && !sb) return 0;
            bool ta = sa && sa->station == st && sa->cls != cls; // turn in place
            bool tb = sb && sb->station == st && sb->cls != cls;
            if (!sa || !sb) {
                // A free segment end tucks in next to the puncture.
                if (!sa && (tb || sb)) return -1;
                return +1;
            }
            if (ta != tb) return ta ? -1 : +1;
            if (sa->station != sb->station || sa->cls != sb->cls) {
                // Same side, same heading: the one arriving lower is closer
                // over a puncture, the one arriving higher is closer under it.
                int va = sa->cls, vb = sb->cls;
                if (sa->station != sb->station) {
                    // One of them reached the attachment line early; compare
                    // by arrival class as well (attachment sits in between).
                    va = sa->cls;
                    vb = sb->cls;
                }
                bool a_closer = cls == 2 ? va < vb : va > vb;
                return a_closer ? -1 : +1;
            }
            a = na;
            b = nb;
            ea = *sa;
            eb = *sb;
        }
        return 0;
    }

    int compare_visits(VisitRef u, VisitRef v) const {
        const Event& eu = ev(u);
        const Event& ev_ = ev(v);
        if (eu.cls == 1 && ev_.cls == 1 && eu.dir != ev_.dir) return eu.dir < ev_.dir ? -1 : +1;
        auto orient_for = [&](VisitRef r) {
            const Event& e = ev(r);
            return e.dir >= 0 ? +1 : -1;
        };
        Walk a{u.strand, u.pos, orient_for(u)};
        Walk b{v.strand, v.pos, orient_for(v)};
        int fwd = compare_walk(a, b);
        if (fwd != 0) return fwd;
        Walk ra{u.strand, u.pos, -a.orient};
        Walk rb{v.strand, v.pos, -b.orient};
        int bwd = compare_walk(ra, rb);
        if (bwd != 0) return bwd;
        if (u.strand != v.strand) return u.strand < v.strand ? -1 : +1;
        if (u.pos != v.pos) return u.pos < v.pos ? -1 : +1;
        return 0;
    }

    // vertical position of every event: higher value = higher in the plane
    std::map<std::pair<std::int64_t, int>, std::vector<VisitRef>> slots;
    std::vector<std::vector<long>> vpos; // per strand, per event

    void assign_positions() {
        slots.clear();
        vpos.assign(strands.size(), {});
        for (std::size_t s = 0; s < strands.size(); ++s)
            vpos[s].assign(strands[s].events.size(), 0);
        for (std::size_t s = 0; s < strands.size(); ++s)
            for (std::size_t p = 0; p < strands[s].events.size(); ++p) {
                const Event& e = strands[s].events[p];
                slots[{e.station, e.cls}].push_back({static_cast<int>(s), static_cast<int>(p)});
            }
        for (auto& [key, vs] : slots) {
            std::sort(vs.begin(), vs.end(), [&](VisitRef a, VisitRef b) {
                return compare_visits(a, b) < 0;
            });
            // rank 0 = closest to the puncture
            long n = static_cast<long>(vs.size());
            for (long r = 0; r < n; ++r) {
                const VisitRef& v = vs[static_cast<std::size_t>(r)];
                long h = 0;
                switch (key.second) {
                case 2: h = 4 + 4 * r; break;           // over: closest lowest
                case 0: h = -4 - 4 * r; break;          // under: closest highest
                case 1: h = -n + 1 + 2 * r; break;      // attachments in between
                }
                vpos[static_cast<std::size_t>(v.strand)][static_cast<std::size_t>(v.pos)] = h;
            }
        }
    }
};

// ------------------------------------------------------------- PL material

struct V2 {
    double x, y;
};

double station_x(std::int64_t key) { return static_cast<double>(key) / 2.0; }

// Materializes a strand as an explicit polyline from assigned positions.
std::vector<V2> materialize(const Diagram& d, std::size_t s, double unit, double jitter) {
    const Strand& st = d.strands[s];
    std::vector<V2> pts;
    auto height = [&](std::size_t p) {
        return static_cast<double>(d.vpos[s][p]) * unit + jitter;
    };
    for (std::size_t p = 0; p < st.events.size(); ++p) {
        const Event& e = st.events[p];
        double x = station_x(e.station);
        double y = height(p);
        if (p > 0 && st.events[p - 1].station == e.station &&
            st.events[p - 1].cls != e.cls) {
            // turn: route around the puncture on the far side
            double side = e.dir > 0 ? -1.0 : 1.0; // post-turn direction tells the cap side
            double reach =
                0.30 + 0.4 * std::max(std::abs(height(p - 1)), std::abs(y));
            pts.push_back({x + side * reach, pts.back().y});
            pts.push_back({x + side * reach, y});
        }
        pts.push_back({x, y});
    }
    return pts;
}

double cross2(V2 a, V2 b) { return a.x * b.y - a.y * b.x; }

std::optional<std::pair<double, double>> seg_intersect(V2 a, V2 b, V2 c, V2 d) {
    V2 r{b.x - a.x, b.y - a.y}, s{d.x - c.x, d.y - c.y};
    double den = cross2(r, s);
    if (std::abs(den) < 1e-14) return std::nullopt;
    V2 ac{c.x - a.x, c.y - a.y};
    double t = cross2(ac, s) / den;
    double u = cross2(ac, r) / den;
    const double eps = 1e-9;
    if (t <= eps || t >= 1 - eps || u <= eps || u >= 1 - eps) return std::nullopt;
    return std::make_pair(t, u);
}

struct Crossing {
    double ta, tb; // positions along the two polylines
    V2 at;
    int sign; // orientation sign of (dir_a x dir_b)
};

std::vector<Crossing> pl_crossings(const std::vector<V2>& A, const std::vector<V2>& B) {
    std::vector<Crossing> out;
    for (std::size_t i = 0; i + 1 < A.size(); ++i)
        for (std::size_t j = 0; j + 1 < B.size(); ++j) {
            auto hit = seg_intersect(A[i], A[i + 1], B[j], B[j + 1]);
            if (!hit) continue;
            V2 da{A[i + 1].x - A[i].x, A[i + 1].y - A[i].y};
            V2 db{B[j + 1].x - B[j].x, B[j + 1].y - B[j].y};
            int sg = cross2(da, db) > 0 ? +1 : -1;
            V2 at{A[i].x + hit->first * da.x, A[i].y + hit->first * da.y};
            out.push_back({static_cast<double>(i) + hit->first,
                           static_cast<double>(j) + hit->second, at, sg});
        }
    return out;
}

} // namespace

// ----------------------------------------------------------- realize_front

WiringDiagram realize_front(const std::vector<Code>& codes) {
    Diagram d;
    for (const auto& c : codes) d.strands.push_back(build_strand(c));
    d.assign_positions();
    WiringDiagram w;
    std::int64_t lo = 0, hi = 0;
    bool first = true;
    double unit = 0.02;
    for (std::size_t s = 0; s < d.strands.size(); ++s) {
        long maxv = 4;
        for (long v : d.vpos[s]) maxv = std::max(maxv, std::abs(v));
        unit = std::min(unit, 0.9 / static_cast<double>(maxv + 1));
    }
    for (std::size_t s = 0; s < d.strands.size(); ++s) {
        auto pts = materialize(d, s, unit, 0.0);
        std::vector<StrandPoint> sp;
        for (const auto& p : pts) sp.push_back({static_cast<std::int64_t>(std::llround(p.x * 2)),
                                                p.y});
        for (const auto& e : d.strands[s].events) {
            if (first || e.station < lo) lo = e.station;
            if (first || e.station > hi) hi = e.station;
            first = false;
        }
        w.strands.push_back(std::move(sp));
    }
    w.lo = lo;
    w.hi = hi;
    return w;
}

std::string dump_strands(const WiringDiagram& w) {
    std::ostringstream os;
    for (std::size_t s = 0; s < w.strands.size(); ++s) {
        for (const auto& p : w.strands[s])
            os << s << ' ' << p.station << ' ' << p.height << '\n';
    }
    return os.str();
}

// ----------------------------------------------------- minimal intersection

namespace {

struct PieceEnd {
    long v;   // vertical position (scaled; class folded in)
    int side; // which station of the corridor: 0 left, 1 right
};

long folded_vpos(int cls, long v) {
    // classes: under 0, att 1, over 2; encode total vertical order
    switch (cls) {
    case 2: return 1'000'000'000L + v;
    case 1: return v;
    default: return -1'000'000'000L + v;
    }
}

struct Through {
    long lv, rv;
    int strand;
};
struct Cap {
    long a, b; // folded vposes at its station, a < b
    int strand;
};

// counts inversion pairs between strands using a Fenwick tree
struct Bit {
    std::vector<long> t;
    explicit Bit(std::size_t n) : t(n + 1, 0) {}
    void add(std::size_t i) {
        for (++i; i < t.size(); i += i & (~i + 1)) ++t[i];
    }
    long sum(std::size_t i) const { // count of entries < i
        long s = 0;
        for (; i > 0; i -= i & (~i + 1)) s += t[i];
        return s;
    }
};

long count_through_inversions(std::vector<Through> xs) {
    if (xs.size() < 2) return 0;
    // coordinate-compress right values
    std::vector<long> rv;
    for (const auto& t : xs) rv.push_back(t.rv);
    std::sort(rv.begin(), rv.end());
    rv.erase(std::unique(rv.begin(), rv.end()), rv.end());
    auto rank = [&](long v) {
        return static_cast<std::size_t>(std::lower_bound(rv.begin(), rv.end(), v) - rv.begin());
    };
    std::sort(xs.begin(), xs.end(), [](const Through& a, const Through& b) {
        return a.lv > b.lv; // scan top-down on the left station
    });
    // total inversions
    auto inv = [&](auto&& filter) {
        Bit bit(rv.size() + 1);
        long c = 0;
        for (const auto& t : xs) {
            if (!filter(t)) continue;
            c += bit.sum(rank(t.rv)); // earlier (higher-left) pieces ending lower-right...
            bit.add(rank(t.rv));
        }
        return c;
    };
    // pieces scanned from the top on the left; an inversion is an earlier
    // piece whose right end is BELOW this one's right end.
    auto inv_count = [&](auto&& filter) {
        Bit bit(rv.size() + 1);
        long c = 0;
        long seen = 0;
        for (const auto& t : xs) {
            if (!filter(t)) continue;
            long below_or_eq = bit.sum(rank(t.rv) + 1);
            c += seen - below_or_eq; // earlier pieces strictly above on the right? no:
            (void)below_or_eq;
            ++seen;
            bit.add(rank(t.rv));
        }
        return c;
    };
    (void)inv;
    (void)inv_count;
    // Straightforward O(n log n): inversions = pairs with lv_a > lv_b but rv_a < rv_b.
    auto inversions = [&](auto&& keep) {
        Bit bit(rv.size() + 1);
        long c = 0;
        for (const auto& t : xs) { // already sorted by lv descending
            if (!keep(t)) continue;
            c += bit.sum(rank(t.rv)); // previously seen with rv strictly smaller
            bit.add(rank(t.rv));
        }
        return c;
    };
    long all = inversions([](const Through&) { return true; });
    long a_only = inversions([](const Through& t) { return t.strand == 0; });
    long b_only = inversions([](const Through& t) { return t.strand == 1; });
    return all - a_only - b_only;
}

// Crossings between the two strands of a two-strand diagram.
long count_pair_crossings(Diagram& d) {
    d.assign_positions();
    // Bucket pieces by corridor (keyed by the left station key).
    std::map<std::int64_t, std::vector<Through>> throughs;
    std::map<std::pair<std::int64_t, int>, std::vector<Cap>> caps; // (station, opens-right?)
    for (std::size_t s = 0; s < d.strands.size(); ++s) {
        const Strand& st = d.strands[s];
        for (std::size_t p = 0; p + 1 < st.events.size(); ++p) {
            const Event& e0 = st.events[p];
            const Event& e1 = st.events[p + 1];
            long v0 = folded_vpos(e0.cls, d.vpos[s][p]);
            long v1 = folded_vpos(e1.cls, d.vpos[s][p + 1]);
            if (e0.station == e1.station) {
                bool opens_right = e1.dir < 0; // post-turn direction away from the cap
                caps[{e0.station, opens_right ? 1 : 0}].push_back(
                    {std::min(v0, v1), std::max(v0, v1), static_cast<int>(s)});
            } else {
                std::int64_t left = std::min(e0.station, e1.station);
                bool l2r = e0.station < e1.station;
                throughs[left].push_back(
                    {l2r ? v0 : v1, l2r ? v1 : v0, static_cast<int>(s)});
            }
        }
    }
    long total = 0;
    for (auto& [st, xs] : throughs) total += count_through_inversions(xs);
    // caps vs throughs and caps vs caps
    for (auto& [key, cs] : caps) {
        auto [station, opens_right] = key;
        // throughs attached at this station on the cap side
        std::vector<std::pair<long, int>> ends; // (folded vpos at this station, strand)
        std::int64_t corridor = opens_right ? station : station - 1;
        auto it = throughs.find(corridor);
        if (it != throughs.end()) {
            for (const auto& t : it->second) {
                long v = opens_right ? t.lv : t.rv;
                // only pieces genuinely attached at this station
                ends.push_back({v, t.strand});
            }
        }
        for (const auto& c : cs) {
            for (const auto& [v, strand] : ends) {
                if (strand == c.strand) continue;
                if (v > c.a && v < c.b) ++total;
            }
            for (const auto& c2 : cs) {
                if (c2.strand <= c.strand) continue;
                bool in1 = c2.a > c.a && c2.a < c.b;
                bool in2 = c2.b > c.a && c2.b < c.b;
                if (in1 != in2) ++total;
            }
        }
    }
    return total;
}

} // namespace

std::size_t intersection_number(const Code& a, const Code& b) {
    Diagram d;
    d.strands.push_back(build_strand(a));
    d.strands.push_back(build_strand(b));
    return static_cast<std::size_t>(count_pair_crossings(d));
}

bool are_disjoint(const Code& a, const Code& b) { return intersection_number(a, b) == 0; }

// ----------------------------------------------------------------- oracle

namespace {

std::vector<V2> naive_polyline(const Code& c, int which) {
    Strand st = build_strand(c);
    // heights by raw visit order, distinct per strand
    std::map<std::pair<std::int64_t, int>, int> seen;
    std::vector<double> h(st.events.size(), 0.0);
    std::map<std::pair<std::int64_t, int>, int> counts;
    for (const auto& e : st.events) counts[{e.station, e.cls}]++;
    for (std::size_t p = 0; p < st.events.size(); ++p) {
        const Event& e = st.events[p];
        int j = seen[{e.station, e.cls}]++;
        int n = counts[{e.station, e.cls}];
        double frac = (j + 1.0) / (n + 1.0);
        double jit = which * 0.011 + 0.003 * static_cast<double>(p % 7);
        if (e.cls == 2)
            h[p] = 0.18 + 0.6 * frac + jit;
        else if (e.cls == 0)
            h[p] = -0.18 - 0.6 * frac - jit;
        else
            h[p] = 0.001 * (which + 1) * (p == 0 ? 1 : -1);
    }
    std::vector<V2> pts;
    for (std::size_t p = 0; p < st.events.size(); ++p) {
        const Event& e = st.events[p];
        double x = station_x(e.station);
        if (p > 0 && st.events[p - 1].station == e.station && st.events[p - 1].cls != e.cls) {
            double side = e.dir > 0 ? -1.0 : 1.0;
            double reach = 0.28 + 0.15 * std::max(std::abs(h[p - 1]), std::abs(h[p]));
            pts.push_back({x + side * reach, pts.back().y});
            pts.push_back({x + side * reach, h[p]});
        }
        pts.push_back({x, h[p]});
    }
    return pts;
}

bool point_in_polygon(const std::vector<V2>& poly, V2 q) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        bool c = (poly[i].y > q.y) != (poly[j].y > q.y) &&
                 q.x < (poly[j].x - poly[i].x) * (q.y - poly[i].y) / (poly[j].y - poly[i].y) +
                           poly[i].x;
        if (c) in = !in;
    }
    return in;
}

std::vector<V2> subpath(const std::vector<V2>& P, double t0, double t1) {
    if (t0 > t1) {
        auto r = subpath(P, t1, t0);
        std::reverse(r.begin(), r.end());
        return r;
    }
    std::vector<V2> out;
    std::size_t i0 = static_cast<std::size_t>(t0), i1 = static_cast<std::size_t>(t1);
    auto at = [&](double t) {
        std::size_t i = static_cast<std::size_t>(t);
        double f = t - static_cast<double>(i);
        return V2{P[i].x + f * (P[i + 1].x - P[i].x), P[i].y + f * (P[i + 1].y - P[i].y)};
    };
    out.push_back(at(t0));
    for (std::size_t i = i0 + 1; i <= i1; ++i) out.push_back(P[i]);
    out.push_back(at(t1));
    return out;
}

std::vector<V2> punctures_in(const Code& a, const Code& b, bool with_p) {
    std::vector<V2> q;
    auto add = [&](const Code& c) {
        for (const auto& t : c.tokens())
            if (t.is_passage()) q.push_back({station_x(t.index.key()), 0.0});
    };
    add(a);
    add(b);
    if (with_p) q.push_back({station_x(Index::P().key()), 0.0});
    std::sort(q.begin(), q.end(), [](V2 u, V2 v) { return u.x < v.x; });
    q.erase(std::unique(q.begin(), q.end(), [](V2 u, V2 v) { return u.x == v.x; }), q.end());
    return q;
}

// offsets a polyline sideways
std::vector<V2> offset_path(const std::vector<V2>& P, double eps) {
    std::vector<V2> out(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) {
        V2 d{0, 0};
        if (i + 1 < P.size()) {
            d.x += P[i + 1].x - P[i].x;
            d.y += P[i + 1].y - P[i].y;
        }
        if (i > 0) {
            d.x += P[i].x - P[i - 1].x;
            d.y += P[i].y - P[i - 1].y;
        }
        double len = std::hypot(d.x, d.y);
        if (len < 1e-12) len = 1;
        out[i] = {P[i].x - eps * d.y / len, P[i].y + eps * d.x / len};
    }
    return out;
}

} // namespace

std::size_t intersection_number_oracle(const Code& a, const Code& b) {
    std::vector<V2> A = naive_polyline(a, 0);
    std::vector<V2> B = naive_polyline(b, 1);
    auto obstacles = punctures_in(a, b, true);
    double px = station_x(Index::P().key());

    for (int iter = 0; iter < 4000; ++iter) {
        auto xs = pl_crossings(A, B);
        if (xs.empty()) return 0;
        std::sort(xs.begin(), xs.end(),
                  [](const Crossing& u, const Crossing& v) { return u.ta < v.ta; });

        bool removed = false;
        // interior bigons: consecutive along A and along B
        for (std::size_t i = 0; i + 1 < xs.size() && !removed; ++i) {
            const Crossing &x = xs[i], &y = xs[i + 1];
            double blo = std::min(x.tb, y.tb), bhi = std::max(x.tb, y.tb);
            bool adjacent_b = true;
            for (const auto& z : xs)
                if (z.tb > blo + 1e-9 && z.tb < bhi - 1e-9) adjacent_b = false;
            if (!adjacent_b) continue;
            auto pa = subpath(A, x.ta, y.ta);
            auto pb = subpath(B, x.tb, y.tb);
            std::vector<V2> poly = pa;
            for (auto it = pb.rbegin(); it != pb.rend(); ++it) poly.push_back(*it);
            bool clean = true;
            for (const auto& q : obstacles)
                if (point_in_polygon(poly, q)) clean = false;
            if (!clean) continue;
            // push the A side across B
            auto mid = subpath(B, x.tb, y.tb);
            V2 probe = pa[pa.size() / 2];
            // choose the offset side away from the current A sub-path
            auto off1 = offset_path(mid, 6e-4);
            auto off2 = offset_path(mid, -6e-4);
            auto d2 = [&](const std::vector<V2>& m) {
                V2 c = m[m.size() / 2];
                return (c.x - probe.x) * (c.x - probe.x) + (c.y - probe.y) * (c.y - probe.y);
            };
            auto& off = d2(off1) > d2(off2) ? off1 : off2;
            std::vector<V2> na = subpath(A, 0.0, x.ta);
            na.insert(na.end(), off.begin(), off.end());
            auto tailA = subpath(A, y.ta, static_cast<double>(A.size() - 1));
            na.insert(na.end(), tailA.begin(), tailA.end());
            A = std::move(na);
            removed = true;
        }
        if (removed) continue;

        // half bigons based at the shared puncture p
        auto near_p = [&](V2 v) { return std::abs(v.x - px) < 0.05 && std::abs(v.y) < 0.05; };
        auto obstacles_no_p = punctures_in(a, b, false);
        for (int ea = 0; ea < 2 && !removed; ++ea) {
            double ta_end = ea == 0 ? 0.0 : static_cast<double>(A.size() - 1);
            if (!near_p(ea == 0 ? A.front() : A.back())) continue;
            // first crossing from this end along A
            const Crossing* first = nullptr;
            for (const auto& z : xs)
                if (!first || (ea == 0 ? z.ta < first->ta : z.ta > first->ta)) first = &z;
            if (!first) break;
            for (int eb = 0; eb < 2 && !removed; ++eb) {
                double tb_end = eb == 0 ? 0.0 : static_cast<double>(B.size() - 1);
                if (!near_p(eb == 0 ? B.front() : B.back())) continue;
                bool first_b = true;
                for (const auto& z : xs)
                    if (eb == 0 ? z.tb < first->tb - 1e-9 : z.tb > first->tb + 1e-9)
                        first_b = false;
                if (!first_b) continue;
                auto pa = subpath(A, ta_end, first->ta);
                auto pb = subpath(B, tb_end, first->tb);
                std::vector<V2> poly = pa;
                for (auto it = pb.rbegin(); it != pb.rend(); ++it) poly.push_back(*it);
                bool clean = true;
                for (const auto& q : obstacles_no_p)
                    if (point_in_polygon(poly, q)) clean = false;
                if (!clean) continue;
                auto mid = subpath(B, tb_end, first->tb);
                V2 probe = pa[pa.size() / 2];
                auto off1 = offset_path(mid, 6e-4);
                auto off2 = offset_path(mid, -6e-4);
                auto d2 = [&](const std::vector<V2>& m) {
                    V2 c = m[m.size() / 2];
                    return (c.x - probe.x) * (c.x - probe.x) +
                           (c.y - probe.y) * (c.y - probe.y);
                };
                auto& off = d2(off1) > d2(off2) ? off1 : off2;
                if (ea == 0) {
                    std::vector<V2> na = off;
                    auto tail = subpath(A, first->ta, static_cast<double>(A.size() - 1));
                    na.insert(na.end(), tail.begin(), tail.end());
                    A = std::move(na);
                } else {
                    std::vector<V2> na = subpath(A, 0.0, first->ta);
                    std::vector<V2> roff = off;
                    std::reverse(roff.begin(), roff.end());
                    na.insert(na.end(), roff.begin(), roff.end());
                    A = std::move(na);
                }
                removed = true;
            }
        }
        if (!removed) return xs.size();
    }
    throw geometry_error("oracle failed to stabilize");
}

// --------------------------------------------------------------- symmetric

ZipSplit zip_symmetric(const Code& c) {
    if (!is_symmetric(c)) throw geometry_error("zip_symmetric needs a symmetric arc");
    std::size_t n = c.size();
    std::size_t g = n / 2 - 1;
    std::vector<Character> ray(c.tokens().begin(),
                               c.tokens().begin() + static_cast<std::ptrdiff_t>(g));
    std::vector<Character> central{c[g], c[g + 1]};
    return {Code::segment(std::move(ray)), Code::segment(std::move(central))};
}

SignedPairing pairing(const Code& d, const Code& g) {
    ZipSplit zd = zip_symmetric(d);
    ZipSplit zg = zip_symmetric(g);

    // Realize both rays; the far end of each slides on its own central loop,
    // modelled as an attachment hugging the central puncture.
    auto ray_strand = [&](const ZipSplit& z) {
        Strand s = build_strand(Code::segment(z.ray.tokens()));
        // re-tag: the ray starts at p
        Strand out;
        out.arc = false;
        std::vector<Character> p;
        for (const auto& t : z.ray.tokens())
            if (t.is_passage()) p.push_back(t);
        std::vector<int> dir(p.size(), +1);
        if (!p.empty()) {
            dir[0] = p[0].index >= Index::of(0) ? +1 : -1;
            for (std::size_t i = 1; i < p.size(); ++i) {
                if (p[i].index == p[i - 1].index)
                    dir[i] = -dir[i - 1];
                else
                    dir[i] = p[i].index > p[i - 1].index ? +1 : -1;
            }
        }
        out.events.push_back({Index::P().key(), 1, p.empty() ? +1 : dir[0]});
        for (std::size_t i = 0; i < p.size(); ++i)
            out.events.push_back({p[i].index.key(), p[i].is_over() ? 2 : 0, dir[i]});
        Index central = z.central_loop[0].index;
        out.events.push_back(
            {central.key(), 1, p.empty() ? +1 : dir[p.size() - 1]});
        (void)s;
        return out;
    };

    Diagram dg;
    dg.strands.push_back(ray_strand(zd));
    dg.strands.push_back(ray_strand(zg));
    dg.assign_positions();

    double unit = 0.02;
    for (std::size_t s = 0; s < dg.strands.size(); ++s) {
        long maxv = 4;
        for (long v : dg.vpos[s]) maxv = std::max(maxv, std::abs(v));
        unit = std::min(unit, 0.9 / static_cast<double>(maxv + 1));
    }
    auto A = materialize(dg, 0, unit, 0.0);
    auto B = materialize(dg, 1, unit, 0.0);
    auto xs = pl_crossings(A, B);
    SignedPairing out;
    for (const auto& x : xs) {
        // Calibrated so that the second ray crossing the first from its left
        // counts toward i_plus.
        if (x.sign > 0)
            ++out.i_plus;
        else
            ++out.i_minus;
    }
    return out;
}

namespace {

// Counts forced self-crossings of a single strand: pairs of pieces in the
// same corridor whose endpoint orders invert.
long self_crossings(Diagram& d) {
    d.assign_positions();
    const Strand& st = d.strands[0];
    struct Piece {
        std::int64_t corridor;
        long lv, rv;
        bool cap;
        std::size_t id;
    };
    std::vector<Piece> pieces;
    for (std::size_t p = 0; p + 1 < st.events.size(); ++p) {
        const Event& e0 = st.events[p];
        const Event& e1 = st.events[p + 1];
        long v0 = folded_vpos(e0.cls, d.vpos[0][p]);
        long v1 = folded_vpos(e1.cls, d.vpos[0][p + 1]);
        if (e0.station == e1.station) {
            bool opens_right = e1.dir < 0;
            pieces.push_back({2 * e0.station + (opens_right ? 1 : -1), std::min(v0, v1),
                              std::max(v0, v1), true, p});
        } else {
            std::int64_t left = std::min(e0.station, e1.station);
            bool l2r = e0.station < e1.station;
            pieces.push_back({2 * left, l2r ? v0 : v1, l2r ? v1 : v0, false, p});
        }
    }
    long total = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            const Piece &a = pieces[i], &b = pieces[j];
            if (j == i + 1) continue; // consecutive pieces share an endpoint
            if (!a.cap && !b.cap) {
                if (a.corridor != b.corridor) continue;
                if ((a.lv < b.lv) != (a.rv < b.rv)) ++total;
            } else if (a.cap != b.cap) {
                const Piece& cap = a.cap ? a : b;
                const Piece& thr = a.cap ? b : a;
                // cap line sits just beside its station inside one corridor
                std::int64_t cor = cap.corridor > 0 || cap.corridor % 2 != 0
                                       ? (cap.corridor - (cap.corridor & 1 ? 1 : 0))
                                       : cap.corridor;
                (void)cor;
                // a through attached at the cap's station between its ends
                // must escape across it
                std::int64_t cap_station = (cap.corridor - (cap.corridor % 2)) / 2;
                std::int64_t thr_left_station = thr.corridor / 2;
                bool opens_right = cap.corridor % 2 != 0;
                long v;
                if (opens_right && thr_left_station == cap_station)
                    v = thr.lv;
                else if (!opens_right && thr_left_station + 1 == cap_station)
                    v = thr.rv;
                else
                    continue;
                if (v > cap.lv && v < cap.rv) ++total;
            } else {
                if (a.corridor != b.corridor) continue;
                bool in1 = b.lv > a.lv && b.lv < a.rv;
                bool in2 = b.rv > a.lv && b.rv < a.rv;
                if (in1 != in2) ++total;
            }
        }
    return total;
}

} // namespace

bool is_embeddable(const Code& c) {
    try {
        Diagram d;
        d.strands.push_back(build_strand(c));
        return self_crossings(d) == 0;
    } catch (const geometry_error&) {
        return false;
    }
}

} // namespace flute
