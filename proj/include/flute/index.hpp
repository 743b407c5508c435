#ifndef FLUTE_INDEX_HPP
#define FLUTE_INDEX_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace flute {

// Puncture index: an integer, or the distinguished symbol P which sits
// strictly between -1 and 0 in the total order.
class Index {
public:
    Index() : p_(true), v_(0) {}
    static Index P() { return Index(); }
    static Index of(std::int64_t v) {
        Index i;
        i.p_ = false;
        i.v_ = v;
        return i;
    }

    bool is_p() const { return p_; }
    std::int64_t value() const {
        if (p_) throw std::logic_error("Index::value on P");
        return v_;
    }

    // Order key: integer n maps to 2n, P maps to -1, so -1 < P < 0.
    std::int64_t key() const { return p_ ? -1 : 2 * v_; }

    Index succ() const {
        if (p_) return of(0);
        if (v_ == -1) return P();
        return of(v_ + 1);
    }
    Index pred() const {
        if (p_) return of(-1);
        if (v_ == 0) return P();
        return of(v_ - 1);
    }

    bool adjacent(Index o) const { return succ() == o || o.succ() == *this; }

    std::string str() const { return p_ ? "P" : std::to_string(v_); }

    friend bool operator==(Index a, Index b) { return a.key() == b.key(); }
    friend bool operator!=(Index a, Index b) { return !(a == b); }
    friend bool operator<(Index a, Index b) { return a.key() < b.key(); }
    friend bool operator<=(Index a, Index b) { return a.key() <= b.key(); }
    friend bool operator>(Index a, Index b) { return b < a; }
    friend bool operator>=(Index a, Index b) { return b <= a; }

private:
    bool p_;
    std::int64_t v_;
};

} // namespace flute

template <> struct std::hash<flute::Index> {
    std::size_t operator()(const flute::Index& i) const noexcept {
        return std::hash<std::int64_t>()(i.key());
    }
};

#endif
