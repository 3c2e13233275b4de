#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace latt {

/// Fixed-width dynamic bitset used for element subsets throughout the
/// library. Unused bits of the last word are kept zero, so equality,
/// ordering and hashing work directly on the word array.
///
/// The ordering is the "bit-vector value" order: a set is compared as the
/// integer sum of 2^i over its members. This is the canonical order used
/// whenever a list of subsets has to be deterministic.
class Bitset {
public:
    Bitset() = default;

    explicit Bitset(std::size_t n, bool fill = false)
        : size_(n), words_((n + 63) / 64, fill ? ~std::uint64_t{0} : 0) {
        trim();
    }

    static Bitset all(std::size_t n) { return Bitset(n, true); }
    static Bitset none(std::size_t n) { return Bitset(n, false); }
    static Bitset single(std::size_t n, std::size_t i) {
        Bitset b(n);
        b.set(i);
        return b;
    }

    std::size_t size() const { return size_; }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void set(std::size_t i, bool v) { v ? set(i) : reset(i); }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    Bitset& operator&=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bitset& operator-=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }

    Bitset complemented() const {
        Bitset r(*this);
        for (auto& w : r.words_) w = ~w;
        r.trim();
        return r;
    }

    bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool intersects(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    friend bool operator==(const Bitset& a, const Bitset& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

    /// Bit-vector value order (element i weighs 2^i).
    friend std::strong_ordering operator<=>(const Bitset& a, const Bitset& b) {
        if (auto c = a.size_ <=> b.size_; c != 0) return c;
        for (std::size_t i = a.words_.size(); i-- > 0;)
            if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t find_first() const { return find_next_from(0); }

    /// First set bit at position >= i, or npos.
    std::size_t find_next_from(std::size_t i) const {
        if (i >= size_) return npos;
        std::size_t w = i >> 6;
        std::uint64_t cur = words_[w] & (~std::uint64_t{0} << (i & 63));
        while (true) {
            if (cur) return (w << 6) + static_cast<std::size_t>(std::countr_zero(cur));
            if (++w == words_.size()) return npos;
            cur = words_[w];
        }
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = find_first(); i != npos; i = find_next_from(i + 1)) f(i);
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> v;
        for_each([&](std::size_t i) { v.push_back(i); });
        return v;
    }

    std::size_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ull ^ size_;
        for (auto w : words_) {
            h ^= w;
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h);
    }

private:
    void trim() {
        if (std::size_t rem = size_ & 63; rem != 0 && !words_.empty())
            words_.back() &= (~std::uint64_t{0} >> (64 - rem));
        if (size_ == 0) words_.clear();
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitsetHash {
    std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

/// "{a,c}" rendering with caller-supplied element names.
inline std::string set_to_string(const Bitset& s, const std::vector<std::string>& names) {
    std::string out = "{";
    bool first = true;
    s.for_each([&](std::size_t i) {
        if (!first) out += ",";
        first = false;
        out += names[i];
    });
    out += "}";
    return out;
}

}  // namespace latt
