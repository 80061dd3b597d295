#ifndef CHOQUET_SUBSET_KEY_HPP
#define CHOQUET_SUBSET_KEY_HPP

#include <cstdint>
#include <cstddef>
#include <bit>
#include <functional>
#include <vector>

namespace choquet {

// Canonical bit-set over attribute indices. Ground sets up to 64 attributes
// live in a single word (the common case and the one the distance hot path
// cares about); larger ground sets spill into extra words. Two keys are equal
// iff they denote the same subset.
class SubsetKey {
public:
    SubsetKey() = default;

    explicit SubsetKey(std::uint64_t mask) : word0_(mask) {}

    static SubsetKey from_indices(const std::vector<std::size_t>& indices) {
        SubsetKey k;
        for (std::size_t i : indices) k.add(i);
        return k;
    }

    static SubsetKey full(std::size_t ground_size) {
        SubsetKey k;
        if (ground_size <= 64) {
            k.word0_ = ground_size == 64 ? ~std::uint64_t{0}
                                         : ((std::uint64_t{1} << ground_size) - 1);
        } else {
            for (std::size_t i = 0; i < ground_size; ++i) k.add(i);
        }
        return k;
    }

    bool empty() const {
        if (word0_ != 0) return false;
        for (std::uint64_t w : extra_)
            if (w != 0) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t c = std::popcount(word0_);
        for (std::uint64_t w : extra_) c += std::popcount(w);
        return c;
    }

    bool contains(std::size_t i) const {
        if (i < 64) return (word0_ >> i) & 1u;
        const std::size_t block = i / 64 - 1, bit = i % 64;
        return block < extra_.size() && ((extra_[block] >> bit) & 1u);
    }

    void add(std::size_t i) {
        if (i < 64) {
            word0_ |= std::uint64_t{1} << i;
        } else {
            const std::size_t block = i / 64 - 1, bit = i % 64;
            if (extra_.size() <= block) extra_.resize(block + 1, 0);
            extra_[block] |= std::uint64_t{1} << bit;
        }
    }

    void remove(std::size_t i) {
        if (i < 64) {
            word0_ &= ~(std::uint64_t{1} << i);
        } else {
            const std::size_t block = i / 64 - 1, bit = i % 64;
            if (block < extra_.size()) extra_[block] &= ~(std::uint64_t{1} << bit);
        }
    }

    SubsetKey with(std::size_t i) const {
        SubsetKey k = *this;
        k.add(i);
        return k;
    }

    SubsetKey without(std::size_t i) const {
        SubsetKey k = *this;
        k.remove(i);
        return k;
    }

    // Set difference ground \ *this, where ground = full(ground_size).
    SubsetKey complement(std::size_t ground_size) const {
        SubsetKey all = full(ground_size);
        all.word0_ &= ~word0_;
        for (std::size_t b = 0; b < all.extra_.size() && b < extra_.size(); ++b)
            all.extra_[b] &= ~extra_[b];
        return all;
    }

    bool is_subset_of(const SubsetKey& other) const {
        if (word0_ & ~other.word0_) return false;
        for (std::size_t b = 0; b < extra_.size(); ++b) {
            const std::uint64_t ow = b < other.extra_.size() ? other.extra_[b] : 0;
            if (extra_[b] & ~ow) return false;
        }
        return true;
    }

    // Ascending index list view of the canonical form.
    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::uint64_t w = word0_; w;) {
            const int b = std::countr_zero(w);
            fn(static_cast<std::size_t>(b));
            w &= w - 1;
        }
        for (std::size_t block = 0; block < extra_.size(); ++block) {
            for (std::uint64_t w = extra_[block]; w;) {
                const int b = std::countr_zero(w);
                fn(64 * (block + 1) + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

    // Valid only when the ground size fits one word.
    std::uint64_t mask() const { return word0_; }

    bool operator==(const SubsetKey& other) const {
        if (word0_ != other.word0_) return false;
        const std::size_t n = std::max(extra_.size(), other.extra_.size());
        for (std::size_t b = 0; b < n; ++b) {
            const std::uint64_t a = b < extra_.size() ? extra_[b] : 0;
            const std::uint64_t c = b < other.extra_.size() ? other.extra_[b] : 0;
            if (a != c) return false;
        }
        return true;
    }

    std::size_t hash() const {
        std::uint64_t h = word0_ * 0x9e3779b97f4a7c15ULL;
        for (std::uint64_t w : extra_) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h ^ (h >> 32));
    }

private:
    std::uint64_t word0_ = 0;
    std::vector<std::uint64_t> extra_;
};

struct SubsetKeyHash {
    std::size_t operator()(const SubsetKey& k) const { return k.hash(); }
};

}  // namespace choquet

#endif
