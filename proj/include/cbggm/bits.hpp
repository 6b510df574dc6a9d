#pragma once

#include <bit>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbggm {

// Fixed-length bit vector backed by 64-bit words. Edge sets and cycle-basis
// coordinates are stored in this form.
class Bits {
  public:
    Bits() = default;
    explicit Bits(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    bool test(std::size_t i) const {
        assert(i < size_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool value = true) {
        assert(i < size_);
        if (value) {
            words_[i >> 6] |= bit_mask(i);
        } else {
            words_[i >> 6] &= ~bit_mask(i);
        }
    }

    void flip(std::size_t i) {
        assert(i < size_);
        words_[i >> 6] ^= bit_mask(i);
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    bool any() const {
        for (std::uint64_t w : words_)
            if (w) return true;
        return false;
    }

    bool none() const { return !any(); }

    Bits& operator^=(const Bits& other) {
        require_same_size(other);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
        return *this;
    }

    Bits& operator|=(const Bits& other) {
        require_same_size(other);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
        return *this;
    }

    Bits& operator&=(const Bits& other) {
        require_same_size(other);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
        return *this;
    }

    friend Bits operator^(Bits a, const Bits& b) { return a ^= b; }
    friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
    friend Bits operator&(Bits a, const Bits& b) { return a &= b; }

    friend bool operator==(const Bits&, const Bits&) = default;
    friend auto operator<=>(const Bits&, const Bits&) = default;

    // Is every set bit of *this also set in other?
    bool is_subset_of(const Bits& other) const {
        require_same_size(other);
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~other.words_[k]) return false;
        return true;
    }

    // Calls f(i) for every set bit index i, ascending.
    template <class F>
    void for_each_set(F&& f) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w) {
                const int b = std::countr_zero(w);
                f(64 * k + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for_each_set([&](std::size_t i) { s[i] = '1'; });
        return s;
    }

    static Bits from_string(const std::string& s) {
        Bits b(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') {
                b.set(i);
            } else if (s[i] != '0') {
                throw std::invalid_argument("Bits::from_string: expected '0'/'1'");
            }
        }
        return b;
    }

    std::size_t hash() const {
        // FNV-1a over the words
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t w : words_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        h ^= size_;
        return static_cast<std::size_t>(h);
    }

  private:
    static std::uint64_t bit_mask(std::size_t i) { return std::uint64_t{1} << (i & 63); }

    void require_same_size(const Bits& other) const {
        if (size_ != other.size_)
            throw std::invalid_argument("Bits: size mismatch");
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitsHash {
    std::size_t operator()(const Bits& b) const { return b.hash(); }
};

}  // namespace cbggm
