#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace featmc {

/// Fixed-size set of state indices.
class StateSet {
  public:
    StateSet() = default;
    explicit StateSet(std::size_t size, bool value = false)
        : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        trim();
    }

    std::size_t size() const { return size_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    bool operator[](std::size_t i) const { return test(i); }
    void set(std::size_t i, bool value = true) {
        if (value)
            words_[i >> 6] |= std::uint64_t{1} << (i & 63);
        else
            words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }
    bool empty() const { return count() == 0; }

    StateSet operator~() const {
        StateSet out = *this;
        for (auto& w : out.words_) w = ~w;
        out.trim();
        return out;
    }
    StateSet& operator&=(const StateSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    StateSet& operator|=(const StateSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
    friend bool operator==(const StateSet&, const StateSet&) = default;

    bool is_subset_of(const StateSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < size_; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

  private:
    void trim() {
        if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace featmc
