#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mechlab {

// Subset enumeration is O(2^n); keep n small enough that exact verifiers stay exact.
inline constexpr std::size_t kMaxEnumerableAgents = 16;

// A subset of the n agents, bit i set when agent i is kept.
class SubsetMask {
public:
    SubsetMask(std::uint32_t bits, std::size_t n) : bits_(bits), n_(n) {
        if (n == 0 || n > kMaxEnumerableAgents)
            throw std::invalid_argument("SubsetMask: agent count out of range");
        if (n < 32 && bits >= (1u << n))
            throw std::invalid_argument("SubsetMask: bits outside agent range");
    }

    static SubsetMask empty(std::size_t n) { return SubsetMask(0, n); }
    static SubsetMask full(std::size_t n) {
        return SubsetMask(static_cast<std::uint32_t>((1ull << n) - 1), n);
    }

    bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }
    SubsetMask with(std::size_t i) const { return SubsetMask(bits_ | (1u << i), n_); }
    SubsetMask without(std::size_t i) const { return SubsetMask(bits_ & ~(1u << i), n_); }

    std::uint32_t bits() const { return bits_; }
    std::size_t agent_count() const { return n_; }
    std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    bool is_full() const { return size() == n_; }

    bool operator==(const SubsetMask& other) const {
        return bits_ == other.bits_ && n_ == other.n_;
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n_; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!contains(i)) continue;
            if (!first) s += ",";
            s += std::to_string(i);
            first = false;
        }
        return s + "}";
    }

private:
    std::uint32_t bits_;
    std::size_t n_;
};

inline std::size_t subset_count(std::size_t n) { return std::size_t{1} << n; }

} // namespace mechlab
