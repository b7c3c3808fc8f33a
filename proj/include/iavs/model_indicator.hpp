#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace iavs {

struct Hash128 {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    friend bool operator==(const Hash128 &, const Hash128 &) = default;
};

/// Inclusion indicator over p candidate variables. Bit j set means variable j
/// is in the model; size() is kept equal to the popcount.
class ModelIndicator {
  public:
    ModelIndicator() = default;
    explicit ModelIndicator(std::size_t p);

    static ModelIndicator from_mask(std::size_t p, std::uint64_t mask);
    static ModelIndicator from_indices(std::size_t p, std::span<const std::size_t> indices);

    std::size_t p() const { return p_; }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool test(std::size_t j) const { return (words_[j >> 6] >> (j & 63)) & 1U; }
    void set(std::size_t j, bool value);
    void flip(std::size_t j);

    std::vector<std::size_t> indices() const;
    /// Requires p <= 64.
    std::uint64_t to_mask() const;
    Hash128 hash() const;
    std::span<const std::uint64_t> words() const { return words_; }
    std::string to_string() const;

    friend bool operator==(const ModelIndicator &, const ModelIndicator &) = default;

  private:
    std::vector<std::uint64_t> words_;
    std::size_t p_ = 0;
    std::size_t size_ = 0;
};

} // namespace iavs

template <> struct std::hash<iavs::ModelIndicator> {
    std::size_t operator()(const iavs::ModelIndicator &m) const noexcept { return m.hash().lo; }
};

template <> struct std::hash<iavs::Hash128> {
    std::size_t operator()(const iavs::Hash128 &h) const noexcept { return h.lo ^ (h.hi * 0x9e3779b97f4a7c15ULL); }
};
