#include "iavs/model_indicator.hpp"

#include "iavs/errors.hpp"
#include "iavs/rng.hpp"

#include <bit>

namespace iavs {

ModelIndicator::ModelIndicator(std::size_t p) : words_((p + 63) / 64, 0), p_(p) {}

ModelIndicator ModelIndicator::from_mask(std::size_t p, std::uint64_t mask) {
    if (p > 64)
        throw DimensionError("from_mask requires p <= 64");
    ModelIndicator m(p);
    if (p < 64)
        mask &= (std::uint64_t{1} << p) - 1;
    if (p > 0)
        m.words_[0] = mask;
    m.size_ = static_cast<std::size_t>(std::popcount(mask));
    return m;
}

ModelIndicator ModelIndicator::from_indices(std::size_t p, std::span<const std::size_t> indices) {
    ModelIndicator m(p);
    for (auto j : indices) {
        if (j >= p)
            throw DimensionError("variable index out of range");
        m.set(j, true);
    }
    return m;
}

void ModelIndicator::set(std::size_t j, bool value) {
    if (test(j) != value)
        flip(j);
}

void ModelIndicator::flip(std::size_t j) {
    const std::uint64_t bit = std::uint64_t{1} << (j & 63);
    auto &w = words_[j >> 6];
    if (w & bit)
        --size_;
    else
        ++size_;
    w ^= bit;
}

std::vector<std::size_t> ModelIndicator::indices() const {
    std::vector<std::size_t> out;
    out.reserve(size_);
    for (std::size_t k = 0; k < words_.size(); ++k) {
        auto w = words_[k];
        while (w) {
            out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

std::uint64_t ModelIndicator::to_mask() const {
    if (p_ > 64)
        throw DimensionError("to_mask requires p <= 64");
    return words_.empty() ? 0 : words_[0];
}

Hash128 ModelIndicator::hash() const {
    std::uint64_t a = splitmix64(p_);
    std::uint64_t b = splitmix64(p_ ^ 0xd1b54a32d192ed03ULL);
    for (auto w : words_) {
        a = splitmix64(a ^ w);
        b = splitmix64(b + (w ^ 0x8cb92ba72f3d8dd7ULL)) * 0xff51afd7ed558ccdULL;
    }
    return {a, b};
}

std::string ModelIndicator::to_string() const {
    std::string s;
    for (auto j : indices()) {
        if (!s.empty())
            s += ' ';
        s += std::to_string(j);
    }
    return s;
}

} // namespace iavs
