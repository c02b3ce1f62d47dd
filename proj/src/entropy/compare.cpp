// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <poemlab/entropy/compare.hpp>

namespace poemlab::entropy {

std::strong_ordering compare_poem(const ChainWeight& weight_a, const HashValue& tip_a,
                                  const ChainWeight& weight_b, const HashValue& tip_b) {
    if (auto byweight = weight_a <=> weight_b; byweight != std::strong_ordering::equal) {
        return byweight;
    }
    // Exact weight tie: the smaller tip hash is preferred.
    return tip_b <=> tip_a;
}

std::weak_ordering compare_hcr(const WideInt& work_a, const WideInt& work_b) {
    if (work_a < work_b) return std::weak_ordering::less;
    if (work_a > work_b) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
}

} // namespace poemlab::entropy
