// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_VERSION_HPP
#define POEMLAB_VERSION_HPP

#include <string_view>

namespace poemlab {

inline constexpr std::string_view kToolName = "poemlab";
inline constexpr std::string_view kToolVersion = "1.0.0";

} // namespace poemlab

#endif // POEMLAB_VERSION_HPP
