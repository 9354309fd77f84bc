#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace stochopt {

/// Finite subsets of an indexed ground set (clients or elements) are stored
/// as bitmasks; bit i set means item i is a member. Ground sets never exceed
/// 64 items, and exhaustive routines cap far below that.
using Mask = std::uint64_t;

inline constexpr int kMaxGround = 62;

inline constexpr Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }
inline constexpr Mask bit(int i) { return Mask{1} << i; }
inline constexpr bool contains(Mask s, int i) { return (s >> i) & 1U; }
inline constexpr bool is_subset(Mask a, Mask b) { return (a & ~b) == 0; }
inline int cardinality(Mask s) { return std::popcount(s); }

/// Member indices in increasing order.
std::vector<int> members(Mask s);
Mask from_members(const std::vector<int>& items);

/// Lexicographic order on the increasing member sequences, so {0,2} < {1}
/// and a proper prefix sorts first ({0} < {0,1}).
bool lex_less(Mask a, Mask b);

std::string format_mask(Mask s, const std::vector<std::string>& names);

}  // namespace stochopt
