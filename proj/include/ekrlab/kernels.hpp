#pragma once

#include <cstddef>
#include <cstdint>

// Dense truth-table kernels. A family on [n] is a bit array of 2^n bits
// packed into 64-bit words; bit x is set iff the subset with mask x is a
// member. For n < 6 a single word is used and the unused high bits stay 0.
//
// Every kernel has a scalar reference version; an AVX2 version is selected
// at runtime when the CPU supports it. EKRLAB_KERNELS=scalar forces the
// reference path.

#if defined(__x86_64__) || defined(_M_X64)
#define EKRLAB_X86 1
#endif

namespace ekrlab::kernels {

using Word = std::uint64_t;

struct Table {
  const char* name;
  void (*bit_or)(Word* dst, const Word* src, std::size_t words);
  void (*bit_and)(Word* dst, const Word* src, std::size_t words);
  void (*bit_andnot)(Word* dst, const Word* src, std::size_t words);  // dst &= ~src
  void (*bit_xor)(Word* dst, const Word* src, std::size_t words);
  std::uint64_t (*popcount)(const Word* src, std::size_t words);
  std::uint64_t (*and_popcount)(const Word* a, const Word* b, std::size_t words);
  // x |= x with coordinate `coord` removed, for every x containing coord
  // (one step of the up-closure).
  void (*up_pass)(Word* data, std::size_t words, unsigned coord);
  // x |= x with coordinate `coord` added, for every x missing coord.
  void (*down_pass)(Word* data, std::size_t words, unsigned coord);
  // dst[x] = src[x] ^ src[x ^ (1 << coord)]: points pivotal in direction coord.
  void (*pivot)(Word* dst, const Word* src, std::size_t words, unsigned coord);
  // counts[j] += number of set bits whose position has popcount j.
  // counts must have room for 7 + log2(words) entries.
  void (*weight_profile)(const Word* src, std::size_t words, std::uint64_t* counts);
};

const Table& scalar();
/// nullptr when the build has no AVX2 path or the CPU lacks AVX2.
const Table* avx2();
/// The table used by the library.
const Table& active();

// Masks of in-word positions whose bit `c` (c < 6) is clear.
inline constexpr Word kLowHalf[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

// kLevel[r]: in-word positions (0..63) whose popcount is r.
inline constexpr Word kLevel[7] = {
    0x0000000000000001ULL, 0x0000000100010116ULL, 0x0001011601161668ULL, 0x0116166816686880ULL,
    0x1668688068808000ULL, 0x6880800080000000ULL, 0x8000000000000000ULL,
};

}  // namespace ekrlab::kernels
