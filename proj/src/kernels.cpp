#include "ekrlab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ekrlab::kernels {

#ifdef EKRLAB_HAVE_AVX2
const Table* avx2_table();
#endif

namespace {

inline unsigned pop(Word w) { return static_cast<unsigned>(__builtin_popcountll(w)); }

void s_or(Word* d, const Word* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] |= s[i];
}
void s_and(Word* d, const Word* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] &= s[i];
}
void s_andnot(Word* d, const Word* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] &= ~s[i];
}
void s_xor(Word* d, const Word* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] ^= s[i];
}

std::uint64_t s_popcount(const Word* s, std::size_t n) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += pop(s[i]);
  return c;
}

std::uint64_t s_and_popcount(const Word* a, const Word* b, std::size_t n) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += pop(a[i] & b[i]);
  return c;
}

void s_up_pass(Word* d, std::size_t n, unsigned coord) {
  if (coord < 6) {
    const Word low = kLowHalf[coord];
    const unsigned sh = 1u << coord;
    for (std::size_t i = 0; i < n; ++i) d[i] |= (d[i] & low) << sh;
    return;
  }
  const std::size_t stride = std::size_t{1} << (coord - 6);
  for (std::size_t base = 0; base < n; base += 2 * stride)
    for (std::size_t j = 0; j < stride; ++j) d[base + stride + j] |= d[base + j];
}

void s_down_pass(Word* d, std::size_t n, unsigned coord) {
  if (coord < 6) {
    const Word low = kLowHalf[coord];
    const unsigned sh = 1u << coord;
    for (std::size_t i = 0; i < n; ++i) d[i] |= (d[i] >> sh) & low;
    return;
  }
  const std::size_t stride = std::size_t{1} << (coord - 6);
  for (std::size_t base = 0; base < n; base += 2 * stride)
    for (std::size_t j = 0; j < stride; ++j) d[base + j] |= d[base + stride + j];
}

void s_pivot(Word* d, const Word* s, std::size_t n, unsigned coord) {
  if (coord < 6) {
    const Word low = kLowHalf[coord];
    const unsigned sh = 1u << coord;
    for (std::size_t i = 0; i < n; ++i) {
      Word w = s[i];
      d[i] = w ^ (((w & low) << sh) | ((w >> sh) & low));
    }
    return;
  }
  const std::size_t stride = std::size_t{1} << (coord - 6);
  for (std::size_t base = 0; base < n; base += 2 * stride)
    for (std::size_t j = 0; j < stride; ++j) {
      Word x = s[base + j] ^ s[base + stride + j];
      d[base + j] = x;
      d[base + stride + j] = x;
    }
}

void s_weight_profile(const Word* s, std::size_t n, std::uint64_t* counts) {
  for (std::size_t i = 0; i < n; ++i) {
    Word w = s[i];
    if (w == 0) continue;
    unsigned h = pop(static_cast<Word>(i));
    for (unsigned r = 0; r < 7; ++r) counts[h + r] += pop(w & kLevel[r]);
  }
}

const Table kScalar = {
    "scalar", s_or,      s_and,       s_andnot, s_xor,           s_popcount, s_and_popcount,
    s_up_pass, s_down_pass, s_pivot, s_weight_profile,
};

}  // namespace

const Table& scalar() { return kScalar; }

const Table* avx2() {
#ifdef EKRLAB_HAVE_AVX2
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
  return ok ? avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table* chosen = [] {
    const char* env = std::getenv("EKRLAB_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &kScalar;
    const Table* v = avx2();
    return v != nullptr ? v : &kScalar;
  }();
  return *chosen;
}

}  // namespace ekrlab::kernels
