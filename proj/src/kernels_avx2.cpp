// AVX2 variants of the dense kernels. Built with -mavx2 -mpopcnt and only
// reached through kernels::avx2() after a CPU check, so nothing here may be
// called unconditionally. Keep this file free of inline library templates.

#include <immintrin.h>

#include "ekrlab/kernels.hpp"

namespace ekrlab::kernels {

namespace {

inline __m256i load(const Word* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(Word* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }

// Per-64-bit-lane popcount (nibble lookup + sad).
inline __m256i popcnt64(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i nib = _mm256_set1_epi8(0x0f);
  __m256i lo = _mm256_and_si256(v, nib);
  __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), nib);
  __m256i c = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(c, _mm256_setzero_si256());
}

inline std::uint64_t hsum(__m256i v) {
  alignas(32) std::uint64_t t[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(t), v);
  return t[0] + t[1] + t[2] + t[3];
}

#define EKRLAB_BINOP(name, expr, tail)                           \
  void name(Word* d, const Word* s, std::size_t n) {            \
    std::size_t i = 0;                                           \
    for (; i + 4 <= n; i += 4) {                                 \
      __m256i a = load(d + i), b = load(s + i);                  \
      store(d + i, expr);                                        \
    }                                                            \
    for (; i < n; ++i) tail;                                     \
  }

EKRLAB_BINOP(v_or, _mm256_or_si256(a, b), d[i] |= s[i])
EKRLAB_BINOP(v_and, _mm256_and_si256(a, b), d[i] &= s[i])
EKRLAB_BINOP(v_andnot, _mm256_andnot_si256(b, a), d[i] &= ~s[i])
EKRLAB_BINOP(v_xor, _mm256_xor_si256(a, b), d[i] ^= s[i])

#undef EKRLAB_BINOP

std::uint64_t v_popcount(const Word* s, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_epi64(acc, popcnt64(load(s + i)));
  std::uint64_t c = hsum(acc);
  for (; i < n; ++i) c += static_cast<std::uint64_t>(_mm_popcnt_u64(s[i]));
  return c;
}

std::uint64_t v_and_popcount(const Word* a, const Word* b, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_epi64(acc, popcnt64(_mm256_and_si256(load(a + i), load(b + i))));
  std::uint64_t c = hsum(acc);
  for (; i < n; ++i) c += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & b[i]));
  return c;
}

// In-word step shared by up/down/pivot for coord < 6.
template <int Kind>
inline Word inword(Word w, Word low, unsigned sh) {
  if constexpr (Kind == 0) return w | ((w & low) << sh);
  if constexpr (Kind == 1) return w | ((w >> sh) & low);
  return w ^ (((w & low) << sh) | ((w >> sh) & low));
}

template <int Kind>
inline __m256i inword(__m256i w, __m256i low, __m128i sh) {
  if constexpr (Kind == 0) return _mm256_or_si256(w, _mm256_sll_epi64(_mm256_and_si256(w, low), sh));
  if constexpr (Kind == 1) return _mm256_or_si256(w, _mm256_and_si256(_mm256_srl_epi64(w, sh), low));
  __m256i up = _mm256_sll_epi64(_mm256_and_si256(w, low), sh);
  __m256i dn = _mm256_and_si256(_mm256_srl_epi64(w, sh), low);
  return _mm256_xor_si256(w, _mm256_or_si256(up, dn));
}

template <int Kind>
void inword_all(Word* d, const Word* s, std::size_t n, unsigned coord) {
  const Word low = kLowHalf[coord];
  const unsigned sh = 1u << coord;
  const __m256i vlow = _mm256_set1_epi64x(static_cast<long long>(low));
  const __m128i vsh = _mm_cvtsi32_si128(static_cast<int>(sh));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(d + i, inword<Kind>(load(s + i), vlow, vsh));
  for (; i < n; ++i) d[i] = inword<Kind>(s[i], low, sh);
}

void v_up_pass(Word* d, std::size_t n, unsigned coord) {
  if (coord < 6) return inword_all<0>(d, d, n, coord);
  const std::size_t stride = std::size_t{1} << (coord - 6);
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    std::size_t j = 0;
    for (; j + 4 <= stride; j += 4) {
      Word* hi = d + base + stride + j;
      store(hi, _mm256_or_si256(load(hi), load(d + base + j)));
    }
    for (; j < stride; ++j) d[base + stride + j] |= d[base + j];
  }
}

void v_down_pass(Word* d, std::size_t n, unsigned coord) {
  if (coord < 6) return inword_all<1>(d, d, n, coord);
  const std::size_t stride = std::size_t{1} << (coord - 6);
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    std::size_t j = 0;
    for (; j + 4 <= stride; j += 4) {
      Word* lo = d + base + j;
      store(lo, _mm256_or_si256(load(lo), load(d + base + stride + j)));
    }
    for (; j < stride; ++j) d[base + j] |= d[base + stride + j];
  }
}

void v_pivot(Word* d, const Word* s, std::size_t n, unsigned coord) {
  if (coord < 6) return inword_all<2>(d, s, n, coord);
  const std::size_t stride = std::size_t{1} << (coord - 6);
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    std::size_t j = 0;
    for (; j + 4 <= stride; j += 4) {
      __m256i x = _mm256_xor_si256(load(s + base + j), load(s + base + stride + j));
      store(d + base + j, x);
      store(d + base + stride + j, x);
    }
    for (; j < stride; ++j) {
      Word x = s[base + j] ^ s[base + stride + j];
      d[base + j] = x;
      d[base + stride + j] = x;
    }
  }
}

void v_weight_profile(const Word* s, std::size_t n, std::uint64_t* counts) {
  alignas(32) std::uint64_t lane[4];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i w = load(s + i);
    if (_mm256_testz_si256(w, w)) continue;
    unsigned h[4];
    for (unsigned l = 0; l < 4; ++l) h[l] = static_cast<unsigned>(_mm_popcnt_u64(i + l));
    for (unsigned r = 0; r < 7; ++r) {
      __m256i m = _mm256_set1_epi64x(static_cast<long long>(kLevel[r]));
      _mm256_store_si256(reinterpret_cast<__m256i*>(lane), popcnt64(_mm256_and_si256(w, m)));
      for (unsigned l = 0; l < 4; ++l) counts[h[l] + r] += lane[l];
    }
  }
  for (; i < n; ++i) {
    Word w = s[i];
    if (w == 0) continue;
    unsigned h = static_cast<unsigned>(_mm_popcnt_u64(i));
    for (unsigned r = 0; r < 7; ++r) counts[h + r] += static_cast<std::uint64_t>(_mm_popcnt_u64(w & kLevel[r]));
  }
}

const Table kAvx2 = {
    "avx2",    v_or,        v_and,   v_andnot,         v_xor, v_popcount, v_and_popcount,
    v_up_pass, v_down_pass, v_pivot, v_weight_profile,
};

}  // namespace

const Table* avx2_table() { return &kAvx2; }

}  // namespace ekrlab::kernels
