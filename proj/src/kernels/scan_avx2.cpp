// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "pfw/kernels.hpp"

namespace pfw::kernels {
namespace {

inline __m256i load8(const std::uint32_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// Lane mask of rules in block [i, i+8) that match the packet.
inline unsigned match_block(const RuleTable& t, std::size_t i, __m256i proto_bit, __m256i src,
                            __m256i dst, __m256i sport, __m256i dport) {
  const __m256i proto_ok =
      _mm256_cmpeq_epi32(_mm256_and_si256(load8(t.proto_bits() + i), proto_bit), proto_bit);
  const __m256i src_ok =
      _mm256_cmpeq_epi32(_mm256_and_si256(src, load8(t.src_mask() + i)), load8(t.src_base() + i));
  const __m256i dst_ok =
      _mm256_cmpeq_epi32(_mm256_and_si256(dst, load8(t.dst_mask() + i)), load8(t.dst_base() + i));
  // Ports fit in 16 bits, so signed 32-bit compares are exact.
  // in range  <=>  !(lo > p) && !(p > hi)
  const __m256i sport_out = _mm256_or_si256(_mm256_cmpgt_epi32(load8(t.sport_lo() + i), sport),
                                            _mm256_cmpgt_epi32(sport, load8(t.sport_hi() + i)));
  const __m256i dport_out = _mm256_or_si256(_mm256_cmpgt_epi32(load8(t.dport_lo() + i), dport),
                                            _mm256_cmpgt_epi32(dport, load8(t.dport_hi() + i)));
  const __m256i ok = _mm256_andnot_si256(
      _mm256_or_si256(sport_out, dport_out),
      _mm256_and_si256(proto_ok, _mm256_and_si256(src_ok, dst_ok)));
  return static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(ok)));
}

}  // namespace

ScanHit scan_avx2(const RuleTable& t, std::size_t begin, std::size_t end, const PacketKey& key) {
  if (begin >= end) return {kNoMatch, 0};
  const __m256i proto_bit = _mm256_set1_epi32(static_cast<int>(key.proto_bit));
  const __m256i src = _mm256_set1_epi32(static_cast<int>(key.src_ip));
  const __m256i dst = _mm256_set1_epi32(static_cast<int>(key.dst_ip));
  const __m256i sport = _mm256_set1_epi32(static_cast<int>(key.src_port));
  const __m256i dport = _mm256_set1_epi32(static_cast<int>(key.dst_port));

  // Blocks are aligned to the table's padding; lanes outside [begin, end)
  // are masked off, which keeps every load inside the padded columns.
  std::size_t block = begin / RuleTable::kLaneBlock * RuleTable::kLaneBlock;
  for (; block < end; block += RuleTable::kLaneBlock) {
    unsigned hits = match_block(t, block, proto_bit, src, dst, sport, dport);
    if (block < begin) hits &= ~0u << (begin - block);
    if (end - block < RuleTable::kLaneBlock) hits &= (1u << (end - block)) - 1u;
    if (hits != 0) {
      const std::size_t idx = block + static_cast<std::size_t>(__builtin_ctz(hits));
      return {static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx - begin + 1)};
    }
  }
  return {kNoMatch, static_cast<std::uint32_t>(end - begin)};
}

}  // namespace pfw::kernels
