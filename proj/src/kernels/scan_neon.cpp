// AArch64 only. Four lanes per step; the table's 8-rule padding covers it.
#if defined(__aarch64__)
#include <arm_neon.h>

#include "pfw/kernels.hpp"

namespace pfw::kernels {

ScanHit scan_neon(const RuleTable& t, std::size_t begin, std::size_t end, const PacketKey& key) {
  if (begin >= end) return {kNoMatch, 0};
  constexpr std::size_t kLanes = 4;
  const uint32x4_t proto_bit = vdupq_n_u32(key.proto_bit);
  const uint32x4_t src = vdupq_n_u32(key.src_ip);
  const uint32x4_t dst = vdupq_n_u32(key.dst_ip);
  const uint32x4_t sport = vdupq_n_u32(key.src_port);
  const uint32x4_t dport = vdupq_n_u32(key.dst_port);
  const uint32x4_t lane_bits = {1u, 2u, 4u, 8u};

  std::size_t block = begin / kLanes * kLanes;
  for (; block < end; block += kLanes) {
    const std::size_t i = block;
    uint32x4_t ok = vtstq_u32(vld1q_u32(t.proto_bits() + i), proto_bit);
    ok = vandq_u32(ok, vceqq_u32(vandq_u32(src, vld1q_u32(t.src_mask() + i)),
                                 vld1q_u32(t.src_base() + i)));
    ok = vandq_u32(ok, vceqq_u32(vandq_u32(dst, vld1q_u32(t.dst_mask() + i)),
                                 vld1q_u32(t.dst_base() + i)));
    ok = vandq_u32(ok, vcleq_u32(vld1q_u32(t.sport_lo() + i), sport));
    ok = vandq_u32(ok, vcleq_u32(sport, vld1q_u32(t.sport_hi() + i)));
    ok = vandq_u32(ok, vcleq_u32(vld1q_u32(t.dport_lo() + i), dport));
    ok = vandq_u32(ok, vcleq_u32(dport, vld1q_u32(t.dport_hi() + i)));
    unsigned hits = vaddvq_u32(vandq_u32(ok, lane_bits));
    if (block < begin) hits &= ~0u << (begin - block);
    if (end - block < kLanes) hits &= (1u << (end - block)) - 1u;
    if (hits != 0) {
      const std::size_t idx = block + static_cast<std::size_t>(__builtin_ctz(hits));
      return {static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx - begin + 1)};
    }
  }
  return {kNoMatch, static_cast<std::uint32_t>(end - begin)};
}

}  // namespace pfw::kernels
#endif
