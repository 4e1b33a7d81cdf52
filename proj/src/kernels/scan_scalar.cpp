#include "pfw/kernels.hpp"

namespace pfw::kernels {

ScanHit scan_scalar(const RuleTable& t, std::size_t begin, std::size_t end,
                    const PacketKey& key) {
  const auto* proto = t.proto_bits();
  const auto* sb = t.src_base();
  const auto* sm = t.src_mask();
  const auto* db = t.dst_base();
  const auto* dm = t.dst_mask();
  const auto* spl = t.sport_lo();
  const auto* sph = t.sport_hi();
  const auto* dpl = t.dport_lo();
  const auto* dph = t.dport_hi();
  for (std::size_t i = begin; i < end; ++i) {
    if ((proto[i] & key.proto_bit) != 0 && (key.src_ip & sm[i]) == sb[i] &&
        (key.dst_ip & dm[i]) == db[i] && spl[i] <= key.src_port && key.src_port <= sph[i] &&
        dpl[i] <= key.dst_port && key.dst_port <= dph[i]) {
      return {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i - begin + 1)};
    }
  }
  return {kNoMatch, static_cast<std::uint32_t>(end - begin)};
}

}  // namespace pfw::kernels
