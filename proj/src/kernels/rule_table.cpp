#include "pfw/kernels.hpp"

namespace pfw {

RuleTable::RuleTable(const Ruleset& ruleset) : size_(ruleset.size()) {
  const std::size_t padded = (size_ + kLaneBlock - 1) / kLaneBlock * kLaneBlock;
  action_.assign(padded, static_cast<std::uint8_t>(kDefaultVerdict));
  // Padding rules accept no protocol, so they never match.
  proto_bits_.assign(padded, 0);
  src_base_.assign(padded, 0);
  src_mask_.assign(padded, 0);
  dst_base_.assign(padded, 0);
  dst_mask_.assign(padded, 0);
  sport_lo_.assign(padded, 0);
  sport_hi_.assign(padded, 0);
  dport_lo_.assign(padded, 0);
  dport_hi_.assign(padded, 0);

  for (std::size_t i = 0; i < size_; ++i) {
    const Rule& r = ruleset.rules[i];
    action_[i] = static_cast<std::uint8_t>(r.action);
    proto_bits_[i] = r.proto == Protocol::kAny
                         ? 0b111u
                         : 1u << static_cast<unsigned>(r.proto);
    src_base_[i] = r.src.base;
    src_mask_[i] = r.src.mask();
    dst_base_[i] = r.dst.base;
    dst_mask_[i] = r.dst.mask();
    sport_lo_[i] = r.sport.lo;
    sport_hi_[i] = r.sport.hi;
    dport_lo_[i] = r.dport.lo;
    dport_hi_[i] = r.dport.hi;
  }
}

}  // namespace pfw
