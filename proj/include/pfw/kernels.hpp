#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pfw/model.hpp"

namespace pfw {

// Column-major copy of a Ruleset laid out for the scan kernels. Every column
// is padded to a multiple of kLaneBlock with rules that can never match, so
// vector kernels may load whole blocks without tail handling.
class RuleTable {
 public:
  static constexpr std::size_t kLaneBlock = 8;

  RuleTable() = default;
  explicit RuleTable(const Ruleset& ruleset);

  std::size_t size() const { return size_; }
  Action action(std::size_t index) const { return static_cast<Action>(action_[index]); }

  // Bit (1 << proto) is set for every packet protocol a rule accepts.
  const std::uint32_t* proto_bits() const { return proto_bits_.data(); }
  const std::uint32_t* src_base() const { return src_base_.data(); }
  const std::uint32_t* src_mask() const { return src_mask_.data(); }
  const std::uint32_t* dst_base() const { return dst_base_.data(); }
  const std::uint32_t* dst_mask() const { return dst_mask_.data(); }
  const std::uint32_t* sport_lo() const { return sport_lo_.data(); }
  const std::uint32_t* sport_hi() const { return sport_hi_.data(); }
  const std::uint32_t* dport_lo() const { return dport_lo_.data(); }
  const std::uint32_t* dport_hi() const { return dport_hi_.data(); }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint8_t> action_;
  std::vector<std::uint32_t> proto_bits_, src_base_, src_mask_, dst_base_, dst_mask_;
  std::vector<std::uint32_t> sport_lo_, sport_hi_, dport_lo_, dport_hi_;
};

// Packet fields widened to the kernels' 32-bit lane type.
struct PacketKey {
  std::uint32_t proto_bit;
  std::uint32_t src_ip;
  std::uint32_t dst_ip;
  std::uint32_t src_port;
  std::uint32_t dst_port;

  static PacketKey from(const Packet& p) {
    return {1u << static_cast<unsigned>(p.proto), p.src_ip, p.dst_ip, p.src_port, p.dst_port};
  }
};

inline constexpr std::uint32_t kNoMatch = 0xffffffffu;

struct ScanHit {
  std::uint32_t index = kNoMatch;  // global rule index of the earliest match
  std::uint32_t comparisons = 0;   // rules examined under early exit

  bool matched() const { return index != kNoMatch; }
};

// Scans rules [begin, end) in priority order and stops at the first match.
using ScanFn = ScanHit (*)(const RuleTable&, std::size_t begin, std::size_t end,
                           const PacketKey&);

enum class KernelKind { kScalar, kAvx2, kNeon };

std::string_view to_string(KernelKind kind);

namespace kernels {
ScanHit scan_scalar(const RuleTable&, std::size_t, std::size_t, const PacketKey&);
#if defined(__x86_64__) || defined(_M_X64)
ScanHit scan_avx2(const RuleTable&, std::size_t, std::size_t, const PacketKey&);
#endif
#if defined(__aarch64__)
ScanHit scan_neon(const RuleTable&, std::size_t, std::size_t, const PacketKey&);
#endif
}  // namespace kernels

// Kernels this build contains and the running CPU supports; kScalar first.
std::vector<KernelKind> available_kernels();
ScanFn kernel_for(KernelKind kind);

// The kernel used by the classifier and engines. Defaults to the widest
// available kind; override_kernel throws ConfigError for an unavailable kind.
KernelKind active_kernel();
void override_kernel(KernelKind kind);
void reset_kernel();

ScanHit scan(const RuleTable& table, std::size_t begin, std::size_t end, const PacketKey& key);

}  // namespace pfw
