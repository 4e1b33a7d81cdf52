#include <atomic>

#include "pfw/errors.hpp"
#include "pfw/kernels.hpp"

namespace pfw {
namespace {

bool cpu_supports(KernelKind kind) {
  switch (kind) {
    case KernelKind::kScalar:
      return true;
    case KernelKind::kAvx2:
#if (defined(__x86_64__) || defined(_M_X64)) && defined(PFW_HAVE_AVX2_KERNEL)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case KernelKind::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

KernelKind widest_available() {
  const auto kinds = available_kernels();
  return kinds.back();
}

std::atomic<ScanFn> g_scan{nullptr};
std::atomic<KernelKind> g_kind{KernelKind::kScalar};

ScanFn current() {
  ScanFn fn = g_scan.load(std::memory_order_acquire);
  if (fn == nullptr) {
    reset_kernel();
    fn = g_scan.load(std::memory_order_acquire);
  }
  return fn;
}

}  // namespace

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kScalar:
      return "scalar";
    case KernelKind::kAvx2:
      return "avx2";
    case KernelKind::kNeon:
      return "neon";
  }
  return "unknown";
}

std::vector<KernelKind> available_kernels() {
  std::vector<KernelKind> kinds;
  for (auto kind : {KernelKind::kScalar, KernelKind::kAvx2, KernelKind::kNeon}) {
    if (cpu_supports(kind)) kinds.push_back(kind);
  }
  return kinds;
}

ScanFn kernel_for(KernelKind kind) {
  if (!cpu_supports(kind)) {
    throw ConfigError("scan kernel '" + std::string(to_string(kind)) + "' is not available");
  }
  switch (kind) {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(PFW_HAVE_AVX2_KERNEL)
    case KernelKind::kAvx2:
      return &kernels::scan_avx2;
#endif
#if defined(__aarch64__)
    case KernelKind::kNeon:
      return &kernels::scan_neon;
#endif
    default:
      return &kernels::scan_scalar;
  }
}

KernelKind active_kernel() {
  current();
  return g_kind.load(std::memory_order_acquire);
}

void override_kernel(KernelKind kind) {
  ScanFn fn = kernel_for(kind);
  g_kind.store(kind, std::memory_order_release);
  g_scan.store(fn, std::memory_order_release);
}

void reset_kernel() { override_kernel(widest_available()); }

ScanHit scan(const RuleTable& table, std::size_t begin, std::size_t end, const PacketKey& key) {
  return current()(table, begin, end, key);
}

}  // namespace pfw
