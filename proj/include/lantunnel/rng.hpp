#pragma once

#include <cstdint>
#include <random>

namespace lantunnel {

// Deterministic RNG shared by a whole scenario. Identical seeds yield
// identical idents, ISNs and port draws, which golden traces depend on.
class DeterministicRng {
  public:
    explicit DeterministicRng(uint64_t seed) : engine_(seed) {}

    uint16_t next_u16() { return static_cast<uint16_t>(engine_()); }
    uint32_t next_u32() { return static_cast<uint32_t>(engine_()); }

    // Dynamic (ephemeral) TCP source port.
    uint16_t next_dynamic_port() {
        return static_cast<uint16_t>(49152 + engine_() % (65536 - 49152));
    }

    // Initial sequence number; restricted mode mirrors a 16-bit ISN space.
    uint32_t next_isn(bool restrict_16bit) {
        return restrict_16bit ? (next_u32() & 0xffff) : next_u32();
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace lantunnel
