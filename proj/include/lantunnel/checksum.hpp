#pragma once

#include <cstdint>

#include "lantunnel/bytes.hpp"

namespace lantunnel {

// One's-complement sum over 16-bit big-endian words, folded to 16 bits.
// Odd trailing byte is padded with zero on the right.
inline uint16_t ones_complement_sum(BytesView data) {
    uint32_t acc = 0;
    size_t i = 0;
    for (; i + 1 < data.size(); i += 2) {
        acc += get_u16(data, i);
    }
    if (i < data.size()) {
        acc += static_cast<uint32_t>(data[i]) << 8;
    }
    while (acc > 0xffff) {
        acc = (acc & 0xffff) + (acc >> 16);
    }
    return static_cast<uint16_t>(acc);
}

// Checksum over a 20-byte IPv4 header whose checksum field is zeroed.
inline uint16_t compute_ip_checksum(BytesView header) {
    if (header.size() != 20) {
        throw SizeError("ip checksum input must be 20 bytes, got " +
                        std::to_string(header.size()));
    }
    return static_cast<uint16_t>(~ones_complement_sum(header));
}

// Generic internet checksum (used for ICMP bodies).
inline uint16_t internet_checksum(BytesView data) {
    return static_cast<uint16_t>(~ones_complement_sum(data));
}

}  // namespace lantunnel
