#pragma once

#include <cstdint>

#include "lantunnel/addr.hpp"
#include "lantunnel/bytes.hpp"

namespace lantunnel {

constexpr uint16_t kEthertypeIpv4 = 0x0800;
constexpr uint16_t kEthertypeArp = 0x0806;

constexpr size_t kEthernetHeaderLen = 14;
constexpr size_t kEthernetMtu = 1500;
constexpr size_t kEthernetMaxFrame = kEthernetHeaderLen + kEthernetMtu;  // 1514

struct EthernetFrame {
    MacAddress dst_mac;
    MacAddress src_mac;
    uint16_t ethertype = 0;
    Bytes payload;

    bool operator==(const EthernetFrame&) const = default;
};

inline Bytes serialize_ethernet(const EthernetFrame& frame) {
    if (frame.payload.size() > kEthernetMtu) {
        throw SizeError("ethernet payload " + std::to_string(frame.payload.size()) +
                        " exceeds MTU " + std::to_string(kEthernetMtu));
    }
    Bytes out;
    out.reserve(kEthernetHeaderLen + frame.payload.size());
    out.insert(out.end(), frame.dst_mac.octets.begin(), frame.dst_mac.octets.end());
    out.insert(out.end(), frame.src_mac.octets.begin(), frame.src_mac.octets.end());
    put_u16(out, frame.ethertype);
    append(out, frame.payload);
    return out;
}

inline EthernetFrame parse_ethernet(BytesView bytes) {
    require_len(bytes, kEthernetHeaderLen, "ethernet frame");
    if (bytes.size() > kEthernetMaxFrame) {
        throw SizeError("ethernet frame " + std::to_string(bytes.size()) + " exceeds " +
                        std::to_string(kEthernetMaxFrame));
    }
    EthernetFrame f;
    std::copy(bytes.begin(), bytes.begin() + 6, f.dst_mac.octets.begin());
    std::copy(bytes.begin() + 6, bytes.begin() + 12, f.src_mac.octets.begin());
    f.ethertype = get_u16(bytes, 12);
    f.payload.assign(bytes.begin() + kEthernetHeaderLen, bytes.end());
    return f;
}

}  // namespace lantunnel
