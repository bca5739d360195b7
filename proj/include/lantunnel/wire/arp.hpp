#pragma once

#include <cstdint>

#include "lantunnel/addr.hpp"
#include "lantunnel/bytes.hpp"

namespace lantunnel {

constexpr size_t kArpBodyLen = 28;

enum class ArpOp : uint16_t {
    Request = 1,
    Reply = 2,
};

struct ArpPacket {
    ArpOp op = ArpOp::Request;
    MacAddress sender_mac;
    Ipv4Address sender_ip;
    MacAddress target_mac;  // zeroed on requests
    Ipv4Address target_ip;

    bool operator==(const ArpPacket&) const = default;
};

inline ArpPacket make_arp_request(MacAddress sender_mac, Ipv4Address sender_ip,
                                  Ipv4Address target_ip) {
    return {ArpOp::Request, sender_mac, sender_ip, MacAddress::zero(), target_ip};
}

// Fills sender fields from the responder's identity.
inline ArpPacket make_arp_reply(const ArpPacket& request, MacAddress responder_mac) {
    return {ArpOp::Reply, responder_mac, request.target_ip, request.sender_mac,
            request.sender_ip};
}

inline Bytes serialize_arp(const ArpPacket& p) {
    Bytes out;
    out.reserve(kArpBodyLen);
    put_u16(out, 1);       // hardware type: ethernet
    put_u16(out, 0x0800);  // protocol type: ipv4
    out.push_back(6);
    out.push_back(4);
    put_u16(out, static_cast<uint16_t>(p.op));
    out.insert(out.end(), p.sender_mac.octets.begin(), p.sender_mac.octets.end());
    out.insert(out.end(), p.sender_ip.octets.begin(), p.sender_ip.octets.end());
    out.insert(out.end(), p.target_mac.octets.begin(), p.target_mac.octets.end());
    out.insert(out.end(), p.target_ip.octets.begin(), p.target_ip.octets.end());
    return out;
}

inline ArpPacket parse_arp(BytesView bytes) {
    require_len(bytes, kArpBodyLen, "arp body");
    if (get_u16(bytes, 0) != 1 || get_u16(bytes, 2) != 0x0800 || bytes[4] != 6 || bytes[5] != 4) {
        throw CodecError("unsupported arp hardware/protocol type");
    }
    uint16_t op = get_u16(bytes, 6);
    if (op != 1 && op != 2) {
        throw CodecError("malformed arp op " + std::to_string(op));
    }
    ArpPacket p;
    p.op = static_cast<ArpOp>(op);
    std::copy(bytes.begin() + 8, bytes.begin() + 14, p.sender_mac.octets.begin());
    std::copy(bytes.begin() + 14, bytes.begin() + 18, p.sender_ip.octets.begin());
    std::copy(bytes.begin() + 18, bytes.begin() + 24, p.target_mac.octets.begin());
    std::copy(bytes.begin() + 24, bytes.begin() + 28, p.target_ip.octets.begin());
    return p;
}

}  // namespace lantunnel
