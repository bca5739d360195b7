#pragma once

#include <cstdint>

#include "lantunnel/bytes.hpp"

namespace lantunnel {

constexpr size_t kTcpHeaderLen = 20;

// offset/reserved/flags words used by the tunnel (data offset 5, no options).
constexpr uint16_t kTcpFlagsSyn = 0x5002;
constexpr uint16_t kTcpFlagsSynAck = 0x5012;
constexpr uint16_t kTcpFlagsAck = 0x5010;
constexpr uint16_t kTcpFlagsPshAck = 0x5018;  // every tunnel data packet

// Constant stamped into every tunnel packet; receivers never validate it.
constexpr uint16_t kTunnelTcpChecksum = 0x06d8;

struct TcpHeader {
    uint16_t src_port = 0;
    uint16_t dst_port = 0;
    uint32_t seq = 0;
    uint32_t ack = 0;
    uint16_t offset_resv_flags = kTcpFlagsPshAck;
    uint16_t window = 0;  // repurposed: 0 = no fragmentation, 1 = fragmented
    uint16_t checksum = kTunnelTcpChecksum;
    uint16_t urgent = 0;

    bool operator==(const TcpHeader&) const = default;

    bool is_syn() const { return (offset_resv_flags & 0x0002) != 0; }
    bool is_ack() const { return (offset_resv_flags & 0x0010) != 0; }
};

struct TcpSegment {
    TcpHeader header;
    Bytes payload;
};

inline Bytes serialize_tcp(const TcpHeader& header, BytesView payload) {
    Bytes out;
    out.reserve(kTcpHeaderLen + payload.size());
    put_u16(out, header.src_port);
    put_u16(out, header.dst_port);
    put_u32(out, header.seq);
    put_u32(out, header.ack);
    put_u16(out, header.offset_resv_flags);
    put_u16(out, header.window);
    put_u16(out, header.checksum);
    put_u16(out, header.urgent);
    append(out, payload);
    return out;
}

inline TcpSegment parse_tcp(BytesView bytes) {
    require_len(bytes, kTcpHeaderLen, "tcp header");
    TcpSegment s;
    TcpHeader& h = s.header;
    h.src_port = get_u16(bytes, 0);
    h.dst_port = get_u16(bytes, 2);
    h.seq = get_u32(bytes, 4);
    h.ack = get_u32(bytes, 8);
    h.offset_resv_flags = get_u16(bytes, 12);
    h.window = get_u16(bytes, 14);
    h.checksum = get_u16(bytes, 16);
    h.urgent = get_u16(bytes, 18);
    s.payload.assign(bytes.begin() + kTcpHeaderLen, bytes.end());
    return s;
}

}  // namespace lantunnel
