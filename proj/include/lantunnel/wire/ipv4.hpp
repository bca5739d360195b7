#pragma once

#include <cstdint>
#include <utility>

#include "lantunnel/addr.hpp"
#include "lantunnel/bytes.hpp"
#include "lantunnel/checksum.hpp"

namespace lantunnel {

constexpr size_t kIpv4HeaderLen = 20;

constexpr uint8_t kIpProtoTcp = 0x06;
constexpr uint8_t kIpProtoUdp = 0x11;
constexpr uint8_t kIpProtoIcmp = 0x01;

struct Ipv4Header {
    uint8_t version_ihl = 0x45;  // no options
    uint8_t tos = 0;
    uint16_t total_length = 0;  // 20 + payload length
    uint16_t ident = 0;
    uint16_t flags_offset = 0;
    uint8_t ttl = 0x80;
    uint8_t protocol = 0;
    uint16_t checksum = 0;
    Ipv4Address src;
    Ipv4Address dst;

    bool operator==(const Ipv4Header&) const = default;
};

struct Ipv4Packet {
    Ipv4Header header;
    Bytes payload;
    bool checksum_valid = true;  // set by parse; serialize always emits a correct checksum
};

namespace detail {
inline Bytes ipv4_header_bytes(const Ipv4Header& h, uint16_t checksum) {
    Bytes out;
    out.reserve(kIpv4HeaderLen);
    out.push_back(h.version_ihl);
    out.push_back(h.tos);
    put_u16(out, h.total_length);
    put_u16(out, h.ident);
    put_u16(out, h.flags_offset);
    out.push_back(h.ttl);
    out.push_back(h.protocol);
    put_u16(out, checksum);
    out.insert(out.end(), h.src.octets.begin(), h.src.octets.end());
    out.insert(out.end(), h.dst.octets.begin(), h.dst.octets.end());
    return out;
}
}  // namespace detail

// Serializes header + payload. The checksum field is recomputed; total_length
// must already equal 20 + payload length.
inline Bytes serialize_ipv4(const Ipv4Header& header, BytesView payload) {
    if (header.version_ihl != 0x45) {
        throw CodecError("ipv4 options unsupported (version_ihl must be 0x45)");
    }
    if (header.total_length != kIpv4HeaderLen + payload.size()) {
        throw SizeError("ipv4 total_length " + std::to_string(header.total_length) +
                        " != 20 + payload " + std::to_string(payload.size()));
    }
    Bytes out = detail::ipv4_header_bytes(header, 0);
    uint16_t ck = compute_ip_checksum(out);
    out[10] = static_cast<uint8_t>(ck >> 8);
    out[11] = static_cast<uint8_t>(ck & 0xff);
    append(out, payload);
    return out;
}

// Parses and validates the checksum. An incorrect checksum is reported via
// the validity flag rather than an error; tunnel receivers tolerate but log
// invalid checksums from foreign sources.
inline Ipv4Packet parse_ipv4(BytesView bytes) {
    require_len(bytes, kIpv4HeaderLen, "ipv4 header");
    Ipv4Packet p;
    Ipv4Header& h = p.header;
    h.version_ihl = bytes[0];
    if (h.version_ihl != 0x45) {
        throw CodecError("ipv4 options unsupported (version_ihl must be 0x45)");
    }
    h.tos = bytes[1];
    h.total_length = get_u16(bytes, 2);
    h.ident = get_u16(bytes, 4);
    h.flags_offset = get_u16(bytes, 6);
    h.ttl = bytes[8];
    h.protocol = bytes[9];
    h.checksum = get_u16(bytes, 10);
    std::copy(bytes.begin() + 12, bytes.begin() + 16, h.src.octets.begin());
    std::copy(bytes.begin() + 16, bytes.begin() + 20, h.dst.octets.begin());
    if (h.total_length < kIpv4HeaderLen || h.total_length > bytes.size()) {
        throw TruncationError("ipv4 total_length " + std::to_string(h.total_length) +
                              " exceeds available " + std::to_string(bytes.size()));
    }
    // Including the stored checksum, a correct header sums to 0xFFFF.
    p.checksum_valid = ones_complement_sum(bytes.subspan(0, kIpv4HeaderLen)) == 0xffff;
    p.payload.assign(bytes.begin() + kIpv4HeaderLen, bytes.begin() + h.total_length);
    return p;
}

}  // namespace lantunnel
