#pragma once

#include <cstdint>

#include "lantunnel/bytes.hpp"
#include "lantunnel/checksum.hpp"

namespace lantunnel {

constexpr size_t kIcmpHeaderLen = 8;

enum class IcmpKind : uint8_t {
    EchoReply = 0,
    EchoRequest = 8,
};

struct IcmpEcho {
    IcmpKind kind = IcmpKind::EchoRequest;
    uint16_t ident = 0;
    uint16_t seqno = 0;
    Bytes payload;

    bool operator==(const IcmpEcho&) const = default;
};

// Mirrors ident, seqno and payload of the matching request.
inline IcmpEcho make_echo_reply(const IcmpEcho& request) {
    return {IcmpKind::EchoReply, request.ident, request.seqno, request.payload};
}

inline Bytes serialize_icmp(const IcmpEcho& e) {
    Bytes out;
    out.reserve(kIcmpHeaderLen + e.payload.size());
    out.push_back(static_cast<uint8_t>(e.kind));
    out.push_back(0);  // code
    put_u16(out, 0);   // checksum placeholder
    put_u16(out, e.ident);
    put_u16(out, e.seqno);
    append(out, e.payload);
    uint16_t ck = internet_checksum(out);
    out[2] = static_cast<uint8_t>(ck >> 8);
    out[3] = static_cast<uint8_t>(ck & 0xff);
    return out;
}

inline IcmpEcho parse_icmp(BytesView bytes) {
    require_len(bytes, kIcmpHeaderLen, "icmp header");
    uint8_t type = bytes[0];
    if (type != 0 && type != 8) {
        throw CodecError("unsupported icmp type " + std::to_string(type));
    }
    IcmpEcho e;
    e.kind = static_cast<IcmpKind>(type);
    e.ident = get_u16(bytes, 4);
    e.seqno = get_u16(bytes, 6);
    e.payload.assign(bytes.begin() + kIcmpHeaderLen, bytes.end());
    return e;
}

}  // namespace lantunnel
