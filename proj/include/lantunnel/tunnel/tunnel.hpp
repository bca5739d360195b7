#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lantunnel/addr.hpp"
#include "lantunnel/bytes.hpp"
#include "lantunnel/rng.hpp"
#include "lantunnel/wire/arp.hpp"
#include "lantunnel/wire/ethernet.hpp"
#include "lantunnel/wire/ipv4.hpp"
#include "lantunnel/wire/tcp.hpp"

namespace lantunnel {

// Inner frames above this length are split in two; the envelope for a
// 1460-byte inner frame exactly fills the 1500-byte MTU (20 IP + 20 TCP).
constexpr size_t kFragmentThreshold = 1460;

struct TunnelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The fixed header values one side stamps on every envelope it emits.
// dst_mac is the gateway of the emitting side.
struct HeaderProfile {
    MacAddress src_mac;
    MacAddress dst_mac;
    Ipv4Address src_ip;
    Ipv4Address dst_ip;
    uint16_t src_port = 0;
    uint16_t dst_port = 0;

    bool operator==(const HeaderProfile&) const = default;
};

struct TunnelConnection {
    HeaderProfile profile;
    uint32_t seq_local = 0;
    uint32_t ack_local = 0;
    uint32_t last_peer_seq = 0;
    uint32_t last_peer_payload_len = 0;
};

// At most one pending fragment: packets split into at most two pieces and
// fragments are never interleaved with other tunnel traffic.
struct FragmentBuffer {
    std::optional<Bytes> pending;
};

struct ForwardingConfig {
    Ipv4Address server_second_ip;
    MacAddress server_mac;
    MacAddress client_mac;
    Ipv4Prefix lan_prefix;
};

inline TunnelConnection advance_sequence(TunnelConnection conn, uint32_t emitted_payload_len) {
    conn.seq_local += emitted_payload_len;  // wraps mod 2^32
    return conn;
}

namespace detail {
// True if the frame is a tunnel envelope on this profile's 5-tuple, in
// either direction.
inline bool is_tunnel_envelope(const EthernetFrame& frame, const HeaderProfile& profile) {
    if (frame.ethertype != kEthertypeIpv4) return false;
    Ipv4Packet ip;
    try {
        ip = parse_ipv4(frame.payload);
    } catch (const CodecError&) {
        return false;
    }
    if (ip.header.protocol != kIpProtoTcp) return false;
    TcpSegment tcp;
    try {
        tcp = parse_tcp(ip.payload);
    } catch (const CodecError&) {
        return false;
    }
    bool fwd = ip.header.src == profile.src_ip && ip.header.dst == profile.dst_ip &&
               tcp.header.src_port == profile.src_port && tcp.header.dst_port == profile.dst_port;
    bool rev = ip.header.src == profile.dst_ip && ip.header.dst == profile.src_ip &&
               tcp.header.src_port == profile.dst_port && tcp.header.dst_port == profile.src_port;
    return fwd || rev;
}
}  // namespace detail

// Client-side capture predicate: forward LAN frames that are broadcast or
// addressed to the phantom server, never frames the server (via this client)
// put on the wire, and never this tunnel's own envelopes.
inline bool should_forward_lan_to_tunnel(const EthernetFrame& frame, const ForwardingConfig& cfg,
                                         const HeaderProfile* tunnel = nullptr) {
    if (frame.src_mac == cfg.server_mac) return false;
    if (tunnel && detail::is_tunnel_envelope(frame, *tunnel)) return false;

    if (frame.dst_mac.is_broadcast()) return true;
    if (frame.dst_mac == cfg.server_mac) return true;
    if (frame.ethertype == kEthertypeIpv4) {
        try {
            return parse_ipv4(frame.payload).header.dst == cfg.server_second_ip;
        } catch (const CodecError&) {
            return false;
        }
    }
    if (frame.ethertype == kEthertypeArp) {
        try {
            return parse_arp(frame.payload).target_ip == cfg.server_second_ip;
        } catch (const CodecError&) {
            return false;
        }
    }
    return false;
}

// Server-side predicate: forward second-IP-stack output destined for the
// attacked LAN. Frames that arrived over the tunnel carry a LAN host's
// source MAC, not the server's, so they never loop back.
inline bool should_forward_server_to_tunnel(const EthernetFrame& frame,
                                            const ForwardingConfig& cfg) {
    if (frame.src_mac != cfg.server_mac) return false;
    if (frame.dst_mac.is_broadcast()) return true;
    if (frame.ethertype == kEthertypeIpv4) {
        try {
            Ipv4Address dst = parse_ipv4(frame.payload).header.dst;
            return cfg.lan_prefix.contains(dst) || dst == cfg.lan_prefix.broadcast_address();
        } catch (const CodecError&) {
            return false;
        }
    }
    if (frame.ethertype == kEthertypeArp) {
        try {
            return cfg.lan_prefix.contains(parse_arp(frame.payload).target_ip);
        } catch (const CodecError&) {
            return false;
        }
    }
    return false;
}

// Builds one envelope around a chunk of the inner frame. The TCP window
// carries the more-fragments flag; the IP ident comes from the scenario RNG.
inline EthernetFrame make_envelope(BytesView chunk, const TunnelConnection& conn,
                                   DeterministicRng& rng, bool more_fragments) {
    TcpHeader tcp;
    tcp.src_port = conn.profile.src_port;
    tcp.dst_port = conn.profile.dst_port;
    tcp.seq = conn.seq_local;
    tcp.ack = conn.ack_local;
    tcp.offset_resv_flags = kTcpFlagsPshAck;
    tcp.window = more_fragments ? 1 : 0;
    tcp.checksum = kTunnelTcpChecksum;
    Bytes tcp_bytes = serialize_tcp(tcp, chunk);

    Ipv4Header ip;
    ip.total_length = static_cast<uint16_t>(kIpv4HeaderLen + tcp_bytes.size());
    ip.ident = rng.next_u16();
    ip.flags_offset = 0x4000;
    ip.ttl = 0x80;
    ip.protocol = kIpProtoTcp;
    ip.src = conn.profile.src_ip;
    ip.dst = conn.profile.dst_ip;

    EthernetFrame outer;
    outer.dst_mac = conn.profile.dst_mac;
    outer.src_mac = conn.profile.src_mac;
    outer.ethertype = kEthertypeIpv4;
    outer.payload = serialize_ipv4(ip, tcp_bytes);
    return outer;
}

// Wraps a full LAN frame for the tunnel, splitting once when it exceeds the
// 1460-byte threshold. Advances seq_local by the total payload emitted.
inline std::vector<EthernetFrame> encapsulate(BytesView inner, TunnelConnection& conn,
                                              DeterministicRng& rng) {
    if (inner.size() > kEthernetMaxFrame) {
        throw SizeError("inner frame " + std::to_string(inner.size()) + " exceeds " +
                        std::to_string(kEthernetMaxFrame));
    }
    std::vector<EthernetFrame> out;
    if (inner.size() <= kFragmentThreshold) {
        out.push_back(make_envelope(inner, conn, rng, false));
        conn = advance_sequence(conn, static_cast<uint32_t>(inner.size()));
    } else {
        out.push_back(make_envelope(inner.subspan(0, kFragmentThreshold), conn, rng, true));
        conn = advance_sequence(conn, kFragmentThreshold);
        out.push_back(make_envelope(inner.subspan(kFragmentThreshold), conn, rng, false));
        conn = advance_sequence(conn, static_cast<uint32_t>(inner.size() - kFragmentThreshold));
    }
    return out;
}

// Strips the envelope of a tunnel packet addressed to this endpoint.
// Returns the inner frame once complete; a window=1 piece is held in the
// fragment buffer until its remainder arrives.
inline std::optional<Bytes> decapsulate(const EthernetFrame& outer, TunnelConnection& conn,
                                        FragmentBuffer& buf) {
    if (outer.ethertype != kEthertypeIpv4) {
        throw TunnelError("tunnel envelope must be ipv4");
    }
    Ipv4Packet ip = parse_ipv4(outer.payload);
    if (ip.header.protocol != kIpProtoTcp) {
        throw TunnelError("tunnel envelope must be tcp");
    }
    TcpSegment tcp = parse_tcp(ip.payload);
    if (ip.header.src != conn.profile.dst_ip || ip.header.dst != conn.profile.src_ip ||
        tcp.header.src_port != conn.profile.dst_port ||
        tcp.header.dst_port != conn.profile.src_port) {
        throw TunnelError("tunnel 5-tuple mismatch");
    }
    if (tcp.header.window > 1) {
        throw TunnelError("fragment flag out of range: " + std::to_string(tcp.header.window));
    }

    conn.last_peer_seq = tcp.header.seq;
    conn.last_peer_payload_len = static_cast<uint32_t>(tcp.payload.size());
    conn.ack_local = conn.last_peer_seq + conn.last_peer_payload_len;

    if (tcp.header.window == 1) {
        buf.pending = std::move(tcp.payload);
        return std::nullopt;
    }
    if (buf.pending) {
        Bytes inner = std::move(*buf.pending);
        buf.pending.reset();
        append(inner, tcp.payload);
        return inner;
    }
    return tcp.payload;
}

}  // namespace lantunnel
