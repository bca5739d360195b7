#pragma once

#include <cstdint>
#include <vector>

#include "lantunnel/rng.hpp"
#include "lantunnel/sim/trace.hpp"
#include "lantunnel/tunnel/tunnel.hpp"

namespace lantunnel {

// Connection parameters sniffed during the handshake; the data phase must
// continue this numbering or the firewall drops the flow.
struct HandshakeCapture {
    uint16_t client_dynamic_port = 0;
    uint32_t client_isn = 0;
    uint32_t server_isn = 0;
};

// Fresh identity tags for frames originated inside the simulation.
struct IdSource {
    uint64_t next = 1;
    uint64_t fresh() { return next++; }
};

// Handshake and control packets ride the same envelope layout as data but
// with their own TCP flags and an empty payload.
inline EthernetFrame make_control_packet(const HeaderProfile& profile, uint32_t seq,
                                         uint32_t ack, uint16_t flags, DeterministicRng& rng) {
    TunnelConnection tmp;
    tmp.profile = profile;
    tmp.seq_local = seq;
    tmp.ack_local = ack;
    EthernetFrame f = make_envelope({}, tmp, rng, false);
    Ipv4Packet ip = parse_ipv4(f.payload);
    TcpSegment tcp = parse_tcp(ip.payload);
    tcp.header.offset_resv_flags = flags;
    f.payload = serialize_ipv4(ip.header, serialize_tcp(tcp.header, tcp.payload));
    return f;
}

// The insider-run relay: opens the port-80 connection through the firewall,
// captures the handshake parameters, then shuttles frames between the LAN
// and the tunnel.
class ClientAgent {
  public:
    enum class Phase { Idle, Connecting, Relaying };

    struct Config {
        MacAddress mac;
        Ipv4Address ip;
        MacAddress gateway_mac;
        Ipv4Address server_public_ip;
        ForwardingConfig forwarding;
        bool isn_16bit = false;
    };

    ClientAgent(Config cfg, DeterministicRng& rng) : cfg_(std::move(cfg)), rng_(&rng) {}

    // Starts the 3-way handshake; returns the SYN to put on the LAN.
    SimFrame connect(IdSource& ids) {
        capture_ = {};
        capture_.client_dynamic_port = rng_->next_dynamic_port();
        capture_.client_isn = rng_->next_isn(cfg_.isn_16bit);

        conn_ = {};
        conn_.profile = {cfg_.mac,  cfg_.gateway_mac,
                         cfg_.ip,   cfg_.server_public_ip,
                         capture_.client_dynamic_port, 80};
        frag_buffer_ = {};
        phase_ = Phase::Connecting;

        EthernetFrame syn = make_control_packet(conn_.profile, capture_.client_isn, 0,
                                                kTcpFlagsSyn, *rng_);
        return {serialize_ethernet(syn), ids.fresh()};
    }

    void abort_connect() {
        if (phase_ == Phase::Connecting) phase_ = Phase::Idle;
    }

    // Everything the client observes arrives from the LAN medium; emissions
    // go back onto the LAN (envelopes toward the gateway, injected inner
    // frames toward their LAN destination).
    std::vector<SimFrame> handle_lan_frame(const SimFrame& in, IdSource& ids) {
        std::vector<SimFrame> out;
        EthernetFrame frame;
        try {
            frame = parse_ethernet(in.bytes);
        } catch (const CodecError&) {
            return out;
        }

        if (is_inbound_envelope(frame)) {
            handle_tunnel_frame(frame, in.id, ids, out);
            return out;
        }

        if (phase_ == Phase::Relaying &&
            should_forward_lan_to_tunnel(frame, cfg_.forwarding, &conn_.profile)) {
            for (const auto& env : encapsulate(in.bytes, conn_, *rng_)) {
                out.push_back({serialize_ethernet(env), in.id});
            }
        }
        return out;
    }

    Phase phase() const { return phase_; }
    const HandshakeCapture& capture() const { return capture_; }
    const TunnelConnection& connection() const { return conn_; }
    const Config& config() const { return cfg_; }

  private:
    bool is_inbound_envelope(const EthernetFrame& frame) const {
        if (phase_ == Phase::Idle) return false;
        if (frame.dst_mac != cfg_.mac || frame.ethertype != kEthertypeIpv4) return false;
        try {
            Ipv4Packet ip = parse_ipv4(frame.payload);
            if (ip.header.protocol != kIpProtoTcp) return false;
            TcpSegment tcp = parse_tcp(ip.payload);
            return ip.header.src == cfg_.server_public_ip && ip.header.dst == cfg_.ip &&
                   tcp.header.src_port == 80 &&
                   tcp.header.dst_port == capture_.client_dynamic_port;
        } catch (const CodecError&) {
            return false;
        }
    }

    void handle_tunnel_frame(const EthernetFrame& frame, uint64_t frame_id, IdSource& ids,
                             std::vector<SimFrame>& out) {
        Ipv4Packet ip = parse_ipv4(frame.payload);
        TcpSegment tcp = parse_tcp(ip.payload);

        if (phase_ == Phase::Connecting) {
            if (tcp.header.offset_resv_flags == kTcpFlagsSynAck &&
                tcp.header.ack == capture_.client_isn + 1) {
                capture_.server_isn = tcp.header.seq;
                // The handshake consumes one sequence number on each side;
                // data numbering chains from ISN + 1.
                conn_.seq_local = capture_.client_isn + 1;
                conn_.last_peer_seq = capture_.server_isn;
                conn_.last_peer_payload_len = 1;
                conn_.ack_local = capture_.server_isn + 1;
                phase_ = Phase::Relaying;
                EthernetFrame ack = make_control_packet(conn_.profile, conn_.seq_local,
                                                        conn_.ack_local, kTcpFlagsAck, *rng_);
                out.push_back({serialize_ethernet(ack), ids.fresh()});
            }
            return;
        }

        if (tcp.header.offset_resv_flags != kTcpFlagsPshAck) return;  // control traffic
        try {
            if (auto inner = decapsulate(frame, conn_, frag_buffer_)) {
                out.push_back({std::move(*inner), frame_id});
            }
        } catch (const TunnelError&) {
            // not this tunnel's traffic
        }
    }

    Config cfg_;
    DeterministicRng* rng_;
    Phase phase_ = Phase::Idle;
    HandshakeCapture capture_;
    TunnelConnection conn_;
    FragmentBuffer frag_buffer_;
};

}  // namespace lantunnel
