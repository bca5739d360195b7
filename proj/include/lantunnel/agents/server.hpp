#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lantunnel/agents/client.hpp"
#include "lantunnel/rng.hpp"
#include "lantunnel/sim/host.hpp"
#include "lantunnel/sim/trace.hpp"
#include "lantunnel/tunnel/tunnel.hpp"

namespace lantunnel {

// Browser announcements aggregated on the attacker side.
struct NeighborhoodListing {
    struct Entry {
        std::vector<std::string> shares;
        uint64_t last_seen = 0;
    };
    std::map<std::string, Entry> entries;
};

// The attacker side: a port-80 listener plus a phantom second-IP host stack
// that participates in the victim LAN through the tunnel.
class ServerAgent {
  public:
    enum class Phase { Listening, Relaying };

    struct Config {
        MacAddress mac;
        MacAddress gateway_mac;
        Ipv4Address public_ip;
        Ipv4Address second_ip;
        Ipv4Prefix lan_prefix;
        MacAddress client_mac;
        bool isn_16bit = false;
        bool enabled = true;  // disabled = nobody listening on port 80
    };

    ServerAgent(Config cfg, DeterministicRng& rng, IdSource& ids)
        : cfg_(std::move(cfg)), rng_(&rng), ids_(&ids) {
        // The phantom host shares the server's own MAC.
        stack_.mac = cfg_.mac;
        stack_.ip = cfg_.second_ip;
        stack_.prefix = cfg_.lan_prefix;
        forwarding_ = {cfg_.second_ip, cfg_.mac, cfg_.client_mac, cfg_.lan_prefix};
    }

    struct Output {
        std::vector<SimFrame> to_internet;  // envelopes toward the server's gateway
        // Decapsulated inner frames and second-IP stack responses, in the
        // order they hit the server's interface.
        std::vector<SimFrame> local_events;
    };

    // Handles one frame delivered on the server's internet interface.
    Output handle_internet_frame(const SimFrame& in, uint64_t now) {
        Output out;
        EthernetFrame frame;
        Ipv4Packet ip;
        TcpSegment tcp;
        try {
            frame = parse_ethernet(in.bytes);
            if (frame.ethertype != kEthertypeIpv4) return out;
            ip = parse_ipv4(frame.payload);
            if (ip.header.protocol != kIpProtoTcp) return out;
            tcp = parse_tcp(ip.payload);
        } catch (const CodecError&) {
            return out;
        }
        if (ip.header.dst != cfg_.public_ip || tcp.header.dst_port != 80) return out;

        if (phase_ == Phase::Listening) {
            if (!cfg_.enabled || tcp.header.offset_resv_flags != kTcpFlagsSyn) {
                return out;  // data before a handshake is dropped
            }
            accept(ip.header.src, tcp.header.src_port, tcp.header.seq, out);
            return out;
        }

        // Single-session design: traffic off the established 5-tuple is refused.
        if (ip.header.src != conn_.profile.dst_ip ||
            tcp.header.src_port != conn_.profile.dst_port) {
            return out;
        }
        if (tcp.header.offset_resv_flags != kTcpFlagsPshAck) {
            // The final handshake ACK still advances the peer bookkeeping.
            conn_.last_peer_seq = tcp.header.seq;
            conn_.last_peer_payload_len = static_cast<uint32_t>(tcp.payload.size());
            conn_.ack_local = conn_.last_peer_seq + conn_.last_peer_payload_len;
            return out;
        }

        try {
            if (auto inner = decapsulate(frame, conn_, frag_buffer_)) {
                process_inner(*inner, now, in.id, out);
            }
        } catch (const TunnelError&) {
        }
        return out;
    }

    Phase phase() const { return phase_; }
    const TunnelConnection& connection() const { return conn_; }
    const NeighborhoodListing& neighborhood() const { return neighborhood_; }
    HostStack& second_ip_stack() { return stack_; }
    const Config& config() const { return cfg_; }
    void set_enabled(bool enabled) { cfg_.enabled = enabled; }

  private:
    void accept(Ipv4Address peer_ip, uint16_t peer_port, uint32_t client_isn, Output& out) {
        uint32_t server_isn = rng_->next_isn(cfg_.isn_16bit);
        conn_ = {};
        conn_.profile = {cfg_.mac, cfg_.gateway_mac, cfg_.public_ip, peer_ip, 80, peer_port};
        conn_.seq_local = server_isn + 1;  // SYN-ACK consumes one
        conn_.last_peer_seq = client_isn;
        conn_.last_peer_payload_len = 1;
        conn_.ack_local = client_isn + 1;
        frag_buffer_ = {};
        phase_ = Phase::Relaying;

        EthernetFrame synack = make_control_packet(conn_.profile, server_isn, client_isn + 1,
                                                   kTcpFlagsSynAck, *rng_);
        out.to_internet.push_back({serialize_ethernet(synack), ids_->fresh()});
    }

    void process_inner(const Bytes& inner_bytes, uint64_t now, uint64_t inner_id, Output& out) {
        EthernetFrame inner;
        try {
            inner = parse_ethernet(inner_bytes);
        } catch (const CodecError&) {
            return;  // malformed inner frame: logged by the trace, dropped here
        }

        merge_announcement(inner, now);
        out.local_events.push_back({inner_bytes, inner_id});

        for (const auto& resp : stack_.handle_frame(inner)) {
            SimFrame reply{serialize_ethernet(resp), ids_->fresh()};
            out.local_events.push_back(reply);
            if (!should_forward_server_to_tunnel(resp, forwarding_)) continue;
            for (const auto& env : encapsulate(reply.bytes, conn_, *rng_)) {
                out.to_internet.push_back({serialize_ethernet(env), reply.id});
            }
        }
    }

    void merge_announcement(const EthernetFrame& inner, uint64_t now) {
        if (inner.ethertype != kEthertypeIpv4) return;
        try {
            Ipv4Packet ip = parse_ipv4(inner.payload);
            if (ip.header.protocol != kIpProtoUdp) return;
            BrowserAnnouncement a = parse_browser(ip.payload);
            neighborhood_.entries[a.host_name] = {a.shares, now};
        } catch (const CodecError&) {
        }
    }

    Config cfg_;
    DeterministicRng* rng_;
    IdSource* ids_;
    Phase phase_ = Phase::Listening;
    TunnelConnection conn_;
    FragmentBuffer frag_buffer_;
    HostStack stack_;
    ForwardingConfig forwarding_;
    NeighborhoodListing neighborhood_;
};

}  // namespace lantunnel
