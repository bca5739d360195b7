#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lantunnel/addr.hpp"
#include "lantunnel/wire/ethernet.hpp"
#include "lantunnel/wire/ipv4.hpp"
#include "lantunnel/wire/tcp.hpp"

namespace lantunnel {

// Connection-tracking record created by an outbound SYN. Inbound packets
// must match the full translated 5-tuple and a plausible SEQ to traverse.
struct NatEntry {
    Ipv4Address lan_ip;
    uint16_t lan_port = 0;
    Ipv4Address public_ip;
    uint16_t public_port = 0;
    Ipv4Address peer_ip;
    uint16_t peer_port = 0;
    MacAddress lan_mac;  // learned from the outbound SYN, used for inbound delivery

    enum class State { SynSeen, Established } state = State::SynSeen;
    uint32_t next_seq_out = 0;
    uint32_t next_seq_in = 0;
    bool seq_in_known = false;
};

struct FirewallVerdict {
    std::optional<Bytes> frame;  // translated frame when forwarded
    std::string drop_reason;     // set when dropped
};

// Stateful NAT gateway between the LAN and the internet. Outbound policy is
// port-based; inbound is default-deny against the NAT table. TCP checksums
// are never validated; IP checksums are.
class Firewall {
  public:
    struct Config {
        Ipv4Address public_ip;
        MacAddress lan_mac;     // gateway MAC on the LAN side
        MacAddress public_mac;  // gateway MAC on the internet side
        std::set<uint16_t> allowed_outbound_ports{80, 443};
        uint32_t seq_window = 65535;
    };

    explicit Firewall(Config cfg) : cfg_(std::move(cfg)) {}

    FirewallVerdict outbound(const EthernetFrame& frame) {
        Ipv4Packet ip;
        TcpSegment tcp;
        if (!parse_tunnel_layers(frame, ip, tcp)) return {{}, "unsupported"};
        if (!ip.checksum_valid) return {{}, "bad_ip_checksum"};

        NatEntry* entry = find_by_lan(ip.header.src, tcp.header.src_port, ip.header.dst,
                                      tcp.header.dst_port);
        if (!entry) {
            if (!tcp.header.is_syn()) return {{}, "no_state"};
            if (!cfg_.allowed_outbound_ports.contains(tcp.header.dst_port)) {
                return {{}, "policy"};
            }
            NatEntry e;
            e.lan_ip = ip.header.src;
            e.lan_port = tcp.header.src_port;
            e.public_ip = cfg_.public_ip;
            e.public_port = allocate_public_port(tcp.header.src_port);
            e.peer_ip = ip.header.dst;
            e.peer_port = tcp.header.dst_port;
            e.lan_mac = frame.src_mac;
            e.next_seq_out = tcp.header.seq + 1;  // SYN consumes one
            entries_.push_back(e);
            entry = &entries_.back();
        } else {
            uint32_t expected = entry->next_seq_out;
            if (!seq_plausible(tcp.header.seq, expected)) return {{}, "seq_mismatch"};
            entry->next_seq_out =
                tcp.header.seq + static_cast<uint32_t>(tcp.payload.size()) +
                (tcp.header.is_syn() ? 1 : 0);
        }

        // Source rewrite, then re-checksum.
        Ipv4Header out_ip = ip.header;
        out_ip.src = entry->public_ip;
        TcpHeader out_tcp = tcp.header;
        out_tcp.src_port = entry->public_port;

        EthernetFrame out = frame;
        out.src_mac = cfg_.public_mac;
        out.payload = serialize_ipv4(out_ip, serialize_tcp(out_tcp, tcp.payload));
        return {serialize_ethernet(out), {}};
    }

    FirewallVerdict inbound(const EthernetFrame& frame) {
        Ipv4Packet ip;
        TcpSegment tcp;
        if (!parse_tunnel_layers(frame, ip, tcp)) return {{}, "unsupported"};
        if (!ip.checksum_valid) return {{}, "bad_ip_checksum"};

        NatEntry* entry = find_by_public(ip.header.dst, tcp.header.dst_port, ip.header.src,
                                         tcp.header.src_port);
        if (!entry) return {{}, "unsolicited"};

        if (!entry->seq_in_known) {
            entry->next_seq_in = tcp.header.seq;
            entry->seq_in_known = true;
        }
        if (!seq_plausible(tcp.header.seq, entry->next_seq_in)) return {{}, "seq_mismatch"};
        entry->next_seq_in = tcp.header.seq + static_cast<uint32_t>(tcp.payload.size()) +
                             (tcp.header.is_syn() ? 1 : 0);
        if (entry->state == NatEntry::State::SynSeen && tcp.header.is_syn() &&
            tcp.header.is_ack()) {
            entry->state = NatEntry::State::Established;
        }

        Ipv4Header out_ip = ip.header;
        out_ip.dst = entry->lan_ip;
        TcpHeader out_tcp = tcp.header;
        out_tcp.dst_port = entry->lan_port;

        EthernetFrame out;
        out.src_mac = cfg_.lan_mac;
        out.dst_mac = entry->lan_mac;
        out.ethertype = kEthertypeIpv4;
        out.payload = serialize_ipv4(out_ip, serialize_tcp(out_tcp, tcp.payload));
        return {serialize_ethernet(out), {}};
    }

    const std::vector<NatEntry>& entries() const { return entries_; }
    const Config& config() const { return cfg_; }

  private:
    static bool parse_tunnel_layers(const EthernetFrame& frame, Ipv4Packet& ip,
                                    TcpSegment& tcp) {
        if (frame.ethertype != kEthertypeIpv4) return false;
        try {
            ip = parse_ipv4(frame.payload);
            if (ip.header.protocol != kIpProtoTcp) return false;
            tcp = parse_tcp(ip.payload);
        } catch (const CodecError&) {
            return false;
        }
        return true;
    }

    bool seq_plausible(uint32_t seq, uint32_t expected) const {
        uint32_t fwd = seq - expected;
        uint32_t back = expected - seq;
        return fwd <= cfg_.seq_window || back <= cfg_.seq_window;
    }

    // Port-preserving translation; sequential fallback on collision (which
    // would break a tunnel relying on the sniffed pre-NAT port).
    uint16_t allocate_public_port(uint16_t wanted) {
        auto taken = [&](uint16_t p) {
            for (const auto& e : entries_) {
                if (e.public_port == p) return true;
            }
            return false;
        };
        if (!taken(wanted)) return wanted;
        uint16_t p = wanted;
        do {
            ++p;
            if (p == 0) p = 1024;
        } while (taken(p));
        return p;
    }

    NatEntry* find_by_lan(Ipv4Address src, uint16_t sport, Ipv4Address dst, uint16_t dport) {
        for (auto& e : entries_) {
            if (e.lan_ip == src && e.lan_port == sport && e.peer_ip == dst &&
                e.peer_port == dport) {
                return &e;
            }
        }
        return nullptr;
    }

    NatEntry* find_by_public(Ipv4Address dst, uint16_t dport, Ipv4Address src, uint16_t sport) {
        for (auto& e : entries_) {
            if (e.public_ip == dst && e.public_port == dport && e.peer_ip == src &&
                e.peer_port == sport) {
                return &e;
            }
        }
        return nullptr;
    }

    Config cfg_;
    std::vector<NatEntry> entries_;
};

}  // namespace lantunnel
