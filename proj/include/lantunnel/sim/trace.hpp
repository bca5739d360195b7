#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lantunnel/bytes.hpp"
#include "lantunnel/wire/arp.hpp"
#include "lantunnel/wire/browser.hpp"
#include "lantunnel/wire/ethernet.hpp"
#include "lantunnel/wire/icmp.hpp"
#include "lantunnel/wire/ipv4.hpp"
#include "lantunnel/wire/tcp.hpp"

namespace lantunnel {

enum class Location {
    LanSegment,
    FirewallOut,
    FirewallIn,
    Internet,
    ServerIf,
};

inline const char* location_name(Location loc) {
    switch (loc) {
        case Location::LanSegment: return "lan_segment";
        case Location::FirewallOut: return "firewall_out";
        case Location::FirewallIn: return "firewall_in";
        case Location::Internet: return "internet";
        case Location::ServerIf: return "server_if";
    }
    return "?";
}

// A frame moving through the simulation. `id` identifies the logical inner
// frame: tunnel envelopes inherit the id of the frame they carry, so the
// trace auditor can count tunnel crossings per original frame.
struct SimFrame {
    Bytes bytes;
    uint64_t id = 0;

    bool operator==(const SimFrame&) const = default;
};

struct SimEvent {
    uint64_t time = 0;
    Location location = Location::LanSegment;
    Bytes frame;
    uint64_t frame_id = 0;
    bool delivered = true;
    std::string drop_reason;
    std::string summary;
};

// One-line description of a frame for trace output.
inline std::string summarize_frame(BytesView bytes) {
    std::ostringstream os;
    EthernetFrame f;
    try {
        f = parse_ethernet(bytes);
    } catch (const CodecError&) {
        return "malformed(" + std::to_string(bytes.size()) + "B)";
    }
    try {
        if (f.ethertype == kEthertypeArp) {
            ArpPacket a = parse_arp(f.payload);
            if (a.op == ArpOp::Request) {
                os << "ARP request who-has " << a.target_ip.to_string() << " tell "
                   << a.sender_ip.to_string();
            } else {
                os << "ARP reply " << a.sender_ip.to_string() << " is-at "
                   << a.sender_mac.to_string();
            }
        } else if (f.ethertype == kEthertypeIpv4) {
            Ipv4Packet ip = parse_ipv4(f.payload);
            if (ip.header.protocol == kIpProtoTcp) {
                TcpSegment t = parse_tcp(ip.payload);
                os << "TCP " << ip.header.src.to_string() << ":" << t.header.src_port << "->"
                   << ip.header.dst.to_string() << ":" << t.header.dst_port << " flags=0x"
                   << std::hex << t.header.offset_resv_flags << std::dec
                   << " seq=" << t.header.seq << " ack=" << t.header.ack
                   << " win=" << t.header.window << " len=" << t.payload.size();
            } else if (ip.header.protocol == kIpProtoIcmp) {
                IcmpEcho e = parse_icmp(ip.payload);
                os << "ICMP echo " << (e.kind == IcmpKind::EchoRequest ? "request" : "reply")
                   << " " << ip.header.src.to_string() << "->" << ip.header.dst.to_string()
                   << " id=" << e.ident << " seq=" << e.seqno << " len=" << e.payload.size();
            } else if (ip.header.protocol == kIpProtoUdp) {
                BrowserAnnouncement a = parse_browser(ip.payload);
                os << "BROWSER announce " << a.host_name << " (" << a.shares.size()
                   << " shares)";
            } else {
                os << "IPv4 proto=" << int(ip.header.protocol) << " "
                   << ip.header.src.to_string() << "->" << ip.header.dst.to_string();
            }
        } else {
            os << "ethertype=0x" << std::hex << f.ethertype;
        }
    } catch (const CodecError& e) {
        os << "undecodable: " << e.what();
    }
    return os.str();
}

class Trace {
  public:
    void record(uint64_t time, Location loc, const SimFrame& frame, bool delivered,
                std::string drop_reason = {}) {
        SimEvent ev;
        ev.time = time;
        ev.location = loc;
        ev.frame = frame.bytes;
        ev.frame_id = frame.id;
        ev.delivered = delivered;
        ev.drop_reason = std::move(drop_reason);
        ev.summary = summarize_frame(frame.bytes);
        events_.push_back(std::move(ev));
    }

    const std::vector<SimEvent>& events() const { return events_; }

    static std::string format_line(const SimEvent& ev) {
        std::ostringstream os;
        EthernetFrame f;
        std::string macs = "?->?";
        try {
            f = parse_ethernet(ev.frame);
            macs = f.src_mac.to_string() + "->" + f.dst_mac.to_string();
        } catch (const CodecError&) {
        }
        os << ev.time << " " << location_name(ev.location) << " "
           << (ev.delivered ? "delivered" : "dropped(" + ev.drop_reason + ")") << " " << macs
           << " " << ev.summary;
        return os.str();
    }

    std::string to_text() const {
        std::string out;
        for (const auto& ev : events_) {
            out += format_line(ev);
            out += '\n';
        }
        return out;
    }

    void write_file(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open trace file: " + path);
        f << to_text();
    }

  private:
    std::vector<SimEvent> events_;
};

}  // namespace lantunnel
