#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lantunnel/addr.hpp"
#include "lantunnel/wire/arp.hpp"
#include "lantunnel/wire/browser.hpp"
#include "lantunnel/wire/ethernet.hpp"
#include "lantunnel/wire/icmp.hpp"
#include "lantunnel/wire/ipv4.hpp"

namespace lantunnel {

// A LAN host's mini protocol stack: answers ARP for its own IP, mirrors
// ICMP echoes, absorbs browser announcements, and periodically announces
// its own name and shares.
class HostStack {
  public:
    MacAddress mac;
    Ipv4Address ip;
    Ipv4Prefix prefix;
    std::string host_name;
    std::vector<std::string> shares;
    uint64_t announce_period = 0;  // 0 disables announcements

    std::map<Ipv4Address, MacAddress> arp_cache;
    std::map<std::string, std::vector<std::string>> browse_list;

    // Handles one delivered frame; returns any response frames.
    std::vector<EthernetFrame> handle_frame(const EthernetFrame& frame) {
        std::vector<EthernetFrame> out;
        try {
            if (frame.ethertype == kEthertypeArp) {
                ArpPacket arp = parse_arp(frame.payload);
                if (arp.op == ArpOp::Request && arp.target_ip == ip) {
                    arp_cache[arp.sender_ip] = arp.sender_mac;
                    ArpPacket reply = make_arp_reply(arp, mac);
                    out.push_back({arp.sender_mac, mac, kEthertypeArp, serialize_arp(reply)});
                } else if (arp.op == ArpOp::Reply && arp.target_mac == mac) {
                    arp_cache[arp.sender_ip] = arp.sender_mac;
                }
            } else if (frame.ethertype == kEthertypeIpv4) {
                Ipv4Packet pkt = parse_ipv4(frame.payload);
                if (pkt.header.protocol == kIpProtoIcmp && pkt.header.dst == ip) {
                    IcmpEcho echo = parse_icmp(pkt.payload);
                    if (echo.kind == IcmpKind::EchoRequest) {
                        out.push_back(build_ipv4_frame(frame.src_mac, pkt.header.src,
                                                       kIpProtoIcmp,
                                                       serialize_icmp(make_echo_reply(echo))));
                    }
                } else if (pkt.header.protocol == kIpProtoUdp && frame.dst_mac.is_broadcast()) {
                    BrowserAnnouncement a = parse_browser(pkt.payload);
                    if (a.host_name != host_name) browse_list[a.host_name] = a.shares;
                }
            }
        } catch (const CodecError&) {
            // malformed foreign traffic is ignored
        }
        return out;
    }

    EthernetFrame make_announcement() {
        BrowserAnnouncement a{host_name, shares};
        Ipv4Header h = base_header(prefix.broadcast_address(), kIpProtoUdp);
        Bytes body = serialize_browser(a);
        h.total_length = static_cast<uint16_t>(kIpv4HeaderLen + body.size());
        return {MacAddress::broadcast(), mac, kEthertypeIpv4, serialize_ipv4(h, body)};
    }

    EthernetFrame make_arp_request_frame(Ipv4Address target) {
        return {MacAddress::broadcast(), mac, kEthertypeArp,
                serialize_arp(make_arp_request(mac, ip, target))};
    }

    std::optional<EthernetFrame> make_echo_request(Ipv4Address target, uint16_t ident,
                                                   uint16_t seqno, size_t payload_size) {
        auto it = arp_cache.find(target);
        if (it == arp_cache.end()) return std::nullopt;
        IcmpEcho echo{IcmpKind::EchoRequest, ident, seqno, Bytes(payload_size, 0xab)};
        return build_ipv4_frame(it->second, target, kIpProtoIcmp, serialize_icmp(echo));
    }

  private:
    Ipv4Header base_header(Ipv4Address dst, uint8_t protocol) {
        Ipv4Header h;
        h.ident = ip_ident_++;  // per-host counter, independent of the tunnel RNG
        h.flags_offset = 0x4000;
        h.ttl = 0x80;
        h.protocol = protocol;
        h.src = ip;
        h.dst = dst;
        return h;
    }

    EthernetFrame build_ipv4_frame(MacAddress dst_mac, Ipv4Address dst, uint8_t protocol,
                                   Bytes payload) {
        Ipv4Header h = base_header(dst, protocol);
        h.total_length = static_cast<uint16_t>(kIpv4HeaderLen + payload.size());
        return {dst_mac, mac, kEthertypeIpv4, serialize_ipv4(h, payload)};
    }

    uint16_t ip_ident_ = 1;
};

}  // namespace lantunnel
