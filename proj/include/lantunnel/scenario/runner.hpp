#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lantunnel/scenario/audit.hpp"
#include "lantunnel/scenario/config.hpp"
#include "lantunnel/sim/network.hpp"

namespace lantunnel {

struct ScenarioReport {
    std::string name;
    bool pass = false;
    std::map<std::string, int64_t> metrics;
    std::vector<std::string> notes;  // failure explanations
    std::shared_ptr<Network> network;  // for trace/capture export

    const Trace& trace() const { return network->trace(); }
};

namespace scenarios {

// The canonical walkthrough: a LAN host pings the phantom second IP through
// the tunnel. Announcements are disabled so the trace shows only the
// ARP/ICMP chain.
inline ScenarioReport run_ping(const ScenarioConfig& cfg) {
    ScenarioReport rep;
    rep.name = "ping";
    NetworkConfig nc = cfg.net;
    nc.announce_period = 0;
    auto net = std::make_shared<Network>(nc);
    rep.network = net;

    net->client_connect_at(1);
    net->start_ping_at(20, cfg.ping_source, nc.second_ip, cfg.ping_count, cfg.ping_payload);
    net->run();

    const Trace& trace = net->trace();
    size_t replies = count_lan_echo_replies(trace, nc.second_ip, cfg.ping_source);
    size_t drops = count_drops(trace);
    std::string why;
    bool chain_ok = audit_ping_chain(trace, cfg.ping_count, &why);
    bool loops_ok = audit_loop_freedom(trace, &why);

    rep.metrics["echo_replies"] = static_cast<int64_t>(replies);
    rep.metrics["drops"] = static_cast<int64_t>(drops);
    rep.metrics["tunnel_crossings"] =
        static_cast<int64_t>(collect_tunnel_crossings(trace).size());

    rep.pass = replies == static_cast<size_t>(cfg.ping_count) && drops == 0 && chain_ok &&
               loops_ok;
    if (replies != static_cast<size_t>(cfg.ping_count)) {
        rep.notes.push_back("expected " + std::to_string(cfg.ping_count) + " echo replies, saw " +
                            std::to_string(replies));
    }
    if (drops != 0) rep.notes.push_back("trace contains drops");
    if (!chain_ok || !loops_ok) rep.notes.push_back(why);
    return rep;
}

// Browser announcements from every host reach the attacker within one
// announce period.
inline ScenarioReport run_browse(const ScenarioConfig& cfg) {
    ScenarioReport rep;
    rep.name = "browse";
    auto net = std::make_shared<Network>(cfg.net);
    rep.network = net;

    uint64_t period = cfg.net.announce_period ? cfg.net.announce_period : 100;
    net->client_connect_at(1);
    net->start_announcements(10, 10 + 2 * period);
    net->run();

    auto seen = collect_announcements_at_server(net->trace());
    bool complete = true;
    for (const auto& h : cfg.net.hosts) {
        auto it = seen.find(h.name);
        if (it == seen.end() || it->second != h.shares) {
            complete = false;
            rep.notes.push_back("missing or wrong announcement for " + h.name);
        }
    }
    if (seen.size() != cfg.net.hosts.size()) {
        complete = false;
        rep.notes.push_back("unexpected extra announcements");
    }
    std::string why;
    bool loops_ok = audit_loop_freedom(net->trace(), &why);
    if (!loops_ok) rep.notes.push_back(why);

    rep.metrics["hosts_discovered"] = static_cast<int64_t>(seen.size());
    rep.metrics["neighborhood_size"] =
        static_cast<int64_t>(net->server().neighborhood().entries.size());
    rep.pass = complete && loops_ok;
    return rep;
}

// Oversized pings force the two-fragment envelope path in both directions.
inline ScenarioReport run_frag(const ScenarioConfig& cfg) {
    ScenarioReport rep;
    rep.name = "frag";
    NetworkConfig nc = cfg.net;
    nc.announce_period = 0;
    auto net = std::make_shared<Network>(nc);
    rep.network = net;

    // 1472-byte payload fills the inner frame to 1514 bytes.
    net->client_connect_at(1);
    net->start_ping_at(20, cfg.ping_source, nc.second_ip, 2, 1472);
    net->run();

    const Trace& trace = net->trace();
    size_t replies = count_lan_echo_replies(trace, nc.second_ip, cfg.ping_source);
    size_t drops = count_drops(trace);
    std::string why;
    bool loops_ok = audit_loop_freedom(trace, &why);

    // Every ICMP-bearing crossing must have been reassembled from two
    // fragments; count window=1 envelopes at the firewall to confirm.
    size_t fragment_firsts = 0;
    for (const auto& ev : trace.events()) {
        if (!ev.delivered) continue;
        if (ev.location != Location::FirewallOut && ev.location != Location::FirewallIn)
            continue;
        try {
            Ipv4Packet ip = parse_ipv4(parse_ethernet(ev.frame).payload);
            if (ip.header.protocol != kIpProtoTcp) continue;
            TcpSegment tcp = parse_tcp(ip.payload);
            if (tcp.header.offset_resv_flags == kTcpFlagsPshAck && tcp.header.window == 1)
                ++fragment_firsts;
        } catch (const CodecError&) {
        }
    }

    rep.metrics["echo_replies"] = static_cast<int64_t>(replies);
    rep.metrics["fragment_firsts"] = static_cast<int64_t>(fragment_firsts);
    rep.metrics["drops"] = static_cast<int64_t>(drops);
    // 2 echo requests + 2 echo replies fragmented (ARP stays single).
    rep.pass = replies == 2 && drops == 0 && fragment_firsts == 4 && loops_ok;
    if (!rep.pass) {
        rep.notes.push_back("replies=" + std::to_string(replies) + " drops=" +
                            std::to_string(drops) + " fragment_firsts=" +
                            std::to_string(fragment_firsts));
        if (!loops_ok) rep.notes.push_back(why);
    }
    return rep;
}

// Default-deny and SEQ tracking: forged inbound traffic and a SEQ-corrupted
// tunnel packet must both be dropped with their reasons.
inline ScenarioReport run_firewall_negative(const ScenarioConfig& cfg) {
    ScenarioReport rep;
    rep.name = "firewall-negative";
    NetworkConfig nc = cfg.net;
    nc.announce_period = 0;
    auto net = std::make_shared<Network>(nc);
    rep.network = net;

    net->client_connect_at(1);
    // Ping traffic keeps the connection numbering live around the forgeries.
    net->start_ping_at(20, cfg.ping_source, nc.second_ip, 2, 32);

    // Forged packet from an unrelated internet host toward the LAN public IP.
    net->schedule(60, [net_p = net.get(), &cfg] {
        TcpHeader tcp;
        tcp.src_port = 4444;
        tcp.dst_port = 4444;
        tcp.seq = 12345;
        Bytes seg = serialize_tcp(tcp, Bytes{0xde, 0xad});
        Ipv4Header ip;
        ip.total_length = static_cast<uint16_t>(kIpv4HeaderLen + seg.size());
        ip.protocol = kIpProtoTcp;
        ip.src = Ipv4Address::parse("203.0.113.99");
        ip.dst = cfg.net.public_ip;
        EthernetFrame f{cfg.net.gateway_public_mac, MacAddress::parse("02:00:00:00:99:99"),
                        kEthertypeIpv4, serialize_ipv4(ip, seg)};
        net_p->inject_internet_at(net_p->now() + 1, serialize_ethernet(f));
    });

    // Tunnel packet on the right 5-tuple but with a wildly wrong SEQ.
    net->schedule(70, [net_p = net.get()] {
        TunnelConnection forged = net_p->server().connection();
        forged.seq_local += 0x01000000;
        DeterministicRng scratch(0);
        EthernetFrame env = make_envelope(Bytes(8, 0x55), forged, scratch, false);
        net_p->inject_internet_at(net_p->now() + 1, serialize_ethernet(env));
    });

    net->run();

    const Trace& trace = net->trace();
    size_t unsolicited = count_drops_with_reason(trace, "unsolicited");
    size_t seq_mismatch = count_drops_with_reason(trace, "seq_mismatch");
    size_t replies = count_lan_echo_replies(trace, nc.second_ip, cfg.ping_source);
    std::string why;
    bool nat_ok = audit_nat_soundness(trace, &why);

    rep.metrics["unsolicited_drops"] = static_cast<int64_t>(unsolicited);
    rep.metrics["seq_mismatch_drops"] = static_cast<int64_t>(seq_mismatch);
    rep.metrics["echo_replies"] = static_cast<int64_t>(replies);
    rep.pass = unsolicited == 1 && seq_mismatch == 1 && replies == 2 && nat_ok;
    if (!rep.pass) {
        rep.notes.push_back("unsolicited=" + std::to_string(unsolicited) + " seq_mismatch=" +
                            std::to_string(seq_mismatch) + " replies=" +
                            std::to_string(replies));
        if (!nat_ok) rep.notes.push_back(why);
    }
    return rep;
}

// Without the tunnel, the phantom host does not exist: the ping fails at ARP
// and nothing from the internet ever reaches the LAN.
inline ScenarioReport run_no_tunnel_baseline(const ScenarioConfig& cfg) {
    ScenarioReport rep;
    rep.name = "no-tunnel-baseline";
    NetworkConfig nc = cfg.net;
    nc.announce_period = 0;
    nc.tunnel_enabled = false;
    auto net = std::make_shared<Network>(nc);
    rep.network = net;

    net->start_ping_at(20, cfg.ping_source, nc.second_ip, cfg.ping_count, cfg.ping_payload);
    net->run();

    const Trace& trace = net->trace();
    size_t replies = count_lan_echo_replies(trace, nc.second_ip, cfg.ping_source);
    size_t inbound = count_inbound_deliveries(trace);
    const PingTask& task = net->ping_task(cfg.ping_source);

    rep.metrics["echo_replies"] = static_cast<int64_t>(replies);
    rep.metrics["inbound_deliveries"] = static_cast<int64_t>(inbound);
    rep.metrics["ping_failed"] = task.failed ? 1 : 0;
    rep.pass = replies == 0 && inbound == 0 && task.failed;
    if (!rep.pass) {
        rep.notes.push_back("replies=" + std::to_string(replies) + " inbound=" +
                            std::to_string(inbound) + " failed=" +
                            std::to_string(task.failed));
    }
    return rep;
}

}  // namespace scenarios

inline const std::map<std::string, std::function<ScenarioReport(const ScenarioConfig&)>>&
scenario_registry() {
    static const std::map<std::string, std::function<ScenarioReport(const ScenarioConfig&)>>
        registry = {
            {"ping", scenarios::run_ping},
            {"browse", scenarios::run_browse},
            {"frag", scenarios::run_frag},
            {"firewall-negative", scenarios::run_firewall_negative},
            {"no-tunnel-baseline", scenarios::run_no_tunnel_baseline},
        };
    return registry;
}

struct UnknownScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline ScenarioReport run_scenario(const std::string& name, const ScenarioConfig& cfg) {
    auto violations = validate_config(cfg);
    if (!violations.empty()) {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += "\n  " + v;
        throw ConfigError(msg);
    }
    auto it = scenario_registry().find(name);
    if (it == scenario_registry().end()) {
        throw UnknownScenarioError("unknown scenario: " + name);
    }
    return it->second(cfg);
}

}  // namespace lantunnel
