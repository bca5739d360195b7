// End-to-end acceptance checks. Each test prints one pass/fail line so the
// binary's output doubles as a checklist.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "lantunnel/pcap.hpp"
#include "lantunnel/scenario/runner.hpp"

using namespace lantunnel;

namespace {

void report(int idx, const std::string& what, bool ok) {
    std::cout << "criterion " << idx << " (" << what << "): " << (ok ? "pass" : "fail")
              << std::endl;
}

struct Gen {
    std::mt19937 rng{20260823};

    uint8_t byte() { return static_cast<uint8_t>(rng()); }
    uint16_t u16() { return static_cast<uint16_t>(rng()); }
    uint32_t u32() { return static_cast<uint32_t>(rng()); }

    MacAddress mac() {
        MacAddress m;
        for (auto& o : m.octets) o = byte();
        return m;
    }
    Ipv4Address ip() {
        Ipv4Address a;
        for (auto& o : a.octets) o = byte();
        return a;
    }
    Bytes bytes(size_t n) {
        Bytes b(n);
        for (auto& x : b) x = byte();
        return b;
    }
    std::string str(size_t max_len) {
        std::string s;
        size_t n = rng() % (max_len + 1);
        for (size_t i = 0; i < n; ++i) s.push_back('a' + rng() % 26);
        return s;
    }
};

Bytes read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    return Bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("acceptance 1: ping relay chain") {
    ScenarioReport rep = run_scenario("ping", ScenarioConfig::defaults());
    std::string why;
    bool ok = rep.pass && rep.metrics.at("echo_replies") == 4 &&
              rep.metrics.at("drops") == 0 &&
              rep.metrics.at("tunnel_crossings") == 10 &&  // arp pair + 4 echo pairs
              audit_ping_chain(rep.trace(), 4, &why);
    report(1, "lan ping reaches the phantom address through the tunnel, no drops", ok);
    INFO(why);
    REQUIRE(ok);
}

TEST_CASE("acceptance 2: server-side capture interleaving") {
    ScenarioReport rep = run_scenario("ping", ScenarioConfig::defaults());
    std::string why;
    bool ok = rep.pass && audit_server_capture_pattern(rep.trace(), &why);
    report(2, "server capture alternates envelopes with the frames they carry", ok);
    INFO(why);
    REQUIRE(ok);
}

TEST_CASE("acceptance 3: codec round-trips") {
    Gen g;
    bool ok = true;
    for (int i = 0; ok && i < 10000; ++i) {
        EthernetFrame f{g.mac(), g.mac(), g.u16(), g.bytes(g.rng() % 1501)};
        ok = parse_ethernet(serialize_ethernet(f)) == f;
    }
    for (int i = 0; ok && i < 10000; ++i) {
        Ipv4Header h;
        h.tos = g.byte();
        Bytes payload = g.bytes(g.rng() % 600);
        h.total_length = static_cast<uint16_t>(20 + payload.size());
        h.ident = g.u16();
        h.flags_offset = 0x4000;
        h.ttl = g.byte();
        h.protocol = g.byte();
        h.src = g.ip();
        h.dst = g.ip();
        Ipv4Packet back = parse_ipv4(serialize_ipv4(h, payload));
        h.checksum = back.header.checksum;
        ok = back.checksum_valid && back.header == h && back.payload == payload;
    }
    for (int i = 0; ok && i < 10000; ++i) {
        TcpHeader h{g.u16(), g.u16(), g.u32(), g.u32(), g.u16(), g.u16(), g.u16(), g.u16()};
        Bytes payload = g.bytes(g.rng() % 300);
        TcpSegment back = parse_tcp(serialize_tcp(h, payload));
        ok = back.header == h && back.payload == payload;
    }
    for (int i = 0; ok && i < 10000; ++i) {
        ArpPacket p = make_arp_request(g.mac(), g.ip(), g.ip());
        if (i % 2) p = make_arp_reply(p, g.mac());
        ok = parse_arp(serialize_arp(p)) == p;
    }
    for (int i = 0; ok && i < 10000; ++i) {
        IcmpEcho e{(i % 2) ? IcmpKind::EchoRequest : IcmpKind::EchoReply, g.u16(), g.u16(),
                   g.bytes(g.rng() % 200)};
        ok = parse_icmp(serialize_icmp(e)) == e;
    }
    for (int i = 0; ok && i < 10000; ++i) {
        BrowserAnnouncement a;
        a.host_name = g.str(15);
        size_t n = g.rng() % 4;
        for (size_t j = 0; j < n; ++j) a.shares.push_back(g.str(20));
        ok = parse_browser(serialize_browser(a)) == a;
    }
    report(3, "every codec round-trips 10000 random values", ok);
    REQUIRE(ok);
}

TEST_CASE("acceptance 4: checksum against an independent reference") {
    Gen g;
    bool ok = true;
    for (int i = 0; ok && i < 1000; ++i) {
        Bytes header = g.bytes(20);
        header[10] = header[11] = 0;

        // Per-byte reference, independent of the word-based implementation.
        uint64_t acc = 0;
        for (size_t k = 0; k < header.size(); ++k) {
            acc += static_cast<uint64_t>(header[k]) << ((k % 2 == 0) ? 8 : 0);
        }
        while (acc >> 16) acc = (acc & 0xffff) + (acc >> 16);
        uint16_t expected = static_cast<uint16_t>(~acc & 0xffff);

        uint16_t sum = compute_ip_checksum(header);
        ok = sum == expected;
        if (ok) {
            // With the checksum in place, the header sums to all-ones.
            header[10] = static_cast<uint8_t>(sum >> 8);
            header[11] = static_cast<uint8_t>(sum & 0xff);
            ok = ones_complement_sum(header) == 0xffff;
        }
    }
    report(4, "ip checksum matches a per-byte reference and self-sums to all-ones", ok);
    REQUIRE(ok);
}

TEST_CASE("acceptance 5: fragmentation boundaries") {
    Gen g;
    bool ok = true;
    for (size_t len : {size_t{1}, size_t{1459}, size_t{1460}, size_t{1461}, size_t{1500},
                       size_t{1514}}) {
        Bytes inner = g.bytes(len);
        TunnelConnection sender;
        sender.profile = {MacAddress::parse("02:00:00:00:01:6C"),
                          MacAddress::parse("02:00:00:00:01:01"),
                          Ipv4Address::parse("192.168.0.108"),
                          Ipv4Address::parse("195.212.102.201"), 49321, 80};
        DeterministicRng rng(len);
        auto frames = encapsulate(inner, sender, rng);

        size_t expected_count = len <= 1460 ? 1 : 2;
        ok = ok && frames.size() == expected_count;
        for (const auto& f : frames) {
            ok = ok && serialize_ethernet(f).size() <= kEthernetMaxFrame;
        }

        TunnelConnection receiver;
        receiver.profile = {sender.profile.src_mac, sender.profile.dst_mac,
                            sender.profile.dst_ip, sender.profile.src_ip,
                            sender.profile.dst_port, sender.profile.src_port};
        FragmentBuffer buf;
        std::optional<Bytes> got;
        for (const auto& f : frames) got = decapsulate(f, receiver, buf);
        ok = ok && got.has_value() && *got == inner && !buf.pending.has_value();
        if (!ok) break;
    }
    report(5, "inner lengths around the 1460 threshold use one or two envelopes", ok);
    REQUIRE(ok);
}

TEST_CASE("acceptance 6: loop freedom under sustained broadcasts") {
    NetworkConfig nc = ScenarioConfig::defaults().net;
    Network net(nc);
    net.client_connect_at(1);
    net.start_announcements(10, 10 + 10 * nc.announce_period);
    net.run();

    std::string why;
    bool ok = audit_loop_freedom(net.trace(), &why) && count_drops(net.trace()) == 0;
    report(6, "ten announce periods of broadcasts, no frame loops the tunnel twice", ok);
    INFO(why);
    REQUIRE(ok);
}

TEST_CASE("acceptance 7: firewall default-deny and no-tunnel baseline") {
    ScenarioReport neg = run_scenario("firewall-negative", ScenarioConfig::defaults());
    ScenarioReport base = run_scenario("no-tunnel-baseline", ScenarioConfig::defaults());
    bool ok = neg.pass && neg.metrics.at("unsolicited_drops") == 1 &&
              neg.metrics.at("seq_mismatch_drops") == 1 && base.pass &&
              base.metrics.at("echo_replies") == 0 &&
              base.metrics.at("inbound_deliveries") == 0;
    report(7, "forged traffic is dropped with reasons; without the tunnel nothing gets in",
           ok);
    REQUIRE(ok);
}

TEST_CASE("acceptance 8: neighborhood complete after one announce period") {
    NetworkConfig nc = ScenarioConfig::defaults().net;
    Network net(nc);
    net.client_connect_at(1);
    net.start_announcements(10, 10 + nc.announce_period);
    net.run();

    const NeighborhoodListing& hood = net.server().neighborhood();
    bool ok = hood.entries.size() == nc.hosts.size();
    for (const auto& h : nc.hosts) {
        auto it = hood.entries.find(h.name);
        ok = ok && it != hood.entries.end() && it->second.shares == h.shares;
    }
    report(8, "every host's name and shares reach the server within one period", ok);
    REQUIRE(ok);
}

TEST_CASE("acceptance 9: bytewise determinism") {
    auto run_once = [](const std::string& trace_path, const std::string& pcap_path) {
        ScenarioReport rep = run_scenario("ping", ScenarioConfig::defaults());
        REQUIRE(rep.pass);
        rep.trace().write_file(trace_path);
        export_capture(rep.trace(), Location::FirewallOut, pcap_path);
    };
    run_once("acceptance_run_a.trace", "acceptance_run_a.pcap");
    run_once("acceptance_run_b.trace", "acceptance_run_b.pcap");

    bool ok = read_file("acceptance_run_a.trace") == read_file("acceptance_run_b.trace") &&
              read_file("acceptance_run_a.pcap") == read_file("acceptance_run_b.pcap");
    for (const char* p : {"acceptance_run_a.trace", "acceptance_run_a.pcap",
                          "acceptance_run_b.trace", "acceptance_run_b.pcap"}) {
        std::remove(p);
    }
    report(9, "same seed gives byte-identical trace and capture files", ok);
    REQUIRE(ok);
}
