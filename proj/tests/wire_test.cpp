#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lantunnel/checksum.hpp"
#include "lantunnel/wire/arp.hpp"
#include "lantunnel/wire/browser.hpp"
#include "lantunnel/wire/ethernet.hpp"
#include "lantunnel/wire/icmp.hpp"
#include "lantunnel/wire/ipv4.hpp"
#include "lantunnel/wire/tcp.hpp"

using namespace lantunnel;

namespace {

// Independent one's-complement reference: per-byte accumulation into a wide
// integer, folded once at the end. Kept deliberately different from the
// word-at-a-time implementation it checks.
uint16_t reference_ip_checksum(const Bytes& header) {
    REQUIRE(header.size() == 20);
    uint64_t acc = 0;
    for (size_t i = 0; i < header.size(); ++i) {
        acc += static_cast<uint64_t>(header[i]) << ((i % 2 == 0) ? 8 : 0);
    }
    while (acc >> 16) acc = (acc & 0xffff) + (acc >> 16);
    return static_cast<uint16_t>(~acc & 0xffff);
}

struct Gen {
    std::mt19937 rng{12345};

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

}  // namespace

TEST_CASE("ethernet serialization layout") {
    EthernetFrame f;
    f.dst_mac = MacAddress::broadcast();
    f.src_mac = MacAddress{{0, 0, 0, 0, 0, 1}};
    f.ethertype = kEthertypeArp;
    f.payload = Bytes(28, 0);

    Bytes wire = serialize_ethernet(f);
    REQUIRE(wire.size() == 42);
    Bytes head(wire.begin(), wire.begin() + 14);
    REQUIRE(head == Bytes{0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0, 0, 0, 0, 0, 1, 0x08, 0x06});
}

TEST_CASE("ethernet size limits") {
    EthernetFrame f;
    f.payload = Bytes(1500, 0);
    REQUIRE(serialize_ethernet(f).size() == 1514);
    f.payload.push_back(0);
    REQUIRE_THROWS_AS(serialize_ethernet(f), SizeError);
    REQUIRE_THROWS_AS(parse_ethernet(Bytes(13, 0)), TruncationError);
}

TEST_CASE("ethernet round-trip property") {
    Gen g;
    for (int i = 0; i < 200; ++i) {
        EthernetFrame f{g.mac(), g.mac(), g.u16(), g.bytes(g.rng() % 1501)};
        REQUIRE(parse_ethernet(serialize_ethernet(f)) == f);
    }
}

TEST_CASE("ip checksum basics") {
    REQUIRE(compute_ip_checksum(Bytes(20, 0)) == 0xffff);
    REQUIRE_THROWS_AS(compute_ip_checksum(Bytes(19, 0)), SizeError);

    // Classic worked example, frozen from the reference implementation above.
    Bytes header = {0x45, 0x00, 0x00, 0x3C, 0x1C, 0x46, 0x40, 0x00, 0x40, 0x06,
                    0x00, 0x00, 0xAC, 0x10, 0x0A, 0x63, 0xAC, 0x10, 0x0A, 0x0C};
    REQUIRE(reference_ip_checksum(header) == 0xB1E6);
    REQUIRE(compute_ip_checksum(header) == 0xB1E6);
}

TEST_CASE("ip checksum agrees with reference on random headers") {
    Gen g;
    for (int i = 0; i < 1000; ++i) {
        Bytes header = g.bytes(20);
        header[10] = header[11] = 0;
        REQUIRE(compute_ip_checksum(header) == reference_ip_checksum(header));
    }
}

TEST_CASE("ipv4 serialization and checksum self-sum") {
    Gen g;
    for (int i = 0; i < 200; ++i) {
        Bytes payload = g.bytes(g.rng() % 200);
        Ipv4Header h;
        h.tos = g.byte();
        h.total_length = static_cast<uint16_t>(20 + payload.size());
        h.ident = g.u16();
        h.flags_offset = 0x4000;
        h.ttl = g.byte();
        h.protocol = g.byte();
        h.src = g.ip();
        h.dst = g.ip();

        Bytes wire = serialize_ipv4(h, payload);
        // Including the stored checksum, all ten words sum to 0xFFFF.
        REQUIRE(ones_complement_sum(BytesView(wire).subspan(0, 20)) == 0xffff);

        Ipv4Packet back = parse_ipv4(wire);
        REQUIRE(back.checksum_valid);
        h.checksum = back.header.checksum;
        REQUIRE(back.header == h);
        REQUIRE(back.payload == payload);
    }
}

TEST_CASE("ipv4 total_length and corruption handling") {
    // A 42-byte inner frame behind a 20-byte TCP header: total_length 82.
    Ipv4Header h;
    h.total_length = 20 + 20 + 42;
    h.protocol = kIpProtoTcp;
    Bytes wire = serialize_ipv4(h, Bytes(20 + 42, 7));
    REQUIRE(get_u16(wire, 2) == 82);

    wire[15] ^= 0xff;  // corrupt a source-address byte
    Ipv4Packet p = parse_ipv4(wire);
    REQUIRE_FALSE(p.checksum_valid);

    REQUIRE_THROWS_AS(parse_ipv4(Bytes(19, 0)), TruncationError);
    h.total_length = 100;
    REQUIRE_THROWS_AS(serialize_ipv4(h, Bytes(42, 0)), SizeError);
}

TEST_CASE("tcp tunnel header constants") {
    TcpHeader h;
    h.src_port = 49321;
    h.dst_port = 80;
    h.seq = 1000;
    h.ack = 2000;
    Bytes wire = serialize_tcp(h, Bytes{1, 2, 3});
    REQUIRE(wire[12] == 0x50);
    REQUIRE(wire[13] == 0x18);
    REQUIRE(get_u16(wire, 16) == 0x06d8);
    REQUIRE_THROWS_AS(parse_tcp(Bytes(19, 0)), TruncationError);
}

TEST_CASE("tcp round-trip property") {
    Gen g;
    for (int i = 0; i < 200; ++i) {
        TcpHeader h;
        h.src_port = g.u16();
        h.dst_port = g.u16();
        h.seq = g.u32();
        h.ack = g.u32();
        h.offset_resv_flags = g.u16();
        h.window = g.u16();
        h.checksum = g.u16();
        h.urgent = g.u16();
        Bytes payload = g.bytes(g.rng() % 100);
        TcpSegment back = parse_tcp(serialize_tcp(h, payload));
        REQUIRE(back.header == h);
        REQUIRE(back.payload == payload);
    }
}

TEST_CASE("arp request and reply") {
    auto req = make_arp_request(MacAddress{{1, 2, 3, 4, 5, 6}}, Ipv4Address::parse("192.168.0.10"),
                                Ipv4Address::parse("192.168.0.14"));
    Bytes wire = serialize_arp(req);
    REQUIRE(wire.size() == 28);
    ArpPacket back = parse_arp(wire);
    REQUIRE(back.target_mac == MacAddress::zero());
    REQUIRE(back == req);

    MacAddress responder{{9, 9, 9, 9, 9, 9}};
    ArpPacket reply = make_arp_reply(req, responder);
    REQUIRE(reply.op == ArpOp::Reply);
    REQUIRE(reply.sender_mac == responder);
    REQUIRE(reply.sender_ip == req.target_ip);
    REQUIRE(reply.target_mac == req.sender_mac);
    REQUIRE(parse_arp(serialize_arp(reply)) == reply);

    wire[7] = 9;  // bad op
    REQUIRE_THROWS_AS(parse_arp(wire), CodecError);
    REQUIRE_THROWS_AS(parse_arp(Bytes(27, 0)), TruncationError);
}

TEST_CASE("icmp echo semantics") {
    IcmpEcho req{IcmpKind::EchoRequest, 7, 1, Bytes(32, 0xab)};
    IcmpEcho reply = make_echo_reply(req);
    REQUIRE(reply.kind == IcmpKind::EchoReply);
    REQUIRE(reply.ident == req.ident);
    REQUIRE(reply.seqno == req.seqno);
    REQUIRE(reply.payload == req.payload);

    REQUIRE(parse_icmp(serialize_icmp(req)) == req);
    REQUIRE(parse_icmp(serialize_icmp(reply)) == reply);
    REQUIRE_THROWS_AS(parse_icmp(Bytes(7, 0)), TruncationError);
}

TEST_CASE("browser announcement round-trip") {
    BrowserAnnouncement a{"PC-ACCOUNTING", {"docs", "printer"}};
    REQUIRE(parse_browser(serialize_browser(a)) == a);

    BrowserAnnouncement too_long{"SIXTEEN-CHARS-XY", {}};
    REQUIRE(too_long.host_name.size() == 16);
    REQUIRE_THROWS_AS(serialize_browser(too_long), SizeError);

    Gen g;
    for (int i = 0; i < 200; ++i) {
        BrowserAnnouncement x;
        x.host_name = g.str(15);
        size_t n = g.rng() % 5;
        for (size_t j = 0; j < n; ++j) x.shares.push_back(g.str(20));
        REQUIRE(parse_browser(serialize_browser(x)) == x);
    }
}
