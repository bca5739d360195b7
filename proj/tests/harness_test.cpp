#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "lantunnel/pcap.hpp"
#include "lantunnel/scenario/runner.hpp"

using namespace lantunnel;

TEST_CASE("config parsing covers scalars, lists and host stanzas") {
    std::string text = R"(
# topology overrides
seed=42
lan_prefix=10.1.0.0/16
client.ip=10.1.0.108
client.mac=02:11:22:33:44:55
gateway.lan_ip=10.1.0.1
server.second_ip=10.1.0.14
allowed_outbound_ports=80,443,8080
announce_period=50   # trailing comment
isn_16bit=true
ping.source=10.1.0.10
ping.count=2
ping.payload=64

host.name=ALPHA
host.ip=10.1.0.10
host.mac=02:00:00:00:0A:0A
host.shares=docs,music

host.name=BETA
host.ip=10.1.0.11
host.mac=02:00:00:00:0B:0B
)";
    ScenarioConfig cfg = parse_config_text(text);
    REQUIRE(cfg.net.seed == 42);
    REQUIRE(cfg.net.lan_prefix.to_string() == "10.1.0.0/16");
    REQUIRE(cfg.net.client_ip == Ipv4Address::parse("10.1.0.108"));
    REQUIRE(cfg.net.client_mac == MacAddress::parse("02:11:22:33:44:55"));
    REQUIRE(cfg.net.allowed_outbound_ports == std::set<uint16_t>{80, 443, 8080});
    REQUIRE(cfg.net.announce_period == 50);
    REQUIRE(cfg.net.isn_16bit);
    REQUIRE(cfg.ping_source == Ipv4Address::parse("10.1.0.10"));
    REQUIRE(cfg.ping_count == 2);
    REQUIRE(cfg.ping_payload == 64);
    REQUIRE(cfg.net.hosts.size() == 2);
    REQUIRE(cfg.net.hosts[0].name == "ALPHA");
    REQUIRE(cfg.net.hosts[0].shares == std::vector<std::string>{"docs", "music"});
    REQUIRE(cfg.net.hosts[1].ip == Ipv4Address::parse("10.1.0.11"));
    REQUIRE(cfg.net.hosts[1].shares.empty());

    // Without host stanzas the default roster applies.
    REQUIRE(parse_config_text("seed=7\n").net.hosts.size() ==
            ScenarioConfig::defaults().net.hosts.size());
}

TEST_CASE("config parse errors") {
    REQUIRE_THROWS_AS(parse_config_text("bogus_key=1\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config_text("no equals sign here\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config_text("host.ip=10.0.0.1\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config_text("seed=notanumber\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_config_text("client.ip=300.1.1.1\n"), ConfigError);
    REQUIRE_THROWS_AS(load_config_file("/nonexistent/path.cfg"), ConfigError);
}

namespace {

bool has_violation(const std::vector<std::string>& violations, const std::string& needle) {
    for (const auto& v : violations) {
        if (v.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("config validation") {
    REQUIRE(validate_config(ScenarioConfig::defaults()).empty());

    ScenarioConfig conflict = ScenarioConfig::defaults();
    conflict.net.second_ip = Ipv4Address::parse("192.168.0.10");  // taken by a host
    REQUIRE(has_violation(validate_config(conflict), "address conflict"));

    ScenarioConfig outside = ScenarioConfig::defaults();
    outside.net.second_ip = Ipv4Address::parse("10.9.9.9");
    REQUIRE(has_violation(validate_config(outside), "prefix mismatch"));

    ScenarioConfig tiny_mtu = ScenarioConfig::defaults();
    tiny_mtu.mtu = 500;
    REQUIRE(has_violation(validate_config(tiny_mtu), "mtu"));

    ScenarioConfig long_name = ScenarioConfig::defaults();
    long_name.net.hosts[0].name = "SIXTEEN-CHARS-XY";
    long_name.net.hosts[0].ip = Ipv4Address::parse("192.168.0.10");
    REQUIRE(has_violation(validate_config(long_name), "too long"));
}

TEST_CASE("all registered scenarios pass with the default config") {
    REQUIRE(scenario_registry().size() == 5);
    for (const auto& [name, fn] : scenario_registry()) {
        ScenarioReport rep = run_scenario(name, ScenarioConfig::defaults());
        std::string notes;
        for (const auto& n : rep.notes) notes += n + "; ";
        INFO(name << ": " << notes);
        REQUIRE(rep.pass);
        REQUIRE(rep.name == name);
    }
}

TEST_CASE("run_scenario rejects bad input") {
    REQUIRE_THROWS_AS(run_scenario("nope", ScenarioConfig::defaults()), UnknownScenarioError);
    ScenarioConfig bad = ScenarioConfig::defaults();
    bad.net.second_ip = bad.net.hosts[0].ip;
    REQUIRE_THROWS_AS(run_scenario("ping", bad), ConfigError);
}

TEST_CASE("reported metrics re-audit from the recorded trace alone") {
    ScenarioConfig cfg = ScenarioConfig::defaults();
    ScenarioReport rep = run_scenario("ping", cfg);
    REQUIRE(rep.pass);

    const Trace& trace = rep.trace();
    REQUIRE(rep.metrics.at("echo_replies") ==
            static_cast<int64_t>(count_lan_echo_replies(trace, cfg.net.second_ip,
                                                        cfg.ping_source)));
    REQUIRE(rep.metrics.at("drops") == static_cast<int64_t>(count_drops(trace)));
    REQUIRE(rep.metrics.at("tunnel_crossings") ==
            static_cast<int64_t>(collect_tunnel_crossings(trace).size()));
    REQUIRE(audit_ping_chain(trace, cfg.ping_count));
    REQUIRE(audit_loop_freedom(trace));
    REQUIRE(audit_nat_soundness(trace));
}

TEST_CASE("trace and capture files are written") {
    ScenarioReport rep = run_scenario("ping", ScenarioConfig::defaults());

    std::string trace_path = "harness_test_trace.txt";
    rep.trace().write_file(trace_path);
    std::ifstream tf(trace_path);
    REQUIRE(tf.good());
    std::string text((std::istreambuf_iterator<char>(tf)), std::istreambuf_iterator<char>());
    REQUIRE(text == rep.trace().to_text());
    REQUIRE(text.find("lan_segment") != std::string::npos);
    std::remove(trace_path.c_str());

    std::string pcap_path = "harness_test_capture.pcap";
    export_capture(rep.trace(), Location::FirewallOut, pcap_path);
    std::ifstream pf(pcap_path, std::ios::binary);
    REQUIRE(pf.good());
    Bytes head(4);
    pf.read(reinterpret_cast<char*>(head.data()), 4);
    REQUIRE(head == Bytes{0xd4, 0xc3, 0xb2, 0xa1});  // classic magic, little-endian
    std::remove(pcap_path.c_str());
}

TEST_CASE("seed changes the captured connection parameters but not the verdict") {
    ScenarioConfig a = ScenarioConfig::defaults();
    a.net.seed = 1;
    ScenarioConfig b = ScenarioConfig::defaults();
    b.net.seed = 2;

    ScenarioReport ra = run_scenario("ping", a);
    ScenarioReport rb = run_scenario("ping", b);
    REQUIRE(ra.pass);
    REQUIRE(rb.pass);
    REQUIRE(ra.network->client().capture().client_isn !=
            rb.network->client().capture().client_isn);
    REQUIRE(ra.trace().to_text() != rb.trace().to_text());
}
