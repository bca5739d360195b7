#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lantunnel/sim/network.hpp"

namespace lantunnel {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario parameters on top of the topology. Defaults follow the worked
// example addresses so traces read against the documentation.
struct ScenarioConfig {
    NetworkConfig net;
    uint64_t mtu = 1500;
    Ipv4Address ping_source = Ipv4Address::parse("192.168.0.10");
    int ping_count = 4;
    size_t ping_payload = 32;

    static ScenarioConfig defaults() {
        ScenarioConfig cfg;
        auto host = [](const char* name, const char* ip, const char* mac,
                       std::vector<std::string> shares) {
            return NetworkConfig::HostConfig{name, Ipv4Address::parse(ip),
                                             MacAddress::parse(mac), std::move(shares)};
        };
        cfg.net.hosts = {
            host("PC-ACCOUNTING", "192.168.0.10", "02:00:00:00:01:0A", {"ledgers", "printer"}),
            host("PC-SALES", "192.168.0.11", "02:00:00:00:01:0B", {"quotes"}),
            host("PC-HR", "192.168.0.12", "02:00:00:00:01:0C", {"records"}),
            host("PC-DEV", "192.168.0.13", "02:00:00:00:01:0D", {"builds", "tools"}),
            host("PC-OPS", "192.168.0.15", "02:00:00:00:01:0F", {"runbooks"}),
        };
        return cfg;
    }
};

namespace detail {
inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}
}  // namespace detail

// Flat key=value format; '#' starts a comment, each host.name= line begins a
// new host stanza.
inline ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig cfg = ScenarioConfig::defaults();
    cfg.net.hosts.clear();
    bool hosts_given = false;

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
            line.pop_back();
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        line.erase(0, start);

        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);

        try {
            if (key == "seed") cfg.net.seed = std::stoull(value);
            else if (key == "lan_prefix") cfg.net.lan_prefix = Ipv4Prefix::parse(value);
            else if (key == "client.ip") cfg.net.client_ip = Ipv4Address::parse(value);
            else if (key == "client.mac") cfg.net.client_mac = MacAddress::parse(value);
            else if (key == "gateway.lan_ip") cfg.net.gateway_lan_ip = Ipv4Address::parse(value);
            else if (key == "gateway.public_ip") cfg.net.public_ip = Ipv4Address::parse(value);
            else if (key == "gateway.mac") cfg.net.gateway_mac = MacAddress::parse(value);
            else if (key == "gateway.public_mac")
                cfg.net.gateway_public_mac = MacAddress::parse(value);
            else if (key == "server.public_ip")
                cfg.net.server_public_ip = Ipv4Address::parse(value);
            else if (key == "server.mac") cfg.net.server_mac = MacAddress::parse(value);
            else if (key == "server.gateway_mac")
                cfg.net.server_gateway_mac = MacAddress::parse(value);
            else if (key == "server.second_ip") cfg.net.second_ip = Ipv4Address::parse(value);
            else if (key == "allowed_outbound_ports") {
                cfg.net.allowed_outbound_ports.clear();
                for (const auto& p : detail::split_csv(value)) {
                    cfg.net.allowed_outbound_ports.insert(
                        static_cast<uint16_t>(std::stoul(p)));
                }
            } else if (key == "mtu") cfg.mtu = std::stoull(value);
            else if (key == "announce_period") cfg.net.announce_period = std::stoull(value);
            else if (key == "arp_timeout") cfg.net.arp_timeout = std::stoull(value);
            else if (key == "connect_timeout") cfg.net.connect_timeout = std::stoull(value);
            else if (key == "seq_window") cfg.net.seq_window = static_cast<uint32_t>(std::stoul(value));
            else if (key == "isn_16bit") cfg.net.isn_16bit = (value == "true" || value == "1");
            else if (key == "ping.source") cfg.ping_source = Ipv4Address::parse(value);
            else if (key == "ping.count") cfg.ping_count = std::stoi(value);
            else if (key == "ping.payload") cfg.ping_payload = std::stoull(value);
            else if (key == "host.name") {
                hosts_given = true;
                cfg.net.hosts.push_back({value, {}, {}, {}});
            } else if (key == "host.ip") {
                if (cfg.net.hosts.empty()) throw ConfigError("host.ip before host.name");
                cfg.net.hosts.back().ip = Ipv4Address::parse(value);
            } else if (key == "host.mac") {
                if (cfg.net.hosts.empty()) throw ConfigError("host.mac before host.name");
                cfg.net.hosts.back().mac = MacAddress::parse(value);
            } else if (key == "host.shares") {
                if (cfg.net.hosts.empty()) throw ConfigError("host.shares before host.name");
                cfg.net.hosts.back().shares = detail::split_csv(value);
            } else {
                throw ConfigError("unknown key: " + key);
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("line " + std::to_string(lineno) + " (" + key + "): " + e.what());
        }
    }

    if (!hosts_given) cfg.net.hosts = ScenarioConfig::defaults().net.hosts;
    return cfg;
}

inline ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str());
}

// Empty result means the config satisfies all invariants.
inline std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
    std::vector<std::string> violations;
    const auto& net = cfg.net;

    std::set<uint32_t> lan_ips;
    auto add_lan_ip = [&](Ipv4Address ip, const std::string& what) {
        if (!net.lan_prefix.contains(ip)) {
            violations.push_back("prefix mismatch: " + what + " " + ip.to_string() +
                                 " outside " + net.lan_prefix.to_string());
        }
        if (!lan_ips.insert(ip.to_u32()).second) {
            violations.push_back("address conflict: " + what + " " + ip.to_string() +
                                 " duplicates another LAN address");
        }
    };
    add_lan_ip(net.gateway_lan_ip, "gateway.lan_ip");
    add_lan_ip(net.client_ip, "client.ip");
    for (const auto& h : net.hosts) add_lan_ip(h.ip, "host " + h.name);
    add_lan_ip(net.second_ip, "server.second_ip");

    for (const auto& h : net.hosts) {
        if (h.name.empty()) violations.push_back("host with empty name");
        if (h.name.size() > kBrowserMaxHostName) {
            violations.push_back("host name too long: " + h.name);
        }
    }
    if (cfg.mtu < 576) violations.push_back("mtu below 576");
    if (cfg.ping_count < 0) violations.push_back("negative ping.count");
    return violations;
}

}  // namespace lantunnel
