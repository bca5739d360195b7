#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lantunnel/agents/client.hpp"
#include "lantunnel/agents/server.hpp"
#include "lantunnel/rng.hpp"
#include "lantunnel/sim/firewall.hpp"
#include "lantunnel/sim/host.hpp"
#include "lantunnel/sim/switch.hpp"
#include "lantunnel/sim/trace.hpp"

namespace lantunnel {

struct NetworkConfig {
    uint64_t seed = 1;
    Ipv4Prefix lan_prefix = Ipv4Prefix::parse("192.168.0.0/24");

    struct HostConfig {
        std::string name;
        Ipv4Address ip;
        MacAddress mac;
        std::vector<std::string> shares;
    };
    std::vector<HostConfig> hosts;

    Ipv4Address client_ip = Ipv4Address::parse("192.168.0.108");
    MacAddress client_mac = MacAddress::parse("02:00:00:00:01:6C");

    Ipv4Address gateway_lan_ip = Ipv4Address::parse("192.168.0.1");
    Ipv4Address public_ip = Ipv4Address::parse("195.174.145.217");
    MacAddress gateway_mac = MacAddress::parse("02:00:00:00:01:01");
    MacAddress gateway_public_mac = MacAddress::parse("02:00:00:00:01:FE");

    Ipv4Address server_public_ip = Ipv4Address::parse("195.212.102.201");
    MacAddress server_mac = MacAddress::parse("02:00:00:00:02:01");
    MacAddress server_gateway_mac = MacAddress::parse("02:00:00:00:02:FE");
    Ipv4Address second_ip = Ipv4Address::parse("192.168.0.14");

    std::set<uint16_t> allowed_outbound_ports{80, 443};
    uint32_t seq_window = 65535;
    uint64_t announce_period = 100;
    uint64_t arp_timeout = 40;
    uint64_t connect_timeout = 40;
    bool isn_16bit = false;
    bool tunnel_enabled = true;  // attach client and server agents
    bool server_enabled = true;  // server listens on port 80
};

// One ping exchange driven by a LAN host: ARP resolution, then count echo
// requests, each sent after the previous reply arrives.
struct PingTask {
    bool active = false;
    Ipv4Address target;
    int total = 0;
    int sent = 0;
    int replies = 0;
    size_t payload_size = 32;
    uint16_t ident = 0;
    uint16_t next_seqno = 1;
    bool awaiting_arp = false;
    bool failed = false;
};

// Deterministic discrete-event simulation of the whole topology: hosts and
// the client behind a MAC-learning switch, a stateful NAT firewall to the
// internet, and the attacker's server on the far side.
class Network {
  public:
    explicit Network(NetworkConfig cfg)
        : cfg_(std::move(cfg)),
          rng_(cfg_.seed),
          lan_switch_(static_cast<int>(cfg_.hosts.size()) + 2),
          firewall_(Firewall::Config{cfg_.public_ip, cfg_.gateway_mac, cfg_.gateway_public_mac,
                                     cfg_.allowed_outbound_ports, cfg_.seq_window}),
          client_(make_client_config(cfg_), rng_),
          server_(make_server_config(cfg_), rng_, ids_) {
        for (const auto& h : cfg_.hosts) {
            HostNode node;
            node.stack.mac = h.mac;
            node.stack.ip = h.ip;
            node.stack.prefix = cfg_.lan_prefix;
            node.stack.host_name = h.name;
            node.stack.shares = h.shares;
            node.stack.announce_period = cfg_.announce_period;
            hosts_.push_back(std::move(node));
        }
        client_port_ = static_cast<PortId>(hosts_.size());
        gateway_port_ = client_port_ + 1;
    }

    // --- scheduling -------------------------------------------------------

    void schedule(uint64_t time, std::function<void()> fn) {
        queue_.emplace(std::make_pair(time, seq_counter_++), std::move(fn));
    }

    void run(size_t max_events = 1000000) {
        while (!queue_.empty() && max_events-- > 0) {
            auto it = queue_.begin();
            now_ = it->first.first;
            auto fn = std::move(it->second);
            queue_.erase(it);
            fn();
        }
        if (!queue_.empty()) throw std::runtime_error("event budget exhausted");
    }

    uint64_t now() const { return now_; }

    // --- scripted actions -------------------------------------------------

    void client_connect_at(uint64_t t) {
        schedule(t, [this] {
            emit_on_lan(client_.connect(ids_), client_port_);
            uint64_t deadline = now_ + cfg_.connect_timeout;
            schedule(deadline, [this] {
                if (client_.phase() == ClientAgent::Phase::Connecting) client_.abort_connect();
            });
        });
    }

    void start_ping_at(uint64_t t, Ipv4Address source_host, Ipv4Address target, int count,
                       size_t payload_size = 32) {
        int idx = host_index(source_host);
        schedule(t, [this, idx, target, count, payload_size] {
            PingTask& task = hosts_[idx].ping;
            task = {};
            task.active = true;
            task.target = target;
            task.total = count;
            task.payload_size = payload_size;
            task.ident = static_cast<uint16_t>(0x0700 + idx);
            HostStack& stack = hosts_[idx].stack;
            if (stack.arp_cache.contains(target)) {
                send_next_echo(idx);
            } else {
                task.awaiting_arp = true;
                emit_on_lan({serialize_ethernet(stack.make_arp_request_frame(target)),
                             ids_.fresh()},
                            port_of_host(idx));
                schedule(now_ + cfg_.arp_timeout, [this, idx] {
                    PingTask& tk = hosts_[idx].ping;
                    if (tk.active && tk.awaiting_arp) {
                        tk.failed = true;
                        tk.active = false;
                    }
                });
            }
        });
    }

    // Periodic browser announcements from every named host, staggered one
    // tick apart for a deterministic order.
    void start_announcements(uint64_t from, uint64_t until) {
        for (size_t i = 0; i < hosts_.size(); ++i) {
            if (hosts_[i].stack.host_name.empty()) continue;
            schedule_announcement(i, from + 1 + i, until);
        }
    }

    // Drops a raw frame onto the internet link (forged traffic).
    void inject_internet_at(uint64_t t, Bytes frame_bytes) {
        schedule(t, [this, frame_bytes = std::move(frame_bytes)] {
            internet_inbound({frame_bytes, ids_.fresh()});
        });
    }

    // --- state access -----------------------------------------------------

    Trace& trace() { return trace_; }
    const Trace& trace() const { return trace_; }
    ClientAgent& client() { return client_; }
    ServerAgent& server() { return server_; }
    Firewall& firewall() { return firewall_; }
    VirtualSwitch& lan_switch() { return lan_switch_; }
    DeterministicRng& rng() { return rng_; }
    IdSource& ids() { return ids_; }
    const NetworkConfig& config() const { return cfg_; }
    PortId client_port() const { return client_port_; }
    PortId gateway_port() const { return gateway_port_; }

    HostStack& host_stack(Ipv4Address ip) { return hosts_[host_index(ip)].stack; }
    const PingTask& ping_task(Ipv4Address ip) { return hosts_[host_index(ip)].ping; }

  private:
    struct HostNode {
        HostStack stack;
        PingTask ping;
    };

    static ClientAgent::Config make_client_config(const NetworkConfig& cfg) {
        ClientAgent::Config c;
        c.mac = cfg.client_mac;
        c.ip = cfg.client_ip;
        c.gateway_mac = cfg.gateway_mac;
        c.server_public_ip = cfg.server_public_ip;
        c.forwarding = {cfg.second_ip, cfg.server_mac, cfg.client_mac, cfg.lan_prefix};
        c.isn_16bit = cfg.isn_16bit;
        return c;
    }

    static ServerAgent::Config make_server_config(const NetworkConfig& cfg) {
        ServerAgent::Config c;
        c.mac = cfg.server_mac;
        c.gateway_mac = cfg.server_gateway_mac;
        c.public_ip = cfg.server_public_ip;
        c.second_ip = cfg.second_ip;
        c.lan_prefix = cfg.lan_prefix;
        c.client_mac = cfg.client_mac;
        c.isn_16bit = cfg.isn_16bit;
        c.enabled = cfg.server_enabled;
        return c;
    }

    int host_index(Ipv4Address ip) const {
        for (size_t i = 0; i < hosts_.size(); ++i) {
            if (hosts_[i].stack.ip == ip) return static_cast<int>(i);
        }
        throw std::runtime_error("no such host: " + ip.to_string());
    }

    PortId port_of_host(int idx) const { return static_cast<PortId>(idx); }

    void schedule_announcement(size_t idx, uint64_t at, uint64_t until) {
        if (at > until) return;
        schedule(at, [this, idx, at, until] {
            emit_on_lan({serialize_ethernet(hosts_[idx].stack.make_announcement()),
                         ids_.fresh()},
                        port_of_host(static_cast<int>(idx)));
            schedule_announcement(idx, at + cfg_.announce_period, until);
        });
    }

    // --- frame movement ---------------------------------------------------

    void emit_on_lan(SimFrame frame, PortId from) {
        schedule(now_ + 1, [this, frame = std::move(frame), from] {
            switch_receive(frame, from);
        });
    }

    void switch_receive(const SimFrame& frame, PortId ingress) {
        EthernetFrame eth;
        try {
            eth = parse_ethernet(frame.bytes);
        } catch (const CodecError&) {
            trace_.record(now_, Location::LanSegment, frame, false, "malformed");
            return;
        }
        trace_.record(now_, Location::LanSegment, frame, true);
        for (PortId egress : lan_switch_.forward(eth, ingress)) {
            schedule(now_ + 1, [this, frame, egress] { deliver_port(frame, egress); });
        }
    }

    void deliver_port(const SimFrame& frame, PortId port) {
        if (port == gateway_port_) {
            gateway_lan_receive(frame);
        } else if (port == client_port_) {
            if (!cfg_.tunnel_enabled) return;
            for (auto& emission : client_.handle_lan_frame(frame, ids_)) {
                emit_on_lan(emission, client_port_);
            }
        } else {
            host_receive(port, frame);
        }
    }

    void host_receive(int idx, const SimFrame& frame) {
        HostNode& node = hosts_[idx];
        EthernetFrame eth;
        try {
            eth = parse_ethernet(frame.bytes);
        } catch (const CodecError&) {
            return;
        }
        for (const auto& resp : node.stack.handle_frame(eth)) {
            emit_on_lan({serialize_ethernet(resp), ids_.fresh()}, port_of_host(idx));
        }
        ping_bookkeeping(idx, eth);
    }

    void ping_bookkeeping(int idx, const EthernetFrame& eth) {
        HostNode& node = hosts_[idx];
        PingTask& task = node.ping;
        if (!task.active) return;
        try {
            if (task.awaiting_arp && eth.ethertype == kEthertypeArp) {
                ArpPacket arp = parse_arp(eth.payload);
                if (arp.op == ArpOp::Reply && arp.sender_ip == task.target &&
                    arp.target_mac == node.stack.mac) {
                    task.awaiting_arp = false;
                    send_next_echo(idx);
                }
            } else if (eth.ethertype == kEthertypeIpv4) {
                Ipv4Packet ip = parse_ipv4(eth.payload);
                if (ip.header.protocol != kIpProtoIcmp || ip.header.dst != node.stack.ip) return;
                IcmpEcho echo = parse_icmp(ip.payload);
                if (echo.kind == IcmpKind::EchoReply && echo.ident == task.ident &&
                    ip.header.src == task.target) {
                    ++task.replies;
                    if (task.sent < task.total) {
                        send_next_echo(idx);
                    } else {
                        task.active = false;
                    }
                }
            }
        } catch (const CodecError&) {
        }
    }

    void send_next_echo(int idx) {
        HostNode& node = hosts_[idx];
        PingTask& task = node.ping;
        if (task.sent >= task.total) {
            task.active = false;
            return;
        }
        auto frame = node.stack.make_echo_request(task.target, task.ident, task.next_seqno++,
                                                  task.payload_size);
        if (!frame) {
            task.failed = true;
            task.active = false;
            return;
        }
        ++task.sent;
        emit_on_lan({serialize_ethernet(*frame), ids_.fresh()}, port_of_host(idx));
    }

    void gateway_lan_receive(const SimFrame& frame) {
        EthernetFrame eth;
        try {
            eth = parse_ethernet(frame.bytes);
        } catch (const CodecError&) {
            return;
        }
        if (eth.dst_mac != cfg_.gateway_mac) return;  // the gateway NATs unicast IP only
        FirewallVerdict verdict = firewall_.outbound(eth);
        if (!verdict.frame) {
            trace_.record(now_, Location::FirewallOut, frame, false, verdict.drop_reason);
            return;
        }
        SimFrame translated{std::move(*verdict.frame), frame.id};
        trace_.record(now_, Location::FirewallOut, translated, true);
        schedule(now_ + 1, [this, translated] { internet_outbound(translated); });
    }

    void internet_outbound(const SimFrame& frame) {
        trace_.record(now_, Location::Internet, frame, true);
        Ipv4Address dst;
        try {
            dst = parse_ipv4(parse_ethernet(frame.bytes).payload).header.dst;
        } catch (const CodecError&) {
            return;
        }
        if (dst != cfg_.server_public_ip) return;  // routed elsewhere, out of scope
        // Last routed hop: the server's gateway puts its own MACs on the frame.
        EthernetFrame eth = parse_ethernet(frame.bytes);
        eth.src_mac = cfg_.server_gateway_mac;
        eth.dst_mac = cfg_.server_mac;
        SimFrame hop{serialize_ethernet(eth), frame.id};
        schedule(now_ + 1, [this, hop] { server_if_receive(hop); });
    }

    void server_if_receive(const SimFrame& frame) {
        trace_.record(now_, Location::ServerIf, frame, true);
        if (!cfg_.tunnel_enabled) return;
        ServerAgent::Output out = server_.handle_internet_frame(frame, now_);
        // Decapsulated frames, stack responses and departing envelopes all
        // show up in a capture taken at the server's interface.
        for (const auto& ev : out.local_events) {
            trace_.record(now_, Location::ServerIf, ev, true);
        }
        for (auto& emission : out.to_internet) {
            trace_.record(now_, Location::ServerIf, emission, true);
            schedule(now_ + 1, [this, emission] { internet_inbound(emission); });
        }
    }

    void internet_inbound(const SimFrame& frame) {
        trace_.record(now_, Location::Internet, frame, true);
        Ipv4Address dst;
        try {
            dst = parse_ipv4(parse_ethernet(frame.bytes).payload).header.dst;
        } catch (const CodecError&) {
            return;
        }
        if (dst != cfg_.public_ip) return;
        EthernetFrame eth = parse_ethernet(frame.bytes);
        eth.src_mac = cfg_.gateway_public_mac;
        eth.dst_mac = cfg_.gateway_public_mac;
        SimFrame hop{serialize_ethernet(eth), frame.id};
        schedule(now_ + 1, [this, hop] { firewall_in_receive(hop); });
    }

    void firewall_in_receive(const SimFrame& frame) {
        EthernetFrame eth = parse_ethernet(frame.bytes);
        FirewallVerdict verdict = firewall_.inbound(eth);
        if (!verdict.frame) {
            trace_.record(now_, Location::FirewallIn, frame, false, verdict.drop_reason);
            return;
        }
        SimFrame translated{std::move(*verdict.frame), frame.id};
        trace_.record(now_, Location::FirewallIn, translated, true);
        emit_on_lan(translated, gateway_port_);
    }

    NetworkConfig cfg_;
    DeterministicRng rng_;
    IdSource ids_;
    VirtualSwitch lan_switch_;
    Firewall firewall_;
    ClientAgent client_;
    ServerAgent server_;
    std::vector<HostNode> hosts_;
    PortId client_port_ = 0;
    PortId gateway_port_ = 0;

    Trace trace_;
    uint64_t now_ = 0;
    uint64_t seq_counter_ = 0;
    std::map<std::pair<uint64_t, uint64_t>, std::function<void()>> queue_;
};

}  // namespace lantunnel
