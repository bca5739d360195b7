#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <compare>
#include <string>

#include "lantunnel/bytes.hpp"

namespace lantunnel {

struct MacAddress {
    std::array<uint8_t, 6> octets{};

    auto operator<=>(const MacAddress&) const = default;

    static MacAddress broadcast() { return {{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}}; }
    static MacAddress zero() { return {}; }

    bool is_broadcast() const { return *this == broadcast(); }

    std::string to_string() const {
        char buf[18];
        std::snprintf(buf, sizeof(buf), "%02X:%02X:%02X:%02X:%02X:%02X", octets[0], octets[1],
                      octets[2], octets[3], octets[4], octets[5]);
        return buf;
    }

    static MacAddress parse(const std::string& s) {
        MacAddress m;
        unsigned v[6];
        if (std::sscanf(s.c_str(), "%x:%x:%x:%x:%x:%x", &v[0], &v[1], &v[2], &v[3], &v[4], &v[5]) != 6) {
            throw CodecError("bad MAC address: " + s);
        }
        for (int i = 0; i < 6; ++i) {
            if (v[i] > 0xff) throw CodecError("bad MAC address: " + s);
            m.octets[i] = static_cast<uint8_t>(v[i]);
        }
        return m;
    }
};

struct Ipv4Address {
    std::array<uint8_t, 4> octets{};

    auto operator<=>(const Ipv4Address&) const = default;

    uint32_t to_u32() const {
        return (static_cast<uint32_t>(octets[0]) << 24) | (static_cast<uint32_t>(octets[1]) << 16) |
               (static_cast<uint32_t>(octets[2]) << 8) | octets[3];
    }

    static Ipv4Address from_u32(uint32_t v) {
        return {{static_cast<uint8_t>(v >> 24), static_cast<uint8_t>(v >> 16),
                 static_cast<uint8_t>(v >> 8), static_cast<uint8_t>(v)}};
    }

    std::string to_string() const {
        return std::to_string(octets[0]) + "." + std::to_string(octets[1]) + "." +
               std::to_string(octets[2]) + "." + std::to_string(octets[3]);
    }

    static Ipv4Address parse(const std::string& s) {
        unsigned v[4];
        if (std::sscanf(s.c_str(), "%u.%u.%u.%u", &v[0], &v[1], &v[2], &v[3]) != 4) {
            throw CodecError("bad IPv4 address: " + s);
        }
        Ipv4Address a;
        for (int i = 0; i < 4; ++i) {
            if (v[i] > 255) throw CodecError("bad IPv4 address: " + s);
            a.octets[i] = static_cast<uint8_t>(v[i]);
        }
        return a;
    }
};

// A prefix like 192.168.0.0/24.
struct Ipv4Prefix {
    Ipv4Address network{};
    int length = 0;

    uint32_t mask() const {
        return length == 0 ? 0 : (~uint32_t{0}) << (32 - length);
    }

    bool contains(Ipv4Address a) const {
        return (a.to_u32() & mask()) == (network.to_u32() & mask());
    }

    Ipv4Address broadcast_address() const {
        return Ipv4Address::from_u32(network.to_u32() | ~mask());
    }

    std::string to_string() const { return network.to_string() + "/" + std::to_string(length); }

    static Ipv4Prefix parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) throw CodecError("bad prefix: " + s);
        Ipv4Prefix p;
        p.network = Ipv4Address::parse(s.substr(0, slash));
        p.length = std::stoi(s.substr(slash + 1));
        if (p.length < 0 || p.length > 32) throw CodecError("bad prefix length: " + s);
        return p;
    }
};

}  // namespace lantunnel
