#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lantunnel/bytes.hpp"

namespace lantunnel {

// Simplified stand-in for the browser service's name announcements: a
// length-prefixed datagram carried over the protocol-17 stub on port 138.
constexpr uint16_t kBrowserPort = 138;
constexpr size_t kBrowserMaxHostName = 15;

struct BrowserAnnouncement {
    std::string host_name;  // <= 15 chars
    std::vector<std::string> shares;

    bool operator==(const BrowserAnnouncement&) const = default;
};

namespace detail {
inline void put_pstring(Bytes& out, const std::string& s) {
    if (s.size() > 0xff) throw SizeError("string too long for length prefix");
    out.push_back(static_cast<uint8_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
}

inline std::string get_pstring(BytesView in, size_t& off) {
    require_len(in, off + 1, "browser string length");
    size_t len = in[off++];
    require_len(in, off + len, "browser string body");
    std::string s(in.begin() + off, in.begin() + off + len);
    off += len;
    return s;
}
}  // namespace detail

// Datagram layout: src_port, dst_port (both 138), then host name and shares
// as length-prefixed strings with a one-byte share count.
inline Bytes serialize_browser(const BrowserAnnouncement& a) {
    if (a.host_name.size() > kBrowserMaxHostName) {
        throw SizeError("host name exceeds " + std::to_string(kBrowserMaxHostName) + " chars");
    }
    if (a.shares.size() > 0xff) throw SizeError("too many shares");
    Bytes out;
    put_u16(out, kBrowserPort);
    put_u16(out, kBrowserPort);
    detail::put_pstring(out, a.host_name);
    out.push_back(static_cast<uint8_t>(a.shares.size()));
    for (const auto& s : a.shares) detail::put_pstring(out, s);
    return out;
}

inline BrowserAnnouncement parse_browser(BytesView bytes) {
    require_len(bytes, 5, "browser datagram");
    if (get_u16(bytes, 2) != kBrowserPort) {
        throw CodecError("browser datagram not addressed to port 138");
    }
    size_t off = 4;
    BrowserAnnouncement a;
    a.host_name = detail::get_pstring(bytes, off);
    if (a.host_name.size() > kBrowserMaxHostName) {
        throw CodecError("host name exceeds 15 chars");
    }
    require_len(bytes, off + 1, "browser share count");
    size_t count = bytes[off++];
    a.shares.reserve(count);
    for (size_t i = 0; i < count; ++i) a.shares.push_back(detail::get_pstring(bytes, off));
    return a;
}

}  // namespace lantunnel
