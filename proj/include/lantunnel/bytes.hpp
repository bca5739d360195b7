#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lantunnel {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

// Codec failures. Parsers throw; callers that treat foreign traffic as
// untrusted catch these and drop the frame.
struct CodecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TruncationError : CodecError {
    using CodecError::CodecError;
};
struct SizeError : CodecError {
    using CodecError::CodecError;
};

// Big-endian wire accessors. All multi-byte integers are big-endian on the wire.
inline void put_u16(Bytes& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v & 0xff));
}

inline void put_u32(Bytes& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<uint8_t>(v & 0xff));
}

inline uint16_t get_u16(BytesView in, size_t off) {
    return static_cast<uint16_t>((in[off] << 8) | in[off + 1]);
}

inline uint32_t get_u32(BytesView in, size_t off) {
    return (static_cast<uint32_t>(in[off]) << 24) | (static_cast<uint32_t>(in[off + 1]) << 16) |
           (static_cast<uint32_t>(in[off + 2]) << 8) | static_cast<uint32_t>(in[off + 3]);
}

inline void require_len(BytesView in, size_t need, const char* what) {
    if (in.size() < need) {
        throw TruncationError(std::string(what) + ": need " + std::to_string(need) +
                              " bytes, have " + std::to_string(in.size()));
    }
}

inline void append(Bytes& out, BytesView data) {
    out.insert(out.end(), data.begin(), data.end());
}

}  // namespace lantunnel
