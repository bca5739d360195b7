#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include "lantunnel/bytes.hpp"
#include "lantunnel/sim/trace.hpp"

namespace lantunnel {

// Classic pcap writer: magic 0xa1b2c3d4, version 2.4, link type 1 (Ethernet).
// Timestamps are derived from simulation ticks (1 tick = 1 second).
class PcapWriter {
  public:
    explicit PcapWriter(const std::string& path) : file_(path, std::ios::binary) {
        if (!file_) throw std::runtime_error("cannot open pcap file: " + path);
        write_u32(0xa1b2c3d4);
        write_u16(2);  // version major
        write_u16(4);  // version minor
        write_u32(0);  // thiszone
        write_u32(0);  // sigfigs
        write_u32(65535);  // snaplen
        write_u32(1);  // link type: ethernet
    }

    void write_packet(uint64_t tick, BytesView frame) {
        write_u32(static_cast<uint32_t>(tick));  // ts_sec
        write_u32(0);                            // ts_usec
        write_u32(static_cast<uint32_t>(frame.size()));
        write_u32(static_cast<uint32_t>(frame.size()));
        file_.write(reinterpret_cast<const char*>(frame.data()),
                    static_cast<std::streamsize>(frame.size()));
    }

  private:
    // File byte order is little-endian; readers detect it from the magic.
    void write_u16(uint16_t v) {
        char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
        file_.write(b, 2);
    }
    void write_u32(uint32_t v) {
        char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>(v >> 24)};
        file_.write(b, 4);
    }

    std::ofstream file_;
};

// Writes the frames delivered at one tap point, in trace order.
inline void export_capture(const Trace& trace, Location tap, const std::string& path) {
    PcapWriter w(path);
    for (const auto& ev : trace.events()) {
        if (ev.location == tap && ev.delivered) {
            w.write_packet(ev.time, ev.frame);
        }
    }
}

}  // namespace lantunnel
