#pragma once

#include <map>
#include <vector>

#include "lantunnel/wire/ethernet.hpp"

namespace lantunnel {

using PortId = int;

// MAC-learning switch. Forwards on MAC only; multiple MACs may map to one
// port, which is what lets the phantom server appear behind the client's
// port.
class VirtualSwitch {
  public:
    explicit VirtualSwitch(int port_count) : port_count_(port_count) {}

    // Learns the source MAC onto the ingress port and returns the egress
    // ports. Never returns the ingress port.
    std::vector<PortId> forward(const EthernetFrame& frame, PortId ingress) {
        mac_table_[frame.src_mac] = ingress;
        std::vector<PortId> egress;
        auto it = mac_table_.find(frame.dst_mac);
        if (!frame.dst_mac.is_broadcast() && it != mac_table_.end()) {
            if (it->second != ingress) egress.push_back(it->second);
        } else {
            for (PortId p = 0; p < port_count_; ++p) {
                if (p != ingress) egress.push_back(p);
            }
        }
        return egress;
    }

    const std::map<MacAddress, PortId>& mac_table() const { return mac_table_; }
    int port_count() const { return port_count_; }

  private:
    int port_count_;
    std::map<MacAddress, PortId> mac_table_;
};

}  // namespace lantunnel
