// Copyright 2026 The IoD Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iodsim/network.hpp"

namespace iodsim {

inline constexpr std::uint32_t kPcapMagic = 0xa1b2c3d4u;
inline constexpr std::uint32_t kPcapSnaplen = 65535;
inline constexpr std::uint32_t kLinktypeRaw = 101;  // raw IPv4, no link header

struct PcapFrame {
  Seconds time = 0.0;  ///< relative to simulation start
  std::vector<std::uint8_t> data;
};

/// IPv4 datagram for a packet: header with a valid checksum, then a UDP or
/// TCP header (checksum left at 0), then the payload.
std::vector<std::uint8_t> ipv4_datagram(const Packet& p);

/// Classic little-endian pcap: global header plus one record per frame.
std::vector<std::uint8_t> encode_pcap(const std::vector<PcapFrame>& frames);

/// Throws IoError.
void write_pcap(const std::string& path, const std::vector<PcapFrame>& frames);

}  // namespace iodsim
