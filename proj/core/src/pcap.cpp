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
#include "iodsim/pcap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <boost/endian/conversion.hpp>

#include "iodsim/error.hpp"

namespace iodsim {

namespace {

template <class T>
void put_be(std::vector<std::uint8_t>& out, T v) {
  v = boost::endian::native_to_big(v);
  const auto* b = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), b, b + sizeof(T));
}

template <class T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  v = boost::endian::native_to_little(v);
  const auto* b = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), b, b + sizeof(T));
}

std::uint16_t ip_checksum(const std::uint8_t* h, std::size_t n) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i + 1 < n; i += 2) sum += (h[i] << 8) | h[i + 1];
  while (sum >> 16) sum = (sum & 0xFFFF) + (sum >> 16);
  return static_cast<std::uint16_t>(~sum);
}

}  // namespace

std::vector<std::uint8_t> ipv4_datagram(const Packet& p) {
  std::vector<std::uint8_t> out;
  const std::size_t total = p.size();
  out.reserve(total);
  out.push_back(0x45);  // version 4, IHL 5
  out.push_back(0);
  put_be<std::uint16_t>(out, static_cast<std::uint16_t>(std::min<std::size_t>(total, 0xFFFF)));
  put_be<std::uint16_t>(out, static_cast<std::uint16_t>(p.uid & 0xFFFF));
  put_be<std::uint16_t>(out, 0x4000);  // don't fragment
  out.push_back(64);
  out.push_back(static_cast<std::uint8_t>(p.proto));
  put_be<std::uint16_t>(out, 0);
  put_be<std::uint32_t>(out, p.src);
  put_be<std::uint32_t>(out, p.dst);
  const std::uint16_t csum = ip_checksum(out.data(), 20);
  out[10] = static_cast<std::uint8_t>(csum >> 8);
  out[11] = static_cast<std::uint8_t>(csum & 0xFF);

  put_be<std::uint16_t>(out, p.sport);
  put_be<std::uint16_t>(out, p.dport);
  if (p.proto == Proto::udp) {
    put_be<std::uint16_t>(out, static_cast<std::uint16_t>(std::min<std::size_t>(p.payload.size() + 8, 0xFFFF)));
    put_be<std::uint16_t>(out, 0);
  } else {
    const Segment s = p.segment.value_or(Segment{});
    put_be<std::uint32_t>(out, s.seq);
    put_be<std::uint32_t>(out, s.is_ack ? s.ack : 0);
    out.push_back(0x50);  // data offset 5
    out.push_back(s.is_ack ? 0x10 : 0x18);  // ACK or PSH|ACK
    put_be<std::uint16_t>(out, 0xFFFF);
    put_be<std::uint16_t>(out, 0);
    put_be<std::uint16_t>(out, 0);
  }
  out.insert(out.end(), p.payload.begin(), p.payload.end());
  return out;
}

std::vector<std::uint8_t> encode_pcap(const std::vector<PcapFrame>& frames) {
  std::vector<std::uint8_t> out;
  put_le<std::uint32_t>(out, kPcapMagic);
  put_le<std::uint16_t>(out, 2);
  put_le<std::uint16_t>(out, 4);
  put_le<std::int32_t>(out, 0);   // thiszone
  put_le<std::uint32_t>(out, 0);  // sigfigs
  put_le<std::uint32_t>(out, kPcapSnaplen);
  put_le<std::uint32_t>(out, kLinktypeRaw);
  for (const auto& f : frames) {
    // Split on the microsecond grid so 1.5 s becomes (1, 500000) exactly.
    const auto us = static_cast<std::uint64_t>(std::llround(f.time * 1e6));
    const std::size_t incl = std::min<std::size_t>(f.data.size(), kPcapSnaplen);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(us / 1000000));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(us % 1000000));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(incl));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.data.size()));
    out.insert(out.end(), f.data.begin(), f.data.begin() + static_cast<std::ptrdiff_t>(incl));
  }
  return out;
}

void write_pcap(const std::string& path, const std::vector<PcapFrame>& frames) {
  const auto bytes = encode_pcap(frames);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SimError(Errc::io_error, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SimError(Errc::io_error, "short write on " + path);
}

}  // namespace iodsim
