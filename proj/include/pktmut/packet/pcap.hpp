// Copyright 2026 The pktmut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include "pktmut/bytes.hpp"
#include "pktmut/errors.hpp"

namespace pktmut {

// Classic pcap writer, little-endian magic, linktype Ethernet.
class PcapWriter {
 public:
  explicit PcapWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::io_error, "cannot open " + path);
    write_u32(0xa1b2c3d4);  // magic
    write_u16(2);           // version major
    write_u16(4);           // version minor
    write_u32(0);           // thiszone
    write_u32(0);           // sigfigs
    write_u32(65535);       // snaplen
    write_u32(1);           // linktype: Ethernet
  }

  void write_frame(const Bytes& frame, uint32_t ts_sec = 0, uint32_t ts_usec = 0) {
    write_u32(ts_sec);
    write_u32(ts_usec);
    write_u32(static_cast<uint32_t>(frame.size()));
    write_u32(static_cast<uint32_t>(frame.size()));
    out_.write(reinterpret_cast<const char*>(frame.data()),
               static_cast<std::streamsize>(frame.size()));
  }

 private:
  void write_u16(uint16_t v) { out_.write(reinterpret_cast<const char*>(&v), 2); }
  void write_u32(uint32_t v) { out_.write(reinterpret_cast<const char*>(&v), 4); }

  std::ofstream out_;
};

}  // namespace pktmut
