#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vanetsim/packets.hpp"

namespace vanetsim {

// Fixed-order binary layout for control packets. All integers big-endian,
// fixed width. Whole speeds are centi-m/s (u16); averaged/metric quantities
// are carried in half-units (u32 counting halves of a centi-m/s or of a stop
// count) so averages of two integers survive the wire exactly. Headings are
// the 2-bit codes N=0 E=1 S=2 W=3, one per byte.
//
// RREQ: rreq_id u32 | source u16 | source_seqno u32 | destination u16 |
//       dest_seqno_known flag u8 + value u32 | hop_count u8 | first_hop u16 |
//       src_dir u8 | src_speed u16 | src_stoptimes u16 |
//       speed_metric u32 | stop_metric u32                          (33 B)
// RREP: source u16 | destination u16 | dest_seqno u32 | hop_count u8 |
//       last_hop u16 | avg_speed u32 | avg_stop u32 | speed_metric u32 |
//       stop_metric u32 | src_dir u8 | dest_dir u8                  (29 B)
// RERR: count u8 | count * (destination u16 | seqno u32)
//
// Tagged form (used on the simulated channel): type u8 (1=RREQ 2=RREP
// 3=RERR) followed by the layout above.

class CodecError : public std::runtime_error {
 public:
  explicit CodecError(const std::string& what) : std::runtime_error(what) {}
};

namespace wire {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> buf) : buf_(buf) {}

  std::uint8_t u8() {
    if (pos_ >= buf_.size()) throw CodecError("truncated packet");
    return buf_[pos_++];
  }
  std::uint16_t u16() {
    const auto hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
  }
  std::uint32_t u32() {
    const auto hi = u16();
    return (static_cast<std::uint32_t>(hi) << 16) | u16();
  }
  void expect_end() const {
    if (pos_ != buf_.size()) throw CodecError("trailing bytes in packet");
  }

 private:
  std::span<const std::uint8_t> buf_;
  std::size_t pos_{0};
};

inline std::uint32_t checked_halves(Half h, const char* field) {
  if (h.halves < 0 || h.halves > 0xffffffffLL)
    throw CodecError(std::string("field out of range: ") + field);
  return static_cast<std::uint32_t>(h.halves);
}

inline Heading checked_heading(std::uint8_t v) {
  if (v > 3) throw CodecError("bad heading code");
  return static_cast<Heading>(v);
}

}  // namespace wire

inline constexpr std::size_t kRreqWireSize = 33;
inline constexpr std::size_t kRrepWireSize = 29;
inline std::size_t rerr_wire_size(std::size_t entries) { return 1 + 6 * entries; }

inline std::vector<std::uint8_t> encode(const RouteRequest& p) {
  wire::Writer w;
  w.u32(p.rreq_id);
  w.u16(p.source);
  w.u32(p.source_seqno);
  w.u16(p.destination);
  w.u8(p.dest_seqno_known ? 1 : 0);
  w.u32(p.dest_seqno_known.value_or(0));
  w.u8(p.hop_count);
  w.u16(p.first_hop);
  w.u8(static_cast<std::uint8_t>(p.src_dir));
  if (p.src_speed < 0 || p.src_speed > 0xffff) throw CodecError("src_speed out of range");
  w.u16(static_cast<std::uint16_t>(p.src_speed));
  if (p.src_stoptimes < 0 || p.src_stoptimes > 0xffff)
    throw CodecError("src_stoptimes out of range");
  w.u16(static_cast<std::uint16_t>(p.src_stoptimes));
  w.u32(wire::checked_halves(p.speed_metric, "speed_metric"));
  w.u32(wire::checked_halves(p.stop_metric, "stop_metric"));
  return w.take();
}

inline RouteRequest decode_rreq(std::span<const std::uint8_t> buf) {
  wire::Reader r(buf);
  RouteRequest p;
  p.rreq_id = r.u32();
  p.source = r.u16();
  p.source_seqno = r.u32();
  p.destination = r.u16();
  const auto flag = r.u8();
  if (flag > 1) throw CodecError("bad dest_seqno flag");
  const auto seq = r.u32();
  if (flag) p.dest_seqno_known = seq;
  p.hop_count = r.u8();
  p.first_hop = r.u16();
  p.src_dir = wire::checked_heading(r.u8());
  p.src_speed = r.u16();
  p.src_stoptimes = r.u16();
  p.speed_metric = Half{r.u32()};
  p.stop_metric = Half{r.u32()};
  r.expect_end();
  return p;
}

inline std::vector<std::uint8_t> encode(const RouteReply& p) {
  wire::Writer w;
  w.u16(p.source);
  w.u16(p.destination);
  w.u32(p.dest_seqno);
  w.u8(p.hop_count);
  w.u16(p.last_hop);
  w.u32(wire::checked_halves(p.avg_speed, "avg_speed"));
  w.u32(wire::checked_halves(p.avg_stop, "avg_stop"));
  w.u32(wire::checked_halves(p.speed_metric, "speed_metric"));
  w.u32(wire::checked_halves(p.stop_metric, "stop_metric"));
  w.u8(static_cast<std::uint8_t>(p.src_dir));
  w.u8(static_cast<std::uint8_t>(p.dest_dir));
  return w.take();
}

inline RouteReply decode_rrep(std::span<const std::uint8_t> buf) {
  wire::Reader r(buf);
  RouteReply p;
  p.source = r.u16();
  p.destination = r.u16();
  p.dest_seqno = r.u32();
  p.hop_count = r.u8();
  p.last_hop = r.u16();
  p.avg_speed = Half{r.u32()};
  p.avg_stop = Half{r.u32()};
  p.speed_metric = Half{r.u32()};
  p.stop_metric = Half{r.u32()};
  p.src_dir = wire::checked_heading(r.u8());
  p.dest_dir = wire::checked_heading(r.u8());
  r.expect_end();
  return p;
}

inline std::vector<std::uint8_t> encode(const RouteError& p) {
  if (p.unreachable.size() > 255) throw CodecError("too many RERR entries");
  wire::Writer w;
  w.u8(static_cast<std::uint8_t>(p.unreachable.size()));
  for (const auto& u : p.unreachable) {
    w.u16(u.destination);
    w.u32(u.seqno);
  }
  return w.take();
}

inline RouteError decode_rerr(std::span<const std::uint8_t> buf) {
  wire::Reader r(buf);
  RouteError p;
  const auto n = r.u8();
  p.unreachable.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RouteError::Unreachable u;
    u.destination = r.u16();
    u.seqno = r.u32();
    p.unreachable.push_back(u);
  }
  r.expect_end();
  return p;
}

inline std::vector<std::uint8_t> encode_packet(const Packet& p) {
  wire::Writer w;
  std::vector<std::uint8_t> body;
  if (const auto* rreq = std::get_if<RouteRequest>(&p)) {
    w.u8(1);
    body = encode(*rreq);
  } else if (const auto* rrep = std::get_if<RouteReply>(&p)) {
    w.u8(2);
    body = encode(*rrep);
  } else if (const auto* rerr = std::get_if<RouteError>(&p)) {
    w.u8(3);
    body = encode(*rerr);
  } else {
    throw CodecError("data packets have no control codec");
  }
  auto out = w.take();
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

inline Packet decode_packet(std::span<const std::uint8_t> buf) {
  wire::Reader r(buf);
  const auto type = r.u8();
  const auto rest = buf.subspan(1);
  switch (type) {
    case 1: return decode_rreq(rest);
    case 2: return decode_rrep(rest);
    case 3: return decode_rerr(rest);
    default: throw CodecError("unknown packet type " + std::to_string(type));
  }
}

// Bytes the radio charges for a packet; data packets are charged their
// payload, control packets their serialized size.
inline std::size_t wire_size(const Packet& p) {
  if (std::holds_alternative<RouteRequest>(p)) return 1 + kRreqWireSize;
  if (std::holds_alternative<RouteReply>(p)) return 1 + kRrepWireSize;
  if (const auto* rerr = std::get_if<RouteError>(&p))
    return 1 + rerr_wire_size(rerr->unreachable.size());
  return std::get<DataPacket>(p).payload_bytes;
}

}  // namespace vanetsim
