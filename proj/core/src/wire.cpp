#include "motorkit/wire.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace motorkit::net {

namespace {

namespace b = cga::blades;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}

void put_f32(std::vector<std::uint8_t>& out, float f) {
  put_u32(out, std::bit_cast<std::uint32_t>(f));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(in[at + i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(in[at + i]) << (8 * i);
  return v;
}

float get_f32(std::span<const std::uint8_t> in, std::size_t at) {
  return std::bit_cast<float>(get_u32(in, at));
}

// The eight coefficients of a rigid motor in wire order; the e_i-inf and
// e123-inf entries read the e_i4 member of each equal blade pair.
std::array<double, 8> rigid_coefficients(const ga::Multivector& mv) {
  return {mv[b::scalar], mv[b::e12], mv[b::e13],   mv[b::e23],
          mv[b::e14],    mv[b::e24], mv[b::e34],   mv[b::e1234]};
}

ga::Multivector rigid_from_coefficients(std::span<const float> c) {
  ga::Multivector mv = ga::Multivector::scalar(ga::conformal, double(c[0]));
  mv[b::e12] = double(c[1]);
  mv[b::e13] = double(c[2]);
  mv[b::e23] = double(c[3]);
  mv[b::e14] = mv[b::e15] = double(c[4]);
  mv[b::e24] = mv[b::e25] = double(c[5]);
  mv[b::e34] = mv[b::e35] = double(c[6]);
  mv[b::e1234] = mv[b::e1235] = double(c[7]);
  return mv;
}

// Rebuild an exact rigid versor from a received (float32-quantized) motor.
// Rescaling alone cannot remove the quantization residual, and the rest of
// the library holds motors to a much tighter versor gate than the wire can
// guarantee, so decode projects instead: take the clean rotor R from the
// Euclidean even part (which is exactly R for any rigid motor), peel the
// translator as M R-reverse, and recompose. The projection distance is the
// renormalization residual; beyond 1e-4 the payload was never a rigid
// versor and is rejected.
cga::Motor renormalized_wire_motor(const ga::Multivector& raw) {
  const double norm2 =
      ga::scalar_part(ga::geometric_product(raw, ga::reverse(raw)));
  if (!(norm2 > 1e-12)) {
    throw std::invalid_argument(
        "pose_from_update: received motor has near-zero norm");
  }
  const ga::Multivector scaled = raw / std::sqrt(norm2);

  const double rw = scaled[b::scalar];
  const double rx = scaled[b::e12];
  const double ry = scaled[b::e13];
  const double rz = scaled[b::e23];
  const double rot_norm = std::sqrt(rw * rw + rx * rx + ry * ry + rz * rz);
  if (!(rot_norm > 1e-6)) {
    throw std::invalid_argument(
        "pose_from_update: received payload has no rotor part");
  }
  cga::Rotor rotor;
  rotor.mv = ga::Multivector::scalar(ga::conformal, rw / rot_norm);
  rotor.mv[b::e12] = rx / rot_norm;
  rotor.mv[b::e13] = ry / rot_norm;
  rotor.mv[b::e23] = rz / rot_norm;

  const ga::Multivector trans =
      ga::geometric_product(scaled, ga::reverse(rotor.mv));
  const double tw = trans[b::scalar];
  if (!(std::abs(tw) > 1e-6)) {
    throw std::invalid_argument(
        "pose_from_update: received payload has a degenerate translator part");
  }
  const geom::Vec3 t{-2.0 * trans[b::e14] / tw, -2.0 * trans[b::e24] / tw,
                     -2.0 * trans[b::e34] / tw};

  cga::Motor clean = cga::motor_compose(
      {cga::to_motor(cga::translator(t)), cga::to_motor(rotor)});
  if ((scaled - clean.mv).inf_norm() > 1e-4) {
    throw std::invalid_argument(
        "pose_from_update: received payload is not a rigid versor (residual "
        "above 1e-4 after renormalization)");
  }
  return clean;
}

PoseSample fill_from_parts(double time, std::uint32_t id,
                           const geom::Quaternion& q, const geom::Vec3& t,
                           double scale) {
  PoseSample s;
  s.time = time;
  s.object_id = id;
  s.rotation = q.normalized();
  s.translation = t;
  s.scale = scale;
  std::vector<cga::Motor> parts = {
      cga::to_motor(cga::translator(t)),
      cga::to_motor(cga::rotor_from_quaternion(s.rotation))};
  if (scale != 1.0) {
    parts = {cga::to_motor(cga::translator(t)),
             cga::to_motor(cga::dilator(scale)),
             cga::to_motor(cga::rotor_from_quaternion(s.rotation))};
  }
  s.motor = cga::motor_compose(parts);
  s.matrix = geom::Mat4::from_rotation_translation(
      s.rotation.to_rotation_matrix() * scale, t);
  return s;
}

void cross_check_forms(const PoseSample& s) {
  const geom::Mat4 via_motor = cga::matrix_from_motor(s.motor);
  for (int i = 0; i < 16; ++i) {
    if (std::abs(via_motor.m[i] - s.matrix.m[i]) > 1e-9) {
      throw std::invalid_argument(
          "PoseSample: matrix and motor forms disagree beyond 1e-9");
    }
  }
}

}  // namespace

std::size_t payload_floats(Encoding tag) {
  switch (tag) {
    case Encoding::Matrix16: return 16;
    case Encoding::QuatVec7: return 7;
    case Encoding::Motor8: return 8;
  }
  throw std::invalid_argument("payload_floats: unknown encoding tag");
}

std::size_t payload_bytes(Encoding tag) { return 4 * payload_floats(tag); }

std::size_t packet_bytes(Encoding tag) {
  return kHeaderBytes + payload_bytes(tag);
}

const char* encoding_name(Encoding tag) {
  switch (tag) {
    case Encoding::Matrix16: return "Matrix16";
    case Encoding::QuatVec7: return "QuatVec7";
    case Encoding::Motor8: return "Motor8";
  }
  throw std::invalid_argument("encoding_name: unknown encoding tag");
}

Encoding encoding_from_name(const std::string& name) {
  for (const Encoding tag :
       {Encoding::Matrix16, Encoding::QuatVec7, Encoding::Motor8}) {
    if (name == encoding_name(tag)) return tag;
  }
  throw std::invalid_argument("unknown encoding name: " + name);
}

PoseSample PoseSample::from_motor(double time, std::uint32_t object_id,
                                  const cga::Motor& m) {
  const geom::Mat4 mat = cga::matrix_from_motor(m);
  const double det = mat.linear_block().det();
  const double scale = std::cbrt(det);
  PoseSample s = fill_from_parts(
      time, object_id,
      geom::Quaternion::from_rotation_matrix(mat.linear_block() *
                                             (1.0 / scale)),
      mat.translation(), std::abs(scale - 1.0) <= 1e-12 ? 1.0 : scale);
  // Keep the caller's motor verbatim; the rebuilt forms must agree with it.
  s.motor = m;
  s.matrix = mat;
  cross_check_forms(s);
  return s;
}

PoseSample PoseSample::from_matrix(double time, std::uint32_t object_id,
                                   const geom::Mat4& m) {
  PoseSample s = from_motor(time, object_id, cga::motor_from_matrix(m));
  s.matrix = m;
  return s;
}

std::vector<std::uint8_t> encode_update(const PoseSample& sample,
                                        std::uint32_t seq, Encoding tag) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 4 * (payload_floats(tag) + 1));
  put_u32(out, sample.object_id);
  put_u32(out, seq);
  put_u64(out, std::bit_cast<std::uint64_t>(sample.time));
  out.push_back(static_cast<std::uint8_t>(tag));
  switch (tag) {
    case Encoding::Matrix16:
      for (const double v : sample.matrix.m) put_f32(out, float(v));
      break;
    case Encoding::QuatVec7: {
      if (sample.motor.has_dilation || sample.scale != 1.0) {
        throw std::invalid_argument(
            "encode_update: QuatVec7 has no scale slot; use Matrix16 or the "
            "Motor8 scale extension");
      }
      const geom::Quaternion& q = sample.rotation;
      for (const double v : {q.w, q.x, q.y, q.z, sample.translation.x,
                             sample.translation.y, sample.translation.z}) {
        put_f32(out, float(v));
      }
      break;
    }
    case Encoding::Motor8: {
      if (sample.motor.has_dilation || sample.scale != 1.0) {
        // Scale extension: the rigid factor's eight coefficients plus the
        // uniform scale as a ninth float.
        const cga::Motor rigid = cga::motor_compose(
            {cga::to_motor(cga::translator(sample.translation)),
             cga::to_motor(cga::rotor_from_quaternion(sample.rotation))});
        for (const double v : rigid_coefficients(rigid.mv)) {
          put_f32(out, float(v));
        }
        put_f32(out, float(sample.scale));
      } else {
        if (!cga::has_rigid_support(sample.motor.mv)) {
          throw std::invalid_argument(
              "encode_update: motor support exceeds the 8-coefficient rigid "
              "set");
        }
        for (const double v : rigid_coefficients(sample.motor.mv)) {
          put_f32(out, float(v));
        }
      }
      break;
    }
  }
  return out;
}

TransformUpdate decode_update(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw std::invalid_argument("decode_update: truncated header");
  }
  TransformUpdate u;
  u.object_id = get_u32(bytes, 0);
  u.seq = get_u32(bytes, 4);
  u.timestamp = std::bit_cast<double>(get_u64(bytes, 8));
  const std::uint8_t tag_byte = bytes[16];
  if (tag_byte > 2) {
    char msg[48];
    std::snprintf(msg, sizeof msg, "decode_update: unknown tag %u", tag_byte);
    throw std::invalid_argument(msg);
  }
  u.tag = static_cast<Encoding>(tag_byte);
  const std::size_t rest = bytes.size() - kHeaderBytes;
  if (rest % 4 != 0) {
    throw std::invalid_argument("decode_update: truncated payload");
  }
  const std::size_t nfloats = rest / 4;
  const std::size_t expect = payload_floats(u.tag);
  const bool ok = (nfloats == expect) ||
                  (u.tag == Encoding::Motor8 && nfloats == expect + 1);
  if (!ok) {
    char msg[80];
    std::snprintf(msg, sizeof msg,
                  "decode_update: payload of %zu floats does not match tag %u",
                  nfloats, tag_byte);
    throw std::invalid_argument(msg);
  }
  u.payload.resize(nfloats);
  for (std::size_t i = 0; i < nfloats; ++i) {
    u.payload[i] = get_f32(bytes, kHeaderBytes + 4 * i);
  }
  return u;
}

PoseSample pose_from_update(const TransformUpdate& update) {
  switch (update.tag) {
    case Encoding::Matrix16: {
      geom::Mat4 m;
      for (int i = 0; i < 16; ++i) m.m[i] = double(update.payload[i]);
      return PoseSample::from_matrix(update.timestamp, update.object_id, m);
    }
    case Encoding::QuatVec7: {
      const geom::Quaternion q{double(update.payload[0]),
                               double(update.payload[1]),
                               double(update.payload[2]),
                               double(update.payload[3])};
      const geom::Vec3 t{double(update.payload[4]), double(update.payload[5]),
                         double(update.payload[6])};
      if (!(q.norm() > 1e-6)) {
        throw std::invalid_argument(
            "pose_from_update: received quaternion has near-zero norm");
      }
      return fill_from_parts(update.timestamp, update.object_id, q, t, 1.0);
    }
    case Encoding::Motor8: {
      const cga::Motor rigid = renormalized_wire_motor(
          rigid_from_coefficients(std::span(update.payload).first(8)));
      if (update.payload.size() == 8) {
        return PoseSample::from_motor(update.timestamp, update.object_id,
                                      rigid);
      }
      const double scale = double(update.payload[8]);
      if (!(scale > 0.0)) {
        throw std::invalid_argument(
            "pose_from_update: scale extension must be positive");
      }
      return fill_from_parts(update.timestamp, update.object_id,
                             cga::rotation_of(rigid),
                             cga::apply_to_point(rigid, {0.0, 0.0, 0.0}),
                             scale);
    }
  }
  throw std::invalid_argument("pose_from_update: unknown encoding tag");
}

}  // namespace motorkit::net
