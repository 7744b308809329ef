#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "motorkit/conformal.hpp"
#include "motorkit/geom.hpp"

namespace motorkit::net {

// Wire encodings for one pose update. Payload sizes: 16, 7, or 8 IEEE-754
// 32-bit floats (little-endian); a motor carrying uniform scale uses a
// 9th-float extension of the Motor8 payload rather than a wider layout.
enum class Encoding : std::uint8_t { Matrix16 = 0, QuatVec7 = 1, Motor8 = 2 };

constexpr std::size_t kHeaderBytes = 17;  // id u32 + seq u32 + time f64 + tag u8

std::size_t payload_floats(Encoding tag);
std::size_t payload_bytes(Encoding tag);
std::size_t packet_bytes(Encoding tag);
const char* encoding_name(Encoding tag);
// Inverse of encoding_name; throws std::invalid_argument on any other string.
Encoding encoding_from_name(const std::string& name);

// One instant of an object's pose, held in all three transmitted forms.
// The forms are kept action-equivalent (the factories derive the other two
// from whichever one is given, and cross-check within 1e-9).
struct PoseSample {
  double time = 0.0;
  std::uint32_t object_id = 0;
  cga::Motor motor = cga::Motor::identity();
  geom::Mat4 matrix = geom::Mat4::identity();
  geom::Quaternion rotation = geom::Quaternion::identity();
  geom::Vec3 translation{};
  double scale = 1.0;

  static PoseSample from_motor(double time, std::uint32_t object_id,
                               const cga::Motor& m);
  static PoseSample from_matrix(double time, std::uint32_t object_id,
                                const geom::Mat4& m);
};

// Decoded packet. 17-byte header: object_id (u32 LE), seq (u32 LE),
// timestamp (f64 LE), encoding tag (u8); then the payload floats (f32 LE).
struct TransformUpdate {
  std::uint32_t object_id = 0;
  std::uint32_t seq = 0;
  double timestamp = 0.0;
  Encoding tag = Encoding::Motor8;
  std::vector<float> payload;
};

// Serialize one pose under the chosen encoding.
// Motor8 payload order: (1, e12, e13, e23, e1inf, e2inf, e3inf, e123inf);
// each e_i-inf coefficient is the shared value of the e_i4/e_i5 blade pair.
// A dilation motor extends Motor8 with a 9th float carrying the scale;
// QuatVec7 has no scale slot and rejects dilation with
// std::invalid_argument.
std::vector<std::uint8_t> encode_update(const PoseSample& sample,
                                        std::uint32_t seq, Encoding tag);

// Parse header + payload. Throws std::invalid_argument on a truncated
// buffer, unknown tag, or payload length not matching the tag.
TransformUpdate decode_update(std::span<const std::uint8_t> bytes);

// Reconstitute the pose carried by a decoded packet. Motor8 renormalizes
// the received motor; a residual non-versor part above 1e-4 after
// renormalization (beyond float32 quantization) is rejected with
// std::invalid_argument.
PoseSample pose_from_update(const TransformUpdate& update);

}  // namespace motorkit::net
