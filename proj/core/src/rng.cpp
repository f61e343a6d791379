#include "mtilt/rng.hpp"

#include <cmath>

namespace mtilt {
namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mul_hilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                     std::uint64_t& lo) noexcept {
  const unsigned __int128 p =
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

// Ziggurat tables for the standard normal, 128 layers, 63-bit scaling.
struct ZigguratTables {
  std::uint64_t kn[128];
  double wn[128];
  double fn[128];

  ZigguratTables() noexcept {
    constexpr double kR = 3.442619855899;
    constexpr double kV = 9.91256303526217e-3;
    constexpr double kScale = 9223372036854775808.0;  // 2^63
    double dn = kR;
    double tn = kR;
    const double q = kV / std::exp(-0.5 * dn * dn);
    kn[0] = static_cast<std::uint64_t>((dn / q) * kScale);
    kn[1] = 0;
    wn[0] = q / kScale;
    wn[127] = dn / kScale;
    fn[0] = 1.0;
    fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(kV / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = static_cast<std::uint64_t>((dn / tn) * kScale);
      tn = dn;
      fn[i] = std::exp(-0.5 * dn * dn);
      wn[i] = dn / kScale;
    }
  }
};

const ZigguratTables& ziggurat() noexcept {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace

void RngStream::refill() noexcept {
  std::uint64_t c0 = ctr_lo_;
  std::uint64_t c1 = ctr_hi_;
  std::uint64_t c2 = 0;
  std::uint64_t c3 = 0;
  std::uint64_t k0 = key0_;
  std::uint64_t k1 = key1_;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mul_hilo(kPhiloxM0, c0, hi0, lo0);
    mul_hilo(kPhiloxM1, c2, hi1, lo1);
    c0 = hi1 ^ c1 ^ k0;
    c1 = lo1;
    c2 = hi0 ^ c3 ^ k1;
    c3 = lo0;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  buf_[0] = c0;
  buf_[1] = c1;
  buf_[2] = c2;
  buf_[3] = c3;
  pos_ = 0;
  if (++ctr_lo_ == 0) ++ctr_hi_;
}

double RngStream::next_normal() noexcept {
  const ZigguratTables& z = ziggurat();
  constexpr double kR = 3.442619855899;
  constexpr double kRinv = 1.0 / kR;
  for (;;) {
    const std::int64_t hz = static_cast<std::int64_t>(next_u64());
    unsigned iz = static_cast<unsigned>(hz & 127);
    const std::uint64_t ahz =
        hz < 0 ? 0 - static_cast<std::uint64_t>(hz) : static_cast<std::uint64_t>(hz);
    if (ahz < z.kn[iz]) return static_cast<double>(hz) * z.wn[iz];
    // Slow path: edge of a layer or the tail beyond kR.
    const double x = static_cast<double>(hz) * z.wn[iz];
    if (iz == 0) {
      double xx, y;
      do {
        xx = -std::log(next_open()) * kRinv;
        y = -std::log(next_open());
      } while (y + y < xx * xx);
      return hz > 0 ? kR + xx : -(kR + xx);
    }
    if (z.fn[iz] + next_double() * (z.fn[iz - 1] - z.fn[iz]) <
        std::exp(-0.5 * x * x)) {
      return x;
    }
  }
}

std::uint64_t RngStream::mix(std::uint64_t a, std::uint64_t b) noexcept {
  // splitmix64 finalizer over the combined words.
  std::uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace mtilt
