#ifndef FPDESIGN_RNG_HPP
#define FPDESIGN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace fpdesign {

//! Name of the only generator this build implements. Configs must name the
//! generator so draw streams stay reproducible across implementations:
//! mt19937_64 (output sequence fixed by the C++ standard) with uniforms
//! taken as the top 53 bits and normals from the Box-Muller transform.
inline constexpr const char* kRngName = "mt19937_64/box-muller";

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  //! Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  //! Uniform in (0, 1]; safe as a log argument.
  double uniform01_open_low() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  //! Standard normal via Box-Muller; one uniform pair yields two normals.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_open_low();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  //! Uniform integer in [0, count). count must be positive.
  int uniform_index(int count) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(count));
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline void require_known_rng(const std::string& name) {
  if (name != kRngName)
    throw std::invalid_argument("unknown rng '" + name + "', expected '" +
                                kRngName + "'");
}

}  // namespace fpdesign

#endif  // FPDESIGN_RNG_HPP
