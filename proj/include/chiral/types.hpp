#ifndef CHIRAL_TYPES_HPP
#define CHIRAL_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chiral {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

// Natural units: wavelength and single-emitter decay rate are both 1.
inline constexpr double kWavelength = 1.0;
inline constexpr double kGamma0 = 1.0;
inline constexpr double kWavenumber = 2.0 * kPi / kWavelength;

enum class Spin : int { Up = 0, Down = 1 };

inline constexpr Spin flipped(Spin s) { return s == Spin::Up ? Spin::Down : Spin::Up; }
inline const char* to_string(Spin s) { return s == Spin::Up ? "up" : "down"; }

// Site-major ordering of the single-excitation basis: index = 2*site + spin.
inline constexpr Eigen::Index basis_index(Eigen::Index site, Spin s) {
    return 2 * site + static_cast<Eigen::Index>(s);
}

// Input that fails validation (bad parameters, malformed files, bad indices).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chiral

#endif
