#pragma once

// Default numerical tolerances shared by every module. Individual operations
// accept overrides where the contract allows it; nothing else hardcodes these.

namespace channellab::tol {

inline constexpr double eig_residual = 1e-9;      // relative to matrix 2-norm scale
inline constexpr double hermiticity = 1e-9;
inline constexpr double psd_clip = 1e-9;          // eigenvalues above -psd_clip are clipped to 0
inline constexpr double psd_reject = 1e-6;        // eigenvalues below -psd_reject are an error
inline constexpr double support = 1e-10;          // eigenvalue threshold for matrix support
inline constexpr double trace = 1e-9;
inline constexpr double completeness = 1e-8;      // ||sum K^dag K - I||_max
inline constexpr double choi_psd = 1e-8;
inline constexpr double cluster = 1e-7;           // eigenvalues closer than this are one cluster
inline constexpr double peripheral = 1e-7;        // |lambda| > 1 - peripheral
inline constexpr double unitarity = 1e-9;
inline constexpr double bath_norm = 1e-12;
inline constexpr double commutator = 1e-9;
inline constexpr double fixed_point_psd = 1e-6;
inline constexpr double factorizing = 1e-6;       // singular value > 1 - factorizing
inline constexpr double strict_change = 1e-9;
inline constexpr double limit_gap = 1e-6;

}  // namespace channellab::tol
