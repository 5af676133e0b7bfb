#pragma once

namespace pmtol {

// Internal canonical unit is the metre; these helpers keep boundary
// conversions explicit and grep-able.
inline constexpr double from_nm(double v) { return v * 1e-9; }
inline constexpr double from_um(double v) { return v * 1e-6; }
inline constexpr double from_mm(double v) { return v * 1e-3; }
inline constexpr double from_cm(double v) { return v * 1e-2; }

inline constexpr double to_nm(double v) { return v * 1e9; }
inline constexpr double to_um(double v) { return v * 1e6; }
inline constexpr double to_mm(double v) { return v * 1e3; }
inline constexpr double to_cm(double v) { return v * 1e2; }

}  // namespace pmtol
