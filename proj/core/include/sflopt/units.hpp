#pragma once

#include <cmath>
#include <limits>

namespace sflopt {

// All internal arithmetic is carried out in linear SI units (Hz, W, W/Hz,
// bits, FLOPs, cycles/s, km). dB and dBm appear only at config boundaries.

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

// W/Hz from dBm/Hz, e.g. -174 dBm/Hz -> 3.98e-21 W/Hz.
inline double dbm_per_hz_to_w_per_hz(double dbm_hz) { return dbm_to_watts(dbm_hz); }

// Delay sentinel: a required transfer with zero achievable rate takes forever.
// +inf propagates through max and sum, keeping objective comparisons total.
inline constexpr double infinite_delay = std::numeric_limits<double>::infinity();

}  // namespace sflopt
